#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#include <unistd.h>
#endif

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("IAGREE_CLI");
    REQUIRE_MESSAGE(env != nullptr, "IAGREE_CLI must point at the CLI binary");
    return env;
}

std::string data_dir() {
    const char* env = std::getenv("IAGREE_DATA");
    REQUIRE_MESSAGE(env != nullptr, "IAGREE_DATA must point at the data directory");
    return env;
}

int run(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    int status = std::system(cmd.c_str());
#ifdef __unix__
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing output file " << path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("iagree_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::string str() const { return path.string(); }
};

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

} // namespace

TEST_CASE("build-fs emits the exact step description of a narrow panel") {
    TempDir tmp;
    write_file(tmp.path / "responses.csv",
               "expert_id,profession,factor_id,lo,hi\n"
               "E1,A,q,1,2\n"
               "E2,A,q,1,3\n"
               "E3,A,q,2,4\n");
    int rc = run("build-fs " + tmp.str() + "/responses.csv --out-dir " + tmp.str() + "/out");
    CHECK(rc == 0);
    auto desc = slurp(tmp.path / "out" / "q__A.fs.txt");
    CHECK(desc.find("breakpoints,1.000000,2.000000,3.000000,4.000000") != std::string::npos);
    CHECK(desc.find("cell_grades,0.666667,0.666667,0.333333") != std::string::npos);
    CHECK(desc.find("override,2.000000,1.000000") != std::string::npos);
    CHECK(desc.find("source_count,3") != std::string::npos);

    auto grid = slurp(tmp.path / "out" / "q__A.grid.csv");
    CHECK(grid.find("x,grade") == 0);
}

TEST_CASE("build-fs single expert produces an indicator artifact") {
    TempDir tmp;
    write_file(tmp.path / "responses.csv",
               "expert_id,profession,factor_id,lo,hi\n"
               "E1,A,q,7,9\n");
    CHECK(run("build-fs " + tmp.str() + "/responses.csv --out-dir " + tmp.str() + "/out") == 0);
    auto desc = slurp(tmp.path / "out" / "q__A.fs.txt");
    CHECK(desc.find("breakpoints,7.000000,9.000000") != std::string::npos);
    CHECK(desc.find("cell_grades,1.000000") != std::string::npos);
}

TEST_CASE("exit codes distinguish validation, io and domain failures") {
    TempDir tmp;
    write_file(tmp.path / "empty.csv", "");
    CHECK(run("build-fs " + tmp.str() + "/empty.csv --out-dir " + tmp.str()) == 2);

    CHECK(run("build-fs " + tmp.str() + "/nope.csv --out-dir " + tmp.str()) == 3);

    // factor with zero-area groups only (all single-point answers)
    write_file(tmp.path / "spikes.csv",
               "expert_id,profession,factor_id,lo,hi\n"
               "E1,A,q,5,\n"
               "E2,B,q,5,5\n");
    CHECK(run("defuzzify " + tmp.str() + "/spikes.csv --out-dir " + tmp.str() + "/out") == 4);

    write_file(tmp.path / "bad_row.csv",
               "expert_id,profession,factor_id,lo,hi\n"
               "E3,R,rainy,6,4\n");
    CHECK(run("build-fs " + tmp.str() + "/bad_row.csv --out-dir " + tmp.str()) == 2);
}

TEST_CASE("similarity output is deterministic byte for byte") {
    TempDir tmp;
    std::string responses = data_dir() + "/demo_responses.csv";
    CHECK(run("similarity " + responses + " --out-dir " + tmp.str() + "/a") == 0);
    CHECK(run("similarity " + responses + " --out-dir " + tmp.str() + "/b") == 0);
    auto a = slurp(tmp.path / "a" / "similarity.csv");
    auto b = slurp(tmp.path / "b" / "similarity.csv");
    CHECK(a == b);
    CHECK(a.find("factor,camera_absence") != std::string::npos);
    CHECK(a.find("profession,FM,HD,R,RS") != std::string::npos);
}

TEST_CASE("moderate reproduces the worked four-driver batch") {
    TempDir tmp;
    int rc = run("moderate " + data_dir() + "/demo_registry.csv " + data_dir() +
                 "/demo_batch.csv --out-dir " + tmp.str());
    CHECK(rc == 0);
    auto out = slurp(tmp.path / "moderated.csv");
    CHECK(out.find("driver_id,base_score,joint_effect,multiplier,moderated_score") == 0);
    CHECK(out.find("A,83.09,3.11,0.764,63.48") != std::string::npos);
    CHECK(out.find("B,83.09,5.67,1.084,90.07") != std::string::npos);
    CHECK(out.find("C,75.24,5.19,1.024,77.05") != std::string::npos);
    CHECK(out.find("D,75.24,5.89,1.111,83.59") != std::string::npos);
    auto audit = slurp(tmp.path / "moderated_audit.txt");
    CHECK(audit.find("driver A") != std::string::npos);
    CHECK(audit.find("impact high_time_pressure = 2.45") != std::string::npos);
}

TEST_CASE("moderate with degenerate bounds [1,1] leaves scores unchanged") {
    TempDir tmp;
    int rc = run("moderate " + data_dir() + "/demo_registry.csv " + data_dir() +
                 "/demo_batch.csv --norm-lo 1 --norm-hi 1 --out-dir " + tmp.str());
    CHECK(rc == 0);
    auto out = slurp(tmp.path / "moderated.csv");
    CHECK(out.find("A,83.09,3.11,1.000,83.09") != std::string::npos);
    CHECK(out.find("C,75.24,5.19,1.000,75.24") != std::string::npos);
}

TEST_CASE("moderate rejects unknown condition labels with exit 2") {
    TempDir tmp;
    write_file(tmp.path / "batch.csv",
               "driver_id,base_score,conditions\n"
               "X,50,snowy\n");
    CHECK(run("moderate " + data_dir() + "/demo_registry.csv " + tmp.str() +
              "/batch.csv --out-dir " + tmp.str()) == 2);
}

TEST_CASE("defuzzify piped into moderate reproduces a calibrated batch") {
    // Single-profession, single-expert panels defuzzify to the interval
    // midpoints, so this panel yields the exact six registry constants.
    TempDir tmp;
    write_file(tmp.path / "calibration.csv",
               "expert_id,profession,factor_id,lo,hi\n"
               "E1,P,high_time_pressure,1,3.9\n"
               "E1,P,low_time_pressure,6.1,9\n"
               "E1,P,camera_absence,2,6.72\n"
               "E1,P,camera_presence,2.52,9\n"
               "E1,P,rainy,1,6.56\n"
               "E1,P,energetic,3.04,9\n");
    CHECK(run("defuzzify " + tmp.str() + "/calibration.csv --out-dir " + tmp.str()) == 0);
    auto impacts = slurp(tmp.path / "impacts.csv");
    CHECK(impacts.find("high_time_pressure,2.45") != std::string::npos);
    CHECK(impacts.find("low_time_pressure,7.55") != std::string::npos);
    CHECK(impacts.find("camera_absence,4.36") != std::string::npos);
    CHECK(impacts.find("camera_presence,5.76") != std::string::npos);
    CHECK(impacts.find("rainy,3.78") != std::string::npos);
    CHECK(impacts.find("energetic,6.02") != std::string::npos);

    int rc = run("moderate " + tmp.str() + "/impacts.csv " + data_dir() +
                 "/demo_batch.csv --out-dir " + tmp.str() + "/mod");
    CHECK(rc == 0);
    auto out = slurp(tmp.path / "mod" / "moderated.csv");
    CHECK(out.find("A,83.09,3.11,0.764,63.48") != std::string::npos);
    CHECK(out.find("B,83.09,5.67,1.084,90.07") != std::string::npos);
    CHECK(out.find("D,75.24,5.89,1.111,83.59") != std::string::npos);
}

TEST_CASE("defuzzify piped into moderate composes") {
    TempDir tmp;
    CHECK(run("defuzzify " + data_dir() + "/demo_responses.csv --out-dir " + tmp.str()) == 0);
    auto impacts = slurp(tmp.path / "impacts.csv");
    CHECK(impacts.find("condition_label,impact_score") == 0);
    for (const char* label : {"high_time_pressure", "low_time_pressure", "camera_absence",
                              "camera_presence", "rainy", "energetic"}) {
        CHECK(impacts.find(label) != std::string::npos);
    }
    int rc = run("moderate " + tmp.str() + "/impacts.csv " + data_dir() +
                 "/demo_batch.csv --out-dir " + tmp.str() + "/mod");
    CHECK(rc == 0);
    auto out = slurp(tmp.path / "mod" / "moderated.csv");
    CHECK(out.find("A,83.09,") != std::string::npos);
    CHECK(out.find("D,75.24,") != std::string::npos);
}

TEST_CASE("export-plot writes the secondary-grade grid") {
    TempDir tmp;
    int rc = run("export-plot " + data_dir() + "/demo_responses.csv --factor rainy --step 0.5 "
                 "--out-dir " + tmp.str());
    CHECK(rc == 0);
    auto grid = slurp(tmp.path / "rainy_zgt2.csv");
    CHECK(grid.find("x,y,z") == 0);
    // four professions -> z levels are quarters
    CHECK(grid.find(",0.750000") != std::string::npos);
    // y = 0 rows carry z = 1
    CHECK(grid.find("1.000000,0.000000,1.000000") != std::string::npos);

    CHECK(run("export-plot " + data_dir() + "/demo_responses.csv --factor nope --out-dir " +
              tmp.str()) == 2);
}

TEST_CASE("build-fs honors the factor manifest") {
    TempDir tmp;
    int rc = run("build-fs " + data_dir() + "/demo_responses.csv --factors " + data_dir() +
                 "/demo_factors.csv --factor rainy --profession HD --out-dir " + tmp.str());
    CHECK(rc == 0);
    auto desc = slurp(tmp.path / "rainy__HD.fs.txt");
    CHECK(desc.find("category,weather") != std::string::npos);
    CHECK(desc.find("display_name,Rainy weather") != std::string::npos);
}

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iagree/elicitation.hpp"
#include "iagree/errors.hpp"
#include "iagree/moderation.hpp"
#include "iagree/numeric.hpp"

namespace fs = std::filesystem;
using namespace iagree;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

struct CommonOptions {
    double scale_min = 1.0;
    double scale_max = 9.0;
    std::string out_dir = ".";

    RatingScale scale() const { return {scale_min, scale_max}; }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--scale-min", opts.scale_min, "Lower end of the rating scale")
        ->capture_default_str();
    cmd->add_option("--scale-max", opts.scale_max, "Upper end of the rating scale")
        ->capture_default_str();
    cmd->add_option("--out-dir", opts.out_dir, "Directory for output files")
        ->capture_default_str();
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

fs::path prepare_out_dir(const CommonOptions& opts) {
    fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

std::string sanitize(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
    }
    return out;
}

std::map<std::string, FactorInfo> manifest_lookup(const std::string& path) {
    std::map<std::string, FactorInfo> out;
    if (path.empty()) return out;
    for (auto& info : load_factor_manifest_file(path)) out[info.factor_id] = info;
    return out;
}

// --- build-fs -------------------------------------------------------------

struct BuildFsOptions {
    CommonOptions common;
    std::string responses;
    std::string factor;
    std::string profession;
    std::string factors_file;
    double step = 0.1;
};

int run_build_fs(const BuildFsOptions& opts) {
    auto panel = parse_responses_file(opts.responses, opts.common.scale());
    auto manifest = manifest_lookup(opts.factors_file);
    auto dir = prepare_out_dir(opts.common);

    std::vector<ResponsePanel::GroupKey> selected;
    for (const auto& [key, ivs] : panel.index()) {
        if (!opts.factor.empty() && key.first != opts.factor) continue;
        if (!opts.profession.empty() && key.second != opts.profession) continue;
        selected.push_back(key);
    }
    if (selected.empty()) {
        throw ValidationError("no (factor, profession) groups match the selection");
    }

    for (const auto& [factor, profession] : selected) {
        auto t1 = build_group_fs(panel, factor, profession);
        std::string stem = sanitize(factor) + "__" + sanitize(profession);

        auto desc = open_output(dir / (stem + ".fs.txt"));
        desc << "factor," << factor << "\n";
        desc << "profession," << profession << "\n";
        if (auto it = manifest.find(factor); it != manifest.end()) {
            desc << "category," << it->second.category << "\n";
            desc << "display_name," << it->second.display_name << "\n";
        }
        desc << "source_count," << t1.source_count << "\n";
        desc << "breakpoints";
        for (double bp : t1.fn.breakpoints()) desc << ',' << format_fixed(bp, 6);
        desc << "\ncell_grades";
        for (double g : t1.fn.cell_grades()) desc << ',' << format_fixed(g, 6);
        desc << "\n";
        for (const auto& ov : t1.fn.overrides()) {
            desc << "override," << format_fixed(ov.x, 6) << ',' << format_fixed(ov.grade, 6)
                 << "\n";
        }

        auto grid = open_output(dir / (stem + ".grid.csv"));
        grid << "x,grade\n";
        for (const auto& row : sample(t1.fn, opts.step)) {
            grid << format_fixed(row.x, 6) << ',' << format_fixed(row.grade, 6) << "\n";
        }
    }
    return 0;
}

// --- similarity -----------------------------------------------------------

int run_similarity(const CommonOptions& common, const std::string& responses) {
    auto panel = parse_responses_file(responses, common.scale());
    auto dir = prepare_out_dir(common);
    auto out = open_output(dir / "similarity.csv");
    for (const auto& factor : panel.factors()) {
        auto matrix = similarity_matrix(panel, factor);
        out << "factor," << factor << "\n";
        out << "profession";
        for (const auto& prof : matrix.professions) out << ',' << prof;
        out << "\n";
        for (std::size_t i = 0; i < matrix.professions.size(); ++i) {
            out << matrix.professions[i];
            for (double v : matrix.values[i]) out << ',' << format_fixed(v, 6);
            out << "\n";
        }
    }
    return 0;
}

// --- defuzzify --------------------------------------------------------------

int run_defuzzify(const CommonOptions& common, const std::string& responses) {
    auto panel = parse_responses_file(responses, common.scale());
    auto dir = prepare_out_dir(common);
    ModerationConfig cfg;
    cfg.scale = common.scale();

    bool any_degenerate = false;
    auto out = open_output(dir / "impacts.csv");
    out << "condition_label,impact_score\n";
    for (const auto& factor : panel.factors()) {
        std::vector<ZSliceSet::Group> groups;
        for (const auto& prof : panel.professions_for(factor)) {
            groups.push_back({prof, build_group_fs(panel, factor, prof)});
        }
        try {
            double impact = defuzzify_factor(ZSliceSet(std::move(groups)), cfg);
            out << factor << ',' << format_fixed(impact, cfg.round_impacts_dp) << "\n";
        } catch (const DomainError& err) {
            std::cerr << "warning: factor '" << factor << "' skipped: " << err.what() << "\n";
            any_degenerate = true;
        }
    }
    return any_degenerate ? kExitDomain : 0;
}

// --- moderate ---------------------------------------------------------------

struct ModerateOptions {
    CommonOptions common;
    std::string registry;
    std::string batch;
    double norm_lo = 0.5;
    double norm_hi = 1.5;
    std::string ensemble = "mean";
    std::vector<double> weights;
};

int run_moderate(const ModerateOptions& opts) {
    ModerationConfig cfg;
    cfg.scale = opts.common.scale();
    cfg.norm_lo = opts.norm_lo;
    cfg.norm_hi = opts.norm_hi;
    cfg.ensemble = ensemble_from_name(opts.ensemble);
    cfg.weights = opts.weights;
    cfg.validate();

    auto registry = ImpactRegistry::load_csv_file(opts.registry, cfg.scale);
    auto rows = load_batch_csv_file(opts.batch);
    auto results = moderate_batch(rows, registry, cfg);

    auto dir = prepare_out_dir(opts.common);
    auto out = open_output(dir / "moderated.csv");
    out << "driver_id,base_score,joint_effect,multiplier,moderated_score\n";
    auto audit = open_output(dir / "moderated_audit.txt");
    for (const auto& [driver_id, res] : results) {
        out << driver_id << ',' << format_fixed(res.base_score, cfg.round_score_dp) << ','
            << format_fixed(res.joint_effect, cfg.round_impacts_dp) << ','
            << format_fixed(res.multiplier, cfg.round_multiplier_dp) << ','
            << format_fixed(res.moderated_score, cfg.round_score_dp) << "\n";
        audit << "driver " << driver_id << "\n";
        for (const auto& line : res.audit) audit << "  " << line << "\n";
    }
    return 0;
}

// --- export-plot ------------------------------------------------------------

int run_export_plot(const CommonOptions& common, const std::string& responses,
                    const std::string& factor, double step) {
    auto panel = parse_responses_file(responses, common.scale());
    std::vector<ZSliceSet::Group> groups;
    for (const auto& prof : panel.professions_for(factor)) {
        groups.push_back({prof, build_group_fs(panel, factor, prof)});
    }
    if (groups.empty()) {
        throw ValidationError("unknown factor '" + factor + "'");
    }
    ZSliceSet z(std::move(groups));
    auto dir = prepare_out_dir(common);
    auto out = open_output(dir / (sanitize(factor) + "_zgt2.csv"));
    out << "x,y,z\n";
    for (const auto& row : sample(z, step)) {
        out << format_fixed(row.x, 6) << ',' << format_fixed(row.y, 6) << ','
            << format_fixed(row.z, 6) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-agreement fuzzy modelling and risk-score moderation"};
    app.require_subcommand(1);

    BuildFsOptions build_opts;
    auto* build = app.add_subcommand(
        "build-fs", "Build per-(factor, profession) agreement sets from responses");
    build->add_option("responses", build_opts.responses, "Response CSV")->required();
    build->add_option("--factor", build_opts.factor, "Only this factor");
    build->add_option("--profession", build_opts.profession, "Only this profession");
    build->add_option("--factors", build_opts.factors_file, "Factor manifest CSV");
    build->add_option("--step", build_opts.step, "Sampling step")->capture_default_str();
    add_common(build, build_opts.common);

    CommonOptions sim_common;
    std::string sim_responses;
    auto* sim = app.add_subcommand("similarity",
                                   "Per-factor Jaccard agreement tables across professions");
    sim->add_option("responses", sim_responses, "Response CSV")->required();
    add_common(sim, sim_common);

    CommonOptions defuzz_common;
    std::string defuzz_responses;
    auto* defuzz = app.add_subcommand(
        "defuzzify", "Aggregate professions per factor and emit crisp impact scores");
    defuzz->add_option("responses", defuzz_responses, "Response CSV")->required();
    add_common(defuzz, defuzz_common);

    ModerateOptions mod_opts;
    auto* mod = app.add_subcommand("moderate", "Moderate base risk scores with impact scores");
    mod->add_option("registry", mod_opts.registry, "Impact registry CSV")->required();
    mod->add_option("batch", mod_opts.batch, "Moderation batch CSV")->required();
    mod->add_option("--norm-lo", mod_opts.norm_lo, "Lower multiplier bound")
        ->capture_default_str();
    mod->add_option("--norm-hi", mod_opts.norm_hi, "Upper multiplier bound")
        ->capture_default_str();
    mod->add_option("--ensemble", mod_opts.ensemble, "mean, min or weighted")
        ->capture_default_str();
    mod->add_option("--weights", mod_opts.weights, "Weights for the weighted ensemble");
    add_common(mod, mod_opts.common);

    CommonOptions plot_common;
    std::string plot_responses;
    std::string plot_factor;
    double plot_step = 0.1;
    auto* plot = app.add_subcommand("export-plot",
                                    "Export the zGT2 secondary-grade grid of one factor");
    plot->add_option("responses", plot_responses, "Response CSV")->required();
    plot->add_option("--factor", plot_factor, "Factor to export")->required();
    plot->add_option("--step", plot_step, "Grid step for both axes")->capture_default_str();
    add_common(plot, plot_common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build_fs(build_opts);
        if (sim->parsed()) return run_similarity(sim_common, sim_responses);
        if (defuzz->parsed()) return run_defuzzify(defuzz_common, defuzz_responses);
        if (mod->parsed()) return run_moderate(mod_opts);
        if (plot->parsed()) {
            return run_export_plot(plot_common, plot_responses, plot_factor, plot_step);
        }
    } catch (const ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const IoError& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return kExitIo;
    } catch (const DomainError& err) {
        std::cerr << "domain error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

#include "iagree/elicitation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "iagree/numeric.hpp"

namespace iagree {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + what + " '" + field +
                              "' is not a number");
    }
    return value;
}

// Quartile by linear interpolation at rank (n-1)p over sorted data.
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted.front();
    double rank = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(rank));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

int rating_of_midpoint(double mid, const RatingScale& scale) {
    double lower = std::floor(mid);
    double frac = mid - lower;
    int down = static_cast<int>(lower);
    if (std::fabs(frac - 0.5) < 1e-9) {
        // Half-way midpoints round toward the scale midpoint.
        double center = scale.midpoint();
        if (std::fabs((lower + 1.0) - center) < std::fabs(lower - center)) return down + 1;
        return down;
    }
    return frac > 0.5 ? down + 1 : down;
}

std::string format_rating(double v) {
    std::ostringstream out;
    out << v;  // ratings come from short decimal text; default precision round-trips them
    return out.str();
}

} // namespace

ResponsePanel::ResponsePanel(std::vector<ResponseRecord> records, RatingScale scale)
    : records_(std::move(records)), scale_(scale) {
    scale_.validate();
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& rec = records_[i];
        std::string where = "record #" + std::to_string(i + 1) + " (expert '" + rec.expert_id +
                            "', factor '" + rec.factor_id + "')";
        if (rec.expert_id.empty()) throw ValidationError(where + ": empty expert_id");
        if (rec.profession.empty()) throw ValidationError(where + ": empty profession");
        if (rec.factor_id.empty()) throw ValidationError(where + ": empty factor_id");
        validate_interval(rec.response, scale_, where);
        if (rec.experience_years && *rec.experience_years < 0.0) {
            throw ValidationError(where + ": negative experience_years");
        }
        if (!seen.emplace(rec.expert_id, rec.factor_id).second) {
            throw ValidationError(where + ": duplicate (expert, factor) response");
        }
        index_[{rec.factor_id, rec.profession}].push_back(rec.response);
    }
}

ResponsePanel ResponsePanel::from_records(std::vector<ResponseRecord> records, RatingScale scale) {
    return ResponsePanel(std::move(records), scale);
}

const std::vector<Interval>& ResponsePanel::intervals(const std::string& factor,
                                                      const std::string& profession) const {
    auto it = index_.find({factor, profession});
    if (it == index_.end()) {
        std::ostringstream msg;
        msg << "no responses for (factor '" << factor << "', profession '" << profession
            << "'); available:";
        for (const auto& [key, ivs] : index_) {
            msg << " (" << key.first << ", " << key.second << ")";
        }
        throw ValidationError(msg.str());
    }
    return it->second;
}

bool ResponsePanel::has_group(const std::string& factor, const std::string& profession) const {
    return index_.count({factor, profession}) > 0;
}

std::vector<std::string> ResponsePanel::factors() const {
    std::set<std::string> out;
    for (const auto& [key, ivs] : index_) out.insert(key.first);
    return {out.begin(), out.end()};
}

std::vector<std::string> ResponsePanel::professions() const {
    std::set<std::string> out;
    for (const auto& [key, ivs] : index_) out.insert(key.second);
    return {out.begin(), out.end()};
}

std::vector<std::string> ResponsePanel::professions_for(const std::string& factor) const {
    std::set<std::string> out;
    for (const auto& [key, ivs] : index_) {
        if (key.first == factor) out.insert(key.second);
    }
    return {out.begin(), out.end()};
}

ResponsePanel parse_responses(std::istream& in, const RatingScale& scale) {
    scale.validate();
    std::vector<ResponseRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool has_experience = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto fields = split_fields(stripped);
        if (!header_seen) {
            if (fields.size() == 5 && fields[0] == "expert_id" && fields[1] == "profession" &&
                fields[2] == "factor_id" && fields[3] == "lo" && fields[4] == "hi") {
                has_experience = false;
            } else if (fields.size() == 6 && fields[0] == "expert_id" &&
                       fields[1] == "profession" && fields[2] == "factor_id" &&
                       fields[3] == "lo" && fields[4] == "hi" &&
                       fields[5] == "experience_years") {
                has_experience = true;
            } else {
                throw ValidationError(
                    "line " + std::to_string(line_no) +
                    ": expected header 'expert_id,profession,factor_id,lo,hi[,experience_years]'");
            }
            header_seen = true;
            continue;
        }
        std::size_t expected = has_experience ? 6 : 5;
        if (fields.size() != expected) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(expected) + " fields, got " +
                                  std::to_string(fields.size()));
        }
        ResponseRecord rec;
        rec.expert_id = fields[0];
        rec.profession = fields[1];
        rec.factor_id = fields[2];
        double lo = parse_number(fields[3], line_no, "lo");
        double hi = fields[4].empty() ? lo : parse_number(fields[4], line_no, "hi");
        rec.response = Interval{lo, hi};
        if (has_experience && !fields[5].empty()) {
            rec.experience_years = parse_number(fields[5], line_no, "experience_years");
        }
        if (rec.response.lo > rec.response.hi) {
            throw ValidationError("line " + std::to_string(line_no) + ": lo " + fields[3] +
                                  " > hi " + fields[4]);
        }
        if (!scale.contains(rec.response.lo) || !scale.contains(rec.response.hi)) {
            throw ValidationError("line " + std::to_string(line_no) + ": rating outside scale");
        }
        records.push_back(std::move(rec));
    }
    if (!header_seen || records.empty()) throw ValidationError("empty panel");
    return ResponsePanel::from_records(std::move(records), scale);
}

ResponsePanel parse_responses_file(const std::string& path, const RatingScale& scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open responses file '" + path + "'");
    return parse_responses(in, scale);
}

void serialize_responses(const ResponsePanel& panel, std::ostream& out) {
    bool any_experience = false;
    for (const auto& rec : panel.records()) {
        if (rec.experience_years) any_experience = true;
    }
    out << "expert_id,profession,factor_id,lo,hi";
    if (any_experience) out << ",experience_years";
    out << "\n";
    for (const auto& rec : panel.records()) {
        out << rec.expert_id << ',' << rec.profession << ',' << rec.factor_id << ','
            << format_rating(rec.response.lo) << ',' << format_rating(rec.response.hi);
        if (any_experience) {
            out << ',';
            if (rec.experience_years) out << format_rating(*rec.experience_years);
        }
        out << "\n";
    }
}

AgreementT1 build_group_fs(const ResponsePanel& panel, const std::string& factor,
                           const std::string& profession) {
    return build_iaa(panel.intervals(factor, profession), panel.scale());
}

SimilarityMatrix similarity_matrix(const ResponsePanel& panel, const std::string& factor) {
    auto professions = panel.professions_for(factor);
    if (professions.size() < 2) {
        throw ValidationError("factor '" + factor + "' needs >= 2 professions for a similarity "
                              "matrix, found " + std::to_string(professions.size()));
    }
    std::vector<MembershipFunction> sets;
    sets.reserve(professions.size());
    for (const auto& prof : professions) {
        sets.push_back(build_group_fs(panel, factor, prof).fn);
    }
    SimilarityMatrix out;
    out.factor_id = factor;
    out.professions = professions;
    out.values.assign(professions.size(), std::vector<double>(professions.size(), 1.0));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            double sim = jaccard(sets[i], sets[j]);
            out.values[i][j] = sim;
            out.values[j][i] = sim;
        }
    }
    return out;
}

PanelSummary summarize(const ResponsePanel& panel) {
    if (panel.records().empty()) throw ValidationError("empty panel");
    PanelSummary out;
    for (const auto& [key, intervals] : panel.index()) {
        GroupSummary g;
        g.factor_id = key.first;
        g.profession = key.second;
        g.count = static_cast<int>(intervals.size());

        std::vector<double> midpoints;
        midpoints.reserve(intervals.size());
        double width_sum = 0.0;
        std::map<int, int> rating_counts;
        for (const auto& iv : intervals) {
            midpoints.push_back(iv.midpoint());
            width_sum += iv.width();
            ++rating_counts[rating_of_midpoint(iv.midpoint(), panel.scale())];
        }
        std::sort(midpoints.begin(), midpoints.end());
        g.midpoint_min = midpoints.front();
        g.midpoint_max = midpoints.back();
        g.q1 = quantile(midpoints, 0.25);
        g.median = quantile(midpoints, 0.5);
        g.q3 = quantile(midpoints, 0.75);
        g.mean_width = width_sum / static_cast<double>(intervals.size());

        int best_rating = 0;
        int best_count = -1;
        double center = panel.scale().midpoint();
        for (const auto& [rating, count] : rating_counts) {
            bool better = count > best_count;
            if (count == best_count) {
                double d_new = std::fabs(rating - center);
                double d_old = std::fabs(best_rating - center);
                better = d_new < d_old || (d_new == d_old && rating < best_rating);
            }
            if (better) {
                best_rating = rating;
                best_count = count;
            }
        }
        g.mode = best_rating;
        out.groups.push_back(std::move(g));
    }
    return out;
}

namespace {

const std::set<std::string>& factor_categories() {
    static const std::set<std::string> cats = {"affective", "work_life", "in_vehicle_tech",
                                               "weather"};
    return cats;
}

} // namespace

std::vector<FactorInfo> load_factor_manifest(std::istream& in) {
    std::vector<FactorInfo> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto fields = split_fields(stripped);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "factor_id" || fields[1] != "category" ||
                fields[2] != "display_name") {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": expected header 'factor_id,category,display_name'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected 3 fields");
        }
        if (fields[0].empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty factor_id");
        }
        if (!factor_categories().count(fields[1])) {
            throw ValidationError("line " + std::to_string(line_no) + ": unknown category '" +
                                  fields[1] + "'");
        }
        if (!seen.insert(fields[0]).second) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate factor_id '" +
                                  fields[0] + "'");
        }
        out.push_back({fields[0], fields[1], fields[2]});
    }
    if (!header_seen) throw ValidationError("empty factor manifest");
    return out;
}

std::vector<FactorInfo> load_factor_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open factor manifest '" + path + "'");
    return load_factor_manifest(in);
}

} // namespace iagree

#include "iagree/moderation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
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

std::vector<std::string> split_on(const std::string& line, char sep) {
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

double normalize_raw(double joint, const ModerationConfig& cfg) {
    return cfg.norm_lo + (joint - cfg.scale.min) * (cfg.norm_hi - cfg.norm_lo) / cfg.scale.span();
}

} // namespace

EnsembleStrategy ensemble_from_name(const std::string& name) {
    if (name == "mean") return EnsembleStrategy::mean;
    if (name == "min") return EnsembleStrategy::min;
    if (name == "weighted" || name == "weighted_mean") return EnsembleStrategy::weighted_mean;
    if (name == "fuzzy_rules") return EnsembleStrategy::fuzzy_rules;
    if (name == "bayes") return EnsembleStrategy::bayes;
    throw ValidationError("unknown ensemble strategy '" + name +
                          "' (expected mean, min or weighted)");
}

std::string ensemble_name(EnsembleStrategy s) {
    switch (s) {
        case EnsembleStrategy::mean: return "mean";
        case EnsembleStrategy::min: return "min";
        case EnsembleStrategy::weighted_mean: return "weighted_mean";
        case EnsembleStrategy::fuzzy_rules: return "fuzzy_rules";
        case EnsembleStrategy::bayes: return "bayes";
    }
    return "unknown";
}

void ModerationConfig::validate() const {
    scale.validate();
    if (!(norm_lo <= norm_hi)) {
        throw ValidationError("normalization bounds need norm_lo <= norm_hi");
    }
    if (round_impacts_dp < 0 || round_multiplier_dp < 0 || round_score_dp < 0) {
        throw ValidationError("rounding precisions must be >= 0");
    }
    if (!(clamp_lo < clamp_hi)) {
        throw ValidationError("clamp range needs lower < upper");
    }
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("ensemble weights must be nonnegative");
    }
}

ImpactRegistry::ImpactRegistry(RatingScale scale) : scale_(scale) { scale_.validate(); }

void ImpactRegistry::add(const std::string& condition, double impact) {
    if (condition.empty()) throw ValidationError("empty condition label");
    if (!scale_.contains(impact)) {
        std::ostringstream msg;
        msg << "impact " << impact << " for '" << condition << "' outside the scale ["
            << scale_.min << ", " << scale_.max << "]";
        throw ValidationError(msg.str());
    }
    scores_[condition] = impact;
}

double ImpactRegistry::at(const std::string& condition) const {
    auto it = scores_.find(condition);
    if (it == scores_.end()) {
        std::ostringstream msg;
        msg << "unknown condition '" << condition << "'; known:";
        for (const auto& [label, score] : scores_) msg << " " << label;
        throw ValidationError(msg.str());
    }
    return it->second;
}

ImpactRegistry ImpactRegistry::load_csv(std::istream& in, RatingScale scale) {
    ImpactRegistry registry(scale);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto fields = split_on(stripped, ',');
        if (!header_seen) {
            if (fields.size() != 2 || fields[0] != "condition_label" ||
                fields[1] != "impact_score") {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": expected header 'condition_label,impact_score'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 2) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected 2 fields");
        }
        if (registry.contains(fields[0])) {
            throw ValidationError("line " + std::to_string(line_no) + ": duplicate condition '" +
                                  fields[0] + "'");
        }
        registry.add(fields[0], parse_number(fields[1], line_no, "impact_score"));
    }
    if (!header_seen) throw ValidationError("empty impact registry");
    return registry;
}

ImpactRegistry ImpactRegistry::load_csv_file(const std::string& path, RatingScale scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open impact registry '" + path + "'");
    return load_csv(in, scale);
}

void ImpactRegistry::save_csv(std::ostream& out) const {
    out << "condition_label,impact_score\n";
    for (const auto& [label, score] : scores_) {
        out << label << ',' << format_fixed(score, 2) << "\n";
    }
}

double defuzzify_factor(const ZSliceSet& z, const ModerationConfig& cfg) {
    cfg.validate();
    return round_dp(centroid_zgt2(z), cfg.round_impacts_dp);
}

double merge_impacts(const std::vector<double>& scores, const ModerationConfig& cfg) {
    cfg.validate();
    if (scores.empty()) throw ValidationError("nothing to merge: empty impact list");
    for (double s : scores) {
        if (!cfg.scale.contains(s)) {
            throw ValidationError("impact score outside the rating scale");
        }
    }
    switch (cfg.ensemble) {
        case EnsembleStrategy::mean:
            return std::accumulate(scores.begin(), scores.end(), 0.0) /
                   static_cast<double>(scores.size());
        case EnsembleStrategy::min:
            return *std::min_element(scores.begin(), scores.end());
        case EnsembleStrategy::weighted_mean: {
            if (cfg.weights.size() != scores.size()) {
                throw ValidationError("weighted_mean needs one weight per impact score (" +
                                      std::to_string(cfg.weights.size()) + " weights, " +
                                      std::to_string(scores.size()) + " scores)");
            }
            double wsum = std::accumulate(cfg.weights.begin(), cfg.weights.end(), 0.0);
            if (wsum <= 0.0) throw ValidationError("weighted_mean weights must not all be zero");
            double acc = 0.0;
            for (std::size_t i = 0; i < scores.size(); ++i) acc += cfg.weights[i] * scores[i];
            return acc / wsum;
        }
        case EnsembleStrategy::fuzzy_rules:
        case EnsembleStrategy::bayes:
            throw ValidationError("ensemble strategy '" + ensemble_name(cfg.ensemble) +
                                  "' is a declared slot without an implementation");
    }
    throw ValidationError("unhandled ensemble strategy");
}

double normalize_multiplier(double joint, const ModerationConfig& cfg) {
    cfg.validate();
    if (!cfg.scale.contains(joint)) {
        std::ostringstream msg;
        msg << "joint effect " << joint << " outside the scale [" << cfg.scale.min << ", "
            << cfg.scale.max << "]";
        throw DomainError(msg.str());
    }
    return round_dp(normalize_raw(joint, cfg), cfg.round_multiplier_dp);
}

ModerationResult moderate(double base_score, const std::vector<std::string>& conditions,
                          const ImpactRegistry& registry, const ModerationConfig& cfg) {
    cfg.validate();
    if (conditions.empty()) throw ValidationError("nothing to moderate: empty condition list");
    if (!(base_score >= 0.0 && base_score <= 100.0)) {
        std::ostringstream msg;
        msg << "base score " << base_score << " outside [0, 100]";
        throw ValidationError(msg.str());
    }

    ModerationResult res;
    res.base_score = base_score;
    res.conditions = conditions;
    res.impact_scores.reserve(conditions.size());
    for (const auto& cond : conditions) {
        double impact = registry.at(cond);
        res.impact_scores.push_back(impact);
        res.audit.push_back("impact " + cond + " = " + format_fixed(impact, cfg.round_impacts_dp));
    }

    double joint_raw = merge_impacts(res.impact_scores, cfg);
    res.joint_effect = round_dp(joint_raw, cfg.round_impacts_dp);
    res.audit.push_back("joint effect (" + ensemble_name(cfg.ensemble) + ") = " +
                        format_fixed(joint_raw, 6) + " reported as " +
                        format_fixed(res.joint_effect, cfg.round_impacts_dp));

    double mult_raw = normalize_raw(res.joint_effect, cfg);
    res.multiplier = normalize_multiplier(res.joint_effect, cfg);
    res.audit.push_back("multiplier: [" + format_fixed(cfg.scale.min, 0) + ", " +
                        format_fixed(cfg.scale.max, 0) + "] -> [" +
                        format_fixed(cfg.norm_lo, 2) + ", " + format_fixed(cfg.norm_hi, 2) +
                        "] maps " + format_fixed(res.joint_effect, cfg.round_impacts_dp) +
                        " to " + format_fixed(mult_raw, 6) + " rounded to " +
                        format_fixed(res.multiplier, cfg.round_multiplier_dp));

    double product = base_score * res.multiplier;
    double rounded = round_dp(product, cfg.round_score_dp);
    res.moderated_score = clamp_to(rounded, cfg.clamp_lo, cfg.clamp_hi);
    std::string line = "moderated: " + format_fixed(base_score, cfg.round_score_dp) + " x " +
                       format_fixed(res.multiplier, cfg.round_multiplier_dp) + " = " +
                       format_fixed(product, 6) + " rounded to " +
                       format_fixed(rounded, cfg.round_score_dp);
    if (res.moderated_score != rounded) {
        line += " clamped to " + format_fixed(res.moderated_score, cfg.round_score_dp);
    }
    res.audit.push_back(line);
    return res;
}

std::vector<BatchRow> load_batch_csv(std::istream& in) {
    std::vector<BatchRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto fields = split_on(stripped, ',');
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "driver_id" || fields[1] != "base_score" ||
                fields[2] != "conditions") {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": expected header 'driver_id,base_score,conditions'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected 3 fields");
        }
        BatchRow row;
        row.driver_id = fields[0];
        if (row.driver_id.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty driver_id");
        }
        row.base_score = parse_number(fields[1], line_no, "base_score");
        for (const auto& cond : split_on(fields[2], ';')) {
            if (!cond.empty()) row.conditions.push_back(cond);
        }
        if (row.conditions.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty condition list");
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ValidationError("empty moderation batch");
    return rows;
}

std::vector<BatchRow> load_batch_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open moderation batch '" + path + "'");
    return load_batch_csv(in);
}

std::vector<DriverModeration> moderate_batch(const std::vector<BatchRow>& rows,
                                             const ImpactRegistry& registry,
                                             const ModerationConfig& cfg) {
    std::vector<DriverModeration> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        try {
            out.push_back({row.driver_id, moderate(row.base_score, row.conditions, registry, cfg)});
        } catch (const ValidationError& err) {
            throw ValidationError("driver '" + row.driver_id + "': " + err.what());
        }
    }
    return out;
}

} // namespace iagree

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iagree/fuzzy.hpp"

namespace iagree {

/// How per-factor impact scores merge into one joint effect. fuzzy_rules and
/// bayes are declared strategy slots without an implementation.
enum class EnsembleStrategy { mean, min, weighted_mean, fuzzy_rules, bayes };

EnsembleStrategy ensemble_from_name(const std::string& name);
std::string ensemble_name(EnsembleStrategy s);

/// Knobs of the moderation pipeline. Defaults reproduce the worked
/// nine-point-scale setup: [0.5, 1.5] multipliers, impacts and scores at
/// 2 dp, multipliers at 3 dp, moderated scores clamped to [0, 100].
struct ModerationConfig {
    RatingScale scale{};
    EnsembleStrategy ensemble = EnsembleStrategy::mean;
    std::vector<double> weights;  // weighted_mean only, one per merged score
    double norm_lo = 0.5;
    double norm_hi = 1.5;
    int round_impacts_dp = 2;
    int round_multiplier_dp = 3;
    int round_score_dp = 2;
    double clamp_lo = 0.0;
    double clamp_hi = 100.0;

    void validate() const;
};

/// Crisp impact scores per factor condition, each within the rating scale.
class ImpactRegistry {
public:
    explicit ImpactRegistry(RatingScale scale = {});

    void add(const std::string& condition, double impact);
    double at(const std::string& condition) const;  // throws listing known labels
    bool contains(const std::string& condition) const { return scores_.count(condition) > 0; }
    const std::map<std::string, double>& scores() const { return scores_; }
    const RatingScale& scale() const { return scale_; }
    std::size_t size() const { return scores_.size(); }

    /// CSV `condition_label,impact_score`, `#` comments, errors with line numbers.
    static ImpactRegistry load_csv(std::istream& in, RatingScale scale = {});
    static ImpactRegistry load_csv_file(const std::string& path, RatingScale scale = {});
    void save_csv(std::ostream& out) const;

private:
    RatingScale scale_;
    std::map<std::string, double> scores_;
};

/// Centroid of the zGT2 set rounded to cfg.round_impacts_dp.
double defuzzify_factor(const ZSliceSet& z, const ModerationConfig& cfg);

/// Joint effect of several impact scores under the configured ensemble.
/// Exact arithmetic, no rounding.
double merge_impacts(const std::vector<double>& scores, const ModerationConfig& cfg);

/// Maps a joint effect on the rating scale linearly onto
/// [norm_lo, norm_hi], rounded to cfg.round_multiplier_dp.
double normalize_multiplier(double joint, const ModerationConfig& cfg);

/// Full audit of one moderation: which conditions applied, their impacts,
/// the joint effect (reported at round_impacts_dp — this reported value is
/// what gets normalized), the multiplier, and the clamped rounded score.
struct ModerationResult {
    double base_score = 0.0;
    std::vector<std::string> conditions;
    std::vector<double> impact_scores;
    double joint_effect = 0.0;
    double multiplier = 1.0;
    double moderated_score = 0.0;
    std::vector<std::string> audit;
};

/// Moderates one base risk score (0..100) under the given conditions:
/// merge -> normalize -> product, with the configured rounding at each stage.
ModerationResult moderate(double base_score, const std::vector<std::string>& conditions,
                          const ImpactRegistry& registry, const ModerationConfig& cfg);

/// One row of the moderation batch CSV
/// (`driver_id,base_score,cond_1;cond_2;...`).
struct BatchRow {
    std::string driver_id;
    double base_score = 0.0;
    std::vector<std::string> conditions;
};

std::vector<BatchRow> load_batch_csv(std::istream& in);
std::vector<BatchRow> load_batch_csv_file(const std::string& path);

struct DriverModeration {
    std::string driver_id;
    ModerationResult result;
};

std::vector<DriverModeration> moderate_batch(const std::vector<BatchRow>& rows,
                                             const ImpactRegistry& registry,
                                             const ModerationConfig& cfg);

} // namespace iagree

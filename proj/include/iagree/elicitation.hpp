#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iagree/fuzzy.hpp"

namespace iagree {

/// One questionnaire row: an expert's interval-valued rating of one factor.
struct ResponseRecord {
    std::string expert_id;
    std::string profession;
    std::string factor_id;
    Interval response;
    std::optional<double> experience_years;

    friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

/// Validated, indexed table of responses. Immutable after construction;
/// shares freely across concurrent analyses.
class ResponsePanel {
public:
    using GroupKey = std::pair<std::string, std::string>;  // (factor_id, profession)

    static ResponsePanel from_records(std::vector<ResponseRecord> records, RatingScale scale);

    const std::vector<ResponseRecord>& records() const { return records_; }
    const RatingScale& scale() const { return scale_; }
    const std::map<GroupKey, std::vector<Interval>>& index() const { return index_; }

    /// Intervals for one (factor, profession) group in stable input order.
    /// Throws ValidationError listing the available keys when absent.
    const std::vector<Interval>& intervals(const std::string& factor,
                                           const std::string& profession) const;

    bool has_group(const std::string& factor, const std::string& profession) const;
    std::vector<std::string> factors() const;
    std::vector<std::string> professions() const;
    std::vector<std::string> professions_for(const std::string& factor) const;

private:
    ResponsePanel(std::vector<ResponseRecord> records, RatingScale scale);

    std::vector<ResponseRecord> records_;
    RatingScale scale_;
    std::map<GroupKey, std::vector<Interval>> index_;
};

/// Parses the response CSV (header `expert_id,profession,factor_id,lo,hi`
/// with optional trailing `experience_years`; `#` comments). An empty hi
/// field is a certain single-score answer and becomes the degenerate
/// interval [lo, lo]. Errors carry 1-based line numbers.
ResponsePanel parse_responses(std::istream& in, const RatingScale& scale);
ResponsePanel parse_responses_file(const std::string& path, const RatingScale& scale);

/// Writes records back out in the response CSV format (normalized fields).
void serialize_responses(const ResponsePanel& panel, std::ostream& out);

/// IAA T1 set for one (factor, profession) group.
AgreementT1 build_group_fs(const ResponsePanel& panel, const std::string& factor,
                           const std::string& profession);

/// Symmetric per-factor agreement table keyed by profession order.
struct SimilarityMatrix {
    std::string factor_id;
    std::vector<std::string> professions;       // sorted
    std::vector<std::vector<double>> values;    // values[i][j], unit diagonal
};

/// Pairwise Jaccard similarities between the profession T1 sets of one
/// factor. Needs >= 2 professions.
SimilarityMatrix similarity_matrix(const ResponsePanel& panel, const std::string& factor);

/// Distribution statistics for one (factor, profession) group, computed over
/// interval midpoints (quartiles: linear interpolation at (n-1)p).
struct GroupSummary {
    std::string factor_id;
    std::string profession;
    int count = 0;
    double midpoint_min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double midpoint_max = 0.0;
    int mode = 0;            // majority integer rating, see summarize()
    double mean_width = 0.0;
};

struct PanelSummary {
    std::vector<GroupSummary> groups;  // sorted by (factor, profession)
};

/// Per-group statistics. The mode is the most frequent integer rating after
/// rounding midpoints to the nearest rating (rounding ties toward the scale
/// midpoint); modal-count ties resolve to the candidate nearest the scale
/// midpoint, then to the smaller rating.
PanelSummary summarize(const ResponsePanel& panel);

/// Optional factor taxonomy row (`factor_id,category,display_name`).
struct FactorInfo {
    std::string factor_id;
    std::string category;  // affective | work_life | in_vehicle_tech | weather
    std::string display_name;
};

std::vector<FactorInfo> load_factor_manifest(std::istream& in);
std::vector<FactorInfo> load_factor_manifest_file(const std::string& path);

} // namespace iagree

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iagree/errors.hpp"

namespace iagree {

/// Closed rating domain shared by every fuzzy set in an analysis.
/// Default is the nine-point impact scale (1 = strong negative impact,
/// 9 = strong positive impact, 5 = no impact).
struct RatingScale {
    double min = 1.0;
    double max = 9.0;

    double span() const { return max - min; }
    double midpoint() const { return 0.5 * (min + max); }
    bool contains(double x) const { return x >= min && x <= max; }
    void validate() const;

    friend bool operator==(const RatingScale&, const RatingScale&) = default;
};

/// One expert's (minimum, maximum) response to one factor. Degenerate
/// lo == hi encodes a certain single-score answer.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return lo == hi; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Throws ValidationError naming `what` when the interval is inverted or
/// leaves the scale.
void validate_interval(const Interval& iv, const RatingScale& scale, const std::string& what);

/// Measure-zero spike: the closed-coverage grade at a single point where it
/// strictly exceeds both adjacent cells (e.g. all intervals meeting at one x).
struct PointOverride {
    double x = 0.0;
    double grade = 0.0;

    friend bool operator==(const PointOverride&, const PointOverride&) = default;
};

/// Exact piecewise-constant membership function over a rating scale.
///
/// `breakpoints` are strictly increasing; `cell_grades[i]` is the grade on
/// the open interior (breakpoints[i], breakpoints[i+1]). Evaluation at a
/// breakpoint returns the recorded override if present, otherwise the max of
/// the adjacent cells — which equals the closed-interval coverage whenever no
/// override is needed. Outside [front, back] the grade is 0.
///
/// All integrals are closed-form over the cells; overrides have measure zero
/// and never contribute to areas, centroids or similarities.
class MembershipFunction {
public:
    MembershipFunction(RatingScale scale,
                       std::vector<double> breakpoints,
                       std::vector<double> cell_grades,
                       std::vector<PointOverride> overrides = {});

    /// Identically-zero function on the scale.
    static MembershipFunction zero(const RatingScale& scale);

    /// Indicator of a (validated) interval: grade 1 on [lo, hi].
    static MembershipFunction indicator(const Interval& iv, const RatingScale& scale);

    /// Membership grade at x. Throws DomainError when x is outside the scale.
    double membership(double x) const;

    const RatingScale& scale() const { return scale_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& cell_grades() const { return cell_grades_; }
    const std::vector<PointOverride>& overrides() const { return overrides_; }

    double area() const;    // ∫ μ(x) dx
    double moment() const;  // ∫ x·μ(x) dx
    bool zero_area() const;

    /// Grade on the open interior of the cell containing x (breakpoints and
    /// overrides ignored). x must lie strictly inside the support partition.
    double interior_grade(double x) const;

private:
    RatingScale scale_;
    std::vector<double> breakpoints_;
    std::vector<double> cell_grades_;
    std::vector<PointOverride> overrides_;  // sorted by x
};

/// IAA type-1 agreement set: membership at x is the fraction of source
/// intervals covering x. Every attained grade is k/source_count.
struct AgreementT1 {
    MembershipFunction fn;
    int source_count = 0;
};

/// Builds the interval-agreement T1 set. Membership is the closed-interval
/// covering fraction, represented exactly: sorted distinct endpoints become
/// breakpoints, cells carry the open-interior count, and endpoints whose
/// closed count strictly exceeds both neighbors become point overrides.
/// No smoothing, no outlier removal.
AgreementT1 build_iaa(const std::vector<Interval>& intervals, const RatingScale& scale);

/// zSlice general type-2 fuzzy set over M labelled group T1 sets.
/// Slices are derived on demand; z-levels are exactly {j/M : j = 1..M}.
class ZSliceSet {
public:
    using Group = std::pair<std::string, AgreementT1>;

    explicit ZSliceSet(std::vector<Group> groups);

    const std::vector<Group>& groups() const { return groups_; }
    std::size_t group_count() const { return groups_.size(); }
    const RatingScale& scale() const;
    std::vector<double> z_levels() const;

    /// Fraction of group functions with membership(x) >= y (y > 0);
    /// 1 for y = 0. Non-increasing in y by construction.
    double secondary_grade(double x, double y) const;

    /// j-th slice (1-based): pointwise j-th largest group membership, i.e.
    /// the upper envelope of the region with secondary grade >= j/M.
    MembershipFunction zslice(std::size_t j) const;

    /// Equal-weight collapse (1/M)·Σ membership_i — the T1 set whose centroid
    /// defines centroid_zgt2.
    MembershipFunction mean_membership() const;

private:
    std::vector<Group> groups_;
};

/// Validating wrapper mirroring the construction step of the pipeline.
ZSliceSet aggregate_zgt2(std::vector<ZSliceSet::Group> groups);

/// Jaccard similarity ∫min(μa,μb)/∫max(μa,μb), exact over the merged
/// partition. Throws DomainError when both sets have zero area.
double jaccard(const MembershipFunction& a, const MembershipFunction& b);

/// Centroid ∫x·μ/∫μ. Throws DomainError on zero-area sets.
double centroid_t1(const MembershipFunction& fs);

/// Type-2 centroid: centroid_t1 of the equal-weight mean membership.
double centroid_zgt2(const ZSliceSet& z);

struct CurveSample {
    double x = 0.0;
    double grade = 0.0;
};

struct SurfaceSample {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Regular-grid samples including both scale endpoints. step > 0.
std::vector<CurveSample> sample(const MembershipFunction& fs, double step);

/// Secondary-grade grid over x (scale) and y ([0, 1]), step applied to both
/// axes, endpoints included on each.
std::vector<SurfaceSample> sample(const ZSliceSet& z, double step);

} // namespace iagree

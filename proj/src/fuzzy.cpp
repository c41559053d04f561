#include "iagree/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace iagree {

namespace {

// Grid step tolerance: a point this close to the domain end is the end.
constexpr double kGridSnap = 1e-9;

std::vector<double> regular_grid(double lo, double hi, double step) {
    std::vector<double> xs;
    for (std::size_t k = 0;; ++k) {
        double x = lo + static_cast<double>(k) * step;
        if (x >= hi - kGridSnap * std::max(1.0, std::fabs(hi))) break;
        xs.push_back(x);
    }
    xs.push_back(hi);
    return xs;
}

} // namespace

void RatingScale::validate() const {
    if (!(min < max) || !std::isfinite(min) || !std::isfinite(max)) {
        std::ostringstream msg;
        msg << "invalid rating scale [" << min << ", " << max << "]: min must be finite and below max";
        throw ValidationError(msg.str());
    }
}

void validate_interval(const Interval& iv, const RatingScale& scale, const std::string& what) {
    if (!(iv.lo <= iv.hi)) {
        std::ostringstream msg;
        msg << what << ": interval [" << iv.lo << ", " << iv.hi << "] has lo > hi";
        throw ValidationError(msg.str());
    }
    if (iv.lo < scale.min || iv.hi > scale.max) {
        std::ostringstream msg;
        msg << what << ": interval [" << iv.lo << ", " << iv.hi << "] leaves the scale ["
            << scale.min << ", " << scale.max << "]";
        throw ValidationError(msg.str());
    }
}

MembershipFunction::MembershipFunction(RatingScale scale,
                                       std::vector<double> breakpoints,
                                       std::vector<double> cell_grades,
                                       std::vector<PointOverride> overrides)
    : scale_(scale),
      breakpoints_(std::move(breakpoints)),
      cell_grades_(std::move(cell_grades)),
      overrides_(std::move(overrides)) {
    scale_.validate();
    if (breakpoints_.empty()) {
        throw ValidationError("membership function needs at least one breakpoint");
    }
    if (cell_grades_.size() + 1 != breakpoints_.size()) {
        throw ValidationError("cell grade count must be one less than breakpoint count");
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!scale_.contains(breakpoints_[i])) {
            throw ValidationError("breakpoint outside the rating scale");
        }
        if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
            throw ValidationError("breakpoints must be strictly increasing");
        }
    }
    for (double g : cell_grades_) {
        if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("cell grade outside [0, 1]");
    }
    std::sort(overrides_.begin(), overrides_.end(),
              [](const PointOverride& a, const PointOverride& b) { return a.x < b.x; });
    for (const auto& ov : overrides_) {
        if (!scale_.contains(ov.x)) throw ValidationError("override point outside the rating scale");
        if (!(ov.grade >= 0.0 && ov.grade <= 1.0)) throw ValidationError("override grade outside [0, 1]");
        if (ov.grade < interior_grade(ov.x)) {
            throw ValidationError("override grade below the grade of its containing cell");
        }
    }
}

MembershipFunction MembershipFunction::zero(const RatingScale& scale) {
    return MembershipFunction(scale, {scale.min, scale.max}, {0.0});
}

MembershipFunction MembershipFunction::indicator(const Interval& iv, const RatingScale& scale) {
    validate_interval(iv, scale, "indicator");
    if (iv.degenerate()) {
        return MembershipFunction(scale, {iv.lo}, {}, {{iv.lo, 1.0}});
    }
    return MembershipFunction(scale, {iv.lo, iv.hi}, {1.0});
}

double MembershipFunction::membership(double x) const {
    if (!scale_.contains(x)) {
        std::ostringstream msg;
        msg << "x = " << x << " outside the rating scale [" << scale_.min << ", " << scale_.max << "]";
        throw DomainError(msg.str());
    }
    auto ov = std::lower_bound(overrides_.begin(), overrides_.end(), x,
                               [](const PointOverride& o, double v) { return o.x < v; });
    if (ov != overrides_.end() && ov->x == x) return ov->grade;
    if (x < breakpoints_.front() || x > breakpoints_.back()) return 0.0;
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    auto i = static_cast<std::size_t>(it - breakpoints_.begin());
    if (it != breakpoints_.end() && *it == x) {
        // Closed coverage at an endpoint equals the larger neighbor cell
        // unless it strictly exceeds both, which an override records.
        double left = i > 0 ? cell_grades_[i - 1] : 0.0;
        double right = i < cell_grades_.size() ? cell_grades_[i] : 0.0;
        return std::max(left, right);
    }
    return cell_grades_[i - 1];
}

double MembershipFunction::interior_grade(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.begin() || it == breakpoints_.end()) return 0.0;
    return cell_grades_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double MembershipFunction::area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < cell_grades_.size(); ++i) {
        a += cell_grades_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
    }
    return a;
}

double MembershipFunction::moment() const {
    double m = 0.0;
    for (std::size_t i = 0; i < cell_grades_.size(); ++i) {
        double lo = breakpoints_[i];
        double hi = breakpoints_[i + 1];
        m += cell_grades_[i] * 0.5 * (hi * hi - lo * lo);
    }
    return m;
}

bool MembershipFunction::zero_area() const { return area() <= 0.0; }

AgreementT1 build_iaa(const std::vector<Interval>& intervals, const RatingScale& scale) {
    scale.validate();
    if (intervals.empty()) throw ValidationError("empty panel");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        validate_interval(intervals[i], scale, "interval #" + std::to_string(i + 1));
    }

    std::vector<double> endpoints;
    endpoints.reserve(intervals.size() * 2);
    for (const auto& iv : intervals) {
        endpoints.push_back(iv.lo);
        endpoints.push_back(iv.hi);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());

    const double n = static_cast<double>(intervals.size());

    std::vector<double> cells(endpoints.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < endpoints.size(); ++i) {
        int covering = 0;
        for (const auto& iv : intervals) {
            if (iv.lo <= endpoints[i] && iv.hi >= endpoints[i + 1]) ++covering;
        }
        cells[i] = static_cast<double>(covering) / n;
    }

    std::vector<PointOverride> spikes;
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        int closed = 0;
        for (const auto& iv : intervals) {
            if (iv.contains(endpoints[i])) ++closed;
        }
        double grade = static_cast<double>(closed) / n;
        double left = i > 0 ? cells[i - 1] : 0.0;
        double right = i < cells.size() ? cells[i] : 0.0;
        if (grade > left && grade > right) spikes.push_back({endpoints[i], grade});
    }

    return AgreementT1{
        MembershipFunction(scale, std::move(endpoints), std::move(cells), std::move(spikes)),
        static_cast<int>(intervals.size())};
}

namespace {

// Pointwise combination of several functions on their merged partition.
// The reducer sees one grade per input function. Reducers used here (k-th
// largest, mean) are monotone in every argument, so the combined closed
// value at a breakpoint is >= both adjacent combined cells; a strict excess
// becomes an override.
MembershipFunction combine(const std::vector<const MembershipFunction*>& fns,
                           const std::function<double(const std::vector<double>&)>& reduce) {
    const RatingScale& scale = fns.front()->scale();

    std::vector<double> merged;
    for (const auto* fn : fns) {
        merged.insert(merged.end(), fn->breakpoints().begin(), fn->breakpoints().end());
        for (const auto& ov : fn->overrides()) merged.push_back(ov.x);
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    std::vector<double> vals(fns.size());
    std::vector<double> cells(merged.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        double mid = 0.5 * (merged[i] + merged[i + 1]);
        for (std::size_t k = 0; k < fns.size(); ++k) vals[k] = fns[k]->interior_grade(mid);
        cells[i] = reduce(vals);
    }

    std::vector<PointOverride> spikes;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        for (std::size_t k = 0; k < fns.size(); ++k) vals[k] = fns[k]->membership(merged[i]);
        double grade = reduce(vals);
        double left = i > 0 ? cells[i - 1] : 0.0;
        double right = i < cells.size() ? cells[i] : 0.0;
        if (grade > std::max(left, right)) spikes.push_back({merged[i], grade});
    }

    return MembershipFunction(scale, std::move(merged), std::move(cells), std::move(spikes));
}

} // namespace

ZSliceSet::ZSliceSet(std::vector<Group> groups) : groups_(std::move(groups)) {
    if (groups_.empty()) throw ValidationError("empty group list");
    const RatingScale& first = groups_.front().second.fn.scale();
    for (const auto& [label, t1] : groups_) {
        if (!(t1.fn.scale() == first)) {
            throw ValidationError("mixed scales: group '" + label +
                                  "' uses a different rating scale");
        }
    }
}

const RatingScale& ZSliceSet::scale() const { return groups_.front().second.fn.scale(); }

std::vector<double> ZSliceSet::z_levels() const {
    std::vector<double> zs(groups_.size());
    for (std::size_t j = 0; j < groups_.size(); ++j) {
        zs[j] = static_cast<double>(j + 1) / static_cast<double>(groups_.size());
    }
    return zs;
}

double ZSliceSet::secondary_grade(double x, double y) const {
    if (!scale().contains(x)) {
        throw DomainError("x outside the rating scale");
    }
    if (!(y >= 0.0 && y <= 1.0)) {
        throw DomainError("secondary-grade query needs y in [0, 1]");
    }
    if (y == 0.0) return 1.0;
    int supporting = 0;
    for (const auto& [label, t1] : groups_) {
        if (t1.fn.membership(x) >= y) ++supporting;
    }
    return static_cast<double>(supporting) / static_cast<double>(groups_.size());
}

MembershipFunction ZSliceSet::zslice(std::size_t j) const {
    if (j < 1 || j > groups_.size()) {
        throw DomainError("zslice index " + std::to_string(j) + " out of range 1.." +
                          std::to_string(groups_.size()));
    }
    std::vector<const MembershipFunction*> fns;
    fns.reserve(groups_.size());
    for (const auto& [label, t1] : groups_) fns.push_back(&t1.fn);
    return combine(fns, [j](const std::vector<double>& vals) {
        std::vector<double> sorted(vals);
        std::nth_element(sorted.begin(), sorted.begin() + (j - 1), sorted.end(),
                         std::greater<>());
        return sorted[j - 1];
    });
}

MembershipFunction ZSliceSet::mean_membership() const {
    std::vector<const MembershipFunction*> fns;
    fns.reserve(groups_.size());
    for (const auto& [label, t1] : groups_) fns.push_back(&t1.fn);
    return combine(fns, [](const std::vector<double>& vals) {
        double sum = 0.0;
        for (double v : vals) sum += v;
        return sum / static_cast<double>(vals.size());
    });
}

ZSliceSet aggregate_zgt2(std::vector<ZSliceSet::Group> groups) {
    return ZSliceSet(std::move(groups));
}

double jaccard(const MembershipFunction& a, const MembershipFunction& b) {
    if (!(a.scale() == b.scale())) {
        throw ValidationError("jaccard needs both sets on the same rating scale");
    }
    std::vector<double> merged;
    merged.insert(merged.end(), a.breakpoints().begin(), a.breakpoints().end());
    merged.insert(merged.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    double inter = 0.0;
    double uni = 0.0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        double width = merged[i + 1] - merged[i];
        double mid = 0.5 * (merged[i] + merged[i + 1]);
        double ga = a.interior_grade(mid);
        double gb = b.interior_grade(mid);
        inter += std::min(ga, gb) * width;
        uni += std::max(ga, gb) * width;
    }
    if (uni <= 0.0) throw DomainError("undefined similarity (0/0)");
    return inter / uni;
}

double centroid_t1(const MembershipFunction& fs) {
    double a = fs.area();
    if (a <= 0.0) throw DomainError("degenerate set: centroid undefined");
    return fs.moment() / a;
}

double centroid_zgt2(const ZSliceSet& z) {
    bool any = false;
    for (const auto& [label, t1] : z.groups()) {
        if (!t1.fn.zero_area()) any = true;
    }
    if (!any) throw DomainError("degenerate set: centroid undefined");
    return centroid_t1(z.mean_membership());
}

std::vector<CurveSample> sample(const MembershipFunction& fs, double step) {
    if (!(step > 0.0)) throw DomainError("sampling step must be positive");
    std::vector<CurveSample> rows;
    for (double x : regular_grid(fs.scale().min, fs.scale().max, step)) {
        rows.push_back({x, fs.membership(x)});
    }
    return rows;
}

std::vector<SurfaceSample> sample(const ZSliceSet& z, double step) {
    if (!(step > 0.0)) throw DomainError("sampling step must be positive");
    std::vector<SurfaceSample> rows;
    auto ys = regular_grid(0.0, 1.0, std::min(step, 1.0));
    for (double x : regular_grid(z.scale().min, z.scale().max, step)) {
        for (double y : ys) rows.push_back({x, y, z.secondary_grade(x, y)});
    }
    return rows;
}

} // namespace iagree

#ifndef OCTAFLOW_INTERVAL_SET_HPP
#define OCTAFLOW_INTERVAL_SET_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "octaflow/rational.hpp"

namespace octaflow {

// Half-open interval [u, v), u < v.
struct Interval {
    double u = 0.0;
    double v = 0.0;
};

struct RationalInterval {
    Rational u;
    Rational v;
};

/// Finite union of disjoint half-open intervals [u, v) on [0, inf) --
/// the computational stand-in for the measurable visit-time set.
///
/// Endpoints are doubles; normalization merges intervals whose gap is below
/// 1e-12 * scale. When a set is built from exact rational endpoints the
/// rational representation is carried along through the operations that
/// preserve exactness (normalize / restrict / scale by a rational), so
/// Fourier coefficients of synthetic sets stay exact.
class IntervalSet {
public:
    IntervalSet() = default;

    const std::vector<Interval>& intervals() const { return intervals_; }
    double total_measure() const { return total_measure_; }
    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }

    bool has_exact() const { return exact_.has_value(); }
    const std::vector<RationalInterval>& exact() const { return *exact_; }

    // --- construction -----------------------------------------------------

    /// Sort, merge overlapping / near-adjacent intervals, recompute measure.
    /// merge_tol < 0 selects the default 1e-12 * max(|endpoint|, 1).
    /// Throws DegenerateInputError if some interval has u >= v.
    static IntervalSet normalize(std::vector<Interval> raw, double merge_tol = -1.0);

    /// Exact variant: merges only true overlap/adjacency, keeps rationals.
    static IntervalSet normalize_exact(std::vector<RationalInterval> raw);

    static IntervalSet full(double n) { return normalize({{0.0, n}}); }

    // --- algebra ------------------------------------------------------------

    /// s `intersect` [0, n], normalized.
    IntervalSet restrict(double n) const;

    /// Lebesgue measure of s `intersect` [0, n].
    double measure_upto(double n) const;

    /// x in result iff factor * x in s  (factor > 0). Used by the unit-interval
    /// contraction with factor = N.
    IntervalSet scale_down(double factor) const;
    IntervalSet scale_down_exact(const Rational& factor) const;

    static IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);

    // --- IO -----------------------------------------------------------------

    /// CSV: one "u,v" row per interval (header "u,v").
    void write_csv(std::ostream& os) const;
    static IntervalSet read_csv(std::istream& is);

    /// JSON: {"intervals": [["u","v"], ...]} with "num/den" strings when the
    /// set carries exact rational endpoints, decimal strings otherwise.
    /// from_json parses string endpoints exactly; plain numbers load as
    /// doubles.
    std::string to_json() const;
    static IntervalSet from_json(const std::string& text);

private:
    std::vector<Interval> intervals_;   // sorted, disjoint
    double total_measure_ = 0.0;
    std::optional<std::vector<RationalInterval>> exact_;
};

/// Measure restricted to [0, n] divided by n, in [0, 1].
double density(const IntervalSet& s, double n);

} // namespace octaflow

#endif

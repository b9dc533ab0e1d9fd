#ifndef OCTAFLOW_TRANSFERENCE_HPP
#define OCTAFLOW_TRANSFERENCE_HPP

#include <cstdint>

#include "octaflow/interval_set.hpp"
#include "octaflow/rng.hpp"

namespace octaflow {

/// A progression gap/offset pair with its dyadic level: 2^level <= theta < 2^(level+1),
/// 0 <= lambda < theta.
struct APPair {
    double theta = 1.0;
    double lambda = 0.0;
    int level = 0;
};

/// The Monte Carlo pair measure: theta uniform on [2^level, 2^(level+1)),
/// then lambda uniform on [0, theta).
APPair sample_pair(int level, Rng& rng);

/// Count and error of an AP against a time set, normalized by
/// n^(3/4) * (log n)^(1/2) (natural log).
struct CountResult {
    std::int64_t count = 0;
    double expected = 0.0;          // meas(s `intersect` [0,n]) / theta
    double error = 0.0;             // |count - expected|
    double normalized_error = 0.0;  // error / (n^(3/4) (log n)^(1/2))
};

/// The N_h/M_h growth schedule: N_h <= 2^l h^4 log^2(1+h) < N_h + 1, M_h = 2^l h.
struct HSchedule {
    int h = 0;
    std::int64_t N = 0;
    std::int64_t M = 0;
};

/// #{k >= 0 : k*theta + lambda in s `intersect` [0, n]}, closed-form per
/// interval (no loop over k). Progression points are evaluated as
/// fl(fl(k*theta) + lambda), so the count agrees exactly with brute-force
/// enumeration in the same arithmetic.
std::int64_t ap_count(const IntervalSet& s, double theta, double lambda, double n);

/// Throws RangeError for n < 2 (the normalization needs log n bounded away
/// from 0).
CountResult transfer_error(const IntervalSet& s, double theta, double lambda, double n);

struct DensityCheck {
    bool ok = false;
    double slack = 0.0;  // bound - lhs
    double lhs = 0.0;    // |theta/n * count - d|
    double bound = 0.0;  // eps_n + C * (log n)^(1/2) / n^(1/4)
};

/// Density-transference inequality test: needs d in [0,1] and eps_n a true
/// modulus |meas(s `intersect` [0,n])/n - d| <= eps_n for the claim to be
/// meaningful; both are the caller's responsibility.
DensityCheck density_check(const IntervalSet& s, double theta, double lambda, double n,
                           double d, double eps_n, double C);

/// Throws InvalidParameterError unless 1 < M_h < N_h.
HSchedule schedule_NM(int h, int level);

/// Fraction of pairs (theta, lambda) -- theta uniform on [2^l, 2^(l+1)),
/// lambda uniform on [0, theta) given theta -- whose normalized error
/// exceeds C. Deterministic given seed (per-sample sub-seeds, index-ordered
/// merge), at any thread count.
double exceptional_fraction(const IntervalSet& s, int level, double n, double C,
                            std::int64_t samples, std::uint64_t seed, int threads = 1);

} // namespace octaflow

#endif

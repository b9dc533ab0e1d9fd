#include "octaflow/transference.hpp"

#include <cmath>

#include "octaflow/parallel.hpp"

namespace octaflow {

namespace {

// Progression point exactly as brute-force enumeration computes it.
inline double ap_point(std::int64_t k, double theta, double lambda) {
    return static_cast<double>(k) * theta + lambda;
}

// First k >= lo with ap_point(k) >= bound (ap_point is non-decreasing in k).
// The closed-form estimate lands within a couple of ulp-steps of the answer;
// a short monotone walk finishes the job exactly.
std::int64_t first_k_at_least(double bound, double theta, double lambda, std::int64_t lo) {
    double est = (bound - lambda) / theta;
    std::int64_t k = lo;
    if (est > static_cast<double>(lo))
        k = std::max(lo, static_cast<std::int64_t>(std::floor(est)) - 2);
    while (k > lo && ap_point(k - 1, theta, lambda) >= bound) --k;
    while (ap_point(k, theta, lambda) < bound) ++k;
    return k;
}

// First k >= lo with ap_point(k) > bound.
std::int64_t first_k_above(double bound, double theta, double lambda, std::int64_t lo) {
    double est = (bound - lambda) / theta;
    std::int64_t k = lo;
    if (est > static_cast<double>(lo))
        k = std::max(lo, static_cast<std::int64_t>(std::floor(est)) - 2);
    while (k > lo && ap_point(k - 1, theta, lambda) > bound) --k;
    while (ap_point(k, theta, lambda) <= bound) ++k;
    return k;
}

} // namespace

APPair sample_pair(int level, Rng& rng) {
    APPair p;
    p.level = level;
    const double base = std::ldexp(1.0, level);
    p.theta = base * (1.0 + rng.next_double());
    p.lambda = p.theta * rng.next_double();
    return p;
}

std::int64_t ap_count(const IntervalSet& s, double theta, double lambda, double n) {
    if (!(theta > 0.0)) throw InvalidParameterError("ap_count requires theta > 0");
    if (!(lambda >= 0.0)) throw InvalidParameterError("ap_count requires lambda >= 0");
    if (!(n > 0.0)) throw InvalidParameterError("ap_count requires n > 0");

    std::int64_t total = 0;
    for (const auto& iv : s.intervals()) {
        if (iv.u > n) break;
        // Points p = k*theta + lambda with p in [u, v) and p <= n.
        const std::int64_t k_start = first_k_at_least(iv.u, theta, lambda, 0);
        std::int64_t k_end;
        if (iv.v <= n) {
            k_end = first_k_at_least(iv.v, theta, lambda, 0);  // first k leaving [u, v)
        } else {
            k_end = first_k_above(n, theta, lambda, 0);        // [u, n] closed at n
        }
        if (k_end > k_start) total += k_end - k_start;
    }
    return total;
}

CountResult transfer_error(const IntervalSet& s, double theta, double lambda, double n) {
    if (n < 2.0) throw RangeError("transfer_error requires n >= 2");
    CountResult r;
    r.count = ap_count(s, theta, lambda, n);
    r.expected = s.measure_upto(n) / theta;
    r.error = std::fabs(static_cast<double>(r.count) - r.expected);
    r.normalized_error = r.error / (std::pow(n, 0.75) * std::sqrt(std::log(n)));
    return r;
}

DensityCheck density_check(const IntervalSet& s, double theta, double lambda, double n,
                           double d, double eps_n, double C) {
    if (n < 2.0) throw RangeError("density_check requires n >= 2");
    if (d < 0.0 || d > 1.0) throw InvalidParameterError("density d must lie in [0, 1]");
    DensityCheck out;
    const std::int64_t count = ap_count(s, theta, lambda, n);
    out.lhs = std::fabs(theta / n * static_cast<double>(count) - d);
    out.bound = eps_n + C * std::sqrt(std::log(n)) / std::pow(n, 0.25);
    out.slack = out.bound - out.lhs;
    out.ok = out.slack >= 0.0;
    return out;
}

HSchedule schedule_NM(int h, int level) {
    if (h < 1) throw InvalidParameterError("schedule_NM requires h >= 1");
    if (level < 0) throw InvalidParameterError("schedule_NM requires level >= 0");
    const long double hl = h;
    const long double value = std::ldexp(1.0L, level) * hl * hl * hl * hl *
                              std::pow(std::log(1.0L + hl), 2.0L);
    std::int64_t N = static_cast<std::int64_t>(std::floor(value));
    // Two-sided check N <= value < N+1 against long double rounding.
    while (static_cast<long double>(N) > value) --N;
    while (static_cast<long double>(N + 1) <= value) ++N;

    const std::int64_t M = static_cast<std::int64_t>(std::ldexp(1.0, level)) * h;
    if (!(1 < M && M < N))
        throw InvalidParameterError("schedule_NM needs 1 < M_h < N_h; violated at h = " +
                                    std::to_string(h));
    return {h, N, M};
}

double exceptional_fraction(const IntervalSet& s, int level, double n, double C,
                            std::int64_t samples, std::uint64_t seed, int threads) {
    if (samples < 1) throw InvalidParameterError("exceptional_fraction requires samples >= 1");
    std::vector<unsigned char> exceed(static_cast<std::size_t>(samples), 0);
    parallel_for(samples, threads, [&](std::int64_t i) {
        Rng rng(derive_seed(seed, "exceptional-pair", static_cast<std::uint64_t>(i)));
        const APPair p = sample_pair(level, rng);
        const CountResult r = transfer_error(s, p.theta, p.lambda, n);
        exceed[static_cast<std::size_t>(i)] = r.normalized_error > C ? 1 : 0;
    });
    std::int64_t bad = 0;
    for (unsigned char b : exceed) bad += b;
    return static_cast<double>(bad) / static_cast<double>(samples);
}

} // namespace octaflow

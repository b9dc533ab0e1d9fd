#ifndef OCTAFLOW_FOURIER_HPP
#define OCTAFLOW_FOURIER_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "octaflow/interval_set.hpp"
#include "octaflow/quadrature.hpp"

namespace octaflow {

/// sin(pi*x) / cos(pi*x) with exact integer reduction of x, so resonances
/// j*alpha = r are detected at full precision even for large arguments.
double sin_pi(double x);
double cos_pi(double x);
/// e^{i*pi*x}.
std::complex<double> cis_pi(double x);

/// Truncated Fourier series of the indicator of a finite interval union in
/// [0,1]: a_j for 1 <= j <= J_max (negative j by conjugate symmetry), a_0 the
/// measure, and the exact Parseval remainder sum_{|j|>J_max} |a_j|^2 as the
/// truncation tail bound.
struct FourierSeries {
    int J_max = 0;
    double a0 = 0.0;
    std::vector<std::complex<double>> coeffs;  // coeffs[j-1] = a_j, j = 1..J_max
    double tail_bound = 0.0;

    std::complex<double> coeff(std::int64_t j) const {
        if (j == 0) return {a0, 0.0};
        const std::size_t idx = static_cast<std::size_t>(j > 0 ? j : -j) - 1;
        return j > 0 ? coeffs[idx] : std::conj(coeffs[idx]);
    }

    /// sum_{0<|j|<=J_max} |a_j|^2.
    double partial_power() const;

    /// Partial Fourier sum S_J(x) = sum_{|j|<=J_max} a_j e^{2*pi*i*j*x} (real).
    double evaluate(double x) const;
};

/// Contraction of s `intersect` [0, N] to the unit interval:
/// x in result iff N*x in s `intersect` [0, N].
IntervalSet contract(const IntervalSet& s, std::int64_t N);

/// a_j = sum_m (e^{-2*pi*i*j*u_m} - e^{-2*pi*i*j*v_m}) / (2*pi*i*j) over the
/// intervals [u_m, v_m) of a set contained in [0, 1].
FourierSeries fourier_coeffs(const IntervalSet& s01, int J_max);

/// The unique integer with (K-1)*alpha < 1 <= K*alpha, for alpha in (0, 1].
std::int64_t K_of_alpha(double alpha);

/// Fourier transform I(delta; j) of the triangular roof of half-width delta:
/// delta for j = 0, delta*(sin(pi*j*delta)/(pi*j*delta))^2 otherwise.
/// Requires 0 < delta < 1/2.
double roof_weight(double delta, std::int64_t j);

/// |e^{2*pi*i*j*K(alpha)*alpha} - 1|^2 / |e^{2*pi*i*j*alpha} - 1|^2, evaluated
/// stably as (sin(pi*j*K*alpha)/sin(pi*j*alpha))^2; returns K(alpha)^2 at
/// resonances |sin(pi*j*alpha)| < 1e-13 (the K-term geometric-sum limit).
double dirichlet_ratio_sq(std::int64_t j, double alpha);

/// Geometric sum D_j(alpha) = sum_{k=0}^{K-1} e^{2*pi*i*j*k*alpha} with K
/// supplied (constant between breakpoints of K(alpha)).
std::complex<double> dirichlet_sum(std::int64_t j, double alpha, std::int64_t K);

/// E(j;N) = integral of dirichlet_ratio_sq over alpha in [2^l/N, 2^(l+1)/N),
/// split at every K(alpha) breakpoint and refined near resonances
/// |alpha - r/j| < 4/(|j|N). Requires j != 0 and 2^(l+1) <= N.
double E_integral(std::int64_t j, std::int64_t N, int level, const QuadratureConfig& quad,
                  double* err_est = nullptr);

/// B(j1;j2;N) = integral of a_{j1} D_{j1}(alpha) * conj(a_{j2} D_{j2}(alpha))
/// over the same window. Requires |j1|, |j2| <= series.J_max, both nonzero.
std::complex<double> B_integral(std::int64_t j1, std::int64_t j2, std::int64_t N, int level,
                                const FourierSeries& series, const QuadratureConfig& quad,
                                double* err_est = nullptr);

/// J*(a; N; M) with its diagonal / off-diagonal split and error budgets.
struct JstarResult {
    double value = 0.0;
    double diagonal = 0.0;       // sum of j1 == j2 terms (weight I(delta;0) = delta)
    double off_diagonal = 0.0;
    double bound = 0.0;          // 2^(level+11)
    double tail_budget = 0.0;    // 2 * 2^(level+8) * series.tail_bound
    double quad_budget = 0.0;    // accumulated quadrature error estimates
    double margin = 0.0;         // bound - (value + tail_budget + quad_budget)
    bool within_bound = false;
};

/// Evaluates the weighted double sum sum_{j1,j2 != 0} I(2^l/M; j1-j2) B(j1;j2;N)
/// truncated at the series' J_max, via the roof-weighted autocorrelation of
/// g_j(alpha) = a_j D_j(alpha) on an adaptive alpha grid. Requires
/// 1 < M < N and 2^l/M < 1/2, and a truncation tail budget within 1% of the
/// 2^(level+11) bound. Deterministic at any thread count (piece-indexed
/// reduction).
JstarResult Jstar(const FourierSeries& series, std::int64_t N, std::int64_t M, int level,
                  const QuadratureConfig& quad, int threads = 1);

/// Upper bound for (2^l/M) * (1 + sum_{zeta != 0} sinc^2(pi*zeta*2^l/M)):
/// direct summation plus a rigorous remainder below 1e-10. Always <= 6 (the
/// exact value of the full sum is 1).
double weight_sum_bound(std::int64_t M, int level);

/// |sum_j a_j sum_k e^{2*pi*i*j*(k*alpha+beta)} - same with gamma| for
/// k = 0..K(alpha)-1, truncated at J_max. Requires beta = frac(gamma/alpha)*alpha
/// (checked to 1e-12) and q = |floor(gamma/alpha)|. The value is compared
/// against 4q + tol: the symmetric difference of the two progressions is two
/// progressions of length <= q, each term bounded by 2.
struct ShiftCheck {
    double value = 0.0;
    double bound = 0.0;  // 4q + tol
    bool ok = false;
};
ShiftCheck shift_difference_check(const FourierSeries& series, double alpha, double beta,
                                  double gamma, std::int64_t q, double tol);

} // namespace octaflow

#endif

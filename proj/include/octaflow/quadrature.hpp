#ifndef OCTAFLOW_QUADRATURE_HPP
#define OCTAFLOW_QUADRATURE_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "octaflow/errors.hpp"

namespace octaflow {

/// Settings for the alpha-integrals. They are integrated piecewise between
/// the breakpoints of K(alpha) (and seeded resonance windows); each piece is
/// split into `subdivisions_per_piece` panels refined by adaptive Simpson.
struct QuadratureConfig {
    int subdivisions_per_piece = 4;  // >= 4
    double abs_tol = 1e-8;           // absolute error target for the whole integral
    int max_depth = 30;

    void validate() const {
        if (subdivisions_per_piece < 4)
            throw InvalidParameterError("quadrature needs subdivisions_per_piece >= 4");
        if (!(abs_tol > 0.0)) throw InvalidParameterError("quadrature abs_tol must be positive");
    }
};

namespace detail {

template <typename T>
double quad_norm(T v) {
    if constexpr (std::is_same_v<T, std::complex<double>>) return std::abs(v);
    else return std::fabs(v);
}

template <typename T, typename F>
T simpson_recurse(F& f, double a, double m, double b, T fa, T fm, T fb, T whole, double tol,
                  int depth, int max_depth, double& err_est, double& worst_residual) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (quad_norm(delta) <= 15.0 * tol || depth >= max_depth) {
        if (depth >= max_depth && quad_norm(delta) > 15.0 * tol)
            worst_residual = std::max(worst_residual, quad_norm(delta) / 15.0);
        err_est += quad_norm(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth,
                           err_est, worst_residual) +
           simpson_recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth,
                           err_est, worst_residual);
}

} // namespace detail

template <typename T = double>
struct QuadOutcome {
    T value{};
    double err_est = 0.0;
};

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`, starting from
/// `panels` equal panels. Throws NumericError when the recursion cap leaves a
/// residual far beyond the requested tolerance.
template <typename T, typename F>
QuadOutcome<T> adaptive_simpson(F&& f, double a, double b, double tol, int panels, int max_depth,
                                const std::string& what = "integrand") {
    QuadOutcome<T> out{};
    if (!(b > a)) return out;
    panels = std::max(1, panels);
    double worst_residual = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + p * h;
        const double pb = (p + 1 == panels) ? b : pa + h;
        const double pm = 0.5 * (pa + pb);
        const T fa = f(pa), fm = f(pm), fb = f(pb);
        const T whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        out.value += detail::simpson_recurse(f, pa, pm, pb, fa, fm, fb, whole,
                                             tol / panels, 0, max_depth, out.err_est,
                                             worst_residual);
    }
    if (worst_residual > 1000.0 * tol)
        throw NumericError("quadrature did not converge for " + what + " on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "): residual " +
                           std::to_string(worst_residual) + " vs tol " + std::to_string(tol));
    return out;
}

} // namespace octaflow

#endif

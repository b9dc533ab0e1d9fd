#include "octaflow/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "octaflow/parallel.hpp"

namespace octaflow {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kResonanceGuard = 1e-13;
} // namespace

double sin_pi(double x) {
    const double r = std::nearbyint(x);
    const double d = x - r;
    const double s = std::sin(kPi * d);
    return static_cast<long long>(std::fmod(r, 2.0)) == 0 ? s : -s;
}

double cos_pi(double x) {
    const double r = std::nearbyint(x);
    const double d = x - r;
    const double c = std::cos(kPi * d);
    return static_cast<long long>(std::fmod(r, 2.0)) == 0 ? c : -c;
}

std::complex<double> cis_pi(double x) {
    return {cos_pi(x), sin_pi(x)};
}

// ---------------------------------------------------------------------------
// Series construction

double FourierSeries::partial_power() const {
    double p = 0.0;
    for (const auto& c : coeffs) p += 2.0 * std::norm(c);
    return p;
}

double FourierSeries::evaluate(double x) const {
    double s = a0;
    for (int j = 1; j <= J_max; ++j)
        s += 2.0 * (coeffs[j - 1] * cis_pi(2.0 * j * x)).real();
    return s;
}

IntervalSet contract(const IntervalSet& s, std::int64_t N) {
    if (N < 1) throw InvalidParameterError("contract requires N >= 1");
    return s.restrict(static_cast<double>(N)).scale_down(static_cast<double>(N));
}

FourierSeries fourier_coeffs(const IntervalSet& s01, int J_max) {
    if (J_max < 1) throw InvalidParameterError("fourier_coeffs requires J_max >= 1");
    for (const auto& iv : s01.intervals()) {
        if (iv.u < -1e-12 || iv.v > 1.0 + 1e-12)
            throw InvalidParameterError("fourier_coeffs input must lie inside [0, 1]");
    }

    FourierSeries out;
    out.J_max = J_max;
    out.a0 = s01.total_measure();
    out.coeffs.resize(static_cast<std::size_t>(J_max));
    for (int j = 1; j <= J_max; ++j) {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& iv : s01.intervals())
            sum += cis_pi(-2.0 * j * iv.u) - cis_pi(-2.0 * j * iv.v);
        // divide by 2*pi*i*j
        out.coeffs[j - 1] = sum / std::complex<double>(0.0, 2.0 * kPi * j);
    }

    const double parseval_full = out.a0 - out.a0 * out.a0;  // sum over all j != 0
    const double partial = out.partial_power();
    if (partial > parseval_full + 1e-12)
        throw NumericError("Parseval violation while building a Fourier series");
    out.tail_bound = std::max(0.0, parseval_full - partial) + 1e-12;
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise kernels

std::int64_t K_of_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw RangeError("K(alpha) requires alpha in (0, 1]");
    auto K = static_cast<std::int64_t>(std::ceil(1.0 / alpha));
    while (K > 1 && static_cast<double>(K - 1) * alpha >= 1.0) --K;
    while (static_cast<double>(K) * alpha < 1.0) ++K;
    return K;
}

double roof_weight(double delta, std::int64_t j) {
    if (!(delta > 0.0 && delta < 0.5))
        throw InvalidParameterError("roof_weight requires delta in (0, 1/2)");
    if (j == 0) return delta;
    const double x = static_cast<double>(j) * delta;
    const double s = sin_pi(x) / (kPi * x);
    return delta * s * s;
}

double dirichlet_ratio_sq(std::int64_t j, double alpha) {
    if (j == 0) throw InvalidParameterError("dirichlet_ratio_sq requires j != 0");
    const std::int64_t K = K_of_alpha(alpha);
    const double s = sin_pi(static_cast<double>(j) * alpha);
    if (std::fabs(s) < kResonanceGuard) return static_cast<double>(K) * static_cast<double>(K);
    const double t = sin_pi(static_cast<double>(j * K) * alpha) / s;
    return t * t;
}

std::complex<double> dirichlet_sum(std::int64_t j, double alpha, std::int64_t K) {
    const double s = sin_pi(static_cast<double>(j) * alpha);
    if (std::fabs(s) < kResonanceGuard) return {static_cast<double>(K), 0.0};
    const double ratio = sin_pi(static_cast<double>(j * K) * alpha) / s;
    return cis_pi(static_cast<double>(j * (K - 1)) * alpha) * ratio;
}

// ---------------------------------------------------------------------------
// alpha-window subdivision

namespace {

struct Window {
    double a;  // 2^level / N
    double b;  // 2^(level+1) / N
};

Window dyadic_window(std::int64_t N, int level) {
    if (N < 2) throw InvalidParameterError("window requires N > 1");
    if (level < 0) throw InvalidParameterError("window requires level >= 0");
    const double a = std::ldexp(1.0, level) / static_cast<double>(N);
    const double b = std::ldexp(1.0, level + 1) / static_cast<double>(N);
    if (!(b <= 1.0))
        throw InvalidParameterError("window [2^l/N, 2^(l+1)/N) must lie inside (0, 1]");
    return {a, b};
}

// Breakpoints of K(alpha) inside the window, i.e. alpha = 1/m.
void add_K_breakpoints(const Window& w, std::vector<double>& pts) {
    const auto m_lo = static_cast<std::int64_t>(std::floor(1.0 / w.b)) + 1;
    const auto m_hi = static_cast<std::int64_t>(std::ceil(1.0 / w.a)) - 1;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        const double x = 1.0 / static_cast<double>(m);
        if (x > w.a && x < w.b) pts.push_back(x);
    }
}

// Resonance refinement near alpha = r/|j| where the Dirichlet ratio peaks.
void add_resonance_breakpoints(const Window& w, std::int64_t j, std::int64_t N,
                               std::vector<double>& pts) {
    const double aj = std::fabs(static_cast<double>(j));
    const double halfwidth = 4.0 / (aj * static_cast<double>(N));
    const auto r_lo = static_cast<std::int64_t>(std::floor(w.a * aj));
    const auto r_hi = static_cast<std::int64_t>(std::ceil(w.b * aj));
    for (std::int64_t r = std::max<std::int64_t>(1, r_lo); r <= r_hi; ++r) {
        const double center = static_cast<double>(r) / aj;
        for (double x : {center - halfwidth, center - 0.25 * halfwidth, center,
                         center + 0.25 * halfwidth, center + halfwidth})
            if (x > w.a && x < w.b) pts.push_back(x);
    }
}

std::vector<double> assemble_pieces(const Window& w, std::vector<double> pts) {
    pts.push_back(w.a);
    pts.push_back(w.b);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
        if (out.empty() || x - out.back() > 1e-15) out.push_back(x);
    }
    if (out.size() < 2) out = {w.a, w.b};
    out.front() = w.a;
    out.back() = w.b;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// E and B integrals

double E_integral(std::int64_t j, std::int64_t N, int level, const QuadratureConfig& quad,
                  double* err_est) {
    if (j == 0) throw InvalidParameterError("E_integral requires j != 0");
    quad.validate();
    const Window w = dyadic_window(N, level);

    std::vector<double> pts;
    add_K_breakpoints(w, pts);
    if (std::llabs(j) > N / (1LL << (level + 2))) add_resonance_breakpoints(w, j, N, pts);
    const std::vector<double> pieces = assemble_pieces(w, std::move(pts));

    double total = 0.0, err = 0.0;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double a = pieces[p], b = pieces[p + 1];
        const std::int64_t K = K_of_alpha(0.5 * (a + b));
        auto f = [j, K](double alpha) {
            const double s = sin_pi(static_cast<double>(j) * alpha);
            if (std::fabs(s) < kResonanceGuard)
                return static_cast<double>(K) * static_cast<double>(K);
            const double t = sin_pi(static_cast<double>(j * K) * alpha) / s;
            return t * t;
        };
        const double tol = quad.abs_tol * (b - a) / (w.b - w.a);
        auto r = adaptive_simpson<double>(f, a, b, tol, quad.subdivisions_per_piece,
                                          quad.max_depth, "E(j;N) piece");
        total += r.value;
        err += r.err_est;
    }
    if (err_est) *err_est = err;
    return total;
}

std::complex<double> B_integral(std::int64_t j1, std::int64_t j2, std::int64_t N, int level,
                                const FourierSeries& series, const QuadratureConfig& quad,
                                double* err_est) {
    if (j1 == 0 || j2 == 0) throw InvalidParameterError("B_integral requires nonzero j1, j2");
    if (std::llabs(j1) > series.J_max || std::llabs(j2) > series.J_max)
        throw InvalidParameterError("B_integral requires |j| <= J_max");
    quad.validate();
    const Window w = dyadic_window(N, level);

    std::vector<double> pts;
    add_K_breakpoints(w, pts);
    for (std::int64_t j : {j1, j2})
        if (std::llabs(j) > N / (1LL << (level + 2))) add_resonance_breakpoints(w, j, N, pts);
    const std::vector<double> pieces = assemble_pieces(w, std::move(pts));

    const std::complex<double> amp = series.coeff(j1) * std::conj(series.coeff(j2));
    std::complex<double> total{0.0, 0.0};
    double err = 0.0;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double a = pieces[p], b = pieces[p + 1];
        const std::int64_t K = K_of_alpha(0.5 * (a + b));
        auto f = [&](double alpha) {
            return amp * dirichlet_sum(j1, alpha, K) * std::conj(dirichlet_sum(j2, alpha, K));
        };
        const double tol = quad.abs_tol * (b - a) / (w.b - w.a);
        auto r = adaptive_simpson<std::complex<double>>(f, a, b, tol, quad.subdivisions_per_piece,
                                                        quad.max_depth, "B(j1;j2;N) piece");
        total += r.value;
        err += r.err_est;
    }
    if (err_est) *err_est = err;
    return total;
}

// ---------------------------------------------------------------------------
// J* via the roof-weighted autocorrelation

namespace {

// Iterative radix-2 complex FFT, in place. n must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, rev = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev |= bit;
        if (i < rev) std::swap(a[i], a[rev]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= step;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

// Scratch for one alpha evaluation of the autocorrelation integrand.
struct JstarScratch {
    std::vector<std::complex<double>> g;    // g_j for j = 1..J
    std::vector<std::complex<double>> buf;  // FFT buffer, size P
};

// Roof-weighted quadratic form
//   Q(alpha) = sum_{j1,j2 != 0} I(delta; j1-j2) g_{j1} conj(g_{j2}),
// computed as sum_d I(delta; d) C_d with C the autocorrelation of g.
double jstar_integrand(const FourierSeries& series, double alpha, std::int64_t K,
                       const std::vector<double>& roofs, JstarScratch& sc) {
    const int J = series.J_max;
    for (int j = 1; j <= J; ++j)
        sc.g[static_cast<std::size_t>(j) - 1] = series.coeffs[j - 1] * dirichlet_sum(j, alpha, K);

    const std::size_t L = 2 * static_cast<std::size_t>(J) + 1;
    std::size_t P = 1;
    while (P < 2 * L) P <<= 1;
    sc.buf.assign(P, {0.0, 0.0});
    for (int j = 1; j <= J; ++j) {
        sc.buf[static_cast<std::size_t>(J + j)] = sc.g[j - 1];
        sc.buf[static_cast<std::size_t>(J - j)] = std::conj(sc.g[j - 1]);
    }
    fft_radix2(sc.buf, false);
    for (auto& x : sc.buf) x = std::norm(x);
    fft_radix2(sc.buf, true);

    // C_0 plus both signs of each off-diagonal lag.
    double q = roofs[0] * sc.buf[0].real();
    for (std::size_t d = 1; d <= 2 * static_cast<std::size_t>(J); ++d)
        q += roofs[d] * 2.0 * sc.buf[d].real();
    return q;
}

// Diagonal-only integrand: I(delta;0) * sum_j |g_j|^2.
double jstar_diag_integrand(const FourierSeries& series, double alpha, std::int64_t K,
                            double delta) {
    double s = 0.0;
    for (int j = 1; j <= series.J_max; ++j) {
        const double aj2 = std::norm(series.coeffs[j - 1]);
        if (aj2 == 0.0) continue;
        const double d = std::norm(dirichlet_sum(j, alpha, K));
        s += 2.0 * aj2 * d;  // both signs of j
    }
    return delta * s;
}

} // namespace

JstarResult Jstar(const FourierSeries& series, std::int64_t N, std::int64_t M, int level,
                  const QuadratureConfig& quad, int threads) {
    quad.validate();
    if (!(1 < M && M < N)) throw InvalidParameterError("Jstar requires 1 < M < N");
    const double delta = std::ldexp(1.0, level) / static_cast<double>(M);
    if (!(delta < 0.5))
        throw InvalidParameterError("Jstar requires 2^level/M < 1/2 (roof-function domain)");
    const Window w = dyadic_window(N, level);

    JstarResult out;
    out.bound = std::ldexp(1.0, level + 11);
    out.tail_budget = 2.0 * std::ldexp(1.0, level + 8) * series.tail_bound;
    if (out.tail_budget > 0.01 * out.bound)
        throw InvalidParameterError("Jstar truncation tail exceeds 1% of the bound; raise J_max");

    // Roof weights I(delta; d) for every lag that appears.
    std::vector<double> roofs(2 * static_cast<std::size_t>(series.J_max) + 1);
    roofs[0] = delta;
    for (std::size_t d = 1; d < roofs.size(); ++d)
        roofs[d] = roof_weight(delta, static_cast<std::int64_t>(d));

    // Piece boundaries: K(alpha) jumps plus resonance windows of the
    // strongest modes (spikes of weaker modes are handled by recursion).
    std::vector<double> pts;
    add_K_breakpoints(w, pts);
    {
        std::vector<std::pair<double, int>> strength;
        for (int j = 1; j <= series.J_max; ++j)
            strength.emplace_back(std::norm(series.coeffs[j - 1]), j);
        std::sort(strength.rbegin(), strength.rend());
        const std::size_t take = std::min<std::size_t>(32, strength.size());
        for (std::size_t i = 0; i < take; ++i) {
            const int j = strength[i].second;
            if (strength[i].first == 0.0) break;
            if (j > N / (1LL << (level + 2))) add_resonance_breakpoints(w, j, N, pts);
        }
    }
    const std::vector<double> pieces = assemble_pieces(w, std::move(pts));
    const std::size_t npieces = pieces.size() - 1;

    const double tol_total = std::max(quad.abs_tol, 1e-6 * out.bound);
    std::vector<double> piece_value(npieces), piece_diag(npieces), piece_err(npieces);

    parallel_for(static_cast<std::int64_t>(npieces), threads, [&](std::int64_t p) {
        const double a = pieces[static_cast<std::size_t>(p)];
        const double b = pieces[static_cast<std::size_t>(p) + 1];
        const std::int64_t K = K_of_alpha(0.5 * (a + b));
        JstarScratch sc;
        sc.g.resize(static_cast<std::size_t>(series.J_max));

        auto fq = [&](double alpha) { return jstar_integrand(series, alpha, K, roofs, sc); };
        auto fd = [&](double alpha) { return jstar_diag_integrand(series, alpha, K, delta); };
        const double tol = tol_total * (b - a) / (w.b - w.a);
        auto rq = adaptive_simpson<double>(fq, a, b, tol, quad.subdivisions_per_piece,
                                           quad.max_depth, "J* piece");
        auto rd = adaptive_simpson<double>(fd, a, b, tol, quad.subdivisions_per_piece,
                                           quad.max_depth, "J* diagonal piece");
        piece_value[static_cast<std::size_t>(p)] = rq.value;
        piece_diag[static_cast<std::size_t>(p)] = rd.value;
        piece_err[static_cast<std::size_t>(p)] = rq.err_est + rd.err_est;
    });

    for (std::size_t p = 0; p < npieces; ++p) {
        out.value += piece_value[p];
        out.diagonal += piece_diag[p];
        out.quad_budget += piece_err[p];
    }
    out.off_diagonal = out.value - out.diagonal;
    out.margin = out.bound - (out.value + out.tail_budget + out.quad_budget);
    out.within_bound = out.margin >= 0.0;
    return out;
}

// ---------------------------------------------------------------------------

double weight_sum_bound(std::int64_t M, int level) {
    if (M < 2) throw InvalidParameterError("weight_sum_bound requires M > 1");
    const double delta = std::ldexp(1.0, level) / static_cast<double>(M);
    if (!(delta <= 0.5))
        throw InvalidParameterError("weight_sum_bound requires 2^level/M <= 1/2");

    // Direct summation of delta * sum_zeta sinc^2(zeta*delta); the remainder
    // past Z splits into an exactly-summable 1/(2*zeta^2) part (Euler-
    // Maclaurin for psi'(Z+1)) and an oscillatory part bounded by Abel
    // summation, pushed below 1e-10 by the choice of Z.
    const double sin_pd = std::sin(kPi * delta);
    double Z = std::sqrt(2.0 / (kPi * kPi * delta * sin_pd * 1e-10));
    const auto zmax = static_cast<std::int64_t>(std::ceil(std::max(1000.0, Z)));

    double partial = delta;  // zeta = 0 term
    for (std::int64_t z = 1; z <= zmax; ++z) {
        const double x = static_cast<double>(z) * delta;
        const double s = sin_pi(x) / (kPi * x);
        partial += 2.0 * delta * s * s;
    }
    const double zz = static_cast<double>(zmax) + 1.0;
    const double trigamma = 1.0 / zz + 1.0 / (2.0 * zz * zz) + 1.0 / (6.0 * zz * zz * zz) -
                            1.0 / (30.0 * zz * zz * zz * zz * zz);
    const double mean_tail = trigamma / (kPi * kPi * delta);          // 1/2-average part
    const double osc_tail = 2.0 / (kPi * kPi * delta * zz * zz * sin_pd);  // Abel bound
    return partial + mean_tail + osc_tail;
}

ShiftCheck shift_difference_check(const FourierSeries& series, double alpha, double beta,
                                  double gamma, std::int64_t q, double tol) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidParameterError("shift check requires alpha in (0, 1]");
    const double ratio = gamma / alpha;
    const double shift = std::floor(ratio);
    if (std::fabs(beta - (ratio - shift) * alpha) > 1e-12)
        throw InvalidParameterError("shift check requires beta = frac(gamma/alpha)*alpha");
    if (static_cast<std::int64_t>(std::fabs(shift)) != q)
        throw InvalidParameterError("supplied shift q does not match |floor(gamma/alpha)|");

    const std::int64_t K = K_of_alpha(alpha);
    double sum = 0.0;
    for (int j = 1; j <= series.J_max; ++j) {
        const std::complex<double> phase =
            cis_pi(2.0 * j * beta) - cis_pi(2.0 * j * gamma);
        const std::complex<double> term =
            series.coeffs[j - 1] * phase * dirichlet_sum(j, alpha, K);
        sum += 2.0 * term.real();
    }
    ShiftCheck out;
    out.value = std::fabs(sum);
    out.bound = 4.0 * static_cast<double>(q) + tol;
    out.ok = out.value <= out.bound;
    return out;
}

} // namespace octaflow

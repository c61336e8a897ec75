#include "selberg/greens.hpp"

#include "selberg/errors.hpp"
#include "selberg/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace selberg::greens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;
const cx I{0.0, 1.0};

double log_sinh(double x) { return x > 20.0 ? x - ln2 : std::log(std::sinh(x)); }

// log of sinh(x)/x for x >= 0.
double log_sinhc(double x) { return x < 1e-4 ? x * x / 6.0 : log_sinh(x) - std::log(x); }

// With t = τ + s, s = u²:  dt/√(cosh t - cosh τ) = 2 du / √(2 sinh(τ+s/2) sinh(s/2)/s).
// Returns log of the square root in that denominator.
double log_abel_den(double tau, double s) {
    return 0.5 * (log_sinh(tau + 0.5 * s) + log_sinhc(0.5 * s));
}

// u-breakpoints for ∫_τ^T: geometric near the endpoint (scale τ), then
// uniform steps of w in s = t - τ.
std::vector<double> abel_breaks(double tau, double T, double w) {
    std::vector<double> s{0.0};
    if (tau > 0.0)
        for (double x = tau / 64.0; x < w; x *= 4.0) s.push_back(x);
    else
        for (double x = w / 1024.0; x < w; x *= 4.0) s.push_back(x);
    for (double x = w; x < T - tau; x += w) s.push_back(x);
    s.push_back(T - tau);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<double> u;
    u.reserve(s.size());
    for (double x : s) u.push_back(std::sqrt(x));
    return u;
}

// For t >= τ+1: (cosh t - cosh τ)^{-1/2} <= kDenBound · e^{-t/2}.
constexpr double kDenBound = 2.7513;

}  // namespace

KernelValue legendre_q(cx rho, double tau, const QuadratureConfig& cfg) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw domain_error("legendre_q: tau must be positive (log singularity at 0)");
    if (!(rho.imag() < 0.5 - kStripMargin))
        throw domain_error("legendre_q: integral representation needs Im rho < 1/2");
    const double a = 0.5 - rho.imag();
    const double tol = cfg.abs_tol;
    // |integrand|/√2 <= (kDenBound/√2) e^{-a t} beyond τ+1.
    const double c = kDenBound / std::sqrt(2.0);
    double T = cfg.truncation_T > 0.0 ? cfg.truncation_T : std::log(c / (a * 0.1 * tol)) / a;
    T = std::max(T, tau + 1.0);
    const double tail = c * std::exp(-a * T) / a;

    const double w = std::min(2.0, pi / (2.0 * (std::abs(rho.real()) + 1.0)));
    if ((T - tau) / w > double(cfg.max_panels)) throw convergence_error("legendre_q: panel budget exceeded (Im rho too close to 1/2?)");
    const auto breaks = abel_breaks(tau, T, w);
    auto f = [&](double u) {
        const double s = u * u;
        return 2.0 * std::exp(-I * rho * (tau + s) - log_abel_den(tau, s));
    };
    auto est = quad::integrate_breaks(f, breaks, 0.5 * tol * std::sqrt(2.0));
    KernelValue out{est.value / std::sqrt(2.0), est.error / std::sqrt(2.0) + tail};
    if (!est.converged) throw convergence_error("legendre_q: quadrature did not converge");
    return out;
}

KernelValue green(const geom::HPoint& z, const geom::HPoint& w, cx rho, const QuadratureConfig& cfg) {
    const double tau = geom::distance(z, w);
    if (!(tau > 0.0)) throw domain_error("green: coincident points (logarithmic singularity)");
    auto q = legendre_q(rho, tau, cfg);
    return {-q.value / (2.0 * pi), q.error_estimate / (2.0 * pi)};
}

DiagonalValue regularized_green_diagonal(cx rho, cx rho_star, std::size_t terms) {
    auto pole_gap = [](cx r) {
        const double l = std::max(0.0, std::round(r.imag() - 0.5));
        return std::abs(r - I * (l + 0.5));
    };
    for (cx r : {rho, rho_star})
        if (pole_gap(r) < 1e-8) throw domain_error("regularized_green_diagonal: parameter within 1e-8 of a pole i(l+1/2)");
    if (terms == 0) terms = 1;
    cx sum{};
    for (std::size_t l = terms; l-- > 0;) {
        const double x = double(l) + 0.5;
        sum += 1.0 / (rho - I * x) - 1.0 / (rho_star - I * x);
    }
    // Σ_{l>=N} f(l+½) ≈ ∫_N^∞ f(x) dx (midpoint rule), f(x) = 1/(ρ-ix) - 1/(ρ*-ix).
    const double N = double(terms);
    sum += -I * std::log((rho - I * N) / (rho_star - I * N));
    const double d = std::abs(rho - rho_star);
    const double bound = d / (6.0 * N * N * N);
    return {-sum / (2.0 * pi * I), bound / (2.0 * pi)};
}

KernelValue point_pair_k(double tau, const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw domain_error("point_pair_k: tau must be >= 0");
    testfn::require_admissible(pair);
    const double tol = cfg.abs_tol;
    double T = tau + 1.0, tail = 0.0;
    if (cfg.truncation_T > 0.0) T = std::max(T, cfg.truncation_T);
    auto tail_at = [&](double t) {
        return pair.g_envelope ? pair.g_envelope(t) * kDenBound * 2.0 * std::exp(-0.5 * t) / (pi * std::sqrt(2.0))
                               : testfn::kInf;
    };
    if (cfg.truncation_T <= 0.0) {
        while (T < pair.g_support && tail_at(T) > 0.1 * tol && T < tau + 400.0) T += 1.0;
    }
    if (T >= pair.g_support) {
        T = std::max(pair.g_support, tau + 1e-12);
        tail = 0.0;
    } else {
        tail = tail_at(T);
    }
    if (!(T > tau)) return {cx{}, 0.0};
    const auto breaks = abel_breaks(tau, T, 0.5);
    auto f = [&](double u) {
        const double s = u * u;
        return 2.0 * pair.g_prime(tau + s) * std::exp(-log_abel_den(tau, s));
    };
    const double pref = -1.0 / (pi * std::sqrt(2.0));
    auto est = quad::integrate_breaks(f, breaks, 0.5 * tol / std::abs(pref));
    if (!est.converged) throw convergence_error("point_pair_k: quadrature did not converge");
    return {pref * est.value, std::abs(pref) * est.error + tail};
}

KernelValue identity_term(const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg) {
    testfn::require_admissible(pair);
    const double tol = cfg.abs_tol;
    double X = 8.0, tail = testfn::kInf;
    if (pair.h_envelope) {
        auto env = [&](double x) { return x * pair.h_envelope(x); };
        for (;; X *= 2.0) {
            tail = quad::integrate_to_inf(env, X, 1e-3 * tol).value / (2.0 * pi);
            if (tail < 0.1 * tol || X > 1e8) break;
        }
    } else {
        X = 200.0;
    }
    std::vector<double> br{0.0, 0.25, 0.5};
    for (double x = 1.0; x < X; x *= 2.0) br.push_back(x);
    br.push_back(X);
    // (1/4π) ∫_R = (1/2π) ∫_0^∞ by evenness.
    auto f = [&](double r) { return pair.h(cx(r)) * (r * std::tanh(pi * r)); };
    auto est = quad::integrate_breaks(f, br, 0.5 * tol * 2.0 * pi);
    if (!est.converged) throw convergence_error("identity_term: quadrature did not converge");
    return {est.value / (2.0 * pi), est.error / (2.0 * pi) + tail};
}

KernelValue identity_term_from_g(const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg) {
    testfn::require_admissible(pair);
    const double tol = cfg.abs_tol;
    double T = 1.0, tail = 0.0;
    auto tail_at = [&](double t) {
        return pair.g_envelope ? 4.7 * pair.g_envelope(t) * std::exp(-0.5 * t) / (2.0 * pi) : testfn::kInf;
    };
    while (T < pair.g_support && tail_at(T) > 0.1 * tol && T < 400.0) T += 1.0;
    if (T >= pair.g_support)
        T = pair.g_support;
    else
        tail = tail_at(T);
    std::vector<double> br{0.0};
    for (double t = 0.25; t < T; t += 0.25) br.push_back(t);
    br.push_back(T);
    auto f = [&](double t) { return pair.g_prime(t) / std::sinh(0.5 * t); };
    auto est = quad::integrate_breaks(f, br, 0.5 * tol * 2.0 * pi);
    if (!est.converged) throw convergence_error("identity_term_from_g: quadrature did not converge");
    return {-est.value / (2.0 * pi), est.error / (2.0 * pi) + tail};
}

double selberg_transform_check(const testfn::TestFunctionPair& pair, double rho, const geom::HPoint& z,
                               const QuadratureConfig& cfg) {
    testfn::require_admissible(pair);
    const cx z0 = z.to_uhp();
    const double y0 = z0.imag();
    const cx s{0.5, rho};
    const cx ys = std::exp(s * std::log(y0));

    // ∫_0^{2π} (Im w)^s dφ on the circle of radius τ about z, with
    // Im w = y0 (1-r²)/|1 - r e^{iφ}|², r = tanh(τ/2).
    auto circle = [&](double tau) {
        const double r = std::tanh(0.5 * tau);
        const double om = 2.0 / (std::exp(tau) + 1.0);  // 1 - r
        const double lc = std::log(std::cosh(0.5 * tau));
        std::vector<double> br{0.0};
        for (double p = om; p < pi; p *= 2.0) br.push_back(p);
        br.push_back(pi);
        auto f = [&](double phi) {
            const double sh = std::sin(0.5 * phi);
            const double den = om * om + 4.0 * r * sh * sh;
            return std::exp(s * (-2.0 * lc - std::log(den)));
        };
        auto est = quad::integrate_breaks(f, br, 1e-13);
        return 2.0 * ys * est.value;
    };

    // Tail beyond T: |k(τ)| <= (1/π) env_g(τ) Q_{-1/2}(cosh τ) <= (3.2/π) env_g(τ) e^{-τ/2} (τ >= 2),
    // |circle| <= 2π y0^{1/2}, sinh τ <= e^τ/2.
    const double tol = std::max(cfg.abs_tol, 1e-11);
    double T = 2.0;
    if (!pair.g_envelope) throw domain_error("selberg_transform_check: pair needs a g envelope for the tail bound");
    auto tail_from = [&](double t0) {
        auto env = [&](double t) {
            const double e = pair.g_envelope(t);
            return e == 0.0 ? 0.0 : std::exp(std::log(e) + 0.5 * t);
        };
        const auto est = quad::integrate_to_inf(env, t0, 1e-3 * tol);
        return est.converged && std::isfinite(est.value) ? 3.2 * std::sqrt(y0) * est.value : testfn::kInf;
    };
    while (T < pair.g_support && T < 200.0 && tail_from(T) > 0.1 * tol) T += 1.0;
    if (T >= 200.0) throw domain_error("selberg_transform_check: kernel decay too slow for the polar integral");
    T = std::min(T, pair.g_support);

    QuadratureConfig kcfg = cfg;
    kcfg.abs_tol = 0.01 * tol;
    auto f = [&](double tau) {
        const cx k = point_pair_k(tau, pair, kcfg).value;
        return k * std::sinh(tau) * circle(tau);
    };
    std::vector<double> br;
    for (double t = 0.0; t < T; t += 0.5) br.push_back(t);
    br.push_back(T);
    auto est = quad::integrate_breaks(f, br, tol);
    if (!est.converged) throw convergence_error("selberg_transform_check: polar quadrature did not converge");
    const cx rhs = pair.h(cx(rho)) * ys;
    return std::abs(est.value - rhs) / std::abs(rhs);
}

}  // namespace selberg::greens

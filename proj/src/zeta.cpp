#include "selberg/zeta.hpp"

#include "selberg/errors.hpp"
#include "selberg/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace selberg::zeta {

namespace {

constexpr double pi = std::numbers::pi;
const cx I{0.0, 1.0};

cx expm1c(cx z) {
    if (std::abs(z) < 1e-5) return z * (1.0 + z * (0.5 + z / 6.0));
    return std::exp(z) - 1.0;
}

// log(1 - x), accurate for small |x|.
cx log1m(cx x) {
    if (std::abs(x) < 1e-4) {
        cx s{}, p = x;
        for (int k = 1; k <= 6; ++k, p *= x) s -= p / double(k);
        return s;
    }
    return std::log(1.0 - x);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Smallest M >= 0 with Σ_{m>M} e^{-ℓ(σ+m)} / (1 - e^{-ℓ(σ+m)}) <= eps, assuming ℓ(σ+M+1) >= ln 2.
int terms_for(double ell, double sigma, double eps) {
    int M = std::max(0, int(std::ceil(std::log(2.0) / ell - sigma)));
    auto tail = [&](int m) { return 2.0 * std::exp(-ell * (sigma + m + 1)) / (1.0 - std::exp(-ell)); };
    while (tail(M) > eps && M < 10'000'000) ++M;
    return M;
}

double m_tail(double ell, double sigma, int M) {
    const double x = ell * (sigma + M + 1);
    if (x < std::log(2.0)) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(-x) / (1.0 - std::exp(-ell));
}

// Σ_m 1/(e^{(m+σ)ℓ} - 1) <= e^{-σℓ} / ((1 - e^{-ℓ})(1 - e^{-σℓ})), σ > 0.
double cylinder_envelope(double ell, double sigma) {
    return std::exp(-sigma * ell) / ((1.0 - std::exp(-ell)) * (1.0 - std::exp(-sigma * ell)));
}

}  // namespace

cx n_cylinder(cx rho, double ell, int m_max) {
    if (!(ell > 0.0)) throw domain_error("n_cylinder: length must be positive");
    // Nearest pole of the terms that matter.
    const int m0 = std::max(0, int(std::lround(rho.imag() - 0.5)));
    const int nu0 = int(std::lround(rho.real() * ell / (2.0 * pi)));
    for (int m = std::max(0, m0 - 1); m <= m0 + 1; ++m) {
        const cx p = scattering_pole(ell, nu0, m);
        if (std::abs(rho - p) < 1e-8)
            throw domain_error("n_cylinder: rho within 1e-8 of the scattering pole " + fmt(p.real()) + " + " +
                               fmt(p.imag()) + "i");
    }
    const double sigma = 0.5 - rho.imag();
    const int M = m_max >= 0 ? m_max : std::max(m0 + 1, terms_for(ell, sigma + 0.0, 1e-17));
    cx s{};
    for (int m = M; m >= 0; --m) s += 1.0 / expm1c((m + 0.5 + I * rho) * ell);
    return ell / pi * s;
}

cx scattering_pole(double ell, int nu, int m) { return {2.0 * pi * nu / ell, m + 0.5}; }

std::vector<ScatteringPole> scattering_poles(double ell, std::pair<int, int> nu_range, std::pair<int, int> m_range) {
    if (!(ell > 0.0)) throw domain_error("scattering_poles: length must be positive");
    std::vector<ScatteringPole> out;
    for (int m = m_range.first; m <= m_range.second; ++m)
        for (int nu = nu_range.first; nu <= nu_range.second; ++nu)
            out.push_back({scattering_pole(ell, nu, m), 1.0 / (pi * I)});
    return out;
}

cx contour_residue(double ell, int nu, int m, int points) {
    const cx p = scattering_pole(ell, nu, m);
    // Stay well inside the gap to the neighbouring poles.
    const double r = 0.25 * std::min(1.0, 2.0 * pi / ell);
    return quad::contour_mean([&](cx z) { return n_cylinder(z, ell); }, p, r, points);
}

std::vector<Class> primitive_classes(const group::LengthSpectrum& spectrum) {
    std::vector<Class> out;
    for (const auto& e : spectrum.entries) out.push_back({e.length, e.multiplicity});
    return out;
}

double growth_constant(const group::LengthSpectrum& spectrum) {
    const double L = spectrum.cutoff;
    double best = 0.0, count = 0.0;
    for (const auto& e : spectrum.entries) {
        count += e.multiplicity;
        if (e.length >= 0.5 * L && e.length <= L) best = std::max(best, count * e.length * std::exp(-e.length));
    }
    return std::max(1.0, 2.0 * best);
}

double class_tail(const std::function<double(double)>& w, double L, double C) {
    const double a = std::max(L, 1e-3);
    auto f = [&](double t) {
        const double v = w(t);
        if (!(v > 0.0)) return 0.0;
        return std::exp(std::log(v) + t) * (t - 1.0) / (t * t);
    };
    const double w0 = w(a);
    const double head = w0 > 0.0 ? std::exp(std::log(w0) + a) / a : 0.0;
    const double body = quad::integrate_to_inf(f, a, 1e-3 * std::max(head, 1e-300)).value;
    return C * (head + std::max(0.0, body));
}

SeriesValue n_gamma(cx rho, const group::LengthSpectrum& spectrum, int m_max) {
    if (!(rho.imag() < -0.5))
        throw domain_error("n_gamma: needs Im rho < -1/2 (the sum over classes converges only there)");
    SeriesValue out;
    for (const auto& c : primitive_classes(spectrum)) out.value += double(c.multiplicity) * n_cylinder(rho, c.length, m_max);
    const double sigma = 0.5 - rho.imag();
    out.growth_constant = growth_constant(spectrum);
    out.tail_bound = class_tail([&](double t) { return t / pi * cylinder_envelope(t, sigma); }, spectrum.cutoff,
                                out.growth_constant);
    return out;
}

cx log_cylinder_factor(cx s, double ell, int m_max) {
    if (!(s.real() > 0.0)) throw domain_error("log_cylinder_factor: needs Re s > 0");
    const int M = m_max >= 0 ? m_max : terms_for(ell, s.real(), 1e-18);
    cx acc{};
    for (int m = M; m >= 0; --m) acc += log1m(std::exp(-ell * (s + double(m))));
    return acc;
}

ZetaValue zeta_euler_product(cx s, const group::LengthSpectrum& spectrum, int m_max) {
    if (!(s.real() > 1.0 + kEulerMargin))
        throw domain_error("zeta_euler_product: needs Re s > " + fmt(1.0 + kEulerMargin));
    ZetaValue z;
    z.s = s;
    z.cutoff = spectrum.cutoff;
    double mtails = 0.0;
    for (const auto& c : primitive_classes(spectrum)) {
        const int M = m_max >= 0 ? m_max : terms_for(c.length, s.real(), 1e-18);
        z.m_max = std::max(z.m_max, M);
        z.log_value += double(c.multiplicity) * log_cylinder_factor(s, c.length, M);
        mtails += c.multiplicity * m_tail(c.length, s.real(), M);
    }
    const double sigma = s.real();
    z.tail_bound = mtails + class_tail([&](double t) { return cylinder_envelope(t, sigma); }, spectrum.cutoff,
                                       growth_constant(spectrum));
    z.value = std::exp(z.log_value);
    return z;
}

namespace {

template <class F>
cx central_derivative(const F& f, cx s) {
    const double h = 1e-3;
    return (-f(s + 2.0 * h) + 8.0 * f(s + h) - 8.0 * f(s - h) + f(s - 2.0 * h)) / (12.0 * h);
}

}  // namespace

std::pair<cx, cx> log_derivative_check(cx s, const group::LengthSpectrum& spectrum, int m_max) {
    if (!(s.real() > 1.0 + kEulerMargin))
        throw domain_error("log_derivative_check: needs Re s > " + fmt(1.0 + kEulerMargin));
    // The stencil reaches s - 2h; evaluate log Z directly (the margin is for the tail certificate).
    auto logz = [&](cx t) {
        cx acc{};
        for (const auto& c : primitive_classes(spectrum))
            acc += double(c.multiplicity) * log_cylinder_factor(t, c.length, m_max);
        return acc;
    };
    return {central_derivative(logz, s), pi * n_gamma(rho_of_s(s), spectrum, m_max).value};
}

std::pair<cx, cx> cylinder_log_derivative_check(cx s, double ell, int m_max) {
    if (!(s.real() > 0.5)) throw domain_error("cylinder_log_derivative_check: needs Re s > 1/2");
    auto f = [&](cx t) { return log_cylinder_factor(t, ell, m_max); };
    return {central_derivative(f, s), pi * n_cylinder(rho_of_s(s), ell, m_max)};
}

}  // namespace selberg::zeta

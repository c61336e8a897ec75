#include "selberg/trace.hpp"

#include "selberg/dirichlet.hpp"
#include "selberg/errors.hpp"
#include "selberg/quad.hpp"
#include "selberg/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace selberg::trace {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* key, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%.17g", key, v);
    return buf;
}

std::string join(std::initializer_list<std::string> parts) {
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += ';';
        s += p;
    }
    return s;
}

void need_h_envelope(const TestFunctionPair& pair, const char* who) {
    if (!pair.h_envelope) throw domain_error(std::string(who) + ": pair needs an h envelope for tail certificates");
}
void need_g_envelope(const TestFunctionPair& pair, const char* who) {
    if (!pair.g_envelope) throw domain_error(std::string(who) + ": pair needs a g envelope for tail certificates");
}

// ∫_x^∞ f for a positive decreasing envelope.
double envelope_tail(const std::function<double(double)>& f, double x) {
    const double head = f(x);
    if (!(head > 0.0)) return 0.0;
    return quad::integrate_to_inf(f, x, 1e-6 * head).value;
}

// h^{(k)}(x) from the Cauchy integral on |z - x| = r.
cx h_derivative(const TestFunctionPair& pair, int k, double x, double r) {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    auto f = [&](cx z) { return pair.h(z) / std::pow(z - x, k + 1); };
    return fact * quad::contour_mean(f, cx(x), r, 96);
}

// Σ_{n>N} (-1)^n n^{-p} for even p in {2, 4, 6}, from η(p) = Σ (-1)^{n-1} n^{-p}.
double alternating_tail(int p, int N) {
    const double eta = p == 2 ? pi * pi / 12.0 : p == 4 ? 7.0 * std::pow(pi, 4) / 720.0 : 31.0 * std::pow(pi, 6) / 30240.0;
    double head = 0.0;
    for (int n = N; n >= 1; --n) head += (n % 2 ? -1.0 : 1.0) * std::pow(double(n), -p);
    return -eta - head;
}

}  // namespace

double TraceReport::abs_diff() const { return spectral ? std::abs(*spectral - geometric) : nan; }

double TraceReport::rel_diff() const {
    if (!spectral) return nan;
    const double scale = std::max({std::abs(*spectral), std::abs(geometric), 1e-300});
    return abs_diff() / scale;
}

// ---------------------------------------------------------------- circle

TraceReport circle_check(const TestFunctionPair& pair, double tol) {
    testfn::require_admissible(pair);
    need_h_envelope(pair, "circle_check");
    need_g_envelope(pair, "circle_check");
    TraceReport r;
    r.formula = "poisson";
    r.parameters = pair.name;

    int M = 4;
    double htail = 0.0;
    for (;; M *= 2) {
        htail = 2.0 * envelope_tail(pair.h_envelope, M);
        if (htail <= tol || M > (1 << 22)) break;
    }
    cx spec{};
    for (int m = M; m >= 1; --m) spec += pair.h(cx(m)) + pair.h(cx(-m));
    spec += pair.h(0.0);

    int N = 1;
    double gtail = 0.0;
    for (;; N *= 2) {
        gtail = 2.0 * envelope_tail(pair.g_envelope, 2.0 * pi * N);
        if (gtail <= tol || N > (1 << 22)) break;
    }
    cx geo{};
    for (int n = N; n >= 1; --n) geo += 2.0 * pi * (pair.g(2.0 * pi * n) + pair.g(-2.0 * pi * n));
    geo += 2.0 * pi * pair.g(0.0);

    r.spectral = spec;
    r.geometric = geo;
    r.truncation_bounds = {htail, gtail};
    return r;
}

// ---------------------------------------------------------------- cotangent

std::pair<cx, cx> cot_identity_check(cx rho) {
    const double n0 = std::round(rho.real());
    if (std::abs(rho - n0) < 1e-8) throw domain_error("cot_identity_check: rho within 1e-8 of an integer");
    constexpr int M = 1'000'000;
    const cx r2 = rho * rho;
    cx s{};
    for (int m = M; m >= 1; --m) s += 2.0 / (r2 - double(m) * double(m));
    s += 1.0 / r2;
    // Σ_{m>M} 1/(m²-ρ²) by Euler–Maclaurin: ∫_M^∞ - f(M)/2 - f'(M)/12.
    const double Md = M;
    const cx z = rho / Md;
    const cx integral = (1.0 + z * z / 3.0 + z * z * z * z / 5.0) / Md;
    const cx fM = 1.0 / (Md * Md - r2);
    const cx dfM = -2.0 * Md * fM * fM;
    s -= 2.0 * (integral - 0.5 * fM - dfM / 12.0);
    const cx closed = pi / rho * std::cos(pi * rho) / std::sin(pi * rho);
    return {s, closed};
}

// ---------------------------------------------------------------- sphere

TraceReport sphere_check(const TestFunctionPair& pair, int l_max, int n_max, double tol) {
    testfn::require_admissible(pair);
    need_h_envelope(pair, "sphere_check");
    TraceReport r;
    r.formula = "sphere";
    auto xenv = [&](double x) { return 2.0 * x * pair.h_envelope(x); };

    // Spectral side: λ = l(l+1) with multiplicity 2l+1, ρ_l = l + ½.
    double stail = 0.0;
    if (l_max < 0) {
        for (l_max = 4;; l_max += 4) {
            stail = envelope_tail(xenv, l_max + 0.5);
            if (stail <= tol || l_max > 1'000'000) break;
        }
    } else {
        stail = envelope_tail(xenv, l_max + 0.5);
    }
    cx spec{};
    for (int l = l_max; l >= 0; --l) spec += double(2 * l + 1) * pair.h(cx(l + 0.5));

    // Geometric side: Poisson summation of |ρ| h(ρ) over ρ ∈ ½ + Z gives
    // Σ_n (-1)^n φ̂(2πn), φ̂(ξ) = 2 I(ξ), I(ξ) = ∫_0^∞ ρ h cos(ξρ) dρ.
    double X = 4.0;
    while (envelope_tail(xenv, X) > 0.01 * tol && X < 1e6) X *= 1.25;
    const double cut = envelope_tail(xenv, X) * 0.5;  // bound on |∫_X^∞ ρ h cos|
    auto f = [&](double p) { return p * pair.h(cx(p)); };
    auto I = [&](double xi, double qtol) {
        const double w = std::min(0.5, pi / (2.0 * xi + 1.0));
        auto e = quad::integrate([&](double p) { return f(p) * std::cos(xi * p); }, 0.0, X, qtol, w);
        if (!e.converged) throw convergence_error("sphere_check: oscillatory integral did not converge");
        return e;
    };

    // For large n, I(ξ) = Σ_{k<3} (-1)^{k+1} f^{(2k+1)}(0)/ξ^{2k+2} + R, |R| <= ∫|f^{(6)}|/ξ⁶,
    // with f^{(2k+1)}(0) = (2k+1) h^{(2k)}(0) and f^{(6)} = ρ h^{(6)} + 6 h^{(5)}.
    const double rad = std::min(1.0, 0.5 * pair.sigma);
    const cx c0 = h_derivative(pair, 0, 0.0, rad), c2 = 3.0 * h_derivative(pair, 2, 0.0, rad),
             c4 = 5.0 * h_derivative(pair, 4, 0.0, rad);
    double F6 = 0.0;
    {
        const int K = 400;
        const double dx = X / K;
        for (int k = 0; k <= K; ++k) {
            const double x = k * dx;
            const double v = std::abs(x * h_derivative(pair, 6, x, rad) + 6.0 * h_derivative(pair, 5, x, rad));
            F6 += (k == 0 || k == K ? 0.5 : 1.0) * v * dx;
        }
        F6 *= 1.5;  // grid-quadrature safety factor
    }
    auto remainder = [&](int N) {
        // 4 Σ_{n>N} F6/(2πn)⁶ <= 4 F6/(2π)⁶ · N^{-5}/5.
        return 4.0 * F6 / std::pow(2.0 * pi, 6) * std::pow(double(N), -5) / 5.0;
    };
    if (n_max < 0)
        for (n_max = 8; remainder(n_max) > tol && n_max < 100000; n_max *= 2) {
        }
    const double qtol = 0.1 * tol / (4.0 * (n_max + 1));
    auto e0 = I(0.0, qtol);
    cx geo = 2.0 * e0.value;
    double qerr = 2.0 * (e0.error + cut);
    cx alt{};
    for (int n = n_max; n >= 1; --n) {
        auto e = I(2.0 * pi * n, qtol);
        alt += (n % 2 ? -1.0 : 1.0) * e.value;
        qerr += 4.0 * (e.error + cut);
    }
    geo += 4.0 * alt;
    // 4 Σ_{n>N} (-1)^n [asymptotic terms].
    const double tp = 2.0 * pi;
    geo += 4.0 * (-c0 / std::pow(tp, 2) * alternating_tail(2, n_max) + c2 / std::pow(tp, 4) * alternating_tail(4, n_max) -
                  c4 / std::pow(tp, 6) * alternating_tail(6, n_max));

    r.parameters = join({pair.name, "l_max=" + std::to_string(l_max), "n_max=" + std::to_string(n_max)});
    r.spectral = spec;
    r.geometric = geo;
    r.truncation_bounds = {stail, qerr + remainder(n_max)};
    return r;
}

// ---------------------------------------------------------------- cylinder

TraceReport cylinder_check(double ell, const TestFunctionPair& pair, int n_max, const greens::QuadratureConfig& cfg) {
    if (!(ell > 0.0)) throw domain_error("cylinder_check: length must be positive");
    testfn::require_admissible(pair);
    need_h_envelope(pair, "cylinder_check");
    need_g_envelope(pair, "cylinder_check");
    TraceReport r;
    r.formula = "cylinder";

    // Geometric: Σ ℓ g(nℓ)/sinh(nℓ/2); tail by the geometric series for 1/sinh.
    auto ntail = [&](int N) {
        const double t = (N + 1) * ell;
        return ell * pair.g_envelope(t) * 2.0 * std::exp(-0.5 * t) / ((1.0 - std::exp(-0.5 * ell)) * (1.0 - std::exp(-t)));
    };
    int N = std::max(1, n_max);
    while (ntail(N) >= 1e-14 && N < 1'000'000) N *= 2;
    cx geo{};
    for (int n = N; n >= 1; --n) geo += ell * pair.g(n * ell) / std::sinh(0.5 * n * ell);

    // Spectral: ∫_R h n_Z = ∫_0^∞ h(ρ) [n_Z(ρ) + n_Z(-ρ)] dρ.
    const double tol = cfg.abs_tol;
    const double nz_sup = ell / pi * std::exp(-0.5 * ell) / ((1.0 - std::exp(-ell)) * (1.0 - std::exp(-0.5 * ell)));
    double X = 4.0;
    while (2.0 * nz_sup * envelope_tail(pair.h_envelope, X) > 0.1 * tol && X < 1e6) X *= 1.25;
    const double stail = 2.0 * nz_sup * envelope_tail(pair.h_envelope, X);
    auto f = [&](double p) { return pair.h(cx(p)) * (zeta::n_cylinder(cx(p), ell) + zeta::n_cylinder(cx(-p), ell)); };
    const double w = std::min(0.5, 0.25 * pi / ell);
    auto e = quad::integrate(f, 0.0, X, 0.5 * tol, w);
    if (!e.converged) throw convergence_error("cylinder_check: spectral integral did not converge");

    r.parameters = join({pair.name, fmt("ell", ell), "n_max=" + std::to_string(N)});
    r.spectral = e.value;
    r.geometric = geo;
    r.truncation_bounds = {stail + e.error, ntail(N)};
    return r;
}

// ---------------------------------------------------------------- surfaces

SurfaceModel SurfaceModel::from_group(const group::GroupSpec& spec, double L_max, const group::EnumerationOptions& opt) {
    SurfaceModel m;
    m.area = spec.genus ? 4.0 * pi * (*spec.genus - 1) : group::dirichlet_domain(spec, opt.threads).area;
    m.spectrum = group::length_spectrum(spec, L_max, 0.0, opt);
    return m;
}

GeometricSide surface_geometric_side(const SurfaceModel& model, const TestFunctionPair& pair, int n_max, double tol,
                                     Summation order) {
    testfn::require_admissible(pair);
    need_g_envelope(pair, "surface_geometric_side");
    if (!(model.area > 0.0)) throw domain_error("surface_geometric_side: area must be positive");
    GeometricSide out;
    greens::QuadratureConfig qc;
    qc.abs_tol = std::min(1e-10, 0.1 * tol);
    const auto id = greens::identity_term(pair, qc);
    out.identity = model.area * id.value;
    out.identity_error = model.area * id.error_estimate;

    const int N = std::max(1, n_max);
    auto term = [&](double ell, int n) { return ell * pair.g(n * ell) / (2.0 * std::sinh(0.5 * n * ell)); };
    if (order == Summation::per_class) {
        for (const auto& e : model.spectrum.entries) {
            cx s{};
            for (int n = N; n >= 1; --n) s += term(e.length, n);
            out.geodesic += double(e.multiplicity) * s;
        }
    } else {
        std::vector<std::pair<double, cx>> flat;
        for (const auto& e : model.spectrum.entries)
            for (int n = 1; n <= N; ++n) flat.emplace_back(n * e.length, double(e.multiplicity) * term(e.length, n));
        std::stable_sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto it = flat.rbegin(); it != flat.rend(); ++it) out.geodesic += it->second;
    }
    for (const auto& e : model.spectrum.entries) {
        const double t = (N + 1) * e.length;
        out.n_tail += e.multiplicity * e.length * pair.g_envelope(t) * std::exp(-0.5 * t) /
                      ((1.0 - std::exp(-0.5 * e.length)) * (1.0 - std::exp(-t)));
    }

    const double L = model.spectrum.cutoff;
    out.growth_constant = zeta::growth_constant(model.spectrum);
    if (L >= pair.g_support) {
        out.length_tail = 0.0;
    } else {
        auto w = [&](double t) {
            return t * pair.g_envelope(t) * std::exp(-0.5 * t) / ((1.0 - std::exp(-0.5 * t)) * (1.0 - std::exp(-t)));
        };
        out.length_tail = zeta::class_tail(w, L, out.growth_constant);
    }
    out.value = out.identity + out.geodesic;
    if (!(out.tail_bound() <= tol))
        throw convergence_error("surface_geometric_side: certified tail " + std::to_string(out.tail_bound()) +
                                " exceeds tolerance; enumerate to a larger max length");
    return out;
}

WeylReport heat_weyl_report(const SurfaceModel& model, const std::vector<double>& betas) {
    WeylReport rep;
    for (double b : betas) {
        if (!(b > 0.0 && b <= 1.0)) throw domain_error("heat_weyl_report: beta must lie in (0, 1]");
        const auto side = surface_geometric_side(model, testfn::heat_family(b), 64, 1e-8);
        const double leading = model.area / (4.0 * pi * b);
        rep.rows.push_back({b, side.value.real(), leading, side.value.real() - leading});
    }
    // Least squares for heat ≈ slope·(1/β) + intercept.
    const double n = double(rep.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : rep.rows) {
        const double x = 1.0 / row.beta;
        sx += x, sy += row.heat_trace, sxx += x * x, sxy += x * row.heat_trace;
    }
    const double den = n * sxx - sx * sx;
    if (rep.rows.size() >= 2 && den > 0.0) {
        rep.slope = (n * sxy - sx * sy) / den;
        rep.intercept = (sy - rep.slope * sx) / n;
    }
    return rep;
}

CountingCheck geodesic_counting_check(const SurfaceModel& model, const testfn::Bump& psi, double L) {
    if (!(psi.b > psi.a)) throw domain_error("geodesic_counting_check: empty bump support");
    if (model.spectrum.cutoff < L + psi.b)
        throw domain_error("geodesic_counting_check: length spectrum must be complete up to L + sup supp psi");
    CountingCheck c{};
    for (const auto& e : model.spectrum.entries) c.enumerated += e.multiplicity * psi(e.length - L);
    const double lo = std::max(L + psi.a, 1e-9), hi = L + psi.b;
    if (hi > lo) {
        auto f = [&](double t) {
            double s = 0.0;
            for (const cx& rj : model.small_eigenvalues) s += std::exp((0.5 - cx(0.0, 1.0) * rj) * t).real();
            return psi(t - L) * s / t;
        };
        c.smooth = quad::integrate(f, lo, hi, 1e-12 * std::exp(hi), (hi - lo) / 16.0).value;
    }
    c.pre_asymptotic = c.enumerated == 0.0;
    return c;
}

}  // namespace selberg::trace

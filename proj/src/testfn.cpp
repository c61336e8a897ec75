#include "selberg/testfn.hpp"

#include "selberg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace selberg::testfn {

namespace {

constexpr double pi = std::numbers::pi;
const cx I{0.0, 1.0};

double sgn(double t) { return t < 0 ? -1.0 : 1.0; }

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = double(xs.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], my += ys[k];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    return sxy / sxx;
}

// Smallest X >= x0 (doubling) with ∫_X^∞ env below tol; returns {X, tail}.
std::pair<double, double> choose_cutoff(const std::function<double(double)>& env, double x0, double tol) {
    double X = x0;
    for (;;) {
        const double tail = quad::integrate_to_inf(env, X, 1e-3 * tol).value;
        if (tail < tol || X > 1e9) return {X, tail};
        X *= 2.0;
    }
}

}  // namespace

cx TestFunctionPair::g_prime(double t) const {
    if (dg) return dg(t);
    return derivative(g, t, -kInf);
}

TestFunctionPair gaussian_family(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("gaussian_family: beta must be positive");
    TestFunctionPair p;
    p.name = "gaussian";
    const double norm = 1.0 / std::sqrt(4.0 * pi * beta);
    p.h = [beta](cx r) { return std::exp(-beta * r * r); };
    p.g = [beta, norm](double t) { return cx(norm * std::exp(-t * t / (4.0 * beta))); };
    p.dg = [beta, norm](double t) { return cx(-t / (2.0 * beta) * norm * std::exp(-t * t / (4.0 * beta))); };
    p.sigma = kInf;
    p.delta = kInf;
    p.closed_form_g = true;
    p.h_envelope = [beta](double x) { return std::exp(-beta * x * x); };
    // max(|g|,|g'|) <= (1 + t/2β) g(t); that bound peaks at s* and decreases after.
    const double s_star = beta * (std::sqrt(1.0 + 2.0 / beta) - 1.0);
    p.g_envelope = [beta, norm, s_star](double t) {
        const double s = std::max(std::abs(t), s_star);
        return (1.0 + s / (2.0 * beta)) * norm * std::exp(-s * s / (4.0 * beta));
    };
    return p;
}

TestFunctionPair heat_family(double beta) {
    TestFunctionPair p = gaussian_family(beta);
    const double f = std::exp(-0.25 * beta);
    p.name = "heat";
    p.h = [h = p.h, f](cx r) { return f * h(r); };
    p.g = [g = p.g, f](double t) { return f * g(t); };
    p.dg = [dg = p.dg, f](double t) { return f * dg(t); };
    p.h_envelope = [e = p.h_envelope, f](double x) { return f * e(x); };
    p.g_envelope = [e = p.g_envelope, f](double t) { return f * e(t); };
    return p;
}

TestFunctionPair resolvent_family(cx rho, cx rho_star) {
    if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag()) || !std::isfinite(rho_star.real()) ||
        !std::isfinite(rho_star.imag()))
        throw domain_error("resolvent_family: non-finite parameter");
    if (!(std::abs(rho.imag()) > 0.5) || !(std::abs(rho_star.imag()) > 0.5))
        throw domain_error("resolvent_family: parameters must satisfy |Im| > 1/2");
    // h depends on ρ² only; the representative with Im < 0 makes e^{-iρ|t|} decay.
    const cx r1 = rho.imag() < 0 ? rho : -rho;
    const cx r2 = rho_star.imag() < 0 ? rho_star : -rho_star;
    const cx d2 = r2 * r2 - r1 * r1;
    if (std::abs(d2) <= 1e-12 * (std::norm(r1) + std::norm(r2)))
        throw domain_error("resolvent_family: rho = ±rho_star gives the zero function");
    TestFunctionPair p;
    p.name = "resolvent";
    p.h = [r1, r2](cx x) { return 1.0 / (r1 * r1 - x * x) - 1.0 / (r2 * r2 - x * x); };
    p.g = [r1, r2](double t) {
        const double a = std::abs(t);
        return I / (2.0 * r1) * std::exp(-I * r1 * a) - I / (2.0 * r2) * std::exp(-I * r2 * a);
    };
    p.dg = [r1, r2](double t) {
        const double a = std::abs(t);
        return sgn(t) * 0.5 * (std::exp(-I * r1 * a) - std::exp(-I * r2 * a));
    };
    const double q1 = -r1.imag(), q2 = -r2.imag();
    p.sigma = std::min(q1, q2) * (1.0 - 1e-9);
    p.delta = 2.0;
    p.closed_form_g = true;
    const cx s1 = r1 * r1, s2 = r2 * r2;
    const double nd = std::abs(d2);
    // |ρ²-x²| >= max(|Im ρ²|, x² - Re ρ²), non-decreasing in x.
    p.h_envelope = [s1, s2, nd](double x) {
        const double l1 = std::max(std::abs(s1.imag()), x * x - s1.real());
        const double l2 = std::max(std::abs(s2.imag()), x * x - s2.real());
        if (!(l1 > 0) || !(l2 > 0)) return kInf;
        return nd / (l1 * l2);
    };
    const double a1 = std::abs(r1), a2 = std::abs(r2);
    p.g_envelope = [q1, q2, a1, a2](double t) {
        const double s = std::abs(t);
        const double g = std::exp(-q1 * s) / (2 * a1) + std::exp(-q2 * s) / (2 * a2);
        const double dg = 0.5 * (std::exp(-q1 * s) + std::exp(-q2 * s));
        return std::max(g, dg);
    };
    return p;
}

double Bump::operator()(double x) const {
    if (!(x > a && x < b)) return 0.0;
    const double u = (2.0 * x - a - b) / (b - a);
    return scale * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double Bump::derivative(double x) const {
    if (!(x > a && x < b)) return 0.0;
    const double u = (2.0 * x - a - b) / (b - a);
    const double w = 1.0 - u * u;
    return (*this)(x) * (-2.0 * u / (w * w)) * (2.0 / (b - a));
}

TestFunctionPair counting_family(const Bump& psi, double L) {
    if (!(L > 0.0) || !std::isfinite(L)) throw domain_error("counting_family: L must be positive");
    if (!(psi.b > psi.a)) throw domain_error("counting_family: empty bump support");
    if (!(psi.a + L > 0.0)) throw domain_error("counting_family: support of psi(t-L) must avoid t <= 0");
    const double lo = L + psi.a, hi = L + psi.b;

    TestFunctionPair p;
    p.name = "counting";
    // Only the ψ(t-L) branch lives on t > 0; t < 0 by even reflection.
    auto g_pos = [psi, L](double t) {
        if (t <= 0.0) return 0.0;
        return 2.0 * std::sinh(0.5 * t) / t * psi(t - L);
    };
    auto dg_pos = [psi, L](double t) {
        if (t <= 0.0) return 0.0;
        const double f = 2.0 * std::sinh(0.5 * t) / t;
        const double df = std::cosh(0.5 * t) / t - 2.0 * std::sinh(0.5 * t) / (t * t);
        return df * psi(t - L) + f * psi.derivative(t - L);
    };
    p.g = [g_pos](double t) { return cx(g_pos(std::abs(t))); };
    p.dg = [dg_pos](double t) { return cx(sgn(t) * dg_pos(std::abs(t))); };
    const double width = hi - lo;
    p.h = [g_pos, lo, hi, width](cx r) {
        auto f = [&](double t) { return g_pos(t) * std::cos(r * t); };
        const double w = std::min(width / 8.0, pi / (4.0 * std::abs(r) + 1.0));
        return 2.0 * quad::integrate(f, lo, hi, 1e-14, w).value;
    };
    p.sigma = kInf;
    p.delta = kInf;
    p.closed_form_g = true;
    p.g_support = hi;

    // |h(x)| <= 2∫|g| and, integrating by parts twice, <= 2∫|g''| / x².
    auto d2g = [dg_pos](double t) {
        const double e = 1e-5 * (1.0 + t);
        return (dg_pos(t + e) - dg_pos(t - e)) / (2.0 * e);
    };
    const double n0 = quad::integrate([&](double t) { return std::abs(g_pos(t)); }, lo, hi, 1e-12, width / 64).value;
    const double n2 = quad::integrate([&](double t) { return std::abs(d2g(t)); }, lo, hi, 1e-10, width / 64).value;
    p.h_envelope = [a = 2.0 * n0 * 1.001, b = 2.0 * n2 * 1.01](double x) {
        return x > 0 ? std::min(a, b / (x * x)) : a;
    };
    double m = 0.0;
    for (int k = 0; k <= 4000; ++k) {
        const double t = lo + width * k / 4000.0;
        m = std::max({m, std::abs(g_pos(t)), std::abs(dg_pos(t))});
    }
    p.g_envelope = [hi, m = 1.05 * m](double t) { return std::abs(t) > hi ? 0.0 : m; };
    return p;
}

TestFunctionPair custom_family(std::string name, SpectralFn h, double sigma, double delta,
                               std::function<double(double)> h_envelope) {
    TestFunctionPair base;
    base.name = std::move(name);
    base.h = std::move(h);
    base.sigma = sigma;
    base.delta = delta;
    base.closed_form_g = false;
    base.h_envelope = std::move(h_envelope);
    TestFunctionPair p = base;
    p.g = [base](double t) { return fourier_transform(base, t).value; };
    return p;
}

FourierResult fourier_transform(const TestFunctionPair& pair, double t, double tol) {
    const double at = std::abs(t);
    double X = 0.0, tail = 0.0;
    bool certified = true;
    if (pair.h_envelope) {
        std::tie(X, tail) = choose_cutoff(pair.h_envelope, 20.0, 0.25 * tol * pi);
    } else {
        // No envelope: stop where the sampled |h(x)|·x is negligible (heuristic).
        certified = false;
        X = 20.0;
        while (std::abs(pair.h(cx(X))) * X > tol && X < 1e6) X *= 2.0;
        tail = std::abs(pair.h(cx(X))) * X;
    }
    // Panel budget: a slowly decaying h at large |t| would otherwise need an
    // unbounded number of oscillation panels.  Exceeding it is reported.
    const double width = pi / (4.0 * at + 1.0);
    const double x_max = 4e5 * width;
    if (X > x_max) {
        X = x_max;
        certified = false;
        tail = pair.h_envelope ? quad::integrate_to_inf(pair.h_envelope, X, 1e-3 * tol).value
                               : std::abs(pair.h(cx(X))) * X;
    }
    auto f = [&](double r) { return pair.h(cx(r)) * std::cos(r * at); };
    auto est = quad::integrate(f, 0.0, X, 0.5 * tol * pi, width);
    FourierResult out;
    out.value = est.value / pi;
    out.error = (est.error + tail) / pi;
    out.converged = est.converged && certified && out.error <= 10 * tol;
    return out;
}

cx derivative(const LengthFn& f, double x, double lower_limit) {
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.2) * (1.0 + std::abs(x));
    if (x - 2.0 * h >= lower_limit)
        return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
    // One-sided fourth-order formula.
    return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2 * h) + 16.0 * f(x + 3 * h) - 3.0 * f(x + 4 * h)) /
           (12.0 * h);
}

TransformProfile q_from_g(const TestFunctionPair& pair, double tol) {
    TransformProfile prof;
    auto g = pair.g;
    prof.Q = [g](double eta) {
        if (eta < 0.0) throw domain_error("Q: eta must be >= 0");
        // arccosh(1+η/2) written as 2 asinh(√η/2) for accuracy near 0.
        return g(2.0 * std::asinh(0.5 * std::sqrt(eta)));
    };
    prof.Phi = phi_from_q(prof.Q, tol);
    return prof;
}

EstFn phi_from_q(LengthFn Q, double tol) {
    return [Q = std::move(Q), tol](double xi) {
        if (xi < 0.0) throw domain_error("Phi: xi must be >= 0");
        // η = ξ + u² removes the (η-ξ)^{-1/2} endpoint singularity.
        auto f = [&](double u) { return derivative(Q, xi + u * u, 0.0); };
        auto est = quad::integrate_to_inf(f, 0.0, tol * pi / 2.0);
        est.value *= -2.0 / pi;
        est.error *= 2.0 / pi;
        return est;
    };
}

EstFn q_from_phi(EstFn Phi, double tol) {
    return [Phi = std::move(Phi), tol](double eta) {
        if (eta < 0.0) throw domain_error("Q: eta must be >= 0");
        double inner_err = 0.0;
        bool inner_ok = true;
        auto f = [&](double u) {
            auto v = Phi(eta + u * u);
            inner_err = std::max(inner_err, v.error);
            inner_ok = inner_ok && v.converged;
            return v.value;
        };
        auto est = quad::integrate_to_inf(f, 0.0, tol / 2.0);
        est.value *= 2.0;
        est.error = 2.0 * est.error + inner_err;
        est.converged = est.converged && inner_ok;
        return est;
    };
}

HypothesisReport verify_hypotheses(const TestFunctionPair& pair, const HypothesisGrid& grid) {
    HypothesisReport rep;
    const double s_eff = std::isfinite(pair.sigma) ? pair.sigma : 2.0;
    std::vector<double> lines = grid.im_lines;
    if (lines.empty()) lines = {0.0, 0.5 * s_eff, -0.5 * s_eff, 0.99 * s_eff, -0.99 * s_eff};

    const int n = std::max(grid.n_re, 11);
    double hmax = 0.0, odd = 0.0, cr = 0.0;
    double min_exp = kInf;
    for (double y : lines) {
        std::vector<double> lx, ly;
        std::vector<double> mags(n);
        for (int k = 0; k < n; ++k) {
            const double x = -grid.re_max + 2.0 * grid.re_max * k / (n - 1);
            const cx r{x, y};
            const cx hp = pair.h(r), hm = pair.h(-r);
            hmax = std::max(hmax, std::abs(hp));
            odd = std::max(odd, std::abs(hp - hm));
            mags[k] = std::abs(hp);
            if (k % 10 == 3) {
                // Fourth-order differences along both axes; a step shrinking with
                // |x| keeps oscillation at large x resolved.
                const double e = 1e-3 / (1.0 + std::abs(x));
                auto d4 = [&](cx dir) {
                    return (8.0 * (pair.h(r + dir * e) - pair.h(r - dir * e)) -
                            (pair.h(r + 2.0 * dir * e) - pair.h(r - 2.0 * dir * e))) /
                           (12.0 * e);
                };
                const cx dx = d4(1.0), dy = d4(I);
                const double scale = std::abs(dx) + std::abs(dy);
                if (scale > 1e-250 && std::abs(hp) > 1e-250) cr = std::max(cr, std::abs(dx + I * dy) / scale);
            }
        }
        // Decay fit on the outer half, against the running tail supremum so
        // oscillation zeros do not spoil the log-log regression.
        double run = 0.0;
        std::vector<double> tail(n);
        for (int k = n - 1; k >= 0; --k) {
            const double x = -grid.re_max + 2.0 * grid.re_max * k / (n - 1);
            if (x < 0) break;
            run = std::max(run, mags[k]);
            run = std::max(run, mags[n - 1 - k]);
            tail[k] = run;
        }
        for (int k = 0; k < n; ++k) {
            const double x = -grid.re_max + 2.0 * grid.re_max * k / (n - 1);
            if (x < 0.5 * grid.re_max) continue;
            if (tail[k] > 1e-290) {
                lx.push_back(std::log(x));
                ly.push_back(std::log(tail[k]));
            }
        }
        const double p = lx.size() >= 3 ? -slope(lx, ly) : kInf;
        min_exp = std::min(min_exp, p);
    }
    rep.evenness_residual = hmax > 0 ? odd / hmax : odd;
    rep.decay_exponent = min_exp;
    rep.cr_residual = cr;
    rep.verified_order = std::isfinite(min_exp) ? std::clamp(int(std::floor(min_exp)), 0, 20) : 20;
    rep.even_ok = rep.evenness_residual < 1e-10;
    rep.decay_ok = min_exp > 2.0 + 0.05;
    rep.analytic_ok = cr < 1e-5;

    // |g(t)| ~ e^{-rt}.  Two windows: a rate that keeps growing marks
    // super-exponential decay (acceptable when σ = ∞).  Numerically
    // transformed g is only probed once h has passed the decay gate.
    if (!pair.closed_form_g && !rep.decay_ok) {
        rep.g_decay_rate = std::nan("");
        rep.g_decay_ok = false;
        return rep;
    }
    const double t_end = pair.closed_form_g ? 40.0 : 6.0;
    std::vector<double> ts, lg;
    for (double t = 1.0; t <= t_end + 1e-9; t += 0.5) {
        const double v = std::abs(pair.closed_form_g ? pair.g(t) : fourier_transform(pair, t, 1e-10).value);
        if (!(v > 1e-290)) break;
        ts.push_back(t);
        lg.push_back(std::log(v));
    }
    if (ts.size() < 6) {
        rep.g_decay_rate = kInf;  // vanishes or underflows almost at once
        rep.g_decay_ok = true;
        return rep;
    }
    const std::size_t mid = ts.size() / 2;
    const std::vector<double> t1(ts.begin(), ts.begin() + mid), t2(ts.begin() + mid, ts.end());
    const std::vector<double> l1(lg.begin(), lg.begin() + mid), l2(lg.begin() + mid, lg.end());
    const double r1 = -slope(t1, l1), r2 = -slope(t2, l2);
    rep.g_decay_rate = r2;
    const bool exp_ok = r2 >= 0.95 * std::min(s_eff, 2.0) && r2 > 0.5;
    const bool super_ok = !std::isfinite(pair.sigma) && r2 > 0.0 && r2 > 1.2 * r1;
    rep.g_decay_ok = exp_ok || super_ok;
    return rep;
}

void require_admissible(const TestFunctionPair& pair) {
    if (!pair.h || !pair.g) throw domain_error("test function pair is incomplete");
    if (!(pair.sigma > 0.5)) throw domain_error("test function pair: sigma must exceed 1/2");
    if (!(pair.delta > 0.0)) throw domain_error("test function pair: delta must be positive");
    double scale = 0.0, odd = 0.0;
    for (cx r : {cx(0.3, 0.0), cx(1.7, 0.2), cx(4.1, -0.3), cx(0.0, 0.4)}) {
        const cx a = pair.h(r), b = pair.h(-r);
        scale = std::max(scale, std::abs(a));
        odd = std::max(odd, std::abs(a - b));
    }
    if (odd > 1e-10 * std::max(scale, 1e-300)) throw domain_error("test function pair: h is not even");
}

}  // namespace selberg::testfn

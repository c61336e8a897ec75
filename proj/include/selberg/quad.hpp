#pragma once

// Global adaptive driver on Boost's Gauss-Kronrod nodes, with absolute
// tolerances and explicit panel splitting for oscillatory integrands.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace selberg::quad {

template <class T>
struct Estimate {
    T value{};
    double error = 0.0;
    bool converged = true;

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        return *this;
    }
};

// Bisections allowed per call: a fixed allowance plus a few per initial panel.
inline constexpr std::size_t kMaxSplits = 4000;
inline constexpr std::size_t kSplitsPerPanel = 8;

namespace detail {

template <class T>
struct Panel {
    double a, b;
    T value;
    double err, l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// One 15/31-point Gauss-Kronrod panel on Boost's nodes, with the QUADPACK
// error model: |K-G| is rescaled against the panel's variation (resasc)
// because K is far more accurate than G, and floored at rounding level.
template <class F>
auto gk(const F& f, double a, double b) {
    using T = decltype(f(a));
    using K = boost::math::quadrature::gauss_kronrod<double, 31>;
    using G = boost::math::quadrature::gauss<double, 15>;
    const auto& x = K::abscissa();
    const auto& wk = K::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<T, 31> fv;
    fv[0] = f(c);
    for (std::size_t i = 1; i < 16; ++i) {
        fv[2 * i - 1] = f(c - h * x[i]);
        fv[2 * i] = f(c + h * x[i]);
    }
    T rk = wk[0] * fv[0], rg = wg[0] * fv[0];
    double resabs = wk[0] * std::abs(fv[0]);
    for (std::size_t i = 1; i < 16; ++i) {
        const T s2 = fv[2 * i - 1] + fv[2 * i];
        rk += wk[i] * s2;
        resabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 0) rg += wg[i / 2] * s2;
    }
    const T mean = 0.5 * rk;
    double resasc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < 16; ++i)
        resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((rk - rg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return Panel<T>{a, b, T(rk * h), err, resabs};
}

// Global adaptive bisection: always split the panel with the largest error
// estimate, until the summed error meets `tol` or the split budget runs out.
template <class F, class T = decltype(std::declval<F>()(0.0))>
Estimate<T> global_adapt(const F& f, const std::vector<std::pair<double, double>>& segs, double tol) {
    std::vector<Panel<T>> heap, frozen;
    const std::size_t budget = kMaxSplits + kSplitsPerPanel * segs.size();
    heap.reserve(segs.size() + 2 * budget);
    double err = 0.0, l1 = 0.0, frozen_err = 0.0;
    for (auto [a, b] : segs) {
        heap.push_back(gk(f, a, b));
        err += heap.back().err;
        l1 += heap.back().l1;
    }
    std::make_heap(heap.begin(), heap.end());
    const double floor_rel = 100.0 * std::numeric_limits<double>::epsilon();
    auto done = [&] { return err + frozen_err <= tol || err + frozen_err <= floor_rel * l1 || heap.empty(); };
    bool ok = true;
    for (std::size_t n = 0; !done(); ++n) {
        if (n == budget) {
            ok = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        const Panel<T> p = heap.back();
        heap.pop_back();
        err -= p.err;
        l1 -= p.l1;
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            frozen.push_back(p);
            frozen_err += p.err;
            l1 += p.l1;
            continue;
        }
        for (const auto& q : {gk(f, p.a, m), gk(f, m, p.b)}) {
            l1 += q.l1;
            err += q.err;
            heap.push_back(q);
            std::push_heap(heap.begin(), heap.end());
        }
    }
    heap.insert(heap.end(), frozen.begin(), frozen.end());
    // Sum in position order for reproducibility of the last bits.
    std::sort(heap.begin(), heap.end(), [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
    Estimate<T> out{T{}, 0.0, ok};
    for (const auto& p : heap) {
        out.value += p.value;
        out.error += p.err;
    }
    return out;
}

inline void split_segment(std::vector<std::pair<double, double>>& out, double a, double b, double max_width) {
    const double span = b - a;
    const std::size_t n =
        std::isfinite(max_width) ? std::max<std::size_t>(1, std::size_t(std::ceil(std::abs(span) / max_width))) : 1;
    const double w = span / double(n);
    for (std::size_t k = 0; k < n; ++k) out.emplace_back(a + w * double(k), k + 1 == n ? b : a + w * double(k + 1));
}

}  // namespace detail

// ∫_a^b f with absolute tolerance `tol`; panels no wider than max_width.
template <class F>
auto integrate(const F& f, double a, double b, double tol,
               double max_width = std::numeric_limits<double>::infinity()) {
    using T = decltype(f(a));
    if (b == a) return Estimate<T>{T{}, 0.0, true};
    std::vector<std::pair<double, double>> segs;
    detail::split_segment(segs, a, b, max_width);
    return detail::global_adapt(f, segs, tol);
}

// Same, over consecutive intervals of a sorted breakpoint list.
template <class F>
auto integrate_breaks(const F& f, const std::vector<double>& pts, double tol,
                      double max_width = std::numeric_limits<double>::infinity()) {
    using T = decltype(f(0.0));
    std::vector<std::pair<double, double>> segs;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k + 1] > pts[k]) detail::split_segment(segs, pts[k], pts[k + 1], max_width);
    if (segs.empty()) return Estimate<T>{T{}, 0.0, true};
    return detail::global_adapt(f, segs, tol);
}

// ∫_a^∞ f, via u = a + s/(1-s) on s ∈ [0,1).  Suited to algebraic tails.
template <class F>
auto integrate_to_inf(const F& f, double a, double tol) {
    auto mapped = [&](double s) {
        const double om = 1.0 - s;
        const auto v = f(a + s / om);
        return v == decltype(v){} ? v : v / (om * om);
    };
    std::vector<double> pts{0.0, 0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375, 1.0};
    return integrate_breaks(mapped, pts, tol);
}

// (1/2πi)∮ f(z) dz on the circle |z-c|=r by the N-point trapezoid rule.
// Spectrally accurate for f analytic in an annulus around the circle.
template <class F>
std::complex<double> contour_mean(const F& f, std::complex<double> c, double r, int n) {
    std::complex<double> s{};
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
        const std::complex<double> e = std::polar(1.0, th);
        s += f(c + r * e) * (r * e);
    }
    return s / double(n);
}

}  // namespace selberg::quad

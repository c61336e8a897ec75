#pragma once

// Reference implementations used only by the tests.  They are written
// independently of the library routines they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {

using cx = std::complex<double>;

// log Γ(z) (mod 2πi) from the Stirling series after shifting to Re z >= 20.
inline cx lgamma(cx z) {
    const double pi = std::numbers::pi;
    if (z.real() < 0.5) return std::log(pi / std::sin(pi * z)) - lgamma(1.0 - z);
    cx shift = 0.0;
    while (z.real() < 20.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const cx w = 1.0 / z, w2 = w * w;
    const cx series = w * (1.0 / 12 - w2 * (1.0 / 360 - w2 * (1.0 / 1260 - w2 * (1.0 / 1680 - w2 / 1188.0))));
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2 * pi) + series - shift;
}

// 2F1(a, b; c; x) by its power series, |x| < 1.
inline cx hyp2f1(cx a, cx b, cx c, double x) {
    cx term = 1.0, sum = 1.0;
    for (int n = 0; n < 4000; ++n) {
        term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * x;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Q_ν(cosh τ) = √π Γ(ν+1)/Γ(ν+3/2) e^{-(ν+1)τ} (1-e^{-2τ})^{-1/2} F(½,½;ν+3/2; 1/(1-e^{2τ})),
// valid for τ > ln(2)/2 where the series variable has modulus < 1.
inline cx legendre_q_hyp(cx nu, double tau) {
    const double x = 1.0 / (1.0 - std::exp(2.0 * tau));
    const cx ratio = std::exp(lgamma(nu + 1.0) - lgamma(nu + 1.5));
    return std::sqrt(std::numbers::pi) * ratio * std::exp(-(nu + 1.0) * tau) / std::sqrt(1.0 - std::exp(-2.0 * tau)) *
           hyp2f1(0.5, 0.5, nu + 1.5, x);
}

// Composite Simpson rule on [a,b] with n (even) intervals.
template <class F>
auto simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + h * k);
    return s * (h / 3.0);
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 r(20240917);
    return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace oracle

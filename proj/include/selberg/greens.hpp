#pragma once

#include "selberg/geom.hpp"
#include "selberg/testfn.hpp"

#include <complex>
#include <cstddef>

namespace selberg::greens {

using cx = std::complex<double>;

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_panels = 200000;
    double truncation_T = 0.0;  // 0: chosen from the analytic tail bound
};

struct KernelValue {
    cx value;
    double error_estimate = 0.0;
};

inline constexpr double kStripMargin = 1e-6;

// Q_{-1/2+iρ}(cosh τ) = (1/√2) ∫_τ^∞ e^{-iρt} (cosh t - cosh τ)^{-1/2} dt.
// Requires Im ρ < 1/2 - kStripMargin and τ > 0.
KernelValue legendre_q(cx rho, double tau, const QuadratureConfig& cfg = {});

// G_ρ(z,w) = -(1/2π) Q_{-1/2+iρ}(cosh d(z,w)); z = w is rejected.
KernelValue green(const geom::HPoint& z, const geom::HPoint& w, cx rho, const QuadratureConfig& cfg = {});

struct DiagonalValue {
    cx value;
    double tail_bound = 0.0;
};

// lim_{w→z} [G_ρ - G_ρ*] as the series
//   -(1/2πi) Σ_{l>=0} [1/(ρ - i(l+½)) - 1/(ρ* - i(l+½))],
// `terms` explicit terms plus a midpoint-rule integral for the remainder.
DiagonalValue regularized_green_diagonal(cx rho, cx rho_star, std::size_t terms = 100000);

// k(τ) = -(1/(π√2)) ∫_τ^∞ g'(t) (cosh t - cosh τ)^{-1/2} dt, finite at τ = 0.
KernelValue point_pair_k(double tau, const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg = {});

// k(z,z) = (1/4π) ∫ h(ρ) tanh(πρ) ρ dρ; real whenever h is real on the real axis.
KernelValue identity_term(const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg = {});

// The same quantity as -(1/2π) ∫_0^∞ g'(t)/sinh(t/2) dt.
KernelValue identity_term_from_g(const testfn::TestFunctionPair& pair, const QuadratureConfig& cfg = {});

// Relative residual |∫ k(z,w) f(w) dμ(w) - h(ρ) f(z)| / |h(ρ) f(z)| for the
// eigenfunction f(w) = (Im w)^{1/2+iρ}, integrated in polar coordinates about z.
double selberg_transform_check(const testfn::TestFunctionPair& pair, double rho, const geom::HPoint& z,
                               const QuadratureConfig& cfg = {});

}  // namespace selberg::greens

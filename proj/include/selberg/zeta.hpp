#pragma once

// Hyperbolic cylinder spectral density n_Z, its sum over a length spectrum,
// and the Selberg zeta function as an Euler product in Re s > 1.

#include "selberg/group.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace selberg::zeta {

using cx = std::complex<double>;

// n_Z(ρ) = (ℓ/π) Σ_{m>=0} {exp[(m+½+iρ)ℓ] - 1}^{-1}.  m_max < 0 picks the
// truncation so the omitted terms are below 1e-15 of the leading scale.
// Throws domain_error when ρ is within 1e-8 of a pole (message names it).
cx n_cylinder(cx rho, double ell, int m_max = -1);

struct ScatteringPole {
    cx rho;
    cx residue;
};

// ρ_{νm} = (2π/ℓ)ν + i(m+½), residue 1/(πi).
cx scattering_pole(double ell, int nu, int m);
std::vector<ScatteringPole> scattering_poles(double ell, std::pair<int, int> nu_range, std::pair<int, int> m_range);

// (1/2πi)∮ n_Z on a circle about the pole; should equal 1/(πi).
cx contour_residue(double ell, int nu, int m, int points = 256);

// Single primitive class counted `multiplicity` times.
struct Class {
    double length;
    int multiplicity;
};
std::vector<Class> primitive_classes(const group::LengthSpectrum& spectrum);

struct SeriesValue {
    cx value;
    double tail_bound = 0.0;  // omitted classes beyond the cutoff (Π(t) <= C e^t/t)
    double growth_constant = 0.0;
};

// Constant C with Π(t) <= C e^t/t used for beyond-cutoff tails:
// max(1, 2 max_{t in [L/2, L]} Π(t) t e^{-t}).
double growth_constant(const group::LengthSpectrum& spectrum);

// Bound for Σ_{classes with ℓ > L} w(ℓ), w positive and decreasing with
// w(t) e^t → 0, given Π(t) <= C e^t/t.
double class_tail(const std::function<double(double)>& w, double L, double C);

// n_Γ(ρ) = Σ_γ n_{Z_γ}(ρ) over primitive classes; requires Im ρ < -1/2.
SeriesValue n_gamma(cx rho, const group::LengthSpectrum& spectrum, int m_max = -1);

struct ZetaValue {
    cx s;
    cx value;
    cx log_value;
    double cutoff = 0.0;
    int m_max = 0;
    double tail_bound = 0.0;  // on log Z
};

inline constexpr double kEulerMargin = 0.05;

// Z(s) = Π_γ Π_m (1 - e^{-ℓ(s+m)}); Re s > 1 + kEulerMargin.
ZetaValue zeta_euler_product(cx s, const group::LengthSpectrum& spectrum, int m_max = -1);

// log Π_m (1 - e^{-ℓ(s+m)}) for one cylinder, any Re s > 0.
cx log_cylinder_factor(cx s, double ell, int m_max = -1);

// (d/ds log Z by central differences of the Euler product, π n_Γ(ρ)), s = ½ + iρ.
std::pair<cx, cx> log_derivative_check(cx s, const group::LengthSpectrum& spectrum, int m_max = -1);
// Same for a single cylinder of length ℓ.
std::pair<cx, cx> cylinder_log_derivative_check(cx s, double ell, int m_max = -1);

inline cx rho_of_s(cx s) { return cx(0.0, -1.0) * (s - 0.5); }

}  // namespace selberg::zeta

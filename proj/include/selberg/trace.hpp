#pragma once

// Both sides of the trace formulas for the circle, the sphere and the
// hyperbolic cylinder, and the geometric side for compact surfaces.

#include "selberg/greens.hpp"
#include "selberg/group.hpp"
#include "selberg/testfn.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selberg::trace {

using cx = std::complex<double>;
using testfn::TestFunctionPair;

struct TraceReport {
    std::string formula;
    std::string parameters;
    std::optional<cx> spectral;  // absent where only the geometric side is computable
    cx geometric;
    std::pair<double, double> truncation_bounds{0.0, 0.0};  // (spectral, geometric)

    double tail_bound() const { return truncation_bounds.first + truncation_bounds.second; }
    double abs_diff() const;  // NaN without a spectral side
    double rel_diff() const;
};

// Σ_m h(m) against Σ_n 2π g(2πn).
TraceReport circle_check(const TestFunctionPair& pair, double tol = 1e-15);

// (Σ_m (ρ²-m²)^{-1}, (π/ρ) cot(πρ)); series by symmetric partial sums to 10⁶
// with an Euler–Maclaurin tail.  Throws domain_error within 1e-8 of an integer.
std::pair<cx, cx> cot_identity_check(cx rho);

// Σ_l (2l+1) h(l+½) against 2 Σ_n (-1)^n ∫_0^∞ ρ h(ρ) cos(2πnρ) dρ.
// l_max < 0 chooses the cutoff from the envelope; n_max < 0 likewise.
TraceReport sphere_check(const TestFunctionPair& pair, int l_max = -1, int n_max = -1, double tol = 1e-12);

// Σ_{n>=1} ℓ g(nℓ)/sinh(nℓ/2) against ∫ h(ρ) n_Z(ρ) dρ.
TraceReport cylinder_check(double ell, const TestFunctionPair& pair, int n_max = 64,
                           const greens::QuadratureConfig& cfg = {});

struct SurfaceModel {
    double area = 0.0;
    group::LengthSpectrum spectrum;  // primitive oriented classes, complete to spectrum.cutoff
    std::vector<cx> small_eigenvalues{cx(0.0, 0.5)};  // ρ_j for the eigenvalues below ¼

    static SurfaceModel from_group(const group::GroupSpec& spec, double L_max, const group::EnumerationOptions& opt = {});
};

struct GeometricSide {
    cx value;
    cx identity;
    cx geodesic;
    double identity_error = 0.0;
    double n_tail = 0.0;       // omitted repetitions n > n_max
    double length_tail = 0.0;  // omitted classes beyond the cutoff
    double growth_constant = 0.0;

    double tail_bound() const { return identity_error + n_tail + length_tail; }
};

enum class Summation { per_class, flattened };

// Area/4π ∫ h tanh(πρ) ρ dρ + Σ_γ Σ_{n<=n_max} ℓ_γ g(nℓ_γ)/(2 sinh(nℓ_γ/2)).
// Throws convergence_error when the certified tail exceeds tol.
GeometricSide surface_geometric_side(const SurfaceModel& model, const TestFunctionPair& pair, int n_max = 64,
                                     double tol = 1e-6, Summation order = Summation::per_class);

struct WeylRow {
    double beta;
    double heat_trace;
    double leading;  // Area/(4πβ)
    double difference;
};

struct WeylReport {
    std::vector<WeylRow> rows;
    double slope = 0.0;  // least-squares fit heat_trace ≈ slope/β + c
    double intercept = 0.0;
};

// Betas in (0, 1].
WeylReport heat_weyl_report(const SurfaceModel& model, const std::vector<double>& betas);

struct CountingCheck {
    double enumerated;  // Σ over primitive classes of ψ(ℓ - L)
    double smooth;      // ∫ ψ(t - L) Σ_j e^{(½ - iρ_j) t}/t dt
    bool pre_asymptotic = false;
    double ratio() const { return enumerated / smooth; }
};

CountingCheck geodesic_counting_check(const SurfaceModel& model, const testfn::Bump& psi, double L);

}  // namespace selberg::trace

#pragma once

#include "selberg/quad.hpp"

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace selberg::testfn {

using cx = std::complex<double>;
using SpectralFn = std::function<cx(cx)>;
using LengthFn = std::function<cx(double)>;
using EstFn = std::function<quad::Estimate<cx>(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Even spectral test function h together with its transform
//   g(t) = (1/2π) ∫ h(ρ) e^{-iρt} dρ
// and the bounds used to certify truncated sums and integrals.
struct TestFunctionPair {
    std::string name;
    SpectralFn h;
    LengthFn g;
    LengthFn dg;  // g'; may be empty, then differentiated numerically
    double sigma = 0.0;
    double delta = 0.0;
    bool closed_form_g = false;

    // For x >= 0: an upper bound for sup_{y>=x} |h(y)|, y real (non-increasing in x).
    std::function<double(double)> h_envelope;
    // For t >= 0: an upper bound for sup_{s>=t} max(|g(s)|, |g'(s)|).
    std::function<double(double)> g_envelope;
    // g vanishes for |t| > g_support.
    double g_support = kInf;

    cx g_prime(double t) const;
};

// h(ρ) = e^{-βρ²},  g(t) = e^{-t²/(4β)} / √(4πβ).
TestFunctionPair gaussian_family(double beta);

// Heat pair h(ρ) = e^{-β(ρ²+1/4)} (eigenvalue λ = ρ²+1/4).
TestFunctionPair heat_family(double beta);

// h(ρ') = (ρ²-ρ'²)^{-1} - (ρ*²-ρ'²)^{-1}.
TestFunctionPair resolvent_family(cx rho, cx rho_star);

// Smooth bump exp(1 - 1/(1-u²)) on [a,b] (u the affine image in (-1,1)),
// peak value `scale` at the midpoint.
struct Bump {
    double a = -1.0;
    double b = 1.0;
    double scale = 1.0;

    double operator()(double x) const;
    double derivative(double x) const;
};

// g(t) = 2 sinh(t/2)/t · [ψ(t-L) + ψ(-t-L)], h computed by quadrature.
TestFunctionPair counting_family(const Bump& psi, double L);

// Pair defined only by h; g through fourier_transform.  `h_envelope` as in
// TestFunctionPair (may be empty: then no tail certificates are available).
TestFunctionPair custom_family(std::string name, SpectralFn h, double sigma, double delta,
                               std::function<double(double)> h_envelope = {});

struct FourierResult {
    cx value;
    double error = 0.0;
    bool converged = true;
};

// Numerical g(t) from h: (1/π) ∫_0^∞ h(ρ) cos(ρt) dρ, panels ≤ π/(4|t|+1).
FourierResult fourier_transform(const TestFunctionPair& pair, double t, double tol = 1e-12);

// Q(η) = g(arccosh(1+η/2)),  Φ(ξ) = -(1/π) ∫_ξ^∞ Q'(η) (η-ξ)^{-1/2} dη.
struct TransformProfile {
    LengthFn Q;
    EstFn Phi;
};

TransformProfile q_from_g(const TestFunctionPair& pair, double tol = 1e-11);
EstFn phi_from_q(LengthFn Q, double tol = 1e-11);
// Q(η) = ∫_η^∞ Φ(ξ) (ξ-η)^{-1/2} dξ.
EstFn q_from_phi(EstFn Phi, double tol = 1e-11);

// Q' by fourth-order differences, step ε^{1/5}(1+η); one-sided near η = 0.
cx derivative(const LengthFn& f, double x, double lower_limit = 0.0);

struct HypothesisGrid {
    double re_max = 50.0;
    int n_re = 201;
    std::vector<double> im_lines;  // empty: {0, ±σ/2, ±0.99σ} with σ capped at 2
};

struct HypothesisReport {
    double evenness_residual = 0.0;  // max |h(ρ)-h(-ρ)| / max |h|
    double decay_exponent = 0.0;     // fitted p in |h| ~ |Re ρ|^{-p}, min over lines
    double cr_residual = 0.0;        // relative Cauchy-Riemann defect
    double g_decay_rate = 0.0;       // fitted r in |g(t)| ~ e^{-r t}
    int verified_order = 0;          // largest N with p >= N (capped at 20)
    bool even_ok = false;
    bool decay_ok = false;
    bool analytic_ok = false;
    bool g_decay_ok = false;

    bool pass() const { return even_ok && decay_ok && analytic_ok && g_decay_ok; }
};

HypothesisReport verify_hypotheses(const TestFunctionPair& pair, const HypothesisGrid& grid = {});

// Cheap gate used before kernels are built: evenness at a few points and
// sensible (σ, δ).  Throws domain_error.
void require_admissible(const TestFunctionPair& pair);

}  // namespace selberg::testfn

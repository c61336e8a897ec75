#include "oracles.hpp"

#include <selberg/errors.hpp>
#include <selberg/testfn.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace selberg::testfn;
using std::numbers::pi;

TEST_CASE("gaussian family closed form") {
    const auto p = gaussian_family(1.0);
    CHECK(p.closed_form_g);
    CHECK(std::isinf(p.sigma));
    CHECK(p.g(0).real() == doctest::Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-15));
    CHECK(p.g(0).real() == doctest::Approx(0.2820948).epsilon(1e-7));
    CHECK(p.h(2.0).real() == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(p.h(-2.0) == p.h(2.0));
    // Standard normal density at 1: the transform of e^{-ρ²/2}.
    const auto q = gaussian_family(0.5);
    CHECK(q.g(1.0).real() == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * pi)).epsilon(1e-15));
    CHECK(q.g(1.0).real() == doctest::Approx(0.2419707).epsilon(1e-7));
    CHECK_THROWS_AS(gaussian_family(0.0), selberg::domain_error);
    CHECK_THROWS_AS(gaussian_family(-1.0), selberg::domain_error);
}

TEST_CASE("gaussian envelope dominates g and g'") {
    for (double beta : {0.01, 0.3, 1.0, 5.0}) {
        const auto p = gaussian_family(beta);
        for (double t = 0; t < 20; t += 0.01) {
            CHECK(std::abs(p.g(t)) <= p.g_envelope(t) * (1 + 1e-14));
            CHECK(std::abs(p.g_prime(t)) <= p.g_envelope(t) * (1 + 1e-14));
        }
    }
}

TEST_CASE("resolvent family values and rejection") {
    const cx r{0.3, -1.2}, rs{-0.7, -2.0};
    const auto p = resolvent_family(r, rs);
    CHECK(std::abs(p.h(0.0) - (1.0 / (r * r) - 1.0 / (rs * rs))) < 1e-15);
    const auto q = resolvent_family(cx(0, -2), cx(0, -3));
    CHECK(std::abs(q.h(1.0) - cx(-0.1)) < 1e-15);
    CHECK_THROWS_AS(resolvent_family(r, r), selberg::domain_error);
    CHECK_THROWS_AS(resolvent_family(r, -r), selberg::domain_error);
    CHECK_THROWS_AS(resolvent_family(cx(1, 0), rs), selberg::domain_error);
    CHECK_THROWS_AS(resolvent_family(cx(1, 0.4), rs), selberg::domain_error);
    // Sign of the parameters does not matter: h depends on ρ² only.
    const auto p2 = resolvent_family(-r, rs);
    CHECK(std::abs(p2.g(0.7) - p.g(0.7)) < 1e-15);
}

TEST_CASE("resolvent closed-form transform matches numerical transform") {
    const auto p = resolvent_family(cx(0.3, -1.2), cx(-0.7, -2.0));
    for (double t : {0.0, 0.5, 2.0}) {
        const auto f = fourier_transform(p, t, 1e-10);
        CHECK(f.converged);
        CHECK(std::abs(f.value - p.g(t)) < 1e-8);
    }
    for (double x : {0.0, 1.0, 3.0, 10.0, 100.0})
        for (double y = x; y < x + 50; y += 0.7) CHECK(std::abs(p.h(y)) <= p.h_envelope(x) * (1 + 1e-12));
}

TEST_CASE("counting family") {
    const Bump psi{-1, 1};
    CHECK(psi(0.0) == 1.0);
    const auto p = counting_family(psi, 10.0);
    CHECK(p.g(10.0).real() == doctest::Approx(2 * std::sinh(5.0) / 10.0).epsilon(1e-15));
    for (double t = -12; t <= 12; t += 0.173) CHECK(p.g(t) == p.g(-t));
    CHECK(p.g(0.0) == 0.0);
    // h(0) = ∫ g: Simpson on each half of the support.
    auto gr = [&](double t) { return p.g(t).real(); };
    const double ref = 2.0 * oracle::simpson(gr, 9.0, 11.0, 20000);
    CHECK(std::abs(p.h(0.0).real() - ref) < 1e-8);
    // Against the transform of g at a non-zero frequency.
    const double r = 2.3;
    auto gc = [&](double t) { return p.g(t).real() * std::cos(r * t); };
    CHECK(std::abs(p.h(r).real() - 2.0 * oracle::simpson(gc, 9.0, 11.0, 20000)) < 1e-8);
    CHECK_THROWS_AS(counting_family(Bump{-5, 1}, 4.0), selberg::domain_error);
    CHECK_THROWS_AS(counting_family(psi, 0.0), selberg::domain_error);
}

TEST_CASE("counting envelope bounds h on the real line") {
    const auto p = counting_family(Bump{-1, 1}, 6.0);
    for (double x = 0.0; x < 60; x += 0.37) CHECK(std::abs(p.h(x)) <= p.h_envelope(x));
}

TEST_CASE("numerical fourier transform of the gaussian") {
    const auto p = gaussian_family(1.0);
    for (double t : {0.0, 1.0, 5.0}) {
        const auto f = fourier_transform(p, t);
        CHECK(f.converged);
        CHECK(std::abs(f.value - p.g(t)) < 1e-10);
        CHECK(std::abs(f.value.imag()) < 1e-12);
        const auto m = fourier_transform(p, -t);
        CHECK(m.value == f.value);
    }
    CHECK(fourier_transform(p, 0.0).value.real() == doctest::Approx(0.2820948).epsilon(1e-7));
}

TEST_CASE("Abel transform round trip with a closed-form pair") {
    LengthFn Q = [](double eta) { return cx(1.0 / (1.0 + eta)); };
    const auto Phi = phi_from_q(Q);
    for (double xi : {0.0, 0.5, 3.0, 40.0}) {
        const auto v = Phi(xi);
        CHECK(v.converged);
        CHECK(std::abs(v.value - 0.5 * std::pow(1 + xi, -1.5)) < 1e-9);
    }
    const auto Q2 = q_from_phi(Phi, 1e-9);
    for (double eta : {0.0, 1.0, 10.0}) {
        const auto v = Q2(eta);
        CHECK(std::abs(v.value - Q(eta)) < 1e-6);
    }
}

TEST_CASE("gaussian transform chain") {
    const auto p = gaussian_family(1.0);
    const auto prof = q_from_g(p);
    CHECK(prof.Q(0.0) == p.g(0.0));
    for (double t : {0.3, 1.0, 2.5}) CHECK(std::abs(prof.Q(2 * (std::cosh(t) - 1)) - p.g(t)) < 1e-15);

    const auto back = q_from_phi(prof.Phi, 1e-9);
    for (double eta : {0.0, 0.5, 2.0, 8.0}) {
        const auto v = back(eta);
        CHECK(std::abs(v.value - prof.Q(eta)) < std::max(1e-6, 10 * v.error));
        CHECK(std::abs(v.value - prof.Q(eta)) < 1e-6);
    }

    // Decay of Φ beyond ξ = 10: log-log slope at most -1.
    double prev = std::abs(prof.Phi(10.0).value);
    for (double xi : {20.0, 40.0, 80.0}) {
        const double cur = std::abs(prof.Phi(xi).value);
        CHECK(cur < prev);
        CHECK(std::log(cur / prev) / std::log(2.0) <= -1.0);
        prev = cur;
    }
}

TEST_CASE("hypothesis report on shipped and counter-example functions") {
    const auto gr = verify_hypotheses(gaussian_family(1.0));
    CHECK(gr.pass());
    CHECK(gr.verified_order == 20);

    const auto rr = verify_hypotheses(resolvent_family(cx(0, -2), cx(0, -3)));
    CHECK(rr.even_ok);
    CHECK(rr.decay_exponent == doctest::Approx(4.0).epsilon(0.02));
    CHECK(rr.verified_order >= 3);
    CHECK(rr.pass());

    const auto slow = custom_family(
        "lorentz", [](cx r) { return 1.0 / (1.0 + r * r); }, 0.9, 0.0);
    const auto sr = verify_hypotheses(slow);
    CHECK_FALSE(sr.decay_ok);
    CHECK(sr.decay_exponent - 2.0 <= 0.0);
    CHECK(sr.decay_exponent == doctest::Approx(2.0).epsilon(0.01));
    CHECK_FALSE(sr.pass());

    const auto odd = custom_family(
        "odd", [](cx r) { return r * std::exp(-r * r); }, 1.0, 1.0);
    const auto orr = verify_hypotheses(odd);
    CHECK_FALSE(orr.even_ok);
    CHECK_FALSE(orr.pass());

    const auto cr = verify_hypotheses(counting_family(Bump{-0.5, 0.5}, 7.0), HypothesisGrid{50.0, 101, {}});
    CHECK(cr.even_ok);
    CHECK(cr.analytic_ok);
}

TEST_CASE("shipped families are even to 1e-12 on the grid") {
    const std::vector<TestFunctionPair> fams = {gaussian_family(1.0), heat_family(0.1),
                                                resolvent_family(cx(0.3, -1.2), cx(-0.7, -2.0)),
                                                counting_family(Bump{-1, 1}, 5.0)};
    for (const auto& p : fams) {
        double worst = 0;
        for (double x = -50; x <= 50; x += 2.5)
            for (double y : {0.0, 0.25, -0.25, 0.5})
                worst = std::max(worst, std::abs(p.h(cx(x, y)) - p.h(cx(-x, -y))));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("admissibility gate") {
    CHECK_NOTHROW(require_admissible(gaussian_family(2.0)));
    CHECK_THROWS_AS(require_admissible(custom_family(
                        "odd", [](cx r) { return r * std::exp(-r * r); }, 1.0, 1.0)),
                    selberg::domain_error);
    CHECK_THROWS_AS(require_admissible(custom_family(
                        "narrow", [](cx r) { return std::exp(-r * r); }, 0.4, 1.0)),
                    selberg::domain_error);
}

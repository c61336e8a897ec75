#include "oracles.hpp"

#include <selberg/errors.hpp>
#include <selberg/geom.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace selberg::geom;
using oracle::uniform;

namespace {

Isometry random_isometry() {
    const double a = uniform(0.3, 2.5) * (uniform(0, 1) < 0.5 ? -1 : 1);
    const double b = uniform(-2, 2), c = uniform(-2, 2);
    return Isometry::from_entries(a, b, c, (1.0 + b * c) / a);
}

cx random_point() { return {uniform(-3, 3), std::exp(uniform(-2, 2))}; }

}  // namespace

TEST_CASE("distance between points on the imaginary axis is ln of the ratio") {
    CHECK(distance(cx(0, 1), cx(0, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(distance(cx(0, 1), cx(0, 2)) == doctest::Approx(std::acosh(1.25)).epsilon(1e-14));
    CHECK(distance(cx(0.3, 0.7), cx(0.3, 0.7)) == 0.0);
}

TEST_CASE("distance is invariant under a diagonal isometry") {
    const auto g = Isometry::from_entries(2, 0, 0, 0.5);
    const cx z{0, 1}, w{1, 1};
    CHECK(std::abs(distance(g.apply(z), g.apply(w)) - distance(z, w)) < 1e-12);
}

TEST_CASE("boundary points are rejected") {
    CHECK_THROWS_AS(distance(cx(0, 0), cx(0, 1)), selberg::domain_error);
    CHECK_THROWS_AS(distance(HPoint::disk({1.0, 0.0}), HPoint::uhp({0, 1})), selberg::domain_error);
    CHECK_THROWS_AS(HPoint::uhp({1, -1}).to_uhp(), selberg::domain_error);
}

TEST_CASE("fractional linear action") {
    const cx z{0.4, 1.3};
    CHECK(std::abs(Isometry{}.apply(z) - z) == 0.0);
    CHECK(std::abs(Isometry::from_entries(1, 1, 0, 1).apply(cx(0, 1)) - cx(1, 1)) < 1e-15);
    CHECK(std::abs(Isometry::from_entries(0, 1, -1, 0).apply(cx(0, 2)) - cx(0, 0.5)) < 1e-15);
    for (int k = 0; k < 50; ++k) {
        const auto g = random_isometry();
        const cx w = random_point();
        const cx gw = g.apply(w);
        CHECK(gw.imag() > 0);
        CHECK(gw.imag() == doctest::Approx(w.imag() / std::norm(g.c() * w + g.d())).epsilon(1e-12));
    }
}

TEST_CASE("translation length from the trace") {
    const auto g = Isometry::from_entries(2, 1, 1, 1);  // trace 3
    // arccosh(x) = ln(x + sqrt(x²-1))
    CHECK(length_of(g) == doctest::Approx(2.0 * std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-14));
    CHECK(length_of(g) == doctest::Approx(1.9248473).epsilon(1e-7));
    CHECK(classify(g) == IsometryClass::hyperbolic);
    CHECK(length_of(Isometry{}) == 0.0);
    CHECK(classify(Isometry{}) == IsometryClass::identity);
    CHECK(classify(Isometry::from_entries(1, 1, 0, 1)) == IsometryClass::parabolic);
    CHECK(classify(Isometry::from_entries(0, 1, -1, 0)) == IsometryClass::elliptic);
    bool near = false;
    const double e = 1e-11;
    CHECK(classify(Isometry::from_entries(1 + e, 1, e, (1 + e) / (1 + e) + e / (1 + e) - e / (1 + e)), &near) ==
          IsometryClass::parabolic);
}

TEST_CASE("length is a conjugacy invariant") {
    for (int k = 0; k < 100; ++k) {
        const auto g = random_isometry(), h = random_isometry();
        const auto c = h * g * h.inverse();
        // trace is defined up to sign in PSL(2,R)
        CHECK(std::abs(std::abs(c.trace()) - std::abs(g.trace())) < 1e-10 * (1 + std::abs(g.trace())));
        if (classify(g) == IsometryClass::hyperbolic && std::abs(std::abs(g.trace()) - 2) > 1e-3)
            CHECK(std::abs(length_of(c) - length_of(g)) < 1e-10);
    }
}

TEST_CASE("composition, inverse and associativity") {
    for (int k = 0; k < 100; ++k) {
        const auto f = random_isometry(), g = random_isometry(), h = random_isometry();
        CHECK(matrix_distance(compose(g, invert(g)), Isometry{}) < 1e-12);
        CHECK(std::abs(invert(g).trace()) == doctest::Approx(std::abs(g.trace())));
        CHECK(matrix_distance((f * g) * h, f * (g * h)) < 1e-12 * 100);
    }
}

TEST_CASE("canonical sign and determinant after long products") {
    const auto m = Isometry::from_entries(-2, -1, -1, -1);
    CHECK(m.a() == 2.0);
    CHECK(Isometry::from_entries(0, -1, 1, 0).b() == 1.0);
    Isometry p;
    for (int k = 0; k < 2000; ++k) {
        p = p * random_isometry();
        double mx = 0;
        for (double x : p.entries()) mx = std::max(mx, std::abs(x));
        if (mx > 1e3) p = Isometry{};
        // renormalized past 1e-13 drift; det itself only resolves ~eps·|m|².
        CHECK(std::abs(p.det() - 1.0) < 1e-13 + 8 * std::numeric_limits<double>::epsilon() * mx * mx);
    }
}

TEST_CASE("non-unit determinant is rejected") {
    CHECK_THROWS_AS(Isometry::from_entries(0.9, 0, 0, 1), selberg::domain_error);
    CHECK_THROWS_AS(Isometry::from_entries(1, 0, 0, -1), selberg::domain_error);
}

TEST_CASE("triangle inequality on random triples") {
    for (int k = 0; k < 500; ++k) {
        const cx x = random_point(), y = random_point(), z = random_point();
        CHECK(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-12);
    }
}

TEST_CASE("disk and half-plane distances agree") {
    for (int k = 0; k < 500; ++k) {
        const cx a = std::polar(std::sqrt(uniform(0, 0.98)), uniform(0, 6.3));
        const cx b = std::polar(std::sqrt(uniform(0, 0.98)), uniform(0, 6.3));
        const double dd = distance(HPoint::disk(a), HPoint::disk(b));
        const double du = distance(disk_to_uhp(a), disk_to_uhp(b));
        CHECK(std::abs(dd - du) < 1e-12 * (1 + dd));
    }
}

TEST_CASE("polar radius is the distance to the centre") {
    for (double tau : {0.0, 1e-6, 0.3, 2.0, 7.5, 15.0}) {
        const double phi = uniform(0, 6.3);
        CHECK(std::abs(distance(HPoint::polar(tau, phi), HPoint::uhp({0, 1})) - tau) < 1e-12 * (1 + tau) * 10);
        CHECK(std::abs(distance(HPoint::polar(tau, phi), HPoint::disk({0, 0})) - tau) < 1e-12 * (1 + tau) * 10);
    }
}

TEST_CASE("translation length is the minimal displacement") {
    const double lam = 3.7;
    const auto g = Isometry::from_entries(lam, 0, 0, 1 / lam);
    const double ell = length_of(g);
    CHECK(ell == doctest::Approx(2 * std::log(lam)).epsilon(1e-14));
    for (double y : {0.1, 1.0, 7.0}) CHECK(std::abs(distance(g.apply(cx(0, y)), cx(0, y)) - ell) < 1e-12);
    for (double x : {0.2, -1.0, 5.0}) CHECK(distance(g.apply(cx(x, 1)), cx(x, 1)) > ell + 1e-6);
}

#include "selberg/geom.hpp"

#include "selberg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace selberg::geom {

namespace {
const cx I{0.0, 1.0};
}

cx uhp_to_disk(cx z) { return (z - I) / (z + I); }
cx disk_to_uhp(cx w) { return I * (1.0 + w) / (1.0 - w); }

cx HPoint::to_uhp() const {
    switch (model) {
        case Model::upper_half_plane:
            if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
                throw domain_error("upper half-plane point needs Im z > 0");
            return {x, y};
        case Model::disk: {
            const cx w{x, y};
            if (!(std::abs(w) < 1.0)) throw domain_error("disk point needs |z| < 1");
            return disk_to_uhp(w);
        }
        case Model::polar: {
            if (!(x >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
                throw domain_error("polar point needs finite radius >= 0");
            const double r = std::tanh(0.5 * x);
            if (!(r < 1.0)) throw domain_error("polar radius too large to represent");
            return disk_to_uhp(std::polar(r, y));
        }
    }
    return {x, y};
}

cx HPoint::to_disk() const {
    if (model == Model::disk) {
        (void)to_uhp();
        return {x, y};
    }
    return uhp_to_disk(to_uhp());
}

double distance(cx z, cx w) {
    if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) throw domain_error("distance: point not in the upper half-plane");
    // arcsinh form avoids the cancellation in arccosh(1 + small).
    return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

double distance(const HPoint& z, const HPoint& w) {
    if (z.model == Model::disk && w.model == Model::disk) {
        // Same quantity from the disk formula, kept exact for points near the origin.
        const cx a{z.x, z.y}, b{w.x, w.y};
        if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) throw domain_error("disk point needs |z| < 1");
        const double num = std::abs(a - b);
        const double den = std::sqrt((1.0 - std::norm(a)) * (1.0 - std::norm(b)));
        return 2.0 * std::asinh(num / den);
    }
    return distance(z.to_uhp(), w.to_uhp());
}

Isometry::Isometry(double a, double b, double c, double d, bool renorm) : m_{a, b, c, d} {
    if (renorm) {
        const double dt = det();
        if (std::abs(dt - 1.0) > 1e-13) {
            const double s = 1.0 / std::sqrt(dt);
            for (auto& x : m_) x *= s;
        }
    }
    canonicalize();
}

Isometry Isometry::from_entries(double a, double b, double c, double d, double det_tol) {
    for (double x : {a, b, c, d})
        if (!std::isfinite(x)) throw domain_error("isometry entry not finite");
    const double dt = a * d - b * c;
    if (!(dt > 0.0) || std::abs(dt - 1.0) > det_tol)
        throw domain_error("isometry determinant " + std::to_string(dt) + " is not 1");
    const double s = 1.0 / std::sqrt(dt);
    return Isometry(a * s, b * s, c * s, d * s, false);
}

void Isometry::canonicalize() {
    double mx = 0.0;
    for (double x : m_) mx = std::max(mx, std::abs(x));
    for (double x : m_) {
        if (std::abs(x) > 1e-12 * mx) {
            if (x < 0.0)
                for (auto& y : m_) y = -y;
            return;
        }
    }
}

cx Isometry::apply(cx z) const { return (m_[0] * z + m_[1]) / (m_[2] * z + m_[3]); }

Isometry Isometry::operator*(const Isometry& h) const {
    const auto& p = m_;
    const auto& q = h.m_;
    return Isometry(p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
                    p[2] * q[1] + p[3] * q[3], true);
}

Isometry Isometry::inverse() const { return Isometry(m_[3], -m_[1], -m_[2], m_[0], false); }

HPoint apply(const Isometry& g, const HPoint& z) { return HPoint::uhp(g.apply(z.to_uhp())); }

IsometryClass classify(const Isometry& g, bool* near_parabolic) {
    const double t = std::abs(g.trace());
    if (near_parabolic) *near_parabolic = false;
    if (t > 2.0 + kParabolicBand) return IsometryClass::hyperbolic;
    if (t < 2.0 - kParabolicBand) return IsometryClass::elliptic;
    if (matrix_distance(g, Isometry{}) < 1e-12) return IsometryClass::identity;
    if (near_parabolic) *near_parabolic = true;
    return IsometryClass::parabolic;
}

double length_of(const Isometry& g) {
    const double t = std::abs(g.trace());
    return t > 2.0 ? 2.0 * std::acosh(0.5 * t) : 0.0;
}

double matrix_distance(const Isometry& g, const Isometry& h) {
    double dp = 0.0, dm = 0.0;
    for (int k = 0; k < 4; ++k) {
        dp = std::max(dp, std::abs(g.entries()[k] - h.entries()[k]));
        dm = std::max(dm, std::abs(g.entries()[k] + h.entries()[k]));
    }
    return std::min(dp, dm);
}

const char* to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::identity: return "identity";
        case IsometryClass::hyperbolic: return "hyperbolic";
        case IsometryClass::parabolic: return "parabolic";
        case IsometryClass::elliptic: return "elliptic";
    }
    return "?";
}

}  // namespace selberg::geom

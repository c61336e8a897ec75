#pragma once

#include <array>
#include <complex>

namespace selberg::geom {

using cx = std::complex<double>;

enum class Model { upper_half_plane, disk, polar };

// A point of H². Coordinates by model:
//   upper_half_plane: z = x + i y, y > 0
//   disk:             ζ = x + i y, |ζ| < 1
//   polar:            (τ, φ) = (x, y) around the centre i (disk origin)
struct HPoint {
    Model model = Model::upper_half_plane;
    double x = 0.0;
    double y = 1.0;

    static HPoint uhp(cx z) { return {Model::upper_half_plane, z.real(), z.imag()}; }
    static HPoint disk(cx z) { return {Model::disk, z.real(), z.imag()}; }
    static HPoint polar(double tau, double phi) { return {Model::polar, tau, phi}; }

    // Canonical (upper half-plane) coordinate; throws domain_error when the
    // point is on or beyond the boundary of its model.
    cx to_uhp() const;
    cx to_disk() const;
};

// Cayley maps between upper half-plane and disk: z ↦ (z-i)/(z+i).
cx uhp_to_disk(cx z);
cx disk_to_uhp(cx w);

double distance(cx z, cx w);  // both in the upper half-plane
double distance(const HPoint& z, const HPoint& w);

enum class IsometryClass { identity, hyperbolic, parabolic, elliptic };

// Element of PSL(2,R): unit-determinant real matrix, stored with the
// canonical sign (first non-negligible entry of a,b,c,d positive).
class Isometry {
public:
    Isometry() = default;

    // Throws domain_error unless det > 0 and |det-1| <= det_tol; the matrix is
    // then rescaled to unit determinant exactly.
    static Isometry from_entries(double a, double b, double c, double d, double det_tol = 1e-9);

    double a() const { return m_[0]; }
    double b() const { return m_[1]; }
    double c() const { return m_[2]; }
    double d() const { return m_[3]; }
    const std::array<double, 4>& entries() const { return m_; }

    double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
    double trace() const { return m_[0] + m_[3]; }

    cx apply(cx z) const;
    Isometry operator*(const Isometry& h) const;
    Isometry inverse() const;

    bool operator==(const Isometry&) const = default;

private:
    Isometry(double a, double b, double c, double d, bool renorm);
    void canonicalize();

    std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

inline Isometry compose(const Isometry& g, const Isometry& h) { return g * h; }
inline Isometry invert(const Isometry& g) { return g.inverse(); }

HPoint apply(const Isometry& g, const HPoint& z);  // result in the upper half-plane model

inline constexpr double kParabolicBand = 1e-10;

// near_parabolic is set when |tr| lies within kParabolicBand of 2 and the
// element is not the identity.
IsometryClass classify(const Isometry& g, bool* near_parabolic = nullptr);

// 2 arccosh(|tr|/2) for hyperbolic elements, else 0.
double length_of(const Isometry& g);

// Max-norm distance between the matrices, minimised over the sign ambiguity.
double matrix_distance(const Isometry& g, const Isometry& h);

const char* to_string(IsometryClass c);

}  // namespace selberg::geom

#pragma once

// Dirichlet domain of a cocompact group at its basepoint, in the Klein model
// of the frame where the basepoint is the origin.

#include "selberg/group.hpp"

#include <array>
#include <optional>
#include <vector>

namespace selberg::group {

using Vec2 = std::array<double, 2>;

// Hyperboloid coordinates (cosh d, sinh d cos θ, sinh d sin θ) of g·o,
// o the basepoint, in the frame centred at o.
std::array<double, 3> orbit_point(const Isometry& g, cx basepoint);

// cosh d(o, g·o), computed in the upper half-plane.
double cosh_displacement(const Isometry& g, cx basepoint);

// Endpoints of the axis of a hyperbolic g on the unit circle of the frame.
std::pair<cx, cx> axis_endpoints(const Isometry& g, cx basepoint);

struct Chord {
    double length = 0.0;     // hyperbolic length of axis ∩ D
    bool along_edge = false;  // the axis contains an edge of D
};

struct DirichletDomain {
    cx basepoint;
    std::vector<Vec2> vertices;   // Klein coordinates, counter-clockwise
    std::vector<int> edge_side;   // edge k (vertex k → k+1) lies on the bisector of side_pairings[edge_side[k]]
    std::vector<Isometry> side_pairings;
    std::vector<Word> side_words;
    double area = 0.0;
    double covering_radius = 0.0;  // max distance from the basepoint to a vertex
    bool area_verified = false;    // area matched 4π(genus-1)

    // Intersection of the axis through the boundary points (p, q) with D;
    // `margin` widens D slightly (Klein units) so grazing axes are kept.
    std::optional<Chord> chord(cx p, cx q, double margin = 1e-9) const;
};

// Clip against orbit bisectors until the polygon's area is 4π(g-1) and stable
// under the ball of radius 2R.  Throws convergence_error if that fails.
DirichletDomain dirichlet_domain(const GroupSpec& spec, int threads = 1);

// Elements g with d(o, g·o) <= radius reachable from the identity by left
// multiplication with `steps`, through nodes that stay inside the same ball.
// With the side pairings of D as steps this is the whole ball.
struct Ball {
    std::vector<Isometry> elements;  // elements[0] is the identity
    std::vector<double> cosh_d;
    std::vector<int> parent;  // -1 for the identity
    std::vector<int> step;    // index into steps
    std::vector<Word> step_words;
    bool exhausted = false;  // stopped at the element budget; contents incomplete

    Word word(std::size_t k) const;  // free-reduced word of elements[k]
};

Ball orbit_ball(const std::vector<Isometry>& steps, const std::vector<Word>& step_words, cx basepoint,
                double radius, int threads = 1, std::size_t budget = 20'000'000);

}  // namespace selberg::group

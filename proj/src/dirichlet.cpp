#include "selberg/dirichlet.hpp"

#include "selberg/errors.hpp"
#include "selberg/matrix_index.hpp"
#include "selberg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace selberg::group {

namespace {

constexpr double pi = std::numbers::pi;

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
double norm2(const Vec2& a) { return a[0] * a[0] + a[1] * a[1]; }

// Half-plane n·k <= c in Klein coordinates, n unit.
struct HalfPlane {
    Vec2 n;
    double c;
    int source;
};

HalfPlane bisector(const Isometry& g, cx base, int source) {
    const auto q = orbit_point(g, base);
    const double s = std::hypot(q[1], q[2]);
    return {{q[1] / s, q[2] / s}, (q[0] - 1.0) / s, source};
}

struct Polygon {
    std::vector<Vec2> v;
    std::vector<int> src;  // src[k]: source of edge v[k] → v[k+1]
};

constexpr double kInsideTol = 1e-13;

Polygon clip(const Polygon& p, const HalfPlane& h) {
    const std::size_t n = p.v.size();
    Polygon out;
    if (n == 0) return out;
    std::vector<double> f(n);
    bool any_out = false;
    for (std::size_t k = 0; k < n; ++k) {
        f[k] = h.n[0] * p.v[k][0] + h.n[1] * p.v[k][1] - h.c;
        any_out = any_out || f[k] > kInsideTol;
    }
    if (!any_out) return p;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = (k + 1) % n;
        const bool in_k = f[k] <= kInsideTol, in_j = f[j] <= kInsideTol;
        auto cut = [&] {
            const double t = f[k] / (f[k] - f[j]);
            return Vec2{p.v[k][0] + t * (p.v[j][0] - p.v[k][0]), p.v[k][1] + t * (p.v[j][1] - p.v[k][1])};
        };
        if (in_k) {
            out.v.push_back(p.v[k]);
            out.src.push_back(p.src[k]);
            if (!in_j) {
                out.v.push_back(cut());
                out.src.push_back(h.source);
            }
        } else if (in_j) {
            out.v.push_back(cut());
            out.src.push_back(p.src[k]);
        }
    }
    return out;
}

// Merge vertices closer than tol (Klein units); drops degenerate edges.
Polygon clean(Polygon p, double tol) {
    bool changed = true;
    while (changed && p.v.size() > 3) {
        changed = false;
        for (std::size_t k = 0; k < p.v.size(); ++k) {
            const std::size_t j = (k + 1) % p.v.size();
            if (std::sqrt(norm2(sub(p.v[j], p.v[k]))) < tol) {
                // The short edge k disappears; vertex j carries edge j on.
                p.v.erase(p.v.begin() + long(k));
                p.src.erase(p.src.begin() + long(k));
                changed = true;
                break;
            }
        }
    }
    return p;
}

std::array<double, 3> hyperboloid(const Vec2& k) {
    const double w = 1.0 / std::sqrt(1.0 - norm2(k));
    return {w, w * k[0], w * k[1]};
}

double minkowski(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

// (n-2)π - Σ interior angles, angles from tangent vectors on the hyperboloid.
double hyperbolic_area(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    double angles = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto V = hyperboloid(v[k]);
        const auto A = hyperboloid(v[(k + n - 1) % n]);
        const auto B = hyperboloid(v[(k + 1) % n]);
        auto tangent = [&](const std::array<double, 3>& P) {
            const double ip = minkowski(P, V);
            return std::array<double, 3>{P[0] + ip * V[0], P[1] + ip * V[1], P[2] + ip * V[2]};
        };
        const auto ta = tangent(A), tb = tangent(B);
        const double c = minkowski(ta, tb) / std::sqrt(minkowski(ta, ta) * minkowski(tb, tb));
        angles += std::acos(std::clamp(c, -1.0, 1.0));
    }
    return (double(n) - 2.0) * pi - angles;
}

double klein_distance(const Vec2& p, const Vec2& q) {
    const double c = (1.0 - p[0] * q[0] - p[1] * q[1]) / std::sqrt((1.0 - norm2(p)) * (1.0 - norm2(q)));
    return std::acosh(std::max(1.0, c));
}

cx klein_to_uhp(const Vec2& k, cx b) {
    const double s = std::sqrt(std::max(0.0, 1.0 - norm2(k)));
    const cx p = cx(k[0], k[1]) / (1.0 + s);  // Poincaré disk
    return (b - p * std::conj(b)) / (1.0 - p);
}

Vec2 uhp_to_klein(cx z, cx b) {
    const cx p = (z - b) / (z - std::conj(b));
    const double r2 = std::norm(p);
    const cx k = 2.0 * p / (1.0 + r2);
    return {k.real(), k.imag()};
}

bool bounded(const Polygon& p) {
    if (p.v.size() < 3) return false;
    for (std::size_t k = 0; k < p.v.size(); ++k)
        if (p.src[k] < 0 || norm2(p.v[k]) >= 1.0 - 1e-12) return false;
    return true;
}

Polygon start_square() {
    return {{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}, {-1, -1, -1, -1}};
}

double radius_of(const std::vector<Vec2>& v) {
    double r = 0.0;
    for (const auto& x : v) r = std::max(r, klein_distance({0, 0}, x));
    return r;
}

}  // namespace

double cosh_displacement(const Isometry& g, cx b) {
    const cx w = g.apply(b);
    return 1.0 + std::norm(w - b) / (2.0 * w.imag() * b.imag());
}

std::array<double, 3> orbit_point(const Isometry& g, cx b) {
    const cx w = g.apply(b);
    const double d = geom::distance(w, b);
    const cx dir = (w - b) / (w - std::conj(b));
    const double th = std::arg(dir);
    const double sh = std::sinh(d);
    return {std::cosh(d), sh * std::cos(th), sh * std::sin(th)};
}

std::pair<cx, cx> axis_endpoints(const Isometry& g, cx b) {
    // Fixed points [X:Y] of g: c X² + (d-a) X Y - b Y² = 0, in stable form.
    const double a = g.a(), bb = g.b(), c = g.c(), d = g.d();
    const double disc = std::sqrt(std::max(0.0, (a + d) * (a + d) - 4.0));
    const double dm = d - a;
    const double q = -0.5 * (dm + (dm >= 0 ? disc : -disc));
    const std::array<std::pair<double, double>, 2> roots{{{q, c}, {-bb, q}}};
    std::pair<cx, cx> out;
    cx* dst[2] = {&out.first, &out.second};
    for (int k = 0; k < 2; ++k) {
        const auto [X, Y] = roots[std::size_t(k)];
        const cx z = (X - b * Y) / (X - std::conj(b) * Y);
        *dst[k] = z / std::abs(z);
    }
    return out;
}

namespace {

// Parameter interval [lo, hi] of the segment A→B inside the polygon widened by margin.
bool clip_segment(const std::vector<Vec2>& poly, const Vec2& A, const Vec2& B, double margin, double& lo, double& hi,
                  bool* on_edge) {
    lo = 0.0, hi = 1.0;
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2& v0 = poly[k];
        const Vec2 e = sub(poly[(k + 1) % n], v0);
        const double le = std::sqrt(norm2(e));
        // Inside is f >= 0 (counter-clockwise polygon).
        const double fa0 = cross(e, sub(A, v0)) / le, fb0 = cross(e, sub(B, v0)) / le;
        if (std::abs(fa0) < 1e-8 && std::abs(fb0) < 1e-8) {
            // Collinear with this edge, which then bounds nothing.
            if (on_edge) *on_edge = true;
            continue;
        }
        const double fa = fa0 + margin, fb = fb0 + margin;
        if (fa < 0 && fb < 0) return false;
        if (fa < 0)
            lo = std::max(lo, fa / (fa - fb));
        else if (fb < 0)
            hi = std::min(hi, fa / (fa - fb));
    }
    return lo <= hi;
}

}  // namespace

std::optional<Chord> DirichletDomain::chord(cx p, cx q, double margin) const {
    const Vec2 A{p.real(), p.imag()}, B{q.real(), q.imag()};
    double lo, hi;
    Chord ch;
    if (!clip_segment(vertices, A, B, margin, lo, hi, &ch.along_edge)) return std::nullopt;
    // The margin only decides membership; the length is measured in D itself.
    if (clip_segment(vertices, A, B, 0.0, lo, hi, nullptr)) {
        const Vec2 P{A[0] + lo * (B[0] - A[0]), A[1] + lo * (B[1] - A[1])};
        const Vec2 Q{A[0] + hi * (B[0] - A[0]), A[1] + hi * (B[1] - A[1])};
        if (norm2(P) < 1.0 && norm2(Q) < 1.0) ch.length = klein_distance(P, Q);
    }
    return ch;
}

Word Ball::word(std::size_t k) const {
    Word w;
    for (long i = long(k); i > 0 && parent[std::size_t(i)] >= 0; i = parent[std::size_t(i)]) {
        const auto& s = step_words[std::size_t(step[std::size_t(i)])].letters;
        w.letters.insert(w.letters.end(), s.begin(), s.end());
    }
    return free_reduce(std::move(w));
}

Ball orbit_ball(const std::vector<Isometry>& steps, const std::vector<Word>& step_words, cx base, double radius,
                int threads, std::size_t budget) {
    Ball ball;
    ball.step_words = step_words;
    ball.elements.push_back(Isometry{});
    ball.cosh_d.push_back(1.0);
    ball.parent.push_back(-1);
    ball.step.push_back(-1);
    ElementIndex index(&ball.elements);
    index.insert(0);
    const double cmax = std::cosh(radius) * (1.0 + 1e-12);

    struct Child {
        Isometry g;
        double ch;
        bool keep;
    };
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::vector<Child> kids(frontier.size() * steps.size());
        parallel_for(frontier.size(), threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t f = lo; f < hi; ++f)
                for (std::size_t s = 0; s < steps.size(); ++s) {
                    const Isometry g = steps[s] * ball.elements[std::size_t(frontier[f])];
                    const double ch = cosh_displacement(g, base);
                    kids[f * steps.size() + s] = {g, ch, ch <= cmax};
                }
        });
        std::vector<int> next;
        for (std::size_t k = 0; k < kids.size(); ++k) {
            if (!kids[k].keep) continue;
            if (index.find(kids[k].g) >= 0) continue;
            if (ball.elements.size() >= budget) {
                ball.exhausted = true;
                return ball;
            }
            const int id = int(ball.elements.size());
            ball.elements.push_back(kids[k].g);
            ball.cosh_d.push_back(kids[k].ch);
            ball.parent.push_back(frontier[k / steps.size()]);
            ball.step.push_back(int(k % steps.size()));
            index.insert(id);
            next.push_back(id);
        }
        frontier = std::move(next);
    }
    return ball;
}

DirichletDomain dirichlet_domain(const GroupSpec& spec, int threads) {
    const cx base = spec.basepoint;
    const int ng = int(spec.generators.size());
    std::vector<Isometry> letters;
    std::vector<Word> letter_words;
    for (int k = 1; k <= ng; ++k)
        for (int s : {k, -k}) {
            letters.push_back(s > 0 ? spec.generators[std::size_t(k - 1)] : spec.generators[std::size_t(k - 1)].inverse());
            letter_words.push_back(Word{{s}, true});
        }

    const double target = spec.genus ? 4.0 * pi * double(*spec.genus - 1) : 0.0;
    // Orbit elements from words of increasing length; an element enters once.
    std::vector<Isometry> elems{Isometry{}};
    std::vector<Word> words{Word{{}, true}};
    ElementIndex index(&elems);
    index.insert(0);
    std::vector<int> frontier{0};
    Polygon poly = start_square();
    std::vector<HalfPlane> planes;
    double prev_area = -1.0;
    bool found = false;
    constexpr int kMaxWordLength = 9;
    for (int len = 1; len <= kMaxWordLength && !found; ++len) {
        std::vector<int> next;
        for (int f : frontier)
            for (std::size_t s = 0; s < letters.size(); ++s) {
                const Word& wf = words[std::size_t(f)];
                if (!wf.letters.empty() && wf.letters.front() == -letter_words[s].letters[0]) continue;
                const Isometry g = letters[s] * elems[std::size_t(f)];
                if (index.find(g) >= 0) continue;
                Word w = letter_words[s];
                w.letters.insert(w.letters.end(), wf.letters.begin(), wf.letters.end());
                const int id = int(elems.size());
                elems.push_back(g);
                words.push_back(w);
                index.insert(id);
                next.push_back(id);
            }
        frontier = std::move(next);
        // Clip by the new layer, nearest orbit points first.
        std::vector<int> order = frontier;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            const double cx_ = cosh_displacement(elems[std::size_t(x)], base);
            const double cy_ = cosh_displacement(elems[std::size_t(y)], base);
            return cx_ != cy_ ? cx_ < cy_ : x < y;
        });
        const double rcap = bounded(poly) ? std::cosh(2.0 * radius_of(poly.v)) * (1 + 1e-9) : 1e300;
        for (int id : order) {
            if (cosh_displacement(elems[std::size_t(id)], base) > rcap) continue;
            poly = clip(poly, bisector(elems[std::size_t(id)], base, id));
        }
        if (!bounded(poly)) continue;
        const double area = hyperbolic_area(clean(poly, 1e-10).v);
        if (target > 0.0 ? std::abs(area - target) <= 1e-8 * target : std::abs(area - prev_area) <= 1e-10 * area)
            found = true;
        prev_area = area;
    }
    if (!found)
        throw convergence_error("dirichlet_domain: polygon area did not reach 4π(g-1) with words up to length " +
                                std::to_string(kMaxWordLength));
    poly = clean(poly, 1e-10);

    auto build = [&](const Polygon& p) {
        DirichletDomain D;
        D.basepoint = base;
        D.vertices = p.v;
        std::vector<int> side_of_source;
        for (int s : p.src) {
            auto it = std::find(side_of_source.begin(), side_of_source.end(), s);
            if (it == side_of_source.end()) {
                D.edge_side.push_back(int(side_of_source.size()));
                side_of_source.push_back(s);
            } else {
                D.edge_side.push_back(int(it - side_of_source.begin()));
            }
        }
        for (int s : side_of_source) {
            D.side_pairings.push_back(elems[std::size_t(s)]);
            D.side_words.push_back(free_reduce(words[std::size_t(s)]));
        }
        D.area = hyperbolic_area(p.v);
        D.covering_radius = radius_of(p.v);
        D.area_verified = target > 0.0;
        return D;
    };
    DirichletDomain D = build(poly);

    // Side pairings come in inverse pairs, and g maps the side of g^{-1} onto the side of g.
    const std::size_t ns = D.side_pairings.size();
    for (std::size_t s = 0; s < ns; ++s) {
        const Isometry inv = D.side_pairings[s].inverse();
        std::size_t t = ns;
        for (std::size_t u = 0; u < ns; ++u)
            if (same_element(D.side_pairings[u], inv)) t = u;
        if (t == ns) throw convergence_error("dirichlet_domain: side pairing without inverse side");
        auto edge_of = [&](std::size_t side) {
            for (std::size_t k = 0; k < D.edge_side.size(); ++k)
                if (std::size_t(D.edge_side[k]) == side) return k;
            return D.edge_side.size();
        };
        const std::size_t es = edge_of(s), et = edge_of(t);
        const std::size_t nv = D.vertices.size();
        const Vec2 m0 = uhp_to_klein(D.side_pairings[s].apply(klein_to_uhp(D.vertices[et], base)), base);
        const Vec2 m1 = uhp_to_klein(D.side_pairings[s].apply(klein_to_uhp(D.vertices[(et + 1) % nv], base)), base);
        const Vec2& e0 = D.vertices[es];
        const Vec2& e1 = D.vertices[(es + 1) % nv];
        const double dmatch = std::min(std::max(std::sqrt(norm2(sub(m0, e0))), std::sqrt(norm2(sub(m1, e1)))),
                                       std::max(std::sqrt(norm2(sub(m0, e1))), std::sqrt(norm2(sub(m1, e0)))));
        if (dmatch > 1e-7) throw convergence_error("dirichlet_domain: side pairing does not map its edges");
    }

    // Exactness: nothing in the 2R-ball cuts the polygon further.
    const Ball ball = orbit_ball(D.side_pairings, D.side_words, base, 2.0 * D.covering_radius + 1e-6, threads);
    Polygon check = poly;
    for (std::size_t k = 1; k < ball.elements.size(); ++k) check = clip(check, bisector(ball.elements[k], base, -2));
    check = clean(check, 1e-10);
    if (std::abs(hyperbolic_area(check.v) - D.area) > 1e-9 * D.area)
        throw convergence_error("dirichlet_domain: polygon is not stable under the 2R-ball");
    return D;
}

}  // namespace selberg::group

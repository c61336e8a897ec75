#include "selberg/dirichlet.hpp"
#include "selberg/errors.hpp"
#include "selberg/group.hpp"
#include "selberg/matrix_index.hpp"
#include "selberg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace selberg::group {

namespace {

struct Candidate {
    int ball_id;
    double length;
    std::pair<cx, cx> ends;
    Chord chord;
};

// Hyperbolic elements of the ball with length <= L whose axis meets D.
std::vector<Candidate> axis_candidates(const Ball& ball, const DirichletDomain& D, double L, double slack,
                                       int threads) {
    const std::size_t n = ball.elements.size();
    std::vector<std::optional<Candidate>> slot(n);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = std::max<std::size_t>(lo, 1); k < hi; ++k) {
            const Isometry& g = ball.elements[k];
            if (std::abs(g.trace()) <= 2.0) continue;
            const double len = geom::length_of(g);
            if (len > L + slack) continue;
            const auto ends = axis_endpoints(g, D.basepoint);
            const auto ch = D.chord(ends.first, ends.second);
            if (!ch) continue;
            slot[k] = Candidate{int(k), len, ends, *ch};
        }
    });
    std::vector<Candidate> out;
    for (auto& s : slot)
        if (s) out.push_back(*s);
    return out;
}

// Consecutive values within tol share a cluster; returns cluster id per sorted position.
std::vector<int> cluster_sorted(const std::vector<double>& sorted, double tol) {
    std::vector<int> id(sorted.size());
    int c = -1;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (k == 0 || sorted[k] - sorted[k - 1] > tol) ++c;
        id[k] = c;
    }
    return id;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[std::size_t(x)] != x) x = p[std::size_t(x)] = p[std::size_t(p[std::size_t(x)])];
        return x;
    }
    void unite(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        p[std::size_t(b)] = a;
    }
};

bool word_less(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return std::lexicographical_compare(x.letters.begin(), x.letters.end(), y.letters.begin(), y.letters.end(),
                                        letter_less);
}

Word class_label(const Word& w) { return minimal_rotation(cyclic_reduce(w)); }

// Proper suffixes of side words only ever appear as intermediate nodes of a
// word-level walk; their displacement bounds how far such a walk strays.
double suffix_slack(const DirichletDomain& D, const GroupSpec& spec) {
    double m = 0.0;
    for (const auto& w : D.side_words)
        for (std::size_t k = 1; k < w.size(); ++k) {
            Word s;
            s.letters.assign(w.letters.begin() + long(k), w.letters.end());
            m = std::max(m, std::acosh(std::max(1.0, cosh_displacement(evaluate(spec, s), D.basepoint))));
        }
    return m;
}

double ball_radius(const DirichletDomain& D, double L) { return L + 2.0 * D.covering_radius + 1e-6; }

// Returns false when the ball hits the element budget.
bool classes_at(const DirichletDomain& D, double L, const EnumerationOptions& opt,
                std::vector<ConjugacyClass>& out) {
    const double tol = default_dedup_tolerance(L);
    const Ball ball = orbit_ball(D.side_pairings, D.side_words, D.basepoint, ball_radius(D, L), opt.threads,
                                 opt.max_elements);
    if (ball.exhausted) return false;
    const auto cand = axis_candidates(ball, D, L, tol, opt.threads);

    std::vector<Isometry> cmat;
    cmat.reserve(cand.size());
    for (const auto& c : cand) cmat.push_back(ball.elements[std::size_t(c.ball_id)]);
    ElementIndex index(&cmat);
    for (std::size_t k = 0; k < cand.size(); ++k) index.insert(int(k));

    // Conjugating by the 2R-neighbourhood links every pair of representatives
    // whose axes cross adjacent tiles, hence each whole class.
    const double c2 = std::cosh(2.0 * D.covering_radius + 1e-6);
    std::vector<int> nbr;
    for (std::size_t k = 1; k < ball.elements.size(); ++k)
        if (ball.cosh_d[k] <= c2) nbr.push_back(int(k));
    std::vector<std::vector<int>> links(cand.size());
    parallel_for(cand.size(), opt.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            for (int m : nbr) {
                const Isometry& n = ball.elements[std::size_t(m)];
                const int j = index.find(n.inverse() * cmat[k] * n);
                if (j >= 0 && std::size_t(j) != k) links[k].push_back(j);
            }
    });
    UnionFind uf(cand.size());
    for (std::size_t k = 0; k < cand.size(); ++k)
        for (int j : links[k]) uf.unite(int(k), j);

    // Primitive roots: the shortest candidate sharing the (unoriented) axis.
    QuantizedIndex axes(1e-6);
    auto key = [](cx p, cx q) { return QuantizedIndex::Vec4{p.real(), p.imag(), q.real(), q.imag()}; };
    std::vector<int> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return cand[std::size_t(x)].length < cand[std::size_t(y)].length; });
    std::vector<int> root(cand.size(), -1);
    for (int k : order) {
        const auto& e = cand[std::size_t(k)].ends;
        const int r = axes.find(key(e.first, e.second), [&](int id) {
            const auto& f = cand[std::size_t(id)].ends;
            return (std::abs(f.first - e.first) < 1e-7 && std::abs(f.second - e.second) < 1e-7) ||
                   (std::abs(f.first - e.second) < 1e-7 && std::abs(f.second - e.first) < 1e-7);
        });
        if (r >= 0) {
            root[std::size_t(k)] = r;
        } else {
            root[std::size_t(k)] = k;
            axes.insert(key(e.first, e.second), k);
            axes.insert(key(e.second, e.first), k);
        }
    }
    std::vector<int> prim(cand.size());  // candidate p with c = p^power, power >= 1
    std::vector<int> power(cand.size(), 1);
    for (std::size_t k = 0; k < cand.size(); ++k) {
        const int r = root[k];
        const int n = int(std::lround(cand[k].length / cand[std::size_t(r)].length));
        Isometry pw;
        for (int i = 0; i < n; ++i) pw = pw * cmat[std::size_t(r)];
        int p = -1;
        if (same_element(pw, cmat[k]))
            p = r;
        else if (same_element(pw.inverse(), cmat[k]))
            p = index.find(cmat[std::size_t(r)].inverse());
        if (p < 0 || n < 1)
            throw convergence_error("enumerate_classes: element on a primitive axis is not a power of the root");
        prim[k] = p;
        power[k] = n;
    }

    // Gather classes; label each by its shortest cyclically reduced word.
    std::vector<int> cls_of(cand.size());
    std::vector<int> heads;
    for (std::size_t k = 0; k < cand.size(); ++k) {
        const int h = uf.find(int(k));
        if (h == int(k)) {
            cls_of[k] = int(heads.size());
            heads.push_back(int(k));
        } else {
            cls_of[k] = cls_of[std::size_t(h)];
        }
    }
    std::vector<Word> label(heads.size());
    std::vector<int> best(heads.size(), -1);
    std::vector<Word> words(cand.size());
    parallel_for(cand.size(), opt.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) words[k] = class_label(ball.word(std::size_t(cand[k].ball_id)));
    });
    for (std::size_t k = 0; k < cand.size(); ++k) {
        const int c = cls_of[k];
        if (best[std::size_t(c)] < 0 || word_less(words[k], label[std::size_t(c)])) {
            best[std::size_t(c)] = int(k);
            label[std::size_t(c)] = words[k];
        }
    }

    std::vector<ConjugacyClass> classes;
    for (std::size_t c = 0; c < heads.size(); ++c) {
        const int k = best[c];
        if (cand[std::size_t(k)].length > L + tol) continue;
        ConjugacyClass cc;
        cc.representative = cmat[std::size_t(k)];
        cc.length = cand[std::size_t(k)].length;
        cc.power = power[std::size_t(k)];
        if (cc.power == 1) {
            cc.canonical_word = label[c];
            cc.primitive_word = label[c];
        } else {
            const Word& pw = label[std::size_t(cls_of[std::size_t(prim[std::size_t(k)])])];
            cc.primitive_word = pw;
            for (int i = 0; i < cc.power; ++i)
                cc.canonical_word.letters.insert(cc.canonical_word.letters.end(), pw.letters.begin(), pw.letters.end());
            cc.canonical_word.reduced = true;
        }
        classes.push_back(std::move(cc));
    }
    std::sort(classes.begin(), classes.end(),
              [](const ConjugacyClass& a, const ConjugacyClass& b) { return a.length < b.length; });
    std::vector<double> lens;
    for (const auto& c : classes) lens.push_back(c.length);
    const auto cid = cluster_sorted(lens, tol);
    std::vector<std::size_t> idx(classes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (cid[x] != cid[y]) return cid[x] < cid[y];
        return word_less(classes[x].canonical_word, classes[y].canonical_word);
    });
    out.clear();
    for (auto i : idx) out.push_back(classes[i]);
    return true;
}

void check_cutoff(double L) {
    if (!(L >= 0.0) || !std::isfinite(L)) throw domain_error("length cutoff must be finite and >= 0");
}

}  // namespace

std::vector<ConjugacyClass> enumerate_classes(const GroupSpec& spec, double L_max, const EnumerationOptions& opt) {
    check_cutoff(L_max);
    const DirichletDomain D = dirichlet_domain(spec, opt.threads);
    std::vector<ConjugacyClass> out;
    if (classes_at(D, L_max, opt, out)) return out;
    for (double l = std::ceil(L_max) - 1.0; l >= 0.0; l -= 1.0) {
        std::vector<ConjugacyClass> partial;
        if (classes_at(D, l, opt, partial))
            throw enumeration_budget_error("element budget exhausted; enumeration complete up to length " +
                                               std::to_string(l),
                                           l, std::move(partial));
    }
    throw enumeration_budget_error("element budget exhausted before any length was complete", 0.0, {});
}

LengthSpectrum spectrum_from_classes(const std::vector<ConjugacyClass>& classes, double L_max, double dedup_tolerance) {
    LengthSpectrum s;
    s.cutoff = L_max;
    s.dedup_tolerance = dedup_tolerance > 0.0 ? dedup_tolerance : default_dedup_tolerance(L_max);
    std::vector<double> lens;
    for (const auto& c : classes)
        if (c.power == 1 && c.length <= L_max + s.dedup_tolerance) lens.push_back(c.length);
    std::sort(lens.begin(), lens.end());
    const auto cid = cluster_sorted(lens, s.dedup_tolerance);
    for (std::size_t k = 0; k < lens.size();) {
        std::size_t j = k;
        double sum = 0.0;
        while (j < lens.size() && cid[j] == cid[k]) sum += lens[j++];
        s.entries.push_back({sum / double(j - k), int(j - k)});
        k = j;
    }
    return s;
}

LengthSpectrum length_spectrum(const GroupSpec& spec, double L_max, double dedup_tolerance,
                               const EnumerationOptions& opt) {
    return spectrum_from_classes(enumerate_classes(spec, L_max, opt), L_max, dedup_tolerance);
}

LengthSpectrum length_spectrum_word_bfs(const GroupSpec& spec, double L_max, double dedup_tolerance,
                                        const EnumerationOptions& opt) {
    check_cutoff(L_max);
    const DirichletDomain D = dirichlet_domain(spec, opt.threads);
    LengthSpectrum s;
    s.cutoff = L_max;
    s.dedup_tolerance = dedup_tolerance > 0.0 ? dedup_tolerance : default_dedup_tolerance(L_max);

    std::vector<Isometry> letters;
    std::vector<Word> letter_words;
    for (int k = 1; k <= int(spec.generators.size()); ++k) {
        letters.push_back(spec.generators[std::size_t(k - 1)]);
        letter_words.push_back(Word{{k}, true});
        letters.push_back(spec.generators[std::size_t(k - 1)].inverse());
        letter_words.push_back(Word{{-k}, true});
    }
    const double r = ball_radius(D, L_max);
    const Ball walk = orbit_ball(letters, letter_words, D.basepoint, r + suffix_slack(D, spec), opt.threads,
                                 opt.max_elements);
    if (walk.exhausted)
        throw enumeration_budget_error("element budget exhausted in the word search", 0.0, {});
    std::vector<Candidate> cand;
    const double cr = std::cosh(r);
    for (auto& c : axis_candidates(walk, D, L_max, s.dedup_tolerance, opt.threads))
        if (walk.cosh_d[std::size_t(c.ball_id)] <= cr) cand.push_back(c);

    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.length < b.length; });
    std::vector<double> lens;
    for (const auto& c : cand) lens.push_back(c.length);
    const auto cid = cluster_sorted(lens, s.dedup_tolerance);

    // Σ over representatives of |axis ∩ D| = Σ over classes of the primitive length.
    std::vector<double> cl_len, cl_measure;
    for (std::size_t k = 0; k < cand.size();) {
        std::size_t j = k;
        double ls = 0.0, m = 0.0;
        while (j < cand.size() && cid[j] == cid[k]) {
            ls += cand[j].length;
            m += cand[j].chord.along_edge ? 0.5 * cand[j].chord.length : cand[j].chord.length;
            ++j;
        }
        cl_len.push_back(ls / double(j - k));
        cl_measure.push_back(m);
        k = j;
    }
    std::vector<double> prim_count(cl_len.size(), 0.0);
    for (std::size_t c = 0; c < cl_len.size(); ++c) {
        double rest = cl_measure[c];
        for (int n = 2; cl_len[c] / n >= cl_len.front() - s.dedup_tolerance; ++n) {
            const double target = cl_len[c] / n;
            for (std::size_t b = 0; b < c; ++b)
                if (std::abs(cl_len[b] - target) <= s.dedup_tolerance * n) rest -= prim_count[b] * cl_len[b];
        }
        const double p = rest / cl_len[c];
        const double pr = std::round(p);
        if (std::abs(p - pr) > 1e-6)
            throw convergence_error("length_spectrum_word_bfs: non-integral class count " + std::to_string(p) +
                                    " at length " + std::to_string(cl_len[c]));
        prim_count[c] = pr;
        if (pr > 0.0 && cl_len[c] <= L_max + s.dedup_tolerance) s.entries.push_back({cl_len[c], int(pr)});
    }
    return s;
}

}  // namespace selberg::group

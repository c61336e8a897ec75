#pragma once

// Hash lookup of 4-vectors (matrix entries, axis endpoints) up to rounding.
// Keys are the components rounded to a grid of spacing q; a component that
// falls within 5% of a cell boundary is also looked up in the adjacent cell,
// so values differing by much less than q always meet.

#include "selberg/geom.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace selberg {

class QuantizedIndex {
public:
    using Vec4 = std::array<double, 4>;

    explicit QuantizedIndex(double quantum = 1e-6) : q_(quantum) {}

    void insert(const Vec4& v, int id) { map_[key(v)].push_back(id); }

    // First id whose bucket is near v and for which eq(id) holds, else -1.
    template <class Eq>
    int find(const Vec4& v, Eq&& eq) const {
        std::array<std::int64_t, 4> base{}, alt{};
        std::array<bool, 4> has_alt{};
        for (int k = 0; k < 4; ++k) {
            const double x = v[k] / q_;
            base[k] = std::llround(x);
            const double f = x - double(base[k]);
            has_alt[k] = std::abs(f) > 0.45;
            alt[k] = base[k] + (f > 0 ? 1 : -1);
        }
        for (int mask = 0; mask < 16; ++mask) {
            Key k = base;
            bool skip = false;
            for (int b = 0; b < 4; ++b)
                if (mask & (1 << b)) {
                    if (!has_alt[b]) {
                        skip = true;
                        break;
                    }
                    k[b] = alt[b];
                }
            if (skip) continue;
            auto it = map_.find(k);
            if (it == map_.end()) continue;
            for (int id : it->second)
                if (eq(id)) return id;
        }
        return -1;
    }

    std::size_t size() const { return map_.size(); }

private:
    using Key = std::array<std::int64_t, 4>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = 1469598103934665603ull;
            for (auto x : k) {
                h ^= std::uint64_t(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
                h *= 1099511628211ull;
            }
            return std::size_t(h);
        }
    };
    Key key(const Vec4& v) const {
        Key k;
        for (int i = 0; i < 4; ++i) k[i] = std::llround(v[i] / q_);
        return k;
    }

    double q_;
    std::unordered_map<Key, std::vector<int>, KeyHash> map_;
};

// Entries of g with the sign fixed by tr > 0 (stable for hyperbolic elements
// and the identity, unlike a first-nonzero-entry rule).
inline std::array<double, 4> sign_fixed_entries(const geom::Isometry& g) {
    auto e = g.entries();
    const double t = e[0] + e[3];
    double mx = 0.0;
    for (double x : e) mx = std::max(mx, std::abs(x));
    bool flip = t < 0.0;
    if (std::abs(t) <= 1e-9 * mx) flip = false;  // keep the stored canonical sign
    if (flip)
        for (auto& x : e) x = -x;
    return e;
}

inline bool same_element(const geom::Isometry& g, const geom::Isometry& h, double rel = 1e-8) {
    double mx = 1.0;
    for (double x : g.entries()) mx = std::max(mx, std::abs(x));
    return geom::matrix_distance(g, h) <= rel * mx;
}

// Index of group elements by matrix.
class ElementIndex {
public:
    explicit ElementIndex(const std::vector<geom::Isometry>* store) : store_(store) {}
    void insert(int id) { idx_.insert(sign_fixed_entries((*store_)[std::size_t(id)]), id); }
    int find(const geom::Isometry& g) const {
        return idx_.find(sign_fixed_entries(g), [&](int id) { return same_element((*store_)[std::size_t(id)], g); });
    }

private:
    const std::vector<geom::Isometry>* store_;
    QuantizedIndex idx_{1e-6};
};

}  // namespace selberg

#include "oracles.hpp"

#include <selberg/dirichlet.hpp>
#include <selberg/errors.hpp>
#include <selberg/group.hpp>

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>

using namespace selberg;
using namespace selberg::group;
using oracle::uniform;

namespace {

const GroupSpec& octagon() {
    static const GroupSpec g = load_group("groups/octagon.json");
    return g;
}

nlohmann::json octagon_file() {
    std::ifstream in("groups/octagon.json");
    return nlohmann::json::parse(in);
}

std::string octagon_json_with(const nlohmann::json& generators, const nlohmann::json& relators) {
    auto j = octagon_file();
    j["generators"] = generators;
    j["relators"] = relators;
    return j.dump();
}

// Distinct |tr| over all freely reduced words up to `depth` letters: a brute
// force source of lengths that knows nothing about fundamental domains.
// Keep depth small: long words like w a w⁻¹ lose ~1e-9 of the trace to cancellation.
std::vector<double> brute_force_traces(const GroupSpec& g, int depth, double max_trace) {
    std::vector<Isometry> letters;
    for (const auto& m : g.generators) {
        letters.push_back(m);
        letters.push_back(m.inverse());
    }
    struct Node {
        Isometry m;
        int last;
    };
    std::vector<Node> frontier{{Isometry{}, -1}};
    std::vector<double> traces;
    for (int n = 0; n < depth; ++n) {
        std::vector<Node> next;
        for (const auto& nd : frontier)
            for (int i = 0; i < int(letters.size()); ++i) {
                if (nd.last >= 0 && (nd.last ^ 1) == i) continue;
                const Isometry m = nd.m * letters[std::size_t(i)];
                const double t = std::abs(m.trace());
                if (t > 2.0 + 1e-9 && t < max_trace) traces.push_back(t);
                next.push_back({m, i});
            }
        frontier = std::move(next);
    }
    std::sort(traces.begin(), traces.end());
    std::vector<double> out;
    for (double t : traces)
        if (out.empty() || t - out.back() > 1e-7) out.push_back(t);
    return out;
}

GroupSpec conjugated(const GroupSpec& g, const Isometry& m) {
    GroupSpec h = g;
    for (auto& x : h.generators) x = m * x * m.inverse();
    return h;
}

}  // namespace

TEST_CASE("entry expressions evaluate arithmetic and square roots") {
    CHECK(eval_expression("1+sqrt(2)") == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-16));
    CHECK(eval_expression("-(3 - 2*2)/4") == doctest::Approx(0.25).epsilon(1e-16));
    CHECK(eval_expression(" 2.5e-1 ") == 0.25);
    CHECK(eval_expression("sqrt(2+2*sqrt(2))") == doctest::Approx(std::sqrt(2.0 + 2.0 * std::sqrt(2.0))));
    CHECK_THROWS_AS(eval_expression("1+"), input_error);
    CHECK_THROWS_AS(eval_expression("sqrt(-1)"), input_error);
    CHECK_THROWS_AS(eval_expression("1/0"), input_error);
    CHECK_THROWS_AS(eval_expression("2 3"), input_error);
}

TEST_CASE("word operations") {
    const Word w = parse_word("a1 A2 a2 a3", 4);
    CHECK(to_string(free_reduce(w)) == "a1 a3");
    CHECK(to_string(inverse(w)) == "A3 A2 a2 A1");
    CHECK(to_string(cyclic_reduce(parse_word("a2 a1 a3 A2", 4))) == "a1 a3");
    CHECK(to_string(minimal_rotation(parse_word("a3 a1 A1", 4))) == "a1 A1 a3");
    CHECK(letter_less(1, -1));
    CHECK(letter_less(-1, 2));
    CHECK_THROWS_AS(parse_word("a5", 4), input_error);
    CHECK_THROWS_AS(parse_word("b1", 4), input_error);

    auto [u, n] = primitive_decomposition(parse_word("a1 a2 a1 a2", 2));
    CHECK(to_string(u) == "a1 a2");
    CHECK(n == 2);
    auto [v, m] = primitive_decomposition(parse_word("a1 a1 a2", 2));
    CHECK(to_string(v) == "a1 a1 a2");
    CHECK(m == 1);
}

TEST_CASE("octagon file loads and its relator is the identity") {
    const auto& g = octagon();
    CHECK(g.generators.size() == 4);
    REQUIRE(g.genus);
    CHECK(*g.genus == 2);
    CHECK(g.relator_residual < 1e-8);
    // Every generator translates by the systole 2 arccosh(1 + √2).
    const double systole = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    for (const auto& m : g.generators) CHECK(geom::length_of(m) == doctest::Approx(systole).epsilon(1e-12));
    CHECK(systole == doctest::Approx(3.0571418389619963).epsilon(1e-15));
    // A path without extension resolves to the .json file.
    CHECK(load_group("groups/octagon").generators.size() == 4);
}

TEST_CASE("malformed and invalid group files are rejected") {
    CHECK_THROWS_AS(load_group("groups/no_such_group"), input_error);
    CHECK_THROWS_AS(parse_group("{ not json"), input_error);
    using nlohmann::json;
    const json gens = octagon_file()["generators"];
    CHECK_THROWS_AS(parse_group(octagon_json_with(json::array(), json::array())), input_error);
    CHECK_THROWS_AS(parse_group(octagon_json_with(json::parse("[[[0.9, 0], [0, 1]]]"), json::array())), domain_error);
    // Elliptic generator.
    CHECK_THROWS_AS(parse_group(octagon_json_with(json::parse("[[[0, -1], [1, 0]]]"), json::array())), domain_error);
    // Right generators, wrong relator.
    CHECK_THROWS_AS(parse_group(octagon_json_with(gens, json{"a1 a2 a3 a4 A1 A2 A3 A4"})), domain_error);
    CHECK_NOTHROW(parse_group(octagon_json_with(gens, octagon_file()["relators"])));
    auto bad_genus = octagon_file();
    bad_genus["genus"] = 1;
    CHECK_THROWS_AS(parse_group(bad_genus.dump()), input_error);
}

TEST_CASE("octagon Dirichlet domain is the regular octagon") {
    const auto D = dirichlet_domain(octagon());
    CHECK(D.area_verified);
    CHECK(D.area == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-10));
    REQUIRE(D.vertices.size() == 8);
    CHECK(D.side_pairings.size() == 8);
    // Regular octagon with interior angles π/4: cosh R = cot²(π/8).
    const double c = 1.0 / std::tan(std::numbers::pi / 8.0);
    CHECK(D.covering_radius == doctest::Approx(std::acosh(c * c)).epsilon(1e-10));
    for (const auto& v : D.vertices) CHECK(std::hypot(v[0], v[1]) == doctest::Approx(std::tanh(D.covering_radius)));
    // Side pairings come in inverse pairs and each is a word in the generators.
    for (std::size_t k = 0; k < D.side_pairings.size(); ++k) {
        CHECK(geom::matrix_distance(evaluate(octagon(), D.side_words[k]), D.side_pairings[k]) < 1e-10);
        int inverses = 0;
        for (const auto& h : D.side_pairings)
            inverses += geom::matrix_distance(h, D.side_pairings[k].inverse()) < 1e-10;
        CHECK(inverses == 1);
    }
}

TEST_CASE("a file without genus still gets a domain, flagged unverified") {
    auto j = octagon_file();
    j.erase("genus");
    const auto spec = parse_group(j.dump());
    const auto D = dirichlet_domain(spec);
    CHECK_FALSE(D.area_verified);
    CHECK(D.area == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("orbit ball matches a brute-force word search") {
    const auto D = dirichlet_domain(octagon());
    const double r = 6.0;
    const auto ball = orbit_ball(D.side_pairings, D.side_words, D.basepoint, r);
    CHECK_FALSE(ball.exhausted);
    // Words of length <= 4 reach displacement at most 4 × systole; keep those inside r.
    std::vector<Isometry> found;
    std::vector<Isometry> letters;
    for (const auto& m : octagon().generators) {
        letters.push_back(m);
        letters.push_back(m.inverse());
    }
    std::vector<Isometry> frontier{Isometry{}};
    for (int n = 0; n < 4; ++n) {
        std::vector<Isometry> next;
        for (const auto& m : frontier)
            for (const auto& l : letters) next.push_back(l * m);
        frontier = std::move(next);
        for (const auto& m : frontier)
            if (cosh_displacement(m, D.basepoint) <= std::cosh(r)) found.push_back(m);
    }
    std::size_t missing = 0;
    for (const auto& m : found) {
        bool hit = false;
        for (const auto& e : ball.elements)
            if (geom::matrix_distance(e, m) < 1e-9) {
                hit = true;
                break;
            }
        missing += !hit;
    }
    CHECK(missing == 0);
    for (std::size_t k = 0; k < ball.elements.size(); k += 17)
        CHECK(geom::matrix_distance(evaluate(octagon(), ball.word(k)), ball.elements[k]) < 1e-9);
}

TEST_CASE("short cutoffs: nothing below the systole, then the systole alone") {
    CHECK(length_spectrum(octagon(), 1.0).entries.empty());
    const auto s = length_spectrum(octagon(), 3.1);
    REQUIRE(s.entries.size() == 1);
    CHECK(s.entries[0].length == doctest::Approx(2.0 * std::acosh(1.0 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(s.entries[0].multiplicity % 2 == 0);
    CHECK(s.entries[0].multiplicity == 24);  // golden: 12 closed systoles, two orientations each
}

TEST_CASE("every enumerated length is a trace found by brute force, and conversely") {
    const double L = 5.0;
    const auto s = length_spectrum(octagon(), L);
    const auto tr = brute_force_traces(octagon(), 4, 2.0 * std::cosh(L / 2.0));
    REQUIRE(s.entries.size() == tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        CHECK(s.entries[k].length == doctest::Approx(2.0 * std::acosh(tr[k] / 2.0)).epsilon(1e-10));
    }
}

TEST_CASE("classes: sorted, primitive flags consistent, inverse classes paired") {
    const double L = 7.0;
    const auto cls = enumerate_classes(octagon(), L);
    REQUIRE(!cls.empty());
    for (std::size_t k = 1; k < cls.size(); ++k) CHECK(cls[k - 1].length <= cls[k].length + 1e-9);
    std::size_t powers = 0;
    for (const auto& c : cls) {
        CHECK(c.length <= L + 1e-9);
        CHECK(geom::length_of(c.representative) == doctest::Approx(c.length).epsilon(1e-12));
        // The label is a true word for an element of the class: same length.
        CHECK(geom::length_of(evaluate(octagon(), c.canonical_word)) == doctest::Approx(c.length).epsilon(1e-9));
        if (c.power > 1) {
            ++powers;
            CHECK(c.canonical_word.size() == c.power * c.primitive_word.size());
            CHECK(geom::length_of(evaluate(octagon(), c.primitive_word)) ==
                  doctest::Approx(c.length / c.power).epsilon(1e-9));
        }
    }
    CHECK(powers == 24);  // squares of the systoles are the only powers below 7
    // Oriented classes: the inverse of each class is another class of the same length.
    const auto s = spectrum_from_classes(cls, L);
    for (const auto& e : s.entries) CHECK(e.multiplicity % 2 == 0);
}

TEST_CASE("the two enumeration strategies agree") {
    for (double L : {3.5, 5.0, 6.5}) {
        const auto a = length_spectrum(octagon(), L);
        const auto b = length_spectrum_word_bfs(octagon(), L);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t k = 0; k < a.entries.size(); ++k) {
            CHECK(a.entries[k].multiplicity == b.entries[k].multiplicity);
            CHECK(a.entries[k].length == doctest::Approx(b.entries[k].length).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectrum is invariant under conjugating the group") {
    const auto base = length_spectrum(octagon(), 6.0);
    for (int trial = 0; trial < 3; ++trial) {
        const double a = uniform(0.6, 1.6), b = uniform(-0.5, 0.5), c = uniform(-0.5, 0.5);
        const auto m = Isometry::from_entries(a, b, c, (1.0 + b * c) / a);
        const auto s = length_spectrum(conjugated(octagon(), m), 6.0);
        REQUIRE(s.entries.size() == base.entries.size());
        for (std::size_t k = 0; k < s.entries.size(); ++k) {
            CHECK(s.entries[k].length == doctest::Approx(base.entries[k].length).epsilon(1e-9));
            CHECK(s.entries[k].multiplicity == base.entries[k].multiplicity);
        }
    }
}

TEST_CASE("count of classes grows exponentially at rate near 1") {
    for (double L : {6.0, 7.0, 8.0}) {
        int count = 0;
        for (const auto& e : length_spectrum(octagon(), L).entries) count += e.multiplicity;
        const double rate = std::log(double(count)) / L;
        CHECK(rate > 0.5);
        CHECK(rate < 1.5);
    }
}

TEST_CASE("doubling the deduplication tolerance changes nothing") {
    const auto cls = enumerate_classes(octagon(), 7.0);
    const auto s1 = spectrum_from_classes(cls, 7.0);
    const auto s2 = spectrum_from_classes(cls, 7.0, 2.0 * s1.dedup_tolerance);
    REQUIRE(s1.entries.size() == s2.entries.size());
    for (std::size_t k = 0; k < s1.entries.size(); ++k) CHECK(s1.entries[k].multiplicity == s2.entries[k].multiplicity);
}

TEST_CASE("results do not depend on the thread count") {
    const auto one = enumerate_classes(octagon(), 7.0, {1});
    const auto four = enumerate_classes(octagon(), 7.0, {4});
    REQUIRE(one.size() == four.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].canonical_word == four[k].canonical_word);
        CHECK(one[k].length == four[k].length);
        CHECK(one[k].representative == four[k].representative);
    }
}

TEST_CASE("a small element budget reports the complete prefix") {
    EnumerationOptions opt;
    opt.max_elements = 20'000;
    try {
        (void)enumerate_classes(octagon(), 8.0, opt);
        FAIL("expected a budget error");
    } catch (const enumeration_budget_error& e) {
        CHECK(e.complete_cutoff < 8.0);
        const auto full = enumerate_classes(octagon(), e.complete_cutoff);
        CHECK(full.size() == e.partial.size());
    }
    CHECK_THROWS_AS(enumerate_classes(octagon(), -1.0), domain_error);
}

TEST_CASE("chord of an axis through the domain") {
    const auto D = dirichlet_domain(octagon());
    const auto e = axis_endpoints(octagon().generators[0], D.basepoint);
    const auto ch = D.chord(e.first, e.second);
    REQUIRE(ch);
    CHECK_FALSE(ch->along_edge);
    // The generator maps one midpoint to the opposite one, so the chord equals its translation length.
    CHECK(ch->length == doctest::Approx(geom::length_of(octagon().generators[0])).epsilon(1e-9));
}

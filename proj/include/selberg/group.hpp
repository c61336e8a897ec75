#pragma once

#include "selberg/geom.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selberg::group {

using geom::cx;
using geom::Isometry;

// Letters are signed 1-based generator indices: +k is a_k, -k is A_k = a_k^{-1}.
struct Word {
    std::vector<int> letters;
    bool reduced = false;

    std::size_t size() const { return letters.size(); }
    bool operator==(const Word& o) const { return letters == o.letters; }
};

Word parse_word(const std::string& text, int n_generators);
std::string to_string(const Word& w);
Word inverse(const Word& w);
Word free_reduce(Word w);
Word cyclic_reduce(Word w);           // free + cyclic reduction
Word minimal_rotation(const Word& w);  // lexicographically least cyclic rotation
bool letter_less(int x, int y);        // a1 < A1 < a2 < A2 < ...

// Smallest p | n with w = u^{n/p}, u the length-p prefix; returns (u, n/p).
std::pair<Word, int> primitive_decomposition(const Word& w);

struct GroupSpec {
    std::vector<Isometry> generators;
    std::vector<Word> relator_words;
    std::string label;
    std::optional<int> genus;
    cx basepoint{0.0, 1.0};
    double relator_residual = 0.0;  // max over relators of distance to the identity
};

Isometry evaluate(const GroupSpec& spec, const Word& w);

// Entries are JSON numbers or arithmetic strings over numbers, sqrt(), + - * /
// and parentheses.  Throws input_error (bad file) or domain_error (invalid group).
GroupSpec parse_group(const std::string& json_text);
// Reads `path`, or `path + ".json"` when `path` does not exist.
GroupSpec load_group(const std::string& path);

// Evaluate one entry expression; exposed for tests.
double eval_expression(const std::string& expr);

struct ConjugacyClass {
    Word canonical_word;
    Isometry representative;
    double length = 0.0;
    Word primitive_word;
    int power = 1;
};

struct LengthEntry {
    double length;
    int multiplicity;
};

struct LengthSpectrum {
    std::vector<LengthEntry> entries;
    double cutoff = 0.0;
    double dedup_tolerance = 0.0;
};

struct EnumerationOptions {
    int threads = 1;
    std::size_t max_elements = 20'000'000;
};

// Thrown when the element budget is hit; carries everything that is complete
// up to `complete_cutoff` < the requested cutoff.
class enumeration_budget_error : public std::runtime_error {
public:
    enumeration_budget_error(const std::string& what, double complete_cutoff, std::vector<ConjugacyClass> partial)
        : std::runtime_error(what), complete_cutoff(complete_cutoff), partial(std::move(partial)) {}
    double complete_cutoff;
    std::vector<ConjugacyClass> partial;
};

inline double default_dedup_tolerance(double L_max) { return 1e-9 * std::cosh(0.5 * L_max); }

// All oriented conjugacy classes (primitive and powers) with length <= L_max,
// sorted by (length, canonical word).
std::vector<ConjugacyClass> enumerate_classes(const GroupSpec& spec, double L_max, const EnumerationOptions& opt = {});

// Primitive classes grouped by length.  dedup_tolerance <= 0 selects the default.
LengthSpectrum length_spectrum(const GroupSpec& spec, double L_max, double dedup_tolerance = 0.0,
                               const EnumerationOptions& opt = {});
LengthSpectrum spectrum_from_classes(const std::vector<ConjugacyClass>& classes, double L_max,
                                     double dedup_tolerance = 0.0);

// Independent count of primitive classes per length from a word-length BFS
// over the file generators and the axis-measure identity; see README.
LengthSpectrum length_spectrum_word_bfs(const GroupSpec& spec, double L_max, double dedup_tolerance = 0.0,
                                        const EnumerationOptions& opt = {});

}  // namespace selberg::group

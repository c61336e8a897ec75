#include "selberg/group.hpp"

#include "selberg/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace selberg::group {

// ---------------------------------------------------------------- words

Word parse_word(const std::string& text, int n_generators) {
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == '*' || ch == ',') {
            ++i;
            continue;
        }
        if (ch != 'a' && ch != 'A') throw input_error("word: unexpected character '" + std::string(1, ch) + "' in " + text);
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i + 1) throw input_error("word: letter without generator index in " + text);
        const int k = std::stoi(text.substr(i + 1, j - i - 1));
        if (k < 1 || k > n_generators) throw input_error("word: generator index out of range in " + text);
        w.letters.push_back(ch == 'a' ? k : -k);
        i = j;
    }
    return w;
}

std::string to_string(const Word& w) {
    std::string s;
    for (int x : w.letters) {
        if (!s.empty()) s += ' ';
        s += (x > 0 ? 'a' : 'A');
        s += std::to_string(std::abs(x));
    }
    return s;
}

Word inverse(const Word& w) {
    Word r;
    r.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(-*it);
    r.reduced = w.reduced;
    return r;
}

Word free_reduce(Word w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (int x : w.letters) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    w.letters = std::move(out);
    w.reduced = true;
    return w;
}

Word cyclic_reduce(Word w) {
    w = free_reduce(std::move(w));
    std::size_t lo = 0, hi = w.size();
    while (hi - lo >= 2 && w.letters[lo] == -w.letters[hi - 1]) ++lo, --hi;
    w.letters = std::vector<int>(w.letters.begin() + long(lo), w.letters.begin() + long(hi));
    return w;
}

bool letter_less(int x, int y) {
    const int ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return x > y;  // a_k before A_k
}

Word minimal_rotation(const Word& w) {
    Word best = w;
    const std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        Word c;
        c.reduced = w.reduced;
        c.letters.reserve(n);
        for (std::size_t k = 0; k < n; ++k) c.letters.push_back(w.letters[(r + k) % n]);
        if (std::lexicographical_compare(c.letters.begin(), c.letters.end(), best.letters.begin(), best.letters.end(),
                                         letter_less))
            best = std::move(c);
    }
    return best;
}

std::pair<Word, int> primitive_decomposition(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool ok = true;
        for (std::size_t k = p; k < n && ok; ++k) ok = w.letters[k] == w.letters[k - p];
        if (ok) {
            Word u;
            u.letters.assign(w.letters.begin(), w.letters.begin() + long(p));
            u.reduced = w.reduced;
            return {u, int(n / p)};
        }
    }
    return {w, 1};
}

Isometry evaluate(const GroupSpec& spec, const Word& w) {
    Isometry m;
    for (int x : w.letters) {
        const auto& g = spec.generators.at(std::size_t(std::abs(x) - 1));
        m = m * (x > 0 ? g : g.inverse());
    }
    return m;
}

// ---------------------------------------------------------------- expressions

namespace {

struct ExprParser {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw input_error("expression '" + s + "': " + msg + " at offset " + std::to_string(i));
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    double expr() {
        double v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }
    double term() {
        double v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/')) {
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else
                return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }
    double primary() {
        skip();
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (s.compare(i, 4, "sqrt") == 0) {
            i += 4;
            if (!eat('(')) fail("expected '(' after sqrt");
            const double v = expr();
            if (!eat(')')) fail("expected ')'");
            if (v < 0.0) fail("sqrt of a negative number");
            return std::sqrt(v);
        }
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
            const char* begin = s.c_str() + i;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            i += std::size_t(end - begin);
            return v;
        }
        fail("unexpected token");
    }
};

double entry_value(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return eval_expression(j.get<std::string>());
    throw input_error("matrix entry must be a number or an expression string");
}

}  // namespace

double eval_expression(const std::string& expr) {
    ExprParser p{expr};
    const double v = p.expr();
    p.skip();
    if (p.i != expr.size()) p.fail("trailing characters");
    if (!std::isfinite(v)) p.fail("non-finite value");
    return v;
}

// ---------------------------------------------------------------- loading

GroupSpec parse_group(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("group file: ") + e.what());
    }
    GroupSpec spec;
    spec.label = j.value("label", std::string{});
    if (j.contains("genus")) {
        if (!j["genus"].is_number_integer() || j["genus"].get<int>() < 2)
            throw input_error("group file: genus must be an integer >= 2");
        spec.genus = j["genus"].get<int>();
    }
    if (j.contains("basepoint")) {
        const auto& b = j["basepoint"];
        if (!b.is_array() || b.size() != 2) throw input_error("group file: basepoint must be [re, im]");
        spec.basepoint = {entry_value(b[0]), entry_value(b[1])};
        if (!(spec.basepoint.imag() > 0.0)) throw input_error("group file: basepoint must lie in the upper half-plane");
    }
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
        throw input_error("group file: empty generator list");
    for (const auto& m : j["generators"]) {
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 ||
            m[1].size() != 2)
            throw input_error("group file: each generator must be a 2x2 matrix");
        const double a = entry_value(m[0][0]), b = entry_value(m[0][1]);
        const double c = entry_value(m[1][0]), d = entry_value(m[1][1]);
        const double det = a * d - b * c;
        if (std::abs(det - 1.0) > 1e-9)
            throw domain_error("generator " + std::to_string(spec.generators.size() + 1) + " has determinant " +
                               std::to_string(det) + ", not 1");
        const auto g = Isometry::from_entries(a, b, c, d);
        bool near = false;
        const auto kind = geom::classify(g, &near);
        if (kind != geom::IsometryClass::hyperbolic)
            throw domain_error("generator " + std::to_string(spec.generators.size() + 1) + " is " +
                               geom::to_string(kind) + "; only strictly hyperbolic groups are supported");
        spec.generators.push_back(g);
    }
    const int n = int(spec.generators.size());
    if (j.contains("relators")) {
        for (const auto& r : j["relators"]) {
            if (!r.is_string()) throw input_error("group file: relators must be strings");
            spec.relator_words.push_back(parse_word(r.get<std::string>(), n));
        }
    }
    for (const auto& w : spec.relator_words) {
        const double res = geom::matrix_distance(evaluate(spec, w), Isometry{});
        spec.relator_residual = std::max(spec.relator_residual, res);
        if (res > 1e-8)
            throw domain_error("relator " + to_string(w) + " is not the identity (residual " + std::to_string(res) + ")");
    }
    return spec;
}

GroupSpec load_group(const std::string& path) {
    namespace fs = std::filesystem;
    std::string p = path;
    if (!fs::exists(p) && fs::exists(p + ".json")) p += ".json";
    std::ifstream in(p);
    if (!in) throw input_error("cannot open group file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto spec = parse_group(ss.str());
    if (spec.label.empty()) spec.label = fs::path(p).stem().string();
    return spec;
}

}  // namespace selberg::group

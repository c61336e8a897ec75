#include "selberg/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace selberg::report {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

nlohmann::ordered_json jnum(double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(); }

}  // namespace

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render(const std::vector<trace::TraceReport>& rows, Format f) {
    const double nan = std::nan("");
    if (f == Format::csv) {
        std::string out = "formula,parameters,spectral,spectral_im,geometric,geometric_im,abs_diff,rel_diff,tail_bound\n";
        for (const auto& r : rows) {
            const auto sp = r.spectral.value_or(trace::cx(nan, nan));
            out += csv_field(r.formula) + ',' + csv_field(r.parameters) + ',' + number(sp.real()) + ',' +
                   number(sp.imag()) + ',' + number(r.geometric.real()) + ',' + number(r.geometric.imag()) + ',' +
                   number(r.abs_diff()) + ',' + number(r.rel_diff()) + ',' + number(r.tail_bound()) + '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["formula"] = r.formula;
        j["parameters"] = r.parameters;
        if (r.spectral)
            j["spectral"] = {jnum(r.spectral->real()), jnum(r.spectral->imag())};
        else
            j["spectral"] = nullptr;
        j["geometric"] = {jnum(r.geometric.real()), jnum(r.geometric.imag())};
        j["abs_diff"] = jnum(r.abs_diff());
        j["rel_diff"] = jnum(r.rel_diff());
        j["tail_bound"] = jnum(r.tail_bound());
        doc.push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::string render(const group::LengthSpectrum& s, Format f) {
    if (f == Format::csv) {
        std::string out = "length,multiplicity\n";
        for (const auto& e : s.entries) out += number(e.length) + ',' + std::to_string(e.multiplicity) + '\n';
        return out;
    }
    nlohmann::ordered_json doc;
    doc["cutoff"] = s.cutoff;
    doc["dedup_tolerance"] = s.dedup_tolerance;
    doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : s.entries) doc["entries"].push_back({{"length", e.length}, {"multiplicity", e.multiplicity}});
    return doc.dump(2) + "\n";
}

}  // namespace selberg::report

#pragma once

// Fixed-format rendering of report rows: CSV with 17 significant digits, or a
// JSON document.  Both are byte-identical for identical rows.

#include "selberg/group.hpp"
#include "selberg/trace.hpp"

#include <string>
#include <vector>

namespace selberg::report {

enum class Format { csv, text };

std::string number(double x);  // %.17g; "nan" / "inf" spelled out

std::string render(const std::vector<trace::TraceReport>& rows, Format f);
std::string render(const group::LengthSpectrum& s, Format f);

}  // namespace selberg::report

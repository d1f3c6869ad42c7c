#pragma once

#include <string>

namespace advchan::detail {

// 15 significant digits, trailing zeros dropped; "nan"/"inf" spelled out.
std::string format_double(double v);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace advchan::detail

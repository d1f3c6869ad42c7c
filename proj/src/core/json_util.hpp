#pragma once

#include <algorithm>
#include <json.hpp>
#include <string>
#include <string_view>

#include "advchan/error.hpp"

namespace advchan::detail {

// Parses JSON, converting parse errors to ParseError with line:column.
inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
}

}  // namespace advchan::detail

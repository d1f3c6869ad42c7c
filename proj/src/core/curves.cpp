#include "advchan/curves.hpp"

#include <cmath>

#include "advchan/capacity.hpp"
#include "advchan/error.hpp"
#include "format.hpp"

namespace advchan::curves {

using detail::csv_field;
using detail::format_double;

const char* to_string(Model m) noexcept {
  switch (m) {
    case Model::ErasureNoFB: return "erasure";
    case Model::ErasureFB: return "erasure-fb";
    case Model::FlipUpper: return "flip-upper";
    case Model::FlipLower: return "flip-lower";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  for (auto m : {Model::ErasureNoFB, Model::ErasureFB, Model::FlipUpper, Model::FlipLower}) {
    if (s == to_string(m)) {
      return m;
    }
  }
  throw ConfigError("unknown model '" + s + "' (expected erasure, erasure-fb, flip-upper, flip-lower)");
}

void CurveRequest::validate() const {
  if (q_values.empty()) {
    throw ConfigError("at least one q value is required");
  }
  if (!(std::isfinite(p_step) && p_step > 0.0)) {
    throw ConfigError("p step must be positive");
  }
  if (!(std::isfinite(p_start) && std::isfinite(p_stop) && p_start <= p_stop)) {
    throw ConfigError("p start must not exceed p stop");
  }
  if ((p_stop - p_start) / p_step > 1e7) {
    throw ConfigError("p grid has more than 10^7 points");
  }
}

std::vector<double> CurveRequest::p_grid() const {
  validate();
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double raw = p_start + static_cast<double>(i) * p_step;
    if (raw > p_stop + 1e-9) {
      break;
    }
    grid.push_back(std::round(raw * 1e12) / 1e12);
  }
  return grid;
}

std::string capacity_csv(const CurveRequest& request) {
  const auto grid = request.p_grid();
  std::string out = "model,q,p,value,note\n";
  for (double q : request.q_values) {
    for (double p : grid) {
      std::string value;
      std::string note;
      try {
        switch (request.model) {
          case Model::ErasureNoFB: value = format_double(capacity::capacity_erasure(p, q).value()); break;
          case Model::ErasureFB: value = format_double(capacity::capacity_erasure_feedback(p, q).value()); break;
          case Model::FlipUpper: value = format_double(capacity::upper_bound_flip_closed(p, q).value()); break;
          case Model::FlipLower: value = format_double(capacity::achievable_flip(p, q).value()); break;
        }
      } catch (const Error& e) {
        value.clear();
        note = e.what();
      }
      out += std::string(to_string(request.model)) + "," + format_double(q) + "," + format_double(p) +
             "," + value + "," + csv_field(note) + "\n";
    }
  }
  return out;
}

std::string p0_csv(const std::vector<double>& q_values, double tol) {
  if (q_values.empty()) {
    throw ConfigError("at least one q value is required");
  }
  if (!(tol > 0.0)) {
    throw ConfigError("tolerance must be positive");
  }
  std::string out = "q,p0,residual,note\n";
  for (double q : q_values) {
    std::string p0;
    std::string residual;
    std::string note;
    try {
      const auto sol = capacity::p0_solve(q, tol);
      p0 = format_double(sol.p0);
      residual = format_double(sol.residual);
    } catch (const Error& e) {
      note = e.what();
    }
    out += format_double(q) + "," + p0 + "," + residual + "," + csv_field(note) + "\n";
  }
  return out;
}

}  // namespace advchan::curves

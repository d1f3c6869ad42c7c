#pragma once

#include <string>
#include <vector>

namespace advchan::curves {

enum class Model { ErasureNoFB, ErasureFB, FlipUpper, FlipLower };

const char* to_string(Model m) noexcept;
// Accepts erasure, erasure-fb, flip-upper, flip-lower. Throws ConfigError.
Model model_from_string(const std::string& s);

struct CurveRequest {
  Model model = Model::ErasureNoFB;
  std::vector<double> q_values;
  double p_start = 0.0;
  double p_stop = 0.5;
  double p_step = 0.01;

  // step > 0, start <= stop, at least one q. Throws ConfigError.
  void validate() const;
  // start + i * step rounded to 12 decimals, up to stop (inclusive within 1e-9).
  std::vector<double> p_grid() const;
};

// CSV with columns model,q,p,value,note. Rows run over q, then p.
// Out-of-domain points get an empty value and a note.
std::string capacity_csv(const CurveRequest& request);

// CSV with columns q,p0,residual,note; solver failures noted per row.
std::string p0_csv(const std::vector<double>& q_values, double tol);

}  // namespace advchan::curves

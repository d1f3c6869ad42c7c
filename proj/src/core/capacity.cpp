#include "advchan/capacity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "advchan/error.hpp"

namespace advchan::capacity {

namespace {

constexpr double kQuarter = 0.25;
constexpr std::size_t kGridPoints = 10000;
constexpr int kMaxGoldenIterations = 500;

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

void require_flip_q(double q) {
  if (!(q >= 0.0 && q <= 0.5)) {
    throw DomainError("flip-channel q must lie in [0, 1/2], got " + std::to_string(q));
  }
}

}  // namespace

Rate::Rate(double value) : value_(value) {
  if (value < 0.0 && value >= -1e-12) {
    value_ = 0.0;
  }
  if (!(value_ >= 0.0 && value_ <= 1.0)) {
    throw DomainError("rate must lie in [0, 1], got " + std::to_string(value));
  }
}

double h2(double x) {
  require_unit(x, "h2 argument");
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double star(double x, double y) {
  require_unit(x, "star lhs");
  require_unit(y, "star rhs");
  return x * (1.0 - y) + y * (1.0 - x);
}

Rate capacity_erasure(double p, double q) {
  require_unit(p, "p");
  require_unit(q, "q");
  if (p >= 0.5) {
    return Rate(0.0);
  }
  return Rate((1.0 - 2.0 * p) * (1.0 - q));
}

Rate capacity_erasure_feedback(double p, double q) {
  require_unit(p, "p");
  require_unit(q, "q");
  return Rate((1.0 - p) * (1.0 - q));
}

const char* to_string(FlipRegime regime) noexcept {
  switch (regime) {
    case FlipRegime::ConvexRegion:
      return "convex_region";
    case FlipRegime::LinearRegion:
      return "linear_region";
    case FlipRegime::Zero:
      return "zero";
  }
  return "unknown";
}

double flip_objective(double p, double p_bar, double q) {
  const double alpha = 1.0 - 4.0 * (p - p_bar);
  if (!(alpha > 0.0)) {
    throw DomainError("flip objective needs alpha > 0");
  }
  // p_bar / alpha can exceed 1 by an ulp at p_bar == p == 0 edge cases.
  const double ratio = std::min(1.0, std::max(0.0, p_bar / alpha));
  return alpha * (1.0 - h2(star(ratio, q)));
}

FlipBoundBreakdown upper_bound_flip_numeric(double p, double q, double tol) {
  require_unit(p, "p");
  require_flip_q(q);
  if (!(tol > 0.0)) {
    throw DomainError("tol must be positive");
  }

  FlipBoundBreakdown out;
  out.p = p;
  out.q = q;
  try {
    out.p0 = q < 0.5 ? p0_solve(q).p0 : 0.0;
  } catch (const SolverError&) {
    out.p0 = std::numeric_limits<double>::quiet_NaN();
  }

  if (q == 0.5) {
    out.value = 0.0;
    out.p_bar_star = p;
    out.alpha = 1.0;
    out.regime = FlipRegime::Zero;
    return out;
  }
  if (p >= kQuarter) {
    out.value = 0.0;
    out.p_bar_star = p - kQuarter;
    out.alpha = 0.0;
    out.regime = FlipRegime::Zero;
    return out;
  }

  auto objective = [&](double x) { return flip_objective(p, x, q); };

  // Dense scan.
  const double step = p / static_cast<double>(kGridPoints);
  std::size_t best_index = 0;
  double best_value = objective(0.0);
  for (std::size_t i = 1; i <= kGridPoints; ++i) {
    const double x = i == kGridPoints ? p : step * static_cast<double>(i);
    const double v = objective(x);
    if (v < best_value) {
      best_value = v;
      best_index = i;
    }
  }
  double best_x = best_index == kGridPoints ? p : step * static_cast<double>(best_index);

  // Golden-section refinement on the neighbouring cells.
  double lo = best_index == 0 ? 0.0 : step * static_cast<double>(best_index - 1);
  double hi = best_index >= kGridPoints - 1 ? p : step * static_cast<double>(best_index + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  int iterations = 0;
  while (hi - lo > tol && iterations < kMaxGoldenIterations) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = objective(d);
    }
    ++iterations;
  }
  out.converged = hi - lo <= tol;

  // Keep the best of the refined midpoint, the probes and the bracket ends;
  // the minimizer often sits on the boundary p_bar = p.
  for (double x : {0.5 * (lo + hi), c, d, lo, hi}) {
    const double v = objective(x);
    if (v < best_value) {
      best_value = v;
      best_x = x;
    }
  }

  out.value = std::max(0.0, best_value);
  out.p_bar_star = best_x;
  out.alpha = 1.0 - 4.0 * (p - best_x);
  const double boundary_slack = std::max(10.0 * tol, 1e-7);
  out.regime = (p - best_x) <= boundary_slack ? FlipRegime::ConvexRegion : FlipRegime::LinearRegion;
  return out;
}

double p0_equation(double p0, double q) {
  const double r = star(p0, q);
  return 4.0 + (1.0 + 2.0 * q) * std::log2(r) + (3.0 - 2.0 * q) * std::log2(1.0 - r);
}

P0Solution p0_solve(double q, double tol) {
  if (!(q >= 0.0 && q < 0.5)) {
    throw DomainError("p0_solve needs q in [0, 1/2), got " + std::to_string(q));
  }
  if (!(tol > 0.0)) {
    throw DomainError("tol must be positive");
  }
  double lo = 1e-9;
  double hi = kQuarter - 1e-9;
  double f_lo = p0_equation(lo, q);
  const double f_hi = p0_equation(hi, q);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw SolverError("p0 equation has no sign change on [1e-9, 1/4 - 1e-9] for q = " +
                      std::to_string(q));
  }

  P0Solution sol;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = p0_equation(mid, q);
    sol.iterations = it + 1;
    if (std::abs(f_mid) < tol) {
      sol.p0 = mid;
      sol.residual = f_mid;
      return sol;
    }
    if (mid <= lo || mid >= hi) {
      break;  // bracket collapsed to adjacent doubles
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw SolverError("p0 bisection could not reach residual " + std::to_string(tol) +
                    " for q = " + std::to_string(q));
}

Rate upper_bound_flip_closed(double p, double q) {
  require_unit(p, "p");
  require_flip_q(q);
  if (q == 0.5 || p >= kQuarter) {
    return Rate(0.0);
  }
  const double p0 = p0_solve(q).p0;
  if (p <= p0) {
    return Rate(1.0 - h2(star(p, q)));
  }
  return Rate((1.0 - 4.0 * p) / (1.0 - 4.0 * p0) * (1.0 - h2(star(p0, q))));
}

Rate achievable_flip(double p, double q) {
  require_unit(p, "p");
  require_flip_q(q);
  return upper_bound_flip_closed(star(p, q), 0.0);
}

}  // namespace advchan::capacity

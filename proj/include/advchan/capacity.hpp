#pragma once

#include <compare>

namespace advchan::capacity {

// Achievable rate in bits per channel use, always in [0, 1].
class Rate {
public:
  // Throws DomainError outside [0, 1]. Round-off below zero of at most
  // 1e-12 is snapped to 0.
  explicit Rate(double value);

  double value() const noexcept { return value_; }
  auto operator<=>(const Rate&) const = default;

private:
  double value_;
};

/// Binary entropy in bits, with h2(0) = h2(1) = 0.
double h2(double x);

/// Crossover probability of two cascaded binary symmetric channels:
/// x(1-y) + y(1-x).
double star(double x, double y);

/// Capacity of the erasure channel with an online snooping adversary and
/// no transmitter feedback: (1-2p)(1-q) for p <= 1/2, else 0.
Rate capacity_erasure(double p, double q);

/// Same channel with causal feedback to the transmitter: (1-p)(1-q).
Rate capacity_erasure_feedback(double p, double q);

enum class FlipRegime { ConvexRegion, LinearRegion, Zero };

const char* to_string(FlipRegime regime) noexcept;

struct FlipBoundBreakdown {
  double p = 0.0;
  double q = 0.0;
  double value = 0.0;
  // Minimizing adversarial babble fraction, in [0, p].
  double p_bar_star = 0.0;
  // 1 - 4(p - p_bar_star).
  double alpha = 1.0;
  // Regime boundary for this q; NaN when the root solver failed.
  double p0 = 0.0;
  FlipRegime regime = FlipRegime::Zero;
  bool converged = true;
};

// alpha * (1 - h2(p_bar / alpha * q)) with alpha = 1 - 4(p - p_bar).
// Requires p < 1/4 so that alpha > 0 on [0, p].
double flip_objective(double p, double p_bar, double q);

// Minimizes flip_objective over p_bar in [0, p] by a dense grid scan
// followed by golden-section refinement of the best cell. tol bounds the
// final bracket width in p_bar. Makes no convexity assumption.
FlipBoundBreakdown upper_bound_flip_numeric(double p, double q, double tol = 1e-9);

// 4 + (1+2q) log2(p0*q) + (3-2q) log2(1 - p0*q), with * the cascade
// operator. Its root in (0, 1/4) is the regime boundary p0(q).
double p0_equation(double p0, double q);

struct P0Solution {
  double p0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Bisection on [1e-9, 1/4 - 1e-9]. Throws SolverError if the bracket has no
// sign change or the residual cannot be pushed below tol.
P0Solution p0_solve(double q, double tol = 1e-12);

/// Three-piece closed form of the flip upper bound:
/// 1 - h2(p*q) up to p0, then the tangent line through (1/4, 0), then 0.
Rate upper_bound_flip_closed(double p, double q);

/// Lower bound for the flip channel: the q = 0 upper bound at p*q.
Rate achievable_flip(double p, double q);

}  // namespace advchan::capacity

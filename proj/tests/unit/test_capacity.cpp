#include <doctest.h>

#include <cmath>
#include <limits>

#include "advchan/capacity.hpp"
#include "advchan/error.hpp"

using namespace advchan;
using namespace advchan::capacity;

namespace {

double h2_ref(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) / std::log(2.0) - (1 - x) * std::log(1 - x) / std::log(2.0);
}

// Regime boundaries computed offline at 40 significant digits.
struct P0Ref {
  double q;
  double p0;
};
constexpr P0Ref kP0[] = {{0.0, 0.08035662239291943},
                         {0.1, 0.05215081057877342},
                         {0.2, 0.02963289466509156},
                         {0.3, 0.01326164583133260},
                         {0.4, 0.003328880292180280}};

}  // namespace

TEST_SUITE("capacity") {

TEST_CASE("binary entropy") {
  CHECK(h2(0.0) == 0.0);
  CHECK(h2(1.0) == 0.0);
  CHECK(h2(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  // 2 - (3/4) log2 3
  CHECK(h2(0.25) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-15));
  for (double x = 0.01; x < 1.0; x += 0.037) {
    CHECK(h2(x) == doctest::Approx(h2_ref(x)).epsilon(1e-13));
    CHECK(h2(x) == doctest::Approx(h2(1.0 - x)).epsilon(1e-13));
  }
}

TEST_CASE("cascade operator") {
  CHECK(star(0.1, 0.2) == doctest::Approx(0.26));
  CHECK(star(0.3, 0.0) == 0.3);
  CHECK(star(0.3, 0.5) == doctest::Approx(0.5));
  CHECK(star(0.2, 0.4) == doctest::Approx(star(0.4, 0.2)));
}

TEST_CASE("erasure closed forms") {
  CHECK(std::abs(capacity_erasure(0.1, 0.3).value() - 0.56) <= std::numeric_limits<double>::epsilon());
  CHECK(capacity_erasure(0.5, 0.2).value() == 0.0);
  CHECK(capacity_erasure(0.9, 0.0).value() == 0.0);
  CHECK(capacity_erasure(0.0, 0.0).value() == 1.0);
  CHECK(capacity_erasure_feedback(0.5, 0.5).value() == 0.25);
  CHECK(capacity_erasure_feedback(0.2, 0.1).value() == doctest::Approx(0.72));
  CHECK_THROWS_AS(capacity_erasure(-0.1, 0.0), DomainError);
  CHECK_THROWS_AS(capacity_erasure(0.1, 1.5), DomainError);
}

TEST_CASE("rate type") {
  CHECK(Rate(-1e-13).value() == 0.0);
  CHECK_THROWS_AS(Rate(-1e-6), DomainError);
  CHECK_THROWS_AS(Rate(1.0001), DomainError);
  CHECK(Rate(0.2) < Rate(0.3));
}

TEST_CASE("flip bound endpoints and regimes") {
  // q = 0, p small: the curve branch 1 - h2(p)
  CHECK(upper_bound_flip_closed(0.01, 0.0).value() == doctest::Approx(1.0 - h2_ref(0.01)).epsilon(1e-12));
  CHECK(upper_bound_flip_closed(0.0, 0.2).value() == doctest::Approx(1.0 - h2_ref(0.2)).epsilon(1e-12));
  CHECK(upper_bound_flip_closed(0.25, 0.1).value() == 0.0);
  CHECK(upper_bound_flip_closed(0.3, 0.0).value() == 0.0);
  CHECK(upper_bound_flip_closed(0.1, 0.5).value() == 0.0);
  // linear branch at q = 0, p = 0.1 > p0(0)
  CHECK(achievable_flip(0.0, 0.1).value() == doctest::Approx(0.5274878529639829).epsilon(1e-10));
  CHECK(upper_bound_flip_closed(0.1, 0.0).value() == doctest::Approx(0.5274878529639829).epsilon(1e-10));

  const auto low = upper_bound_flip_numeric(0.02, 0.1);
  CHECK(low.regime == FlipRegime::ConvexRegion);
  CHECK(low.p_bar_star == doctest::Approx(0.02).epsilon(1e-6));
  const auto lin = upper_bound_flip_numeric(0.15, 0.1);
  CHECK(lin.regime == FlipRegime::LinearRegion);
  CHECK(lin.p_bar_star < 0.15);
  CHECK(lin.alpha == doctest::Approx(1.0 - 4.0 * (0.15 - lin.p_bar_star)));
  const auto zero = upper_bound_flip_numeric(0.3, 0.1);
  CHECK(zero.regime == FlipRegime::Zero);
  CHECK(zero.value == 0.0);
}

TEST_CASE("numeric minimization agrees with the closed form") {
  for (double q : {0.0, 0.05, 0.2, 0.45}) {
    for (double p = 0.0; p < 0.25; p += 0.0123) {
      const auto b = upper_bound_flip_numeric(p, q);
      CHECK(b.converged);
      CHECK(std::abs(b.value - upper_bound_flip_closed(p, q).value()) < 1e-7);
      CHECK(b.value == doctest::Approx(flip_objective(p, b.p_bar_star, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("p0 against high-precision values") {
  for (const auto& ref : kP0) {
    const auto sol = p0_solve(ref.q);
    CHECK(sol.p0 == doctest::Approx(ref.p0).epsilon(1e-10));
    CHECK(std::abs(sol.residual) < 1e-12);
    CHECK(sol.p0 > 0.0);
    CHECK(sol.p0 < 0.25);
  }
  const double p0 = p0_solve(0.0).p0;
  CHECK(std::abs(p0 * std::pow(1 - p0, 3) - 1.0 / 16.0) < 1e-12);
  CHECK_THROWS_AS(p0_solve(0.5), DomainError);
  CHECK_THROWS_AS(p0_solve(-0.1), DomainError);
}

TEST_CASE("p0 decreases with q") {
  double prev = 1.0;
  for (double q = 0.0; q < 0.45; q += 0.05) {
    const double p0 = p0_solve(q).p0;
    CHECK(p0 < prev);
    prev = p0;
  }
}

}  // TEST_SUITE

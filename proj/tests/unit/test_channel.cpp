#include <doctest.h>

#include <cmath>
#include <vector>

#include "advchan/channel.hpp"
#include "advchan/error.hpp"

using namespace advchan;

namespace {

// Records what it was shown and acts on a fixed schedule.
class Spy final : public Adversary {
public:
  explicit Spy(std::vector<bool> schedule) : schedule_(std::move(schedule)) {}

  bool act(const SideInfo& info, Rng&) override {
    steps.push_back(info.step);
    xs.emplace_back(info.x_prefix.begin(), info.x_prefix.end());
    ys.emplace_back(info.y_prefix.begin(), info.y_prefix.end());
    return schedule_[info.step - 1];
  }
  std::string_view name() const override { return "spy"; }

  std::vector<std::size_t> steps;
  std::vector<Bits> xs;
  std::vector<std::vector<Symbol>> ys;

private:
  std::vector<bool> schedule_;
};

Bits random_bits(std::size_t n, Rng& rng) {
  Bits b(n);
  for (auto& v : b) v = static_cast<Bit>(rng.next() >> 63);
  return b;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("budget is floor(pn) without round-off loss") {
  CHECK(adversary_budget(0.3, 10) == 3);
  CHECK(adversary_budget(0.1, 30) == 3);
  CHECK(adversary_budget(0.25, 16) == 4);
  CHECK(adversary_budget(0.0, 100) == 0);
  CHECK(adversary_budget(0.099, 10) == 0);
  CHECK_THROWS_AS(adversary_budget(1.2, 10), DomainError);
}

TEST_CASE("spy sees exactly x_1..x_k and y_1..y_{k-1}") {
  for (auto kind : {ChannelKind::Erasure, ChannelKind::Flip}) {
    Rng gen(7);
    const std::size_t n = 40;
    const Bits x = random_bits(n, gen);
    std::vector<bool> schedule(n);
    for (std::size_t i = 0; i < n; ++i) schedule[i] = (i % 3) == 0;
    Spy spy(schedule);
    CodewordEncoder enc(x);
    auto streams = TrialStreams::from_seed(11);
    const auto t = run_transmission(enc, spy, {kind, 0.2}, 0.25, n, streams);
    REQUIRE(spy.steps.size() == n);
    for (std::size_t k = 1; k <= n; ++k) {
      CHECK(spy.steps[k - 1] == k);
      REQUIRE(spy.xs[k - 1].size() == k);
      REQUIRE(spy.ys[k - 1].size() == k - 1);
      CHECK(std::equal(spy.xs[k - 1].begin(), spy.xs[k - 1].end(), t.x.begin()));
      CHECK(std::equal(spy.ys[k - 1].begin(), spy.ys[k - 1].end(), t.y.begin()));
    }
  }
}

TEST_CASE("future inputs never influence earlier observations") {
  Rng gen(3);
  const std::size_t n = 32;
  const Bits x1 = random_bits(n, gen);
  Bits x2 = x1;
  for (std::size_t i = 20; i < n; ++i) x2[i] ^= 1;
  std::vector<bool> schedule(n, false);
  schedule[5] = schedule[17] = true;
  Spy s1(schedule), s2(schedule);
  CodewordEncoder e1(x1), e2(x2);
  auto st1 = TrialStreams::from_seed(5);
  auto st2 = TrialStreams::from_seed(5);
  run_transmission(e1, s1, {ChannelKind::Erasure, 0.3}, 0.2, n, st1);
  run_transmission(e2, s2, {ChannelKind::Erasure, 0.3}, 0.2, n, st2);
  for (std::size_t k = 1; k <= 20; ++k) {
    CHECK(s1.xs[k - 1] == s2.xs[k - 1]);
    CHECK(s1.ys[k - 1] == s2.ys[k - 1]);
  }
}

TEST_CASE("budget clamp: greedy adversary") {
  const std::size_t n = 16;
  Rng gen(1);
  CodewordEncoder enc(random_bits(n, gen));
  GreedyAdversary greedy;
  auto streams = TrialStreams::from_seed(2);
  const auto t = run_transmission(enc, greedy, {ChannelKind::Erasure, 0.0}, 0.25, n, streams);
  CHECK(t.budget == 4);
  CHECK(t.weight() == 4);
  CHECK(t.violation_attempts == 12);
  CHECK(t.violation());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(t.a[i] == (i < 4 ? 1 : 0));
    CHECK(is_erasure(t.y[i]) == (i < 4));
  }
}

TEST_CASE("erasure channel output law") {
  Rng gen(9);
  const std::size_t n = 200;
  const Bits x = random_bits(n, gen);
  std::vector<bool> schedule(n, false);
  for (std::size_t i = 0; i < n; i += 7) schedule[i] = true;
  Spy spy(schedule);
  CodewordEncoder enc(x);
  auto streams = TrialStreams::from_seed(4);
  const auto t = run_transmission(enc, spy, {ChannelKind::Erasure, 0.1}, 1.0, n, streams);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.a[i]) CHECK(is_erasure(t.y[i]));
    if (!is_erasure(t.y[i])) CHECK(to_bit(t.y[i]) == x[i]);
  }
}

TEST_CASE("flip channel: y = x xor a when q = 0") {
  Rng gen(10);
  const std::size_t n = 64;
  const Bits x = random_bits(n, gen);
  std::vector<bool> schedule(n, false);
  schedule[3] = schedule[9] = schedule[40] = true;
  Spy spy(schedule);
  CodewordEncoder enc(x);
  auto streams = TrialStreams::from_seed(4);
  const auto t = run_transmission(enc, spy, {ChannelKind::Flip, 0.0}, 0.1, n, streams);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(to_bit(t.y[i]) == (x[i] ^ t.a[i]));
    CHECK(!is_erasure(t.y[i]));
  }
  CHECK(t.weight() == 3);
}

TEST_CASE("BSC and BEC empirical rates") {
  Rng rng(123);
  const int trials = 100000;
  int flips = 0, erasures = 0;
  for (int i = 0; i < trials; ++i) {
    flips += bsc_step(0, 0, 0.2, rng);
    erasures += is_erasure(bec_step(1, false, 0.3, rng));
  }
  CHECK(std::abs(static_cast<double>(flips) / trials - 0.2) < 0.01);
  CHECK(std::abs(static_cast<double>(erasures) / trials - 0.3) < 0.01);
}

TEST_CASE("channel parameter validation") {
  const ChannelParams full_erasure{ChannelKind::Erasure, 1.0};
  const ChannelParams flip_too_noisy{ChannelKind::Flip, 0.6};
  const ChannelParams negative{ChannelKind::Erasure, -0.1};
  CHECK_NOTHROW(full_erasure.validate());
  CHECK_THROWS_AS(flip_too_noisy.validate(), DomainError);
  CHECK_THROWS_AS(negative.validate(), DomainError);
}

TEST_CASE("encoder running dry is a configuration error") {
  CodewordEncoder enc(Bits{0, 1, 0});
  PassiveAdversary passive;
  auto streams = TrialStreams::from_seed(1);
  CHECK_THROWS_AS(run_transmission(enc, passive, {ChannelKind::Erasure, 0.0}, 0.0, 5, streams),
                  ConfigError);
}

TEST_CASE("seed derivation is deterministic and counter-keyed") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  auto a = TrialStreams::from_seed(42);
  auto b = TrialStreams::from_seed(42);
  CHECK(a.channel.next() == b.channel.next());
  CHECK(a.channel.next() != a.adversary.next());
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.below(7);
    CHECK(v < 7);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

}  // TEST_SUITE

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "advchan/channel.hpp"
#include "advchan/codes.hpp"

namespace advchan::adversary {

// Erases (or flips) each symbol independently with probability p_target.
// Does not track the budget; the transmission loop clamps it.
class IidStrategy final : public Adversary {
public:
  explicit IidStrategy(double p_target);
  bool act(const SideInfo& info, Rng& rng) override;
  std::string_view name() const override { return "iid"; }

private:
  double p_target_;
};

// One (message, key sequence) codeword with its posterior weight.
struct WeightedCodeword {
  codes::MessageId message = 0;
  std::uint64_t key_index = 0;
  double weight = 0.0;
};

// Codewords of `code` that agree with y1 at every unerased index of y1,
// weighted by the uniform prior over (message, key sequence). Throws
// InvariantError when the set is empty.
std::vector<WeightedCodeword> consistent_set_erasure(std::span<const Symbol> y1,
                                                     const codes::ChunkedCode& code);

// Posterior over the whole codebook given bit observations y1 through a
// binary symmetric channel with the given crossover.
std::vector<WeightedCodeword> consistent_set_flip(std::span<const Symbol> y1,
                                                  const codes::ChunkedCode& code,
                                                  double crossover);

// Draws one entry proportionally to its weight.
const WeightedCodeword& sample_weighted(std::span<const WeightedCodeword> set, Rng& rng);

struct AttackPlan {
  enum class Phase { WaitOrBabble, Push };

  Phase phase = Phase::WaitOrBabble;
  std::size_t ell = 0;
  // Set on the phase switch.
  Bits x_prime;
  codes::MessageId u_prime = 0;
  std::uint64_t key_index_prime = 0;
  std::size_t candidates = 0;
  // Actions accepted in each phase, as counted by the strategy itself.
  std::size_t phase1_actions = 0;
  std::size_t push_actions = 0;
  // Disagreements between x and x' seen during the push so far.
  std::size_t disagreements = 0;
  // Budget ran out with disagreement positions left untouched.
  bool exhausted = false;

  bool operator==(const AttackPlan&) const = default;
};

// Shared code for the two snoop-then-push attacks.
class SnoopPushStrategy : public Adversary {
public:
  const AttackPlan& plan() const noexcept { return plan_; }

protected:
  SnoopPushStrategy(std::shared_ptr<const codes::ChunkedCode> code, double p);

  std::shared_ptr<const codes::ChunkedCode> code_;
  std::size_t budget_;
  std::size_t used_ = 0;
  AttackPlan plan_;
};

// Wait and snoop for ell = round(n (R - eps/2) / (1 - q)) uses without
// erasing, draw x' from the codewords consistent with y_1..y_ell, then
// erase every later position where x and x' disagree while budget lasts.
class WaitSnoopPushErasure final : public SnoopPushStrategy {
public:
  WaitSnoopPushErasure(std::shared_ptr<const codes::ChunkedCode> code, double p, double q,
                       double epsilon);
  bool act(const SideInfo& info, Rng& rng) override;
  std::string_view name() const override { return "wait_snoop_push"; }
};

// Babble with i.i.d. Ber(p_bar n / ell) flips for ell = round((alpha + eps/2) n)
// uses, alpha = 1 - 4(p - p_bar); draw x' from the posterior given y_1..y_ell;
// then flip each later disagreement position with probability 1/2.
class BabbleSnoopPushFlip final : public SnoopPushStrategy {
public:
  BabbleSnoopPushFlip(std::shared_ptr<const codes::ChunkedCode> code, double p, double p_bar,
                      double q, double epsilon);
  bool act(const SideInfo& info, Rng& rng) override;
  std::string_view name() const override { return "babble_snoop_push"; }

  double babble_probability() const noexcept { return babble_prob_; }
  // Crossover of the cascade seen during babbling: babble prob * q.
  double observation_crossover() const noexcept { return crossover_; }
  static constexpr double kPushFlipProbability = 0.5;

private:
  double babble_prob_;
  double crossover_;
};

std::size_t wait_phase_length(std::size_t n, double rate, double q, double epsilon);
std::size_t babble_phase_length(std::size_t n, double p, double p_bar, double epsilon);

// Exact output law {P(y=0), P(y=1)} at a push position holding bit x when
// the adversary flips with probability flip_prob and the channel is BSC(q).
std::array<double, 2> flip_push_output_law(Bit x, double flip_prob, double q);

}  // namespace advchan::adversary

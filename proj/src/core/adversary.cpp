#include "advchan/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "advchan/capacity.hpp"
#include "advchan/error.hpp"

namespace advchan::adversary {

namespace {

std::size_t clamp_ell(double raw, std::size_t n) {
  if (n < 2) {
    throw ConfigError("snoop-then-push attacks need n >= 2");
  }
  double rounded = std::isfinite(raw) ? std::round(raw) : static_cast<double>(n);
  rounded = std::clamp(rounded, 1.0, static_cast<double>(n - 1));
  return static_cast<std::size_t>(rounded);
}

void normalize(std::vector<WeightedCodeword>& set) {
  double total = 0.0;
  for (const auto& w : set) {
    total += w.weight;
  }
  if (!(total > 0.0)) {
    throw InvariantError("consistent set carries no weight");
  }
  for (auto& w : set) {
    w.weight /= total;
  }
}

}  // namespace

IidStrategy::IidStrategy(double p_target) : p_target_(p_target) {
  if (!(p_target >= 0.0 && p_target <= 1.0)) {
    throw DomainError("p_target must lie in [0, 1]");
  }
}

bool IidStrategy::act(const SideInfo&, Rng& rng) { return rng.bernoulli(p_target_); }

std::vector<WeightedCodeword> consistent_set_erasure(std::span<const Symbol> y1,
                                                     const codes::ChunkedCode& code) {
  if (y1.size() > code.n()) {
    throw DomainError("observed prefix longer than the code");
  }
  std::vector<WeightedCodeword> set;
  const std::uint64_t sequences = code.num_key_sequences();
  for (codes::MessageId u = 0; u < code.num_messages(); ++u) {
    for (std::uint64_t idx = 0; idx < sequences; ++idx) {
      const auto x = codes::encode(code, u, code.key_sequence(idx));
      bool agrees = true;
      for (std::size_t i = 0; i < y1.size() && agrees; ++i) {
        agrees = is_erasure(y1[i]) || to_bit(y1[i]) == x[i];
      }
      if (agrees) {
        set.push_back({u, idx, 1.0});
      }
    }
  }
  if (set.empty()) {
    throw InvariantError("no codeword agrees with the observed prefix");
  }
  normalize(set);
  return set;
}

std::vector<WeightedCodeword> consistent_set_flip(std::span<const Symbol> y1,
                                                  const codes::ChunkedCode& code,
                                                  double crossover) {
  if (y1.size() > code.n()) {
    throw DomainError("observed prefix longer than the code");
  }
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw DomainError("crossover must lie in [0, 1]");
  }
  const double log_flip = std::log(crossover);
  const double log_keep = std::log1p(-crossover);
  std::vector<WeightedCodeword> set;
  std::vector<double> log_weights;
  const std::uint64_t sequences = code.num_key_sequences();
  for (codes::MessageId u = 0; u < code.num_messages(); ++u) {
    for (std::uint64_t idx = 0; idx < sequences; ++idx) {
      const auto x = codes::encode(code, u, code.key_sequence(idx));
      std::size_t d = 0;
      for (std::size_t i = 0; i < y1.size(); ++i) {
        if (is_erasure(y1[i])) {
          throw DomainError("flip-channel observations cannot contain erasures");
        }
        d += to_bit(y1[i]) != x[i];
      }
      const auto dd = static_cast<double>(d);
      const auto agree = static_cast<double>(y1.size() - d);
      // 0 * log(0) counts as 0.
      const double lw = (d ? dd * log_flip : 0.0) + (agree > 0 ? agree * log_keep : 0.0);
      set.push_back({u, idx, 0.0});
      log_weights.push_back(lw);
    }
  }
  const double max_lw = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(max_lw)) {
    throw InvariantError("no codeword has positive posterior weight");
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    set[i].weight = std::exp(log_weights[i] - max_lw);
  }
  normalize(set);
  return set;
}

const WeightedCodeword& sample_weighted(std::span<const WeightedCodeword> set, Rng& rng) {
  if (set.empty()) {
    throw InvariantError("cannot sample from an empty set");
  }
  const double target = rng.uniform();
  double acc = 0.0;
  for (const auto& w : set) {
    acc += w.weight;
    if (target < acc) {
      return w;
    }
  }
  // Round-off left target above the cumulative sum; take the last entry
  // with positive weight.
  for (auto it = set.rbegin(); it != set.rend(); ++it) {
    if (it->weight > 0.0) {
      return *it;
    }
  }
  return set.back();
}

std::size_t wait_phase_length(std::size_t n, double rate, double q, double epsilon) {
  const double raw = q >= 1.0 ? std::numeric_limits<double>::infinity()
                              : static_cast<double>(n) * (rate - epsilon / 2.0) / (1.0 - q);
  return clamp_ell(raw, n);
}

std::size_t babble_phase_length(std::size_t n, double p, double p_bar, double epsilon) {
  const double alpha = 1.0 - 4.0 * (p - p_bar);
  return clamp_ell((alpha + epsilon / 2.0) * static_cast<double>(n), n);
}

std::array<double, 2> flip_push_output_law(Bit x, double flip_prob, double q) {
  std::array<double, 2> law{0.0, 0.0};
  for (Bit a = 0; a <= 1; ++a) {
    const double pa = a ? flip_prob : 1.0 - flip_prob;
    for (Bit z = 0; z <= 1; ++z) {
      const double pz = z ? q : 1.0 - q;
      law[(x ^ a ^ z) & 1U] += pa * pz;
    }
  }
  return law;
}

SnoopPushStrategy::SnoopPushStrategy(std::shared_ptr<const codes::ChunkedCode> code, double p)
    : code_(std::move(code)), budget_(0) {
  if (!code_) {
    throw ConfigError("snoop-then-push attacks need the code description");
  }
  budget_ = adversary_budget(p, code_->n());
}

WaitSnoopPushErasure::WaitSnoopPushErasure(std::shared_ptr<const codes::ChunkedCode> code,
                                           double p, double q, double epsilon)
    : SnoopPushStrategy(std::move(code), p) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("q must lie in [0, 1]");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be positive");
  }
  plan_.ell = wait_phase_length(code_->n(), code_->rate(), q, epsilon);
}

bool WaitSnoopPushErasure::act(const SideInfo& info, Rng& rng) {
  const std::size_t k = info.step;
  if (k <= plan_.ell) {
    return false;
  }
  if (plan_.phase == AttackPlan::Phase::WaitOrBabble) {
    const auto set = consistent_set_erasure(info.y_prefix.first(plan_.ell), *code_);
    const auto& pick = sample_weighted(set, rng);
    plan_.phase = AttackPlan::Phase::Push;
    plan_.candidates = set.size();
    plan_.u_prime = pick.message;
    plan_.key_index_prime = pick.key_index;
    plan_.x_prime = codes::encode(*code_, pick.message, code_->key_sequence(pick.key_index));
  }
  if (info.x_prefix[k - 1] == plan_.x_prime[k - 1]) {
    return false;
  }
  ++plan_.disagreements;
  if (used_ >= budget_) {
    plan_.exhausted = true;
    return false;
  }
  ++used_;
  ++plan_.push_actions;
  return true;
}

BabbleSnoopPushFlip::BabbleSnoopPushFlip(std::shared_ptr<const codes::ChunkedCode> code,
                                         double p, double p_bar, double q, double epsilon)
    : SnoopPushStrategy(std::move(code), p) {
  if (!(p_bar >= 0.0 && p_bar <= p && p < 0.25)) {
    throw DomainError("babble attack needs 0 <= p_bar <= p < 1/4");
  }
  if (!(q >= 0.0 && q <= 0.5)) {
    throw DomainError("q must lie in [0, 1/2]");
  }
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be positive");
  }
  const std::size_t n = code_->n();
  plan_.ell = babble_phase_length(n, p, p_bar, epsilon);
  babble_prob_ = std::min(1.0, p_bar * static_cast<double>(n) / static_cast<double>(plan_.ell));
  crossover_ = capacity::star(babble_prob_, q);
}

bool BabbleSnoopPushFlip::act(const SideInfo& info, Rng& rng) {
  const std::size_t k = info.step;
  if (k <= plan_.ell) {
    const bool flip = rng.bernoulli(babble_prob_);
    if (flip && used_ < budget_) {
      ++used_;
      ++plan_.phase1_actions;
      return true;
    }
    return false;
  }
  if (plan_.phase == AttackPlan::Phase::WaitOrBabble) {
    const auto set = consistent_set_flip(info.y_prefix.first(plan_.ell), *code_, crossover_);
    const auto& pick = sample_weighted(set, rng);
    plan_.phase = AttackPlan::Phase::Push;
    plan_.candidates = set.size();
    plan_.u_prime = pick.message;
    plan_.key_index_prime = pick.key_index;
    plan_.x_prime = codes::encode(*code_, pick.message, code_->key_sequence(pick.key_index));
  }
  if (info.x_prefix[k - 1] == plan_.x_prime[k - 1]) {
    return false;
  }
  ++plan_.disagreements;
  if (!rng.bernoulli(kPushFlipProbability)) {
    return false;
  }
  if (used_ >= budget_) {
    plan_.exhausted = true;
    return false;
  }
  ++used_;
  ++plan_.push_actions;
  return true;
}

}  // namespace advchan::adversary

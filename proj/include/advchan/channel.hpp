#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "advchan/rng.hpp"

namespace advchan {

namespace codes {
class ChunkedCode;
}

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;

// Channel output symbol. Erasure never appears as a channel input.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Erasure = 2 };

inline Symbol to_symbol(Bit b) noexcept { return b ? Symbol::One : Symbol::Zero; }
inline bool is_erasure(Symbol s) noexcept { return s == Symbol::Erasure; }
inline Bit to_bit(Symbol s) noexcept { return s == Symbol::One ? 1 : 0; }

enum class ChannelKind { Erasure, Flip };

const char* to_string(ChannelKind kind) noexcept;

struct ChannelParams {
  ChannelKind kind = ChannelKind::Erasure;
  double q = 0.0;

  // q in [0, 1] for erasure, [0, 1/2] for flip; throws DomainError.
  void validate() const;
};

// floor(p n), robust to p*n landing an ulp below an integer.
std::size_t adversary_budget(double p, std::size_t n);

struct Transcript {
  std::size_t n = 0;
  Bits x;
  // Accepted adversary actions: erase flags or flip bits.
  Bits a;
  std::vector<Symbol> y;
  std::size_t adversary_actions_used = 0;
  std::size_t budget = 0;
  // Requests beyond the budget, coerced to no-action.
  std::size_t violation_attempts = 0;

  bool violation() const noexcept { return violation_attempts > 0; }
  std::size_t weight() const noexcept;

  bool operator==(const Transcript&) const = default;
};

// What the adversary may see at step k (1-based): x_1..x_k, y_1..y_{k-1} and
// the static code description.
struct SideInfo {
  std::size_t step = 0;
  std::span<const Bit> x_prefix;
  std::span<const Symbol> y_prefix;
  const codes::ChunkedCode* code = nullptr;
  std::size_t budget_remaining = 0;
};

class Adversary {
public:
  virtual ~Adversary() = default;

  // Returns true to erase (erasure channel) or flip (flip channel) x_k.
  virtual bool act(const SideInfo& info, Rng& rng) = 0;
  virtual std::string_view name() const = 0;
};

class PassiveAdversary final : public Adversary {
public:
  bool act(const SideInfo&, Rng&) override { return false; }
  std::string_view name() const override { return "passive"; }
};

// Requests an action at every step; the budget clamp decides what lands.
class GreedyAdversary final : public Adversary {
public:
  bool act(const SideInfo&, Rng&) override { return true; }
  std::string_view name() const override { return "greedy"; }
};

// Transmitter side of the loop. feedback holds y_1..y_{k-1} when transmitter
// feedback is enabled and is empty otherwise. Returns nullopt once the
// encoder has nothing left to send.
class Encoder {
public:
  virtual ~Encoder() = default;
  virtual std::optional<Bit> next(std::span<const Symbol> feedback, Rng& rng) = 0;
};

class CodewordEncoder final : public Encoder {
public:
  explicit CodewordEncoder(Bits codeword) : codeword_(std::move(codeword)) {}
  std::optional<Bit> next(std::span<const Symbol> feedback, Rng& rng) override;

private:
  Bits codeword_;
  std::size_t pos_ = 0;
};

Symbol bec_step(Bit x, bool erase, double q, Rng& rng);
Bit bsc_step(Bit x, Bit a, double q, Rng& rng);

enum class BudgetPolicy {
  // At most floor(p n) accepted actions over the whole block.
  Block,
  // At step k at most floor(p k) accepted actions so far. Used by
  // variable-length schemes whose final length is not known upfront.
  Running,
};

struct TransmissionOptions {
  bool transmitter_feedback = false;
  // Encoder exhaustion ends the transmission instead of raising an error.
  bool allow_early_stop = false;
  BudgetPolicy budget_policy = BudgetPolicy::Block;
};

// Runs up to n channel uses. At step k the adversary is shown exactly
// (x_1..x_k, y_1..y_{k-1}); then its action is applied and the stochastic
// channel produces y_k. Throws ConfigError when the encoder runs dry before
// n steps unless allow_early_stop is set.
Transcript run_transmission(Encoder& encoder, Adversary& adversary, const ChannelParams& params,
                            double p, std::size_t n, TrialStreams& streams,
                            const TransmissionOptions& options = {},
                            const codes::ChunkedCode* code = nullptr);

}  // namespace advchan

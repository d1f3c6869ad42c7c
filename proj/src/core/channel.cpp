#include "advchan/channel.hpp"

#include <cmath>
#include <string>

#include "advchan/error.hpp"

namespace advchan {

const char* to_string(ChannelKind kind) noexcept {
  return kind == ChannelKind::Erasure ? "erasure" : "flip";
}

void ChannelParams::validate() const {
  const double max_q = kind == ChannelKind::Erasure ? 1.0 : 0.5;
  if (!(q >= 0.0 && q <= max_q)) {
    throw DomainError(std::string(to_string(kind)) + " channel q must lie in [0, " +
                      (kind == ChannelKind::Erasure ? "1" : "1/2") + "], got " +
                      std::to_string(q));
  }
}

std::size_t adversary_budget(double p, std::size_t n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("p must lie in [0, 1], got " + std::to_string(p));
  }
  return static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 1e-9));
}

std::size_t Transcript::weight() const noexcept {
  std::size_t w = 0;
  for (Bit b : a) {
    w += b;
  }
  return w;
}

std::optional<Bit> CodewordEncoder::next(std::span<const Symbol>, Rng&) {
  if (pos_ >= codeword_.size()) {
    return std::nullopt;
  }
  return codeword_[pos_++];
}

Symbol bec_step(Bit x, bool erase, double q, Rng& rng) {
  // The draw is taken even when the adversary erases, so channel noise does
  // not depend on adversary decisions.
  const bool channel_erases = rng.bernoulli(q);
  if (erase || channel_erases) {
    return Symbol::Erasure;
  }
  return to_symbol(x);
}

Bit bsc_step(Bit x, Bit a, double q, Rng& rng) {
  const Bit noise = rng.bernoulli(q) ? 1 : 0;
  return static_cast<Bit>((x ^ a ^ noise) & 1U);
}

Transcript run_transmission(Encoder& encoder, Adversary& adversary, const ChannelParams& params,
                            double p, std::size_t n, TrialStreams& streams,
                            const TransmissionOptions& options, const codes::ChunkedCode* code) {
  params.validate();
  Transcript t;
  t.n = n;
  t.budget = adversary_budget(p, n);
  t.x.reserve(n);
  t.a.reserve(n);
  t.y.reserve(n);

  for (std::size_t k = 1; k <= n; ++k) {
    const std::span<const Symbol> feedback =
        options.transmitter_feedback ? std::span<const Symbol>(t.y) : std::span<const Symbol>();
    const std::optional<Bit> bit = encoder.next(feedback, streams.encoder);
    if (!bit) {
      if (options.allow_early_stop) {
        break;
      }
      throw ConfigError("encoder exhausted after " + std::to_string(k - 1) + " of " +
                        std::to_string(n) + " channel uses");
    }
    if (*bit > 1) {
      throw ConfigError("encoder produced a non-binary input symbol");
    }
    t.x.push_back(*bit);

    const std::size_t allowed = options.budget_policy == BudgetPolicy::Block
                                    ? t.budget
                                    : adversary_budget(p, k);
    SideInfo info;
    info.step = k;
    info.x_prefix = std::span<const Bit>(t.x);
    info.y_prefix = std::span<const Symbol>(t.y);
    info.code = code;
    info.budget_remaining = allowed > t.adversary_actions_used ? allowed - t.adversary_actions_used : 0;

    bool action = adversary.act(info, streams.adversary);
    if (action && t.adversary_actions_used >= allowed) {
      ++t.violation_attempts;
      action = false;
    }
    if (action) {
      ++t.adversary_actions_used;
    }
    t.a.push_back(action ? 1 : 0);

    if (params.kind == ChannelKind::Erasure) {
      t.y.push_back(bec_step(*bit, action, params.q, streams.channel));
    } else {
      t.y.push_back(to_symbol(bsc_step(*bit, action ? 1 : 0, params.q, streams.channel)));
    }
  }
  t.n = t.x.size();
  if (options.budget_policy == BudgetPolicy::Running) {
    t.budget = adversary_budget(p, t.n);
  }
  return t;
}

}  // namespace advchan

#include <cmath>
#include <string>

#include "advchan/codes.hpp"
#include "advchan/error.hpp"

namespace advchan::codes {

namespace {

// Sends the current bit until feedback shows it arrived unerased.
class ArqEncoder final : public Encoder {
public:
  explicit ArqEncoder(std::span<const Bit> message) : message_(message) {}

  std::optional<Bit> next(std::span<const Symbol> feedback, Rng&) override {
    if (!feedback.empty() && !is_erasure(feedback.back())) {
      ++delivered_;
    }
    if (delivered_ >= message_.size()) {
      return std::nullopt;
    }
    return message_[delivered_];
  }

  std::size_t delivered() const noexcept { return delivered_; }

private:
  std::span<const Bit> message_;
  std::size_t delivered_ = 0;
};

}  // namespace

std::size_t default_arq_max_n(std::size_t k, double p, double q) {
  const double rate = (1.0 - p) * (1.0 - q);
  if (!(rate > 0.0)) {
    throw DomainError("ARQ max_n needs (1-p)(1-q) > 0; pass it explicitly");
  }
  return static_cast<std::size_t>(std::ceil(4.0 * static_cast<double>(k) / rate));
}

ArqResult arq_transmit(std::span<const Bit> message, double p, double q, std::size_t max_n,
                       Adversary& adversary, TrialStreams& streams) {
  ArqEncoder encoder(message);
  TransmissionOptions options;
  options.transmitter_feedback = true;
  options.allow_early_stop = true;
  options.budget_policy = BudgetPolicy::Running;

  ArqResult r;
  r.transcript = run_transmission(encoder, adversary, ChannelParams{ChannelKind::Erasure, q}, p,
                                  max_n, streams, options);
  const auto& y = r.transcript.y;
  r.channel_uses = y.size();
  for (Symbol s : y) {
    if (is_erasure(s)) {
      ++r.erased_receptions;
    }
  }
  // The encoder only learns about the final symbol on its next call.
  r.delivered = r.channel_uses - r.erased_receptions;
  r.truncated = r.delivered < message.size();
  if (r.delivered > message.size()) {
    throw InvariantError("ARQ delivered more bits than the message holds");
  }
  return r;
}

}  // namespace advchan::codes

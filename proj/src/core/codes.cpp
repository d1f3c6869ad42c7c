#include "advchan/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "advchan/error.hpp"

namespace advchan::codes {

namespace {

std::size_t chunks_from_theta(std::size_t n, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ConfigError("theta must lie in (0, 1], got " + std::to_string(theta));
  }
  const double inv = 1.0 / theta;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9) {
    throw ConfigError("1/theta must be an integer, got theta = " + std::to_string(theta));
  }
  const auto chunks = static_cast<std::size_t>(rounded);
  if (n % chunks != 0) {
    throw ConfigError("n * theta must be an integer (n = " + std::to_string(n) +
                      ", theta = " + std::to_string(theta) + ")");
  }
  return chunks;
}

}  // namespace

ChunkedCode::ChunkedCode(std::size_t n, std::size_t num_chunks, MessageId num_messages,
                         KeyId num_keys, Bits table)
    : n_(n),
      num_chunks_(num_chunks),
      num_messages_(num_messages),
      num_keys_(num_keys),
      table_(std::move(table)) {
  if (n_ == 0 || num_chunks_ == 0 || n_ % num_chunks_ != 0) {
    throw ConfigError("chunked code needs n > 0 divisible by the chunk count");
  }
  if (num_messages_ < 1 || num_keys_ < 1) {
    throw ConfigError("chunked code needs at least one message and one key");
  }
  const std::size_t expected = num_chunks_ * num_messages_ * num_keys_ * chunk_len();
  if (table_.size() != expected) {
    throw ConfigError("chunk table holds " + std::to_string(table_.size()) + " bits, expected " +
                      std::to_string(expected));
  }
  for (Bit b : table_) {
    if (b > 1) {
      throw ConfigError("chunk table entries must be bits");
    }
  }
}

double ChunkedCode::rate() const noexcept {
  return std::log2(static_cast<double>(num_messages_)) / static_cast<double>(n_);
}

std::uint64_t ChunkedCode::num_key_sequences() const {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < num_chunks_; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / num_keys_) {
      throw ConfigError("key-sequence space overflows 64 bits");
    }
    total *= num_keys_;
  }
  return total;
}

std::span<const Bit> ChunkedCode::chunk(std::size_t index, MessageId u, KeyId key) const {
  if (index >= num_chunks_ || u >= num_messages_ || key >= num_keys_) {
    throw DomainError("chunk lookup out of range");
  }
  const std::size_t len = chunk_len();
  const std::size_t offset = ((index * num_messages_ + u) * num_keys_ + key) * len;
  return std::span<const Bit>(table_).subspan(offset, len);
}

std::vector<KeyId> ChunkedCode::key_sequence(std::uint64_t index) const {
  std::vector<KeyId> keys(num_chunks_);
  for (std::size_t i = num_chunks_; i-- > 0;) {
    keys[i] = static_cast<KeyId>(index % num_keys_);
    index /= num_keys_;
  }
  return keys;
}

std::vector<std::size_t> ChunkedCode::chunk_ends() const {
  std::vector<std::size_t> ends;
  for (std::size_t i = 1; i < num_chunks_; ++i) {
    ends.push_back(i * chunk_len());
  }
  return ends;
}

ChunkedCode build_chunked_code(std::size_t n, double theta, MessageId num_messages,
                               KeyId num_keys, Rng& rng) {
  const std::size_t chunks = chunks_from_theta(n, theta);
  if (num_messages < 2) {
    throw ConfigError("a code needs at least 2 messages");
  }
  if (num_keys < 1) {
    throw ConfigError("a code needs at least 1 key");
  }
  Bits table(chunks * num_messages * num_keys * (n / chunks));
  for (Bit& b : table) {
    b = static_cast<Bit>(rng.next() >> 63);
  }
  return ChunkedCode(n, chunks, num_messages, num_keys, std::move(table));
}

ChunkedCode build_chunked_code_from_rates(std::size_t n, double rate, double theta,
                                          double key_rate, Rng& rng) {
  const double messages = std::round(std::exp2(static_cast<double>(n) * rate));
  const double keys = std::round(std::exp2(static_cast<double>(n) * key_rate));
  if (!(messages >= 2.0) || messages > 4294967295.0) {
    throw ConfigError("2^(nR) must be an integer in [2, 2^32)");
  }
  if (!(keys >= 1.0) || keys > 4294967295.0) {
    throw ConfigError("2^(nS) must be an integer in [1, 2^32)");
  }
  return build_chunked_code(n, theta, static_cast<MessageId>(messages),
                            static_cast<KeyId>(keys), rng);
}

AsymptoticParameters asymptotic_parameters(double epsilon, double q) {
  AsymptoticParameters a;
  a.theta = epsilon / 4.0;
  a.key_rate = a.theta * a.theta * a.theta / 8.0;
  a.delta = (1.0 - q) * a.theta * a.theta / 16.0;
  return a;
}

Bits encode(const ChunkedCode& code, MessageId u, std::span<const KeyId> keys) {
  if (u >= code.num_messages()) {
    throw DomainError("message id " + std::to_string(u) + " out of range");
  }
  if (keys.size() != code.num_chunks()) {
    throw DomainError("encode needs one key per chunk");
  }
  Bits x;
  x.reserve(code.n());
  for (std::size_t i = 0; i < code.num_chunks(); ++i) {
    if (keys[i] >= code.num_keys()) {
      throw DomainError("key id " + std::to_string(keys[i]) + " out of range");
    }
    const auto c = code.chunk(i, u, keys[i]);
    x.insert(x.end(), c.begin(), c.end());
  }
  return x;
}

bool chunk_consistent(const ChunkedCode& code, std::size_t index, MessageId u,
                      std::span<const Symbol> y) {
  const std::size_t len = code.chunk_len();
  const std::size_t offset = index * len;
  for (KeyId key = 0; key < code.num_keys(); ++key) {
    const auto c = code.chunk(index, u, key);
    bool agrees = true;
    for (std::size_t j = 0; j < len && agrees; ++j) {
      const Symbol s = y[offset + j];
      agrees = is_erasure(s) || to_bit(s) == c[j];
    }
    if (agrees) {
      return true;
    }
  }
  return false;
}

bool message_consistent(const ChunkedCode& code, MessageId u, std::size_t first_chunk,
                        std::size_t last_chunk, std::span<const Symbol> y) {
  if (y.size() != code.n()) {
    throw DomainError("received word length does not match code length");
  }
  for (std::size_t i = first_chunk; i < last_chunk; ++i) {
    if (!chunk_consistent(code, i, u, y)) {
      return false;
    }
  }
  return true;
}

DecoderConfig DecoderConfig::for_code(const ChunkedCode& code, double p, double q) {
  DecoderConfig cfg;
  cfg.n = code.n();
  cfg.theta = code.theta();
  cfg.q = q;
  cfg.p = p;
  cfg.rate = code.rate();
  cfg.delta = (1.0 - q) * cfg.theta * cfg.theta / 16.0;
  cfg.chunk_ends = code.chunk_ends();
  return cfg;
}

void DecoderConfig::validate() const {
  if (!(delta > 0.0)) {
    throw ConfigError("decoder delta must be positive");
  }
  for (std::size_t i = 0; i < chunk_ends.size(); ++i) {
    if (chunk_ends[i] >= n || (i > 0 && chunk_ends[i] <= chunk_ends[i - 1])) {
      throw ConfigError("chunk ends must be strictly increasing and below n");
    }
  }
}

bool list_decoding_condition(double erasures, std::size_t t, const DecoderConfig& cfg) {
  const double td = static_cast<double>(t);
  const double estimate = erasures - cfg.q * td;
  return estimate <= td * (1.0 - cfg.q) * (1.0 - cfg.theta) - cfg.rate * static_cast<double>(cfg.n);
}

bool refinement_condition(double erasures, std::size_t t, const DecoderConfig& cfg) {
  const double td = static_cast<double>(t);
  const double nd = static_cast<double>(cfg.n);
  const double estimate = erasures - cfg.q * td;
  return nd * cfg.p * (1.0 - cfg.q) - estimate <=
         (nd - td) * (1.0 - cfg.q) * (1.0 - cfg.theta) / 2.0;
}

std::vector<std::size_t> erasure_counts(std::span<const Symbol> y,
                                        std::span<const std::size_t> ends) {
  std::vector<std::size_t> counts;
  counts.reserve(ends.size());
  std::size_t running = 0;
  std::size_t pos = 0;
  for (std::size_t t : ends) {
    if (t > y.size()) {
      throw DomainError("chunk end beyond received word");
    }
    for (; pos < t; ++pos) {
      running += is_erasure(y[pos]) ? 1 : 0;
    }
    counts.push_back(running);
  }
  return counts;
}

std::optional<std::size_t> choose_decoding_point(std::span<const std::size_t> counts,
                                                 const DecoderConfig& cfg) {
  if (counts.size() != cfg.chunk_ends.size()) {
    throw DomainError("one erasure count per chunk end is required");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::size_t t = cfg.chunk_ends[i];
    const auto lambda = static_cast<double>(counts[i]);
    if (list_decoding_condition(lambda, t, cfg) && refinement_condition(lambda, t, cfg)) {
      return t;
    }
  }
  return std::nullopt;
}

const char* to_string(DecodeResult r) noexcept {
  switch (r) {
    case DecodeResult::Decoded:
      return "decoded";
    case DecodeResult::ListAmbiguous:
      return "list_ambiguous";
    case DecodeResult::NoValidDecodingPoint:
      return "no_valid_decoding_point";
  }
  return "unknown";
}

DecodeOutcome two_phase_decode(std::span<const Symbol> y, const ChunkedCode& code,
                               const DecoderConfig& cfg) {
  if (y.size() != code.n()) {
    throw DomainError("received word length does not match code length");
  }
  DecodeOutcome out;
  const auto counts = erasure_counts(y, cfg.chunk_ends);
  out.t_star = choose_decoding_point(counts, cfg);
  if (!out.t_star) {
    out.result = DecodeResult::NoValidDecodingPoint;
    return out;
  }
  const std::size_t split = *out.t_star / code.chunk_len();

  for (MessageId u = 0; u < code.num_messages(); ++u) {
    if (message_consistent(code, u, 0, split, y)) {
      out.list.push_back(u);
    }
  }
  for (MessageId u : out.list) {
    if (message_consistent(code, u, split, code.num_chunks(), y)) {
      out.refined.push_back(u);
    }
  }
  if (out.refined.size() == 1) {
    out.result = DecodeResult::Decoded;
    out.message = out.refined.front();
  } else {
    out.result = DecodeResult::ListAmbiguous;
  }
  return out;
}

DecodeOutcome min_distance_decode(std::span<const Symbol> y, const ChunkedCode& code) {
  if (y.size() != code.n()) {
    throw DomainError("received word length does not match code length");
  }
  DecodeOutcome out;
  const std::size_t len = code.chunk_len();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (MessageId u = 0; u < code.num_messages(); ++u) {
    // Per-chunk minima add up to the minimum over key sequences.
    std::size_t total = 0;
    for (std::size_t i = 0; i < code.num_chunks(); ++i) {
      std::size_t chunk_best = len + 1;
      for (KeyId key = 0; key < code.num_keys(); ++key) {
        const auto c = code.chunk(i, u, key);
        std::size_t d = 0;
        for (std::size_t j = 0; j < len; ++j) {
          const Symbol s = y[i * len + j];
          d += !is_erasure(s) && to_bit(s) != c[j];
        }
        chunk_best = std::min(chunk_best, d);
      }
      total += chunk_best;
    }
    if (total < best) {
      best = total;
      out.refined.assign(1, u);
    } else if (total == best) {
      out.refined.push_back(u);
    }
  }
  out.list = out.refined;
  if (out.refined.size() == 1) {
    out.result = DecodeResult::Decoded;
    out.message = out.refined.front();
  } else {
    out.result = DecodeResult::ListAmbiguous;
  }
  return out;
}

std::size_t min_right_distance(const ChunkedCode& code, std::size_t t, MessageId u_star,
                               std::span<const KeyId> keys_right, MessageId other) {
  const std::size_t len = code.chunk_len();
  if (t % len != 0 || t >= code.n()) {
    throw DomainError("t must be a chunk end");
  }
  const std::size_t first = t / len;
  if (keys_right.size() != code.num_chunks() - first) {
    throw DomainError("keys_right must cover every chunk after t");
  }
  std::size_t total = 0;
  for (std::size_t i = first; i < code.num_chunks(); ++i) {
    const auto mine = code.chunk(i, u_star, keys_right[i - first]);
    std::size_t chunk_best = len;
    for (KeyId key = 0; key < code.num_keys(); ++key) {
      const auto theirs = code.chunk(i, other, key);
      std::size_t d = 0;
      for (std::size_t j = 0; j < len; ++j) {
        d += mine[j] != theirs[j];
      }
      chunk_best = std::min(chunk_best, d);
    }
    total += chunk_best;
  }
  return total;
}

bool distance_condition_check(const ChunkedCode& code, std::size_t t, MessageId u_star,
                              std::span<const KeyId> keys_right,
                              std::span<const MessageId> list) {
  const double threshold =
      static_cast<double>(code.n() - t) * (0.5 - 3.0 * code.theta() / 8.0);
  for (MessageId other : list) {
    if (other == u_star) {
      continue;
    }
    if (static_cast<double>(min_right_distance(code, t, u_star, keys_right, other)) < threshold) {
      return false;
    }
  }
  return true;
}

}  // namespace advchan::codes

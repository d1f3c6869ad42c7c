#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advchan/channel.hpp"
#include "advchan/rng.hpp"

namespace advchan::codes {

using MessageId = std::uint32_t;
using KeyId = std::uint32_t;

// Stochastic code made of num_chunks independently keyed sub-codes. Chunk i
// maps (message, key) to a bit-string of chunk_len bits; a codeword is the
// concatenation C_1(u, s_1) C_2(u, s_2) ... of the chunks.
class ChunkedCode {
public:
  // table holds num_chunks * num_messages * num_keys * chunk_len bits in
  // [chunk][message][key][bit] order.
  ChunkedCode(std::size_t n, std::size_t num_chunks, MessageId num_messages, KeyId num_keys,
              Bits table);

  std::size_t n() const noexcept { return n_; }
  std::size_t num_chunks() const noexcept { return num_chunks_; }
  std::size_t chunk_len() const noexcept { return n_ / num_chunks_; }
  MessageId num_messages() const noexcept { return num_messages_; }
  KeyId num_keys() const noexcept { return num_keys_; }
  double theta() const noexcept { return 1.0 / static_cast<double>(num_chunks_); }
  // log2(num_messages) / n.
  double rate() const noexcept;
  // num_keys ^ num_chunks; throws ConfigError on overflow.
  std::uint64_t num_key_sequences() const;

  std::span<const Bit> chunk(std::size_t index, MessageId u, KeyId key) const;
  std::vector<KeyId> key_sequence(std::uint64_t index) const;
  // Chunk ends {L, 2L, ..., n - L} with L = chunk_len.
  std::vector<std::size_t> chunk_ends() const;

  const Bits& table() const noexcept { return table_; }

  bool operator==(const ChunkedCode&) const = default;

private:
  std::size_t n_;
  std::size_t num_chunks_;
  MessageId num_messages_;
  KeyId num_keys_;
  Bits table_;
};

// Every chunk entry is an independent uniform bit-string. theta must divide
// 1 and n * theta must be integral.
ChunkedCode build_chunked_code(std::size_t n, double theta, MessageId num_messages,
                               KeyId num_keys, Rng& rng);

// Rate form: num_messages = round(2^(nR)), num_keys = round(2^(nS)).
ChunkedCode build_chunked_code_from_rates(std::size_t n, double rate, double theta,
                                          double key_rate, Rng& rng);

// Parameter choices that make the construction work as n grows. At desk
// scale they give degenerate integers, so builders take explicit shapes.
struct AsymptoticParameters {
  double theta = 0.0;     // epsilon / 4
  double key_rate = 0.0;  // theta^3 / 8
  double delta = 0.0;     // (1 - q) theta^2 / 16
};
AsymptoticParameters asymptotic_parameters(double epsilon, double q);

Bits encode(const ChunkedCode& code, MessageId u, std::span<const KeyId> keys);

// True iff some key for chunk `index` of message u agrees with y on every
// unerased position of that chunk's span.
bool chunk_consistent(const ChunkedCode& code, std::size_t index, MessageId u,
                      std::span<const Symbol> y);

// True iff some key sequence over chunks [first, last) yields a word that
// agrees with y on its unerased positions. y is the full received word.
// Chunks are keyed independently, so the check factorizes per chunk.
bool message_consistent(const ChunkedCode& code, MessageId u, std::size_t first_chunk,
                        std::size_t last_chunk, std::span<const Symbol> y);

struct DecoderConfig {
  std::size_t n = 0;
  double delta = 0.0;
  double theta = 0.0;
  double q = 0.0;
  double p = 0.0;
  double rate = 0.0;
  std::vector<std::size_t> chunk_ends;

  static DecoderConfig for_code(const ChunkedCode& code, double p, double q);
  void validate() const;
};

// lambda - q t <= t (1-q)(1-theta) - R n
bool list_decoding_condition(double erasures, std::size_t t, const DecoderConfig& cfg);
// n p (1-q) - (lambda - q t) <= (n - t)(1-q)(1-theta) / 2
bool refinement_condition(double erasures, std::size_t t, const DecoderConfig& cfg);

// lambda_t for each t in ends.
std::vector<std::size_t> erasure_counts(std::span<const Symbol> y, std::span<const std::size_t> ends);

// Smallest chunk end satisfying both conditions. counts[i] is lambda at
// cfg.chunk_ends[i].
std::optional<std::size_t> choose_decoding_point(std::span<const std::size_t> counts,
                                                 const DecoderConfig& cfg);

enum class DecodeResult { Decoded, ListAmbiguous, NoValidDecodingPoint };

const char* to_string(DecodeResult r) noexcept;

struct DecodeOutcome {
  DecodeResult result = DecodeResult::NoValidDecodingPoint;
  MessageId message = 0;
  std::optional<std::size_t> t_star;
  // Phase-1 list and its refinement.
  std::vector<MessageId> list;
  std::vector<MessageId> refined;

  std::size_t list_size() const noexcept { return refined.size(); }
};

// Picks t* from the erasure profile, list-decodes y_1..y_t* by exhaustive
// consistency, then keeps the listed messages consistent with y_{t*+1}..y_n.
DecodeOutcome two_phase_decode(std::span<const Symbol> y, const ChunkedCode& code,
                               const DecoderConfig& cfg);

// Minimum Hamming distance decoding over every (message, key sequence)
// codeword. Used to score flip-channel trials. Ties between distinct
// messages give ListAmbiguous.
DecodeOutcome min_distance_decode(std::span<const Symbol> y, const ChunkedCode& code);

// Minimum over all key sequences of the distance between the right mega
// sub-codeword of (u_star, keys_right) and that of `other`, w.r.t. chunk end t.
std::size_t min_right_distance(const ChunkedCode& code, std::size_t t, MessageId u_star,
                               std::span<const KeyId> keys_right, MessageId other);

// True iff the right mega sub-codeword for (u_star, keys_right) is at
// distance >= (n - t)(1/2 - 3 theta / 8) from every right mega sub-codeword
// of every other message in `list`.
bool distance_condition_check(const ChunkedCode& code, std::size_t t, MessageId u_star,
                              std::span<const KeyId> keys_right,
                              std::span<const MessageId> list);

// JSON document with the parameters and every chunk entry as a hex string.
std::string to_json(const ChunkedCode& code);
ChunkedCode code_from_json(std::string_view text);

// Hex packing of a bit-string, most significant bit first, zero-padded to a
// whole number of nibbles.
std::string bits_to_hex(std::span<const Bit> bits);
Bits hex_to_bits(std::string_view hex, std::size_t length);

struct ArqResult {
  std::size_t delivered = 0;
  std::size_t channel_uses = 0;
  std::size_t erased_receptions = 0;
  bool truncated = false;
  Transcript transcript;
};

// ceil(4k / ((1-p)(1-q))); throws DomainError when the rate is zero.
std::size_t default_arq_max_n(std::size_t k, double p, double q);

// Closed-loop repetition: each bit is resent until an unerased symbol
// arrives. The adversary budget is enforced as floor(p k) at every step k,
// so the final erasure count never exceeds floor(p * channel_uses).
ArqResult arq_transmit(std::span<const Bit> message, double p, double q, std::size_t max_n,
                       Adversary& adversary, TrialStreams& streams);

}  // namespace advchan::codes

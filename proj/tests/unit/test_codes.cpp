#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "advchan/codes.hpp"
#include "advchan/error.hpp"

using namespace advchan;
using namespace advchan::codes;

namespace {

// Brute-force consistency over every full key sequence.
bool brute_consistent(const ChunkedCode& code, MessageId u, std::size_t first, std::size_t last,
                      std::span<const Symbol> y) {
  const std::size_t len = code.chunk_len();
  for (std::uint64_t idx = 0; idx < code.num_key_sequences(); ++idx) {
    const auto x = encode(code, u, code.key_sequence(idx));
    bool ok = true;
    for (std::size_t i = first * len; i < last * len && ok; ++i) {
      ok = is_erasure(y[i]) || to_bit(y[i]) == x[i];
    }
    if (ok) return true;
  }
  return false;
}

std::vector<Symbol> clean(const Bits& x) {
  std::vector<Symbol> y;
  for (Bit b : x) y.push_back(to_symbol(b));
  return y;
}

}  // namespace

TEST_SUITE("codes") {

TEST_CASE("shape arithmetic") {
  Rng rng(1);
  const auto code = build_chunked_code(16, 0.25, 4, 2, rng);
  CHECK(code.num_chunks() == 4);
  CHECK(code.chunk_len() == 4);
  CHECK(code.table().size() == 4 * 4 * 2 * 4);
  CHECK(code.rate() == doctest::Approx(2.0 / 16.0));
  CHECK(code.num_key_sequences() == 16);
  CHECK(code.chunk_ends() == std::vector<std::size_t>{4, 8, 12});
  CHECK_THROWS_AS(build_chunked_code(16, 0.3, 4, 2, rng), ConfigError);
  CHECK_THROWS_AS(build_chunked_code(18, 0.25, 4, 2, rng), ConfigError);
  CHECK_THROWS_AS(build_chunked_code(16, 0.25, 1, 2, rng), ConfigError);
  CHECK_THROWS_AS(build_chunked_code(16, 0.25, 4, 0, rng), ConfigError);
}

TEST_CASE("rate form and asymptotic parameters") {
  Rng rng(2);
  const auto code = build_chunked_code_from_rates(16, 0.25, 0.25, 1.0 / 16.0, rng);
  CHECK(code.num_messages() == 16);
  CHECK(code.num_keys() == 2);
  const auto a = asymptotic_parameters(0.2, 0.1);
  CHECK(a.theta == doctest::Approx(0.05));
  CHECK(a.key_rate == doctest::Approx(0.05 * 0.05 * 0.05 / 8));
  CHECK(a.delta == doctest::Approx(0.9 * 0.05 * 0.05 / 16));
}

TEST_CASE("identical seeds give identical codes") {
  Rng a(99), b(99), c(100);
  const auto ca = build_chunked_code(32, 0.25, 4, 2, a);
  CHECK(ca == build_chunked_code(32, 0.25, 4, 2, b));
  CHECK_FALSE(ca == build_chunked_code(32, 0.25, 4, 2, c));
}

TEST_CASE("table bits are fair coins") {
  Rng rng(7);
  const int codes_drawn = 400;
  std::vector<int> ones(4 * 4 * 2 * 4, 0);
  for (int i = 0; i < codes_drawn; ++i) {
    const auto code = build_chunked_code(16, 0.25, 4, 2, rng);
    for (std::size_t j = 0; j < ones.size(); ++j) ones[j] += code.table()[j];
  }
  const double sd = std::sqrt(codes_drawn * 0.25);
  int outside = 0;
  for (int c : ones) outside += std::abs(c - codes_drawn / 2.0) > 3 * sd;
  // 128 positions at 3 sigma: expect about 0.35 outliers.
  CHECK(outside <= 3);
}

TEST_CASE("encode is concatenated table lookup") {
  Rng rng(42);
  const auto code = build_chunked_code(16, 0.25, 4, 2, rng);
  const std::vector<KeyId> keys{0, 1, 1, 0};
  const auto x = encode(code, 2, keys);
  CHECK(x == encode(code, 2, keys));
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = code.chunk(i, 2, keys[i]);
    CHECK(std::equal(c.begin(), c.end(), x.begin() + static_cast<long>(i * 4)));
  }
  auto keys2 = keys;
  keys2[2] = 0;
  const auto x2 = encode(code, 2, keys2);
  for (std::size_t i = 0; i < 16; ++i) {
    if (i < 8 || i >= 12) CHECK(x[i] == x2[i]);
  }
  CHECK_THROWS_AS(encode(code, 4, keys), DomainError);
  CHECK_THROWS_AS(encode(code, 0, std::vector<KeyId>{0, 0, 2, 0}), DomainError);
  CHECK_THROWS_AS(encode(code, 0, std::vector<KeyId>{0, 0}), DomainError);
}

TEST_CASE("key sequences enumerate the mixed radix") {
  Rng rng(3);
  const auto code = build_chunked_code(12, 1.0 / 3.0, 2, 3, rng);
  CHECK(code.num_key_sequences() == 27);
  CHECK(code.key_sequence(0) == std::vector<KeyId>{0, 0, 0});
  CHECK(code.key_sequence(1) == std::vector<KeyId>{0, 0, 1});
  CHECK(code.key_sequence(26) == std::vector<KeyId>{2, 2, 2});
}

TEST_CASE("factorized consistency matches brute force") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const auto code = build_chunked_code(12, 0.25, 3, 3, rng);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Symbol> y(12);
      for (auto& s : y) {
        s = rng.bernoulli(0.4) ? Symbol::Erasure : to_symbol(static_cast<Bit>(rng.next() >> 63));
      }
      for (MessageId u = 0; u < 3; ++u) {
        for (std::size_t first = 0; first < 4; ++first) {
          for (std::size_t last = first; last <= 4; ++last) {
            CHECK(message_consistent(code, u, first, last, y) == brute_consistent(code, u, first, last, y));
          }
        }
      }
    }
  }
}

TEST_CASE("decoding point: hand-evaluated tiny config") {
  // n=16, theta=1/4, R=4/16, q=p=0, no erasures.
  // t=4: 0 <= 4*0.75 - 4 = -1 fails. t=8: 0 <= 6 - 4 = 2 and 0 <= 8*0.75/2 = 3 hold.
  Rng rng(1);
  const auto code = build_chunked_code(16, 0.25, 16, 1, rng);
  const auto cfg = DecoderConfig::for_code(code, 0.0, 0.0);
  CHECK(cfg.rate == doctest::Approx(0.25));
  CHECK(choose_decoding_point(std::vector<std::size_t>{0, 0, 0}, cfg) == std::optional<std::size_t>(8));
  // Everything erased: list decoding fails everywhere.
  CHECK_FALSE(choose_decoding_point(std::vector<std::size_t>{4, 8, 12}, cfg).has_value());
  CHECK_THROWS_AS(choose_decoding_point(std::vector<std::size_t>{0, 0}, cfg), DomainError);
}

TEST_CASE("decoding point minimality") {
  Rng rng(5);
  const auto code = build_chunked_code(32, 0.125, 4, 2, rng);
  const auto cfg = DecoderConfig::for_code(code, 0.15, 0.1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> y(32);
    for (auto& s : y) s = rng.bernoulli(0.25) ? Symbol::Erasure : Symbol::Zero;
    const auto counts = erasure_counts(y, cfg.chunk_ends);
    const auto t = choose_decoding_point(counts, cfg);
    for (std::size_t i = 0; i < cfg.chunk_ends.size(); ++i) {
      const std::size_t te = cfg.chunk_ends[i];
      const bool ok = list_decoding_condition(static_cast<double>(counts[i]), te, cfg) &&
                      refinement_condition(static_cast<double>(counts[i]), te, cfg);
      if (t && te < *t) CHECK_FALSE(ok);
      if (t && te == *t) CHECK(ok);
      if (!t) CHECK_FALSE(ok);
    }
  }
}

TEST_CASE("noisy-channel conditions reduce to the adversarial-only ones") {
  // With lambda = la + q (t - la): the first slack scales by (1-q) against
  // la <= t(1-theta) - R n/(1-q); the second is np - la <= (n-t)(1-theta)/2.
  const double n = 64, theta = 0.125, R = 0.1, p = 0.15;
  for (double q : {0.0, 0.05, 0.2}) {
    DecoderConfig cfg;
    cfg.n = 64;
    cfg.theta = theta;
    cfg.q = q;
    cfg.p = p;
    cfg.rate = R;
    cfg.delta = 0.01;
    for (std::size_t t = 8; t < 64; t += 8) {
      for (double la = 0; la <= static_cast<double>(t); la += 0.5) {
        const double lambda = la + q * (static_cast<double>(t) - la);
        const double slack6 = static_cast<double>(t) * (1 - q) * (1 - theta) - R * n - (lambda - q * t);
        const double slack4 = static_cast<double>(t) * (1 - theta) - R * n / (1 - q) - la;
        CHECK(slack6 == doctest::Approx((1 - q) * slack4).epsilon(1e-9).scale(n));
        const double slack7 = (n - t) * (1 - q) * (1 - theta) / 2 - (n * p * (1 - q) - (lambda - q * t));
        const double slack5 = (n - t) * (1 - theta) / 2 - (n * p - la);
        CHECK(slack7 == doctest::Approx((1 - q) * slack5).epsilon(1e-9).scale(n));
        if (std::abs(slack4) > 1e-9) CHECK(list_decoding_condition(lambda, t, cfg) == (slack4 >= 0));
        if (std::abs(slack5) > 1e-9) CHECK(refinement_condition(lambda, t, cfg) == (slack5 >= 0));
      }
    }
  }
}

TEST_CASE("noiseless round trip for every message and key sequence") {
  Rng rng(8);
  const auto code = build_chunked_code(16, 0.25, 4, 2, rng);
  const auto cfg = DecoderConfig::for_code(code, 0.0, 0.0);
  for (MessageId u = 0; u < 4; ++u) {
    for (std::uint64_t idx = 0; idx < code.num_key_sequences(); ++idx) {
      const auto y = clean(encode(code, u, code.key_sequence(idx)));
      const auto out = two_phase_decode(y, code, cfg);
      // Distinct random codewords can collide at this size; when they do
      // the decoder must report ambiguity, never a wrong message.
      if (out.result == DecodeResult::Decoded) {
        CHECK(out.message == u);
      } else {
        CHECK(out.result == DecodeResult::ListAmbiguous);
      }
      CHECK(std::find(out.refined.begin(), out.refined.end(), u) != out.refined.end());
      CHECK(out.t_star == std::optional<std::size_t>(4));
    }
  }
}

TEST_CASE("noiseless round trip on a code with distinct messages") {
  Rng rng(8);
  const auto code = build_chunked_code(32, 0.25, 4, 2, rng);
  const auto cfg = DecoderConfig::for_code(code, 0.0, 0.0);
  for (MessageId u = 0; u < 4; ++u) {
    for (std::uint64_t idx = 0; idx < code.num_key_sequences(); ++idx) {
      const auto out = two_phase_decode(clean(encode(code, u, code.key_sequence(idx))), code, cfg);
      CHECK(out.result == DecodeResult::Decoded);
      CHECK(out.message == u);
      CHECK(out.list_size() == 1);
    }
  }
}

TEST_CASE("fully erased word carries no information") {
  Rng rng(9);
  const auto code = build_chunked_code(16, 0.25, 4, 2, rng);
  const std::vector<Symbol> y(16, Symbol::Erasure);
  const auto out = two_phase_decode(y, code, DecoderConfig::for_code(code, 0.1, 0.1));
  CHECK(out.result != DecodeResult::Decoded);
}

TEST_CASE("list soundness and refinement monotonicity") {
  Rng rng(13);
  const auto code = build_chunked_code(32, 0.25, 8, 2, rng);
  const auto cfg = DecoderConfig::for_code(code, 0.1, 0.1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto u = static_cast<MessageId>(rng.below(8));
    std::vector<KeyId> keys(4);
    for (auto& k : keys) k = static_cast<KeyId>(rng.below(2));
    const auto x = encode(code, u, keys);
    std::vector<Symbol> y;
    for (Bit b : x) y.push_back(rng.bernoulli(0.2) ? Symbol::Erasure : to_symbol(b));
    const auto out = two_phase_decode(y, code, cfg);
    if (!out.t_star) continue;
    CHECK(std::find(out.list.begin(), out.list.end(), u) != out.list.end());
    CHECK(std::find(out.refined.begin(), out.refined.end(), u) != out.refined.end());
    CHECK(out.refined.size() <= out.list.size());
    for (MessageId r : out.refined) CHECK(std::find(out.list.begin(), out.list.end(), r) != out.list.end());
    if (out.result == DecodeResult::Decoded) CHECK(out.list_size() == 1);
  }
}

TEST_CASE("minimum distance decoding") {
  Rng rng(6);
  const auto code = build_chunked_code(32, 0.25, 4, 2, rng);
  for (MessageId u = 0; u < 4; ++u) {
    auto x = encode(code, u, code.key_sequence(5));
    auto y = clean(x);
    const auto out = min_distance_decode(y, code);
    CHECK(out.result == DecodeResult::Decoded);
    CHECK(out.message == u);
  }
}

TEST_CASE("distance condition") {
  Rng rng(17);
  const auto code = build_chunked_code(32, 0.25, 4, 2, rng);
  const std::vector<KeyId> right{0, 1, 0};
  CHECK(distance_condition_check(code, 8, 1, right, std::vector<MessageId>{1}));

  // Messages 0 and 1 share every chunk table entry.
  Bits table = code.table();
  const std::size_t len = code.chunk_len(), M = 4, K = 2;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t j = 0; j < len; ++j) {
        table[((c * M + 1) * K + k) * len + j] = table[((c * M + 0) * K + k) * len + j];
      }
    }
  }
  const ChunkedCode twin(32, 4, 4, 2, table);
  for (std::size_t t : twin.chunk_ends()) {
    const std::vector<KeyId> keys(4 - t / len, 0);
    CHECK_FALSE(distance_condition_check(twin, t, 0, keys, std::vector<MessageId>{0, 1}));
  }
}

TEST_CASE("distance condition pass fraction on random codes") {
  // Exhaustive over (u*, right key sequence) with the whole codebook as the
  // list, averaged over random codes. At n = 32 the asymptotic guarantee does
  // not bind; the property threshold is a majority pass rate.
  Rng rng(23);
  const std::size_t t = 8;
  std::size_t pass = 0, total = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto code = build_chunked_code(32, 0.25, 2, 1, rng);
    const std::vector<MessageId> list{0, 1};
    for (MessageId u = 0; u < 2; ++u) {
      const std::vector<KeyId> keys(3, 0);
      pass += distance_condition_check(code, t, u, keys, list);
      ++total;
    }
  }
  const double fraction = static_cast<double>(pass) / static_cast<double>(total);
  MESSAGE("distance-condition pass fraction: " << fraction);
  CHECK(fraction > 0.5);
}

TEST_CASE("JSON round trip") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t chunks = 1 + rng.below(4);
    const std::size_t n = chunks * (1 + rng.below(9));
    const auto code = build_chunked_code(n, 1.0 / static_cast<double>(chunks),
                                         static_cast<MessageId>(2 + rng.below(5)),
                                         static_cast<KeyId>(1 + rng.below(3)), rng);
    const auto text = to_json(code);
    CHECK(code_from_json(text) == code);
    CHECK(to_json(code_from_json(text)) == text);
  }
  CHECK_THROWS_AS(code_from_json("{"), ParseError);
  CHECK_THROWS_AS(code_from_json("{\"format\":\"other\"}"), ParseError);
}

TEST_CASE("hex packing") {
  const Bits b{1, 0, 1, 1, 0, 1};
  CHECK(bits_to_hex(b) == "b4");
  CHECK(hex_to_bits("b4", 6) == b);
  CHECK_THROWS_AS(hex_to_bits("b5", 6), ParseError);
  CHECK_THROWS_AS(hex_to_bits("zz", 6), ParseError);
}

TEST_CASE("ARQ identities") {
  Rng rng(3);
  Bits msg(500);
  for (auto& b : msg) b = static_cast<Bit>(rng.next() >> 63);

  SUBCASE("no noise, no adversary") {
    PassiveAdversary passive;
    auto streams = TrialStreams::from_seed(1);
    const auto r = arq_transmit(msg, 0.0, 0.0, 2000, passive, streams);
    CHECK(r.channel_uses == 500);
    CHECK(r.delivered == 500);
    CHECK_FALSE(r.truncated);
  }
  SUBCASE("greedy adversary, q = 0: uses = k + floor(p uses)") {
    GreedyAdversary greedy;
    auto streams = TrialStreams::from_seed(2);
    const auto r = arq_transmit(msg, 0.2, 0.0, 2000, greedy, streams);
    CHECK(r.channel_uses == 500 + adversary_budget(0.2, r.channel_uses));
    CHECK(r.transcript.weight() == adversary_budget(0.2, r.channel_uses));
  }
  SUBCASE("conservation and budget with iid erasures and noise") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      GreedyAdversary greedy;
      auto streams = TrialStreams::from_seed(s);
      const auto r = arq_transmit(msg, 0.2, 0.1, default_arq_max_n(500, 0.2, 0.1), greedy, streams);
      CHECK_FALSE(r.truncated);
      CHECK(r.channel_uses == 500 + r.erased_receptions);
      CHECK(r.delivered + r.erased_receptions == r.channel_uses);
      CHECK(r.transcript.weight() <= adversary_budget(0.2, r.channel_uses));
    }
  }
  SUBCASE("truncation") {
    PassiveAdversary passive;
    auto streams = TrialStreams::from_seed(3);
    const auto r = arq_transmit(msg, 0.0, 0.5, 600, passive, streams);
    CHECK(r.truncated);
    CHECK(r.channel_uses == 600);
    CHECK(r.delivered < 500);
  }
  CHECK(default_arq_max_n(1000, 0.2, 0.1) == 5556);
  CHECK_THROWS_AS(default_arq_max_n(10, 1.0, 0.0), DomainError);
}

}  // TEST_SUITE

#pragma once

#include <cstdint>
#include <random>

namespace advchan {

// Seeded 64-bit stream. Uniform doubles and Bernoulli draws are derived from
// raw engine output directly so results are identical across standard
// library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Always consumes exactly one draw, whatever the value of prob.
  bool bernoulli(double prob) { return uniform() < prob; }

  // Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

private:
  std::mt19937_64 engine_;
};

// Named substreams of one trial.
enum class Stream : std::uint64_t {
  Channel = 1,
  Adversary = 2,
  Encoder = 3,
  Code = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-keyed derivation: distinct (base, counter) pairs give unrelated
// seeds, so trial i never shares a stream with trial j.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter);
std::uint64_t derive_seed(std::uint64_t base, Stream stream);

struct TrialStreams {
  Rng channel;
  Rng adversary;
  Rng encoder;
  Rng code;

  static TrialStreams from_seed(std::uint64_t trial_seed);
};

}  // namespace advchan

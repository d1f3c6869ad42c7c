#include "advchan/rng.hpp"

#include <limits>

namespace advchan {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = next();
  while (draw >= limit) {
    draw = next();
  }
  return draw % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t counter) {
  return splitmix64(splitmix64(base) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_seed(std::uint64_t base, Stream stream) {
  return derive_seed(base ^ 0xa0761d6478bd642fULL, static_cast<std::uint64_t>(stream));
}

TrialStreams TrialStreams::from_seed(std::uint64_t trial_seed) {
  return TrialStreams{Rng(derive_seed(trial_seed, Stream::Channel)),
                      Rng(derive_seed(trial_seed, Stream::Adversary)),
                      Rng(derive_seed(trial_seed, Stream::Encoder)),
                      Rng(derive_seed(trial_seed, Stream::Code))};
}

}  // namespace advchan

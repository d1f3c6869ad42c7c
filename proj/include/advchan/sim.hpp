#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "advchan/adversary.hpp"
#include "advchan/channel.hpp"
#include "advchan/codes.hpp"

namespace advchan::sim {

inline constexpr int kSchemaVersion = 1;

enum class StrategyKind { Passive, Iid, Greedy, WaitSnoopPush, BabbleSnoopPush };

const char* to_string(StrategyKind kind) noexcept;

struct AdversarySpec {
  StrategyKind kind = StrategyKind::Passive;
  // iid only; defaults to the scenario p when absent.
  std::optional<double> p_target;
  // snoop-then-push only.
  double epsilon = 0.1;
  // babble_snoop_push only; defaults to the minimizer of the flip bound.
  std::optional<double> p_bar;
};

struct ChunkedSpec {
  std::size_t n = 0;
  double theta = 0.0;
  codes::MessageId num_messages = 0;
  codes::KeyId num_keys = 1;
  // Fixed code built once from this seed; when absent (and no file) every
  // trial draws a fresh code from its code stream.
  std::optional<std::uint64_t> seed;
  // Serialized code, resolved relative to the scenario file.
  std::optional<std::filesystem::path> file;
};

struct ArqSpec {
  std::size_t k = 0;
  std::optional<std::size_t> max_n;
};

struct Scenario {
  ChannelParams channel;
  double p = 0.0;
  std::variant<ChunkedSpec, ArqSpec> code;
  AdversarySpec adversary;
  bool transmitter_feedback = false;
  // Uniform message per trial when absent.
  std::optional<codes::MessageId> fixed_message;

  bool is_arq() const noexcept { return std::holds_alternative<ArqSpec>(code); }
  // Block length of the chunked code, or k for ARQ.
  std::size_t n() const noexcept;
  // Throws ConfigError / DomainError with the offending field path.
  void validate() const;
};

// JSON (de)serialization of the scenario schema. base_dir resolves
// relative code file paths.
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

// Fixed column order of the event counters.
enum class Event : std::size_t {
  ConfusionSuccess,
  AttackExhausted,
  AttackSameMessage,
  PotentialError,
  BudgetViolationAttempts,
  BudgetOverrun,
  NoDecodingPoint,
  ListAmbiguous,
  WrongMessage,
  ArqTruncated,
  kCount,
};
inline constexpr std::size_t kNumEvents = static_cast<std::size_t>(Event::kCount);
const char* to_string(Event e) noexcept;

using EventFlags = std::array<bool, kNumEvents>;
using EventCounts = std::array<std::uint64_t, kNumEvents>;

enum class Verdict { Success, WrongMessage, ListAmbiguous, NoValidDecodingPoint, ArqTruncated };
const char* to_string(Verdict v) noexcept;

struct TrialOutcome {
  bool success = false;
  Verdict verdict = Verdict::Success;
  codes::MessageId sent = 0;
  std::optional<codes::MessageId> decoded;
  std::optional<std::size_t> t_star;
  std::size_t list_size = 0;
  std::size_t channel_uses = 0;
  Transcript transcript;
  EventFlags events{};
  // Set for snoop-then-push strategies.
  std::optional<adversary::AttackPlan> plan;
  // Erasure push with confusion: y consistent with both x and x' on its
  // unerased positions.
  std::optional<bool> push_consistent_with_both;

  bool operator==(const TrialOutcome&) const = default;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval at 95% confidence.
Interval wilson_interval(std::uint64_t errors, std::uint64_t trials);

struct ErrorEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  EventCounts events{};
  double mean_channel_uses = 0.0;
};

// Holds the resolved code and runs trials. Shareable across threads once
// constructed.
class TrialRunner {
public:
  explicit TrialRunner(Scenario scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  // The fixed code, or null when codes are drawn per trial.
  std::shared_ptr<const codes::ChunkedCode> fixed_code() const noexcept { return code_; }

  TrialOutcome run(std::uint64_t trial_seed) const;

private:
  TrialOutcome run_chunked(std::uint64_t trial_seed) const;
  TrialOutcome run_arq(std::uint64_t trial_seed) const;

  Scenario scenario_;
  std::shared_ptr<const codes::ChunkedCode> code_;
  double p_bar_ = 0.0;
};

TrialOutcome run_trial(const Scenario& scenario, std::uint64_t seed);

// Number of worker threads: ADVCHAN_THREADS if set and positive, else the
// hardware concurrency, never more than `trials`.
unsigned worker_threads(std::uint64_t trials);

// Trial i uses seed derive_seed(base_seed, i). threads = 0 picks
// worker_threads(). Output does not depend on the thread count.
ErrorEstimate estimate_error(const Scenario& scenario, std::uint64_t num_trials,
                             std::uint64_t base_seed, unsigned threads = 0);
ErrorEstimate estimate_error(const TrialRunner& runner, std::uint64_t num_trials,
                             std::uint64_t base_seed, unsigned threads = 0);

struct SweepRow {
  std::size_t index = 0;
  std::string key;
  std::optional<Scenario> scenario;
  std::optional<ErrorEstimate> estimate;
  // Failure message when the point could not run.
  std::string note;
};

// Applies each delta to base as a JSON merge patch and estimates every
// resulting point. Point i uses base seed derive_seed(base_seed, i) so
// resuming at start_index reproduces the same rows.
std::vector<SweepRow> sweep(std::string_view base_json, std::span<const std::string> deltas,
                            std::uint64_t trials_per_point, std::uint64_t base_seed,
                            std::size_t start_index = 0,
                            const std::filesystem::path& base_dir = {});

// Sweep file: {"schema_version": 1, "base": {...}, "grid": [{...}, ...]}.
std::vector<SweepRow> sweep_file(const std::filesystem::path& path, std::uint64_t trials_per_point,
                                 std::uint64_t base_seed, std::size_t start_index = 0);

std::string scenario_key(const Scenario& scenario);

std::string csv_header();
std::string csv_row(const SweepRow& row);
std::string to_csv(std::span<const SweepRow> rows);

// Verbose log of one snoop-then-push trial.
std::string attack_demo(const Scenario& scenario, std::uint64_t seed);

}  // namespace advchan::sim

#include "advchan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "advchan/capacity.hpp"
#include "advchan/error.hpp"
#include "format.hpp"
#include "json_util.hpp"

namespace advchan::sim {

namespace {

constexpr double kWilsonZ = 1.959963984540054;

std::unique_ptr<Adversary> make_adversary(const Scenario& s,
                                          const std::shared_ptr<const codes::ChunkedCode>& code,
                                          double p_bar) {
  switch (s.adversary.kind) {
    case StrategyKind::Passive:
      return std::make_unique<PassiveAdversary>();
    case StrategyKind::Iid:
      return std::make_unique<adversary::IidStrategy>(s.adversary.p_target.value_or(s.p));
    case StrategyKind::Greedy:
      return std::make_unique<GreedyAdversary>();
    case StrategyKind::WaitSnoopPush:
      return std::make_unique<adversary::WaitSnoopPushErasure>(code, s.p, s.channel.q,
                                                               s.adversary.epsilon);
    case StrategyKind::BabbleSnoopPush:
      return std::make_unique<adversary::BabbleSnoopPushFlip>(code, s.p, p_bar, s.channel.q,
                                                              s.adversary.epsilon);
  }
  throw InvariantError("unhandled strategy");
}

bool agrees_on_unerased(std::span<const Symbol> y, std::span<const Bit> x) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!is_erasure(y[i]) && to_bit(y[i]) != x[i]) {
      return false;
    }
  }
  return true;
}

void set(EventFlags& flags, Event e) { flags[static_cast<std::size_t>(e)] = true; }

}  // namespace

const char* to_string(Event e) noexcept {
  switch (e) {
    case Event::ConfusionSuccess: return "confusion_success";
    case Event::AttackExhausted: return "attack_exhausted";
    case Event::AttackSameMessage: return "attack_same_message";
    case Event::PotentialError: return "potential_error";
    case Event::BudgetViolationAttempts: return "clamped_trials";
    case Event::BudgetOverrun: return "budget_overrun";
    case Event::NoDecodingPoint: return "no_decoding_point";
    case Event::ListAmbiguous: return "list_ambiguous";
    case Event::WrongMessage: return "wrong_message";
    case Event::ArqTruncated: return "arq_truncated";
    case Event::kCount: break;
  }
  return "?";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Success: return "success";
    case Verdict::WrongMessage: return "wrong_message";
    case Verdict::ListAmbiguous: return "list_ambiguous";
    case Verdict::NoValidDecodingPoint: return "no_valid_decoding_point";
    case Verdict::ArqTruncated: return "arq_truncated";
  }
  return "?";
}

Interval wilson_interval(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) {
    throw DomainError("wilson interval needs at least one trial");
  }
  if (errors > trials) {
    throw DomainError("errors exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(errors) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ / denom * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) iv.low = 0.0;
  if (errors == trials) iv.high = 1.0;
  iv.low = std::min(iv.low, ph);
  iv.high = std::max(iv.high, ph);
  return iv;
}

TrialRunner::TrialRunner(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  if (const auto* c = std::get_if<ChunkedSpec>(&scenario_.code)) {
    if (c->file) {
      std::ifstream in(*c->file, std::ios::binary);
      if (!in) {
        throw IoError("cannot open code file " + c->file->string());
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      code_ = std::make_shared<const codes::ChunkedCode>(codes::code_from_json(ss.str()));
      auto& spec = std::get<ChunkedSpec>(scenario_.code);
      spec.n = code_->n();
      spec.theta = code_->theta();
      spec.num_messages = code_->num_messages();
      spec.num_keys = code_->num_keys();
      if (scenario_.fixed_message && *scenario_.fixed_message >= code_->num_messages()) {
        throw ConfigError("scenario field 'message.fixed': out of range for the code file");
      }
    } else if (c->seed) {
      Rng rng(derive_seed(*c->seed, Stream::Code));
      code_ = std::make_shared<const codes::ChunkedCode>(
          codes::build_chunked_code(c->n, c->theta, c->num_messages, c->num_keys, rng));
    } else {
      // Shape errors surface here rather than inside a trial.
      Rng probe(0);
      (void)codes::build_chunked_code(c->n, c->theta, 2, 1, probe);
    }
    const std::size_t n = code_ ? code_->n() : c->n;
    if (scenario_.adversary.kind == StrategyKind::WaitSnoopPush ||
        scenario_.adversary.kind == StrategyKind::BabbleSnoopPush) {
      if (n < 2) {
        throw ConfigError("scenario field 'code.n': snoop-then-push needs n >= 2");
      }
    }
  }
  if (scenario_.adversary.kind == StrategyKind::BabbleSnoopPush) {
    p_bar_ = scenario_.adversary.p_bar
                 ? *scenario_.adversary.p_bar
                 : std::clamp(capacity::upper_bound_flip_numeric(scenario_.p, scenario_.channel.q)
                                  .p_bar_star,
                              0.0, scenario_.p);
  }
}

TrialOutcome TrialRunner::run(std::uint64_t trial_seed) const {
  return scenario_.is_arq() ? run_arq(trial_seed) : run_chunked(trial_seed);
}

TrialOutcome TrialRunner::run_chunked(std::uint64_t trial_seed) const {
  const Scenario& s = scenario_;
  const auto& spec = std::get<ChunkedSpec>(s.code);
  auto streams = TrialStreams::from_seed(trial_seed);
  auto code = code_;
  if (!code) {
    code = std::make_shared<const codes::ChunkedCode>(codes::build_chunked_code(
        spec.n, spec.theta, spec.num_messages, spec.num_keys, streams.code));
  }

  TrialOutcome out;
  out.sent = s.fixed_message ? *s.fixed_message
                             : static_cast<codes::MessageId>(streams.encoder.below(code->num_messages()));
  std::vector<codes::KeyId> keys(code->num_chunks());
  for (auto& k : keys) {
    k = static_cast<codes::KeyId>(streams.encoder.below(code->num_keys()));
  }
  const Bits x = codes::encode(*code, out.sent, keys);

  auto adv = make_adversary(s, code, p_bar_);
  CodewordEncoder encoder(x);
  TransmissionOptions opts;
  opts.transmitter_feedback = s.transmitter_feedback;
  out.transcript = run_transmission(encoder, *adv, s.channel, s.p, code->n(), streams, opts, code.get());
  out.channel_uses = out.transcript.y.size();
  const auto& y = out.transcript.y;

  codes::DecodeOutcome dec;
  if (s.channel.kind == ChannelKind::Erasure) {
    dec = codes::two_phase_decode(y, *code, codes::DecoderConfig::for_code(*code, s.p, s.channel.q));
  } else {
    dec = codes::min_distance_decode(y, *code);
  }
  out.t_star = dec.t_star;
  out.list_size = dec.list_size();
  switch (dec.result) {
    case codes::DecodeResult::Decoded:
      out.decoded = dec.message;
      out.verdict = dec.message == out.sent ? Verdict::Success : Verdict::WrongMessage;
      break;
    case codes::DecodeResult::ListAmbiguous:
      out.verdict = Verdict::ListAmbiguous;
      break;
    case codes::DecodeResult::NoValidDecodingPoint:
      out.verdict = Verdict::NoValidDecodingPoint;
      break;
  }
  out.success = out.verdict == Verdict::Success;

  auto& ev = out.events;
  if (out.verdict == Verdict::WrongMessage) set(ev, Event::WrongMessage);
  if (out.verdict == Verdict::ListAmbiguous) set(ev, Event::ListAmbiguous);
  if (out.verdict == Verdict::NoValidDecodingPoint) set(ev, Event::NoDecodingPoint);
  if (out.transcript.violation()) set(ev, Event::BudgetViolationAttempts);
  if (out.transcript.weight() > out.transcript.budget) set(ev, Event::BudgetOverrun);

  if (s.channel.kind == ChannelKind::Erasure) {
    std::size_t consistent = 0;
    for (codes::MessageId u = 0; u < code->num_messages() && consistent < 2; ++u) {
      consistent += codes::message_consistent(*code, u, 0, code->num_chunks(), y);
    }
    if (consistent >= 2) set(ev, Event::PotentialError);
  }

  if (const auto* snoop = dynamic_cast<const adversary::SnoopPushStrategy*>(adv.get())) {
    const auto& plan = snoop->plan();
    out.plan = plan;
    if (plan.phase == adversary::AttackPlan::Phase::Push) {
      if (plan.u_prime == out.sent) {
        set(ev, Event::AttackSameMessage);
      }
      if (plan.exhausted) {
        set(ev, Event::AttackExhausted);
      }
      if (plan.u_prime != out.sent && !plan.exhausted) {
        set(ev, Event::ConfusionSuccess);
        if (s.channel.kind == ChannelKind::Erasure) {
          out.push_consistent_with_both = agrees_on_unerased(y, x) && agrees_on_unerased(y, plan.x_prime);
        }
      }
    }
  }
  return out;
}

TrialOutcome TrialRunner::run_arq(std::uint64_t trial_seed) const {
  const Scenario& s = scenario_;
  const auto& spec = std::get<ArqSpec>(s.code);
  auto streams = TrialStreams::from_seed(trial_seed);
  Bits message(spec.k);
  for (auto& b : message) {
    b = static_cast<Bit>(streams.encoder.next() >> 63);
  }
  const std::size_t max_n = spec.max_n ? *spec.max_n : codes::default_arq_max_n(spec.k, s.p, s.channel.q);
  auto adv = make_adversary(s, nullptr, 0.0);
  auto res = codes::arq_transmit(message, s.p, s.channel.q, max_n, *adv, streams);

  TrialOutcome out;
  out.channel_uses = res.channel_uses;
  out.success = !res.truncated;
  out.verdict = res.truncated ? Verdict::ArqTruncated : Verdict::Success;
  out.transcript = std::move(res.transcript);
  if (res.truncated) set(out.events, Event::ArqTruncated);
  if (out.transcript.violation()) set(out.events, Event::BudgetViolationAttempts);
  if (out.transcript.weight() > out.transcript.budget) set(out.events, Event::BudgetOverrun);
  return out;
}

TrialOutcome run_trial(const Scenario& scenario, std::uint64_t seed) {
  return TrialRunner(scenario).run(seed);
}

unsigned worker_threads(std::uint64_t trials) {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ADVCHAN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      n = static_cast<unsigned>(std::min<long>(v, 1024));
    }
  }
  return static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(n, trials)));
}

ErrorEstimate estimate_error(const Scenario& scenario, std::uint64_t num_trials,
                             std::uint64_t base_seed, unsigned threads) {
  return estimate_error(TrialRunner(scenario), num_trials, base_seed, threads);
}

ErrorEstimate estimate_error(const TrialRunner& runner, std::uint64_t num_trials,
                             std::uint64_t base_seed, unsigned threads) {
  if (num_trials == 0) {
    throw DomainError("num_trials must be at least 1");
  }
  if (threads == 0) {
    threads = worker_threads(num_trials);
  }
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, num_trials));

  struct Partial {
    std::uint64_t errors = 0;
    std::uint64_t uses = 0;
    EventCounts events{};
  };
  std::vector<Partial> partials(threads);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](unsigned w) {
    try {
      Partial& part = partials[w];
      for (std::uint64_t i = w; i < num_trials; i += threads) {
        const auto out = runner.run(derive_seed(base_seed, i));
        part.errors += !out.success;
        part.uses += out.channel_uses;
        for (std::size_t e = 0; e < kNumEvents; ++e) {
          part.events[e] += out.events[e];
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back(work, w);
    }
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ErrorEstimate est;
  est.trials = num_trials;
  std::uint64_t uses = 0;
  for (const auto& part : partials) {
    est.errors += part.errors;
    uses += part.uses;
    for (std::size_t e = 0; e < kNumEvents; ++e) est.events[e] += part.events[e];
  }
  est.p_hat = static_cast<double>(est.errors) / static_cast<double>(num_trials);
  const auto iv = wilson_interval(est.errors, num_trials);
  est.ci_low = iv.low;
  est.ci_high = iv.high;
  est.mean_channel_uses = static_cast<double>(uses) / static_cast<double>(num_trials);
  return est;
}

std::vector<SweepRow> sweep(std::string_view base_json, std::span<const std::string> deltas,
                            std::uint64_t trials_per_point, std::uint64_t base_seed,
                            std::size_t start_index, const std::filesystem::path& base_dir) {
  if (deltas.empty()) {
    throw ConfigError("sweep grid is empty");
  }
  if (start_index > deltas.size()) {
    throw ConfigError("start index beyond the end of the grid");
  }
  if (trials_per_point == 0) {
    throw DomainError("trials per point must be at least 1");
  }
  const auto base = detail::parse_json(base_json);
  if (!base.is_object()) {
    throw ConfigError("sweep base must be a JSON object");
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = start_index; i < deltas.size(); ++i) {
    SweepRow row;
    row.index = i;
    try {
      auto doc = base;
      doc.merge_patch(detail::parse_json(deltas[i]));
      row.scenario = parse_scenario(doc.dump(), base_dir);
      row.key = scenario_key(*row.scenario);
      TrialRunner runner(*row.scenario);
      row.scenario = runner.scenario();
      row.estimate = estimate_error(runner, trials_per_point, derive_seed(base_seed, i));
    } catch (const Error& e) {
      row.note = e.what();
    } catch (const std::exception& e) {
      row.note = std::string("internal error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> sweep_file(const std::filesystem::path& path, std::uint64_t trials_per_point,
                                 std::uint64_t base_seed, std::size_t start_index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open sweep file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = detail::parse_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("base") || !doc.contains("grid") || !doc["grid"].is_array()) {
    throw ConfigError("sweep file needs \"base\" (object) and \"grid\" (array)");
  }
  if (doc.value("schema_version", 0) != kSchemaVersion) {
    throw ConfigError("sweep file field 'schema_version': expected 1");
  }
  auto base = doc["base"];
  if (!base.contains("schema_version")) {
    base["schema_version"] = kSchemaVersion;
  }
  std::vector<std::string> deltas;
  for (const auto& d : doc["grid"]) {
    deltas.push_back(d.dump());
  }
  return sweep(base.dump(), deltas, trials_per_point, base_seed, start_index, path.parent_path());
}

std::string csv_header() {
  std::string h = "index,key,channel,q,p,n,strategy,trials,errors,p_hat,ci_low,ci_high";
  for (std::size_t e = 0; e < kNumEvents; ++e) {
    h += ',';
    h += to_string(static_cast<Event>(e));
  }
  h += ",mean_channel_uses,note\n";
  return h;
}

std::string csv_row(const SweepRow& row) {
  using detail::csv_field;
  using detail::format_double;
  std::string r = std::to_string(row.index) + "," + csv_field(row.key) + ",";
  if (row.scenario) {
    const auto& s = *row.scenario;
    r += std::string(to_string(s.channel.kind)) + "," + format_double(s.channel.q) + "," +
         format_double(s.p) + "," + std::to_string(s.n()) + "," + to_string(s.adversary.kind) + ",";
  } else {
    r += ",,,,,";
  }
  if (row.estimate) {
    const auto& e = *row.estimate;
    r += std::to_string(e.trials) + "," + std::to_string(e.errors) + "," + format_double(e.p_hat) +
         "," + format_double(e.ci_low) + "," + format_double(e.ci_high);
    for (auto c : e.events) {
      r += "," + std::to_string(c);
    }
    r += "," + format_double(e.mean_channel_uses);
  } else {
    r += ",,,,";
    for (std::size_t i = 0; i < kNumEvents; ++i) r += ',';
    r += ',';
  }
  r += "," + csv_field(row.note) + "\n";
  return r;
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::string out = csv_header();
  for (const auto& row : rows) {
    out += csv_row(row);
  }
  return out;
}

}  // namespace advchan::sim

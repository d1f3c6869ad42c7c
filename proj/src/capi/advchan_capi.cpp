#include "advchan.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "advchan/capacity.hpp"
#include "advchan/codes.hpp"
#include "advchan/curves.hpp"
#include "advchan/error.hpp"
#include "advchan/sim.hpp"

struct advchan_code {
  advchan::codes::ChunkedCode code;
};

struct advchan_scenario {
  advchan::sim::Scenario scenario;
};

namespace {

thread_local std::string g_last_error;

static_assert(advchan::sim::kNumEvents <= ADVCHAN_MAX_EVENTS);

advchan_status fail(advchan_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <class F>
advchan_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return ADVCHAN_OK;
  } catch (const advchan::DomainError& e) {
    return fail(ADVCHAN_E_DOMAIN, e.what());
  } catch (const advchan::ParseError& e) {
    return fail(ADVCHAN_E_PARSE, e.what());
  } catch (const advchan::IoError& e) {
    return fail(ADVCHAN_E_IO, e.what());
  } catch (const advchan::ConfigError& e) {
    return fail(ADVCHAN_E_CONFIG, e.what());
  } catch (const advchan::SolverError& e) {
    return fail(ADVCHAN_E_SOLVER, e.what());
  } catch (const advchan::InvariantError& e) {
    return fail(ADVCHAN_E_INVARIANT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ADVCHAN_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ADVCHAN_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ADVCHAN_E_INTERNAL, "unknown error");
  }
}

struct InvalidArg : std::exception {
  explicit InvalidArg(const char* m) : msg(m) {}
  const char* what() const noexcept override { return msg; }
  const char* msg;
};

void need(const void* ptr, const char* what) {
  if (!ptr) throw InvalidArg(what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

template <class F>
advchan_status run(F&& f) {
  try {
    f();
    g_last_error.clear();
    return ADVCHAN_OK;
  } catch (const InvalidArg& e) {
    return fail(ADVCHAN_E_INVALID_ARG, e.what());
  } catch (...) {
    return guard([] { throw; });
  }
}

}  // namespace

using namespace advchan;

extern "C" {

int advchan_abi_version(void) { return ADVCHAN_ABI_VERSION; }

const char* advchan_status_string(advchan_status status) {
  switch (status) {
    case ADVCHAN_OK: return "ok";
    case ADVCHAN_E_INVALID_ARG: return "invalid argument";
    case ADVCHAN_E_DOMAIN: return "domain error";
    case ADVCHAN_E_PARSE: return "parse error";
    case ADVCHAN_E_IO: return "I/O error";
    case ADVCHAN_E_CONFIG: return "configuration error";
    case ADVCHAN_E_SOLVER: return "solver error";
    case ADVCHAN_E_INVARIANT: return "invariant violated";
    case ADVCHAN_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* advchan_last_error(void) { return g_last_error.c_str(); }

void advchan_free_string(char* s) { std::free(s); }

advchan_status advchan_h2(double x, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::h2(x);
  });
}

advchan_status advchan_star(double x, double y, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::star(x, y);
  });
}

advchan_status advchan_capacity_erasure(double p, double q, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::capacity_erasure(p, q).value();
  });
}

advchan_status advchan_capacity_erasure_feedback(double p, double q, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::capacity_erasure_feedback(p, q).value();
  });
}

advchan_status advchan_upper_bound_flip_numeric(double p, double q, double tol, advchan_flip_bound* out) {
  return run([&] {
    need(out, "out is null");
    const auto b = capacity::upper_bound_flip_numeric(p, q, tol);
    out->value = b.value;
    out->p_bar_star = b.p_bar_star;
    out->alpha = b.alpha;
    out->p0 = b.p0;
    out->regime = b.regime == capacity::FlipRegime::ConvexRegion   ? ADVCHAN_REGIME_CONVEX
                  : b.regime == capacity::FlipRegime::LinearRegion ? ADVCHAN_REGIME_LINEAR
                                                                   : ADVCHAN_REGIME_ZERO;
    out->converged = b.converged ? 1 : 0;
  });
}

advchan_status advchan_upper_bound_flip_closed(double p, double q, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::upper_bound_flip_closed(p, q).value();
  });
}

advchan_status advchan_achievable_flip(double p, double q, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::achievable_flip(p, q).value();
  });
}

advchan_status advchan_p0_equation(double p0, double q, double* out) {
  return run([&] {
    need(out, "out is null");
    *out = capacity::p0_equation(p0, q);
  });
}

advchan_status advchan_p0_solve(double q, double tol, double* p0, double* residual) {
  return run([&] {
    need(p0, "p0 is null");
    const auto sol = capacity::p0_solve(q, tol);
    *p0 = sol.p0;
    if (residual) *residual = sol.residual;
  });
}

advchan_status advchan_capacity_csv(const advchan_curve_request* request, char** out_csv) {
  return run([&] {
    need(request, "request is null");
    need(request->model, "model is null");
    need(out_csv, "out_csv is null");
    if (request->num_q > 0) need(request->q_values, "q_values is null");
    curves::CurveRequest req;
    req.model = curves::model_from_string(request->model);
    req.q_values.assign(request->q_values, request->q_values + request->num_q);
    req.p_start = request->p_start;
    req.p_stop = request->p_stop;
    req.p_step = request->p_step;
    *out_csv = dup(curves::capacity_csv(req));
  });
}

advchan_status advchan_p0_csv(const double* q_values, size_t num_q, double tol, char** out_csv) {
  return run([&] {
    need(out_csv, "out_csv is null");
    if (num_q > 0) need(q_values, "q_values is null");
    *out_csv = dup(curves::p0_csv(std::vector<double>(q_values, q_values + num_q), tol));
  });
}

advchan_status advchan_code_build(size_t n, double theta, uint32_t num_messages, uint32_t num_keys,
                                  uint64_t seed, advchan_code** out) {
  return run([&] {
    need(out, "out is null");
    Rng rng(derive_seed(seed, Stream::Code));
    *out = new advchan_code{codes::build_chunked_code(n, theta, num_messages, num_keys, rng)};
  });
}

advchan_status advchan_code_from_json(const char* json, advchan_code** out) {
  return run([&] {
    need(json, "json is null");
    need(out, "out is null");
    *out = new advchan_code{codes::code_from_json(json)};
  });
}

advchan_status advchan_code_to_json(const advchan_code* code, char** out_json) {
  return run([&] {
    need(code, "code is null");
    need(out_json, "out_json is null");
    *out_json = dup(codes::to_json(code->code));
  });
}

void advchan_code_free(advchan_code* code) { delete code; }

advchan_status advchan_code_info_get(const advchan_code* code, advchan_code_info* out) {
  return run([&] {
    need(code, "code is null");
    need(out, "out is null");
    const auto& c = code->code;
    out->n = c.n();
    out->num_chunks = c.num_chunks();
    out->chunk_len = c.chunk_len();
    out->num_messages = c.num_messages();
    out->num_keys = c.num_keys();
    out->theta = c.theta();
    out->rate = c.rate();
  });
}

advchan_status advchan_code_encode(const advchan_code* code, uint32_t message, const uint32_t* keys,
                                   size_t num_keys, uint8_t* out, size_t out_len) {
  return run([&] {
    need(code, "code is null");
    need(keys, "keys is null");
    need(out, "out is null");
    if (out_len < code->code.n()) throw InvalidArg("output buffer shorter than n");
    const auto x = codes::encode(code->code, message, std::span<const uint32_t>(keys, num_keys));
    std::memcpy(out, x.data(), x.size());
  });
}

advchan_status advchan_decode(const advchan_code* code, const uint8_t* y, size_t n, double p, double q,
                              advchan_decode_outcome* out) {
  return run([&] {
    need(code, "code is null");
    need(y, "y is null");
    need(out, "out is null");
    std::vector<Symbol> symbols(n);
    for (size_t i = 0; i < n; ++i) {
      if (y[i] > 2) throw InvalidArg("symbols must be 0, 1 or 2");
      symbols[i] = static_cast<Symbol>(y[i]);
    }
    const auto d = codes::two_phase_decode(symbols, code->code,
                                           codes::DecoderConfig::for_code(code->code, p, q));
    out->result = d.result == codes::DecodeResult::Decoded          ? ADVCHAN_DECODED
                  : d.result == codes::DecodeResult::ListAmbiguous ? ADVCHAN_LIST_AMBIGUOUS
                                                                    : ADVCHAN_NO_VALID_DECODING_POINT;
    out->message = d.message;
    out->has_t_star = d.t_star ? 1 : 0;
    out->t_star = d.t_star.value_or(0);
    out->list_size = d.list_size();
  });
}

advchan_status advchan_scenario_parse(const char* json, const char* base_dir, advchan_scenario** out) {
  return run([&] {
    need(json, "json is null");
    need(out, "out is null");
    *out = new advchan_scenario{sim::parse_scenario(json, base_dir ? base_dir : "")};
  });
}

advchan_status advchan_scenario_load(const char* path, advchan_scenario** out) {
  return run([&] {
    need(path, "path is null");
    need(out, "out is null");
    *out = new advchan_scenario{sim::load_scenario(path)};
  });
}

void advchan_scenario_free(advchan_scenario* scenario) { delete scenario; }

advchan_status advchan_scenario_to_json(const advchan_scenario* scenario, char** out_json) {
  return run([&] {
    need(scenario, "scenario is null");
    need(out_json, "out_json is null");
    *out_json = dup(sim::scenario_to_json(scenario->scenario));
  });
}

size_t advchan_num_events(void) { return sim::kNumEvents; }

const char* advchan_event_name(size_t index) {
  if (index >= sim::kNumEvents) return nullptr;
  return sim::to_string(static_cast<sim::Event>(index));
}

advchan_status advchan_run_trial(const advchan_scenario* scenario, uint64_t seed, advchan_trial_outcome* out) {
  return run([&] {
    need(scenario, "scenario is null");
    need(out, "out is null");
    const auto t = sim::run_trial(scenario->scenario, seed);
    *out = advchan_trial_outcome{};
    out->success = t.success ? 1 : 0;
    out->verdict = static_cast<int>(t.verdict);
    out->sent = t.sent;
    out->channel_uses = t.channel_uses;
    out->actions_used = t.transcript.weight();
    out->budget = t.transcript.budget;
    out->violation_attempts = t.transcript.violation_attempts;
    for (size_t e = 0; e < sim::kNumEvents; ++e) out->events[e] = t.events[e] ? 1 : 0;
  });
}

advchan_status advchan_estimate_error(const advchan_scenario* scenario, uint64_t trials, uint64_t seed,
                                      unsigned threads, advchan_error_estimate* out) {
  return run([&] {
    need(scenario, "scenario is null");
    need(out, "out is null");
    const auto e = sim::estimate_error(scenario->scenario, trials, seed, threads);
    *out = advchan_error_estimate{};
    out->trials = e.trials;
    out->errors = e.errors;
    out->p_hat = e.p_hat;
    out->ci_low = e.ci_low;
    out->ci_high = e.ci_high;
    out->mean_channel_uses = e.mean_channel_uses;
    for (size_t i = 0; i < sim::kNumEvents; ++i) out->events[i] = e.events[i];
  });
}

advchan_status advchan_wilson_interval(uint64_t errors, uint64_t trials, double* low, double* high) {
  return run([&] {
    need(low, "low is null");
    need(high, "high is null");
    const auto iv = sim::wilson_interval(errors, trials);
    *low = iv.low;
    *high = iv.high;
  });
}

advchan_status advchan_simulate_csv(const advchan_scenario* scenario, uint64_t trials, uint64_t seed,
                                    char** out_csv) {
  return run([&] {
    need(scenario, "scenario is null");
    need(out_csv, "out_csv is null");
    sim::TrialRunner runner(scenario->scenario);
    sim::SweepRow row;
    row.key = sim::scenario_key(runner.scenario());
    row.scenario = runner.scenario();
    row.estimate = sim::estimate_error(runner, trials, seed);
    *out_csv = dup(sim::to_csv(std::span<const sim::SweepRow>(&row, 1)));
  });
}

advchan_status advchan_sweep_csv(const char* sweep_path, uint64_t trials, uint64_t seed, size_t start_index,
                                 char** out_csv) {
  return run([&] {
    need(sweep_path, "sweep_path is null");
    need(out_csv, "out_csv is null");
    const auto rows = sim::sweep_file(sweep_path, trials, seed, start_index);
    *out_csv = dup(sim::to_csv(rows));
  });
}

advchan_status advchan_attack_demo(const advchan_scenario* scenario, uint64_t seed, char** out_log) {
  return run([&] {
    need(scenario, "scenario is null");
    need(out_log, "out_log is null");
    *out_log = dup(sim::attack_demo(scenario->scenario, seed));
  });
}

}  // extern "C"

// advchan command-line front end. Thin shell over the C library interface.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "advchan.h"

namespace {

enum Exit { kOk = 0, kInternal = 1, kParse = 2, kDomain = 3, kIo = 4, kConfig = 5, kSolver = 6 };

int exit_code(advchan_status s) {
  switch (s) {
    case ADVCHAN_OK: return kOk;
    case ADVCHAN_E_PARSE: return kParse;
    case ADVCHAN_E_DOMAIN: return kDomain;
    case ADVCHAN_E_IO: return kIo;
    case ADVCHAN_E_CONFIG:
    case ADVCHAN_E_INVALID_ARG: return kConfig;
    case ADVCHAN_E_SOLVER: return kSolver;
    default: return kInternal;
  }
}

int report(advchan_status s) {
  std::cerr << "advchan: " << advchan_status_string(s) << ": " << advchan_last_error() << "\n";
  return exit_code(s);
}

// Takes ownership of text.
int emit(char* text, const std::string& out) {
  int rc = kOk;
  if (out == "-") {
    std::fputs(text, stdout);
    std::fflush(stdout);
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) {
      std::cerr << "advchan: I/O error: cannot write " << out << "\n";
      rc = kIo;
    }
  }
  advchan_free_string(text);
  return rc;
}

struct ScenarioHandle {
  advchan_scenario* ptr = nullptr;
  ~ScenarioHandle() { advchan_scenario_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Erasure and bit-flip channels with online snooping adversaries"};
  app.require_subcommand(1);
  std::string out = "-";

  // capacity
  auto* cap = app.add_subcommand("capacity", "Capacity / bound curve as CSV (model,q,p,value,note)");
  std::string model = "erasure";
  std::vector<double> qs;
  double p_start = 0.0, p_stop = 0.5, p_step = 0.01;
  cap->add_option("--model", model, "erasure | erasure-fb | flip-upper | flip-lower")->capture_default_str();
  cap->add_option("--q", qs, "Random channel parameter (repeatable)")->required();
  cap->add_option("--p-start", p_start)->capture_default_str();
  cap->add_option("--p-stop", p_stop)->capture_default_str();
  cap->add_option("--p-step", p_step)->capture_default_str();
  cap->add_option("--out", out, "Output path, - for stdout")->capture_default_str();

  // p0
  auto* p0 = app.add_subcommand("p0", "Regime boundary of the flip bound as CSV (q,p0,residual,note)");
  std::vector<double> p0_qs;
  double tol = 1e-12;
  p0->add_option("--q", p0_qs, "q in [0, 1/2) (repeatable)")->required();
  p0->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
  p0->add_option("--out", out)->capture_default_str();

  // simulate / sweep / attack-demo
  std::string scenario_path;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t start_index = 0;

  auto* simc = app.add_subcommand("simulate", "Monte Carlo error estimate for one scenario");
  simc->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  simc->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
  simc->add_option("--seed", seed)->capture_default_str();
  simc->add_option("--out", out)->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "Error estimates over a grid of scenario deltas");
  sw->add_option("--scenario", scenario_path, "Sweep JSON file with base and grid")->required();
  sw->add_option("--trials", trials, "Trials per grid point")->capture_default_str()->check(CLI::PositiveNumber);
  sw->add_option("--seed", seed)->capture_default_str();
  sw->add_option("--start-index", start_index, "Resume from this grid point")->capture_default_str();
  sw->add_option("--out", out)->capture_default_str();

  auto* demo = app.add_subcommand("attack-demo", "One snoop-then-push trial with phase log");
  demo->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  demo->add_option("--seed", seed)->capture_default_str();
  demo->add_option("--out", out)->capture_default_str();

  auto* mk = app.add_subcommand("make-code", "Draw a random chunked code and write it as JSON");
  std::size_t n = 32;
  double theta = 0.25;
  std::uint32_t messages = 4, keys = 2;
  mk->add_option("--n", n)->capture_default_str();
  mk->add_option("--theta", theta)->capture_default_str();
  mk->add_option("--messages", messages)->capture_default_str();
  mk->add_option("--keys", keys)->capture_default_str();
  mk->add_option("--seed", seed)->capture_default_str();
  mk->add_option("--out", out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  char* text = nullptr;
  advchan_status st = ADVCHAN_OK;

  if (*cap) {
    advchan_curve_request req{model.c_str(), qs.data(), qs.size(), p_start, p_stop, p_step};
    st = advchan_capacity_csv(&req, &text);
  } else if (*p0) {
    st = advchan_p0_csv(p0_qs.data(), p0_qs.size(), tol, &text);
  } else if (*sw) {
    st = advchan_sweep_csv(scenario_path.c_str(), trials, seed, start_index, &text);
  } else if (*simc || *demo) {
    ScenarioHandle sc;
    st = advchan_scenario_load(scenario_path.c_str(), &sc.ptr);
    if (st == ADVCHAN_OK) {
      st = *simc ? advchan_simulate_csv(sc.ptr, trials, seed, &text)
                 : advchan_attack_demo(sc.ptr, seed, &text);
    }
  } else if (*mk) {
    advchan_code* code = nullptr;
    st = advchan_code_build(n, theta, messages, keys, seed, &code);
    if (st == ADVCHAN_OK) {
      st = advchan_code_to_json(code, &text);
      advchan_code_free(code);
    }
  }
  if (st != ADVCHAN_OK) {
    return report(st);
  }
  return emit(text, out);
}

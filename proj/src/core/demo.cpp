#include <sstream>

#include "advchan/error.hpp"
#include "advchan/sim.hpp"

namespace advchan::sim {

namespace {

std::string bits_str(std::span<const Bit> b) {
  std::string s;
  for (Bit v : b) s += v ? '1' : '0';
  return s;
}

std::string symbols_str(std::span<const Symbol> y) {
  std::string s;
  for (Symbol v : y) s += is_erasure(v) ? '?' : (v == Symbol::One ? '1' : '0');
  return s;
}

}  // namespace

std::string attack_demo(const Scenario& scenario, std::uint64_t seed) {
  if (scenario.adversary.kind != StrategyKind::WaitSnoopPush &&
      scenario.adversary.kind != StrategyKind::BabbleSnoopPush) {
    throw ConfigError("attack-demo needs wait_snoop_push or babble_snoop_push");
  }
  TrialRunner runner(scenario);
  const auto out = runner.run(seed);
  const auto& t = out.transcript;
  const auto& plan = *out.plan;
  const std::size_t ell = plan.ell;
  const std::size_t n = t.n;

  std::ostringstream log;
  log << "scenario   " << scenario_key(runner.scenario()) << "\n";
  log << "seed       " << seed << "\n";
  log << "n=" << n << " budget=" << t.budget << " ell=" << ell << "\n";
  log << "sent u=" << out.sent << "\n";
  log << "x          " << bits_str(t.x) << "\n";
  log << "\n[phase 1] steps 1.." << ell << ": "
      << (scenario.adversary.kind == StrategyKind::WaitSnoopPush ? "wait and snoop" : "babble and snoop")
      << ", actions " << plan.phase1_actions << "\n";
  log << "y_1..ell   " << symbols_str(std::span(t.y).first(ell)) << "\n";
  log << "\n[switch] " << plan.candidates << " candidate codewords; drew u'=" << plan.u_prime
      << " (key sequence #" << plan.key_index_prime << ")"
      << (plan.u_prime == out.sent ? ", same message as sent: attack cannot confuse" : "") << "\n";
  log << "x'         " << bits_str(plan.x_prime) << "\n";
  log << "\n[phase 2] steps " << ell + 1 << ".." << n << ": push toward x'\n";
  std::string marks(n, ' ');
  for (std::size_t i = ell; i < n; ++i) {
    if (t.x[i] != plan.x_prime[i]) marks[i] = '^';
  }
  log << "disagree   " << marks << "\n";
  log << "a          " << bits_str(t.a) << "\n";
  log << "y          " << symbols_str(t.y) << "\n";
  log << "disagreements " << plan.disagreements << ", push actions " << plan.push_actions
      << ", budget " << (plan.exhausted ? "exhausted" : "sufficient") << "\n";
  if (out.push_consistent_with_both) {
    log << "y consistent with both x and x': " << (*out.push_consistent_with_both ? "yes" : "no") << "\n";
  }
  log << "\n[decoder] verdict " << to_string(out.verdict);
  if (out.decoded) log << ", decoded u=" << *out.decoded;
  if (out.t_star) log << ", t*=" << *out.t_star;
  log << ", list size " << out.list_size << "\n";
  log << "events:";
  bool any = false;
  for (std::size_t e = 0; e < kNumEvents; ++e) {
    if (out.events[e]) {
      log << " " << to_string(static_cast<Event>(e));
      any = true;
    }
  }
  log << (any ? "" : " none") << "\n";
  return log.str();
}

}  // namespace advchan::sim

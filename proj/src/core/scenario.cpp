#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "advchan/error.hpp"
#include "advchan/sim.hpp"
#include "format.hpp"
#include "json_util.hpp"

namespace advchan::sim {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError("scenario field '" + path + "': " + what);
}

// Numeric value outside its mathematical domain.
[[noreturn]] void out_of_domain(const std::string& path, const std::string& what) {
  throw DomainError("scenario field '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!ok.count(key)) {
      bad(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    bad(path.empty() ? key : path + "." + key, "missing");
  }
  return *it;
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) {
    bad(path, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    bad(path, "must be finite");
  }
  return d;
}

std::uint64_t get_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) {
      bad(path, "must be non-negative");
    }
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  bad(path, "expected a non-negative integer");
}

std::optional<json> optional_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return std::nullopt;
  }
  return *it;
}

StrategyKind strategy_from_string(const std::string& s, const std::string& path) {
  if (s == "passive") return StrategyKind::Passive;
  if (s == "iid") return StrategyKind::Iid;
  if (s == "greedy") return StrategyKind::Greedy;
  if (s == "wait_snoop_push") return StrategyKind::WaitSnoopPush;
  if (s == "babble_snoop_push") return StrategyKind::BabbleSnoopPush;
  bad(path, "unknown strategy '" + s + "'");
}

Scenario from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) {
    bad("<root>", "expected an object");
  }
  reject_unknown(doc, "",
                 {"schema_version", "channel", "p", "code", "adversary", "transmitter_feedback",
                  "message"});
  const auto version = get_count(require(doc, "schema_version", ""), "schema_version");
  if (version != static_cast<std::uint64_t>(kSchemaVersion)) {
    bad("schema_version", "unsupported version " + std::to_string(version));
  }

  Scenario s;
  const json& ch = require(doc, "channel", "");
  if (!ch.is_object()) bad("channel", "expected an object");
  reject_unknown(ch, "channel", {"kind", "q"});
  const json& kind = require(ch, "kind", "channel");
  if (kind == "erasure") {
    s.channel.kind = ChannelKind::Erasure;
  } else if (kind == "flip") {
    s.channel.kind = ChannelKind::Flip;
  } else {
    bad("channel.kind", "expected \"erasure\" or \"flip\"");
  }
  s.channel.q = get_real(require(ch, "q", "channel"), "channel.q");
  s.p = get_real(require(doc, "p", ""), "p");

  const json& code = require(doc, "code", "");
  if (!code.is_object()) bad("code", "expected an object");
  const json& type = require(code, "type", "code");
  if (type == "chunked") {
    reject_unknown(code, "code", {"type", "n", "theta", "num_messages", "num_keys", "seed", "file"});
    ChunkedSpec c;
    if (auto f = optional_field(code, "file")) {
      if (!f->is_string()) bad("code.file", "expected a path string");
      std::filesystem::path fp = f->get<std::string>();
      c.file = fp.is_relative() ? base_dir / fp : fp;
    } else {
      c.n = get_count(require(code, "n", "code"), "code.n");
      c.theta = get_real(require(code, "theta", "code"), "code.theta");
      const auto m = get_count(require(code, "num_messages", "code"), "code.num_messages");
      const auto k = get_count(require(code, "num_keys", "code"), "code.num_keys");
      if (m > 0xFFFFFFFFULL) bad("code.num_messages", "too large");
      if (k > 0xFFFFFFFFULL) bad("code.num_keys", "too large");
      c.num_messages = static_cast<codes::MessageId>(m);
      c.num_keys = static_cast<codes::KeyId>(k);
      if (auto sd = optional_field(code, "seed")) {
        c.seed = get_count(*sd, "code.seed");
      }
    }
    s.code = c;
  } else if (type == "arq") {
    reject_unknown(code, "code", {"type", "k", "max_n"});
    ArqSpec a;
    a.k = get_count(require(code, "k", "code"), "code.k");
    if (auto mx = optional_field(code, "max_n")) {
      a.max_n = get_count(*mx, "code.max_n");
    }
    s.code = a;
  } else {
    bad("code.type", "expected \"chunked\" or \"arq\"");
  }

  const json& adv = require(doc, "adversary", "");
  if (!adv.is_object()) bad("adversary", "expected an object");
  reject_unknown(adv, "adversary", {"strategy", "p_target", "epsilon", "p_bar"});
  const json& strat = require(adv, "strategy", "adversary");
  if (!strat.is_string()) bad("adversary.strategy", "expected a string");
  s.adversary.kind = strategy_from_string(strat.get<std::string>(), "adversary.strategy");
  if (auto v = optional_field(adv, "p_target")) {
    s.adversary.p_target = get_real(*v, "adversary.p_target");
  }
  if (auto v = optional_field(adv, "epsilon")) {
    s.adversary.epsilon = get_real(*v, "adversary.epsilon");
  }
  if (auto v = optional_field(adv, "p_bar")) {
    s.adversary.p_bar = get_real(*v, "adversary.p_bar");
  }

  if (auto fb = optional_field(doc, "transmitter_feedback")) {
    if (!fb->is_boolean()) bad("transmitter_feedback", "expected true or false");
    s.transmitter_feedback = fb->get<bool>();
  }
  if (auto msg = optional_field(doc, "message")) {
    if (msg->is_string() && *msg == "uniform") {
      s.fixed_message.reset();
    } else if (msg->is_object()) {
      reject_unknown(*msg, "message", {"fixed"});
      const auto u = get_count(require(*msg, "fixed", "message"), "message.fixed");
      if (u > 0xFFFFFFFFULL) bad("message.fixed", "too large");
      s.fixed_message = static_cast<codes::MessageId>(u);
    } else {
      bad("message", "expected \"uniform\" or {\"fixed\": u}");
    }
  }
  s.validate();
  return s;
}

}  // namespace

const char* to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Passive: return "passive";
    case StrategyKind::Iid: return "iid";
    case StrategyKind::Greedy: return "greedy";
    case StrategyKind::WaitSnoopPush: return "wait_snoop_push";
    case StrategyKind::BabbleSnoopPush: return "babble_snoop_push";
  }
  return "?";
}

std::size_t Scenario::n() const noexcept {
  if (const auto* a = std::get_if<ArqSpec>(&code)) {
    return a->k;
  }
  return std::get<ChunkedSpec>(code).n;
}

void Scenario::validate() const {
  try {
    channel.validate();
  } catch (const DomainError& e) {
    out_of_domain("channel.q", e.what());
  }
  if (!(p >= 0.0 && p <= 1.0)) out_of_domain("p", "must lie in [0, 1]");

  if (const auto* c = std::get_if<ChunkedSpec>(&code)) {
    if (!c->file) {
      if (c->n == 0) bad("code.n", "must be positive");
      if (!(c->theta > 0.0 && c->theta <= 1.0)) out_of_domain("code.theta", "must lie in (0, 1]");
      const double chunks = 1.0 / c->theta;
      if (std::abs(chunks - std::round(chunks)) > 1e-9) bad("code.theta", "1/theta must be an integer");
      const auto nc = static_cast<std::size_t>(std::round(chunks));
      if (c->n % nc != 0) bad("code.n", "must be divisible by 1/theta");
      if (c->num_messages < 2) bad("code.num_messages", "must be at least 2");
      if (c->num_keys < 1) bad("code.num_keys", "must be at least 1");
      double seqs = std::pow(static_cast<double>(c->num_keys), static_cast<double>(nc));
      if (seqs * c->num_messages > 1e8) {
        bad("code", "codebook too large to enumerate (messages * keys^chunks > 1e8)");
      }
    }
  } else {
    const auto& a = std::get<ArqSpec>(code);
    if (channel.kind != ChannelKind::Erasure) bad("code.type", "ARQ runs on the erasure channel only");
    if (!transmitter_feedback) bad("transmitter_feedback", "ARQ needs transmitter feedback");
    if (a.k == 0) bad("code.k", "must be positive");
    if (a.max_n && *a.max_n == 0) bad("code.max_n", "must be positive");
    if (!a.max_n && (p >= 1.0 || channel.q >= 1.0)) {
      bad("code.max_n", "required when p = 1 or q = 1");
    }
    if (fixed_message) bad("message", "ARQ draws its message bits; use \"uniform\"");
  }

  const auto& adv = adversary;
  if (adv.p_target && !(*adv.p_target >= 0.0 && *adv.p_target <= 1.0)) {
    out_of_domain("adversary.p_target", "must lie in [0, 1]");
  }
  if (adv.p_target && adv.kind != StrategyKind::Iid) {
    bad("adversary.p_target", "only used by the iid strategy");
  }
  if (adv.p_bar && adv.kind != StrategyKind::BabbleSnoopPush) {
    bad("adversary.p_bar", "only used by babble_snoop_push");
  }
  if (!(adv.epsilon > 0.0)) out_of_domain("adversary.epsilon", "must be positive");
  if (adv.kind == StrategyKind::WaitSnoopPush) {
    if (channel.kind != ChannelKind::Erasure) bad("adversary.strategy", "wait_snoop_push needs the erasure channel");
    if (is_arq()) bad("adversary.strategy", "snoop-then-push needs a chunked code");
  }
  if (adv.kind == StrategyKind::BabbleSnoopPush) {
    if (channel.kind != ChannelKind::Flip) bad("adversary.strategy", "babble_snoop_push needs the flip channel");
    if (is_arq()) bad("adversary.strategy", "snoop-then-push needs a chunked code");
    if (!(p < 0.25)) out_of_domain("p", "babble_snoop_push needs p < 1/4");
    if (adv.p_bar && !(*adv.p_bar >= 0.0 && *adv.p_bar <= p)) out_of_domain("adversary.p_bar", "must lie in [0, p]");
  }
  if (fixed_message) {
    if (const auto* c = std::get_if<ChunkedSpec>(&code); c && !c->file && *fixed_message >= c->num_messages) {
      bad("message.fixed", "out of range");
    }
  }
}

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  return from_json(detail::parse_json(json_text), base_dir);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scenario file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["channel"] = {{"kind", to_string(s.channel.kind)}, {"q", s.channel.q}};
  doc["p"] = s.p;
  if (const auto* c = std::get_if<ChunkedSpec>(&s.code)) {
    nlohmann::ordered_json code;
    code["type"] = "chunked";
    if (c->file) {
      code["file"] = c->file->string();
    } else {
      code["n"] = c->n;
      code["theta"] = c->theta;
      code["num_messages"] = c->num_messages;
      code["num_keys"] = c->num_keys;
      code["seed"] = c->seed ? nlohmann::ordered_json(*c->seed) : nlohmann::ordered_json(nullptr);
    }
    doc["code"] = code;
  } else {
    const auto& a = std::get<ArqSpec>(s.code);
    doc["code"] = {{"type", "arq"},
                   {"k", a.k},
                   {"max_n", a.max_n ? nlohmann::ordered_json(*a.max_n) : nlohmann::ordered_json(nullptr)}};
  }
  nlohmann::ordered_json adv;
  adv["strategy"] = to_string(s.adversary.kind);
  if (s.adversary.p_target) adv["p_target"] = *s.adversary.p_target;
  if (s.adversary.kind == StrategyKind::WaitSnoopPush || s.adversary.kind == StrategyKind::BabbleSnoopPush) {
    adv["epsilon"] = s.adversary.epsilon;
  }
  if (s.adversary.p_bar) adv["p_bar"] = *s.adversary.p_bar;
  doc["adversary"] = adv;
  doc["transmitter_feedback"] = s.transmitter_feedback;
  if (s.fixed_message) {
    doc["message"] = {{"fixed", *s.fixed_message}};
  } else {
    doc["message"] = "uniform";
  }
  return doc.dump(2) + "\n";
}

std::string scenario_key(const Scenario& s) {
  std::string key = std::string(to_string(s.channel.kind)) + "/q=" + detail::format_double(s.channel.q) +
                    "/p=" + detail::format_double(s.p);
  if (const auto* c = std::get_if<ChunkedSpec>(&s.code)) {
    if (c->file) {
      key += "/code=" + c->file->filename().string();
    } else {
      key += "/n=" + std::to_string(c->n) + "/M=" + std::to_string(c->num_messages) +
             "/K=" + std::to_string(c->num_keys);
    }
  } else {
    key += "/arq k=" + std::to_string(std::get<ArqSpec>(s.code).k);
  }
  key += "/";
  key += to_string(s.adversary.kind);
  if (s.fixed_message) {
    key += "/u=" + std::to_string(*s.fixed_message);
  }
  return key;
}

}  // namespace advchan::sim

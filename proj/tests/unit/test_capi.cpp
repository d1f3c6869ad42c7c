#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "advchan.h"

TEST_SUITE("capi") {

TEST_CASE("version and status strings") {
  CHECK(advchan_abi_version() == ADVCHAN_ABI_VERSION);
  CHECK(std::string(advchan_status_string(ADVCHAN_OK)) == "ok");
  CHECK(std::string(advchan_status_string(ADVCHAN_E_PARSE)) == "parse error");
}

TEST_CASE("capacity calls and error reporting") {
  double v = -1;
  CHECK(advchan_capacity_erasure(0.1, 0.3, &v) == ADVCHAN_OK);
  CHECK(std::abs(v - 0.56) < 1e-15);
  CHECK(std::string(advchan_last_error()).empty());
  CHECK(advchan_capacity_erasure_feedback(0.5, 0.5, &v) == ADVCHAN_OK);
  CHECK(v == 0.25);
  CHECK(advchan_capacity_erasure(2.0, 0.3, &v) == ADVCHAN_E_DOMAIN);
  CHECK(std::string(advchan_last_error()).find("p") != std::string::npos);
  CHECK(advchan_capacity_erasure(0.1, 0.3, nullptr) == ADVCHAN_E_INVALID_ARG);

  advchan_flip_bound b{};
  CHECK(advchan_upper_bound_flip_numeric(0.15, 0.1, 1e-9, &b) == ADVCHAN_OK);
  CHECK(b.regime == ADVCHAN_REGIME_LINEAR);
  double closed = 0;
  CHECK(advchan_upper_bound_flip_closed(0.15, 0.1, &closed) == ADVCHAN_OK);
  CHECK(std::abs(b.value - closed) < 1e-7);

  double p0 = 0, residual = 1;
  CHECK(advchan_p0_solve(0.0, 1e-12, &p0, &residual) == ADVCHAN_OK);
  CHECK(std::abs(p0 - 0.08035662239291943) < 1e-10);
  CHECK(advchan_p0_solve(0.5, 1e-12, &p0, &residual) == ADVCHAN_E_DOMAIN);
}

TEST_CASE("curve CSV") {
  const double qs[] = {0.3};
  advchan_curve_request req{"erasure", qs, 1, 0.0, 0.5, 0.1};
  char* csv = nullptr;
  REQUIRE(advchan_capacity_csv(&req, &csv) == ADVCHAN_OK);
  const std::string text(csv);
  advchan_free_string(csv);
  CHECK(text.rfind("model,q,p,value,note\n", 0) == 0);
  CHECK(text.find("erasure,0.3,0.5,0,") != std::string::npos);
  req.model = "nonsense";
  CHECK(advchan_capacity_csv(&req, &csv) == ADVCHAN_E_CONFIG);
}

TEST_CASE("code handle lifecycle") {
  advchan_code* code = nullptr;
  REQUIRE(advchan_code_build(16, 0.25, 4, 2, 42, &code) == ADVCHAN_OK);
  advchan_code_info info{};
  REQUIRE(advchan_code_info_get(code, &info) == ADVCHAN_OK);
  CHECK(info.n == 16);
  CHECK(info.num_chunks == 4);
  CHECK(info.num_messages == 4);

  char* json = nullptr;
  REQUIRE(advchan_code_to_json(code, &json) == ADVCHAN_OK);
  advchan_code* copy = nullptr;
  REQUIRE(advchan_code_from_json(json, &copy) == ADVCHAN_OK);
  char* json2 = nullptr;
  REQUIRE(advchan_code_to_json(copy, &json2) == ADVCHAN_OK);
  CHECK(std::strcmp(json, json2) == 0);
  advchan_free_string(json);
  advchan_free_string(json2);

  const uint32_t keys[] = {0, 1, 0, 1};
  std::vector<uint8_t> x(16);
  REQUIRE(advchan_code_encode(code, 2, keys, 4, x.data(), x.size()) == ADVCHAN_OK);
  advchan_decode_outcome out{};
  REQUIRE(advchan_decode(copy, x.data(), 16, 0.0, 0.0, &out) == ADVCHAN_OK);
  CHECK(out.has_t_star == 1);
  if (out.result == ADVCHAN_DECODED) CHECK(out.message == 2);

  std::vector<uint8_t> erased(16, 2);
  REQUIRE(advchan_decode(code, erased.data(), 16, 0.1, 0.1, &out) == ADVCHAN_OK);
  CHECK(out.result != ADVCHAN_DECODED);
  erased[0] = 7;
  CHECK(advchan_decode(code, erased.data(), 16, 0.1, 0.1, &out) == ADVCHAN_E_INVALID_ARG);
  CHECK(advchan_code_encode(code, 9, keys, 4, x.data(), x.size()) == ADVCHAN_E_DOMAIN);
  CHECK(advchan_code_build(16, 0.3, 4, 2, 1, &copy) != ADVCHAN_OK);

  advchan_code_free(code);
  advchan_code_free(copy);
  advchan_code_free(nullptr);
  CHECK(advchan_code_from_json("{", &code) == ADVCHAN_E_PARSE);
}

TEST_CASE("scenario handle and estimates") {
  const char* text = R"({"schema_version":1,"channel":{"kind":"erasure","q":0.0},"p":0.0,
    "code":{"type":"chunked","n":32,"theta":0.25,"num_messages":4,"num_keys":2,"seed":7},
    "adversary":{"strategy":"passive"}})";
  advchan_scenario* s = nullptr;
  REQUIRE(advchan_scenario_parse(text, nullptr, &s) == ADVCHAN_OK);
  advchan_error_estimate est{};
  REQUIRE(advchan_estimate_error(s, 20, 1, 1, &est) == ADVCHAN_OK);
  CHECK(est.trials == 20);
  CHECK(est.errors == 0);
  advchan_trial_outcome t{};
  REQUIRE(advchan_run_trial(s, 5, &t) == ADVCHAN_OK);
  CHECK(t.success == 1);
  CHECK(t.channel_uses == 32);

  char* csv = nullptr;
  REQUIRE(advchan_simulate_csv(s, 20, 1, &csv) == ADVCHAN_OK);
  CHECK(std::string(csv).find(",20,0,0,0,") != std::string::npos);
  advchan_free_string(csv);

  CHECK(advchan_num_events() <= ADVCHAN_MAX_EVENTS);
  CHECK(std::string(advchan_event_name(0)) == "confusion_success");
  CHECK(advchan_event_name(advchan_num_events()) == nullptr);

  char* demo = nullptr;
  CHECK(advchan_attack_demo(s, 1, &demo) == ADVCHAN_E_CONFIG);
  advchan_scenario_free(s);

  CHECK(advchan_scenario_parse("{", nullptr, &s) == ADVCHAN_E_PARSE);
  CHECK(advchan_scenario_load("/nonexistent/file.json", &s) == ADVCHAN_E_IO);
  double lo = 0, hi = 0;
  CHECK(advchan_wilson_interval(0, 100, &lo, &hi) == ADVCHAN_OK);
  CHECK(hi == doctest::Approx(0.037).epsilon(0.01));
}

}  // TEST_SUITE

#include <string>

#include "doctest.h"
#include "vortmix/config.hpp"
#include "vortmix/error.hpp"

using namespace vortmix;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults and overrides") {
  const auto c = parse_config("{}");
  CHECK(c.grid.kmax == 8);
  CHECK(c.grid.n_force == 2);
  CHECK(c.integrator.dt == 1e-3);
  CHECK(c.master_seed == 1);

  const auto d = parse_config(R"({"grid": {"kmax": 4}, "integrator": {"dt": 0.01, "t_end": 3},
                                  "mixing": {"mode": [0, 1], "lags": [0, 0.5]}, "master_seed": 42})");
  CHECK(d.grid.kmax == 4);
  CHECK(d.integrator.t_end == 3.0);
  CHECK(d.mixing.mode == std::pair{0, 1});
  CHECK(d.master_seed == 42);
  CHECK(d.hash() != c.hash());
  CHECK(parse_config(d.canonical_json()).canonical_json() == d.canonical_json());
}

TEST_CASE("unknown keys and bad values are rejected with the field name") {
  CHECK(code_of(R"({"grid": {"kmaxx": 4}})") == ErrorCode::kConfig);
  CHECK(message_of(R"({"grid": {"kmaxx": 4}})").find("grid.kmaxx") != std::string::npos);
  CHECK(message_of(R"({"extra": 1})").find("extra") != std::string::npos);
  CHECK(message_of(R"({"couple": {"second": {"enstrophi": 1}}})").find("couple.second.enstrophi") !=
        std::string::npos);
  CHECK(message_of(R"({"integrator": {"dt": 0.003}})").find("integrator.dt") != std::string::npos);
  const auto loose = parse_config(R"({"integrator": {"dt": 0.5, "t_end": 1.25}})");
  CHECK_THROWS_AS(loose.check_times("simulate"), Error);
  try {
    loose.check_times("girsanov-check");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("girsanov.t_end") != std::string::npos);
  }
  CHECK_NOTHROW(loose.check_times("diagnostics"));
  CHECK(code_of(R"({"grid": {"kmax": "8"}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"grid": {"kmax": 2.5}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"forcing": {"R": -1}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"partition": {"beta": 1, "beta_prime": 2}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"mixing": {"mode": [-1, 0]}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"mixing": {"lags": [0.15]}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"girsanov": {"t_end": -1}})") == ErrorCode::kConfig);
  CHECK(code_of(R"({"master_seed": -3})") == ErrorCode::kConfig);
  CHECK(code_of("{not json") == ErrorCode::kConfig);
  CHECK(code_of("[1, 2]") == ErrorCode::kConfig);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("flattened manifest keys") {
  const auto c = parse_config(R"({"forcing": {"R": 2}})");
  bool found = false;
  for (const auto& [key, value] : c.flattened()) {
    if (key == "forcing.R") {
      found = true;
      CHECK(value == "2.0");
    }
  }
  CHECK(found);
  CHECK(c.resolve("k.txt") == "k.txt");
  CHECK(parse_config("{}", "/data").resolve("k.txt") == "/data/k.txt");
  CHECK(parse_config("{}", "/data").resolve("/abs/k.txt") == "/abs/k.txt");
}

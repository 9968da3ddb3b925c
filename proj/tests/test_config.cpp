#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "qnet/config.hpp"

using namespace qnet;
using nlohmann::json;

TEST_CASE("minimal harmonic config is valid with defaults", "[config]") {
  json j = {{"engine", "harmonic"},
            {"N", 50},
            {"J", 1.0},
            {"Np", 10},
            {"connectivity", "all_to_all"}};
  auto cfg = parse_config(j);
  REQUIRE(cfg.engine == EngineKind::Harmonic);
  REQUIRE(cfg.num_sites == 50);
  REQUIRE(cfg.initial_bosons == 10);
  REQUIRE(cfg.t_max == 50.0);
  REQUIRE(cfg.samples == 5000);
  REQUIRE(cfg.integrator.dt == 1e-3);
  REQUIRE(cfg.connectivity.is_all_to_all_for(50));
  REQUIRE(cfg.rotating_frame);
}

TEST_CASE("lindblad engine without rates fails naming the field", "[config]") {
  json j = {{"engine", "lindblad"}, {"model", "jc"}, {"N", 3}, {"Np", 5}};
  try {
    parse_config(j);
    FAIL("expected validation to fail");
  } catch (const ConfigError& e) {
    REQUIRE(e.field == "rates");
  }
}

TEST_CASE("quantum engine requires a model selector", "[config]") {
  json j = {{"engine", "quantum"}, {"N", 3}, {"Np", 4}};
  try {
    parse_config(j);
    FAIL("expected validation to fail");
  } catch (const ConfigError& e) {
    REQUIRE(e.field == "model");
  }
}

TEST_CASE("unknown keys are rejected in strict mode", "[config]") {
  json j = {{"engine", "harmonic"}, {"N", 4}, {"unknown_knob", 1}};
  try {
    parse_config(j);
    FAIL("expected strict parsing to fail");
  } catch (const ConfigError& e) {
    REQUIRE(e.field == "unknown_knob");
  }
  json nested = {{"engine", "harmonic"},
                 {"N", 4},
                 {"disorder", {{"delta_omega", 0.1}, {"weird", 2}}}};
  REQUIRE_THROWS_AS(parse_config(nested), ConfigError);
}

TEST_CASE("contradictory settings are rejected", "[config]") {
  // g on a Bose-Hubbard engine
  json j1 = {{"engine", "semiclassical-bh"}, {"N", 4}, {"g", 2.0}};
  REQUIRE_THROWS_AS(parse_config(j1), ConfigError);
  // U on a Jaynes-Cummings engine
  json j2 = {{"engine", "semiclassical-jc"}, {"N", 4}, {"U", 2.0}};
  REQUIRE_THROWS_AS(parse_config(j2), ConfigError);
  // rates outside the lindblad engine
  json j3 = {{"engine", "harmonic"}, {"N", 4}, {"rates", {{"kappa", 0.1}}}};
  REQUIRE_THROWS_AS(parse_config(j3), ConfigError);
  // sector restriction on an open engine
  json j4 = {{"engine", "lindblad"},
             {"model", "jc"},
             {"N", 3},
             {"sector", true},
             {"rates", {{"kappa", 0.01}}}};
  REQUIRE_THROWS_AS(parse_config(j4), ConfigError);
  // qubit decay on a Bose-Hubbard open system
  json j5 = {{"engine", "lindblad"},
             {"model", "bh"},
             {"N", 3},
             {"rates", {{"kappa", 0.01}, {"gamma", 0.01}}}};
  try {
    parse_config(j5);
    FAIL("expected validation to fail");
  } catch (const ConfigError& e) {
    REQUIRE(e.field == "rates");
  }
}

TEST_CASE("flag overrides beat file values", "[config]") {
  json file = {{"engine", "quantum"}, {"model", "jc"},
               {"N", 5},            {"Np", 10},
               {"g", 2.0},          {"seed", 7}};
  json flags = {{"g", 40.0}, {"seed", 9}};
  auto cfg = parse_config(file, flags);
  REQUIRE(cfg.coupling_g == 40.0);
  REQUIRE(cfg.seed == 9);
  REQUIRE(cfg.num_sites == 5);

  // nested override merges instead of clobbering
  json file2 = {{"engine", "lindblad"},
                {"model", "jc"},
                {"N", 3},
                {"Np", 5},
                {"rates", {{"kappa", 0.01}, {"gamma", 0.01}}}};
  json flags2 = {{"rates", {{"gamma", 0.05}}}};
  auto cfg2 = parse_config(file2, flags2);
  REQUIRE(cfg2.rates->kappa == 0.01);
  REQUIRE(cfg2.rates->gamma == 0.05);
}

TEST_CASE("validation bounds", "[config]") {
  REQUIRE_THROWS_AS(parse_config(json{{"engine", "harmonic"}, {"N", 1}}),
                    ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(json{{"engine", "harmonic"}, {"N", 4}, {"t_max", -1.0}}),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(json{{"engine", "harmonic"}, {"N", 4}, {"samples", 1}}),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(json{{"engine", "nonsense"}, {"N", 4}}), ConfigError);
}

TEST_CASE("config echo round-trips through the parser", "[config]") {
  json j = {{"engine", "lindblad"},
            {"model", "jc"},
            {"N", 3},
            {"Np", 5},
            {"g", 40.0},
            {"t_max", 200.0},
            {"density_matrix_cap", 256},
            {"rates", {{"kappa", 0.01}, {"gamma", 0.01}, {"gamma_phi", 0.0}}}};
  auto cfg = parse_config(j);
  auto echo = to_json(cfg);
  // the echo carries extra resolved keys; re-parsing it must reproduce the
  // same resolved config
  json echo_as_input = echo;
  echo_as_input.erase("version");
  echo_as_input.erase("omega_q");  // resolved field, not an input default
  auto cfg2 = parse_config(echo_as_input);
  REQUIRE(cfg2.engine == cfg.engine);
  REQUIRE(cfg2.coupling_g == cfg.coupling_g);
  REQUIRE(cfg2.rates->kappa == cfg.rates->kappa);
  REQUIRE(cfg2.t_max == cfg.t_max);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "../support.hpp"

using namespace triharm;
using namespace triharm::testing;

namespace {

ExperimentConfig small_ratio() {
  ExperimentConfig c = ExperimentConfig::load(TRIHARM_SOURCE_DIR "/configs/ratio_1_4_4.json");
  c.inputs.count = 3;
  return c;
}

std::string csv(const RatioReport& r) {
  std::ostringstream os;
  r.write_csv(os, false);
  return os.str();
}

}  // namespace

TEST_CASE("config round trip") {
  for (const char* name : {"ratio_1_4_4", "ratio_2-3_4_4", "moment_vanishing", "moment_unmodified"}) {
    ExperimentConfig c = ExperimentConfig::load(std::string(TRIHARM_SOURCE_DIR "/configs/") + name + ".json");
    CHECK(ExperimentConfig::from_json(c.to_json()) == c);
    CHECK(ExperimentConfig::from_json(c.to_json()).to_json() == c.to_json());
  }
  ExperimentConfig d;
  d.p = {"2/3", "inf", "4"};
  d.inputs.band = {0.5, 1.5};
  d.dilations = {"1"};
  CHECK(ExperimentConfig::from_json(d.to_json()) == d);
  CHECK(d.exponents()[1] == INFINITY);
  CHECK(d.output_p() == doctest::Approx(1.0 / (1.5 + 0.25)));
}

TEST_CASE("malformed configs") {
  CHECK_THROWS_AS(ExperimentConfig::from_json("{"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"grid": {"N": "many"}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"inputs": {"zero_slot": 5}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"inputs": {"family": "noise"}})"), UsageError);
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), UsageError);
}

TEST_CASE("surrogates are band limited and dilate with the H^p factor") {
  GridSpec s = GridSpec::make(1, 1024, 64);
  Surrogate a = make_surrogate(s, {0.5, 2.0}, 3, 1.0, 1.0);
  for (std::size_t i = 0; i < a.F.size(); ++i) {
    double r = s.frequency_radius(i);
    if (r < 0.5 || r > 2.0) CHECK(a.F[i] == cplx{});
  }
  CHECK(rel(inverse_transform(a.F), a.f) < 1e-14);
  for (const cplx& v : a.f.values()) CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-14));
  // t^{1/2} f(t .) keeps the L^2 norm; |f|^2 is smooth, so the Riemann sum is exact enough
  Surrogate c = make_surrogate(s, {0.5, 2.0}, 3, 1.0, 0.5), b = make_surrogate(s, {0.5, 2.0}, 3, 2.0, 0.5);
  CHECK(lp_norm(b.f, 2.0) == doctest::Approx(lp_norm(c.f, 2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(make_surrogate(s, {0.5, 2.0}, 3, 8.0, 1.0), DomainError);
}

TEST_CASE("ratio experiment is deterministic across widths") {
  ExperimentConfig c = small_ratio();
  c.threads = 1;
  RatioReport one = run_ratio_experiment(c);
  c.threads = 8;
  RatioReport eight = run_ratio_experiment(c);
  CHECK(csv(one) == csv(eight));
  CHECK(one.rows.size() == 9);
  CHECK(one.all_finite);
  CHECK(one.max / one.median <= 100);
  CHECK(one.dilation_variation <= 8);
  std::string text = csv(one);
  CHECK(text.rfind("# schema=1\n", 0) == 0);
  CHECK(text.find("generated_at") == std::string::npos);
  std::ostringstream stamped;
  one.write_csv(stamped, true);
  CHECK(stamped.str().find("# generated_at=") != std::string::npos);
}

TEST_CASE("a zero input skips its row") {
  ExperimentConfig c = small_ratio();
  c.inputs.count = 1;
  c.dilations = {"1"};
  c.inputs.zero_slot = 1;
  RatioReport r = run_ratio_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].note == "zero denominator");
  CHECK(csv(r).find("zero denominator") != std::string::npos);
}

TEST_CASE("regularity below the threshold is refused") {
  ExperimentConfig c = small_ratio();
  c.s = "1";
  CHECK_THROWS_AS(run_ratio_experiment(c), ThresholdError);
}

TEST_CASE("moment experiment with a zero input") {
  ExperimentConfig c = ExperimentConfig::load(TRIHARM_SOURCE_DIR "/configs/moment_vanishing.json");
  c.inputs.count = 1;
  c.inputs.zero_slot = 0;
  MomentExperimentReport r = run_moment_experiment(c);
  CHECK(r.all_pass);
  CHECK(r.worst == 0.0);
  CHECK(r.order == 1);
  for (const auto& row : r.rows) CHECK(row.max_relative == 0.0);
}

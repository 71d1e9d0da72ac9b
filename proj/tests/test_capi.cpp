#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpskit/cpskit.h"

using nlohmann::json;

namespace {

json take_text(cpskit_text* text) {
  json j = json::parse(cpskit_text_data(text));
  cpskit_text_free(text);
  return j;
}

int column_index(const cpskit_table* t, const std::string& name) {
  for (size_t c = 0; c < cpskit_table_cols(t); ++c) {
    if (name == cpskit_table_column_name(t, c)) return static_cast<int>(c);
  }
  return -1;
}

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::strlen(cpskit_version()) > 0);
  CHECK(std::string(cpskit_status_name(CPSKIT_OK)) == "ok");
  CHECK(std::string(cpskit_status_name(CPSKIT_ERR_NOT_UNITARY)).size() > 0);
  CHECK(cpskit_set_threads(3) == CPSKIT_OK);
  CHECK(cpskit_threads() == 3);
  CHECK(cpskit_set_threads(0) == CPSKIT_OK);
  CHECK(cpskit_threads() >= 1);
}

TEST_CASE("basis handles and errors") {
  cpskit_basis* b = nullptr;
  REQUIRE(cpskit_basis_new(2, 0, 1.0, 0.0, &b) == CPSKIT_OK);
  CHECK(cpskit_basis_dim(b) == 2);
  CHECK(cpskit_basis_n0(b) == 0);
  double gq = 0.0;
  CHECK(cpskit_basis_gq(b, &gq) == CPSKIT_OK);
  CHECK(std::abs(gq - std::sqrt(2.0)) < 1e-15);
  double re = 1.0;
  double im = 1.0;
  CHECK(cpskit_basis_gram(b, 0, 1, &re, &im) == CPSKIT_OK);
  CHECK(std::abs(re) < 1e-15);
  CHECK(std::abs(im) < 1e-15);
  CHECK(cpskit_basis_gram(b, 0, 2, &re, &im) == CPSKIT_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cpskit_last_error()) > 0);
  cpskit_basis_free(b);

  cpskit_basis* bad = nullptr;
  CHECK(cpskit_basis_new(0, 0, 1.0, 0.0, &bad) != CPSKIT_OK);
  CHECK(bad == nullptr);
  CHECK(cpskit_basis_new(4, 0, 0.0, 0.0, &bad) != CPSKIT_OK);
  CHECK(cpskit_basis_new(4, 0, 1.0, 0.0, nullptr) == CPSKIT_ERR_INVALID_ARGUMENT);
  cpskit_basis_free(nullptr);
}

TEST_CASE("states through the C interface") {
  cpskit_basis* b = nullptr;
  REQUIRE(cpskit_basis_new(4, 0, 1.2, 0.3, &b) == CPSKIT_OK);
  const std::vector<double> psi{0.5, 0.0, 0.1, -0.2, 0.0, 0.3, 0.7, 0.0};
  cpskit_state* s = nullptr;
  REQUIRE(cpskit_state_from_fock(b, psi.data(), 0, &s) == CPSKIT_OK);
  std::vector<double> back(8);
  CHECK(cpskit_state_to_fock(s, back.data()) == CPSKIT_OK);
  for (size_t i = 0; i < 8; ++i) CHECK(std::abs(back[i] - psi[i]) < 1e-13);
  double norm = 0.0;
  CHECK(cpskit_state_norm_sq(s, &norm) == CPSKIT_OK);
  double direct = 0.0;
  for (double v : psi) direct += v * v;
  CHECK(std::abs(norm - direct) < 1e-13);

  cpskit_text* text = nullptr;
  REQUIRE(cpskit_state_json(s, &text) == CPSKIT_OK);
  const json j = take_text(text);
  CHECK(j["d"] == 4);
  CHECK(j["convention"] == "unnormalized");
  cpskit_state_free(s);

  cpskit_state* m = nullptr;
  REQUIRE(cpskit_state_member(b, 1, &m) == CPSKIT_OK);
  std::vector<double> c(8);
  CHECK(cpskit_state_coeffs(m, c.data()) == CPSKIT_OK);
  CHECK(c[2] == 1.0);
  CHECK(c[0] == 0.0);
  CHECK(cpskit_state_norm_sq(m, &norm) == CPSKIT_OK);
  CHECK(std::abs(norm - 1.0) < 1e-14);
  cpskit_state_free(m);
  CHECK(cpskit_state_member(b, 4, &m) != CPSKIT_OK);
  cpskit_basis_free(b);
}

TEST_CASE("anharmonic table") {
  cpskit_anharmonic_config cfg;
  cpskit_anharmonic_defaults(&cfg);
  CHECK(cfg.d == 32);
  cfg.d = 16;
  cfg.steps = 40;
  cpskit_table* t = nullptr;
  REQUIRE(cpskit_anharmonic(&cfg, &t) == CPSKIT_OK);
  CHECK(cpskit_table_rows(t) == 41);
  CHECK(cpskit_table_cols(t) == 8);
  CHECK(std::string(cpskit_table_column_name(t, 0)) == "t");
  CHECK(cpskit_table_column_name(t, 8) == nullptr);
  CHECK(cpskit_table_column(t, 8) == nullptr);
  const double* tt = cpskit_table_column(t, 0);
  CHECK(tt[0] == 0.0);
  CHECK(std::abs(tt[40] - cfg.t_max) < 1e-12);
  const json summary = json::parse(cpskit_table_summary(t));
  const double* dev = cpskit_table_column(t, static_cast<size_t>(column_index(t, "deviation")));
  double worst = 0.0;
  for (size_t i = 0; i < 41; ++i) worst = std::max(worst, dev[i]);
  CHECK(summary["max_deviation"].get<double>() == worst);
  cpskit_table_free(t);

  cfg.steps = 0;
  CHECK(cpskit_anharmonic(&cfg, &t) == CPSKIT_ERR_INVALID_ARGUMENT);
  cfg.steps = 10;
  cfg.d = 9;
  cfg.picture = CPSKIT_PICTURE_HYBRID;
  CHECK(cpskit_anharmonic(&cfg, &t) == CPSKIT_OK);
  cpskit_table_free(t);
}

TEST_CASE("fringe table") {
  cpskit_fringe_config cfg;
  cpskit_fringe_defaults(&cfg);
  CHECK(cfg.points == 500);
  cfg.points = 41;
  cfg.method = CPSKIT_NOISE_EXACT;
  cpskit_table* t = nullptr;
  REQUIRE(cpskit_cat_fringes(&cfg, &t) == CPSKIT_OK);
  CHECK(cpskit_table_rows(t) == 41);
  CHECK(column_index(t, "analytic") >= 0);
  CHECK(std::isnan(cpskit_table_column(t, 2)[0]));
  cpskit_table_free(t);

  cfg.sigma = 0.5;
  cfg.method = CPSKIT_NOISE_MC;
  cfg.samples = 2000;
  REQUIRE(cpskit_cat_fringes(&cfg, &t) == CPSKIT_OK);
  CHECK(column_index(t, "analytic") == -1);
  CHECK(cpskit_table_column(t, 2)[10] > 0.0);
  CHECK(json::parse(cpskit_table_summary(t))["method"] == "mc");
  cpskit_table_free(t);

  cfg.d = 7;
  CHECK(cpskit_cat_fringes(&cfg, &t) != CPSKIT_OK);
}

TEST_CASE("basis info table") {
  const double a2[] = {3.0, 8.0};
  cpskit_table* t = nullptr;
  REQUIRE(cpskit_basis_info(8, 0, a2, 2, &t) == CPSKIT_OK);
  CHECK(cpskit_table_rows(t) == 5);
  CHECK(cpskit_table_cols(t) == 5);
  CHECK(cpskit_table_column(t, 1)[0] == doctest::Approx(1.0));
  cpskit_table_free(t);
  CHECK(cpskit_basis_info(8, 0, nullptr, 1, &t) == CPSKIT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("boson sampling and permanents") {
  const double s = 1.0 / std::sqrt(2.0);
  const std::string hom = json{{"m", 2}, {"re", {{s, s}, {s, -s}}}}.dump();
  const int modes[] = {0, 1};
  cpskit_text* text = nullptr;
  REQUIRE(cpskit_boson_sampling(hom.c_str(), modes, 2, modes, 2, CPSKIT_SAMPLING_EXACT, 0, 0,
                                &text) == CPSKIT_OK);
  const json r = take_text(text);
  CHECK(std::abs(r["value"].get<double>()) < 1e-15);
  CHECK(r["stderr"].is_null());
  CHECK(std::abs(r["oracle"].get<double>()) < 1e-15);

  REQUIRE(cpskit_boson_sampling(hom.c_str(), modes, 2, modes, 2, CPSKIT_SAMPLING_MC, 500, 9,
                                &text) == CPSKIT_OK);
  const json mc = take_text(text);
  CHECK(mc["method"] == "mc");
  CHECK(mc["samples"] == 500);
  CHECK_FALSE(mc.contains("oracle"));

  const std::string skew = json{{"m", 2}, {"re", {{1.0, 0.1}, {0.0, 1.0}}}}.dump();
  CHECK(cpskit_boson_sampling(skew.c_str(), modes, 2, modes, 2, CPSKIT_SAMPLING_EXACT, 0, 0,
                              &text) == CPSKIT_ERR_NOT_UNITARY);
  CHECK(cpskit_boson_sampling("{", modes, 2, modes, 2, CPSKIT_SAMPLING_EXACT, 0, 0, &text) ==
        CPSKIT_ERR_IO);
  const int dup[] = {1, 1};
  CHECK(cpskit_boson_sampling(hom.c_str(), dup, 2, modes, 2, CPSKIT_SAMPLING_EXACT, 0, 0,
                              &text) != CPSKIT_OK);

  const double ones[] = {1, 0, 1, 0, 1, 0, 1, 0};
  double re = 0.0;
  double im = 0.0;
  CHECK(cpskit_permanent(ones, 2, &re, &im) == CPSKIT_OK);
  CHECK(re == doctest::Approx(2.0));
  CHECK(im == 0.0);
  CHECK(cpskit_permanent(ones, 0, &re, &im) != CPSKIT_OK);
}

TEST_CASE("validation entry point") {
  int passed = -1;
  cpskit_text* text = nullptr;
  REQUIRE(cpskit_validate("prep", &passed, &text) == CPSKIT_OK);
  const json j = take_text(text);
  CHECK(passed == 1);
  CHECK(j["passed"] == true);
  CHECK_FALSE(j["checks"].empty());
  CHECK(cpskit_validate("nope", &passed, &text) == CPSKIT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(cpskit_last_error()).find("nope") != std::string::npos);
}

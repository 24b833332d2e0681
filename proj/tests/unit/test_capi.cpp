#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jumpfrac/jumpfrac.h"

namespace fs = std::filesystem;

namespace {

std::string serialized(const jf_config* c) {
  size_t needed = 0;
  REQUIRE(jf_config_serialize(c, nullptr, 0, &needed) == JF_OK);
  std::string s(needed, '\0');
  REQUIRE(jf_config_serialize(c, s.data(), s.size() + 1, &needed) == JF_OK);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("C API: config lifecycle and error codes") {
  jf_config* c = nullptr;
  REQUIRE(jf_config_parse("[model]\nbeta_tilde = 1.2\n", &c) == JF_OK);
  CHECK(std::string(jf_last_error()).empty());
  CHECK(jf_config_set_option(c, "sim.z_min", "0.001") == JF_OK);
  CHECK(jf_config_set_option(c, "model.beta_tilde", "2.5") == JF_ERR_VALIDATION);
  CHECK(std::string(jf_last_error()).find("beta_band") != std::string::npos);
  CHECK(jf_config_set_seed(c, 77) == JF_OK);
  const std::string text = serialized(c);
  CHECK(text.find("z_min = 0.001") != std::string::npos);

  jf_config* back = nullptr;
  REQUIRE(jf_config_parse(text.c_str(), &back) == JF_OK);
  CHECK(serialized(back) == text);
  jf_config_free(back);

  char tiny[4];
  size_t needed = 0;
  CHECK(jf_config_serialize(c, tiny, sizeof tiny, &needed) == JF_OK);
  CHECK(needed == text.size());
  CHECK(std::string(tiny) == text.substr(0, 3));
  jf_config_free(c);

  jf_config* bad = nullptr;
  CHECK(jf_config_parse("[nosuch]\n", &bad) == JF_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(jf_config_parse("[model]\nb = 1\nb = 2\n", &bad) == JF_ERR_VALIDATION);
  CHECK(jf_config_load("definitely/missing.ini", &bad) != JF_OK);
  CHECK(jf_config_parse(nullptr, &bad) == JF_ERR_ARGUMENT);
  jf_config_free(nullptr);
}

TEST_CASE("C API: expressions") {
  jf_expr* e = nullptr;
  REQUIRE(jf_expr_parse("1 + 2 * x", 0, &e) == JF_OK);
  double v = 0.0;
  CHECK(jf_expr_eval(e, 3.0, 0.0, &v) == JF_OK);
  CHECK(v == 7.0);
  jf_expr_free(e);
  CHECK(jf_expr_parse("z", 0, &e) == JF_ERR_PARSE);
  REQUIRE(jf_expr_parse("x*z", 1, &e) == JF_OK);
  CHECK(jf_expr_eval(e, 2.0, 5.0, &v) == JF_OK);
  CHECK(v == 10.0);
  jf_expr_free(e);
  REQUIRE(jf_expr_parse("1 / x", 0, &e) == JF_OK);
  CHECK(jf_expr_eval(e, 0.0, 0.0, &v) == JF_ERR_NUMERICAL);
  jf_expr_free(e);
}

TEST_CASE("C API: points, models and paths") {
  jf_points* ps = nullptr;
  REQUIRE(jf_points_sample(1.0, 1e-3, jf_derive_seed(5, "points", 0), &ps) == JF_OK);
  const size_t n = jf_points_count(ps);
  CHECK(n > 0);
  for (size_t i = 0; i < n; ++i) {
    double t = 0.0, z = 0.0;
    REQUIRE(jf_points_get(ps, i, &t, &z) == JF_OK);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    CHECK(std::fabs(z) > 1e-3);
  }
  double t = 0.0, z = 0.0;
  CHECK(jf_points_get(ps, n, &t, &z) == JF_ERR_ARGUMENT);
  double rate = 0.0;
  CHECK(jf_points_approx_rate(ps, 0.5, 16.0, &rate) == JF_OK);
  CHECK(rate >= 1.0);

  jf_model* m = nullptr;
  CHECK(jf_model_create_builtin(nullptr, "0", "3.0", 0.0, &m) == JF_ERR_VALIDATION);
  REQUIRE(jf_model_create_builtin("ZERO", "0", "1.2", 0.0, &m) == JF_OK);
  jf_path* p = nullptr;
  REQUIRE(jf_path_simulate(m, ps, 1.0 / 1024, 9, &p) == JF_OK);
  CHECK(jf_path_size(p) >= 1025);
  // Pure-jump builtin with zero drift: the terminal value is the sum of the marks.
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    jf_points_get(ps, i, &t, &z);
    sum += (z > 0 ? 1.0 : -1.0) * std::pow(std::fabs(z), 1.0 / 1.2);
  }
  double tt = 0.0, value = 0.0, left = 0.0;
  int jump = 0;
  REQUIRE(jf_path_get(p, jf_path_size(p) - 1, &tt, &value, &left, &jump) == JF_OK);
  CHECK(tt == 1.0);
  CHECK(value == doctest::Approx(sum).epsilon(1e-9).scale(1.0));

  const fs::path dir = fs::temp_directory_path() / "jumpfrac_capi_test";
  fs::create_directories(dir);
  CHECK(jf_path_write_csv(p, (dir / "path.csv").string().c_str()) == JF_OK);
  CHECK(jf_points_write_csv(ps, (dir / "points.csv").string().c_str()) == JF_OK);
  CHECK(slurp(dir / "path.csv").rfind("t,", 0) == 0);
  CHECK(jf_points_write_csv(ps, "/nonexistent/dir/points.csv") == JF_ERR_IO);
  fs::remove_all(dir);

  jf_path_free(p);
  jf_model_free(m);
  jf_points_free(ps);

  jf_model* custom = nullptr;
  CHECK(jf_model_create_custom(nullptr, "0", "sign(z)*pow(abs(z),0.8)", 0.0, &custom) == JF_OK);
  jf_model_free(custom);
}

TEST_CASE("C API: theory helpers") {
  double h = 0.0;
  CHECK(jf_theoretical_exponent(1.5, 2.0, 1, &h) == JF_OK);
  CHECK(h == doctest::Approx(1.0 / 3.0));
  CHECK(jf_theoretical_exponent(1.5, 1.0, 0, &h) == JF_OK);
  CHECK(h == 0.5);
  double d = 0.0;
  CHECK(jf_pointwise_spectrum(1, 1.5, 1.5, 1.0, 0, 0, 0, 0.5, &d) == JF_OK);
  CHECK(d == doctest::Approx(0.75));
  CHECK(jf_pointwise_spectrum(1, 1.5, 1.5, 1.0, 0, 0, 0, 1.0, &d) == JF_OK);
  CHECK(std::isinf(d));
  CHECK(d < 0);
  CHECK(jf_pointwise_spectrum(1, 1.5, 1.5, 1.0, 0, 0, 0, 0.5, nullptr) == JF_ERR_ARGUMENT);

  const std::vector<double> a{1, 2, 3}, b{10, 11};
  double stat = 0.0, p = 0.0;
  CHECK(jf_ks_two_sample(a.data(), a.size(), b.data(), b.size(), &stat, &p) == JF_OK);
  CHECK(stat == 1.0);
  CHECK(jf_ks_two_sample(a.data(), 0, b.data(), b.size(), &stat, &p) == JF_ERR_VALIDATION);
  CHECK(jf_derive_seed(1, "paths", 0) != jf_derive_seed(1, "paths", 1));
}

TEST_CASE("C API: run a subcommand") {
  jf_config* c = nullptr;
  REQUIRE(jf_config_parse("[model]\nbeta_tilde = 1.2\n[sim]\nz_min = 0.01\n", &c) == JF_OK);
  const fs::path dir = fs::temp_directory_path() / "jumpfrac_capi_run";
  fs::remove_all(dir);
  REQUIRE(jf_config_set_output_dir(c, dir.string().c_str()) == JF_OK);
  int code = -1;
  char summary[256];
  CHECK(jf_run_subcommand(c, "simulate", 1, &code, summary, sizeof summary) == JF_OK);
  CHECK(code == 0);
  CHECK(fs::exists(dir / "path.csv"));
  CHECK(jf_run_subcommand(c, "nosuch", 1, &code, summary, sizeof summary) == JF_OK);
  CHECK(code == 1);
  CHECK(std::string(jf_last_error()).find("nosuch") != std::string::npos);
  fs::remove_all(dir);
  jf_config_free(c);
}

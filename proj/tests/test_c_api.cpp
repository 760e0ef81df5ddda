// Copyright 2026 The qpotts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Links only the shared library; nothing from the C++ headers.

#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "qpotts/qpotts.h"

extern "C" int c_header_energy(double* out);

TEST_CASE("version and status names") {
  CHECK(std::strlen(qp_version()) > 0);
  CHECK(std::string(qp_status_name(QP_OK)) == "ok");
  CHECK(std::string(qp_status_name(QP_ERR_CAPACITY)) == "capacity error");
}

TEST_CASE("mode table") {
  REQUIRE(qp_mode_count() == 9);
  CHECK(std::string(qp_mode_name(0)) == "mc");
  CHECK(std::string(qp_mode_name(8)) == "orbit");
  CHECK(qp_mode_name(9) == nullptr);
  CHECK(qp_mode_name(-1) == nullptr);
}

TEST_CASE("header compiles as C and a stored pattern has energy -6") {
  double e = 0.0;
  REQUIRE(c_header_energy(&e) == QP_OK);
  CHECK(e == doctest::Approx(-6.0).epsilon(1e-14));
}

TEST_CASE("patterns and overlaps") {
  qp_patterns* pat = nullptr;
  REQUIRE(qp_patterns_generate(6, 2, 3, 9, &pat) == QP_OK);
  std::vector<int> config(6);
  for (int i = 0; i < 6; ++i) REQUIRE(qp_patterns_exponent(pat, i, 1, &config[i]) == QP_OK);
  double m[2];
  REQUIRE(qp_overlap(pat, config.data(), 6, m) == QP_OK);
  CHECK(m[1] == doctest::Approx(1.0));

  int dummy = 0;
  CHECK(qp_patterns_exponent(pat, 6, 0, &dummy) == QP_ERR_PARAMETER);
  CHECK(std::strlen(qp_last_error()) > 0);
  CHECK(qp_overlap(pat, config.data(), 5, m) == QP_ERR_PARAMETER);
  CHECK(qp_overlap(pat, nullptr, 6, m) == QP_ERR_NULL_ARGUMENT);
  qp_patterns_free(pat);

  CHECK(qp_patterns_generate(0, 1, 3, 1, &pat) == QP_ERR_PARAMETER);
  CHECK(pat == nullptr);
}

TEST_CASE("mean-field right-hand side and integration") {
  std::vector<double> zero(5, 0.0), out(5, 1.0);
  REQUIRE(qp_meanfield_rhs(0.9, 2.0, 1, 1.0, zero.data(), out.data()) == QP_OK);
  for (double v : out) CHECK(std::abs(v) < 1e-14);

  std::vector<double> start{1.0, 0.0, 0.0, 0.0, 0.0};
  qp_trajectory* traj = nullptr;
  REQUIRE(qp_meanfield_integrate(1.0, 0.0, 1, 1.0, start.data(), 20.0, 0.01, 100, &traj) == QP_OK);
  REQUIRE(qp_trajectory_size(traj) > 2);
  CHECK(qp_trajectory_width(traj) == 5);
  double t = 0.0;
  std::vector<double> row(5);
  REQUIRE(qp_trajectory_row(traj, qp_trajectory_size(traj) - 1, &t, row.data()) == QP_OK);
  CHECK(t == doctest::Approx(20.0));
  CHECK(row[0] > 0.9);
  CHECK(qp_trajectory_row(traj, qp_trajectory_size(traj), &t, row.data()) == QP_ERR_PARAMETER);
  qp_trajectory_free(traj);

  CHECK(qp_meanfield_rhs(0.9, 2.0, 7, 1.0, zero.data(), out.data()) == QP_ERR_CAPACITY);
  CHECK(qp_meanfield_rhs(-1.0, 2.0, 1, 1.0, zero.data(), out.data()) == QP_ERR_PARAMETER);
}

TEST_CASE("config parse, override, serialize") {
  qp_config* cfg = nullptr;
  CHECK(qp_config_parse("T = -1\n", "meanfield", &cfg) == QP_ERR_CONFIG);
  CHECK(std::string(qp_last_error()).find("line 1") != std::string::npos);
  CHECK(cfg == nullptr);
  CHECK(qp_config_parse("T = 1\n", "nonsense", &cfg) == QP_ERR_CONFIG);
  CHECK(qp_config_parse("T = 1\n", nullptr, &cfg) == QP_ERR_CONFIG);

  REQUIRE(qp_config_parse("T = 1\nlambda = 0\n", "meanfield", &cfg) == QP_OK);
  char* before = nullptr;
  REQUIRE(qp_config_serialize(cfg, &before) == QP_OK);
  CHECK(qp_config_set(cfg, "p=0") == QP_ERR_CONFIG);
  char* after = nullptr;
  REQUIRE(qp_config_serialize(cfg, &after) == QP_OK);
  CHECK(std::string(before) == std::string(after));
  qp_string_free(after);

  REQUIRE(qp_config_set(cfg, "meanfield.t_end=5") == QP_OK);
  REQUIRE(qp_config_serialize(cfg, &after) == QP_OK);
  CHECK(std::string(after).find("meanfield.t_end = 5\n") != std::string::npos);

  qp_config* again = nullptr;
  REQUIRE(qp_config_parse(after, nullptr, &again) == QP_OK);
  char* twice = nullptr;
  REQUIRE(qp_config_serialize(again, &twice) == QP_OK);
  CHECK(std::string(after) == std::string(twice));
  qp_string_free(before);
  qp_string_free(after);
  qp_string_free(twice);
  qp_config_free(again);
  qp_config_free(cfg);
}

TEST_CASE("run through the C API") {
  const std::string out = "qpotts_c_api_" + std::to_string(::getpid()) + ".csv";
  qp_config* cfg = nullptr;
  REQUIRE(qp_config_parse("meanfield.t_end = 5\n", "meanfield", &cfg) == QP_OK);
  REQUIRE(qp_config_set(cfg, ("output=" + out).c_str()) == QP_OK);
  int code = -1;
  char* summary = nullptr;
  CHECK(qp_config_run(cfg, &code, &summary) == QP_OK);
  CHECK(code == 0);
  REQUIRE(summary != nullptr);
  CHECK(std::strlen(summary) > 0);
  qp_string_free(summary);
  CHECK(std::remove(out.c_str()) == 0);
  qp_config_free(cfg);

  REQUIRE(qp_config_parse("N = 7\n", "lindblad", &cfg) == QP_OK);
  REQUIRE(qp_config_set(cfg, ("output=" + out).c_str()) == QP_OK);
  CHECK(qp_config_run(cfg, &code, nullptr) == QP_ERR_CAPACITY);
  CHECK(code == 4);
  CHECK(std::remove(out.c_str()) != 0);
  qp_config_free(cfg);
}

TEST_CASE("null arguments") {
  CHECK(qp_config_run(nullptr, nullptr, nullptr) == QP_ERR_NULL_ARGUMENT);
  CHECK(qp_trajectory_size(nullptr) == 0);
  qp_patterns_free(nullptr);
  qp_trajectory_free(nullptr);
  qp_config_free(nullptr);
  qp_string_free(nullptr);
}

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

#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qpotts/error.hpp"
#include "qpotts/model.hpp"
#include "qpotts/random.hpp"

using namespace qpotts;

TEST_CASE("energy of a stored pattern, q=3, p=1, N=4") {
  const PatternSet pat(4, 1, 3, {0, 1, 2, 0});
  const auto s = SpinConfig::from_pattern(pat, 0);
  CHECK(classical_energy(s, pat) == doctest::Approx(-6.0).epsilon(1e-14));
  CHECK(oracle::energy({0, 1, 2, 0}, pat) == doctest::Approx(-6.0).epsilon(1e-14));
}

TEST_CASE("energy matches the quadruple sum on random instances") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(mix_seed(7, {static_cast<std::uint64_t>(trial)}));
    const int q = 2 + rng.uniform_int(4);
    const int n = 2 + rng.uniform_int(6);
    const int p = 1 + rng.uniform_int(3);
    const auto pat = PatternSet::generate(n, p, q, 100 + trial);
    std::vector<int> s(n);
    for (int& x : s) x = rng.uniform_int(q);
    CHECK(classical_energy(SpinConfig(s), pat) ==
          doctest::Approx(oracle::energy(s, pat)).epsilon(1e-12));
  }
}

TEST_CASE("mean energy over the nine N=2 configurations") {
  const PatternSet pat(2, 1, 3, {1, 2});
  double lib = 0.0, ref = 0.0;
  for (const auto& s : oracle::all_configs(2, 3)) {
    lib += classical_energy(SpinConfig(s), pat);
    ref += oracle::energy(s, pat);
  }
  CHECK(lib / 9 == doctest::Approx(ref / 9).epsilon(1e-14));
}

TEST_CASE("overlap of the pattern itself and of its shifted copy") {
  const auto pat = PatternSet::generate(50, 2, 3, 3);
  CHECK(overlap(SpinConfig::from_pattern(pat, 1), pat)[1] == doctest::Approx(1.0));
  std::vector<int> shifted(pat.pattern(0));
  for (int& k : shifted) k = mod_q(k + 1, 3);
  CHECK(overlap(SpinConfig(shifted), pat)[0] == doctest::Approx(-0.5));
}

TEST_CASE("overlap of a random configuration is small at large N") {
  const int n = 30000;
  const auto pat = PatternSet::generate(n, 1, 3, 11);
  Rng rng(12);
  std::vector<int> s(n);
  for (int& x : s) x = rng.uniform_int(3);
  CHECK(std::abs(overlap(SpinConfig(s), pat)[0]) < 0.02);
}

TEST_CASE("overlap range holds exhaustively at N <= 4") {
  for (int q = 2; q <= 4; ++q) {
    const auto pat = PatternSet::generate(4, 1, q, 5);
    for (const auto& s : oracle::all_configs(4, q)) {
      const double m = overlap(SpinConfig(s), pat)[0];
      CHECK(m >= -1.0 / (q - 1) - 1e-12);
      CHECK(m <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("global relabelling leaves energy and overlap unchanged") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pat = PatternSet::generate(7, 1, 3, 40 + trial);
    std::vector<int> s(7);
    for (int& x : s) x = rng.uniform_int(3);
    std::vector<int> s_rot(s);
    for (int& x : s_rot) x = mod_q(x + 1, 3);
    const auto rot = pat.rotated(0, 1);
    CHECK(classical_energy(SpinConfig(s_rot), rot) ==
          doctest::Approx(classical_energy(SpinConfig(s), pat)).epsilon(1e-13));
    CHECK(overlap(SpinConfig(s_rot), rot)[0] ==
          doctest::Approx(overlap(SpinConfig(s), pat)[0]).epsilon(1e-13));
  }
}

TEST_CASE("incompatible inputs are rejected") {
  const auto pat = PatternSet::generate(3, 1, 3, 1);
  CHECK_THROWS_AS(classical_energy(SpinConfig({0, 1}), pat), ParameterError);
  CHECK_THROWS_AS(overlap(SpinConfig({0, 1, 5}), pat), ParameterError);
  CHECK_THROWS_AS(ModelParams::at_temperature(-1.0).validate(), ParameterError);
}

TEST_CASE("pattern generation is reproducible and covers all levels") {
  const auto a = PatternSet::generate(300, 2, 3, 9);
  const auto b = PatternSet::generate(300, 2, 3, 9);
  CHECK(a == b);
  CHECK_FALSE(a == PatternSet::generate(300, 2, 3, 10));
  std::set<int> levels(a.entries().begin(), a.entries().end());
  CHECK(levels == std::set<int>{0, 1, 2});
}

TEST_CASE("basis indexer round trip and cap") {
  const BasisIndexer basis(3, 4);
  CHECK(basis.dim() == 81);
  for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
    const auto c = basis.config_of(idx);
    CHECK(basis.index_of(c) == idx);
    CHECK(c[0] == static_cast<int>(idx % 3));
  }
  CHECK(basis.moved(0, 2, 0, 1) == 9);
  CHECK_THROWS_AS(BasisIndexer(3, 60), CapacityError);
}

TEST_CASE("rate labels name target and source levels") {
  CHECK(jump_target(1) == 0);
  CHECK(jump_source(1, +1) == 1);
  CHECK(jump_source(1, -1) == 2);
  CHECK(jump_source(3, +1) == 0);
  const std::array<double, 1> m{0.5};
  const std::array<int, 1> k{0};
  // (1, +1) moves 1 -> 0, into alignment with k = 0.
  CHECK(meanfield_delta_energy(1, +1, m, k) == doctest::Approx(1.5));
  CHECK(meanfield_delta_energy(2, -1, m, k) == doctest::Approx(-1.5));
  CHECK(meanfield_delta_energy(2, +1, m, k) == doctest::Approx(0.0));
  const std::array<int, 1> bad{3};
  CHECK_THROWS_AS(meanfield_delta_energy(1, 1, m, bad), UnsupportedModelError);
}

TEST_CASE("mean-field rates: normalization and reverse-move ratio") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::array<double, 2> m{rng.uniform(-0.5, 1.0), rng.uniform(-0.5, 1.0)};
    const std::array<int, 2> k{rng.uniform_int(3), rng.uniform_int(3)};
    const double beta = rng.uniform(0.1, 5.0);
    const auto rates = meanfield_rates(m, k, beta);
    CHECK(rates.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int alpha = 1; alpha <= 3; ++alpha) {
      for (int s : {+1, -1}) {
        // Reverse of (alpha, s): target and source swapped.
        const int rev_alpha = jump_source(alpha, s) + 1;
        const double d = meanfield_delta_energy(alpha, s, m, k);
        CHECK(rates(alpha, s) / rates(rev_alpha, -s) ==
              doctest::Approx(std::exp(2.0 * beta * d)).epsilon(1e-12));
      }
    }
  }
  const std::array<double, 1> inf{std::nan("")};
  const std::array<int, 1> k0{0};
  CHECK_THROWS_AS(meanfield_rates(inf, k0, 1.0), NumericError);
}

TEST_CASE("disorder enumeration") {
  int count = 0;
  std::set<std::vector<int>> seen;
  for_each_pattern_assignment(3, [&](std::span<const int> k) {
    ++count;
    seen.insert(std::vector<int>(k.begin(), k.end()));
  });
  CHECK(count == 27);
  CHECK(seen.size() == 27);
  CHECK(disorder_average([](std::span<const int> k) { return k[0] == 0 ? 1.0 : 0.0; }, 2) ==
        doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(for_each_pattern_assignment(7, [](std::span<const int>) {}), CapacityError);
}

TEST_CASE("seed mixing and integer draws") {
  CHECK(mix_seed(1, {2, 3}) == mix_seed(1, {2, 3}));
  CHECK(mix_seed(1, {2, 3}) != mix_seed(1, {3, 2}));
  CHECK(mix_seed(1, {0}) != mix_seed(1, {}));
  Rng rng(3);
  std::array<int, 5> hist{};
  for (int k = 0; k < 50000; ++k) ++hist[rng.uniform_int(5)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

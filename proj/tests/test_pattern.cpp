#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "degmap/error.hpp"
#include "degmap/pattern.hpp"
#include "test_util.hpp"

using namespace degmap;

namespace {

// Cycle tests for the 1.5 Ah NMC/LMO cell: 5.25 A group and 3 A group.
CycleTestSet wang_test_1() {
  return CycleTestSet(5.25, 1.5,
                      {{0.1, 3333, 0.33},
                       {0.2, 3067, 0.45},
                       {0.5, 2500, 0.45},
                       {0.7, 2000, 0.45},
                       {0.9, 666, 0.18}},
                      uniform_soc_grid(5));
}

CycleTestSet wang_test_2() {
  return CycleTestSet(3.0, 1.5,
                      {{0.3, 3333, 0.40}, {0.5, 2800, 0.45}, {0.7, 2500, 0.45}},
                      uniform_soc_grid(3));
}

bool is_zero_row_pattern(const linalg::Matrix& m, int row,
                         const std::vector<int>& nonzero_cols) {
  std::set<int> nz(nonzero_cols.begin(), nonzero_cols.end());
  for (int j = 0; j < m.cols(); ++j) {
    if (nz.count(j)) {
      if (m(row, j) <= 0.0) return false;
    } else {
      if (m(row, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("pattern count") {
  CHECK(pattern_count({0.1, 3333, 0.33}) == doctest::Approx(66660.0).epsilon(1e-14));
  CHECK(pattern_count({0.5, 2500, 0.45}) == doctest::Approx(10000.0).epsilon(1e-14));
  CHECK(pattern_count({1.0, 1, 0.1}) == 2.0);
  CHECK_THROWS_AS(pattern_count({0.0, 1, 0.1}), Error);
}

TEST_CASE("band traverse time") {
  CHECK(band_traverse_time_h(1.5, 5.25, 5) == doctest::Approx(0.05714).epsilon(2e-4));
  CHECK(band_traverse_time_h(1.5, 5.25, 5) ==
        doctest::Approx(1.5 / 26.25).epsilon(1e-15));
  // The source lists 0.160 h for the 3 A test; the defining ratio gives 1/6.
  CHECK(band_traverse_time_h(1.5, 3.0, 3) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(band_traverse_time_h(1.0, 1.0, 1) == 1.0);
  CHECK_THROWS_AS(band_traverse_time_h(0.0, 1.0, 1), Error);
  CHECK_THROWS_AS(band_traverse_time_h(1.0, 0.0, 1), Error);
}

TEST_CASE("covered bands: closed-interval rule") {
  SocGrid g5 = uniform_soc_grid(5);
  CHECK(covered_bands(0.1, g5) == std::vector<int>{2});
  CHECK(covered_bands(0.9, g5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(covered_bands(1.0, g5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(covered_bands(1.0, uniform_soc_grid(3)) == std::vector<int>{0, 1, 2});

  // Swing too narrow to reach any center.
  SocGrid sparse({0.1, 0.9});
  CHECK_THROWS_AS(covered_bands(0.1, sparse), Error);
  CHECK_THROWS_AS(covered_bands(1.5, g5), Error);
}

TEST_CASE("centered band span matches the cycle-test staircase") {
  // 5-band test: spans of 1..5 bands centered with low-side skew.
  CHECK(centered_band_span(0.1, 5) == std::pair<int, int>{2, 2});
  CHECK(centered_band_span(0.2, 5) == std::pair<int, int>{1, 2});
  CHECK(centered_band_span(0.5, 5) == std::pair<int, int>{1, 3});
  CHECK(centered_band_span(0.7, 5) == std::pair<int, int>{0, 3});
  CHECK(centered_band_span(0.9, 5) == std::pair<int, int>{0, 4});
  // 3-band test.
  CHECK(centered_band_span(0.3, 3) == std::pair<int, int>{1, 1});
  CHECK(centered_band_span(0.5, 3) == std::pair<int, int>{0, 1});
  CHECK(centered_band_span(0.7, 3) == std::pair<int, int>{0, 2});
  // Full swing always covers everything.
  for (int n = 1; n <= 9; ++n) CHECK(centered_band_span(1.0, n) == std::pair<int, int>{0, n - 1});
}

TEST_CASE("coverage is nested in DoD") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ud(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 10);
    double d1 = ud(rng), d2 = ud(rng);
    if (d1 > d2) std::swap(d1, d2);
    auto [lo1, hi1] = centered_band_span(d1, n);
    auto [lo2, hi2] = centered_band_span(d2, n);
    CHECK(lo2 <= lo1);
    CHECK(hi2 >= hi1);

    SocGrid g = uniform_soc_grid(n);
    std::vector<int> c1, c2;
    try {
      c1 = covered_bands(d1, g);
    } catch (const Error&) {
      continue;
    }
    c2 = covered_bands(d2, g);
    CHECK(c2.front() <= c1.front());
    CHECK(c2.back() >= c1.back());
  }
}

TEST_CASE("pattern system for the 5.25 A cycle test") {
  PatternSystem sys = build_pattern_system(wang_test_1());
  REQUIRE(sys.matrix.rows() == 5);
  REQUIRE(sys.matrix.cols() == 5);

  // Staircase sparsity: row i covers i+1 bands placed around the middle.
  CHECK(is_zero_row_pattern(sys.matrix, 0, {2}));
  CHECK(is_zero_row_pattern(sys.matrix, 1, {1, 2}));
  CHECK(is_zero_row_pattern(sys.matrix, 2, {1, 2, 3}));
  CHECK(is_zero_row_pattern(sys.matrix, 3, {0, 1, 2, 3}));
  CHECK(is_zero_row_pattern(sys.matrix, 4, {0, 1, 2, 3, 4}));

  // Entries are T_b * p with the defining formulas.
  const double t_b = 1.5 / (5.25 * 5);
  CHECK(sys.matrix(0, 2) == doctest::Approx(t_b * 66660.0).epsilon(1e-14));
  CHECK(sys.matrix(1, 1) == doctest::Approx(t_b * 2.0 * 3067.0 / 0.2).epsilon(1e-14));
  CHECK(sys.matrix(2, 3) == doctest::Approx(t_b * 10000.0).epsilon(1e-14));
  CHECK(sys.matrix(3, 0) ==
        doctest::Approx(t_b * 2.0 * 2000.0 / 0.7).epsilon(1e-14));
  CHECK(sys.matrix(4, 4) == doctest::Approx(t_b * 2.0 * 666.0 / 0.9).epsilon(1e-14));

  CHECK(sys.rhs_ah == std::vector<double>{0.33, 0.45, 0.45, 0.45, 0.18});

  // Interval-rule disagreement flags: the DoD 0.2 and DoD 0.7 rows.
  CHECK(sys.coverage_divergences == std::vector<int>{1, 3});

  REQUIRE(sys.column_labels.size() == 5);
  CHECK(sys.column_labels[0].current_rate_a == 5.25);
  CHECK(sys.column_labels[0].soc_band_center == doctest::Approx(0.1));
}

TEST_CASE("pattern system for the 3 A cycle test") {
  PatternSystem sys = build_pattern_system(wang_test_2());
  REQUIRE(sys.matrix.rows() == 3);
  REQUIRE(sys.matrix.cols() == 3);
  CHECK(is_zero_row_pattern(sys.matrix, 0, {1}));
  CHECK(is_zero_row_pattern(sys.matrix, 1, {0, 1}));
  CHECK(is_zero_row_pattern(sys.matrix, 2, {0, 1, 2}));

  const double t_b = 1.5 / (3.0 * 3.0);
  CHECK(sys.matrix(0, 1) == doctest::Approx(t_b * 22220.0).epsilon(1e-14));
  CHECK(sys.matrix(1, 0) == doctest::Approx(t_b * 11200.0).epsilon(1e-14));
  CHECK(sys.matrix(2, 2) ==
        doctest::Approx(t_b * 2.0 * 2500.0 / 0.7).epsilon(1e-14));

  // Only the DoD 0.5 row disagrees with the interval rule here.
  CHECK(sys.coverage_divergences == std::vector<int>{1});
}

TEST_CASE("scalar pattern system") {
  CycleTestSet single(1.0, 1.0, {{1.0, 3, 0.2}}, uniform_soc_grid(1));
  PatternSystem sys = build_pattern_system(single);
  REQUIRE(sys.matrix.rows() == 1);
  REQUIRE(sys.matrix.cols() == 1);
  CHECK(sys.matrix(0, 0) == doctest::Approx(1.0 * 6.0).epsilon(1e-14));  // T_b * p
  CHECK(sys.rhs_ah[0] == 0.2);
  CHECK(sys.coverage_divergences.empty());
}

TEST_CASE("rank-deficient cycle sets are rejected") {
  // Two records with the same DoD produce parallel rows.
  CycleTestSet dup(1.0, 1.0, {{0.3, 100, 0.1}, {0.3, 200, 0.2}}, uniform_soc_grid(2));
  CHECK_THROWS_AS(build_pattern_system(dup), Error);
}

TEST_CASE("cycle test set validation") {
  CHECK_THROWS_AS(CycleTestSet(0.0, 1.5, {{0.5, 1, 0.1}}, uniform_soc_grid(1)), Error);
  CHECK_THROWS_AS(CycleTestSet(1.0, 1.5, {{0.5, 1, 0.1}}, uniform_soc_grid(2)), Error);
  CHECK_THROWS_AS(CycleTestSet(1.0, 1.5, {{1.5, 1, 0.1}}, uniform_soc_grid(1)), Error);
  CHECK_THROWS_AS(CycleTestSet(1.0, 1.5, {{0.5, 0, 0.1}}, uniform_soc_grid(1)), Error);
  CHECK_THROWS_AS(CycleTestSet(1.0, 1.5, {{0.5, 1, 0.0}}, uniform_soc_grid(1)), Error);

  // Records are sorted by ascending DoD on construction.
  CycleTestSet set(1.0, 1.0, {{0.9, 10, 0.1}, {0.2, 20, 0.2}, {0.5, 30, 0.3}},
                   uniform_soc_grid(1));
  CHECK(set.records()[0].dod == 0.2);
  CHECK(set.records()[1].dod == 0.5);
  CHECK(set.records()[2].dod == 0.9);
}

TEST_CASE("multirate assembly is block diagonal") {
  PatternSystem s1 = build_pattern_system(wang_test_1());
  PatternSystem s2 = build_pattern_system(wang_test_2());
  PatternSystem sys = assemble_multirate({s1, s2});

  REQUIRE(sys.matrix.rows() == 8);
  REQUIRE(sys.matrix.cols() == 8);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(sys.matrix(i, j) == s1.matrix(i, j));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(sys.matrix(5 + i, 5 + j) == s2.matrix(i, j));
  // Off-block positions stay zero.
  for (int i = 0; i < 5; ++i)
    for (int j = 5; j < 8; ++j) CHECK(sys.matrix(i, j) == 0.0);
  for (int i = 5; i < 8; ++i)
    for (int j = 0; j < 5; ++j) CHECK(sys.matrix(i, j) == 0.0);

  REQUIRE(sys.column_labels.size() == 8);
  CHECK(sys.column_labels[0].current_rate_a == 5.25);
  CHECK(sys.column_labels[5].current_rate_a == 3.0);
  CHECK(sys.rhs_ah.size() == 8);
  CHECK(sys.coverage_divergences == std::vector<int>{1, 3, 6});

  // Full rank claim for the assembled worked example.
  CHECK(linalg::numeric_rank(sys.matrix) == 8);
}

TEST_CASE("multirate assembly edge cases") {
  PatternSystem s1 = build_pattern_system(wang_test_1());
  PatternSystem same = assemble_multirate({s1});
  CHECK(same.matrix.rows() == s1.matrix.rows());

  CHECK_THROWS_AS(assemble_multirate({s1, s1}), Error);  // duplicate rate
  CHECK_THROWS_AS(assemble_multirate({}), Error);

  PatternSystem a = make_pattern_system(linalg::Matrix(1, 1, 2.0), {1.0},
                                        {{0.5, 1.0}}, 1.0);
  PatternSystem b = make_pattern_system(linalg::Matrix(1, 1, 3.0), {2.0},
                                        {{0.5, 2.0}}, 1.0);
  PatternSystem diag = assemble_multirate({a, b});
  REQUIRE(diag.matrix.rows() == 2);
  CHECK(diag.matrix(0, 0) == 2.0);
  CHECK(diag.matrix(1, 1) == 3.0);
  CHECK(diag.matrix(0, 1) == 0.0);
  CHECK(diag.matrix(1, 0) == 0.0);
}

TEST_CASE("raw pattern systems validate nonnegativity") {
  linalg::Matrix neg(1, 1, -0.5);
  CHECK_THROWS_AS(make_pattern_system(neg, {1.0}, {{0.5, 1.0}}, 1.0), Error);
  linalg::Matrix mismatch(2, 1, 0.5);
  CHECK_THROWS_AS(make_pattern_system(mismatch, {1.0}, {{0.5, 1.0}}, 1.0), Error);
}

TEST_CASE("pattern matrices are nonnegative for random cycle sets") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ud(0.02, 1.0), uq(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<CycleTestRecord> records;
    std::set<int> spans;
    for (int i = 0; i < n + 2; ++i) {
      double dod = ud(rng);
      records.push_back({dod, 1.0 + static_cast<double>(rng() % 5000), uq(rng)});
    }
    CycleTestSet set(0.5 + ud(rng) * 10.0, 0.5 + uq(rng), records, uniform_soc_grid(n));
    try {
      PatternSystem sys = build_pattern_system(set);
      for (double v : sys.matrix.data()) CHECK(v >= 0.0);
    } catch (const Error&) {
      // Rank-deficient draws are legitimately rejected.
    }
  }
}

/**
 * Copyright 2026 The Morpho Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "stats_eval.hpp"

using namespace morpho;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

AttributeTable gaussian_table(std::mt19937_64& rng, std::size_t n, std::size_t d, double shift = 0.0) {
  std::normal_distribution<double> g;
  AttributeTable t;
  for (std::size_t c = 0; c < d; ++c) t.names.push_back("a" + std::to_string(c));
  for (std::size_t i = 0; i < n * d; ++i) t.values.push_back(g(rng) + shift);
  return t;
}

AttributeTable single(const std::string& name, std::vector<double> v) { return {{name}, std::move(v)}; }

CodeColumn continuous(const std::string& name, std::vector<double> v) {
  return {name, CodeType::Continuous, 0, std::move(v)};
}

CodeColumn categorical(const std::string& name, int k, std::vector<double> v) {
  return {name, CodeType::Categorical, k, std::move(v)};
}

// Kolmogorov-Smirnov distance of a sample from Uniform(0, 1).
double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max({d, (i + 1) / n - p[i], p[i] - i / n});
  return d;
}

// Correlation of residuals after least-squares regression on the controls and an intercept.
double residual_partial_corr(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& controls) {
  Eigen::MatrixXd design(x.size(), controls.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(controls.cols()) = controls;
  auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(v);
    return v - design * beta;
  };
  const Eigen::VectorXd rx = residual(x), ry = residual(y);
  return rx.dot(ry) / std::sqrt(rx.squaredNorm() * ry.squaredNorm());
}

}  // namespace

TEST_CASE("scott bandwidths") {
  std::mt19937_64 rng(1);
  AttributeTable t = gaussian_table(rng, 100, 4);
  const auto b = scott_bandwidths(t);
  REQUIRE(b.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    const auto col = t.column(c);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / 100;
    double ss = 0;
    for (double v : col) ss += (v - mean) * (v - mean);
    CHECK(b[c] == doctest::Approx(std::pow(100.0, -1.0 / 8) * std::sqrt(ss / 99)).epsilon(1e-12));
  }
  CHECK(std::pow(100.0, -1.0 / 8) == doctest::Approx(0.56234).epsilon(1e-5));

  AttributeTable scaled = t;
  for (std::size_t i = 0; i < scaled.rows(); ++i) scaled.values[i * 4 + 2] *= 10;
  const auto bs = scott_bandwidths(scaled);
  CHECK(bs[2] == doctest::Approx(10 * b[2]).epsilon(1e-12));
  CHECK(bs[0] == b[0]);

  for (std::size_t i = 0; i < t.rows(); ++i) t.values[i * 4 + 1] = 3.0;
  CHECK(code_of([&] { scott_bandwidths(t); }) == ErrorCode::DegenerateColumn);
  CHECK(code_of([] { scott_bandwidths(single("x", {1.0})); }) == ErrorCode::TooFewSamples);
}

TEST_CASE("mmd on identical and swapped samples") {
  std::mt19937_64 rng(2);
  const AttributeTable x = gaussian_table(rng, 400, 3);
  const auto same = mmd_linear_test(x, x);
  CHECK(same.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.n == 400);

  const AttributeTable y = gaussian_table(rng, 401, 3, 0.3);
  const auto xy = mmd_linear_test(x, y), yx = mmd_linear_test(y, x);
  CHECK(xy.n == 400);
  CHECK(xy.bandwidths == yx.bandwidths);
  CHECK(xy.std_error > 0);
  CHECK(xy.p_value == doctest::Approx(0.5 * std::erfc(xy.statistic / xy.std_error / std::sqrt(2.0))));
}

TEST_CASE("mmd argument checks") {
  std::mt19937_64 rng(3);
  const AttributeTable x = gaussian_table(rng, 3, 2), y = gaussian_table(rng, 50, 2);
  CHECK(code_of([&] { mmd_linear_test(x, y); }) == ErrorCode::TooFewSamples);
  AttributeTable z = gaussian_table(rng, 50, 2);
  z.names[1] = "other";
  CHECK(code_of([&] { mmd_linear_test(y, z); }) == ErrorCode::InvalidArgument);
  AttributeTable nan = y;
  nan.values[3] = std::nan("");
  CHECK(code_of([&] { mmd_linear_test(nan, y); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mmd p-values are calibrated under the null") {
  std::mt19937_64 rng(4);
  std::vector<double> p;
  for (int rep = 0; rep < 200; ++rep) p.push_back(mmd_linear_test(gaussian_table(rng, 500, 5), gaussian_table(rng, 500, 5)).p_value);
  CHECK(ks_uniform(p) <= 0.15);
}

TEST_CASE("mmd detects a large shift") {
  std::mt19937_64 rng(5);
  const auto r = mmd_linear_test(gaussian_table(rng, 2000, 2), gaussian_table(rng, 2000, 2, 1.0));
  CHECK(r.statistic > 0);
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("dummy expansion") {
  CodeTable codes{{continuous("z", {0.5, -1, 2}), categorical("digit", 3, {2, 0, 1}),
                   {"flag", CodeType::Binary, 0, {1, 0, 1}}}};
  const ExpandedCodes ex = dummy_expand(codes);
  CHECK(ex.names == std::vector<std::string>{"z", "digit=0", "digit=1", "digit=2", "flag"});
  CHECK(ex.source == std::vector<std::size_t>{0, 1, 1, 1, 2});
  CHECK(ex.level == std::vector<int>{-1, 0, 1, 2, -1});
  CHECK(ex.rows() == 3);
  CHECK(ex.values == std::vector<double>{0.5, 0, 0, 1, 1, -1, 1, 0, 0, 0, 2, 0, 1, 0, 1});
  // Round trip: each row's dummies hold exactly one 1 at its category.
  for (std::size_t i = 0; i < 3; ++i) {
    double sum = 0;
    int hot = -1;
    for (std::size_t j = 1; j <= 3; ++j) {
      sum += ex.values[i * 5 + j];
      if (ex.values[i * 5 + j] == 1) hot = ex.level[j];
    }
    CHECK(sum == 1);
    CHECK(hot == codes.columns[1].values[i]);
  }

  CodeTable bad{{categorical("d", 3, {0, 3})}};
  CHECK(code_of([&] { dummy_expand(bad); }) == ErrorCode::InvalidArgument);
  CodeTable bad_bin{{{"b", CodeType::Binary, 0, {0, 0.5}}}};
  CHECK(code_of([&] { dummy_expand(bad_bin); }) == ErrorCode::InvalidArgument);
  CodeTable ragged{{continuous("a", {1, 2}), continuous("b", {1})}};
  CHECK(code_of([&] { dummy_expand(ragged); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("partial correlations match residual regression") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> cat(0, 3), cat2(0, 2);
  const std::size_t n = 400;
  CodeTable codes{{continuous("c1", {}), categorical("k", 4, {}), continuous("c2", {}), categorical("m", 3, {})}};
  AttributeTable attrs{{"length", "slant"}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double c1 = g(rng), c2 = 0.5 * c1 + g(rng);
    const int k = cat(rng), m = cat2(rng);
    codes.columns[0].values.push_back(c1);
    codes.columns[1].values.push_back(k);
    codes.columns[2].values.push_back(c2);
    codes.columns[3].values.push_back(m);
    attrs.values.push_back(c1 + 0.3 * k + 0.2 * m + g(rng));
    attrs.values.push_back(-c2 + (k == 1 ? 1.0 : 0.0) + g(rng));
  }
  const PartialCorrTable pc = partial_correlations(attrs, codes);
  const ExpandedCodes ex = dummy_expand(codes);
  REQUIRE(pc.codes == ex.names);
  REQUIRE(pc.codes.size() == 9);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t e = 0; e < ex.cols(); ++e) {
      std::vector<std::size_t> controls;
      for (std::size_t o = 0; o < ex.cols(); ++o) {
        if (o == e || ex.source[o] == ex.source[e]) continue;
        const auto& col = codes.columns[ex.source[o]];
        if (ex.level[o] >= 0 && ex.level[o] == col.categories - 1) continue;
        controls.push_back(o);
      }
      Eigen::VectorXd x(n), y(n);
      Eigen::MatrixXd z(n, static_cast<Eigen::Index>(controls.size()));
      for (std::size_t i = 0; i < n; ++i) {
        x(i) = attrs.at(i, a);
        y(i) = ex.values[i * ex.cols() + e];
        for (std::size_t k = 0; k < controls.size(); ++k) z(i, k) = ex.values[i * ex.cols() + controls[k]];
      }
      CHECK(pc.at(a, e) == doctest::Approx(residual_partial_corr(x, y, z)).epsilon(1e-8).scale(1));
    }
}

TEST_CASE("partial correlation sanity") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const std::size_t n = 5000;
  CodeTable codes{{continuous("c1", {}), continuous("c2", {})}};
  AttributeTable indep{{"a"}, {}}, linked{{"a"}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double c1 = g(rng), c2 = g(rng);
    codes.columns[0].values.push_back(c1);
    codes.columns[1].values.push_back(c2);
    indep.values.push_back(g(rng));
    linked.values.push_back(c1 + 0.01 * g(rng));
  }
  const auto pi = partial_correlations(indep, codes);
  for (double v : pi.values) CHECK(std::abs(v) < 0.05);
  const auto pl = partial_correlations(linked, codes);
  CHECK(pl.at(0, 0) > 0.99);

  // Affine maps with positive scale leave every entry unchanged.
  AttributeTable scaled = linked;
  for (double& v : scaled.values) v = 1000 * v + 7;
  CodeTable codes_scaled = codes;
  for (double& v : codes_scaled.columns[1].values) v = 0.001 * v - 3;
  const auto ps = partial_correlations(scaled, codes_scaled);
  for (std::size_t k = 0; k < pl.values.size(); ++k) CHECK(std::abs(ps.values[k] - pl.values[k]) <= 1e-10);
}

TEST_CASE("partial correlation failures") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const std::size_t n = 200;
  AttributeTable attrs{{"a"}, {}};
  CodeTable dup{{continuous("c1", {}), continuous("c1_copy", {}), continuous("c3", {})}};
  for (std::size_t i = 0; i < n; ++i) {
    const double c = g(rng);
    attrs.values.push_back(g(rng));
    dup.columns[0].values.push_back(c);
    dup.columns[1].values.push_back(2 * c + 1);
    dup.columns[2].values.push_back(g(rng));
  }
  try {
    partial_correlations(attrs, dup);
    FAIL("expected SingularCovariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularCovariance);
    const std::string msg = e.what();
    CHECK(msg.find("c1") != std::string::npos);
    CHECK(msg.find("c1_copy") != std::string::npos);
    CHECK(msg.find("c3") == std::string::npos);
  }

  CodeTable one_level{{categorical("k", 1, std::vector<double>(n, 0.0))}};
  CHECK(code_of([&] { partial_correlations(attrs, one_level); }) == ErrorCode::DegenerateColumn);
  CodeTable short_codes{{continuous("c", {1, 2, 3})}};
  CHECK(code_of([&] { partial_correlations(attrs, short_codes); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("equal-frequency bins") {
  const std::vector<double> v{5, 1, 4, 2, 3, 6, 8, 7};
  CHECK(equal_frequency_bins(v, 4) == std::vector<int>{2, 0, 1, 0, 1, 2, 3, 3});
  const std::vector<double> ties{1, 1, 1, 1, 2, 3};
  const auto b = equal_frequency_bins(ties, 3);
  CHECK(b[0] == b[1]);
  CHECK(b[2] == b[3]);
  CHECK(b == std::vector<int>{0, 0, 0, 0, 2, 2});
  CHECK(code_of([&] { equal_frequency_bins(v, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mig") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = g(rng);
    b[i] = g(rng);
    c[i] = g(rng);
  }

  SUBCASE("a code that copies the attribute gives one") {
    const auto r = mig(single("x", a), CodeTable{{continuous("copy", a), continuous("noise", b)}});
    CHECK(r.per_attribute[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.overall == r.per_attribute[0]);
    CHECK(r.mutual_information[0] == doctest::Approx(r.entropy[0]).epsilon(1e-12));
    CHECK(r.entropy[0] == doctest::Approx(std::log(20.0)).epsilon(1e-9));
  }
  SUBCASE("two identical informative codes give zero") {
    const auto r = mig(single("x", a), CodeTable{{continuous("c1", a), continuous("c2", a)}});
    CHECK(r.per_attribute[0] == 0.0);
  }
  SUBCASE("independent codes give nearly zero") {
    const auto r = mig(single("x", a), CodeTable{{continuous("c1", b), continuous("c2", c)}});
    CHECK(r.per_attribute[0] <= 0.05);
  }
  SUBCASE("invariances") {
    std::vector<double> mixed(n);
    for (std::size_t i = 0; i < n; ++i) mixed[i] = a[i] + 0.5 * b[i];
    const auto base = mig(single("x", mixed), CodeTable{{continuous("c1", a), continuous("c2", b)}});
    const auto swapped = mig(single("x", mixed), CodeTable{{continuous("c2", b), continuous("c1", a)}});
    CHECK(swapped.per_attribute[0] == doctest::Approx(base.per_attribute[0]).epsilon(1e-12));
    std::vector<double> warped(n), warped_code(n);
    for (std::size_t i = 0; i < n; ++i) {
      warped[i] = std::exp(mixed[i]);
      warped_code[i] = std::pow(a[i], 3);
    }
    const auto mono = mig(single("x", warped), CodeTable{{continuous("c1", warped_code), continuous("c2", b)}});
    CHECK(mono.per_attribute[0] == doctest::Approx(base.per_attribute[0]).epsilon(1e-12));
  }
  SUBCASE("categorical codes enter as levels") {
    std::vector<double> digit(n), x(n);
    std::uniform_int_distribution<int> d(0, 9);
    for (std::size_t i = 0; i < n; ++i) {
      digit[i] = d(rng);
      x[i] = 3 * digit[i] - 1;
    }
    // Tied values share a bin, so each digit lands in its own bin and the code explains everything.
    const auto r = mig(single("x", x), CodeTable{{categorical("digit", 10, digit), continuous("noise", b)}});
    CHECK(r.mutual_information[0] == doctest::Approx(r.entropy[0]).epsilon(1e-12));
    CHECK(r.entropy[0] == doctest::Approx(std::log(10.0)).epsilon(0.01));
  }
  SUBCASE("constant attribute is degenerate") {
    CHECK(code_of([&] { mig(single("x", std::vector<double>(n, 1.0)), CodeTable{{continuous("c", a)}}); }) ==
          ErrorCode::DegenerateAttribute);
    CHECK(code_of([&] { mig(single("x", a), CodeTable{{continuous("c", a)}}, 1); }) == ErrorCode::InvalidArgument);
  }
}

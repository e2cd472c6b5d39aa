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
#include "stats_eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace morpho {
namespace {

double sample_std(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

double gaussian_kernel(const AttributeTable& a, std::size_t i, const AttributeTable& b, std::size_t j,
                       const std::vector<double>& two_sigma2) {
  double e = 0.0;
  for (std::size_t d = 0; d < two_sigma2.size(); ++d) {
    const double diff = a.at(i, d) - b.at(j, d);
    e += diff * diff / two_sigma2[d];
  }
  return std::exp(-e);
}

std::vector<int> as_levels(const CodeColumn& col, int bins) {
  if (col.type == CodeType::Continuous) return equal_frequency_bins(col.values, bins);
  std::vector<int> out(col.values.size());
  std::transform(col.values.begin(), col.values.end(), out.begin(), [](double v) { return static_cast<int>(v); });
  return out;
}

struct Counts {
  std::vector<std::size_t> levels;
  int max_level = 0;
};

Counts histogram(const std::vector<int>& labels) {
  Counts c;
  c.max_level = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  c.levels.assign(static_cast<std::size_t>(c.max_level) + 1, 0);
  for (int l : labels) ++c.levels[l];
  return c;
}

double entropy(const Counts& c, std::size_t n) {
  const double total = static_cast<double>(n);
  double h = 0.0;
  for (std::size_t k : c.levels)
    if (k > 0) h += static_cast<double>(k) / total * std::log(total / static_cast<double>(k));
  return h;
}

// Plug-in estimate. Ratios are formed from integer counts so that exactly independent
// or exactly identical labelings give exact results.
double mutual_information(const std::vector<int>& a, const Counts& ca, const std::vector<int>& b, const Counts& cb) {
  const std::size_t wa = ca.levels.size(), wb = cb.levels.size();
  std::vector<std::size_t> joint(wa * wb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) ++joint[static_cast<std::size_t>(a[i]) * wb + b[i]];
  const double total = static_cast<double>(a.size());
  double mi = 0.0;
  for (std::size_t x = 0; x < wa; ++x)
    for (std::size_t y = 0; y < wb; ++y) {
      const std::size_t k = joint[x * wb + y];
      if (k == 0) continue;
      const double ratio = (static_cast<double>(k) * total) /
                           (static_cast<double>(ca.levels[x]) * static_cast<double>(cb.levels[y]));
      mi += static_cast<double>(k) / total * std::log(ratio);
    }
  return std::max(mi, 0.0);
}

}  // namespace

std::vector<double> AttributeTable::column(std::size_t col) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, col);
  return out;
}

void AttributeTable::validate(std::size_t min_rows) const {
  if (names.empty()) throw Error(ErrorCode::InvalidArgument, "attribute table has no columns");
  if (values.size() % names.size() != 0) throw Error(ErrorCode::InvalidArgument, "attribute table is ragged");
  if (rows() < min_rows)
    throw Error(ErrorCode::TooFewSamples, "attribute table has " + std::to_string(rows()) + " rows, need " +
                                              std::to_string(min_rows));
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "attribute table contains a non-finite value");
}

void CodeTable::validate() const {
  if (columns.empty()) throw Error(ErrorCode::InvalidArgument, "code table has no columns");
  const std::size_t n = rows();
  for (const auto& col : columns) {
    if (col.values.size() != n) throw Error(ErrorCode::DimensionMismatch, "code column " + col.name + " is ragged");
    for (double v : col.values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "code column " + col.name + " has non-finite value");
      if (col.type == CodeType::Binary && v != 0.0 && v != 1.0)
        throw Error(ErrorCode::InvalidArgument, "binary code " + col.name + " has a value outside {0, 1}");
      if (col.type == CodeType::Categorical &&
          (v != std::floor(v) || v < 0.0 || v >= static_cast<double>(col.categories)))
        throw Error(ErrorCode::InvalidArgument, "categorical code " + col.name + " has a value outside {0.." +
                                                    std::to_string(col.categories - 1) + "}");
    }
    if (col.type == CodeType::Categorical && col.categories < 1)
      throw Error(ErrorCode::InvalidArgument, "categorical code " + col.name + " needs at least one category");
  }
}

std::vector<double> scott_bandwidths(const AttributeTable& table) {
  table.validate(2);
  const double n = static_cast<double>(table.rows());
  const double d = static_cast<double>(table.cols());
  const double factor = std::pow(n, -1.0 / (d + 4.0));
  std::vector<double> out(table.cols());
  for (std::size_t c = 0; c < table.cols(); ++c) {
    const double s = sample_std(table.column(c));
    if (!(s > 0.0)) throw Error(ErrorCode::DegenerateColumn, "column " + table.names[c] + " has zero variance");
    out[c] = factor * s;
  }
  return out;
}

MMDTestResult mmd_linear_test(const AttributeTable& x, const AttributeTable& y) {
  if (x.names != y.names) throw Error(ErrorCode::InvalidArgument, "tables do not share the same columns");
  x.validate();
  y.validate();
  const std::size_t n = 2 * (std::min(x.rows(), y.rows()) / 2);
  if (n < 4) throw Error(ErrorCode::TooFewSamples, "linear-time MMD needs at least 4 samples per side");

  const auto bx = scott_bandwidths(x);
  const auto by = scott_bandwidths(y);
  MMDTestResult res;
  res.n = n;
  std::vector<double> two_sigma2(bx.size());
  for (std::size_t d = 0; d < bx.size(); ++d) {
    const double s2 = bx[d] * bx[d] + by[d] * by[d];
    res.bandwidths.push_back(std::sqrt(s2));
    two_sigma2[d] = 2.0 * s2;
  }

  const std::size_t m = n / 2;
  std::vector<double> h(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = 2 * i, b = 2 * i + 1;
    const double within = gaussian_kernel(x, a, x, b, two_sigma2) + gaussian_kernel(y, a, y, b, two_sigma2);
    const double across = gaussian_kernel(x, a, y, b, two_sigma2) + gaussian_kernel(x, b, y, a, two_sigma2);
    h[i] = within - across;
  }
  const double mean = std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(m);
  double ss = 0.0;
  for (double v : h) ss += (v - mean) * (v - mean);
  res.statistic = mean;
  res.std_error = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
  if (res.std_error > 0.0)
    res.p_value = 0.5 * std::erfc(res.statistic / res.std_error / std::sqrt(2.0));
  else
    res.p_value = res.statistic > 0.0 ? 0.0 : (res.statistic < 0.0 ? 1.0 : 0.5);
  return res;
}

ExpandedCodes dummy_expand(const CodeTable& codes) {
  codes.validate();
  ExpandedCodes out;
  for (std::size_t c = 0; c < codes.columns.size(); ++c) {
    const auto& col = codes.columns[c];
    if (col.type == CodeType::Categorical) {
      for (int k = 0; k < col.categories; ++k) {
        out.names.push_back(col.name + "=" + std::to_string(k));
        out.source.push_back(c);
        out.level.push_back(k);
      }
    } else {
      out.names.push_back(col.name);
      out.source.push_back(c);
      out.level.push_back(-1);
    }
  }
  const std::size_t n = codes.rows(), e = out.names.size();
  out.values.assign(n * e, 0.0);
  for (std::size_t j = 0; j < e; ++j) {
    const auto& col = codes.columns[out.source[j]];
    for (std::size_t i = 0; i < n; ++i)
      out.values[i * e + j] = out.level[j] >= 0 ? (col.values[i] == out.level[j] ? 1.0 : 0.0) : col.values[i];
  }
  return out;
}

PartialCorrTable partial_correlations(const AttributeTable& attributes, const CodeTable& codes) {
  attributes.validate(3);
  const ExpandedCodes ex = dummy_expand(codes);
  if (ex.rows() != attributes.rows())
    throw Error(ErrorCode::DimensionMismatch, "attribute and code tables have different row counts");

  const std::size_t n = attributes.rows(), na = attributes.cols(), ne = ex.cols();
  // Joint covariance of [attributes | expanded codes], N - 1 denominator.
  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(na + ne));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < na; ++a) data(i, a) = attributes.at(i, a);
    for (std::size_t e = 0; e < ne; ++e) data(i, na + e) = ex.values[i * ne + e];
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centred = data.rowwise() - mean;
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n - 1);

  auto column_name = [&](std::size_t k) { return k < na ? attributes.names[k] : ex.names[k - na]; };
  for (std::size_t k = 0; k < na + ne; ++k)
    if (!(cov(k, k) > 0.0)) throw Error(ErrorCode::DegenerateColumn, "column " + column_name(k) + " has zero variance");

  // The last dummy of each categorical code is the reference level when that code is a control.
  auto is_reference = [&](std::size_t e) {
    const auto& col = codes.columns[ex.source[e]];
    return ex.level[e] >= 0 && ex.level[e] == col.categories - 1;
  };

  PartialCorrTable table;
  table.attributes = attributes.names;
  table.codes = ex.names;
  table.values.assign(na * ne, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t e = 0; e < ne; ++e) {
      std::vector<std::size_t> vars = {a, na + e};
      for (std::size_t o = 0; o < ne; ++o) {
        if (o == e || ex.source[o] == ex.source[e] || is_reference(o)) continue;
        vars.push_back(na + o);
      }
      const auto m = static_cast<Eigen::Index>(vars.size());
      Eigen::MatrixXd corr(m, m);
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q)
          corr(p, q) = cov(vars[p], vars[q]) / std::sqrt(cov(vars[p], vars[p]) * cov(vars[q], vars[q]));

      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
      const Eigen::VectorXd& lambda = eig.eigenvalues();
      constexpr double kConditionFloor = 1e-10;
      if (!(lambda(0) > kConditionFloor * lambda(m - 1))) {
        std::ostringstream msg;
        msg << "covariance of (" << attributes.names[a] << ", controls for " << ex.names[e]
            << ") is singular; near-collinear columns:";
        const Eigen::VectorXd v = eig.eigenvectors().col(0);
        for (Eigen::Index p = 0; p < m; ++p)
          if (std::abs(v(p)) > 0.1) msg << ' ' << column_name(vars[p]);
        throw Error(ErrorCode::SingularCovariance, msg.str());
      }
      const Eigen::MatrixXd precision =
          eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
      const double r = -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
      table.values[a * ne + e] = std::clamp(r, -1.0, 1.0);
    }
  return table;
}

std::vector<int> equal_frequency_bins(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bin count must be positive");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> out(n);
  std::size_t first_rank = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && values[order[r]] != values[order[r - 1]]) first_rank = r;
    out[order[r]] = static_cast<int>(first_rank * static_cast<std::size_t>(bins) / n);
  }
  return out;
}

MIGReport mig(const AttributeTable& attributes, const CodeTable& codes, int bins) {
  attributes.validate(2);
  codes.validate();
  if (codes.rows() != attributes.rows())
    throw Error(ErrorCode::DimensionMismatch, "attribute and code tables have different row counts");
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "MIG needs at least two bins");

  const std::size_t n = attributes.rows(), na = attributes.cols(), nc = codes.columns.size();
  MIGReport report;
  report.attributes = attributes.names;
  for (const auto& c : codes.columns) report.codes.push_back(c.name);
  report.bins = bins;
  report.mutual_information.assign(na * nc, 0.0);

  std::vector<std::vector<int>> code_levels(nc);
  std::vector<Counts> code_counts(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    code_levels[c] = as_levels(codes.columns[c], bins);
    code_counts[c] = histogram(code_levels[c]);
  }

  for (std::size_t a = 0; a < na; ++a) {
    const auto levels = equal_frequency_bins(attributes.column(a), bins);
    const Counts counts = histogram(levels);
    const double h = entropy(counts, n);
    if (!(h > 0.0)) throw Error(ErrorCode::DegenerateAttribute, "attribute " + attributes.names[a] + " has zero entropy");
    report.entropy.push_back(h);

    double first = 0.0, second = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const double mi = mutual_information(levels, counts, code_levels[c], code_counts[c]);
      report.mutual_information[a * nc + c] = mi;
      if (mi > first) {
        second = first;
        first = mi;
      } else if (mi > second) {
        second = mi;
      }
    }
    report.per_attribute.push_back(std::clamp((first - second) / h, 0.0, 1.0));
  }
  report.overall = std::accumulate(report.per_attribute.begin(), report.per_attribute.end(), 0.0) /
                   static_cast<double>(na);
  return report;
}

}  // namespace morpho

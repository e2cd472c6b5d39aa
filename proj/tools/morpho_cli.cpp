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
// Command-line front end. Talks to the library only through the C API.

#include <morpho/morpho.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using morpho::cli::CliError;
using morpho::cli::CsvTable;

namespace {

constexpr std::uint64_t kDefaultSeed = 2019;
constexpr const char* kAttributes[] = {"length", "thickness", "slant", "width", "height"};
constexpr int kHistogramBins = 100;

void check(morpho_status status) {
  if (status != MORPHO_OK) throw CliError(morpho_status_name(status), morpho_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<morpho_dataset, Deleter<morpho_dataset, morpho_dataset_free>>;
using LabelsPtr = std::unique_ptr<morpho_labels, Deleter<morpho_labels, morpho_labels_free>>;
using MixedPtr = std::unique_ptr<morpho_mixed, Deleter<morpho_mixed, morpho_mixed_free>>;

DatasetPtr load_images(const std::string& path) {
  morpho_dataset* ds = nullptr;
  check(morpho_dataset_read(path.c_str(), &ds));
  return DatasetPtr(ds);
}

LabelsPtr load_labels(const std::string& path, std::size_t expected) {
  morpho_labels* labels = nullptr;
  check(morpho_labels_read(path.c_str(), &labels));
  LabelsPtr owned(labels);
  if (morpho_labels_count(labels) != expected)
    throw CliError("DimensionMismatch", path + ": " + std::to_string(morpho_labels_count(labels)) +
                                            " labels for " + std::to_string(expected) + " images");
  return owned;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError("IoError", "cannot create " + path.string());
  return out;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError("IoError", "cannot create output directory " + dir.string() + ": " + ec.message());
}

// ---- measure -------------------------------------------------------------

struct MeasureOptions {
  std::string images;
  std::string labels;
  unsigned scale = 4;
  unsigned workers = 1;
  std::string out_dir = ".";
};

void run_measure(const MeasureOptions& opt) {
  const DatasetPtr ds = load_images(opt.images);
  const std::size_t n = morpho_dataset_count(ds.get());
  LabelsPtr labels;
  if (!opt.labels.empty()) labels = load_labels(opt.labels, n);

  std::vector<morpho_record> records(n);
  std::vector<morpho_status> statuses(n);
  check(morpho_measure_dataset(ds.get(), opt.scale, opt.workers, records.data(), statuses.data()));

  prepare_out_dir(opt.out_dir);
  const fs::path path = fs::path(opt.out_dir) / "morphometrics.csv";
  auto out = open_output(path);
  out << "index,label,length,thickness,slant,width,height,error\n";
  const double deg = 180.0 / std::numbers::pi;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out << i << ',';
    if (labels) out << static_cast<int>(morpho_labels_data(labels.get())[i]);
    if (statuses[i] == MORPHO_OK) {
      const auto& r = records[i];
      out << ',' << fixed(r.length) << ',' << fixed(r.thickness) << ',' << fixed(r.slant * deg) << ','
          << fixed(r.width) << ',' << fixed(r.height) << ",\n";
    } else {
      ++failed;
      out << ",,,,,," << morpho_status_name(statuses[i]) << '\n';
    }
  }
  if (!out) throw CliError("IoError", "write error on " + path.string());
  std::cerr << "measured " << n << " images (" << failed << " failed) -> " << path.string() << '\n';
}

// ---- perturb -------------------------------------------------------------

morpho_perturb_spec parse_menu_entry(const std::string& entry) {
  const auto parts = morpho::cli::split(entry, ':');
  const std::string& name = parts.front();
  int kind = -1;
  if (name == "plain") kind = MORPHO_PERTURB_IDENTITY;
  else if (name == "thin") kind = MORPHO_PERTURB_THIN;
  else if (name == "thick") kind = MORPHO_PERTURB_THICKEN;
  else if (name == "swel") kind = MORPHO_PERTURB_SWELL;
  else if (name == "frac") kind = MORPHO_PERTURB_FRACTURE;
  else throw CliError("InvalidArgument", "unknown perturbation '" + name + "' (plain, thin, thick, swel, frac)");

  morpho_perturb_spec spec{};
  check(morpho_perturb_spec_default(kind, &spec));
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto kv = morpho::cli::split(parts[i], '=');
    if (kv.size() != 2) throw CliError("InvalidArgument", "menu parameter '" + parts[i] + "' is not key=value");
    const std::string& key = kv[0];
    double v = 0.0;
    try {
      v = morpho::cli::parse_number(kv[1], "menu entry " + entry);
    } catch (const CliError& e) {
      throw CliError("InvalidArgument", e.what());
    }
    auto reject = [&] { throw CliError("InvalidArgument", "'" + key + "' does not apply to " + name); };
    if (key == "amount") (kind == MORPHO_PERTURB_THIN || kind == MORPHO_PERTURB_THICKEN) ? void(spec.amount = v) : reject();
    else if (key == "strength") kind == MORPHO_PERTURB_SWELL ? void(spec.strength = v) : reject();
    else if (key == "radius") kind == MORPHO_PERTURB_SWELL ? void(spec.radius_coef = v) : reject();
    else if (key == "count") {
      if (kind != MORPHO_PERTURB_FRACTURE) reject();
      if (v != std::floor(v)) throw CliError("InvalidArgument", "fracture count must be an integer");
      spec.count = static_cast<int>(v);
    } else if (key == "brush") kind == MORPHO_PERTURB_FRACTURE ? void(spec.brush = v) : reject();
    else if (key == "min-dist") kind == MORPHO_PERTURB_FRACTURE ? void(spec.min_distance = v) : reject();
    else if (key == "window") kind == MORPHO_PERTURB_FRACTURE ? void(spec.window = v) : reject();
    else if (key == "extension") kind == MORPHO_PERTURB_FRACTURE ? void(spec.extension = v) : reject();
    else throw CliError("InvalidArgument", "unknown menu parameter '" + key + "'");
  }
  return spec;
}

std::vector<morpho_perturb_spec> parse_menu(const std::string& menu) {
  std::vector<morpho_perturb_spec> specs;
  for (const auto& entry : morpho::cli::split(menu, ',')) {
    if (entry.empty()) throw CliError("InvalidArgument", "empty entry in --menu");
    specs.push_back(parse_menu_entry(entry));
  }
  return specs;
}

// Sample sheet: one row per source image, original followed by every menu entry.
void write_examples(const morpho_dataset* ds, const std::vector<morpho_perturb_spec>& menu, std::size_t rows,
                    unsigned scale, std::uint64_t seed, const fs::path& path) {
  const std::size_t h = morpho_dataset_height(ds), w = morpho_dataset_width(ds);
  rows = std::min(rows, morpho_dataset_count(ds));
  const std::size_t cols = menu.size() + 1;
  std::vector<std::uint8_t> sheet(rows * h * cols * w, 0);
  std::vector<std::uint8_t> tile(h * w);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::uint8_t* src = morpho_dataset_image(ds, i);
    for (std::size_t t = 0; t < cols; ++t) {
      if (t == 0)
        std::copy(src, src + h * w, tile.begin());
      else
        check(morpho_perturb_image(src, static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(w), &menu[t - 1],
                                   scale, morpho_perturbation_seed(seed, i), tile.data(), nullptr));
      for (std::size_t r = 0; r < h; ++r)
        std::copy(tile.begin() + r * w, tile.begin() + (r + 1) * w, sheet.begin() + ((i * h + r) * cols + t) * w);
    }
  }
  auto out = open_output(path);
  out << "P5\n" << cols * w << ' ' << rows * h << "\n255\n";
  out.write(reinterpret_cast<const char*>(sheet.data()), static_cast<std::streamsize>(sheet.size()));
  if (!out) throw CliError("IoError", "write error on " + path.string());
}

struct PerturbOptions {
  std::string images;
  std::string labels;
  std::string menu;
  std::uint64_t seed = kDefaultSeed;
  unsigned scale = 4;
  unsigned workers = 1;
  std::string out_dir = ".";
  std::size_t examples = 0;
};

void run_perturb(const PerturbOptions& opt) {
  const auto menu = parse_menu(opt.menu);
  const DatasetPtr ds = load_images(opt.images);
  LabelsPtr labels;
  if (!opt.labels.empty()) labels = load_labels(opt.labels, morpho_dataset_count(ds.get()));

  morpho_mixed* raw = nullptr;
  check(morpho_mixed_build(ds.get(), labels.get(), menu.data(), menu.size(), opt.seed, opt.scale, opt.workers, &raw));
  const MixedPtr mixed(raw);

  prepare_out_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  check(morpho_dataset_write(morpho_mixed_images(mixed.get()), (dir / "images-idx3-ubyte").c_str()));
  check(morpho_labels_write(morpho_mixed_perturbation_labels(mixed.get()), (dir / "pert-labels-idx1-ubyte").c_str()));
  if (labels) check(morpho_labels_write(morpho_mixed_labels(mixed.get()), (dir / "labels-idx1-ubyte").c_str()));

  const fs::path outcomes_path = dir / "outcomes.jsonl";
  auto out = open_output(outcomes_path);
  const std::size_t n = morpho_dataset_count(ds.get());
  for (std::size_t i = 0; i < n; ++i) out << morpho_mixed_outcome(mixed.get(), i) << '\n';
  if (!out) throw CliError("IoError", "write error on " + outcomes_path.string());

  if (opt.examples > 0 && morpho_dataset_count(ds.get()) > 0) write_examples(ds.get(), menu, opt.examples, opt.scale, opt.seed, dir / "examples.pgm");
  std::cerr << "perturbed " << n << " images (" << morpho_mixed_failures(mixed.get())
            << " fell back to plain) -> " << dir.string() << '\n';
}

// ---- compare -------------------------------------------------------------

struct Samples {
  std::vector<double> values;  // rows x 5
  std::size_t skipped = 0;
};

Samples read_morphometrics(const std::string& path) {
  const CsvTable table = morpho::cli::read_csv(path);
  std::size_t cols[5];
  for (int a = 0; a < 5; ++a) cols[a] = table.require(kAttributes[a], path);
  const int error_col = table.find("error");
  Samples s;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if ((error_col >= 0 && !row[error_col].empty()) ||
        std::any_of(std::begin(cols), std::end(cols), [&](std::size_t c) { return row[c].empty(); })) {
      ++s.skipped;
      continue;
    }
    for (std::size_t c : cols)
      s.values.push_back(morpho::cli::parse_number(row[c], path + " row " + std::to_string(r + 1)));
  }
  return s;
}

void write_histograms(const Samples& real, const Samples& samples, const fs::path& dir, ordered_json& report) {
  ordered_json files = ordered_json::array();
  for (int a = 0; a < 5; ++a) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto* s : {&real, &samples})
      for (std::size_t i = a; i < s->values.size(); i += 5) {
        lo = std::min(lo, s->values[i]);
        hi = std::max(hi, s->values[i]);
      }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    const double width = (hi - lo) / kHistogramBins;
    auto bin_of = [&](double v) {
      if (width <= 0.0) return 0;
      return std::min(kHistogramBins - 1, static_cast<int>((v - lo) / width));
    };
    std::vector<std::size_t> counts_real(kHistogramBins, 0), counts_samples(kHistogramBins, 0);
    for (std::size_t i = a; i < real.values.size(); i += 5) ++counts_real[bin_of(real.values[i])];
    for (std::size_t i = a; i < samples.values.size(); i += 5) ++counts_samples[bin_of(samples.values[i])];

    const std::string name = std::string("hist_") + kAttributes[a] + ".csv";
    auto out = open_output(dir / name);
    out << "bin_left,bin_right,real,samples\n";
    for (int b = 0; b < kHistogramBins; ++b)
      out << fixed(lo + b * width) << ',' << fixed(b + 1 == kHistogramBins ? hi : lo + (b + 1) * width) << ','
          << counts_real[b] << ',' << counts_samples[b] << '\n';
    files.push_back(name);
  }
  report["histograms"] = {{"bins", kHistogramBins}, {"range", "pooled min-max, equal width"}, {"files", files}};
}

struct CompareOptions {
  std::string real;
  std::string samples;
  std::string out_dir = ".";
};

void run_compare(const CompareOptions& opt) {
  const Samples real = read_morphometrics(opt.real);
  const Samples samples = read_morphometrics(opt.samples);
  morpho_mmd_result res{};
  double bandwidths[5];
  check(morpho_mmd_linear(real.values.data(), real.values.size() / 5, samples.values.data(),
                          samples.values.size() / 5, 5, &res, bandwidths));

  ordered_json report;
  report["schema"] = "morpho.compare/1";
  report["test"] = "linear-time MMD, Gaussian product kernel, Scott bandwidths";
  report["alternative"] = "one-sided (MMD^2 > 0)";
  report["statistic"] = res.statistic;
  report["std_error"] = res.std_error;
  report["p_value"] = res.p_value;
  report["n"] = res.n;
  ordered_json bw;
  for (int a = 0; a < 5; ++a) bw[kAttributes[a]] = bandwidths[a];
  report["bandwidths"] = bw;
  report["rows"] = {{"real", real.values.size() / 5}, {"samples", samples.values.size() / 5}};
  report["skipped"] = {{"real", real.skipped}, {"samples", samples.skipped}};

  prepare_out_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_histograms(real, samples, dir, report);
  auto out = open_output(dir / "compare.json");
  out << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
}

// ---- disentangle ---------------------------------------------------------

struct CodeSpec {
  std::string name;
  morpho_code_kind kind{};
};

CodeSpec parse_code_header(const std::string& header, const std::string& path) {
  const auto parts = morpho::cli::split(header, ':');
  auto bad = [&] {
    throw CliError("SchemaMismatch", path + ": code column '" + header +
                                         "' needs a type tag (name:cont, name:bin or name:cat:K)");
  };
  if (parts.size() < 2 || parts[0].empty()) bad();
  CodeSpec spec{parts[0], {}};
  if (parts[1] == "cont" && parts.size() == 2) spec.kind = {MORPHO_CODE_CONTINUOUS, 0};
  else if (parts[1] == "bin" && parts.size() == 2) spec.kind = {MORPHO_CODE_BINARY, 0};
  else if (parts[1] == "cat" && parts.size() == 3) {
    const double k = morpho::cli::parse_number(parts[2], path + " header " + header);
    if (k < 1 || k != std::floor(k) || k > 1e6) bad();
    spec.kind = {MORPHO_CODE_CATEGORICAL, static_cast<std::uint32_t>(k)};
  } else {
    bad();
  }
  return spec;
}

struct DisentangleOptions {
  std::string morphometrics;
  std::string codes;
  std::string factors;
  unsigned bins = 20;
  std::string out_dir = ".";
};

void run_disentangle(const DisentangleOptions& opt) {
  const CsvTable morph = morpho::cli::read_csv(opt.morphometrics);
  const CsvTable codes = morpho::cli::read_csv(opt.codes);
  std::optional<CsvTable> factors;
  if (!opt.factors.empty()) factors = morpho::cli::read_csv(opt.factors);

  const std::size_t n = morph.rows.size();
  if (codes.rows.size() != n)
    throw CliError("DimensionMismatch", "row counts differ: " + opt.morphometrics + " has " + std::to_string(n) +
                                            ", " + opt.codes + " has " + std::to_string(codes.rows.size()));
  if (factors && factors->rows.size() != n)
    throw CliError("DimensionMismatch", "row counts differ: " + opt.morphometrics + " has " + std::to_string(n) +
                                            ", " + opt.factors + " has " + std::to_string(factors->rows.size()));

  std::vector<std::string> attr_names;
  std::vector<std::pair<const CsvTable*, std::size_t>> attr_cols;
  for (const char* a : kAttributes) {
    attr_names.push_back(a);
    attr_cols.push_back({&morph, morph.require(a, opt.morphometrics)});
  }
  if (factors)
    for (std::size_t c = 0; c < factors->header.size(); ++c) {
      attr_names.push_back(factors->header[c]);
      attr_cols.push_back({&*factors, c});
    }

  std::vector<CodeSpec> code_specs;
  for (const auto& h : codes.header) code_specs.push_back(parse_code_header(h, opt.codes));
  std::vector<morpho_code_kind> kinds;
  for (const auto& c : code_specs) kinds.push_back(c.kind);

  // Rows whose measurement failed are dropped from every table alike.
  const int error_col = morph.find("error");
  std::vector<double> attrs, code_values;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (error_col >= 0 && !morph.rows[r][error_col].empty()) {
      ++dropped;
      continue;
    }
    for (std::size_t a = 0; a < attr_cols.size(); ++a) {
      const auto& [table, col] = attr_cols[a];
      attrs.push_back(morpho::cli::parse_number(table->rows[r][col], attr_names[a] + " row " + std::to_string(r + 1)));
    }
    for (std::size_t c = 0; c < code_specs.size(); ++c)
      code_values.push_back(
          morpho::cli::parse_number(codes.rows[r][c], code_specs[c].name + " row " + std::to_string(r + 1)));
  }
  const std::size_t rows = n - dropped;
  const std::size_t na = attr_names.size(), nc = code_specs.size();
  const std::size_t ne = morpho_expanded_code_count(kinds.data(), nc);

  std::vector<std::string> expanded;
  for (const auto& c : code_specs) {
    if (c.kind.type == MORPHO_CODE_CATEGORICAL)
      for (std::uint32_t k = 0; k < c.kind.categories; ++k) expanded.push_back(c.name + "=" + std::to_string(k));
    else
      expanded.push_back(c.name);
  }

  std::vector<double> pcorr(na * ne);
  check(morpho_partial_correlations(attrs.data(), rows, na, code_values.data(), kinds.data(), nc, pcorr.data()));
  std::vector<double> per_attr(na), mi(na * nc);
  double overall = 0.0;
  check(morpho_mig(attrs.data(), rows, na, code_values.data(), kinds.data(), nc, opt.bins, per_attr.data(), &overall,
                   mi.data()));

  prepare_out_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  {
    auto out = open_output(dir / "partial_correlations.csv");
    out << "attribute";
    for (const auto& e : expanded) out << ',' << e;
    out << '\n';
    for (std::size_t a = 0; a < na; ++a) {
      out << attr_names[a];
      for (std::size_t e = 0; e < ne; ++e) out << ',' << fixed(pcorr[a * ne + e]);
      out << '\n';
    }
  }
  {
    auto out = open_output(dir / "mig.csv");
    out << "attribute,mig\n";
    for (std::size_t a = 0; a < na; ++a) out << attr_names[a] << ',' << fixed(per_attr[a]) << '\n';
    out << "overall," << fixed(overall) << '\n';
  }

  ordered_json report;
  report["schema"] = "morpho.disentangle/1";
  report["rows"] = rows;
  report["dropped_rows"] = dropped;
  report["attributes"] = attr_names;
  report["codes"] = expanded;
  ordered_json table = ordered_json::array();
  for (std::size_t a = 0; a < na; ++a)
    table.push_back(std::vector<double>(pcorr.begin() + a * ne, pcorr.begin() + (a + 1) * ne));
  report["partial_correlations"] = table;
  ordered_json mig;
  mig["bins"] = opt.bins;
  mig["binning"] = "equal-frequency for continuous columns, categorical and binary codes as-is";
  std::vector<std::string> code_names;
  for (const auto& c : code_specs) code_names.push_back(c.name);
  mig["codes"] = code_names;
  ordered_json per = ordered_json::object();
  for (std::size_t a = 0; a < na; ++a) per[attr_names[a]] = per_attr[a];
  mig["per_attribute"] = per;
  mig["overall"] = overall;
  ordered_json mi_rows = ordered_json::array();
  for (std::size_t a = 0; a < na; ++a)
    mi_rows.push_back(std::vector<double>(mi.begin() + a * nc, mi.begin() + (a + 1) * nc));
  mig["mutual_information_nats"] = mi_rows;
  report["mig"] = mig;
  auto out = open_output(dir / "disentangle.json");
  out << report.dump(2) << '\n';
  std::cout << report.dump(2) << '\n';
}

void report_error(bool json, const std::string& code, const std::string& message) {
  if (json)
    std::cerr << ordered_json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
  else
    std::cerr << "morpho: error: " << message << " [" << code << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Glyph morphometry, perturbation and distribution statistics"};
  app.set_version_flag("--version", std::string(morpho_version()));
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "Print failures as a JSON object on stderr");

  MeasureOptions measure;
  auto* m = app.add_subcommand("measure", "Measure length, thickness, slant, width and height of every image");
  m->add_option("images", measure.images, "IDX image file")->required();
  m->add_option("labels", measure.labels, "IDX label file");
  m->add_option("--scale", measure.scale, "Upscaling factor")->check(CLI::Range(1, 64));
  m->add_option("--workers", measure.workers, "Worker threads")->check(CLI::Range(1, 1024));
  m->add_option("--out-dir", measure.out_dir, "Output directory");

  PerturbOptions perturb;
  auto* p = app.add_subcommand("perturb", "Build a perturbed dataset from a menu of perturbations");
  p->add_option("images", perturb.images, "IDX image file")->required();
  p->add_option("labels", perturb.labels, "IDX label file, copied alongside");
  p->add_option("--menu", perturb.menu, "Comma-separated entries: plain, thin, thick, swel, frac[:key=value...]")
      ->required();
  p->add_option("--seed", perturb.seed, "Master seed")->capture_default_str();
  p->add_option("--scale", perturb.scale, "Upscaling factor")->check(CLI::Range(1, 64));
  p->add_option("--workers", perturb.workers, "Worker threads")->check(CLI::Range(1, 1024));
  p->add_option("--out-dir", perturb.out_dir, "Output directory");
  p->add_option("--examples", perturb.examples, "Write a sample sheet of the first N images (examples.pgm)");

  CompareOptions compare;
  auto* c = app.add_subcommand("compare", "Two-sample MMD test between two morphometrics files");
  c->add_option("real", compare.real, "Reference morphometrics CSV")->required();
  c->add_option("samples", compare.samples, "Sample morphometrics CSV")->required();
  c->add_option("--out-dir", compare.out_dir, "Output directory");

  DisentangleOptions dis;
  auto* d = app.add_subcommand("disentangle", "Partial correlations and MIG between attributes and latent codes");
  d->add_option("morphometrics", dis.morphometrics, "Morphometrics CSV")->required();
  d->add_option("codes", dis.codes, "Codes CSV with typed headers (name:cont, name:bin, name:cat:K)")->required();
  d->add_option("--factors", dis.factors, "Extra ground-truth factor columns (CSV)");
  d->add_option("--bins", dis.bins, "Equal-frequency bins for MIG")->check(CLI::Range(2, 10000));
  d->add_option("--out-dir", dis.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (json_errors) {
      report_error(true, "UsageError", e.what());
      return 2;
    }
    app.exit(e);
    return 2;
  }

  try {
    if (*m) run_measure(measure);
    else if (*p) run_perturb(perturb);
    else if (*c) run_compare(compare);
    else if (*d) run_disentangle(dis);
    return 0;
  } catch (const CliError& e) {
    report_error(json_errors, e.code(), e.what());
  } catch (const std::exception& e) {
    report_error(json_errors, "Internal", e.what());
  }
  return 1;
}

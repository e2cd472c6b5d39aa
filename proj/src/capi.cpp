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
#include "morpho/morpho.h"

#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <memory>
#include <new>
#include <string>

#include "idx_io.hpp"
#include "morphometry.hpp"
#include "parallel.hpp"
#include "perturbations.hpp"
#include "stats_eval.hpp"

struct morpho_dataset {
  morpho::ImageDataset data;
};

struct morpho_labels {
  morpho::LabelVector data;
};

struct morpho_mixed {
  morpho_dataset images;
  morpho_labels labels;
  morpho_labels perturbation_labels;
  std::vector<std::string> outcomes;
  std::size_t failures = 0;
};

namespace {

thread_local std::string g_last_error;

morpho_status set_error(morpho_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes and the thread-local message.
template <typename Fn>
morpho_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    fn();
    return MORPHO_OK;
  } catch (const morpho::Error& e) {
    return set_error(static_cast<morpho_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MORPHO_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MORPHO_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(MORPHO_E_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw morpho::Error(morpho::ErrorCode::InvalidArgument, what);
}

morpho::GrayImage gray_from(const uint8_t* pixels, uint32_t height, uint32_t width) {
  require(pixels != nullptr, "pixels is NULL");
  require(height > 0 && width > 0 && height <= 1u << 15 && width <= 1u << 15, "image dimensions out of range");
  const std::size_t n = std::size_t{height} * width;
  return morpho::GrayImage(static_cast<int>(height), static_cast<int>(width), std::vector<double>(pixels, pixels + n));
}

int checked_scale(uint32_t scale) {
  require(scale >= 1 && scale <= 64, "scale must be in [1, 64]");
  return static_cast<int>(scale);
}

morpho::PerturbSpec to_spec(const morpho_perturb_spec& s) {
  require(s.kind >= MORPHO_PERTURB_IDENTITY && s.kind <= MORPHO_PERTURB_FRACTURE, "unknown perturbation kind");
  morpho::PerturbSpec spec;
  spec.kind = static_cast<morpho::PerturbKind>(s.kind);
  spec.amount = s.amount;
  spec.strength = s.strength;
  spec.radius_coef = s.radius_coef;
  spec.count = s.count;
  spec.brush = s.brush;
  spec.min_distance = s.min_distance;
  spec.window = s.window;
  spec.extension = s.extension;
  spec.validate();
  return spec;
}

void copy_out(const std::vector<uint8_t>& bytes, uint8_t** out, size_t* size) {
  require(out != nullptr && size != nullptr, "output pointers are NULL");
  auto* buf = static_cast<uint8_t*>(std::malloc(bytes.empty() ? 1 : bytes.size()));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, bytes.data(), bytes.size());
  *out = buf;
  *size = bytes.size();
}

char* copy_string(const std::string& s) {
  auto* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return buf;
}

morpho::AttributeTable attribute_table(const double* values, size_t n, size_t cols, const char* prefix) {
  require(values != nullptr || n * cols == 0, "table is NULL");
  morpho::AttributeTable t;
  for (size_t c = 0; c < cols; ++c) t.names.push_back(prefix + std::to_string(c));
  t.values.assign(values, values + n * cols);
  return t;
}

morpho::CodeTable code_table(const double* codes, size_t n, const morpho_code_kind* kinds, size_t n_codes) {
  require(codes != nullptr && kinds != nullptr, "codes or kinds is NULL");
  morpho::CodeTable t;
  for (size_t c = 0; c < n_codes; ++c) {
    morpho::CodeColumn col;
    col.name = "c" + std::to_string(c);
    require(kinds[c].type >= MORPHO_CODE_CONTINUOUS && kinds[c].type <= MORPHO_CODE_BINARY, "unknown code type");
    col.type = static_cast<morpho::CodeType>(kinds[c].type);
    col.categories = static_cast<int>(kinds[c].categories);
    col.values.resize(n);
    for (size_t i = 0; i < n; ++i) col.values[i] = codes[i * n_codes + c];
    t.columns.push_back(std::move(col));
  }
  return t;
}

}  // namespace

extern "C" {

const char* morpho_version(void) { return "1.0.0"; }

const char* morpho_status_name(morpho_status status) {
  return morpho::to_string(static_cast<morpho::ErrorCode>(status));
}

const char* morpho_last_error(void) { return g_last_error.c_str(); }

morpho_status morpho_dataset_read(const char* path, morpho_dataset** out) {
  return guarded([&] {
    require(path && out, "path or out is NULL");
    *out = new morpho_dataset{morpho::load_idx_images(path)};
  });
}

morpho_status morpho_dataset_read_memory(const uint8_t* bytes, size_t size, morpho_dataset** out) {
  return guarded([&] {
    require((bytes || size == 0) && out, "bytes or out is NULL");
    *out = new morpho_dataset{morpho::read_idx_images(morpho::maybe_gunzip({bytes, size}))};
  });
}

morpho_status morpho_dataset_create(const uint8_t* pixels, size_t count, uint32_t height, uint32_t width,
                                    morpho_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(count == 0 || (height > 0 && width > 0), "images need positive dimensions");
    require(height <= 0x7FFFFFFFu && width <= 0x7FFFFFFFu, "image dimensions out of range");
    const std::size_t n = count * height * width;
    require(pixels != nullptr || n == 0, "pixels is NULL");
    *out = new morpho_dataset{morpho::ImageDataset(static_cast<int>(height), static_cast<int>(width),
                                                   std::vector<uint8_t>(pixels, pixels + n))};
  });
}

morpho_status morpho_dataset_write(const morpho_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset && path, "dataset or path is NULL");
    morpho::save_idx_images(path, dataset->data);
  });
}

morpho_status morpho_dataset_write_memory(const morpho_dataset* dataset, uint8_t** bytes, size_t* size) {
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    copy_out(morpho::write_idx_images(dataset->data), bytes, size);
  });
}

size_t morpho_dataset_count(const morpho_dataset* dataset) { return dataset ? dataset->data.count() : 0; }
uint32_t morpho_dataset_height(const morpho_dataset* dataset) {
  return dataset ? static_cast<uint32_t>(dataset->data.height()) : 0;
}
uint32_t morpho_dataset_width(const morpho_dataset* dataset) {
  return dataset ? static_cast<uint32_t>(dataset->data.width()) : 0;
}

const uint8_t* morpho_dataset_image(const morpho_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->data.count()) return nullptr;
  return dataset->data.bytes().data() + index * dataset->data.image_size();
}

void morpho_dataset_free(morpho_dataset* dataset) { delete dataset; }

morpho_status morpho_labels_read(const char* path, morpho_labels** out) {
  return guarded([&] {
    require(path && out, "path or out is NULL");
    *out = new morpho_labels{morpho::load_idx_labels(path)};
  });
}

morpho_status morpho_labels_read_memory(const uint8_t* bytes, size_t size, morpho_labels** out) {
  return guarded([&] {
    require((bytes || size == 0) && out, "bytes or out is NULL");
    *out = new morpho_labels{morpho::read_idx_labels(morpho::maybe_gunzip({bytes, size}))};
  });
}

morpho_status morpho_labels_create(const uint8_t* labels, size_t count, morpho_labels** out) {
  return guarded([&] {
    require((labels || count == 0) && out, "labels or out is NULL");
    *out = new morpho_labels{morpho::LabelVector(labels, labels + count)};
  });
}

morpho_status morpho_labels_write(const morpho_labels* labels, const char* path) {
  return guarded([&] {
    require(labels && path, "labels or path is NULL");
    morpho::save_idx_labels(path, labels->data);
  });
}

morpho_status morpho_labels_write_memory(const morpho_labels* labels, uint8_t** bytes, size_t* size) {
  return guarded([&] {
    require(labels != nullptr, "labels is NULL");
    copy_out(morpho::write_idx_labels(labels->data), bytes, size);
  });
}

size_t morpho_labels_count(const morpho_labels* labels) { return labels ? labels->data.size() : 0; }
const uint8_t* morpho_labels_data(const morpho_labels* labels) { return labels ? labels->data.data() : nullptr; }
void morpho_labels_free(morpho_labels* labels) { delete labels; }

void morpho_buffer_free(void* buffer) { std::free(buffer); }

morpho_status morpho_measure(const uint8_t* pixels, uint32_t height, uint32_t width, uint32_t scale,
                             morpho_record* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const auto rec = morpho::measure(gray_from(pixels, height, width), checked_scale(scale));
    *out = {rec.length, rec.thickness, rec.slant, rec.width, rec.height};
  });
}

morpho_status morpho_measure_dataset(const morpho_dataset* dataset, uint32_t scale, uint32_t workers,
                                     morpho_record* records, morpho_status* statuses) {
  return guarded([&] {
    require(dataset != nullptr, "dataset is NULL");
    require((records && statuses) || dataset->data.count() == 0, "records or statuses is NULL");
    require(workers >= 1, "workers must be >= 1");
    const int f = checked_scale(scale);
    const auto& ds = dataset->data;
    morpho::parallel_for(ds.count(), workers, [&](std::size_t i) {
      try {
        const auto rec = morpho::measure(ds.gray(i), f);
        records[i] = {rec.length, rec.thickness, rec.slant, rec.width, rec.height};
        statuses[i] = MORPHO_OK;
      } catch (const morpho::Error& e) {
        records[i] = {};
        statuses[i] = static_cast<morpho_status>(e.code());
      }
    });
  });
}

morpho_status morpho_perturb_spec_default(int kind, morpho_perturb_spec* spec) {
  return guarded([&] {
    require(spec != nullptr, "spec is NULL");
    morpho::PerturbSpec s;
    switch (kind) {
      case MORPHO_PERTURB_IDENTITY: s = morpho::PerturbSpec::identity(); break;
      case MORPHO_PERTURB_THIN: s = morpho::PerturbSpec::thin(); break;
      case MORPHO_PERTURB_THICKEN: s = morpho::PerturbSpec::thicken(); break;
      case MORPHO_PERTURB_SWELL: s = morpho::PerturbSpec::swell(); break;
      case MORPHO_PERTURB_FRACTURE: s = morpho::PerturbSpec::fracture(); break;
      default: require(false, "unknown perturbation kind");
    }
    *spec = {static_cast<int>(s.kind), s.amount, s.strength, s.radius_coef, s.count,
             s.brush, s.min_distance, s.window, s.extension};
  });
}

morpho_status morpho_perturb_image(const uint8_t* pixels, uint32_t height, uint32_t width,
                                   const morpho_perturb_spec* spec, uint32_t scale, uint64_t seed,
                                   uint8_t* out_pixels, char** outcome_json) {
  return guarded([&] {
    require(spec && out_pixels, "spec or out_pixels is NULL");
    auto [img, outcome] = morpho::perturb_image(gray_from(pixels, height, width), to_spec(*spec),
                                                checked_scale(scale), seed);
    for (std::size_t i = 0; i < img.size(); ++i) out_pixels[i] = static_cast<uint8_t>(img.data()[i]);
    if (outcome_json) *outcome_json = copy_string(morpho::outcome_to_json(outcome, 0));
  });
}

morpho_status morpho_mixed_build(const morpho_dataset* dataset, const morpho_labels* labels,
                                 const morpho_perturb_spec* menu, size_t menu_size, uint64_t master_seed,
                                 uint32_t scale, uint32_t workers, morpho_mixed** out) {
  return guarded([&] {
    require(dataset && menu && out, "dataset, menu or out is NULL");
    require(workers >= 1, "workers must be >= 1");
    std::vector<morpho::PerturbSpec> specs;
    for (size_t i = 0; i < menu_size; ++i) specs.push_back(to_spec(menu[i]));
    auto mixed = morpho::build_mixed_dataset(dataset->data, labels ? labels->data : morpho::LabelVector{}, specs,
                                             master_seed, checked_scale(scale), workers);
    auto result = std::make_unique<morpho_mixed>();
    result->images.data = std::move(mixed.images);
    result->labels.data = std::move(mixed.labels);
    result->perturbation_labels.data = std::move(mixed.perturbation_labels);
    result->outcomes.reserve(mixed.outcomes.size());
    for (std::size_t i = 0; i < mixed.outcomes.size(); ++i) {
      result->outcomes.push_back(
          morpho::outcome_to_json(mixed.outcomes[i], i, result->perturbation_labels.data[i]));
      if (!mixed.outcomes[i].applied) ++result->failures;
    }
    *out = result.release();
  });
}

const morpho_dataset* morpho_mixed_images(const morpho_mixed* mixed) { return mixed ? &mixed->images : nullptr; }
const morpho_labels* morpho_mixed_labels(const morpho_mixed* mixed) { return mixed ? &mixed->labels : nullptr; }
const morpho_labels* morpho_mixed_perturbation_labels(const morpho_mixed* mixed) {
  return mixed ? &mixed->perturbation_labels : nullptr;
}
const char* morpho_mixed_outcome(const morpho_mixed* mixed, size_t index) {
  if (!mixed || index >= mixed->outcomes.size()) return nullptr;
  return mixed->outcomes[index].c_str();
}
size_t morpho_mixed_failures(const morpho_mixed* mixed) { return mixed ? mixed->failures : 0; }
void morpho_mixed_free(morpho_mixed* mixed) { delete mixed; }

uint64_t morpho_perturbation_seed(uint64_t master_seed, size_t index) {
  return morpho::perturbation_seed(master_seed, index);
}

morpho_status morpho_mmd_linear(const double* x, size_t nx, const double* y, size_t ny, size_t dims,
                                morpho_mmd_result* out, double* bandwidths) {
  return guarded([&] {
    require(out != nullptr && dims > 0, "out is NULL or dims is zero");
    const auto res = morpho::mmd_linear_test(attribute_table(x, nx, dims, "d"), attribute_table(y, ny, dims, "d"));
    *out = {res.statistic, res.std_error, res.p_value, res.n};
    if (bandwidths) std::copy(res.bandwidths.begin(), res.bandwidths.end(), bandwidths);
  });
}

morpho_status morpho_scott_bandwidths(const double* table, size_t n, size_t dims, double* out) {
  return guarded([&] {
    require(out != nullptr && dims > 0, "out is NULL or dims is zero");
    const auto bw = morpho::scott_bandwidths(attribute_table(table, n, dims, "d"));
    std::copy(bw.begin(), bw.end(), out);
  });
}

size_t morpho_expanded_code_count(const morpho_code_kind* kinds, size_t n_codes) {
  if (!kinds) return 0;
  size_t total = 0;
  for (size_t c = 0; c < n_codes; ++c) total += kinds[c].type == MORPHO_CODE_CATEGORICAL ? kinds[c].categories : 1;
  return total;
}

morpho_status morpho_partial_correlations(const double* attributes, size_t n, size_t n_attr, const double* codes,
                                          const morpho_code_kind* kinds, size_t n_codes, double* out) {
  return guarded([&] {
    require(out != nullptr && n_attr > 0 && n_codes > 0, "out is NULL or table is empty");
    const auto table = morpho::partial_correlations(attribute_table(attributes, n, n_attr, "y"),
                                                    code_table(codes, n, kinds, n_codes));
    std::copy(table.values.begin(), table.values.end(), out);
  });
}

morpho_status morpho_mig(const double* attributes, size_t n, size_t n_attr, const double* codes,
                         const morpho_code_kind* kinds, size_t n_codes, uint32_t bins, double* per_attribute,
                         double* overall, double* mutual_information) {
  return guarded([&] {
    require(per_attribute && overall && n_attr > 0 && n_codes > 0, "outputs are NULL or table is empty");
    const auto report = morpho::mig(attribute_table(attributes, n, n_attr, "y"), code_table(codes, n, kinds, n_codes),
                                    static_cast<int>(bins));
    std::copy(report.per_attribute.begin(), report.per_attribute.end(), per_attribute);
    *overall = report.overall;
    if (mutual_information)
      std::copy(report.mutual_information.begin(), report.mutual_information.end(), mutual_information);
  });
}

}  // extern "C"

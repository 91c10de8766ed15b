// Copyright 2026 The tsm Authors.
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

#include "tsm/tsm.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "tsm/error.hpp"
#include "tsm/experiment.hpp"
#include "tsm/serialize.hpp"

struct tsm_tensor {
  tsm::DenseTensor value;
};

struct tsm_dataset {
  tsm::Dataset value;
};

struct tsm_library {
  tsm::ClassLibrary value;
  std::string metadata = "{}";
};

namespace {

using json = nlohmann::json;

thread_local std::string last_error;

tsm_status status_of(tsm::ErrorCode code) {
  switch (code) {
    case tsm::ErrorCode::InvalidArgument: return TSM_ERR_INVALID_ARGUMENT;
    case tsm::ErrorCode::ShapeMismatch: return TSM_ERR_SHAPE_MISMATCH;
    case tsm::ErrorCode::RankInfeasible: return TSM_ERR_RANK_INFEASIBLE;
    case tsm::ErrorCode::Io: return TSM_ERR_IO;
    case tsm::ErrorCode::Numeric: return TSM_ERR_NUMERIC;
  }
  return TSM_ERR_INTERNAL;
}

template <class F>
tsm_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return TSM_OK;
  } catch (const tsm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return TSM_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TSM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TSM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return TSM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) tsm::fail(tsm::ErrorCode::InvalidArgument, what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::size_t> to_vector(const size_t* values, size_t count) {
  if (count == 0) return {};
  require(values != nullptr, "null factor list");
  return {values, values + count};
}

std::string factors_metadata(const tsm::Dataset& ds) {
  return json{{"row_factors", ds.row_factors}, {"col_factors", ds.col_factors}}.dump();
}

tsm_status run(const char* config_json, const char* command, const char* csv_path, char** csv,
               bool curve) {
  return guarded([&] {
    require(config_json, "null config");
    const tsm::ExperimentConfig config = tsm::config_from_json(config_json);
    const auto rows = curve ? tsm::run_learning_curve(config) : tsm::run_rank_sweep(config);
    const std::string cmd = command ? command : (curve ? "learning-curve" : "sweep");
    if (csv_path) tsm::emit_results(rows, config, cmd, csv_path);
    if (csv) *csv = duplicate(tsm::results_csv(rows));
  });
}

}  // namespace

extern "C" {

const char* tsm_version(void) { return "0.1.0"; }

const char* tsm_status_string(tsm_status status) {
  switch (status) {
    case TSM_OK: return "ok";
    case TSM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TSM_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case TSM_ERR_RANK_INFEASIBLE: return "rank infeasible";
    case TSM_ERR_IO: return "i/o error";
    case TSM_ERR_NUMERIC: return "numeric error";
    case TSM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tsm_last_error(void) { return last_error.c_str(); }

void tsm_string_free(char* s) { std::free(s); }

tsm_status tsm_tensor_create(size_t order, const size_t* dims, const double* data,
                             tsm_tensor** out) {
  return guarded([&] {
    require(out, "null output");
    require(order == 0 || dims, "null dims");
    tsm::Shape shape(dims, dims + order);
    if (data) {
      std::vector<double> values(data, data + tsm::shape_size(shape));
      *out = new tsm_tensor{tsm::DenseTensor(shape, std::move(values))};
    } else {
      *out = new tsm_tensor{tsm::DenseTensor(shape)};
    }
  });
}

void tsm_tensor_destroy(tsm_tensor* t) { delete t; }

tsm_status tsm_tensor_order(const tsm_tensor* t, size_t* order) {
  return guarded([&] {
    require(t && order, "null argument");
    *order = t->value.order();
  });
}

tsm_status tsm_tensor_dims(const tsm_tensor* t, size_t* dims, size_t capacity) {
  return guarded([&] {
    require(t && dims, "null argument");
    for (size_t i = 0; i < capacity && i < t->value.order(); ++i) dims[i] = t->value.dim(i);
  });
}

tsm_status tsm_tensor_size(const tsm_tensor* t, size_t* size) {
  return guarded([&] {
    require(t && size, "null argument");
    *size = t->value.size();
  });
}

tsm_status tsm_tensor_data(const tsm_tensor* t, const double** data) {
  return guarded([&] {
    require(t && data, "null argument");
    *data = t->value.data().data();
  });
}

tsm_status tsm_tensor_norm(const tsm_tensor* t, double* norm) {
  return guarded([&] {
    require(t && norm, "null argument");
    *norm = tsm::frobenius_norm(t->value);
  });
}

tsm_status tsm_tensor_unfold(const tsm_tensor* t, const size_t* axes, size_t axis_count,
                             double* out, size_t capacity, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(t, "null tensor");
    const tsm::Matrix m =
        tsm::unfold(t->value, tsm::AxisSet(to_vector(axes, axis_count)));
    if (rows) *rows = static_cast<size_t>(m.rows());
    if (cols) *cols = static_cast<size_t>(m.cols());
    if (!out) return;
    if (capacity < static_cast<size_t>(m.size()))
      tsm::fail(tsm::ErrorCode::ShapeMismatch, "output buffer too small for unfolding");
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, m.rows(), m.cols()) = m;
  });
}

tsm_status tsm_tensor_from_image(const char* path, const size_t* row_factors, size_t row_count,
                                 const size_t* col_factors, size_t col_count, tsm_tensor** out) {
  return guarded([&] {
    require(path && out, "null argument");
    const auto rf = to_vector(row_factors, row_count);
    const auto cf = to_vector(col_factors, col_count);
    *out = new tsm_tensor{tsm::image_to_tensor(tsm::read_image(path), rf, cf)};
  });
}

tsm_status tsm_dataset_load(const char* root, const size_t* row_factors, size_t row_count,
                            const size_t* col_factors, size_t col_count, tsm_dataset** out) {
  return guarded([&] {
    require(root && out, "null argument");
    const auto rf = to_vector(row_factors, row_count);
    const auto cf = to_vector(col_factors, col_count);
    *out = new tsm_dataset{tsm::load_image_dataset(root, rf, cf)};
  });
}

tsm_status tsm_dataset_generate(const char* synthetic_json, tsm_dataset** out) {
  return guarded([&] {
    require(synthetic_json && out, "null argument");
    json spec = json::parse(synthetic_json);
    require(spec.is_object(), "generator spec is not a JSON object");
    const bool seeded = spec.contains("seed");
    json config{{"dataset", {{"kind", "synthetic"}, {"synthetic", spec}}}};
    tsm::ExperimentConfig c = tsm::config_from_json(config.dump());
    if (!seeded) c.dataset.synthetic_seed_set = true;  // use the generator default
    *out = new tsm_dataset{tsm::load_dataset(c.dataset, c.seed)};
  });
}

tsm_status tsm_dataset_from_config(const char* config_json, tsm_dataset** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    const tsm::ExperimentConfig c = tsm::config_from_json(config_json);
    *out = new tsm_dataset{tsm::load_dataset(c.dataset, c.seed)};
  });
}

tsm_status tsm_dataset_save(const tsm_dataset* ds, const char* root) {
  return guarded([&] {
    require(ds && root, "null argument");
    tsm::save_dataset(ds->value, root);
  });
}

void tsm_dataset_destroy(tsm_dataset* ds) { delete ds; }

tsm_status tsm_dataset_size(const tsm_dataset* ds, size_t* count) {
  return guarded([&] {
    require(ds && count, "null argument");
    *count = ds->value.samples.size();
  });
}

tsm_status tsm_dataset_label(const tsm_dataset* ds, size_t index, const char** label) {
  return guarded([&] {
    require(ds && label, "null argument");
    require(index < ds->value.samples.size(), "sample index out of range");
    *label = ds->value.samples[index].label.c_str();
  });
}

tsm_status tsm_dataset_sample(const tsm_dataset* ds, size_t index, tsm_tensor** out) {
  return guarded([&] {
    require(ds && out, "null argument");
    require(index < ds->value.samples.size(), "sample index out of range");
    *out = new tsm_tensor{ds->value.samples[index].tensor};
  });
}

tsm_status tsm_library_train(const tsm_dataset* ds, const char* spec_json, tsm_library** out) {
  return guarded([&] {
    require(ds && spec_json && out, "null argument");
    const tsm::LibrarySpec spec = tsm::library_spec_from_json(spec_json, ds->value);
    *out = new tsm_library{tsm::train_library(ds->value.samples, spec),
                           factors_metadata(ds->value)};
  });
}

tsm_status tsm_library_save(const tsm_library* lib, const char* path) {
  return guarded([&] {
    require(lib && path, "null argument");
    tsm::save_library(lib->value, path, lib->metadata);
  });
}

tsm_status tsm_library_load(const char* path, tsm_library** out) {
  return guarded([&] {
    require(path && out, "null argument");
    tsm::LoadedLibrary loaded = tsm::load_library(path);
    *out = new tsm_library{std::move(loaded.library), std::move(loaded.metadata_json)};
  });
}

void tsm_library_destroy(tsm_library* lib) { delete lib; }

tsm_status tsm_library_info(const tsm_library* lib, char** out) {
  return guarded([&] {
    require(lib && out, "null argument");
    const tsm::ClassLibrary& l = lib->value;
    json classes = json::array();
    for (const auto& [label, _] : l.models) classes.push_back(label);
    json info{{"shape", l.shape},
              {"family", tsm::to_string(l.family)},
              {"scheme", tsm::to_string(l.scheme)},
              {"centering", tsm::to_string(l.centering)},
              {"ranks", l.ranks},
              {"classes", classes},
              {"metadata", json::parse(lib->metadata)}};
    if (!l.models.empty()) {
      const tsm::CostReport cost = tsm::cost_general(l.models.begin()->second, l.scheme);
      info["storage_scalars"] = cost.storage_scalars;
      info["projection_macs"] = cost.projection_macs;
    }
    *out = duplicate(info.dump(2));
  });
}

tsm_status tsm_library_set_scheme(tsm_library* lib, const char* scheme) {
  return guarded([&] {
    require(lib && scheme, "null argument");
    const tsm::Scheme s = tsm::scheme_from_string(scheme);
    if (!tsm::scheme_supports(lib->value.family, s))
      tsm::fail(tsm::ErrorCode::InvalidArgument, std::string("scheme ") + scheme +
                                                     " does not apply to family " +
                                                     tsm::to_string(lib->value.family));
    lib->value.scheme = s;
  });
}

tsm_status tsm_library_read_image(const tsm_library* lib, const char* path, tsm_tensor** out) {
  return guarded([&] {
    require(lib && path && out, "null argument");
    const json meta = json::parse(lib->metadata);
    require(meta.contains("row_factors") && meta.contains("col_factors"),
            "library has no recorded image factors");
    const auto rf = meta.at("row_factors").get<std::vector<std::size_t>>();
    const auto cf = meta.at("col_factors").get<std::vector<std::size_t>>();
    *out = new tsm_tensor{tsm::image_to_tensor(tsm::read_image(path), rf, cf)};
  });
}

tsm_status tsm_library_classify(const tsm_library* lib, const tsm_tensor* x, char** label) {
  return guarded([&] {
    require(lib && x && label, "null argument");
    *label = duplicate(tsm::classify(lib->value, x->value));
  });
}

tsm_status tsm_library_energies(const tsm_library* lib, const tsm_tensor* x, char** out) {
  return guarded([&] {
    require(lib && x && out, "null argument");
    json j = json::object();
    for (const auto& [label, energy] : tsm::class_energies(lib->value, x->value))
      j[label] = energy;
    *out = duplicate(j.dump());
  });
}

tsm_status tsm_library_evaluate(const tsm_library* lib, const tsm_dataset* ds, char** out) {
  return guarded([&] {
    require(lib && ds && out, "null argument");
    const tsm::EvaluationResult r = tsm::evaluate(lib->value, ds->value.samples);
    json confusion = json::array();
    for (const auto& [key, n] : r.confusion) confusion.push_back({key.first, key.second, n});
    json j{{"error_rate", r.error_rate},
           {"total", r.total},
           {"misclassified", r.misclassified},
           {"confusion", confusion}};
    *out = duplicate(j.dump(2));
  });
}

tsm_status tsm_run_rank_sweep(const char* config_json, const char* command, const char* csv_path,
                              char** csv) {
  return run(config_json, command, csv_path, csv, false);
}

tsm_status tsm_run_learning_curve(const char* config_json, const char* command,
                                  const char* csv_path, char** csv) {
  return run(config_json, command, csv_path, csv, true);
}

tsm_status tsm_cost_table(const size_t* dims, size_t order, size_t leaf_rank,
                          size_t internal_rank, char** csv) {
  return guarded([&] {
    require(csv, "null argument");
    const tsm::Shape shape = to_vector(dims, order);
    *csv = duplicate(tsm::cost_table_csv(tsm::cost_table(shape, leaf_rank, internal_rank)));
  });
}

tsm_status tsm_cost_formula(const char* scheme, uint64_t n, uint64_t leaf_rank,
                            uint64_t internal_rank, uint64_t* storage, uint64_t* projection) {
  return guarded([&] {
    require(scheme && storage && projection, "null argument");
    tsm::FormulaCost c;
    switch (tsm::scheme_from_string(scheme)) {
      case tsm::Scheme::TuckerModes: c = tsm::cost_formula_tucker(n, leaf_rank); break;
      case tsm::Scheme::HtMaterialized: c = tsm::cost_formula_hier1(n, internal_rank); break;
      case tsm::Scheme::HtFactored: c = tsm::cost_formula_hier2(n, leaf_rank, internal_rank); break;
      case tsm::Scheme::TtMaterialized: c = tsm::cost_formula_tt(n, leaf_rank, internal_rank); break;
    }
    *storage = c.storage;
    *projection = c.projection;
  });
}

}  // extern "C"

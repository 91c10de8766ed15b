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

// Exercises the shared library through its C header only.
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "tsm/tsm.h"

namespace fs = std::filesystem;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { tsm_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

const char* kGenerator =
    R"({"class_count": 3, "shape": [3, 3, 3, 3], "samples_per_class": 6, "noise": 0.05, "seed": 4})";

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(tsm_version(), "0.1.0");
  EXPECT_STREQ(tsm_status_string(TSM_OK), "ok");
  EXPECT_STREQ(tsm_status_string(TSM_ERR_RANK_INFEASIBLE), "rank infeasible");
}

TEST(CApi, TensorLifecycleAndUnfold) {
  const size_t dims[] = {2, 3};
  const double data[] = {1, 2, 3, 4, 5, 6};
  tsm_tensor* t = nullptr;
  ASSERT_EQ(tsm_tensor_create(2, dims, data, &t), TSM_OK);
  size_t order = 0, size = 0, got[2] = {0, 0};
  EXPECT_EQ(tsm_tensor_order(t, &order), TSM_OK);
  EXPECT_EQ(tsm_tensor_size(t, &size), TSM_OK);
  EXPECT_EQ(tsm_tensor_dims(t, got, 2), TSM_OK);
  EXPECT_EQ(order, 2u);
  EXPECT_EQ(size, 6u);
  EXPECT_EQ(got[1], 3u);
  double norm = 0;
  EXPECT_EQ(tsm_tensor_norm(t, &norm), TSM_OK);
  EXPECT_DOUBLE_EQ(norm, std::sqrt(91.0));

  const size_t axis[] = {1};
  double out[6];
  size_t rows = 0, cols = 0;
  ASSERT_EQ(tsm_tensor_unfold(t, axis, 1, out, 6, &rows, &cols), TSM_OK);
  EXPECT_EQ(rows, 3u);
  EXPECT_EQ(cols, 2u);
  const double expected[] = {1, 4, 2, 5, 3, 6};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(out[i], expected[i]);
  EXPECT_EQ(tsm_tensor_unfold(t, axis, 1, out, 5, &rows, &cols), TSM_ERR_SHAPE_MISMATCH);
  tsm_tensor_destroy(t);
}

TEST(CApi, ErrorsCarryMessages) {
  const size_t dims[] = {2, 0};
  tsm_tensor* t = nullptr;
  EXPECT_EQ(tsm_tensor_create(2, dims, nullptr, &t), TSM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(t, nullptr);
  EXPECT_GT(std::strlen(tsm_last_error()), 0u);
  EXPECT_EQ(tsm_tensor_order(nullptr, nullptr), TSM_ERR_INVALID_ARGUMENT);
  tsm_dataset* ds = nullptr;
  EXPECT_EQ(tsm_dataset_generate("{not json", &ds), TSM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tsm_dataset_load("/nonexistent/tsm", nullptr, 0, nullptr, 0, &ds), TSM_ERR_IO);
  tsm_library* lib = nullptr;
  EXPECT_EQ(tsm_library_load("/nonexistent/lib.tsm", &lib), TSM_ERR_IO);
}

TEST(CApi, TrainSaveLoadClassify) {
  tsm_dataset* ds = nullptr;
  ASSERT_EQ(tsm_dataset_generate(kGenerator, &ds), TSM_OK) << tsm_last_error();
  size_t n = 0;
  ASSERT_EQ(tsm_dataset_size(ds, &n), TSM_OK);
  EXPECT_EQ(n, 18u);
  const char* label = nullptr;
  EXPECT_EQ(tsm_dataset_label(ds, 17, &label), TSM_OK);
  EXPECT_STREQ(label, "c02");
  EXPECT_EQ(tsm_dataset_label(ds, 18, &label), TSM_ERR_INVALID_ARGUMENT);

  tsm_library* lib = nullptr;
  ASSERT_EQ(tsm_library_train(ds, R"({"family": "ht", "rank_fraction": 0.4})", &lib), TSM_OK)
      << tsm_last_error();
  EXPECT_EQ(tsm_library_set_scheme(lib, "tucker-modes"), TSM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(tsm_library_set_scheme(lib, "hier2"), TSM_OK);

  const fs::path path = fs::temp_directory_path() / "tsm_capi_lib.tsm";
  ASSERT_EQ(tsm_library_save(lib, path.c_str()), TSM_OK) << tsm_last_error();
  tsm_library* loaded = nullptr;
  ASSERT_EQ(tsm_library_load(path.c_str(), &loaded), TSM_OK) << tsm_last_error();
  Str info;
  ASSERT_EQ(tsm_library_info(loaded, &info.p), TSM_OK);
  EXPECT_NE(info.s().find("\"ht-factored\""), std::string::npos);

  for (size_t i = 0; i < n; ++i) {
    tsm_tensor* x = nullptr;
    ASSERT_EQ(tsm_dataset_sample(ds, i, &x), TSM_OK);
    Str a, b, e;
    ASSERT_EQ(tsm_library_classify(lib, x, &a.p), TSM_OK);
    ASSERT_EQ(tsm_library_classify(loaded, x, &b.p), TSM_OK);
    ASSERT_EQ(tsm_library_energies(loaded, x, &e.p), TSM_OK);
    EXPECT_EQ(a.s(), b.s());
    EXPECT_NE(e.s().find("c01"), std::string::npos);
    tsm_tensor_destroy(x);
  }
  Str eval;
  ASSERT_EQ(tsm_library_evaluate(loaded, ds, &eval.p), TSM_OK);
  EXPECT_NE(eval.s().find("\"error_rate\": 0.0"), std::string::npos) << eval.s();

  tsm_library* too_big = nullptr;
  EXPECT_EQ(tsm_library_train(ds, R"({"family": "tucker", "ranks": [4, 1, 1, 1]})", &too_big),
            TSM_ERR_RANK_INFEASIBLE);
  tsm_library_destroy(loaded);
  tsm_library_destroy(lib);
  tsm_dataset_destroy(ds);
  fs::remove(path);
}

TEST(CApi, SweepAndCosts) {
  const char* config = R"({
    "dataset": {"synthetic": {"class_count": 2, "shape": [3, 3, 3, 3], "samples_per_class": 4}},
    "classes_per_run": 2, "pool_size": 2, "repetitions": 2,
    "families": ["tucker"], "rank_fractions": [0.5, 1.0], "seed": 3})";
  Str csv1, csv2;
  ASSERT_EQ(tsm_run_rank_sweep(config, nullptr, nullptr, &csv1.p), TSM_OK) << tsm_last_error();
  ASSERT_EQ(tsm_run_rank_sweep(config, nullptr, nullptr, &csv2.p), TSM_OK);
  EXPECT_EQ(csv1.s(), csv2.s());
  EXPECT_EQ(csv1.s().rfind("family,scheme,rankFraction", 0), 0u);
  Str curve;
  EXPECT_EQ(tsm_run_learning_curve(config, nullptr, nullptr, &curve.p), TSM_ERR_INVALID_ARGUMENT);

  uint64_t storage = 0, projection = 0;
  ASSERT_EQ(tsm_cost_formula("hier2", 4, 2, 2, &storage, &projection), TSM_OK);
  EXPECT_EQ(storage, 48u);
  EXPECT_EQ(projection, 964u);
  EXPECT_EQ(tsm_cost_formula("tt-materialized", 0, 1, 1, &storage, &projection),
            TSM_ERR_INVALID_ARGUMENT);
  const size_t dims[] = {2, 2, 2, 2};
  Str table;
  ASSERT_EQ(tsm_cost_table(dims, 4, 1, 1, &table.p), TSM_OK);
  EXPECT_NE(table.s().find("tt,tt-materialized,10,24"), std::string::npos) << table.s();
}

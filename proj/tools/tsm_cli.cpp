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

// Command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsm/tsm.h"

namespace {

using json = nlohmann::json;

struct Failure {
  int code;
};

void check(tsm_status s) {
  if (s != TSM_OK) {
    std::cerr << "tsm: " << tsm_status_string(s) << ": " << tsm_last_error() << "\n";
    throw Failure{static_cast<int>(s)};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "tsm: cannot read " << path << "\n";
    throw Failure{TSM_ERR_IO};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& where) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    std::cerr << "tsm: " << where << " is not a JSON object\n";
    throw Failure{TSM_ERR_INVALID_ARGUMENT};
  }
  return j;
}

// Releases strings returned by the library.
struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tsm_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ExperimentOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> threads;
  std::optional<std::string> centering;
  std::vector<std::size_t> train_sizes;
  bool freeze_split = false;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--config", o.config, "Experiment configuration or results sidecar (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Results CSV; a .json sidecar is written next to it")
      ->required();
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--repetitions", o.repetitions, "Repetitions per cell");
  cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  cmd->add_option("--centering", o.centering, "global, per-class or none");
  cmd->add_flag("--freeze-split", o.freeze_split, "Use one train/test split for every repetition");
}

std::string apply_overrides(const ExperimentOptions& o) {
  json cfg = parse_json(read_file(o.config), o.config);
  if (cfg.contains("config") && cfg["config"].is_object()) cfg = cfg["config"];
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.repetitions) cfg["repetitions"] = *o.repetitions;
  if (o.threads) cfg["threads"] = *o.threads;
  if (o.centering) cfg["centering"] = *o.centering;
  if (o.freeze_split) cfg["freeze_split"] = true;
  if (!o.train_sizes.empty()) cfg["train_sizes"] = o.train_sizes;
  return cfg.dump();
}

// Writes to `path`, or stdout when empty.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "tsm: cannot write " << path << "\n";
    throw Failure{TSM_ERR_IO};
  }
}

std::string joined_args(int argc, char** argv) {
  std::string s = "tsm";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor subspace models: training, classification and cost accounting"};
  app.set_version_flag("--version", std::string(tsm_version()));
  app.require_subcommand(1);

  ExperimentOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Error and cost over a grid of rank fractions");
  add_experiment_options(sweep, sweep_opts);

  ExperimentOptions curve_opts;
  auto* curve = app.add_subcommand("learning-curve", "Error versus training samples per class");
  add_experiment_options(curve, curve_opts);
  curve->add_option("--train-sizes", curve_opts.train_sizes, "Samples per class")->delimiter(',');

  std::string synth_config, synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth-gen", "Write a synthetic dataset as CSV images");
  synth->add_option("--config", synth_config, "Generator spec or experiment configuration")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  std::string train_config, train_data, train_spec, train_out;
  std::optional<std::uint64_t> train_seed;
  std::vector<std::size_t> row_factors, col_factors;
  auto* train = app.add_subcommand("train", "Learn one subspace per class and save the library");
  auto* data_group = train->add_option_group("dataset");
  data_group->add_option("--config", train_config, "Experiment configuration naming a dataset")
      ->check(CLI::ExistingFile);
  data_group->add_option("--data", train_data, "Image directory <label>/<file>")
      ->check(CLI::ExistingDirectory);
  data_group->require_option(1);
  train->add_option("--seed", train_seed, "Master seed for a synthetic dataset");
  train->add_option("--row-factors", row_factors, "Image row reshape factors")->delimiter(',');
  train->add_option("--col-factors", col_factors, "Image column reshape factors")->delimiter(',');
  train->add_option("--spec", train_spec,
                    "Library spec: JSON file or inline JSON (default: the config's \"library\")");
  train->add_option("--out", train_out, "Library file")->required();

  std::string cls_config, lib_path, eval_dir, scheme, cls_out;
  std::optional<std::uint64_t> cls_seed;
  std::vector<std::string> inputs;
  bool energies = false;
  auto* cls = app.add_subcommand("classify", "Classify images or evaluate a labelled directory");
  cls->add_option("--config", cls_config,
                  "JSON with any of \"library\", \"scheme\", \"dataset\", \"inputs\"")
      ->check(CLI::ExistingFile);
  cls->add_option("--library", lib_path, "Library file");
  cls->add_option("--scheme", scheme, "Projection scheme override");
  cls->add_option("--dataset", eval_dir, "Labelled image directory to evaluate");
  cls->add_flag("--energies", energies, "Print per-class projection energies");
  cls->add_option("--seed", cls_seed, "Accepted for uniformity; classification is deterministic");
  cls->add_option("--out", cls_out, "Write results here instead of stdout");
  cls->add_option("inputs", inputs, "Image files (.pgm or .csv)");

  std::string costs_config, costs_out;
  std::vector<std::size_t> shape{8, 8, 8, 8};
  std::size_t leaf_rank = 4, internal_rank = 4;
  std::optional<std::uint64_t> costs_seed;
  auto* costs = app.add_subcommand("costs", "Storage and projection counts per scheme");
  costs->add_option("--config", costs_config,
                    "JSON with \"shape\", \"leaf_rank\", \"internal_rank\"")
      ->check(CLI::ExistingFile);
  costs->add_option("--shape", shape, "Tensor dimensions")->delimiter(',');
  costs->add_option("--leaf-rank", leaf_rank, "Leaf rank r");
  costs->add_option("--internal-rank", internal_rank, "Internal rank r'");
  costs->add_option("--seed", costs_seed, "Accepted for uniformity; costs are deterministic");
  costs->add_option("--out", costs_out, "Write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep || *curve) {
      const bool is_curve = static_cast<bool>(*curve);
      const ExperimentOptions& o = is_curve ? curve_opts : sweep_opts;
      const std::string cfg = apply_overrides(o);
      const std::string command = joined_args(argc, argv);
      check(is_curve ? tsm_run_learning_curve(cfg.c_str(), command.c_str(), o.out.c_str(), nullptr)
                     : tsm_run_rank_sweep(cfg.c_str(), command.c_str(), o.out.c_str(), nullptr));
      std::cout << "wrote " << o.out << "\n";
    } else if (*synth) {
      json cfg = parse_json(read_file(synth_config), synth_config);
      tsm_dataset* ds = nullptr;
      if (cfg.contains("dataset") || cfg.contains("config")) {
        if (cfg.contains("config")) cfg = cfg["config"];
        if (synth_seed) cfg["dataset"]["synthetic"]["seed"] = *synth_seed;
        check(tsm_dataset_from_config(cfg.dump().c_str(), &ds));
      } else {
        if (synth_seed) cfg["seed"] = *synth_seed;
        check(tsm_dataset_generate(cfg.dump().c_str(), &ds));
      }
      const tsm_status s = tsm_dataset_save(ds, synth_out.c_str());
      size_t n = 0;
      tsm_dataset_size(ds, &n);
      tsm_dataset_destroy(ds);
      check(s);
      std::cout << "wrote " << n << " samples to " << synth_out << "\n";
    } else if (*train) {
      tsm_dataset* ds = nullptr;
      json library_spec;
      if (!train_config.empty()) {
        json cfg = parse_json(read_file(train_config), train_config);
        if (cfg.contains("library")) library_spec = cfg["library"];
        if (cfg.contains("config") && cfg["config"].is_object()) cfg = cfg["config"];
        if (train_seed) cfg["seed"] = *train_seed;
        check(tsm_dataset_from_config(cfg.dump().c_str(), &ds));
      } else {
        check(tsm_dataset_load(train_data.c_str(), row_factors.data(), row_factors.size(),
                               col_factors.data(), col_factors.size(), &ds));
      }
      if (!train_spec.empty())
        library_spec = parse_json(train_spec.front() == '{' ? train_spec : read_file(train_spec),
                                  "library spec");
      if (library_spec.is_null()) {
        tsm_dataset_destroy(ds);
        std::cerr << "tsm: train needs --spec or a \"library\" entry in --config\n";
        return TSM_ERR_INVALID_ARGUMENT;
      }
      tsm_library* lib = nullptr;
      tsm_status s = tsm_library_train(ds, library_spec.dump().c_str(), &lib);
      tsm_dataset_destroy(ds);
      check(s);
      s = tsm_library_save(lib, train_out.c_str());
      OwnedString info;
      if (s == TSM_OK) s = tsm_library_info(lib, &info.p);
      tsm_library_destroy(lib);
      check(s);
      std::cout << info.str() << "\n";
    } else if (*cls) {
      if (!cls_config.empty()) {
        const json cfg = parse_json(read_file(cls_config), cls_config);
        if (lib_path.empty() && cfg.contains("library")) lib_path = cfg["library"].get<std::string>();
        if (scheme.empty() && cfg.contains("scheme")) scheme = cfg["scheme"].get<std::string>();
        if (eval_dir.empty() && cfg.contains("dataset")) eval_dir = cfg["dataset"].get<std::string>();
        if (inputs.empty() && cfg.contains("inputs"))
          inputs = cfg["inputs"].get<std::vector<std::string>>();
      }
      if (lib_path.empty()) {
        std::cerr << "tsm: classify needs --library or \"library\" in --config\n";
        return TSM_ERR_INVALID_ARGUMENT;
      }
      tsm_library* lib = nullptr;
      check(tsm_library_load(lib_path.c_str(), &lib));
      struct Guard {
        tsm_library* lib;
        ~Guard() { tsm_library_destroy(lib); }
      } guard{lib};
      if (!scheme.empty()) check(tsm_library_set_scheme(lib, scheme.c_str()));
      std::ostringstream report;
      if (!eval_dir.empty()) {
        tsm_dataset* ds = nullptr;
        check(tsm_dataset_load(eval_dir.c_str(), nullptr, 0, nullptr, 0, &ds));
        OwnedString result;
        const tsm_status s = tsm_library_evaluate(lib, ds, &result.p);
        tsm_dataset_destroy(ds);
        check(s);
        report << result.str() << "\n";
      }
      for (const auto& path : inputs) {
        tsm_tensor* x = nullptr;
        check(tsm_library_read_image(lib, path.c_str(), &x));
        OwnedString label, energy;
        tsm_status s = tsm_library_classify(lib, x, &label.p);
        if (s == TSM_OK && energies) s = tsm_library_energies(lib, x, &energy.p);
        tsm_tensor_destroy(x);
        check(s);
        report << path << "," << label.str();
        if (energies) report << "," << energy.str();
        report << "\n";
      }
      if (eval_dir.empty() && inputs.empty()) {
        OwnedString info;
        check(tsm_library_info(lib, &info.p));
        report << info.str() << "\n";
      }
      write_output(cls_out, report.str());
    } else if (*costs) {
      if (!costs_config.empty()) {
        const json cfg = parse_json(read_file(costs_config), costs_config);
        if (cfg.contains("shape")) shape = cfg["shape"].get<std::vector<std::size_t>>();
        if (cfg.contains("leaf_rank")) leaf_rank = cfg["leaf_rank"].get<std::size_t>();
        if (cfg.contains("internal_rank")) internal_rank = cfg["internal_rank"].get<std::size_t>();
      }
      OwnedString csv;
      check(tsm_cost_table(shape.data(), shape.size(), leaf_rank, internal_rank, &csv.p));
      write_output(costs_out, csv.str());
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "tsm: " << e.what() << "\n";
    return TSM_ERR_INVALID_ARGUMENT;
  }
  return 0;
}

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

#include "tsm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "tsm/error.hpp"
#include "tsm/rng.hpp"

namespace tsm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kSelectTag = 1;
constexpr std::uint64_t kSplitTag = 2;
constexpr std::uint64_t kSubsampleTag = 3;
constexpr std::uint64_t kDataTag = 4;

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json synthetic_to_json(const SyntheticSpec& s, bool with_seed) {
  json j{{"class_count", s.class_count},
         {"shape", s.shape},
         {"family", to_string(s.family)},
         {"leaf_fraction", s.leaf_fraction},
         {"internal_fraction", s.internal_fraction},
         {"samples_per_class", s.samples_per_class},
         {"noise", s.noise},
         {"orthogonal_classes", s.orthogonal_classes}};
  if (s.ranks) j["ranks"] = *s.ranks;
  if (with_seed) j["seed"] = s.seed;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, what); };
  if (repetitions < 1) bad("repetitions must be >= 1");
  if (classes_per_run < 1) bad("classes_per_run must be >= 1");
  if (pool_size < classes_per_run) bad("pool_size must be >= classes_per_run");
  if (!(train_fraction > 0.0) || train_fraction > 1.0) bad("train_fraction must lie in (0, 1]");
  if (!(leaf_fraction > 0.0) || leaf_fraction > 1.0) bad("leaf_fraction must lie in (0, 1]");
  if (families.empty()) bad("no model families selected");
  if (rank_fractions.empty()) bad("no rank fractions given");
  for (double f : rank_fractions)
    if (!(f > 0.0) || f > 1.0) bad("rank fractions must lie in (0, 1]");
  if (tree != "balanced" && tree != "tt") bad("tree must be 'balanced' or 'tt'");
  for (auto m : train_sizes)
    if (m < 1) bad("training sizes must be >= 1");
  if (dataset.kind != "synthetic" && dataset.kind != "images")
    bad("dataset kind must be 'synthetic' or 'images'");
}

ExperimentConfig config_from_json(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    fail(ErrorCode::InvalidArgument, "config is not a JSON object");
  if (root.contains("config") && root.at("config").is_object()) root = root.at("config");

  ExperimentConfig c;
  try {
    if (root.contains("dataset")) {
      const json& d = root.at("dataset");
      read_opt(d, "kind", c.dataset.kind);
      if (d.contains("path")) c.dataset.path = d.at("path").get<std::string>();
      read_opt(d, "row_factors", c.dataset.row_factors);
      read_opt(d, "col_factors", c.dataset.col_factors);
      if (d.contains("synthetic")) {
        const json& s = d.at("synthetic");
        SyntheticSpec& spec = c.dataset.synthetic;
        read_opt(s, "class_count", spec.class_count);
        read_opt(s, "shape", spec.shape);
        if (s.contains("family"))
          spec.family = family_from_string(s.at("family").get<std::string>());
        read_opt(s, "leaf_fraction", spec.leaf_fraction);
        read_opt(s, "internal_fraction", spec.internal_fraction);
        if (s.contains("ranks")) spec.ranks = s.at("ranks").get<std::vector<std::size_t>>();
        read_opt(s, "samples_per_class", spec.samples_per_class);
        read_opt(s, "noise", spec.noise);
        read_opt(s, "orthogonal_classes", spec.orthogonal_classes);
        if (s.contains("seed")) {
          spec.seed = s.at("seed").get<std::uint64_t>();
          c.dataset.synthetic_seed_set = true;
        }
      }
    }
    read_opt(root, "classes_per_run", c.classes_per_run);
    read_opt(root, "pool_size", c.pool_size);
    read_opt(root, "train_fraction", c.train_fraction);
    read_opt(root, "repetitions", c.repetitions);
    if (root.contains("families")) {
      c.families.clear();
      for (const auto& f : root.at("families"))
        c.families.push_back(family_from_string(f.get<std::string>()));
    }
    read_opt(root, "tree", c.tree);
    read_opt(root, "rank_fractions", c.rank_fractions);
    read_opt(root, "leaf_fraction", c.leaf_fraction);
    if (root.contains("schemes")) {
      c.schemes.clear();
      for (const auto& s : root.at("schemes"))
        c.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
    if (root.contains("centering"))
      c.centering = centering_from_string(root.at("centering").get<std::string>());
    read_opt(root, "freeze_split", c.freeze_split);
    read_opt(root, "train_sizes", c.train_sizes);
    read_opt(root, "seed", c.seed);
    read_opt(root, "threads", c.threads);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json families = json::array();
  for (auto f : c.families) families.push_back(to_string(f));
  json schemes = json::array();
  for (auto s : c.schemes) schemes.push_back(to_string(s));
  json dataset{{"kind", c.dataset.kind},
               {"path", c.dataset.path.string()},
               {"row_factors", c.dataset.row_factors},
               {"col_factors", c.dataset.col_factors},
               {"synthetic", synthetic_to_json(c.dataset.synthetic, c.dataset.synthetic_seed_set)}};
  json j{{"dataset", dataset},
         {"classes_per_run", c.classes_per_run},
         {"pool_size", c.pool_size},
         {"train_fraction", c.train_fraction},
         {"repetitions", c.repetitions},
         {"families", families},
         {"tree", c.tree},
         {"rank_fractions", c.rank_fractions},
         {"leaf_fraction", c.leaf_fraction},
         {"schemes", schemes},
         {"centering", to_string(c.centering)},
         {"freeze_split", c.freeze_split},
         {"train_sizes", c.train_sizes},
         {"seed", c.seed},
         {"threads", c.threads}};
  return j.dump(2);
}

Dataset load_dataset(const DatasetConfig& config, std::uint64_t master_seed) {
  if (config.kind == "images")
    return load_image_dataset(config.path, config.row_factors, config.col_factors);
  SyntheticSpec spec = config.synthetic;
  if (!config.synthetic_seed_set) spec.seed = derive_seed(master_seed, {kDataTag});
  return generate_synthetic(spec);
}

std::vector<Scheme> schemes_for(const ExperimentConfig& config, Family family) {
  std::vector<Scheme> out;
  if (config.schemes.empty()) {
    switch (family) {
      case Family::Tucker: out = {Scheme::TuckerModes}; break;
      case Family::HierarchicalTucker: out = {Scheme::HtMaterialized, Scheme::HtFactored}; break;
      case Family::TensorTrain: out = {Scheme::TtMaterialized}; break;
    }
    return out;
  }
  for (auto s : config.schemes)
    if (scheme_supports(family, s)) out.push_back(s);
  if (out.empty())
    fail(ErrorCode::InvalidArgument, "no configured scheme applies to family " + to_string(family));
  return out;
}

DimensionTree tree_for(const ExperimentConfig& config, Family family, std::size_t order) {
  if (family == Family::HierarchicalTucker && config.tree == "balanced")
    return balanced_tree(order);
  return tt_tree(order);
}

RepetitionPlan plan_repetition(const ExperimentConfig& config, const Dataset& dataset,
                               std::size_t rep) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i)
    by_label[dataset.samples[i].label].push_back(i);
  std::vector<std::string> pool;
  for (const auto& [label, _] : by_label) {
    if (pool.size() == config.pool_size) break;
    pool.push_back(label);
  }
  if (pool.size() < config.classes_per_run)
    fail(ErrorCode::InvalidArgument, "dataset has " + std::to_string(pool.size()) +
                                         " classes, need " +
                                         std::to_string(config.classes_per_run));

  RepetitionPlan p;
  Rng select(derive_seed(config.seed, {kSelectTag, rep}));
  p.pool_index = select.choose_sorted(pool.size(), config.classes_per_run);
  p.min_train = SIZE_MAX;
  for (std::size_t pi : p.pool_index) {
    const auto& members = by_label.at(pool[pi]);
    const std::size_t count = members.size();
    if (count < 2)
      fail(ErrorCode::InvalidArgument,
           "class '" + pool[pi] + "' has too few samples for a train/test split");
    const auto wanted = static_cast<std::size_t>(
        std::llround(config.train_fraction * static_cast<double>(count)));
    const std::size_t n_train = std::clamp<std::size_t>(wanted, 1, count - 1);
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    Rng split(derive_seed(config.seed, {kSplitTag, config.freeze_split ? 0 : rep + 1, pi}));
    split.shuffle(order);
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < count; ++i)
      (i < n_train ? train : test).push_back(members[order[i]]);
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    p.min_train = std::min(p.min_train, train.size());
    p.labels.push_back(pool[pi]);
    p.train.push_back(std::move(train));
    p.test.push_back(std::move(test));
  }
  return p;
}

namespace {

struct CellResult {
  double error = 0.0;
  double norm_storage = 0.0;
  double norm_projection = 0.0;
  std::size_t samples = 0;
  std::vector<std::size_t> ranks;
  bool clamped = false;
};

class Runner {
 public:
  Runner(const ExperimentConfig& config, const Dataset& dataset, bool learning_curve)
      : config_(config), dataset_(dataset), curve_(learning_curve) {
    config_.validate();
    plan_repetition(config_, dataset_, 0);  // fails early on unusable datasets
    if (curve_ && config_.train_sizes.empty())
      fail(ErrorCode::InvalidArgument, "learning curve needs train_sizes");
    for (std::size_t f = 0; f < config_.families.size(); ++f)
      schemes_.push_back(schemes_for(config_, config_.families[f]));
  }

  std::vector<ResultRow> run() {
    const std::size_t reps = config_.repetitions;
    std::vector<std::vector<CellResult>> results(reps);
    std::vector<std::exception_ptr> errors(reps);
    std::size_t threads = config_.threads == 0 ? std::thread::hardware_concurrency()
                                               : config_.threads;
    threads = std::clamp<std::size_t>(threads, 1, reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t rep; (rep = next.fetch_add(1)) < reps;) {
        try {
          results[rep] = run_repetition(rep);
        } catch (...) {
          errors[rep] = std::current_exception();
        }
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return aggregate(results);
  }

 private:
  std::vector<std::size_t> sizes() const {
    return curve_ ? config_.train_sizes : std::vector<std::size_t>{0};
  }

  std::vector<CellResult> run_repetition(std::size_t rep) const {
    const RepetitionPlan p = plan_repetition(config_, dataset_, rep);
    std::vector<LabeledTensor> test;
    for (const auto& indices : p.test)
      for (std::size_t i : indices) test.push_back(dataset_.samples[i]);

    std::vector<CellResult> cells;
    const Shape& shape = dataset_.shape;
    for (std::size_t f = 0; f < config_.families.size(); ++f) {
      const Family family = config_.families[f];
      const std::optional<DimensionTree> tree =
          family == Family::Tucker ? std::nullopt
                                   : std::optional(tree_for(config_, family, shape.size()));
      for (double fraction : config_.rank_fractions) {
        const ResolvedRanks base =
            tree ? resolve_tree_ranks(*tree, shape, p.min_train, config_.leaf_fraction,
                                      fraction, RankPolicy::Clamp)
                 : resolve_tucker_ranks(shape, p.min_train, fraction, RankPolicy::Clamp);
        for (std::size_t m : sizes()) {
          const std::size_t per_class = m == 0 ? p.min_train : m;
          if (per_class > p.min_train)
            fail(ErrorCode::InvalidArgument,
                 "training size " + std::to_string(m) + " exceeds the " +
                     std::to_string(p.min_train) + " training samples available per class");
          ResolvedRanks ranks = tree ? clamp_tree_ranks(*tree, shape, per_class, base.ranks)
                                     : clamp_tucker_ranks(shape, per_class, base.ranks);
          ranks.clamped = ranks.clamped || base.clamped;

          std::vector<LabeledTensor> train;
          for (std::size_t c = 0; c < p.train.size(); ++c) {
            const auto& all = p.train[c];
            std::vector<std::size_t> chosen(all.size());
            for (std::size_t i = 0; i < all.size(); ++i) chosen[i] = i;
            if (m != 0 && m < all.size()) {
              Rng sub(derive_seed(config_.seed, {kSubsampleTag, rep, m, p.pool_index[c]}));
              chosen = sub.choose_sorted(all.size(), m);
            }
            for (std::size_t i : chosen) train.push_back(dataset_.samples[all[i]]);
          }

          LibrarySpec spec;
          spec.family = family;
          spec.scheme = schemes_[f].front();
          spec.tree = tree;
          spec.ranks = ranks.ranks;
          spec.centering = config_.centering;
          ClassLibrary lib = train_library(train, spec);
          for (Scheme scheme : schemes_[f]) {
            lib.scheme = scheme;
            const CostReport cost = cost_general(lib.models.begin()->second, scheme);
            CellResult cell;
            cell.error = evaluate(lib, test).error_rate;
            cell.norm_storage = cost.normalized_storage();
            cell.norm_projection = cost.normalized_projection();
            cell.samples = per_class;
            cell.ranks = ranks.ranks;
            cell.clamped = ranks.clamped;
            cells.push_back(std::move(cell));
          }
        }
      }
    }
    return cells;
  }

  std::vector<ResultRow> aggregate(const std::vector<std::vector<CellResult>>& results) const {
    std::vector<ResultRow> rows;
    std::size_t cell = 0;
    // Cells were produced family -> fraction -> size -> scheme; rows are
    // emitted family -> scheme -> fraction -> size.
    for (std::size_t f = 0; f < config_.families.size(); ++f) {
      const std::size_t per_family = config_.rank_fractions.size() * sizes().size();
      const std::size_t schemes = schemes_[f].size();
      for (std::size_t s = 0; s < schemes; ++s) {
        for (std::size_t k = 0; k < config_.rank_fractions.size(); ++k) {
          for (std::size_t mi = 0; mi < sizes().size(); ++mi) {
            const std::size_t at = cell + (k * sizes().size() + mi) * schemes + s;
            ResultRow row;
            row.family = config_.families[f];
            row.scheme = schemes_[f][s];
            row.rank_fraction = config_.rank_fractions[k];
            row.leaf_fraction =
                row.family == Family::Tucker ? row.rank_fraction : config_.leaf_fraction;
            row.seed = config_.seed;
            row.ranks = results.front()[at].ranks;
            row.samples_per_class = results.front()[at].samples;
            double sum = 0.0;
            for (const auto& rep : results) {
              const CellResult& c = rep[at];
              row.errors.push_back(c.error);
              sum += c.error;
              row.norm_storage += c.norm_storage;
              row.norm_projection += c.norm_projection;
              row.clamped = row.clamped || c.clamped;
            }
            const auto n = static_cast<double>(results.size());
            row.mean_error = sum / n;
            row.norm_storage /= n;
            row.norm_projection /= n;
            double ss = 0.0;
            for (double e : row.errors) ss += (e - row.mean_error) * (e - row.mean_error);
            row.std_error = results.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            rows.push_back(std::move(row));
          }
        }
      }
      cell += per_family * schemes;
    }
    return rows;
  }

  ExperimentConfig config_;
  const Dataset& dataset_;
  bool curve_;
  std::vector<std::vector<Scheme>> schemes_;
};

}  // namespace

std::vector<ResultRow> run_rank_sweep(const ExperimentConfig& config, const Dataset& dataset) {
  return Runner(config, dataset, false).run();
}

std::vector<ResultRow> run_learning_curve(const ExperimentConfig& config,
                                          const Dataset& dataset) {
  return Runner(config, dataset, true).run();
}

std::vector<ResultRow> run_rank_sweep(const ExperimentConfig& config) {
  config.validate();
  return run_rank_sweep(config, load_dataset(config.dataset, config.seed));
}

std::vector<ResultRow> run_learning_curve(const ExperimentConfig& config) {
  config.validate();
  return run_learning_curve(config, load_dataset(config.dataset, config.seed));
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += to_string(r.family) + ',' + to_string(r.scheme) + ',' +
           format_double(r.rank_fraction) + ',' + format_double(r.leaf_fraction) + ',' +
           std::to_string(r.samples_per_class) + ',' + format_double(r.norm_storage) + ',' +
           format_double(r.norm_projection) + ',' + format_double(r.mean_error) + ',' +
           format_double(r.std_error) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string results_sidecar(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                            const std::string& command) {
  json jrows = json::array();
  for (const auto& r : rows)
    jrows.push_back({{"family", to_string(r.family)},
                     {"scheme", to_string(r.scheme)},
                     {"rankFraction", r.rank_fraction},
                     {"samplesPerClass", r.samples_per_class},
                     {"ranks", r.ranks},
                     {"clamped", r.clamped},
                     {"errors", r.errors}});
  json j{{"command", command},
         {"config", json::parse(config_to_json(config))},
         {"rows", jrows}};
  return j.dump(2) + "\n";
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  if (p == csv_path) p += ".json";
  return p;
}

void emit_results(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                  const std::string& command, const fs::path& csv_path) {
  if (csv_path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(csv_path.parent_path(), ec);
  }
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
    out << text;
    if (!out) fail(ErrorCode::Io, "failed writing " + p.string());
  };
  write(csv_path, results_csv(rows));
  write(sidecar_path(csv_path), results_sidecar(rows, config, command));
}

LibrarySpec library_spec_from_json(const std::string& text, const Dataset& dataset) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(ErrorCode::InvalidArgument, "library spec is not a JSON object");
  try {
    LibrarySpec spec;
    spec.family = family_from_string(j.value("family", std::string("ht")));
    switch (spec.family) {
      case Family::Tucker: spec.scheme = Scheme::TuckerModes; break;
      case Family::HierarchicalTucker: spec.scheme = Scheme::HtMaterialized; break;
      case Family::TensorTrain: spec.scheme = Scheme::TtMaterialized; break;
    }
    if (j.contains("scheme")) spec.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    if (j.contains("centering"))
      spec.centering = centering_from_string(j.at("centering").get<std::string>());
    const std::size_t order = dataset.shape.size();
    if (spec.family == Family::HierarchicalTucker)
      spec.tree = j.value("tree", std::string("balanced")) == "tt" ? tt_tree(order)
                                                                   : balanced_tree(order);
    else if (spec.family == Family::TensorTrain)
      spec.tree = tt_tree(order);

    if (j.contains("ranks")) {
      spec.ranks = j.at("ranks").get<std::vector<std::size_t>>();
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto& s : dataset.samples) ++counts[s.label];
      std::size_t n = SIZE_MAX;
      for (const auto& [_, c] : counts) n = std::min(n, c);
      if (counts.empty()) fail(ErrorCode::InvalidArgument, "empty dataset");
      const double fraction = j.value("rank_fraction", 1.0);
      spec.ranks = spec.tree ? resolve_tree_ranks(*spec.tree, dataset.shape, n,
                                                  j.value("leaf_fraction", 0.7), fraction,
                                                  RankPolicy::Clamp)
                                   .ranks
                             : resolve_tucker_ranks(dataset.shape, n, fraction,
                                                    RankPolicy::Clamp)
                                   .ranks;
    }
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("library spec: ") + e.what());
  }
}

std::vector<CostRow> cost_table(const Shape& shape, std::size_t leaf_rank,
                                std::size_t internal_rank) {
  if (shape.size() < 2) fail(ErrorCode::InvalidArgument, "cost table needs order >= 2");
  if (leaf_rank < 1 || internal_rank < 1)
    fail(ErrorCode::InvalidArgument, "ranks must be >= 1");
  const bool symmetric =
      shape.size() == 4 && std::all_of(shape.begin(), shape.end(),
                                       [&](std::size_t d) { return d == shape[0]; });
  const std::uint64_t n = shape[0], r = leaf_rank, rp = internal_rank;

  auto tree_layout = [&](const DimensionTree& tree) {
    ModelLayout layout{shape, tree, std::vector<std::size_t>(tree.node_count(), 0)};
    for (std::size_t id = 1; id < tree.node_count(); ++id)
      layout.ranks[id] = tree.is_leaf(id) ? leaf_rank : internal_rank;
    return layout;
  };
  std::vector<CostRow> rows;
  const ModelLayout tucker{shape, std::nullopt, std::vector<std::size_t>(shape.size(), leaf_rank)};
  rows.push_back({Family::Tucker, Scheme::TuckerModes, cost_layout(tucker, Scheme::TuckerModes),
                  symmetric ? std::optional(cost_formula_tucker(n, r)) : std::nullopt});
  const ModelLayout ht = tree_layout(balanced_tree(shape.size()));
  rows.push_back({Family::HierarchicalTucker, Scheme::HtMaterialized,
                  cost_layout(ht, Scheme::HtMaterialized),
                  symmetric ? std::optional(cost_formula_hier1(n, rp)) : std::nullopt});
  rows.push_back({Family::HierarchicalTucker, Scheme::HtFactored,
                  cost_layout(ht, Scheme::HtFactored),
                  symmetric ? std::optional(cost_formula_hier2(n, r, rp)) : std::nullopt});
  const ModelLayout tt = tree_layout(tt_tree(shape.size()));
  rows.push_back({Family::TensorTrain, Scheme::TtMaterialized,
                  cost_layout(tt, Scheme::TtMaterialized),
                  symmetric ? std::optional(cost_formula_tt(n, r, rp)) : std::nullopt});
  return rows;
}

std::string cost_table_csv(const std::vector<CostRow>& rows) {
  std::string out =
      "family,scheme,storage,projection,normStorage,normProjection,formulaStorage,"
      "formulaProjection\n";
  for (const auto& r : rows) {
    out += to_string(r.family) + ',' + to_string(r.scheme) + ',' +
           std::to_string(r.report.storage_scalars) + ',' +
           std::to_string(r.report.projection_macs) + ',' +
           format_double(r.report.normalized_storage()) + ',' +
           format_double(r.report.normalized_projection()) + ',' +
           (r.formula ? std::to_string(r.formula->storage) : std::string()) + ',' +
           (r.formula ? std::to_string(r.formula->projection) : std::string()) + '\n';
  }
  return out;
}

}  // namespace tsm

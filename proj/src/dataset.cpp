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

#include "tsm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tsm/error.hpp"
#include "tsm/linalg.hpp"
#include "tsm/rng.hpp"

namespace tsm {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::vector<std::string> Dataset::labels() const {
  std::set<std::string> s;
  for (const auto& x : samples) s.insert(x.label);
  return {s.begin(), s.end()};
}

namespace {

std::string read_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

std::size_t parse_size(const std::string& tok, const fs::path& path) {
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Io, path.string() + ": malformed PGM header");
  }
}

std::size_t product(std::span<const std::size_t> v) {
  std::size_t p = 1;
  for (auto x : v) p *= x;
  return p;
}

}  // namespace

Matrix read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  if (read_token(in) != "P5") fail(ErrorCode::Io, path.string() + ": not a binary PGM (P5)");
  const std::size_t width = parse_size(read_token(in), path);
  const std::size_t height = parse_size(read_token(in), path);
  const std::size_t maxval = parse_size(read_token(in), path);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 255)
    fail(ErrorCode::Io, path.string() + ": only 8-bit PGM is supported");
  std::vector<unsigned char> pixels(width * height);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size())
    fail(ErrorCode::Io, path.string() + ": truncated pixel data");
  Matrix m(static_cast<Eigen::Index>(height), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<double>(pixels[r * width + c]) / static_cast<double>(maxval);
  return m;
}

void write_pgm(const fs::path& path, const Matrix& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
}

Matrix read_csv_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
      if (end == cell.c_str() || (end && *end))
        fail(ErrorCode::Io, path.string() + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorCode::Io, path.string() + ": ragged CSV rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) fail(ErrorCode::Io, path.string() + ": empty CSV");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

void write_csv_matrix(const fs::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out << buf;
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

Matrix read_image(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".pgm" || ext == ".PGM") return read_pgm(path);
  if (ext == ".csv" || ext == ".CSV") return read_csv_matrix(path);
  fail(ErrorCode::Io, path.string() + ": unsupported image format");
}

DenseTensor image_to_tensor(const Matrix& image, std::span<const std::size_t> row_factors,
                            std::span<const std::size_t> col_factors) {
  if (row_factors.empty() || col_factors.empty())
    fail(ErrorCode::InvalidArgument, "reshape factors must not be empty");
  if (product(row_factors) != static_cast<std::size_t>(image.rows()) ||
      product(col_factors) != static_cast<std::size_t>(image.cols()))
    fail(ErrorCode::ShapeMismatch,
         "reshape factors do not multiply to the image size " + std::to_string(image.rows()) +
             "x" + std::to_string(image.cols()));
  std::vector<double> data(static_cast<std::size_t>(image.size()));
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) data[k++] = image(r, c);
  Shape shape(row_factors.begin(), row_factors.end());
  shape.insert(shape.end(), col_factors.begin(), col_factors.end());
  return DenseTensor(std::move(shape), std::move(data));
}

Matrix tensor_to_image(const DenseTensor& t, std::size_t row_axes) {
  if (row_axes == 0 || row_axes >= t.order())
    fail(ErrorCode::InvalidArgument, "row axis count must split the tensor");
  return unfold(t, AxisSet::range(0, row_axes));
}

Dataset load_image_dataset(const fs::path& root, std::span<const std::size_t> row_factors,
                           std::span<const std::size_t> col_factors) {
  if (!fs::is_directory(root)) fail(ErrorCode::Io, root.string() + " is not a directory");
  Dataset ds;
  ds.row_factors.assign(row_factors.begin(), row_factors.end());
  ds.col_factors.assign(col_factors.begin(), col_factors.end());
  if (ds.row_factors.empty() && ds.col_factors.empty() && fs::exists(root / "dataset.json")) {
    std::ifstream in(root / "dataset.json");
    const json meta = json::parse(in, nullptr, false);
    if (meta.is_discarded()) fail(ErrorCode::Io, "malformed dataset.json in " + root.string());
    ds.row_factors = meta.at("row_factors").get<std::vector<std::size_t>>();
    ds.col_factors = meta.at("col_factors").get<std::vector<std::size_t>>();
  }

  std::vector<fs::path> class_dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) class_dirs.push_back(e.path());
  std::sort(class_dirs.begin(), class_dirs.end());
  std::optional<std::pair<Eigen::Index, Eigen::Index>> image_size;
  for (const auto& dir : class_dirs) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      const std::string ext = e.path().extension().string();
      if (ext == ".pgm" || ext == ".PGM" || ext == ".csv" || ext == ".CSV")
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const Matrix image = read_image(f);
      if (!image_size) image_size = {image.rows(), image.cols()};
      if (image_size->first != image.rows() || image_size->second != image.cols())
        fail(ErrorCode::ShapeMismatch, f.string() + ": inconsistent image size");
      if (ds.row_factors.empty()) ds.row_factors = {static_cast<std::size_t>(image.rows())};
      if (ds.col_factors.empty()) ds.col_factors = {static_cast<std::size_t>(image.cols())};
      ds.samples.push_back({dir.filename().string(),
                            image_to_tensor(image, ds.row_factors, ds.col_factors)});
    }
  }
  if (ds.samples.empty()) fail(ErrorCode::Io, "no images found under " + root.string());
  ds.shape = ds.samples.front().tensor.shape();
  return ds;
}

void save_dataset(const Dataset& dataset, const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + root.string() + ": " + ec.message());
  json meta;
  meta["shape"] = dataset.shape;
  meta["row_factors"] = dataset.row_factors;
  meta["col_factors"] = dataset.col_factors;
  {
    std::ofstream out(root / "dataset.json");
    if (!out) fail(ErrorCode::Io, "cannot write dataset.json in " + root.string());
    out << meta.dump(2) << '\n';
  }
  std::map<std::string, std::size_t> counters;
  for (const auto& s : dataset.samples) {
    const fs::path dir = root / s.label;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + dir.string());
    char name[32];
    std::snprintf(name, sizeof name, "%05zu.csv", counters[s.label]++);
    write_csv_matrix(dir / name, tensor_to_image(s.tensor, dataset.row_factors.size()));
  }
}

std::string synthetic_label(std::size_t index, std::size_t class_count) {
  const int width = std::max(2, static_cast<int>(std::to_string(class_count - 1).size()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%0*zu", width, index);
  return buf;
}

std::vector<std::size_t> planted_ranks(const SyntheticSpec& spec) {
  if (spec.ranks) return *spec.ranks;
  // A sample count of prod(shape) makes every node's ceiling its own size.
  const std::size_t unlimited = shape_size(spec.shape);
  if (spec.family == Family::Tucker)
    return resolve_tucker_ranks(spec.shape, unlimited, spec.leaf_fraction, RankPolicy::Clamp)
        .ranks;
  return resolve_tree_ranks(default_tree(spec.family, spec.shape.size()), spec.shape, unlimited,
                            spec.leaf_fraction, spec.internal_fraction, RankPolicy::Clamp)
      .ranks;
}

TuckerModel random_tucker_model(const Shape& shape, std::span<const std::size_t> ranks,
                                Rng& rng) {
  if (ranks.size() != shape.size()) fail(ErrorCode::InvalidArgument, "one rank per axis");
  TuckerModel m{shape, {}};
  for (std::size_t i = 0; i < shape.size(); ++i)
    m.factors.push_back(random_orthonormal(shape[i], ranks[i], rng));
  return m;
}

HtModel random_ht_model(const DimensionTree& tree, const Shape& shape,
                        std::span<const std::size_t> ranks, Rng& rng) {
  if (tree.order() != shape.size() || ranks.size() != tree.node_count())
    fail(ErrorCode::InvalidArgument, "tree, shape and ranks do not agree");
  HtModel m{shape, tree, std::vector<Matrix>(tree.node_count()),
            std::vector<Matrix>(tree.node_count())};
  for (std::size_t id : tree.leaves_to_root()) {
    if (tree.is_root(id)) continue;
    const auto& nd = tree.node(id);
    if (nd.is_leaf()) {
      m.bases[id] = random_orthonormal(shape[nd.axes.front()], ranks[id], rng);
      continue;
    }
    const Matrix& ul = m.bases[static_cast<std::size_t>(nd.left)];
    const Matrix& ur = m.bases[static_cast<std::size_t>(nd.right)];
    m.transfers[id] =
        random_orthonormal(static_cast<std::size_t>(ul.cols() * ur.cols()), ranks[id], rng);
    m.bases[id] = kron_apply(ul, ur, m.transfers[id]);
  }
  return m;
}

DenseTensor random_subspace_sample(const SubspaceModel& model, Rng& rng) {
  if (const auto* t = std::get_if<TuckerModel>(&model)) {
    Shape core_shape = t->ranks();
    DenseTensor core(core_shape);
    for (double& v : core.mutable_data()) v = rng.normal();
    return reconstruct(*t, core);
  }
  const auto& h = std::get<HtModel>(model);
  const auto& root = h.tree.node(DimensionTree::root());
  Matrix c(static_cast<Eigen::Index>(h.rank(static_cast<std::size_t>(root.left))),
           static_cast<Eigen::Index>(h.rank(static_cast<std::size_t>(root.right))));
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i) c(i, j) = rng.normal();
  return reconstruct(h, c);
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.class_count < 1) fail(ErrorCode::InvalidArgument, "need at least one class");
  if (spec.samples_per_class < 1) fail(ErrorCode::InvalidArgument, "need samples per class");
  if (spec.shape.size() < 2) fail(ErrorCode::InvalidArgument, "synthetic tensors need order >= 2");
  if (spec.noise < 0.0) fail(ErrorCode::InvalidArgument, "noise must be non-negative");
  const std::vector<std::size_t> ranks = planted_ranks(spec);
  const std::optional<DimensionTree> tree =
      spec.family == Family::Tucker
          ? std::nullopt
          : std::optional<DimensionTree>(default_tree(spec.family, spec.shape.size()));
  if (tree) {
    validate_tree_ranks(*tree, spec.shape, shape_size(spec.shape), ranks);
  } else {
    validate_tucker_ranks(spec.shape, shape_size(spec.shape), ranks);
  }

  const std::size_t axis0_rank = tree ? ranks[tree->leaf_of_axis(0)] : ranks[0];
  std::optional<Matrix> shared_axis0;
  if (spec.orthogonal_classes) {
    if (spec.class_count * axis0_rank > spec.shape[0])
      fail(ErrorCode::RankInfeasible, "orthogonal classes need class_count * r_0 <= I_0");
    Rng rng(derive_seed(spec.seed, {0x0a7415ULL}));
    shared_axis0 = random_orthonormal(spec.shape[0], spec.class_count * axis0_rank, rng);
  }

  Dataset ds;
  ds.shape = spec.shape;
  const std::size_t half = (spec.shape.size() + 1) / 2;
  ds.row_factors.assign(spec.shape.begin(), spec.shape.begin() + static_cast<long>(half));
  ds.col_factors.assign(spec.shape.begin() + static_cast<long>(half), spec.shape.end());
  const double ambient = static_cast<double>(shape_size(spec.shape));

  for (std::size_t c = 0; c < spec.class_count; ++c) {
    Rng rng(derive_seed(spec.seed, {c}));
    SubspaceModel model = tree ? SubspaceModel(random_ht_model(*tree, spec.shape, ranks, rng))
                               : SubspaceModel(random_tucker_model(spec.shape, ranks, rng));
    if (shared_axis0) {
      const Matrix block =
          shared_axis0->middleCols(static_cast<Eigen::Index>(c * axis0_rank),
                                   static_cast<Eigen::Index>(axis0_rank));
      if (auto* t = std::get_if<TuckerModel>(&model)) {
        t->factors[0] = block;
      } else {
        auto& h = std::get<HtModel>(model);
        // Rebuild the hierarchy above the replaced leaf.
        h.bases[tree->leaf_of_axis(0)] = block;
        for (std::size_t id : tree->leaves_to_root()) {
          const auto& nd = tree->node(id);
          if (tree->is_root(id) || nd.is_leaf()) continue;
          h.bases[id] = kron_apply(h.bases[static_cast<std::size_t>(nd.left)],
                                   h.bases[static_cast<std::size_t>(nd.right)], h.transfers[id]);
        }
      }
    }
    const std::string label = synthetic_label(c, spec.class_count);
    for (std::size_t k = 0; k < spec.samples_per_class; ++k) {
      DenseTensor x = random_subspace_sample(model, rng);
      if (spec.noise > 0.0) {
        const double scale = spec.noise * frobenius_norm(x) / std::sqrt(ambient);
        for (double& v : x.mutable_data()) v += scale * rng.normal();
      }
      ds.samples.push_back({label, std::move(x)});
    }
  }
  return ds;
}

}  // namespace tsm

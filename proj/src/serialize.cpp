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

#include "tsm/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "tsm/error.hpp"

namespace tsm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr char kMagic[8] = {'T', 'S', 'M', 'L', 'I', 'B', '0', '1'};

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

class PayloadWriter {
 public:
  json add(const std::string& name, const Matrix& m) {
    json entry{{"name", name},
               {"dims", {m.rows(), m.cols()}},
               {"offset", bytes_.size()}};
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) put(m(r, c));
    return entry;
  }
  json add(const std::string& name, const DenseTensor& t) {
    json entry{{"name", name}, {"dims", t.shape()}, {"offset", bytes_.size()}};
    for (double v : t.data()) put(v);
    return entry;
  }
  const std::string& bytes() const { return bytes_; }

 private:
  void put(double v) {
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    bytes_.append(buf, 8);
  }
  std::string bytes_;
};

class PayloadReader {
 public:
  explicit PayloadReader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::vector<double> read(const json& entry, std::size_t count) const {
    const auto offset = entry.at("offset").get<std::size_t>();
    if (offset % 8 != 0 || offset + count * 8 > bytes_.size())
      fail(ErrorCode::Io, "array '" + entry.at("name").get<std::string>() +
                              "' lies outside the payload");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, bytes_.data() + offset + 8 * i, 8);
      out[i] = std::bit_cast<double>(to_le(bits));
    }
    return out;
  }

 private:
  std::string bytes_;
};

json tree_to_json(const DimensionTree& tree) {
  json nodes = json::array();
  for (const auto& nd : tree.nodes())
    nodes.push_back({{"axes", nd.axes.axes()},
                     {"parent", nd.parent},
                     {"left", nd.left},
                     {"right", nd.right}});
  return {{"order", tree.order()}, {"nodes", nodes}};
}

DimensionTree tree_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  for (const auto& n : j.at("nodes"))
    nodes.push_back({AxisSet(n.at("axes").get<std::vector<std::size_t>>()),
                     n.at("parent").get<int>(), n.at("left").get<int>(),
                     n.at("right").get<int>()});
  return DimensionTree(j.at("order").get<std::size_t>(), std::move(nodes));
}

}  // namespace

void save_library(const ClassLibrary& lib, const fs::path& path,
                  const std::string& metadata_json) {
  json meta = json::parse(metadata_json, nullptr, false);
  if (meta.is_discarded() || !meta.is_object())
    fail(ErrorCode::InvalidArgument, "library metadata must be a JSON object");

  PayloadWriter payload;
  json arrays = json::array();
  if (lib.mean) arrays.push_back(payload.add("mean", *lib.mean));
  for (const auto& [label, m] : lib.class_means)
    arrays.push_back(payload.add("class_mean/" + label, m));
  json classes = json::array();
  for (const auto& [label, model] : lib.models) {
    classes.push_back(label);
    if (const auto* t = std::get_if<TuckerModel>(&model)) {
      for (std::size_t i = 0; i < t->factors.size(); ++i)
        arrays.push_back(payload.add("model/" + label + "/factor/" + std::to_string(i),
                                     t->factors[i]));
      continue;
    }
    const auto& h = std::get<HtModel>(model);
    for (std::size_t id = 1; id < h.tree.node_count(); ++id) {
      arrays.push_back(payload.add("model/" + label + "/basis/" + std::to_string(id),
                                   h.bases[id]));
      if (!h.tree.is_leaf(id))
        arrays.push_back(payload.add("model/" + label + "/transfer/" + std::to_string(id),
                                     h.transfers[id]));
    }
  }

  json header{{"format", "tsm-library"},
              {"version", 1},
              {"shape", lib.shape},
              {"family", to_string(lib.family)},
              {"scheme", to_string(lib.scheme)},
              {"centering", to_string(lib.centering)},
              {"ranks", lib.ranks},
              {"classes", classes},
              {"metadata", meta},
              {"arrays", arrays},
              {"payload_bytes", payload.bytes().size()}};
  if (lib.tree) header["tree"] = tree_to_json(*lib.tree);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out.write(kMagic, 8);
  const std::uint64_t len = to_le(text.size());
  out.write(reinterpret_cast<const char*>(&len), 8);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  const std::size_t pad = (8 - text.size() % 8) % 8;
  out.write("\0\0\0\0\0\0\0", static_cast<std::streamsize>(pad));
  out.write(payload.bytes().data(), static_cast<std::streamsize>(payload.bytes().size()));
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

LoadedLibrary load_library(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  char magic[8];
  std::uint64_t len = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    fail(ErrorCode::Io, path.string() + ": not a tsm library file");
  if (!in.read(reinterpret_cast<char*>(&len), 8)) fail(ErrorCode::Io, "truncated header");
  len = to_le(len);
  if (len > (std::uint64_t{1} << 32)) fail(ErrorCode::Io, "implausible header length");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len)))
    fail(ErrorCode::Io, "truncated header");
  const json header = json::parse(text, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "tsm-library")
    fail(ErrorCode::Io, path.string() + ": malformed library header");
  in.ignore(static_cast<std::streamsize>((8 - len % 8) % 8));
  const auto payload_bytes = header.at("payload_bytes").get<std::size_t>();
  std::string payload(payload_bytes, '\0');
  if (!in.read(payload.data(), static_cast<std::streamsize>(payload_bytes)))
    fail(ErrorCode::Io, path.string() + ": truncated payload");
  const PayloadReader reader(std::move(payload));

  try {
    std::map<std::string, json> entries;
    for (const auto& a : header.at("arrays")) entries[a.at("name").get<std::string>()] = a;
    auto matrix = [&](const std::string& name) {
      const json& e = entries.at(name);
      const auto dims = e.at("dims").get<std::vector<Eigen::Index>>();
      const auto data = reader.read(e, static_cast<std::size_t>(dims[0] * dims[1]));
      Matrix m(dims[0], dims[1]);
      for (Eigen::Index r = 0; r < dims[0]; ++r)
        for (Eigen::Index c = 0; c < dims[1]; ++c)
          m(r, c) = data[static_cast<std::size_t>(r * dims[1] + c)];
      return m;
    };
    auto tensor = [&](const std::string& name) {
      const json& e = entries.at(name);
      Shape dims = e.at("dims").get<Shape>();
      return DenseTensor(dims, reader.read(e, shape_size(dims)));
    };

    LoadedLibrary out;
    ClassLibrary& lib = out.library;
    lib.shape = header.at("shape").get<Shape>();
    lib.family = family_from_string(header.at("family").get<std::string>());
    lib.scheme = scheme_from_string(header.at("scheme").get<std::string>());
    lib.centering = centering_from_string(header.at("centering").get<std::string>());
    lib.ranks = header.at("ranks").get<std::vector<std::size_t>>();
    if (header.contains("tree")) lib.tree = tree_from_json(header.at("tree"));
    if (entries.count("mean")) lib.mean = tensor("mean");
    for (const auto& label : header.at("classes")) {
      const auto name = label.get<std::string>();
      if (lib.centering == Centering::PerClass)
        lib.class_means.emplace(name, tensor("class_mean/" + name));
      if (lib.family == Family::Tucker) {
        TuckerModel t{lib.shape, {}};
        for (std::size_t i = 0; i < lib.shape.size(); ++i)
          t.factors.push_back(matrix("model/" + name + "/factor/" + std::to_string(i)));
        lib.models.emplace(name, std::move(t));
      } else {
        HtModel h{lib.shape, *lib.tree, std::vector<Matrix>(lib.tree->node_count()),
                  std::vector<Matrix>(lib.tree->node_count())};
        for (std::size_t id = 1; id < h.tree.node_count(); ++id) {
          h.bases[id] = matrix("model/" + name + "/basis/" + std::to_string(id));
          if (!h.tree.is_leaf(id))
            h.transfers[id] = matrix("model/" + name + "/transfer/" + std::to_string(id));
        }
        lib.models.emplace(name, std::move(h));
      }
    }
    out.metadata_json = header.at("metadata").dump();
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::Io, path.string() + ": " + e.what());
  } catch (const std::out_of_range&) {
    fail(ErrorCode::Io, path.string() + ": missing array");
  }
}

}  // namespace tsm

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

#pragma once

#include <filesystem>
#include <string>

#include "tsm/classifier.hpp"

namespace tsm {

// Library container:
//
//   bytes 0..7    magic "TSMLIB01"
//   bytes 8..15   header length H, uint64 little-endian
//   next H bytes  JSON header (shape, family, scheme, centering, ranks, tree,
//                 class labels, caller metadata, and an array table giving
//                 name, dims and byte offset of every stored matrix)
//   zero padding to a multiple of 8
//   payload       float64 little-endian, matrices row-major
//
// `metadata_json` is an arbitrary JSON object stored verbatim.
void save_library(const ClassLibrary& library, const std::filesystem::path& path,
                  const std::string& metadata_json = "{}");

struct LoadedLibrary {
  ClassLibrary library;
  std::string metadata_json;
};

LoadedLibrary load_library(const std::filesystem::path& path);

}  // namespace tsm

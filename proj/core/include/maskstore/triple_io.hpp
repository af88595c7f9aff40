// Copyright 2026 The maskstore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "maskstore/assoc_array.hpp"

namespace maskstore {

// Triple file format: UTF-8 TSV, one `row<TAB>col<TAB>val` per line, LF
// endings, no header.

/// Throws FormatError naming the 1-based line for anything but three
/// non-empty fields.
std::vector<Triple> read_triples(std::istream& in);
std::vector<Triple> read_triples(const std::filesystem::path& file);

/// Throws FormatError when a field holds TAB or LF.
void write_triples(std::ostream& out, std::span<const Triple> triples);
void write_triples(const std::filesystem::path& file, std::span<const Triple> triples);

/// Throws FormatError when `field` cannot be stored in the TSV grammar.
void check_tsv_field(std::string_view field);

}  // namespace maskstore

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


#include "maskstore/triple_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "maskstore/errors.hpp"

namespace maskstore {

void check_tsv_field(std::string_view field) {
  if (field.find_first_of("\t\n") != std::string_view::npos) {
    throw FormatError("field contains TAB or LF");
  }
}

std::vector<Triple> read_triples(std::istream& in) {
  std::vector<Triple> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw FormatError("line " + std::to_string(lineno) + ": expected 3 tab-separated fields");
    }
    Triple t{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
    if (t.row.empty() || t.col.empty() || t.val.empty()) {
      throw FormatError("line " + std::to_string(lineno) + ": empty field");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Triple> read_triples(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw StoreError("cannot open " + file.string());
  try {
    return read_triples(in);
  } catch (FormatError& e) {
    e.add_context(file.string());
    throw;
  }
}

void write_triples(std::ostream& out, std::span<const Triple> triples) {
  for (const auto& t : triples) {
    check_tsv_field(t.row);
    check_tsv_field(t.col);
    check_tsv_field(t.val);
    out << t.row << '\t' << t.col << '\t' << t.val << '\n';
  }
}

void write_triples(const std::filesystem::path& file, std::span<const Triple> triples) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot open " + file.string() + " for writing");
  write_triples(out, triples);
  if (!out.flush()) throw StoreError("write to " + file.string() + " failed");
}

}  // namespace maskstore

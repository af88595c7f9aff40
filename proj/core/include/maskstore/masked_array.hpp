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

#include <string>
#include <string_view>

#include "maskstore/assoc_array.hpp"
#include "maskstore/masking.hpp"

namespace maskstore {

/// Masking level per dimension, written "ROW,COL,VAL" (e.g. "DET,DET,RND").
struct MaskSpec {
  MaskMode row = MaskMode::CLR;
  MaskMode col = MaskMode::CLR;
  MaskMode val = MaskMode::CLR;

  /// Throws ConfigError.
  static MaskSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const MaskSpec&, const MaskSpec&) = default;
};

/// OPE client session per dimension; required wherever a dimension is OPE.
/// Several dimensions may share one session (one tree).
struct OpeBindings {
  OpeClient* row = nullptr;
  OpeClient* col = nullptr;
  OpeClient* val = nullptr;
};

struct MaskOptions {
  /// RND keys cannot be queried or correlated; refuse them unless set.
  bool allow_rnd_keys = false;
};

/// An associative array whose keys and values are masktext payloads.
struct MaskedArray {
  AssociativeArray array;
  MaskSpec spec;
};

/// Masks every row key, column key and value at its MaskSpec level. Each distinct
/// key is masked once, so rows and columns keep their identity even under
/// RND. OPE dimensions are inserted as a batch and resolved after the last
/// insertion. Errors carry (dimension, key) context.
MaskedArray mask_array(const AssociativeArray& a, const MaskSpec& spec, const KeyMaterial& key,
                       const OpeBindings& ope = {}, const MaskOptions& options = {});

/// Triple-level form of mask_array(): output order and multiplicity follow
/// the input.
std::vector<Triple> mask_triples(std::span<const Triple> triples, const MaskSpec& spec,
                                 const KeyMaterial& key, const OpeBindings& ope = {},
                                 const MaskOptions& options = {});

enum class ValuePolicy {
  /// Unmask values under spec.val.
  Declared,
  /// Values are computed counts in the clear whatever spec.val says; each
  /// non-CLR declaration is counted as a warning.
  CountsAsClear,
};

AssociativeArray unmask_array(const MaskedArray& m, const KeyMaterial& key,
                              const OpeBindings& ope = {},
                              ValuePolicy policy = ValuePolicy::Declared,
                              std::size_t* warnings = nullptr);

/// Unmasks scan results under `spec`. Each distinct key and value is
/// unmasked once per call.
std::vector<Triple> unmask_triples(std::span<const Triple> triples, const MaskSpec& spec,
                                   const KeyMaterial& key, const OpeBindings& ope = {},
                                   ValuePolicy policy = ValuePolicy::Declared);

}  // namespace maskstore

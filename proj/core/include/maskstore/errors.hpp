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

#include <exception>
#include <string>
#include <string_view>

namespace maskstore {

/// Base of every error raised by the library.
///
/// Errors carry a mutable message so that callers further up the stack can
/// attach context (dimension, key, line number) and rethrow the same object
/// with `throw;`, keeping the dynamic type intact.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  /// Prefixes `context: ` to the message.
  void add_context(std::string_view context);

 private:
  std::string message_;
};

#define MASKSTORE_DEFINE_ERROR(Name, Base)           \
  class Name : public Base {                         \
   public:                                           \
    explicit Name(std::string message)               \
        : Base(std::move(message)) {}                \
  }

// masking
MASKSTORE_DEFINE_ERROR(ConfigError, Error);
MASKSTORE_DEFINE_ERROR(CryptoError, Error);
MASKSTORE_DEFINE_ERROR(FormatError, Error);
MASKSTORE_DEFINE_ERROR(UnmaskError, Error);
MASKSTORE_DEFINE_ERROR(IntegrityError, UnmaskError);

// mope
MASKSTORE_DEFINE_ERROR(DepthExceeded, Error);
MASKSTORE_DEFINE_ERROR(ProtocolError, Error);
MASKSTORE_DEFINE_ERROR(NotFound, Error);
MASKSTORE_DEFINE_ERROR(ArgumentError, Error);

// assoc_array
MASKSTORE_DEFINE_ERROR(SchemaError, Error);
MASKSTORE_DEFINE_ERROR(ValueError, Error);

// store
MASKSTORE_DEFINE_ERROR(StoreError, Error);
MASKSTORE_DEFINE_ERROR(RemapError, Error);
MASKSTORE_DEFINE_ERROR(LoadError, Error);

#undef MASKSTORE_DEFINE_ERROR

}  // namespace maskstore

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


#include "maskstore/errors.hpp"

namespace maskstore {

void Error::add_context(std::string_view context) {
  std::string prefixed;
  prefixed.reserve(context.size() + 2 + message_.size());
  prefixed.append(context).append(": ").append(message_);
  message_ = std::move(prefixed);
}

}  // namespace maskstore

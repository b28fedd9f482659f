// Copyright 2026 The zxrl Authors
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

#include <stdexcept>
#include <string>

namespace zxrl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed circuit, diagram, config or checkpoint text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A rewrite was requested whose precondition does not hold.
class RejectedAction : public Error {
 public:
  using Error::Error;
};

/// Circuit extraction could not make progress (the diagram has no gflow).
class ExtractionStalled : public Error {
 public:
  using Error::Error;
};

/// Gate or size outside what an oracle supports.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Tensor/parameter shapes disagree.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace zxrl

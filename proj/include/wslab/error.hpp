// Copyright 2026 The wslab Authors.
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

#ifndef WSLAB_ERROR_HPP_
#define WSLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wslab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument shapes disagree (vector length vs. norm dimension, etc).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An input violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The duality map is requested at a point where the dual norm has a kink.
class NotDifferentiable : public Error {
 public:
  using Error::Error;
};

// An iterative method (transport simplex, adaptive quadrature, line search)
// hit its iteration cap before reaching the requested accuracy.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A property that holds by theorem failed numerically; indicates a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace wslab

#endif  // WSLAB_ERROR_HPP_

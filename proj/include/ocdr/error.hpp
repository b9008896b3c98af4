/*
 Copyright 2026 The ocdr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace ocdr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two signals (or a signal and a system) live on different time grids.
class GridMismatch : public Error {
 public:
  GridMismatch() : Error("incompatible grids") {}
};

/// Problem data violates an invariant, or a problem file is malformed.
class ProblemError : public Error {
 public:
  using Error::Error;
};

/// State or adjoint propagation produced non-finite values.
class DynamicsError : public Error {
 public:
  using Error::Error;
};

/// An affine projector could not be built or applied.
class ProjectorError : public Error {
 public:
  using Error::Error;
};

/// Douglas-Rachford iterates became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(int iteration)
      : Error("divergence detected at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// The dual signal cannot be represented through the adjoint flow.
class DualRepresentationError : public Error {
 public:
  DualRepresentationError() : Error("dual representation ill-posed") {}
};

}  // namespace ocdr

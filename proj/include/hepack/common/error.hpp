/*
 * Copyright 2026 The hepack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HEPACK_COMMON_ERROR_HPP_
#define HEPACK_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hepack {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix/tensor sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid scheme or backend parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operands were produced under different parameter sets.
class ParamMismatch : public Error {
 public:
  using Error::Error;
};

// The multiplicative depth budget would be (or has been) exceeded.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

// Operand layouts are incompatible with the requested operation.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Adjacent layer shapes do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data or model file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File system failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// A run was refused because its estimated footprint exceeds a cap.
class CapacityRefusal : public Error {
 public:
  using Error::Error;
};

// An integer computation would leave the exactly representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace hepack

#endif  // HEPACK_COMMON_ERROR_HPP_

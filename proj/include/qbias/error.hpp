// Copyright 2026 The qbias Authors
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

namespace qbias {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A size argument (qubit count, bit-string length, n) is out of range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Malformed gate, circuit, or parameter vector.
class CircuitError : public Error {
  public:
    using Error::Error;
};

/// The encoder cannot represent this input (amplitude encoding of all zeros).
class UnencodableError : public Error {
  public:
    using Error::Error;
};

/// Random relu produced the zero vector.
class DegenerateEncodingError : public Error {
  public:
    using Error::Error;
};

/// Asymmetric or indefinite kernel, failed spectral decomposition.
class MatrixError : public Error {
  public:
    using Error::Error;
};

/// Unknown CLI token or inconsistent experiment configuration.
class UsageError : public Error {
  public:
    using Error::Error;
};

/// Operation is defined only for a paper-fixed configuration.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

} // namespace qbias

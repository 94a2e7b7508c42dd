/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace cvsynth {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input matrix or file content violates a structural requirement
/// (unitarity, dimension, closure under inverse).
class ValidationError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

/// Square root of an SU(2) element within tolerance of -I: every unit
/// pure-imaginary quaternion squares to -I, so the caller must pick one.
class BranchAmbiguityError : public Error {
  public:
    using Error::Error;
};

/// A stored synthesis result does not reproduce its recorded error.
class IntegrityError : public Error {
  public:
    using Error::Error;
};

class UnsupportedError : public Error {
  public:
    using Error::Error;
};

}  // namespace cvsynth

/* Copyright 2026 The CTM Authors. All Rights Reserved.

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

namespace ctm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid hyperparameters or command configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Image/dataset dimensions do not match what a model expects.
struct DimensionError : Error {
  using Error::Error;
};

// Malformed input file (bad magic, truncation, inconsistent sizes).
struct ParseError : Error {
  using Error::Error;
};

// Container payload does not match its checksum.
struct ChecksumError : ParseError {
  using ParseError::ParseError;
};

// Container format version is not supported by this build.
struct FormatVersionError : ParseError {
  using ParseError::ParseError;
};

}  // namespace ctm

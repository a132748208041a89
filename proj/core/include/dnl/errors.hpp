// Copyright 2026 The DNL Saliency Authors. All Rights Reserved.
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

namespace dnl {

// Root of the error taxonomy. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent shapes, invalid hyper-parameters, bad config files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// A readable file whose contents are malformed (bad magic, truncation).
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

// A weight store lacking a parameter the active config requires.
class IncompleteModelError : public Error {
 public:
  explicit IncompleteModelError(const std::string& path)
      : Error("missing parameter: " + path), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace dnl

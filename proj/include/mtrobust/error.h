// Copyright 2026 The mtrobust Authors.
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

#ifndef MTROBUST_ERROR_H_
#define MTROBUST_ERROR_H_

#include <stdexcept>
#include <string>

namespace mtrobust {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or an invalid configuration value.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (encoding, lengths, undefined
// metrics).
class DataError : public Error {
 public:
  using Error::Error;
};

// The translation system under test failed or misbehaved.
class TranslatorError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtrobust

#endif  // MTROBUST_ERROR_H_

// Copyright 2026 The gadtparam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gadtparam {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(std::string msg, SourcePos pos);

  const std::string &message() const { return msg_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string msg_;
  SourcePos pos_;
};

// Kinding and typing failures. A single check may report several problems.
class CheckError : public Error {
 public:
  explicit CheckError(std::string msg);
  explicit CheckError(std::vector<std::string> diagnostics);

  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// A resource cap (carrier size, depth, relation enumeration) was exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

}  // namespace gadtparam

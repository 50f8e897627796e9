// Copyright 2026 The ALGAS2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALGAS2_ERROR_HPP_
#define ALGAS2_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace algas2 {

enum class ErrorCode {
  kInvalidArgument = 1,
  kConfig = 2,
  kIo = 3,
  kRange = 4,
  kSchedule = 5,
  kSimulation = 6,
};

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto ALGAS2_E_* status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace algas2

#endif  // ALGAS2_ERROR_HPP_

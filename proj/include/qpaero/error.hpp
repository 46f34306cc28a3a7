// Copyright 2026 The qpaero Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpaero {

// Numeric values are part of the C ABI (see qpaero.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kDomain = 1,             // argument outside the mathematical domain
  kContract = 2,           // caller broke a precondition (frame tag, mode)
  kUnsupportedRegion = 3,  // thrust-map alpha_p gap (10, 80) deg
  kStall = 4,              // alpha beyond the fitted pre-stall range
  kSingular = 5,           // rank-deficient fit or zero dynamic pressure
  kInfeasible = 6,
  kFormat = 7,
  kSequencing = 8,
  kOutOfEnvelope = 9,      // mesh lookup outside the grid hull
  kBuild = 10,
  kIo = 11,
  kInvalidArgument = 12,
  kInternal = 13,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Carries the interval the caller could have asked for instead.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double lo, double hi)
      : Error(ErrorCode::kInfeasible, what), lo_(lo), hi_(hi) {}

  double achievable_lo() const noexcept { return lo_; }
  double achievable_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace qpaero

// Copyright 2026 The zxrl Authors
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

#include <cmath>
#include <compare>
#include <numbers>
#include <ostream>

namespace zxrl {

/// Spider angle restricted to integer multiples of pi/4, stored as k in [0, 8).
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int k) : k_(((k % 8) + 8) % 8) {}

  static constexpr Phase zero() { return Phase(0); }
  static constexpr Phase pi() { return Phase(4); }
  static constexpr Phase half_pi() { return Phase(2); }

  [[nodiscard]] constexpr int k() const { return k_; }
  [[nodiscard]] double radians() const {
    return k_ * std::numbers::pi / 4.0;
  }

  [[nodiscard]] constexpr bool is_zero() const { return k_ == 0; }
  [[nodiscard]] constexpr bool is_clifford() const { return k_ % 2 == 0; }
  [[nodiscard]] constexpr bool is_proper_clifford() const {
    return k_ == 2 || k_ == 6;
  }
  [[nodiscard]] constexpr bool is_pauli() const { return k_ == 0 || k_ == 4; }

  constexpr Phase& operator+=(Phase o) {
    k_ = (k_ + o.k_) % 8;
    return *this;
  }
  constexpr Phase& operator-=(Phase o) {
    k_ = (k_ + 8 - o.k_) % 8;
    return *this;
  }
  friend constexpr Phase operator+(Phase a, Phase b) { return a += b; }
  friend constexpr Phase operator-(Phase a, Phase b) { return a -= b; }
  constexpr Phase operator-() const { return Phase(-k_); }

  friend constexpr bool operator==(Phase, Phase) = default;
  friend constexpr auto operator<=>(Phase, Phase) = default;

  friend std::ostream& operator<<(std::ostream& os, Phase p) {
    return os << p.k_ << "pi/4";
  }

 private:
  int k_ = 0;
};

}  // namespace zxrl

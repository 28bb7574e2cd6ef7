// Copyright 2026 The nmfclust Authors. All Rights Reserved.
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

#ifndef NMFCLUST_DATE_HPP_
#define NMFCLUST_DATE_HPP_

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace nmfclust {

// UTC-naive calendar date stored as a day count since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  // Parses an ISO-8601 date "YYYY-MM-DD"; throws Error(kParse) otherwise.
  static Date parse(std::string_view text);

  std::string iso() const;
  std::chrono::sys_days sys_days() const { return days_; }

  Date operator+(int days) const { return Date(days_ + std::chrono::days(days)); }
  Date operator-(int days) const { return Date(days_ - std::chrono::days(days)); }
  int operator-(const Date& other) const {
    return static_cast<int>((days_ - other.days_).count());
  }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace nmfclust

#endif  // NMFCLUST_DATE_HPP_

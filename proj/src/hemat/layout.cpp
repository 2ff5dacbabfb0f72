/*
 * Copyright 2026 The hepack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hepack/hemat/layout.hpp"

#include <algorithm>
#include <cctype>

#include "hepack/common/error.hpp"

namespace hepack::hemat {

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::kRP:
      return "RP";
    case Layout::kCP:
      return "CP";
    case Layout::kRCP:
      return "RCP";
    case Layout::kCCP:
      return "CCP";
  }
  return "?";
}

Layout parse_layout(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "rp") return Layout::kRP;
  if (lower == "cp") return Layout::kCP;
  if (lower == "rcp") return Layout::kRCP;
  if (lower == "ccp") return Layout::kCCP;
  throw LayoutError("unknown layout '" + std::string(name) + "'");
}

std::size_t ciphertext_count(Layout layout, std::size_t rows, std::size_t cols, std::size_t s) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (s == 0) throw DimensionError("slots_used must be positive");
  switch (layout) {
    case Layout::kRP:
      if (cols > s) throw LayoutError("RP rows do not fit in slots_used");
      return rows;
    case Layout::kCP:
      if (rows > s) throw LayoutError("CP columns do not fit in slots_used");
      return cols;
    case Layout::kRCP:
    case Layout::kCCP:
      return (rows * cols + s - 1) / s;
  }
  throw LayoutError("unknown layout");
}

SlotPos locate(Layout layout, std::size_t rows, std::size_t cols, std::size_t s, std::size_t r,
               std::size_t c) {
  switch (layout) {
    case Layout::kRP:
      return {r, c};
    case Layout::kCP:
      return {c, r};
    case Layout::kRCP: {
      const std::size_t pos = r * cols + c;
      return {pos / s, pos % s};
    }
    case Layout::kCCP: {
      const std::size_t pos = c * rows + r;
      return {pos / s, pos % s};
    }
  }
  throw LayoutError("unknown layout");
}

Layout transposed(Layout layout) {
  switch (layout) {
    case Layout::kRP:
      return Layout::kCP;
    case Layout::kCP:
      return Layout::kRP;
    case Layout::kRCP:
      return Layout::kCCP;
    case Layout::kCCP:
      return Layout::kRCP;
  }
  throw LayoutError("unknown layout");
}

}  // namespace hepack::hemat

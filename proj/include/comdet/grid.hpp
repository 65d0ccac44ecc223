#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "comdet/io.hpp"

namespace comdet {

// Parses a sweep grid: either comma-separated values (`0.1,0.01`) or a
// geometric range `start:stop:factor` that walks from start toward stop,
// multiplying or dividing by factor, and includes stop when it lands on it.
inline std::vector<double> parse_grid(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    if (!detail::parse_number(s, v) || !std::isfinite(v))
      throw std::invalid_argument("bad grid value '" + std::string(s) + "'");
    return v;
  };

  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = text.find(':', pos);
      parts.push_back(text.substr(pos, next - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:factor");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double factor = number(parts[2]);
    if (!(start > 0.0) || !(stop > 0.0))
      throw std::invalid_argument("grid range endpoints must be > 0");
    if (!(factor > 1.0)) throw std::invalid_argument("grid factor must be > 1");
    const bool down = stop < start;
    constexpr double kSlack = 1e-9;
    for (int k = 0;; ++k) {
      const double v = start * std::pow(factor, down ? -k : k);
      if (down ? v < stop * (1.0 - kSlack) : v > stop * (1.0 + kSlack)) break;
      out.push_back(v);
      if (out.size() > 10000) throw std::invalid_argument("grid range too long");
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t next = text.find(',', pos);
      out.push_back(number(text.substr(pos, next - pos)));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
  }
  if (out.empty()) throw std::invalid_argument("grid is empty");
  return out;
}

// Grid of positive integers, e.g. thread counts.
inline std::vector<std::size_t> parse_count_grid(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_grid(text)) {
    const double r = std::round(v);
    if (r < 1.0 || std::abs(r - v) > 1e-6)
      throw std::invalid_argument("grid value must be a positive integer");
    out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

}  // namespace comdet

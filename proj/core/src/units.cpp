// SPDX-License-Identifier: Apache-2.0
#include "crossflow/units.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace crossflow::units {

double suffix_multiplier(char suffix) {
  switch (suffix) {
    case 'p': return 1e-12;
    case 'n': return 1e-9;
    case 'u': return 1e-6;
    case 'm': return 1e-3;
    case 'k':
    case 'K': return 1e3;
    case 'M': return 1e6;
    case 'G': return 1e9;
    case 'T': return 1e12;
    case 'P': return 1e15;
    default: return 0.0;
  }
}

std::optional<double> parse_quantity(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double mult = 1.0;
  std::string body = text;
  char last = text.back();
  if (!std::isdigit(static_cast<unsigned char>(last)) && last != '.') {
    double m = suffix_multiplier(last);
    if (m == 0.0) return std::nullopt;
    mult = m;
    body = text.substr(0, text.size() - 1);
    if (body.empty()) return std::nullopt;
  }
  const char* begin = body.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end != begin + body.size()) return std::nullopt;
  return value * mult;
}

std::string format_quantity(double value) {
  // Shortest representation that round-trips a binary64 value.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

}  // namespace crossflow::units

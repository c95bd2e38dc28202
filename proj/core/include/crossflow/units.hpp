// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace crossflow::units {

// Internal unit conventions: seconds, joules, watts, bits, mm2, hertz.
// Config files may attach engineering suffixes to numbers; suffixes are
// case-sensitive (m = milli, M = mega).
//
//   p=1e-12  n=1e-9  u=1e-6  m=1e-3  k=K=1e3  M=1e6  G=1e9  T=1e12  P=1e15

/// Parse a number with an optional engineering suffix ("1.2G", "20p", "64K").
/// Returns nullopt on malformed input.
std::optional<double> parse_quantity(const std::string& text);

/// Suffix multiplier lookup; 0 means unknown suffix.
double suffix_multiplier(char suffix);

/// Round-trippable formatting: plain shortest decimal, no suffixes.
std::string format_quantity(double value);

}  // namespace crossflow::units

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace crossflow {

/// Micro-architectural components that receive budget fractions.
enum class Component { kCore, kL2, kL1, kL0, kDram, kNetIntra, kNetInter };

inline constexpr std::array<Component, 7> kAllComponents = {
    Component::kCore, Component::kL2,       Component::kL1,      Component::kL0,
    Component::kDram, Component::kNetIntra, Component::kNetInter};

inline constexpr int kNumComponents = 7;

const char* to_string(Component c);

/// Fractions of one resource (area, power or perimeter) across components.
/// Unmentioned components hold fraction 0.
struct FractionMap {
  std::array<double, kNumComponents> frac{};

  double& operator[](Component c) { return frac[static_cast<int>(c)]; }
  double operator[](Component c) const { return frac[static_cast<int>(c)]; }
  double sum() const;
};

/// Area/power/perimeter totals and their percentage breakdown.
struct ResourceBudget {
  double node_area_budget = 0;       // mm2, package substrate
  double proc_chip_area_budget = 0;  // mm2, compute die
  double power_budget = 0;           // W per node
  double perimeter_budget = 0;       // mm of die edge; 0 = derive from area

  FractionMap area_frac;
  FractionMap power_frac;
  FractionMap perimeter_frac;

  /// Applies the square-die perimeter default when absent and checks the
  /// simplex constraints C_A, C_P, C_R (sum <= 1 + 1e-9 each).
  void canonicalize();

  double area_of(Component c) const { return proc_chip_area_budget * area_frac[c]; }
  double power_of(Component c) const { return power_budget * power_frac[c]; }
  double perimeter_of(Component c) const { return perimeter_budget * perimeter_frac[c]; }
};

inline constexpr double kBudgetSumTolerance = 1e-9;

}  // namespace crossflow

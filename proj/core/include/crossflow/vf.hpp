// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace crossflow {

/// Voltage/frequency behavior of one scalable unit (an MCU, a DRAM link, a
/// network link). Frequency is linear above threshold; dynamic power scales
/// as V^2 f; leakage scales as V.
struct VfCurve {
  double v_nom = 0;
  double v_th = 0;
  double v_min = 0;
  double v_max = 0;
  double f_nom = 0;
  double p_dyn_nom = 0;     // W per unit at (v_nom, f_nom)
  double p_static_nom = 0;  // W per unit at v_nom
};

struct OperatingPoint {
  double voltage = 0;
  double frequency = 0;
  std::int64_t unit_count = 0;
  double unit_power = 0;  // W at the chosen point
};

inline constexpr double kVfBisectionToleranceVolts = 1e-6;

/// f(V) = f_nom * (V - V_th) / (V_nom - V_th).
double vf_frequency(const VfCurve& curve, double voltage);

/// Total per-unit power at V, running at f(V).
double vf_unit_power(const VfCurve& curve, double voltage);

/// Maximum-frequency operating point with unit_count * power(V) within
/// power_budget. Scales up to v_max when headroom allows, bisects on V when
/// power-bound, and sheds units when even v_min is infeasible. Throws
/// SizingError (tagged `component`) when one unit at v_min still exceeds
/// the budget.
OperatingPoint scale_vf(const VfCurve& curve, double power_budget,
                        std::int64_t unit_count, const std::string& component);

}  // namespace crossflow

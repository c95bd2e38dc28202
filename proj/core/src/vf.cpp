// SPDX-License-Identifier: Apache-2.0
#include "crossflow/vf.hpp"

#include <cmath>

#include "crossflow/errors.hpp"

namespace crossflow {

double vf_frequency(const VfCurve& curve, double voltage) {
  return curve.f_nom * (voltage - curve.v_th) / (curve.v_nom - curve.v_th);
}

double vf_unit_power(const VfCurve& curve, double voltage) {
  double vr = voltage / curve.v_nom;
  double fr = vf_frequency(curve, voltage) / curve.f_nom;
  return curve.p_dyn_nom * vr * vr * fr + curve.p_static_nom * vr;
}

OperatingPoint scale_vf(const VfCurve& curve, double power_budget,
                        std::int64_t unit_count, const std::string& component) {
  if (!(power_budget > 0)) {
    throw SizingError(component, "power budget must be positive");
  }
  if (unit_count < 1) {
    throw SizingError(component, "unit count must be >= 1");
  }

  std::int64_t n = unit_count;
  auto total = [&](double v) { return vf_unit_power(curve, v) * static_cast<double>(n); };

  if (total(curve.v_min) > power_budget) {
    // Power-bound below the voltage floor: shed units.
    double per_unit = vf_unit_power(curve, curve.v_min);
    n = static_cast<std::int64_t>(std::floor(power_budget / per_unit));
    while (n >= 1 && total(curve.v_min) > power_budget) --n;
    if (n < 1) {
      throw SizingError(component,
                        "infeasible even with a single unit at minimum voltage");
    }
  }

  // Feasible at v_min with n units; maximize V. `lo` stays feasible so the
  // returned point never exceeds the budget, and a budget exactly matching
  // some voltage (e.g. nominal) is returned exactly.
  if (total(curve.v_max) <= power_budget) {
    OperatingPoint op;
    op.voltage = curve.v_max;
    op.frequency = vf_frequency(curve, curve.v_max);
    op.unit_count = n;
    op.unit_power = vf_unit_power(curve, curve.v_max);
    return op;
  }

  double lo = curve.v_min;
  double hi = curve.v_max;
  if (total(curve.v_nom) <= power_budget) lo = curve.v_nom;
  while (hi - lo > kVfBisectionToleranceVolts) {
    double mid = 0.5 * (lo + hi);
    if (total(mid) <= power_budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  OperatingPoint op;
  op.voltage = lo;
  op.frequency = vf_frequency(curve, lo);
  op.unit_count = n;
  op.unit_power = vf_unit_power(curve, lo);
  return op;
}

}  // namespace crossflow

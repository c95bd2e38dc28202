// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace crossflow {

/// Minimal compute unit technology. Nominal figures describe one MCU at
/// (nominal_voltage, nominal_frequency).
struct ComputeTech {
  std::string tech_node;         // label, e.g. "N12"
  double nominal_voltage = 0;    // V
  double threshold_voltage = 0;  // V
  double nominal_frequency = 0;  // Hz
  double nominal_op_rate = 0;    // ops/cycle per MCU
  double nominal_power = 0;      // W per MCU
  double nominal_area = 0;       // mm2 per MCU
  double min_voltage = 0;        // V
  double max_voltage = 0;        // V
  // Share of nominal power that is leakage (scales ~V instead of ~V^2 f).
  double static_power_fraction = 0.0;
  // Set when nominal_power was absent and backfilled from nominal_area at
  // the library-level density default; surfaced in reports.
  bool nominal_power_derived = false;
};

/// Fallback compute power density when a library omits nominal_power.
inline constexpr double kDefaultComputeWattsPerMm2 = 0.3;

/// One on-chip memory technology, described at bank granularity.
struct OnChipMemTech {
  double dynamic_energy_per_bit = 0;        // J/bit
  double static_power_per_bit = 0;          // W/bit
  double area_per_bit = 0;                  // mm2/bit
  double bank_capacity = 0;                 // bits
  double bank_periphery_area_overhead = 0;  // mm2 per bank
  double controller_area_per_bank = 0;      // mm2 per bank
  double controller_power_per_bank = 0;     // W per bank
  double latency = 0;                       // s
  // Crossbar coefficients for the bank<->scope interconnect; grow with
  // N_banks * fanout. Default to the controller overheads when unset.
  double crossbar_area_coeff = -1;   // mm2, -1 = use controller_area_per_bank
  double crossbar_power_coeff = -1;  // W,   -1 = use controller_power_per_bank
};

/// Off-chip memory technology at device (e.g. one HBM stack) granularity.
struct OffChipMemTech {
  double dynamic_energy_per_bit = 0;       // J/bit, array access + transfer
  double static_power_per_bit = 0;         // W/bit of capacity
  double device_capacity = 0;              // bits
  double device_area = 0;                  // mm2 on the substrate
  double controller_io_area_per_device = 0;  // mm2 on the compute die
  double links_per_device = 0;             // data bus width
  double links_per_mm = 0;                 // die-edge escape density
  double nominal_voltage = 0;              // V
  double nominal_frequency = 0;            // Hz per link
  double threshold_voltage = 0;            // V, 0 = linear f(V) through origin
  double min_voltage = 0;                  // V
  double max_voltage = 0;                  // V
  double access_latency = 0;               // s
  double bits_per_cycle_per_link = 1.0;
};

/// Inter-chip link technology (intra-package or inter-package).
struct NetTech {
  double nominal_voltage = 0;    // V
  double nominal_frequency = 0;  // Hz
  double energy_per_link = 0;    // J/bit at nominal
  double area_per_link = 0;      // mm2 of I/O cells per link
  double links_per_mm = 0;       // escape density at the die edge
  double threshold_voltage = 0;  // V
  double min_voltage = 0;        // V
  double max_voltage = 0;        // V, defaults to nominal (no upside headroom)
  double link_latency = 0;       // s per hop
  double bits_per_cycle_per_link = 1.0;
};

/// Dataflow strategy of the MCU array.
enum class Dataflow { kWeightStationary, kActivationStationary, kOutputStationary, kAuto };

const char* to_string(Dataflow df);

/// Scope of a memory level: which compute-side components access it directly.
enum class MemScope { kPerMcu, kPerBundle, kGlobal };

const char* to_string(MemScope scope);

/// Architecture template: MCU layout plus the on-chip memory hierarchy
/// ordered from registers (L0) outward.
struct ArchTemplate {
  struct Mcu {
    int array_x = 1;
    int array_y = 1;
    Dataflow dataflow = Dataflow::kAuto;
    int mcus_per_bundle = 1;
    double max_utilization = 1.0;
  };
  struct MemoryLevel {
    std::string name;  // "L0", "L1", ...
    std::string tech;  // key into TechLibrary::on_chip_mem
    MemScope scope = MemScope::kGlobal;
  };
  Mcu mcu;
  std::vector<MemoryLevel> memory_levels;
};

/// Full technology components library (Table of per-component parameters).
struct TechLibrary {
  ComputeTech compute;
  std::map<std::string, OnChipMemTech> on_chip_mem;  // keyed by level tech name
  OffChipMemTech off_chip_mem;
  NetTech net_intra;
  NetTech net_inter;

  /// Throws ConfigError on violated invariants (non-positive parameters,
  /// inconsistent voltage ordering).
  void validate() const;
};

}  // namespace crossflow

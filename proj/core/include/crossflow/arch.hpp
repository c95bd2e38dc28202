// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/budget.hpp"
#include "crossflow/tech.hpp"
#include "crossflow/vf.hpp"

namespace crossflow {

/// One generated on-chip memory level (registers outward).
struct MemLevelSpec {
  std::string name;
  MemScope scope = MemScope::kGlobal;
  std::int64_t num_banks = 0;
  double capacity = 0;   // bits
  double bandwidth = 0;  // bits/s
  double latency = 0;    // s
};

struct MainMemSpec {
  std::int64_t num_devices = 0;
  double capacity = 0;   // bits
  double bandwidth = 0;  // bits/s
  double latency = 0;    // s
  OperatingPoint link_op;
};

struct NetSpec {
  std::int64_t num_links = 0;
  double bandwidth_per_link = 0;  // bits/s
  double latency = 0;             // s per hop
  OperatingPoint link_op;

  double aggregate_bandwidth() const {
    return bandwidth_per_link * static_cast<double>(num_links);
  }
};

struct McuSpec {
  int array_x = 1;
  int array_y = 1;
  Dataflow dataflow = Dataflow::kAuto;
  double max_utilization = 1.0;
  std::int64_t count = 0;
  int mcus_per_bundle = 1;
};

/// Consumed-vs-allocated accounting for one component.
struct BudgetAuditRow {
  Component component;
  double area_used = 0, area_alloc = 0;
  double power_used = 0, power_alloc = 0;
  double perimeter_used = 0, perimeter_alloc = 0;
};

/// Generated micro-architecture: raw capability figures. The compute
/// throughput here is unscaled by max_utilization; the performance engine
/// applies the derate when timing kernels.
struct ArchSpec {
  double compute_throughput = 0;  // flops/s
  OperatingPoint core_op;
  McuSpec mcu;
  std::vector<MemLevelSpec> mem_levels;  // L0 first
  MainMemSpec main_mem;
  NetSpec net_intra;
  NetSpec net_inter;
  std::vector<BudgetAuditRow> audit;
  bool compute_power_derived = false;
};

// Closed-form pieces of the generator, kept as free functions so they can be
// checked against direct arithmetic.

/// Throughput = N * nominal_op_rate * f_op (flops/s).
double compute_throughput_flops(std::int64_t unit_count, double nominal_op_rate,
                                double f_op);

/// P_static = static_power_per_bit * N_banks * bank_capacity.
double cache_static_power(double static_power_per_bit, std::int64_t num_banks,
                          double bank_capacity);

/// Bandwidth bought by the dynamic power budget: (P_level - P_static) / E_dyn.
double cache_bandwidth(double level_power, double static_power,
                       double dynamic_energy_per_bit);

/// #Devices = min(substrate-area, controller-area, perimeter-escape) terms.
std::int64_t main_memory_device_count(double node_area, double chip_area,
                                      double device_area, double ctrl_area_budget,
                                      double ctrl_area_per_device,
                                      double perimeter_mm, double links_per_mm,
                                      double links_per_device);

/// Links that fit in the I/O cell area and escape the allotted die edge.
std::int64_t network_link_count(double area_budget, double area_per_link,
                                double perimeter_mm, double links_per_mm);

// Per-component sizers. All throw SizingError tagged with the component name.

struct CoreSizing {
  OperatingPoint op;
  double throughput = 0;  // flops/s
};

CoreSizing size_cores(double area_budget, double power_budget,
                      const ComputeTech& tech);

MemLevelSpec size_cache_level(double area_budget, double power_budget,
                              const OnChipMemTech& tech, std::int64_t scope_fanout,
                              const std::string& name, MemScope scope);

MainMemSpec size_main_memory(double node_area, double chip_area,
                             double ctrl_area_budget, double power_budget,
                             double perimeter_share, const OffChipMemTech& tech);

NetSpec size_network(double area_budget, double power_budget,
                     double perimeter_share, const NetTech& tech,
                     const std::string& level_name);

/// Compose the sizers for the full template under the budget breakdown.
/// Deterministic; every component's consumption stays within its allocation
/// (see the audit table in the result).
ArchSpec generate_arch(const TechLibrary& tech, const ResourceBudget& budget,
                       const ArchTemplate& tmpl);

}  // namespace crossflow

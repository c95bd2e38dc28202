// SPDX-License-Identifier: Apache-2.0
#include "crossflow/arch.hpp"

#include <algorithm>
#include <cmath>

#include "crossflow/errors.hpp"

namespace crossflow {

double compute_throughput_flops(std::int64_t unit_count, double nominal_op_rate,
                                double f_op) {
  return static_cast<double>(unit_count) * nominal_op_rate * f_op;
}

double cache_static_power(double static_power_per_bit, std::int64_t num_banks,
                          double bank_capacity) {
  return static_power_per_bit * static_cast<double>(num_banks) * bank_capacity;
}

double cache_bandwidth(double level_power, double static_power,
                       double dynamic_energy_per_bit) {
  return (level_power - static_power) / dynamic_energy_per_bit;
}

std::int64_t main_memory_device_count(double node_area, double chip_area,
                                      double device_area, double ctrl_area_budget,
                                      double ctrl_area_per_device,
                                      double perimeter_mm, double links_per_mm,
                                      double links_per_device) {
  auto fl = [](double x) { return static_cast<std::int64_t>(std::floor(x)); };
  std::int64_t by_substrate = fl((node_area - chip_area) / device_area);
  std::int64_t by_controller = fl(ctrl_area_budget / ctrl_area_per_device);
  std::int64_t by_perimeter = fl(perimeter_mm * links_per_mm / links_per_device);
  return std::min({by_substrate, by_controller, by_perimeter});
}

std::int64_t network_link_count(double area_budget, double area_per_link,
                                double perimeter_mm, double links_per_mm) {
  auto fl = [](double x) { return static_cast<std::int64_t>(std::floor(x)); };
  return std::min(fl(area_budget / area_per_link), fl(perimeter_mm * links_per_mm));
}

CoreSizing size_cores(double area_budget, double power_budget,
                      const ComputeTech& tech) {
  auto n = static_cast<std::int64_t>(std::floor(area_budget / tech.nominal_area));
  if (n < 1) {
    throw SizingError("core", "area budget fits zero compute units");
  }
  VfCurve curve;
  curve.v_nom = tech.nominal_voltage;
  curve.v_th = tech.threshold_voltage;
  curve.v_min = tech.min_voltage;
  curve.v_max = tech.max_voltage;
  curve.f_nom = tech.nominal_frequency;
  curve.p_dyn_nom = tech.nominal_power * (1.0 - tech.static_power_fraction);
  curve.p_static_nom = tech.nominal_power * tech.static_power_fraction;

  CoreSizing out;
  out.op = scale_vf(curve, power_budget, n, "core");
  out.throughput =
      compute_throughput_flops(out.op.unit_count, tech.nominal_op_rate, out.op.frequency);
  return out;
}

namespace {

double crossbar_area_coeff(const OnChipMemTech& t) {
  return t.crossbar_area_coeff >= 0 ? t.crossbar_area_coeff : t.controller_area_per_bank;
}

double crossbar_power_coeff(const OnChipMemTech& t) {
  return t.crossbar_power_coeff >= 0 ? t.crossbar_power_coeff
                                     : t.controller_power_per_bank;
}

}  // namespace

MemLevelSpec size_cache_level(double area_budget, double power_budget,
                              const OnChipMemTech& tech, std::int64_t scope_fanout,
                              const std::string& name, MemScope scope) {
  if (!(area_budget > 0) || !(power_budget > 0)) {
    throw SizingError(name, "zero area or power allocation");
  }
  double bank_area =
      tech.area_per_bit * tech.bank_capacity + tech.bank_periphery_area_overhead;
  double xbar_area = crossbar_area_coeff(tech) * static_cast<double>(scope_fanout);

  auto fits = [&](std::int64_t banks) {
    return static_cast<double>(banks) * (bank_area + xbar_area) <= area_budget;
  };
  std::int64_t lo = 0;
  auto hi = static_cast<std::int64_t>(std::floor(area_budget / bank_area)) + 1;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (lo < 1) {
    throw SizingError(name, "area budget fits zero banks");
  }

  std::int64_t banks = lo;
  double p_xbar =
      crossbar_power_coeff(tech) * static_cast<double>(banks) * static_cast<double>(scope_fanout);
  double bank_power_pool = power_budget - p_xbar;
  double p_static = cache_static_power(tech.static_power_per_bit, banks, tech.bank_capacity);
  if (p_static >= bank_power_pool) {
    throw SizingError(name, "static power consumes the whole power allocation");
  }

  MemLevelSpec spec;
  spec.name = name;
  spec.scope = scope;
  spec.num_banks = banks;
  spec.capacity = static_cast<double>(banks) * tech.bank_capacity;
  spec.bandwidth =
      cache_bandwidth(bank_power_pool, p_static, tech.dynamic_energy_per_bit);
  spec.latency = tech.latency;
  return spec;
}

MainMemSpec size_main_memory(double node_area, double chip_area,
                             double ctrl_area_budget, double power_budget,
                             double perimeter_share, const OffChipMemTech& tech) {
  if (!(node_area > chip_area)) {
    throw SizingError("DRAM", "no substrate area left for memory devices");
  }
  std::int64_t devices = main_memory_device_count(
      node_area, chip_area, tech.device_area, ctrl_area_budget,
      tech.controller_io_area_per_device, perimeter_share, tech.links_per_mm,
      tech.links_per_device);
  if (devices < 1) {
    throw SizingError("DRAM", "device count is zero under the min-rule");
  }

  MainMemSpec spec;
  spec.num_devices = devices;
  spec.capacity = static_cast<double>(devices) * tech.device_capacity;
  spec.latency = tech.access_latency;

  double p_static = tech.static_power_per_bit * spec.capacity;
  double dyn_budget = power_budget - p_static;
  if (!(dyn_budget > 0)) {
    throw SizingError("DRAM", "refresh power consumes the whole power allocation");
  }

  auto links = static_cast<std::int64_t>(devices * tech.links_per_device);
  VfCurve curve;
  curve.v_nom = tech.nominal_voltage;
  curve.v_th = tech.threshold_voltage;
  curve.v_min = tech.min_voltage;
  curve.v_max = tech.max_voltage;
  curve.f_nom = tech.nominal_frequency;
  curve.p_dyn_nom =
      tech.dynamic_energy_per_bit * tech.nominal_frequency * tech.bits_per_cycle_per_link;
  curve.p_static_nom = 0;
  spec.link_op = scale_vf(curve, dyn_budget, links, "DRAM");
  spec.bandwidth = static_cast<double>(spec.link_op.unit_count) *
                   spec.link_op.frequency * tech.bits_per_cycle_per_link;
  return spec;
}

NetSpec size_network(double area_budget, double power_budget,
                     double perimeter_share, const NetTech& tech,
                     const std::string& level_name) {
  std::int64_t links = network_link_count(area_budget, tech.area_per_link,
                                          perimeter_share, tech.links_per_mm);
  if (links < 1) {
    throw SizingError(level_name, "link count is zero (area or perimeter bound)");
  }
  VfCurve curve;
  curve.v_nom = tech.nominal_voltage;
  curve.v_th = tech.threshold_voltage;
  curve.v_min = tech.min_voltage;
  curve.v_max = tech.max_voltage;
  curve.f_nom = tech.nominal_frequency;
  curve.p_dyn_nom =
      tech.energy_per_link * tech.nominal_frequency * tech.bits_per_cycle_per_link;
  curve.p_static_nom = 0;

  NetSpec spec;
  spec.link_op = scale_vf(curve, power_budget, links, level_name);
  spec.num_links = spec.link_op.unit_count;
  spec.bandwidth_per_link = spec.link_op.frequency * tech.bits_per_cycle_per_link;
  spec.latency = tech.link_latency;
  return spec;
}

namespace {

const OnChipMemTech& level_tech(const TechLibrary& tech,
                                const ArchTemplate::MemoryLevel& level) {
  auto it = tech.on_chip_mem.find(level.tech);
  if (it == tech.on_chip_mem.end()) {
    throw SizingError(level.name,
                      "memory technology `" + level.tech + "` is not in the library");
  }
  return it->second;
}

Component level_component(const std::string& name) {
  if (name == "L0") return Component::kL0;
  if (name == "L1") return Component::kL1;
  if (name == "L2") return Component::kL2;
  throw SizingError(name, "memory level must be one of L0, L1, L2");
}

}  // namespace

ArchSpec generate_arch(const TechLibrary& tech, const ResourceBudget& budget,
                       const ArchTemplate& tmpl) {
  ArchSpec spec;
  spec.compute_power_derived = tech.compute.nominal_power_derived;

  // Cores first: cache crossbar overheads depend on the MCU population.
  double core_area = budget.area_of(Component::kCore);
  double core_power = budget.power_of(Component::kCore);
  if (!(core_area > 0) || !(core_power > 0)) {
    throw SizingError("core", "zero area or power fraction");
  }
  CoreSizing cores = size_cores(core_area, core_power, tech.compute);
  spec.core_op = cores.op;
  spec.compute_throughput = cores.throughput;
  spec.mcu.array_x = tmpl.mcu.array_x;
  spec.mcu.array_y = tmpl.mcu.array_y;
  spec.mcu.dataflow = tmpl.mcu.dataflow;
  spec.mcu.max_utilization = tmpl.mcu.max_utilization;
  spec.mcu.count = cores.op.unit_count;
  spec.mcu.mcus_per_bundle = tmpl.mcu.mcus_per_bundle;

  std::int64_t bundles =
      (spec.mcu.count + tmpl.mcu.mcus_per_bundle - 1) / tmpl.mcu.mcus_per_bundle;

  auto audit_row = [&](Component c) {
    BudgetAuditRow row;
    row.component = c;
    row.area_alloc = budget.area_of(c);
    row.power_alloc = budget.power_of(c);
    row.perimeter_alloc = budget.perimeter_of(c);
    return row;
  };

  {
    BudgetAuditRow row = audit_row(Component::kCore);
    row.area_used = static_cast<double>(cores.op.unit_count) * tech.compute.nominal_area;
    row.power_used = static_cast<double>(cores.op.unit_count) * cores.op.unit_power;
    spec.audit.push_back(row);
  }

  for (const auto& level : tmpl.memory_levels) {
    Component comp = level_component(level.name);
    std::int64_t fanout = 1;
    switch (level.scope) {
      case MemScope::kPerMcu: fanout = 1; break;
      case MemScope::kPerBundle: fanout = tmpl.mcu.mcus_per_bundle; break;
      case MemScope::kGlobal: fanout = bundles; break;
    }
    const OnChipMemTech& mt = level_tech(tech, level);
    double area = budget.area_of(comp);
    double power = budget.power_of(comp);
    spec.mem_levels.push_back(
        size_cache_level(area, power, mt, fanout, level.name, level.scope));

    BudgetAuditRow row = audit_row(comp);
    const MemLevelSpec& mls = spec.mem_levels.back();
    double bank_area = mt.area_per_bit * mt.bank_capacity + mt.bank_periphery_area_overhead;
    row.area_used = static_cast<double>(mls.num_banks) *
                    (bank_area + crossbar_area_coeff(mt) * static_cast<double>(fanout));
    row.power_used = power;  // static + crossbar + all remaining dynamic
    spec.audit.push_back(row);
  }

  {
    double ctrl_area = budget.area_of(Component::kDram);
    double power = budget.power_of(Component::kDram);
    double perim = budget.perimeter_of(Component::kDram);
    spec.main_mem = size_main_memory(budget.node_area_budget, budget.proc_chip_area_budget,
                                     ctrl_area, power, perim, tech.off_chip_mem);
    BudgetAuditRow row = audit_row(Component::kDram);
    row.area_used = static_cast<double>(spec.main_mem.num_devices) *
                    tech.off_chip_mem.controller_io_area_per_device;
    row.power_used = tech.off_chip_mem.static_power_per_bit * spec.main_mem.capacity +
                     static_cast<double>(spec.main_mem.link_op.unit_count) *
                         spec.main_mem.link_op.unit_power;
    row.perimeter_used = static_cast<double>(spec.main_mem.link_op.unit_count) /
                         tech.off_chip_mem.links_per_mm;
    spec.audit.push_back(row);
  }

  auto size_net_level = [&](Component comp, const NetTech& nt, const std::string& name) {
    double area = budget.area_of(comp);
    double power = budget.power_of(comp);
    double perim = budget.perimeter_of(comp);
    NetSpec ns = size_network(area, power, perim, nt, name);
    BudgetAuditRow row = audit_row(comp);
    row.area_used = static_cast<double>(ns.num_links) * nt.area_per_link;
    row.power_used = static_cast<double>(ns.num_links) * ns.link_op.unit_power;
    row.perimeter_used = static_cast<double>(ns.num_links) / nt.links_per_mm;
    spec.audit.push_back(row);
    return ns;
  };
  spec.net_intra = size_net_level(Component::kNetIntra, tech.net_intra, "net_intra");
  spec.net_inter = size_net_level(Component::kNetInter, tech.net_inter, "net_inter");

  return spec;
}

}  // namespace crossflow

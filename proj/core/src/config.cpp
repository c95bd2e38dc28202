// SPDX-License-Identifier: Apache-2.0
#include "crossflow/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "crossflow/errors.hpp"
#include "crossflow/units.hpp"

namespace crossflow {

namespace {

// Pulls scalars out of a YAML map with suffix-aware number parsing and
// unknown-key rejection in strict mode.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, const ParseOptions& opt)
      : node_(node), path_(std::move(path)), opt_(opt) {
    if (node_ && !node_.IsMap()) {
      throw ConfigError("config", path_ + " must be a mapping");
    }
  }

  bool exists() const { return static_cast<bool>(node_); }

  void require_exists() const {
    if (!exists()) throw ConfigError("config", "missing section `" + path_ + "`");
  }

  Section child(const std::string& key) {
    touched_.insert(key);
    return Section(node_ ? node_[key] : YAML::Node(YAML::NodeType::Undefined),
                   path_ + "." + key, opt_);
  }

  bool has(const std::string& key) const { return node_ && node_[key]; }

  double number(const std::string& key) {
    touched_.insert(key);
    YAML::Node v = value_node(key);
    return to_number(v, key);
  }

  double number_or(const std::string& key, double fallback) {
    touched_.insert(key);
    if (!has(key)) return fallback;
    return to_number(node_[key], key);
  }

  std::int64_t integer(const std::string& key) {
    double v = number(key);
    auto r = static_cast<std::int64_t>(std::llround(v));
    if (static_cast<double>(r) != v) {
      throw ConfigError("config", path_ + "." + key + " must be an integer");
    }
    return r;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    if (!has(key)) {
      touched_.insert(key);
      return fallback;
    }
    return integer(key);
  }

  std::string text(const std::string& key) {
    touched_.insert(key);
    YAML::Node v = value_node(key);
    return v.as<std::string>();
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    touched_.insert(key);
    if (!has(key)) return fallback;
    return node_[key].as<std::string>();
  }

  std::vector<int> int_list(const std::string& key) {
    touched_.insert(key);
    YAML::Node v = value_node(key);
    if (!v.IsSequence()) {
      throw ConfigError("config", path_ + "." + key + " must be a list");
    }
    std::vector<int> out;
    for (const auto& item : v) out.push_back(item.as<int>());
    return out;
  }

  const YAML::Node& raw() const { return node_; }
  const std::string& path() const { return path_; }

  /// Call after reading all expected keys; rejects leftovers in strict mode.
  void finish() const {
    if (opt_.lenient || !node_) return;
    for (const auto& kv : node_) {
      std::string key = kv.first.as<std::string>();
      if (!touched_.count(key)) {
        throw ConfigError("config", "unknown key `" + key + "` in " + path_);
      }
    }
  }

 private:
  YAML::Node value_node(const std::string& key) {
    require_exists();
    YAML::Node v = node_[key];
    if (!v) {
      throw ConfigError("config", "missing field `" + key + "` in " + path_);
    }
    return v;
  }

  double to_number(const YAML::Node& v, const std::string& key) const {
    std::string raw;
    try {
      raw = v.as<std::string>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config", path_ + "." + key + " must be a number");
    }
    auto parsed = units::parse_quantity(raw);
    if (!parsed) {
      throw ConfigError("config",
                        path_ + "." + key + ": cannot parse quantity `" + raw + "`");
    }
    return *parsed;
  }

  YAML::Node node_;
  std::string path_;
  ParseOptions opt_;
  mutable std::set<std::string> touched_;
};

YAML::Node load_root(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config", std::string("YAML parse failure: ") + e.what());
  }
}

Section top_section(const std::string& text, const std::string& key,
                    const ParseOptions& opt) {
  YAML::Node root = load_root(text);
  if (!root.IsMap()) throw ConfigError("config", "document root must be a mapping");
  Section s(root[key], key, opt);
  s.require_exists();
  return s;
}

void check_positive(double v, const std::string& name) {
  if (!(v > 0)) {
    throw ConfigError("config", "`" + name + "` must be strictly positive");
  }
}

void check_voltage_ladder(double vth, double vmin, double vnom, double vmax,
                          const std::string& name) {
  if (!(vth < vmin && vmin <= vnom && vnom <= vmax)) {
    throw ConfigError("config",
                      name + ": need threshold_voltage < min_voltage <= "
                             "nominal_voltage <= max_voltage");
  }
}

ComputeTech parse_compute(Section s) {
  ComputeTech t;
  t.tech_node = s.text_or("tech_node", "custom");
  t.nominal_voltage = s.number("nominal_voltage");
  t.threshold_voltage = s.number("threshold_voltage");
  t.nominal_frequency = s.number("nominal_frequency");
  t.nominal_op_rate = s.number("nominal_op_rate");
  t.nominal_area = s.number("nominal_area");
  t.nominal_power = s.number_or("nominal_power", -1.0);
  if (t.nominal_power < 0) {
    t.nominal_power = t.nominal_area * kDefaultComputeWattsPerMm2;
    t.nominal_power_derived = true;
  }
  t.min_voltage = s.number("min_voltage");
  t.max_voltage = s.number("max_voltage");
  t.static_power_fraction = s.number_or("static_power_fraction", 0.0);
  s.finish();
  return t;
}

OnChipMemTech parse_on_chip(Section s) {
  OnChipMemTech t;
  t.dynamic_energy_per_bit = s.number("dynamic_energy_per_bit");
  t.static_power_per_bit = s.number("static_power_per_bit");
  t.area_per_bit = s.number("area_per_bit");
  t.bank_capacity = s.number("bank_capacity");
  t.bank_periphery_area_overhead = s.number("bank_periphery_area_overhead");
  t.controller_area_per_bank = s.number("controller_area_per_bank");
  t.controller_power_per_bank = s.number("controller_power_per_bank");
  t.latency = s.number("latency");
  t.crossbar_area_coeff = s.number_or("crossbar_area_coeff", -1);
  t.crossbar_power_coeff = s.number_or("crossbar_power_coeff", -1);
  s.finish();
  return t;
}

OffChipMemTech parse_off_chip(Section s) {
  OffChipMemTech t;
  t.dynamic_energy_per_bit = s.number("dynamic_energy_per_bit");
  t.static_power_per_bit = s.number("static_power_per_bit");
  t.device_capacity = s.number("device_capacity");
  t.device_area = s.number("device_area");
  t.controller_io_area_per_device = s.number("controller_io_area_per_device");
  t.links_per_device = s.number("links_per_device");
  t.links_per_mm = s.number("links_per_mm");
  t.nominal_voltage = s.number("nominal_voltage");
  t.nominal_frequency = s.number("nominal_frequency");
  t.threshold_voltage = s.number_or("threshold_voltage", 0.0);
  t.min_voltage = s.number("min_voltage");
  t.max_voltage = s.number("max_voltage");
  t.access_latency = s.number("access_latency");
  t.bits_per_cycle_per_link = s.number_or("bits_per_cycle_per_link", 1.0);
  s.finish();
  return t;
}

NetTech parse_net(Section s) {
  NetTech t;
  t.nominal_voltage = s.number("nominal_voltage");
  t.nominal_frequency = s.number("nominal_frequency");
  t.energy_per_link = s.number("energy_per_link");
  t.area_per_link = s.number("area_per_link");
  t.links_per_mm = s.number("links_per_mm");
  t.threshold_voltage = s.number("threshold_voltage");
  t.min_voltage = s.number("min_voltage");
  t.max_voltage = s.number_or("max_voltage", t.nominal_voltage);
  t.link_latency = s.number("link_latency");
  t.bits_per_cycle_per_link = s.number_or("bits_per_cycle_per_link", 1.0);
  s.finish();
  return t;
}

Dataflow parse_dataflow(const std::string& text) {
  if (text == "weight_stationary") return Dataflow::kWeightStationary;
  if (text == "activation_stationary") return Dataflow::kActivationStationary;
  if (text == "output_stationary") return Dataflow::kOutputStationary;
  if (text == "auto") return Dataflow::kAuto;
  throw ConfigError("config", "unknown dataflow `" + text + "`");
}

MemScope parse_scope(const std::string& text) {
  if (text == "per_mcu") return MemScope::kPerMcu;
  if (text == "per_bundle") return MemScope::kPerBundle;
  if (text == "global") return MemScope::kGlobal;
  throw ConfigError("config", "unknown memory scope `" + text + "`");
}

TopologyKind parse_topology_kind(const std::string& text) {
  if (text == "mesh") return TopologyKind::kMesh;
  if (text == "torus") return TopologyKind::kTorus;
  if (text == "crossbar") return TopologyKind::kCrossbar;
  throw ConfigError("config", "unknown topology `" + text + "`");
}

Topology parse_topology(Section s) {
  Topology t;
  t.kind = parse_topology_kind(s.text("kind"));
  t.dims = s.int_list("dims");
  s.finish();
  if (t.dims.empty()) {
    throw ConfigError("config", s.path() + ".dims must be non-empty");
  }
  for (int d : t.dims) {
    if (d < 1) throw ConfigError("config", s.path() + ".dims entries must be >= 1");
  }
  return t;
}

// Fraction breakdown mirrors the area_breakdown snippet layout: component
// keys at the top plus a nested `network` map.
FractionMap parse_fractions(Section& s) {
  FractionMap f;
  f[Component::kCore] = s.number_or("core", 0.0);
  f[Component::kL2] = s.number_or("L2", 0.0);
  f[Component::kL1] = s.number_or("L1", 0.0);
  f[Component::kL0] = s.number_or("L0", 0.0);
  f[Component::kDram] = s.number_or("DRAM", 0.0);
  Section net = s.child("network");
  if (net.exists()) {
    f[Component::kNetIntra] = net.number_or("intra_package", 0.0);
    f[Component::kNetInter] = net.number_or("inter_package", 0.0);
    net.finish();
  }
  for (Component c : kAllComponents) {
    double v = f[c];
    if (v < 0.0 || v > 1.0) {
      throw ConfigError("config", s.path() + ": fraction for " +
                                      std::string(to_string(c)) +
                                      " must lie in [0,1]");
    }
  }
  return f;
}

std::string fmt(double v) { return units::format_quantity(v); }

}  // namespace

void TechLibrary::validate() const {
  const auto& c = compute;
  check_positive(c.nominal_frequency, "compute.nominal_frequency");
  check_positive(c.nominal_op_rate, "compute.nominal_op_rate");
  check_positive(c.nominal_power, "compute.nominal_power");
  check_positive(c.nominal_area, "compute.nominal_area");
  check_voltage_ladder(c.threshold_voltage, c.min_voltage, c.nominal_voltage,
                       c.max_voltage, "compute");
  if (c.static_power_fraction < 0 || c.static_power_fraction >= 1) {
    throw ConfigError("config", "compute.static_power_fraction must lie in [0,1)");
  }

  if (on_chip_mem.empty()) {
    throw ConfigError("config", "tech.on_chip_mem must define at least one level");
  }
  for (const auto& [name, m] : on_chip_mem) {
    std::string p = "on_chip_mem." + name;
    check_positive(m.dynamic_energy_per_bit, p + ".dynamic_energy_per_bit");
    check_positive(m.static_power_per_bit, p + ".static_power_per_bit");
    check_positive(m.area_per_bit, p + ".area_per_bit");
    check_positive(m.bank_capacity, p + ".bank_capacity");
    check_positive(m.latency, p + ".latency");
  }

  const auto& d = off_chip_mem;
  check_positive(d.dynamic_energy_per_bit, "off_chip_mem.dynamic_energy_per_bit");
  check_positive(d.static_power_per_bit, "off_chip_mem.static_power_per_bit");
  check_positive(d.device_capacity, "off_chip_mem.device_capacity");
  check_positive(d.device_area, "off_chip_mem.device_area");
  check_positive(d.links_per_device, "off_chip_mem.links_per_device");
  check_positive(d.links_per_mm, "off_chip_mem.links_per_mm");
  check_positive(d.nominal_frequency, "off_chip_mem.nominal_frequency");
  check_voltage_ladder(d.threshold_voltage, d.min_voltage, d.nominal_voltage,
                       d.max_voltage, "off_chip_mem");

  for (const NetTech* n : {&net_intra, &net_inter}) {
    std::string p = n == &net_intra ? "net_intra" : "net_inter";
    check_positive(n->nominal_frequency, p + ".nominal_frequency");
    check_positive(n->energy_per_link, p + ".energy_per_link");
    check_positive(n->area_per_link, p + ".area_per_link");
    check_positive(n->links_per_mm, p + ".links_per_mm");
    check_voltage_ladder(n->threshold_voltage, n->min_voltage, n->nominal_voltage,
                         n->max_voltage, p);
  }
}

TechLibrary parse_tech_library(const std::string& yaml_text, const ParseOptions& opt) {
  Section tech = top_section(yaml_text, "tech", opt);
  TechLibrary lib;
  lib.compute = parse_compute(tech.child("compute"));

  Section mems = tech.child("on_chip_mem");
  mems.require_exists();
  for (const auto& kv : mems.raw()) {
    std::string name = kv.first.as<std::string>();
    lib.on_chip_mem[name] = parse_on_chip(mems.child(name));
  }
  mems.finish();

  lib.off_chip_mem = parse_off_chip(tech.child("off_chip_mem"));

  Section net = tech.child("network");
  net.require_exists();
  lib.net_intra = parse_net(net.child("intra_node"));
  lib.net_inter = parse_net(net.child("inter_node"));
  net.finish();

  tech.finish();
  lib.validate();
  return lib;
}

ArchTemplate parse_arch_template(const std::string& yaml_text, const ParseOptions& opt) {
  Section root = top_section(yaml_text, "arch_template", opt);
  ArchTemplate tmpl;

  Section mcu = root.child("mcu");
  mcu.require_exists();
  tmpl.mcu.array_x = static_cast<int>(mcu.integer("array_x"));
  tmpl.mcu.array_y = static_cast<int>(mcu.integer("array_y"));
  tmpl.mcu.mcus_per_bundle = static_cast<int>(mcu.integer_or("mcus_per_bundle", 1));
  tmpl.mcu.dataflow = parse_dataflow(mcu.text_or("dataflow", "auto"));
  tmpl.mcu.max_utilization = mcu.number_or("max_utilization", 1.0);
  mcu.finish();
  if (tmpl.mcu.array_x < 1 || tmpl.mcu.array_y < 1 || tmpl.mcu.mcus_per_bundle < 1) {
    throw ConfigError("config", "arch_template.mcu dims must be >= 1");
  }
  if (tmpl.mcu.max_utilization <= 0 || tmpl.mcu.max_utilization > 1) {
    throw ConfigError("config", "arch_template.mcu.max_utilization must lie in (0,1]");
  }

  Section levels = root.child("memory_levels");
  levels.require_exists();
  if (!levels.raw().IsSequence()) {
    throw ConfigError("config", "arch_template.memory_levels must be a list");
  }
  int idx = 0;
  for (const auto& item : levels.raw()) {
    Section level(item, "arch_template.memory_levels[" + std::to_string(idx) + "]", opt);
    ArchTemplate::MemoryLevel ml;
    ml.name = level.text("name");
    ml.tech = level.text("tech");
    ml.scope = parse_scope(level.text("scope"));
    level.finish();
    tmpl.memory_levels.push_back(ml);
    ++idx;
  }
  if (tmpl.memory_levels.empty()) {
    throw ConfigError("config", "arch_template.memory_levels must be non-empty");
  }

  root.finish();
  return tmpl;
}

double FractionMap::sum() const {
  double s = 0;
  for (double v : frac) s += v;
  return s;
}

void ResourceBudget::canonicalize() {
  check_positive(node_area_budget, "budgets.node_area_budget");
  check_positive(proc_chip_area_budget, "budgets.proc_chip_area_budget");
  check_positive(power_budget, "budgets.power_budget");
  if (proc_chip_area_budget > node_area_budget) {
    throw ConfigError("config",
                      "proc_chip_area_budget must not exceed node_area_budget");
  }
  if (perimeter_budget <= 0) {
    // Square-die default.
    perimeter_budget = 4.0 * std::sqrt(proc_chip_area_budget);
  }
  struct {
    const char* name;
    const FractionMap* f;
  } groups[] = {{"area_breakdown", &area_frac},
                {"power_breakdown", &power_frac},
                {"perimeter_breakdown", &perimeter_frac}};
  for (const auto& g : groups) {
    double s = g.f->sum();
    if (s > 1.0 + kBudgetSumTolerance) {
      throw ConfigError("config", std::string("budgets.") + g.name +
                                      ": fractions sum to " + fmt(s) +
                                      " > 1 (constraint violated)");
    }
  }
}

ResourceBudget parse_budget(const std::string& yaml_text, const ParseOptions& opt) {
  Section root = top_section(yaml_text, "budgets", opt);
  ResourceBudget b;

  Section area = root.child("area_breakdown");
  area.require_exists();
  b.node_area_budget = area.number("node_area_budget");
  b.proc_chip_area_budget = area.number("proc_chip_area_budget");
  b.area_frac = parse_fractions(area);
  area.finish();

  Section power = root.child("power_breakdown");
  power.require_exists();
  b.power_budget = power.number("power_budget");
  b.power_frac = parse_fractions(power);
  power.finish();

  Section perim = root.child("perimeter_breakdown");
  if (perim.exists()) {
    b.perimeter_budget = perim.number_or("perimeter_budget", 0.0);
    b.perimeter_frac = parse_fractions(perim);
    perim.finish();
  }

  root.finish();
  b.canonicalize();
  return b;
}

void SystemGraph::validate() const {
  if (num_packages < 1 || nodes_per_package < 1) {
    throw ConfigError("config", "system: package/node counts must be >= 1");
  }
  if (intra_topology.size() != nodes_per_package) {
    throw ConfigError("config",
                      "system.intra_topology dims must multiply to nodes_per_package");
  }
  if (inter_topology.size() != num_packages) {
    throw ConfigError("config",
                      "system.inter_topology dims must multiply to num_packages");
  }
}

SystemGraph parse_system(const std::string& yaml_text, const ParseOptions& opt) {
  Section root = top_section(yaml_text, "system", opt);
  SystemGraph sys;
  sys.num_packages = static_cast<int>(root.integer("num_packages"));
  sys.nodes_per_package = static_cast<int>(root.integer("nodes_per_package"));
  sys.intra_topology = parse_topology(root.child("intra_topology"));
  sys.inter_topology = parse_topology(root.child("inter_topology"));
  Section intra_link = root.child("intra_link");
  if (intra_link.exists()) {
    sys.intra_link.bandwidth = intra_link.number_or("bandwidth", 0.0);
    sys.intra_link.latency = intra_link.number_or("latency", 0.0);
    intra_link.finish();
  }
  Section inter_link = root.child("inter_link");
  if (inter_link.exists()) {
    sys.inter_link.bandwidth = inter_link.number_or("bandwidth", 0.0);
    sys.inter_link.latency = inter_link.number_or("latency", 0.0);
    inter_link.finish();
  }
  root.finish();
  sys.validate();
  return sys;
}

void ModelSpec::validate() const {
  auto check_dim = [](std::int64_t v, const char* name) {
    if (v < 1) throw ConfigError("config", std::string("model.") + name + " must be >= 1");
  };
  if (kind == Kind::kGemm) {
    check_dim(gemm.m, "gemm.m");
    check_dim(gemm.n, "gemm.n");
    check_dim(gemm.k, "gemm.k");
  } else {
    check_dim(lm.hidden_dim, "lm.hidden_dim");
    check_dim(lm.batch_size, "lm.batch_size");
    check_dim(lm.vocab_size, "lm.vocab_size");
    check_dim(lm.num_layers, "lm.num_layers");
    check_dim(lm.seq_len, "lm.seq_len");
  }
  if (precision_bytes != 1 && precision_bytes != 2 && precision_bytes != 4 &&
      precision_bytes != 8) {
    throw ConfigError("config", "model.precision_bytes must be one of 1,2,4,8");
  }
}

ModelSpec parse_model(const std::string& yaml_text, const ParseOptions& opt) {
  Section root = top_section(yaml_text, "model", opt);
  ModelSpec m;
  std::string kind = root.text("kind");
  if (kind == "gemm") {
    m.kind = ModelSpec::Kind::kGemm;
    Section g = root.child("gemm");
    g.require_exists();
    m.gemm.m = g.integer("m");
    m.gemm.n = g.integer("n");
    m.gemm.k = g.integer("k");
    g.finish();
  } else if (kind == "lm") {
    m.kind = ModelSpec::Kind::kLm;
    Section l = root.child("lm");
    l.require_exists();
    m.lm.hidden_dim = l.integer("hidden_dim");
    m.lm.batch_size = l.integer("batch_size");
    m.lm.vocab_size = l.integer("vocab_size");
    m.lm.num_layers = l.integer("num_layers");
    m.lm.seq_len = l.integer("seq_len");
    l.finish();
  } else {
    throw ConfigError("config", "model.kind must be `gemm` or `lm`");
  }
  m.precision_bytes = static_cast<int>(root.integer_or("precision_bytes", 4));
  root.finish();
  m.validate();
  return m;
}

namespace {

YAML::Emitter& emit_kv(YAML::Emitter& out, const char* key, double v) {
  out << YAML::Key << key << YAML::Value << units::format_quantity(v);
  return out;
}

void emit_net(YAML::Emitter& out, const NetTech& n) {
  out << YAML::BeginMap;
  emit_kv(out, "nominal_voltage", n.nominal_voltage);
  emit_kv(out, "nominal_frequency", n.nominal_frequency);
  emit_kv(out, "energy_per_link", n.energy_per_link);
  emit_kv(out, "area_per_link", n.area_per_link);
  emit_kv(out, "links_per_mm", n.links_per_mm);
  emit_kv(out, "threshold_voltage", n.threshold_voltage);
  emit_kv(out, "min_voltage", n.min_voltage);
  emit_kv(out, "max_voltage", n.max_voltage);
  emit_kv(out, "link_latency", n.link_latency);
  emit_kv(out, "bits_per_cycle_per_link", n.bits_per_cycle_per_link);
  out << YAML::EndMap;
}

void emit_fractions(YAML::Emitter& out, const FractionMap& f) {
  emit_kv(out, "core", f[Component::kCore]);
  emit_kv(out, "L2", f[Component::kL2]);
  emit_kv(out, "L1", f[Component::kL1]);
  emit_kv(out, "L0", f[Component::kL0]);
  emit_kv(out, "DRAM", f[Component::kDram]);
  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  emit_kv(out, "intra_package", f[Component::kNetIntra]);
  emit_kv(out, "inter_package", f[Component::kNetInter]);
  out << YAML::EndMap;
}

}  // namespace

std::string serialize_tech_library(const TechLibrary& lib) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "tech" << YAML::Value << YAML::BeginMap;

  out << YAML::Key << "compute" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tech_node" << YAML::Value << lib.compute.tech_node;
  emit_kv(out, "nominal_voltage", lib.compute.nominal_voltage);
  emit_kv(out, "threshold_voltage", lib.compute.threshold_voltage);
  emit_kv(out, "nominal_frequency", lib.compute.nominal_frequency);
  emit_kv(out, "nominal_op_rate", lib.compute.nominal_op_rate);
  emit_kv(out, "nominal_power", lib.compute.nominal_power);
  emit_kv(out, "nominal_area", lib.compute.nominal_area);
  emit_kv(out, "min_voltage", lib.compute.min_voltage);
  emit_kv(out, "max_voltage", lib.compute.max_voltage);
  emit_kv(out, "static_power_fraction", lib.compute.static_power_fraction);
  out << YAML::EndMap;

  out << YAML::Key << "on_chip_mem" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, m] : lib.on_chip_mem) {
    out << YAML::Key << name << YAML::Value << YAML::BeginMap;
    emit_kv(out, "dynamic_energy_per_bit", m.dynamic_energy_per_bit);
    emit_kv(out, "static_power_per_bit", m.static_power_per_bit);
    emit_kv(out, "area_per_bit", m.area_per_bit);
    emit_kv(out, "bank_capacity", m.bank_capacity);
    emit_kv(out, "bank_periphery_area_overhead", m.bank_periphery_area_overhead);
    emit_kv(out, "controller_area_per_bank", m.controller_area_per_bank);
    emit_kv(out, "controller_power_per_bank", m.controller_power_per_bank);
    emit_kv(out, "latency", m.latency);
    emit_kv(out, "crossbar_area_coeff", m.crossbar_area_coeff);
    emit_kv(out, "crossbar_power_coeff", m.crossbar_power_coeff);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "off_chip_mem" << YAML::Value << YAML::BeginMap;
  const auto& d = lib.off_chip_mem;
  emit_kv(out, "dynamic_energy_per_bit", d.dynamic_energy_per_bit);
  emit_kv(out, "static_power_per_bit", d.static_power_per_bit);
  emit_kv(out, "device_capacity", d.device_capacity);
  emit_kv(out, "device_area", d.device_area);
  emit_kv(out, "controller_io_area_per_device", d.controller_io_area_per_device);
  emit_kv(out, "links_per_device", d.links_per_device);
  emit_kv(out, "links_per_mm", d.links_per_mm);
  emit_kv(out, "nominal_voltage", d.nominal_voltage);
  emit_kv(out, "nominal_frequency", d.nominal_frequency);
  emit_kv(out, "threshold_voltage", d.threshold_voltage);
  emit_kv(out, "min_voltage", d.min_voltage);
  emit_kv(out, "max_voltage", d.max_voltage);
  emit_kv(out, "access_latency", d.access_latency);
  emit_kv(out, "bits_per_cycle_per_link", d.bits_per_cycle_per_link);
  out << YAML::EndMap;

  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "intra_node" << YAML::Value;
  emit_net(out, lib.net_intra);
  out << YAML::Key << "inter_node" << YAML::Value;
  emit_net(out, lib.net_inter);
  out << YAML::EndMap;

  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string serialize_arch_template(const ArchTemplate& tmpl) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "arch_template" << YAML::Value
      << YAML::BeginMap;
  out << YAML::Key << "mcu" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "array_x" << YAML::Value << tmpl.mcu.array_x;
  out << YAML::Key << "array_y" << YAML::Value << tmpl.mcu.array_y;
  out << YAML::Key << "mcus_per_bundle" << YAML::Value << tmpl.mcu.mcus_per_bundle;
  out << YAML::Key << "dataflow" << YAML::Value << to_string(tmpl.mcu.dataflow);
  emit_kv(out, "max_utilization", tmpl.mcu.max_utilization);
  out << YAML::EndMap;
  out << YAML::Key << "memory_levels" << YAML::Value << YAML::BeginSeq;
  for (const auto& ml : tmpl.memory_levels) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << ml.name;
    out << YAML::Key << "tech" << YAML::Value << ml.tech;
    out << YAML::Key << "scope" << YAML::Value << to_string(ml.scope);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string serialize_budget(const ResourceBudget& b) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "budgets" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "area_breakdown" << YAML::Value << YAML::BeginMap;
  emit_kv(out, "node_area_budget", b.node_area_budget);
  emit_kv(out, "proc_chip_area_budget", b.proc_chip_area_budget);
  emit_fractions(out, b.area_frac);
  out << YAML::EndMap;
  out << YAML::Key << "power_breakdown" << YAML::Value << YAML::BeginMap;
  emit_kv(out, "power_budget", b.power_budget);
  emit_fractions(out, b.power_frac);
  out << YAML::EndMap;
  out << YAML::Key << "perimeter_breakdown" << YAML::Value << YAML::BeginMap;
  emit_kv(out, "perimeter_budget", b.perimeter_budget);
  emit_fractions(out, b.perimeter_frac);
  out << YAML::EndMap;
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string serialize_system(const SystemGraph& sys) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "num_packages" << YAML::Value << sys.num_packages;
  out << YAML::Key << "nodes_per_package" << YAML::Value << sys.nodes_per_package;
  auto emit_topology = [&](const char* key, const Topology& t) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << to_string(t.kind);
    out << YAML::Key << "dims" << YAML::Value << YAML::Flow << t.dims;
    out << YAML::EndMap;
  };
  emit_topology("intra_topology", sys.intra_topology);
  emit_topology("inter_topology", sys.inter_topology);
  auto emit_link = [&](const char* key, const LinkSpec& l) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    emit_kv(out, "bandwidth", l.bandwidth);
    emit_kv(out, "latency", l.latency);
    out << YAML::EndMap;
  };
  emit_link("intra_link", sys.intra_link);
  emit_link("inter_link", sys.inter_link);
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string serialize_model(const ModelSpec& m) {
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  if (m.kind == ModelSpec::Kind::kGemm) {
    out << YAML::Key << "kind" << YAML::Value << "gemm";
    out << YAML::Key << "gemm" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "m" << YAML::Value << m.gemm.m;
    out << YAML::Key << "n" << YAML::Value << m.gemm.n;
    out << YAML::Key << "k" << YAML::Value << m.gemm.k;
    out << YAML::EndMap;
  } else {
    out << YAML::Key << "kind" << YAML::Value << "lm";
    out << YAML::Key << "lm" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "hidden_dim" << YAML::Value << m.lm.hidden_dim;
    out << YAML::Key << "batch_size" << YAML::Value << m.lm.batch_size;
    out << YAML::Key << "vocab_size" << YAML::Value << m.lm.vocab_size;
    out << YAML::Key << "num_layers" << YAML::Value << m.lm.num_layers;
    out << YAML::Key << "seq_len" << YAML::Value << m.lm.seq_len;
    out << YAML::EndMap;
  }
  out << YAML::Key << "precision_bytes" << YAML::Value << m.precision_bytes;
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* to_string(Component c) {
  switch (c) {
    case Component::kCore: return "core";
    case Component::kL2: return "L2";
    case Component::kL1: return "L1";
    case Component::kL0: return "L0";
    case Component::kDram: return "DRAM";
    case Component::kNetIntra: return "net_intra";
    case Component::kNetInter: return "net_inter";
  }
  return "?";
}

const char* to_string(Dataflow df) {
  switch (df) {
    case Dataflow::kWeightStationary: return "weight_stationary";
    case Dataflow::kActivationStationary: return "activation_stationary";
    case Dataflow::kOutputStationary: return "output_stationary";
    case Dataflow::kAuto: return "auto";
  }
  return "?";
}

const char* to_string(MemScope scope) {
  switch (scope) {
    case MemScope::kPerMcu: return "per_mcu";
    case MemScope::kPerBundle: return "per_bundle";
    case MemScope::kGlobal: return "global";
  }
  return "?";
}

const char* to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::kMesh: return "mesh";
    case TopologyKind::kTorus: return "torus";
    case TopologyKind::kCrossbar: return "crossbar";
  }
  return "?";
}

}  // namespace crossflow

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "crossflow/budget.hpp"
#include "crossflow/model.hpp"
#include "crossflow/strategy.hpp"
#include "crossflow/system.hpp"
#include "crossflow/tech.hpp"

namespace crossflow {

/// Strict mode (default) rejects unknown keys; --lenient relaxes that.
struct ParseOptions {
  bool lenient = false;
};

// Each parser takes a whole YAML document and reads its own top-level
// section (`tech`, `arch_template`, `budgets`, `system`, `model`). A single
// combined document can therefore feed every parser. Scalars accept
// engineering suffixes (see units.hpp). All throw ConfigError naming the
// missing field or violated constraint.

TechLibrary parse_tech_library(const std::string& yaml_text, const ParseOptions& opt = {});
ArchTemplate parse_arch_template(const std::string& yaml_text, const ParseOptions& opt = {});
ResourceBudget parse_budget(const std::string& yaml_text, const ParseOptions& opt = {});
SystemGraph parse_system(const std::string& yaml_text, const ParseOptions& opt = {});
ModelSpec parse_model(const std::string& yaml_text, const ParseOptions& opt = {});

// Canonical serializers; parse(serialize(x)) == x for every valid value.
std::string serialize_tech_library(const TechLibrary& lib);
std::string serialize_arch_template(const ArchTemplate& tmpl);
std::string serialize_budget(const ResourceBudget& budget);
std::string serialize_system(const SystemGraph& system);
std::string serialize_model(const ModelSpec& model);

std::string read_file(const std::string& path);

}  // namespace crossflow

#pragma once

#include <optional>
#include <string>

#include "dmcs/designer.hpp"
#include "dmcs/pump.hpp"
#include "dmcs/sensitivity.hpp"
#include "dmcs/types.hpp"

namespace dmcs {

// Design file, JSON schema version 1. Field names carry SI units
// (length_m, delta_k_rad_per_m, ...); sensitivity, pump and constraints
// blocks are optional.
struct DesignFile {
  Design design;
  std::optional<SensitivityCoefficients> sensitivity;
  std::optional<PumpPhysics> pump;
  std::optional<DesignConstraints> constraints;
};

inline constexpr int kSchemaVersion = 1;

// throws io_error on missing files, parse failures and schema violations
DesignFile load_design_file(const std::string& path);
DesignFile design_file_from_json(const std::string& text);

// standalone constraints object (the --constraints file of the design
// command); same field names as the design-file block
DesignConstraints constraints_from_json(const std::string& text);
DesignConstraints load_constraints_file(const std::string& path);

// canonical form: sorted keys, two-space indent, trailing newline;
// reserializing a canonical file reproduces it byte for byte
std::string to_canonical_json(const DesignFile& file);
void save_design_file(const DesignFile& file, const std::string& path);

// shortest text that parses back within 12 significant digits
std::string format_sig12(double value);

}  // namespace dmcs

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcs {

// bad values passed through the API (exit code 3 at the CLI)
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// a computation failed to converge or left its validity domain (exit code 3)
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// the brute-force integrator could not certify its own result
class oracle_failure : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// unreadable or malformed input files (exit code 2)
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One uniform stretch of crystal: coupling strength Omega, designed phase
// mismatch delta_k (both rad/m) and length (m).
struct Segment {
  double omega = 0.0;
  double delta_k = 0.0;
  double length = 0.0;
};

struct Design {
  std::string name;
  double work_temperature_c = 37.0;
  std::vector<Segment> segments;
  std::map<std::string, std::string> metadata;

  double total_length() const;
};

void ensure_valid(const Segment& segment);
void ensure_valid(const Design& design);

// single phase-matched segment, the comparison baseline everywhere
Design make_reference_pp(double length, double omega,
                         double work_temperature_c = 37.0);

}  // namespace dmcs

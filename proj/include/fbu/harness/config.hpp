#ifndef FBU_HARNESS_CONFIG_HPP
#define FBU_HARNESS_CONFIG_HPP

#include <string>
#include <vector>

#include "fbu/potential.hpp"

namespace fbu {

/// One reproducible experiment, parsed from a flat key = value section.
struct RunConfig {
  std::string name = "run";
  std::string mode;  // two-body | two-body-sweep | three-body-contact |
                     // three-body-finite | three-body-sweep | verify-proof |
                     // oracle-two-body | oracle-three-body
  std::string shape;
  PotentialShape::Params shape_params;
  std::vector<double> v0_list;
  std::vector<double> q0_list;     // verify-proof sequence
  std::vector<double> alpha_list;  // default {1}
  std::string parity = "even";
  int grid_n = 400;
  int grid_np = 48;
  int grid_nk = 48;
  int states = 1;
  double tol = 1e-9;
  double box = 5.0;
  double oracle_hx = 0.1;
  double oracle_extent_x = 20.0;
  double oracle_extent_y = 20.0;
  int oracle_levels = 2;
  std::string out_dir = "results";
  std::string export_wavefunction;  // optional sink for (P, K, Phi) tables
  bool deterministic = true;        // must stay true (validated)

  void validate() const;  // throws DomainError with the offending key
};

struct ParsedConfig {
  int schema = 1;
  std::vector<RunConfig> runs;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

}  // namespace fbu

#endif

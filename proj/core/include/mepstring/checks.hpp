#pragma once

#include <string>
#include <vector>

namespace mepstring {

/// Outcome of one named verification check.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, thresholds, failing clause
};

struct CheckOptions {
  int threads = 1;
};

/// The named checks, runnable individually. Each pins its own thresholds.
CheckResult check_reparametrization_error_bound();
CheckResult check_spacing_growth_bound();
CheckResult check_commutation_scaling();
CheckResult check_truncation_order();
CheckResult check_refinement_convergence();
CheckResult check_stability();
CheckResult check_trajectory_containment();
CheckResult check_one_sided_distance_bound();
CheckResult check_mueller_brown_self_consistency();

/// Runs every check above in a fixed order.
std::vector<CheckResult> run_check_suite(const CheckOptions& opts = {});

}  // namespace mepstring

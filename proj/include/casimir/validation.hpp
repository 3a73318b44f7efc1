#pragma once

// Cross-validation battery: each check compares two independent routes to
// the same quantity, or a result against a known limit.

#include <string>
#include <vector>

namespace casimir {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst relative deviation seen
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationOptions {
  /// Smaller parameter grids and coarser oracle meshes.
  bool quick = false;
  /// Multiplies the plate reflection factor; anything but 1 should make
  /// the battery fail.
  double reflection_scale = 1.0;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace casimir

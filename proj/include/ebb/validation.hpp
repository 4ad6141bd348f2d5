#pragma once

#include <span>
#include <string>
#include <vector>

#include "ebb/fluxes.hpp"

namespace ebb {

struct CheckResult {
    std::string name;
    double value = 0.0;     // worst observed value
    double threshold = 0.0; // pass iff value < threshold
    bool passed = false;
    std::string detail;
};

// Built-in invariant suite: unitarity, conservation and the entropy
// identity, transfer-vs-direct Green equivalence, lead coupling
// equivalence, graph-map residuals, determinant conservation, and the
// two-site closed-form point. When `user` is given, unitarity and
// conservation are also checked for that system on `user_grid`.
std::vector<CheckResult> run_validation_suite(const SystemConfig* user, std::span<const Energy> user_grid,
                                              int threads = 1);

} // namespace ebb

#pragma once

#include <string>
#include <vector>

namespace hqr {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
};

/// Built-in invariant suite on reduced sizes: Hermiticity, conservation laws,
/// RWA excitation number, operator closed forms, isospectrality trend and
/// sweep determinism across worker counts.
std::vector<CheckResult> run_self_checks(int workers);

}  // namespace hqr

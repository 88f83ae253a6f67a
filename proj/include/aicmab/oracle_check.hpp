#pragma once

#include "aicmab/quadrature.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace aicmab {

/// A random low-dimensional (belief, context, preference) instance.
struct OracleCase {
    GaussianBeliefd belief;
    ContextVector x;
    PriorPreference pref;
};

/// Draws a case of dimension n: mean entries U[−1,1), covariance
/// s·random_covariance(n) with s ~ U[0.05, 0.5), a non-zero binary context and
/// p_ev(1) uniformly from {0.999, 0.6, 0.5, 0.4}.
OracleCase random_oracle_case(Eigen::Index n, Rng& rng);

struct InvariantResult {
    std::string name;
    double observed;   // max error, or a pass fraction for fraction-based checks
    double tolerance;
    bool passed;
};

struct OracleCheckReport {
    std::vector<InvariantResult> results;
    [[nodiscard]] bool all_passed() const;
};

/// Runs the fusion/EFE invariant suite against the quadrature oracle on
/// `cases` random instances at n ∈ {1, 2}.
OracleCheckReport run_oracle_check(std::size_t cases, std::uint64_t seed, std::size_t vbis_samples = 100000);

void print_report(std::ostream& os, const OracleCheckReport& report);

}  // namespace aicmab

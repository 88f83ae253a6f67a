#include "aicmab/oracle_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace aicmab {

OracleCase random_oracle_case(Eigen::Index n, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    VectorXd mean(n);
    for (Eigen::Index i = 0; i < n; ++i) mean[i] = 2.0 * unif(rng) - 1.0;
    const double scale = 0.05 + 0.45 * unif(rng);
    MatrixXd cov = scale * random_covariance<double>(n, rng);

    std::bernoulli_distribution coin(0.5);
    std::vector<int> bits(static_cast<std::size_t>(n));
    do {
        for (auto& b : bits) b = coin(rng) ? 1 : 0;
    } while (std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; }));

    constexpr std::array<double, 4> pref1{0.999, 0.6, 0.5, 0.4};
    std::uniform_int_distribution<std::size_t> pick(0, pref1.size() - 1);
    return {GaussianBeliefd(mean, cov), ContextVector(bits), PriorPreference::from_p1(pref1[pick(rng)])};
}

bool OracleCheckReport::all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

OracleCheckReport run_oracle_check(std::size_t cases, std::uint64_t seed, std::size_t vbis_samples) {
    detail::require(cases >= 1, "need at least one case");

    double laplace_err = 0, vb_excess = -1e300, lap_norm_dev = 0, quad_norm_dev = 0;
    double decomp_err = 0, bound_excess = -1e300, contraction_excess = -1e300, zero_ctx_err = 0;
    std::size_t vbis_ok = 0;

    for (std::size_t i = 0; i < cases; ++i) {
        Rng rng = make_stream(seed, i);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(i % 2);
        const OracleCase c = random_oracle_case(n, rng);
        const EfeBreakdown exact = quadrature_oracle(c.belief, c.x, c.pref);

        const EfeBreakdown lap = efe_total(c.belief, c.x, c.pref, FusionMethod::Laplace, rng);
        const EfeBreakdown is = efe_total(c.belief, c.x, c.pref, FusionMethod::VBIS, rng, vbis_samples);
        double case_vbis_err = 0;
        for (std::size_t o = 0; o < 2; ++o) {
            laplace_err = std::max(laplace_err, std::abs(lap.per_outcome[o] - exact.per_outcome[o]));
            case_vbis_err = std::max(case_vbis_err, std::abs(is.per_outcome[o] - exact.per_outcome[o]));
        }
        if (case_vbis_err <= 0.03) ++vbis_ok;

        lap_norm_dev = std::max(lap_norm_dev, std::abs(lap.c_hat[0] + lap.c_hat[1] - 1.0));
        quad_norm_dev = std::max(quad_norm_dev, std::abs(exact.c_hat[0] + exact.c_hat[1] - 1.0));
        decomp_err = std::max(decomp_err, std::abs(exact.total - (exact.pragmatic - exact.epistemic)));

        const VectorXd& xv = c.x.values();
        const double prior_var = xv.dot(c.belief.covariance() * xv);
        for (const Outcome o : kOutcomes) {
            const FusionResult vb = vb_fuse(c.belief, c.x, o);
            vb_excess = std::max(vb_excess, vb.c_hat - exact.c_hat[static_cast<std::size_t>(to_int(o))]);

            const FusionResult lp = laplace_fuse(c.belief, c.x, o);
            contraction_excess = std::max(contraction_excess, xv.dot(lp.posterior.covariance() * xv) - prior_var);

            const VariationalParams vp = optimize_variational_params(c.belief, c.x);
            const QuadraticFactord factor = bound_coefficients(c.x, o, vp);
            for (int s = 0; s < 50; ++s) {
                const VectorXd theta = sample_one(c.belief, rng);
                bound_excess = std::max(bound_excess, factor(theta) - sigmoid_prob(theta, c.x, o));
            }
        }

        const ContextVector zero = ContextVector::zeros(n);
        const double closed = 0.5 * std::log(0.5 / c.pref.p0()) + 0.5 * std::log(0.5 / c.pref.p1()) + std::log(2.0);
        for (const auto method : {FusionMethod::Laplace, FusionMethod::VBIS}) {
            const double total = efe_total(c.belief, zero, c.pref, method, rng).total;
            zero_ctx_err = std::max(zero_ctx_err, std::abs(total - closed));
        }
    }

    const double vbis_fraction = static_cast<double>(vbis_ok) / static_cast<double>(cases);
    OracleCheckReport report;
    report.results = {
        {"laplace_efe_abs_err", laplace_err, 0.02, laplace_err <= 0.02},
        {"vbis_efe_within_0.03_fraction", vbis_fraction, 0.95, vbis_fraction >= 0.95},
        {"vb_chat_minus_true_c", vb_excess, 1e-9, vb_excess <= 1e-9},
        {"laplace_normalization_dev", lap_norm_dev, 0.1, lap_norm_dev <= 0.1},
        {"quadrature_normalization_dev", quad_norm_dev, 1e-9, quad_norm_dev <= 1e-9},
        {"quadrature_decomposition_err", decomp_err, 1e-6, decomp_err <= 1e-6},
        {"bound_minus_sigmoid", bound_excess, 1e-12, bound_excess <= 1e-12},
        {"laplace_contraction_excess", contraction_excess, 1e-9, contraction_excess <= 1e-9},
        {"zero_context_efe_err", zero_ctx_err, 1e-6, zero_ctx_err <= 1e-6},
    };
    return report;
}

void print_report(std::ostream& os, const OracleCheckReport& report) {
    char line[160];
    std::snprintf(line, sizeof line, "%-32s %14s %12s  %s\n", "invariant", "observed", "tolerance", "status");
    os << line;
    for (const auto& r : report.results) {
        std::snprintf(line, sizeof line, "%-32s %14.6e %12.3e  %s\n", r.name.c_str(), r.observed, r.tolerance,
                      r.passed ? "PASS" : "FAIL");
        os << line;
    }
}

}  // namespace aicmab

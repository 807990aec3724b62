#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "tda/barcode.hpp"
#include "tda/barcode_stats.hpp"
#include "tda/rng.hpp"

namespace tda {

struct TestReport {
    double statistic = 0.0;
    std::optional<double> p_value;
    bool reject_90 = false;
    bool reject_95 = false;
    bool reject_99 = false;
    std::string method;
    std::map<std::string, double> params;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    double level = 0.0;
    std::string method;
    std::map<std::string, double> params;
};

std::string to_json(const TestReport& report);
std::string to_json(const ConfidenceInterval& ci);

// Exact sup over the pooled jump points of the two empirical CDFs;
// asymptotic Kolmogorov p-value with effective size n1*n2/(n1+n2).
TestReport ks_two_sample(const RealDistribution& s1, const RealDistribution& s2);

// Equal-width histogram chi-squared: sum (A1-A2)^2/(A1+A2) over bins with
// A1+A2 > 0, dof = nonzero bins - 1.  The range extends to the pooled
// min/max when it does not cover both samples.
TestReport chi2_histogram(const RealDistribution& s1, const RealDistribution& s2,
                          std::size_t bins,
                          std::optional<std::pair<double, double>> range = {});

// Chi-squared over counts of atom occurrences assigned to the nearest
// reference barcode (ties to the lowest index).  The references must be
// chosen without looking at the observed data.
TestReport chi2_reference_barcodes(const BarcodeDistribution& dist1,
                                   const BarcodeDistribution& dist2,
                                   const std::vector<Barcode>& refs);

// P[X <= q] for X ~ Binomial(N, eps), by stable log-space summation.
double binomial_tail(std::size_t N, std::size_t q, double eps);

// Tests H0: the distribution has mass >= eps on the set described by in_S.
// The p-value is binomial_tail(K, #{occurrences in S}, eps); H0 is rejected
// at the 1 - alpha level when it falls below alpha.
TestReport mass_hypothesis_test(const BarcodeDistribution& dist,
                                const std::function<bool(const Barcode&)>& in_S,
                                double eps, double alpha);

// Weight of atoms within bottleneck distance < eps of B.
double likelihood_score(const Barcode& B, const BarcodeDistribution& dist,
                        double eps);

// Distribution-free CI for the median from order statistics
// [s_{floor((m+1)/2 - sqrt(m) u/2)}, s_{ceil((m+1)/2 + sqrt(m) u/2)}],
// u the upper alpha/2 normal quantile, indices clamped to [1, m].
// Asymptotic; requires m >= 10.
ConfidenceInterval median_confidence_interval(const RealDistribution& samples,
                                              double alpha);

enum class Tail { Upper, Lower, TwoSided };

// (1 + #{null draws as extreme as observed}) / (trials + 1); the two-sided
// value is twice the smaller one-sided value, capped at 1.  Trials use
// per-index derived seeds.
double monte_carlo_pvalue(double observed,
                          const std::function<double(Rng&)>& null_sampler,
                          std::size_t trials, Tail tail, const Rng& rng);

// Numeric helpers, exposed for testing.
double normal_upper_quantile(double p);    // z with P[Z > z] = p
double kolmogorov_sf(double lambda);       // Q_KS(lambda)
double chi2_upper_tail(double x, double dof);

} // namespace tda

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tda/barcode.hpp"
#include "tda/metric_space.hpp"
#include "tda/rng.hpp"

namespace tda {

enum class ComplexKind { Rips, Witness };

std::string to_string(ComplexKind kind);
ComplexKind complex_kind_from_string(const std::string& name);

struct PhiMeta {
    std::size_t n = 0;        // subsample size
    int k = 0;                // homology degree
    std::size_t K = 0;        // Monte Carlo count
    double cutoff = 0.0;
    ComplexKind kind = ComplexKind::Rips;
    std::uint64_t seed = 0;
};

// Empirical measure on barcode space: deduplicated atoms with integer
// counts out of `total` (= K), so weights are exact rationals.
struct BarcodeDistribution {
    std::vector<std::pair<Barcode, std::size_t>> atoms;  // sorted by barcode
    std::size_t total = 0;
    PhiMeta meta;
};

// Finite empirical distribution on the reals.
struct RealDistribution {
    std::vector<double> samples;  // sorted ascending

    explicit RealDistribution(std::vector<double> xs = {});
    std::size_t size() const { return samples.size(); }
};

// Lower middle order statistic; always an attained sample value.
double median_lower(const RealDistribution& dist);

struct PhiOptions {
    bool with_replacement = true;  // i.i.d. draws from mu_X (the product measure)
    int threads = 1;
};

// Monte Carlo estimate of the subsample barcode distribution: K subsamples
// of size n drawn from the space's weights, each pushed through
// filtration -> persistence -> truncation.  For the witness kind the n
// points serve as landmarks and the whole space as witnesses.
// Bit-reproducible for a fixed rng seed regardless of thread count.
BarcodeDistribution phi_estimate(const FiniteMetricSpace& space, std::size_t n,
                                 int k, std::size_t K, double cutoff,
                                 ComplexKind kind, const Rng& rng,
                                 PhiOptions options = {});

// Two-stage variant: first draw an N-point empirical space, then estimate
// on it.
BarcodeDistribution phi_estimate_two_stage(const FiniteMetricSpace& space,
                                           std::size_t N, std::size_t n, int k,
                                           std::size_t K, double cutoff,
                                           ComplexKind kind, const Rng& rng,
                                           PhiOptions options = {});

// P bottleneck distances of i.i.d. pairs from dist x dist.
RealDistribution distance_distribution_d2(const BarcodeDistribution& dist,
                                          std::size_t pair_count, Rng& rng);

// Exact pushforward of d_B(reference, -): one value per underlying sample.
RealDistribution distance_distribution_db(const BarcodeDistribution& dist,
                                          const Barcode& reference);

// Prohorov distance between barcode distributions, bottleneck ground metric.
double prohorov_barcode(const BarcodeDistribution& dist1,
                        const BarcodeDistribution& dist2);

// Homological distance to a reference distribution (= prohorov_barcode).
double hd(const BarcodeDistribution& dist, const BarcodeDistribution& reference);

// Median homological distance: median of d_B(reference, -).  With on_d2
// the median is taken over the pairwise distance distribution instead
// (the body-text variant); the reference is then unused.
double mhd(const BarcodeDistribution& dist, const Barcode& reference,
           bool on_d2 = false);

// Mean of d_B(reference, -) after discarding the floor(alpha*m) smallest
// and largest values; 0 < alpha < 1/2.
double trimmed_mhd(const BarcodeDistribution& dist, const Barcode& reference,
                   double alpha);

// Median over samples of the gap statistic g_m; gap_max scans m = 1..m_max
// and returns (argmax, value), ties to the smallest m.
double gap_median(const BarcodeDistribution& dist, std::size_t m);
std::pair<std::size_t, double> gap_max(const BarcodeDistribution& dist,
                                       std::size_t m_max);

// {"meta": {...}, "atoms": [{"barcode": [[a,b],...], "count": c}, ...]}
std::string to_json(const BarcodeDistribution& dist);
BarcodeDistribution distribution_from_json(const std::string& text);

} // namespace tda

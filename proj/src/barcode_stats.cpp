#include "tda/barcode_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tda/bottleneck.hpp"
#include "tda/filtration.hpp"
#include "tda/persistence.hpp"
#include "tda/prohorov.hpp"

namespace tda {

std::string to_string(ComplexKind kind) {
    return kind == ComplexKind::Rips ? "rips" : "witness";
}

ComplexKind complex_kind_from_string(const std::string& name) {
    if (name == "rips") return ComplexKind::Rips;
    if (name == "witness") return ComplexKind::Witness;
    throw std::invalid_argument("unknown complex kind: " + name);
}

RealDistribution::RealDistribution(std::vector<double> xs)
    : samples(std::move(xs)) {
    std::sort(samples.begin(), samples.end());
}

double median_lower(const RealDistribution& dist) {
    if (dist.samples.empty())
        throw std::invalid_argument("median of an empty distribution");
    return dist.samples[(dist.samples.size() - 1) / 2];
}

namespace {

std::vector<double> cumulative_weights(const std::vector<double>& weights) {
    std::vector<double> cdf(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    cdf.back() = 1.0;
    return cdf;
}

std::size_t draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    return static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

std::vector<std::size_t> draw_indices(const std::vector<double>& weights,
                                      const std::vector<double>& cdf,
                                      std::size_t n, bool with_replacement,
                                      Rng& rng) {
    std::vector<std::size_t> indices;
    indices.reserve(n);
    if (with_replacement) {
        for (std::size_t i = 0; i < n; ++i)
            indices.push_back(draw_from_cdf(cdf, rng));
        return indices;
    }
    std::vector<double> remaining = weights;
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform() * total;
        std::size_t pick = remaining.size() - 1;
        for (std::size_t j = 0; j < remaining.size(); ++j) {
            if (remaining[j] <= 0.0) continue;
            if (u < remaining[j]) {
                pick = j;
                break;
            }
            u -= remaining[j];
        }
        indices.push_back(pick);
        total -= remaining[pick];
        remaining[pick] = 0.0;
    }
    return indices;
}

Barcode subsample_barcode(const FiniteMetricSpace& space,
                          const std::vector<std::size_t>& indices, int k,
                          double cutoff, ComplexKind kind) {
    FilteredComplex complex;
    if (kind == ComplexKind::Rips) {
        complex = vietoris_rips(subspace(space, indices), k + 1, cutoff);
    } else {
        // repeated landmark picks collapse to one landmark; a duplicate would
        // only contribute a zero-length component bar anyway
        std::vector<std::size_t> landmarks = indices;
        std::sort(landmarks.begin(), landmarks.end());
        landmarks.erase(std::unique(landmarks.begin(), landmarks.end()),
                        landmarks.end());
        complex = weak_witness(space, landmarks, k + 1, cutoff);
    }
    return compute_barcode(complex, k);
}

BarcodeDistribution aggregate(std::vector<Barcode> barcodes, PhiMeta meta) {
    std::map<Barcode, std::size_t> counts;
    for (auto& b : barcodes) ++counts[std::move(b)];
    BarcodeDistribution dist;
    dist.total = barcodes.size();
    dist.meta = meta;
    dist.atoms.assign(counts.begin(), counts.end());
    return dist;
}

} // namespace

BarcodeDistribution phi_estimate(const FiniteMetricSpace& space, std::size_t n,
                                 int k, std::size_t K, double cutoff,
                                 ComplexKind kind, const Rng& rng,
                                 PhiOptions options) {
    if (space.size() == 0) throw std::invalid_argument("empty space");
    if (n == 0) throw std::invalid_argument("subsample size must be >= 1");
    if (k < 0) throw std::invalid_argument("homology degree must be >= 0");
    if (K == 0) throw std::invalid_argument("subsample count must be >= 1");
    if (!options.with_replacement && n > space.size())
        throw std::invalid_argument(
            "subsample size exceeds space size without replacement");

    const auto cdf = cumulative_weights(space.weights);
    std::vector<Barcode> barcodes(K);
    const auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Rng child = rng.split(i);
            const auto indices = draw_indices(space.weights, cdf, n,
                                              options.with_replacement, child);
            barcodes[i] = subsample_barcode(space, indices, k, cutoff, kind);
        }
    };

    const std::size_t threads =
        std::min<std::size_t>(std::max(options.threads, 1), K);
    if (threads <= 1) {
        run_range(0, K);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t lo = K * t / threads;
            const std::size_t hi = K * (t + 1) / threads;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    PhiMeta meta{n, k, K, cutoff, kind, 0};
    auto dist = aggregate(std::move(barcodes), meta);
    dist.total = K;
    return dist;
}

BarcodeDistribution phi_estimate_two_stage(const FiniteMetricSpace& space,
                                           std::size_t N, std::size_t n, int k,
                                           std::size_t K, double cutoff,
                                           ComplexKind kind, const Rng& rng,
                                           PhiOptions options) {
    if (N < n) throw std::invalid_argument("first-stage size must be >= n");
    Rng stage1 = rng.split(0);
    const auto cdf = cumulative_weights(space.weights);
    const auto indices = draw_indices(space.weights, cdf, N,
                                      options.with_replacement, stage1);
    const FiniteMetricSpace empirical = subspace(space, indices);
    return phi_estimate(empirical, n, k, K, cutoff, kind, rng.split(1), options);
}

namespace {

// distances between every pair of atoms, computed once
std::vector<std::vector<double>> atom_distances(
    const BarcodeDistribution& d1, const BarcodeDistribution& d2) {
    std::vector<std::vector<double>> d(d1.atoms.size(),
                                       std::vector<double>(d2.atoms.size()));
    for (std::size_t i = 0; i < d1.atoms.size(); ++i)
        for (std::size_t j = 0; j < d2.atoms.size(); ++j)
            d[i][j] = bottleneck_distance(d1.atoms[i].first, d2.atoms[j].first);
    return d;
}

std::vector<double> atom_weights(const BarcodeDistribution& dist) {
    std::vector<double> w;
    w.reserve(dist.atoms.size());
    for (const auto& [barcode, count] : dist.atoms)
        w.push_back(static_cast<double>(count) /
                    static_cast<double>(dist.total));
    return w;
}

} // namespace

RealDistribution distance_distribution_d2(const BarcodeDistribution& dist,
                                          std::size_t pair_count, Rng& rng) {
    if (dist.atoms.empty()) throw std::invalid_argument("empty distribution");
    if (pair_count == 0) throw std::invalid_argument("pair count must be >= 1");
    const auto cdf = cumulative_weights(atom_weights(dist));
    std::map<std::pair<std::size_t, std::size_t>, double> cache;
    std::vector<double> samples;
    samples.reserve(pair_count);
    for (std::size_t p = 0; p < pair_count; ++p) {
        std::size_t i = draw_from_cdf(cdf, rng);
        std::size_t j = draw_from_cdf(cdf, rng);
        if (i > j) std::swap(i, j);
        auto [it, inserted] = cache.try_emplace({i, j}, 0.0);
        if (inserted)
            it->second = bottleneck_distance(dist.atoms[i].first,
                                             dist.atoms[j].first);
        samples.push_back(it->second);
    }
    return RealDistribution(std::move(samples));
}

RealDistribution distance_distribution_db(const BarcodeDistribution& dist,
                                          const Barcode& reference) {
    std::vector<double> samples;
    samples.reserve(dist.total);
    for (const auto& [barcode, count] : dist.atoms) {
        const double d = bottleneck_distance(reference, barcode);
        samples.insert(samples.end(), count, d);
    }
    return RealDistribution(std::move(samples));
}

double prohorov_barcode(const BarcodeDistribution& dist1,
                        const BarcodeDistribution& dist2) {
    if (dist1.atoms.empty() || dist2.atoms.empty())
        throw std::invalid_argument("empty distribution");
    return prohorov_finite(atom_weights(dist1), atom_weights(dist2),
                           atom_distances(dist1, dist2));
}

double hd(const BarcodeDistribution& dist,
          const BarcodeDistribution& reference) {
    return prohorov_barcode(dist, reference);
}

double mhd(const BarcodeDistribution& dist, const Barcode& reference,
           bool on_d2) {
    if (dist.atoms.empty()) throw std::invalid_argument("empty distribution");
    if (!on_d2) return median_lower(distance_distribution_db(dist, reference));

    // exact weighted median of the K^2 pairwise distances
    std::vector<std::pair<double, std::uint64_t>> weighted;
    for (std::size_t i = 0; i < dist.atoms.size(); ++i) {
        const std::uint64_t ci = dist.atoms[i].second;
        weighted.emplace_back(0.0, ci * ci);
        for (std::size_t j = i + 1; j < dist.atoms.size(); ++j) {
            const double d = bottleneck_distance(dist.atoms[i].first,
                                                 dist.atoms[j].first);
            weighted.emplace_back(d, 2 * ci * dist.atoms[j].second);
        }
    }
    std::sort(weighted.begin(), weighted.end());
    const std::uint64_t m =
        static_cast<std::uint64_t>(dist.total) * dist.total;
    const std::uint64_t target = (m - 1) / 2 + 1;  // lower middle, 1-based
    std::uint64_t seen = 0;
    for (const auto& [d, c] : weighted) {
        seen += c;
        if (seen >= target) return d;
    }
    return weighted.back().first;
}

double trimmed_mhd(const BarcodeDistribution& dist, const Barcode& reference,
                   double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("alpha must be in (0, 0.5)");
    const auto db = distance_distribution_db(dist, reference);
    const std::size_t m = db.size();
    const std::size_t trim = static_cast<std::size_t>(
        std::floor(alpha * static_cast<double>(m)));
    if (2 * trim >= m) throw std::invalid_argument("all samples trimmed");
    double sum = 0.0;
    for (std::size_t i = trim; i < m - trim; ++i) sum += db.samples[i];
    return sum / static_cast<double>(m - 2 * trim);
}

double gap_median(const BarcodeDistribution& dist, std::size_t m) {
    if (dist.atoms.empty()) throw std::invalid_argument("empty distribution");
    if (m == 0) throw std::invalid_argument("m must be >= 1");
    std::vector<std::pair<double, std::size_t>> weighted;
    weighted.reserve(dist.atoms.size());
    for (const auto& [barcode, count] : dist.atoms)
        weighted.emplace_back(gap_statistic(barcode, m), count);
    std::sort(weighted.begin(), weighted.end());
    const std::size_t target = (dist.total - 1) / 2 + 1;
    std::size_t seen = 0;
    for (const auto& [g, c] : weighted) {
        seen += c;
        if (seen >= target) return g;
    }
    return weighted.back().first;
}

std::pair<std::size_t, double> gap_max(const BarcodeDistribution& dist,
                                       std::size_t m_max) {
    if (m_max == 0) throw std::invalid_argument("m_max must be >= 1");
    std::size_t best_m = 1;
    double best = gap_median(dist, 1);
    for (std::size_t m = 2; m <= m_max; ++m) {
        const double g = gap_median(dist, m);
        if (g > best) {
            best = g;
            best_m = m;
        }
    }
    return {best_m, best};
}

std::string to_json(const BarcodeDistribution& dist) {
    nlohmann::json j;
    j["meta"] = {{"n", dist.meta.n},
                 {"k", dist.meta.k},
                 {"K", dist.meta.K},
                 {"cutoff", dist.meta.cutoff},
                 {"kind", to_string(dist.meta.kind)},
                 {"seed", dist.meta.seed}};
    auto atoms = nlohmann::json::array();
    for (const auto& [barcode, count] : dist.atoms) {
        auto bars = nlohmann::json::array();
        for (const auto& iv : barcode.intervals)
            bars.push_back({iv.birth, iv.death});
        atoms.push_back({{"barcode", bars}, {"count", count}});
    }
    j["atoms"] = atoms;
    return j.dump();
}

BarcodeDistribution distribution_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BarcodeDistribution dist;
    const auto& meta = j.at("meta");
    dist.meta.n = meta.at("n").get<std::size_t>();
    dist.meta.k = meta.at("k").get<int>();
    dist.meta.K = meta.at("K").get<std::size_t>();
    dist.meta.cutoff = meta.at("cutoff").get<double>();
    dist.meta.kind = complex_kind_from_string(meta.at("kind").get<std::string>());
    dist.meta.seed = meta.at("seed").get<std::uint64_t>();
    for (const auto& atom : j.at("atoms")) {
        std::vector<Interval> bars;
        for (const auto& iv : atom.at("barcode"))
            bars.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
        const auto count = atom.at("count").get<std::size_t>();
        dist.atoms.emplace_back(Barcode(std::move(bars)), count);
        dist.total += count;
    }
    std::sort(dist.atoms.begin(), dist.atoms.end());
    return dist;
}

} // namespace tda

#include "tda/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tda {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

PointCloud sample_annulus(std::size_t count, double r_in, double r_out, Rng& rng,
                          std::uint64_t* proposals) {
    if (!(0.0 < r_in && r_in < r_out))
        throw std::invalid_argument("annulus requires 0 < r_in < r_out");
    PointCloud points;
    points.reserve(count);
    while (points.size() < count) {
        const double x = rng.uniform(-r_out, r_out);
        const double y = rng.uniform(-r_out, r_out);
        if (proposals) ++*proposals;
        const double r = std::sqrt(x * x + y * y);
        if (r_in <= r && r <= r_out) points.push_back({x, y});
    }
    return points;
}

PointCloud sample_two_circles(std::size_t count, Rng& rng) {
    PointCloud points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        if (rng.uniform() < 2.0 / 3.0)
            points.push_back({2.0 * std::cos(theta), 2.0 * std::sin(theta)});
        else
            points.push_back({0.8 + std::cos(theta), std::sin(theta)});
    }
    return points;
}

PointCloud sample_sphere(std::size_t count, double radius, Rng& rng) {
    if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
    PointCloud points;
    points.reserve(count);
    while (points.size() < count) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double z3 = rng.normal();
        const double norm = std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
        if (norm == 0.0) continue;  // degenerate draw, retry
        points.push_back({radius * z1 / norm, radius * z2 / norm, radius * z3 / norm});
    }
    return points;
}

PointCloud sample_torus(std::size_t count, double r, double R, Rng& rng,
                        std::uint64_t* proposals) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("torus requires 0 < r < R");
    PointCloud points;
    points.reserve(count);
    while (points.size() < count) {
        const double theta = rng.uniform(0.0, kTwoPi);
        if (proposals) ++*proposals;
        const double accept = (R + r * std::cos(theta)) / (R + r);
        if (rng.uniform() >= accept) continue;
        const double psi = rng.uniform(0.0, kTwoPi);
        points.push_back({(R + r * std::cos(theta)) * std::cos(psi),
                          (R + r * std::cos(theta)) * std::sin(psi),
                          r * std::sin(theta)});
    }
    return points;
}

PointCloud sample_box(std::size_t count,
                      const std::vector<std::pair<double, double>>& bounds, Rng& rng) {
    if (bounds.empty()) throw std::invalid_argument("empty box bounds");
    for (const auto& [lo, hi] : bounds)
        if (!(lo < hi)) throw std::invalid_argument("box bounds require low < high");
    PointCloud points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> p(bounds.size());
        for (std::size_t d = 0; d < bounds.size(); ++d)
            p[d] = rng.uniform(bounds[d].first, bounds[d].second);
        points.push_back(std::move(p));
    }
    return points;
}

PointCloud add_gaussian_noise(const PointCloud& coords, double sigma2, Rng& rng) {
    if (sigma2 < 0.0) throw std::invalid_argument("negative variance");
    PointCloud out = coords;
    if (sigma2 == 0.0) return out;
    const double sigma = std::sqrt(sigma2);
    for (auto& p : out)
        for (double& x : p) x += sigma * rng.normal();
    return out;
}

PointCloud replace_uniform_noise(const PointCloud& coords, double fraction,
                                 const std::vector<std::pair<double, double>>& bounds,
                                 Rng& rng) {
    if (!(0.0 <= fraction && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in [0, 1]");
    PointCloud out = coords;
    const std::size_t n = coords.size();
    const std::size_t m = static_cast<std::size_t>(fraction * static_cast<double>(n));
    if (m == 0) return out;
    // partial Fisher-Yates picks m distinct indices
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < m; ++i)
        std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    const PointCloud noise = sample_box(m, bounds, rng);
    for (std::size_t i = 0; i < m; ++i) out[idx[i]] = noise[i];
    return out;
}

PointCloud add_diameter_linkage(const PointCloud& coords, std::size_t count, Rng& rng) {
    PointCloud out = coords;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back({0.0, rng.uniform(-0.8, 0.8)});
    return out;
}

PointCloud density_filter_knn(const PointCloud& coords, std::size_t k,
                              double keep_fraction) {
    const std::size_t n = coords.size();
    if (k == 0 || k >= n) throw std::invalid_argument("k must satisfy 0 < k < n");
    if (!(0.0 < keep_fraction && keep_fraction <= 1.0))
        throw std::invalid_argument("keep_fraction must lie in (0, 1]");
    std::vector<std::pair<double, std::size_t>> ranked(n);
    std::vector<double> dists(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < coords[i].size(); ++d) {
                const double diff = coords[i][d] - coords[j][d];
                s += diff * diff;
            }
            dists[j] = std::sqrt(s);
        }
        std::nth_element(dists.begin(), dists.begin() + k, dists.end());
        ranked[i] = {dists[k], i};  // k-th neighbor, self at rank 0
    }
    std::sort(ranked.begin(), ranked.end());
    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(keep_fraction * static_cast<double>(n)));
    std::vector<std::size_t> kept;
    kept.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) kept.push_back(ranked[i].second);
    std::sort(kept.begin(), kept.end());
    PointCloud out;
    out.reserve(keep);
    for (std::size_t i : kept) out.push_back(coords[i]);
    return out;
}

} // namespace tda

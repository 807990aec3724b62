#include "tda/metric_space.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tda {

namespace {

std::vector<double> checked_weights(std::size_t n, const std::vector<double>& weights) {
    if (weights.empty())
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    if (weights.size() != n)
        throw std::invalid_argument("weights length does not match point count");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("weights must sum to 1");
    return weights;
}

} // namespace

FiniteMetricSpace from_points(const std::vector<std::vector<double>>& coords,
                              const std::vector<double>& weights) {
    if (coords.empty()) throw std::invalid_argument("empty point cloud");
    const std::size_t n = coords.size();
    const std::size_t dim = coords[0].size();
    for (const auto& p : coords)
        if (p.size() != dim) throw std::invalid_argument("point dimension mismatch");

    FiniteMetricSpace space;
    space.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = coords[i][d] - coords[j][d];
                s += diff * diff;
            }
            const double dij = std::sqrt(s);
            space.dist[i][j] = dij;
            space.dist[j][i] = dij;
        }
    }
    space.weights = checked_weights(n, weights);
    space.coords = coords;
    return space;
}

FiniteMetricSpace from_distance_matrix(std::vector<std::vector<double>> dist,
                                       const std::vector<double>& weights) {
    const std::size_t n = dist.size();
    if (n == 0) throw std::invalid_argument("empty distance matrix");
    for (const auto& row : dist)
        if (row.size() != n) throw std::invalid_argument("distance matrix not square");
    for (std::size_t i = 0; i < n; ++i) {
        dist[i][i] = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist[i][j] < 0.0) throw std::invalid_argument("negative distance");
            dist[j][i] = dist[i][j];
        }
    }
    FiniteMetricSpace space;
    space.dist = std::move(dist);
    space.weights = checked_weights(n, weights);
    return space;
}

FiniteMetricSpace metric_circle(std::size_t k, double ell, bool cyclic_standard) {
    if (k < 3) throw std::invalid_argument("metric_circle requires k >= 3");
    if (ell <= 0.0) throw std::invalid_argument("metric_circle requires ell > 0");
    std::vector<std::vector<double>> dist(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            // 1-based indices i, j
            const long i = static_cast<long>(a) + 1;
            const long j = static_cast<long>(b) + 1;
            const long step = std::abs(i - j);
            const long wrap = cyclic_standard ? static_cast<long>(k) - step
                                              : std::abs(static_cast<long>(k) - i - j);
            const double d = ell * static_cast<double>(std::min(step, wrap));
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    FiniteMetricSpace space;
    space.dist = std::move(dist);
    space.weights.assign(k, 1.0 / static_cast<double>(k));
    return space;
}

FiniteMetricSpace subspace(const FiniteMetricSpace& space,
                           const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("empty index list");
    const std::size_t n = indices.size();
    FiniteMetricSpace sub;
    sub.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
        if (indices[a] >= space.size()) throw std::invalid_argument("index out of range");
        for (std::size_t b = 0; b < n; ++b)
            sub.dist[a][b] = space.dist[indices[a]][indices[b]];
    }
    sub.weights.assign(n, 1.0 / static_cast<double>(n));
    if (space.coords) {
        std::vector<std::vector<double>> pts;
        pts.reserve(n);
        for (std::size_t idx : indices) pts.push_back((*space.coords)[idx]);
        sub.coords = std::move(pts);
    }
    return sub;
}

void validate_metric(const FiniteMetricSpace& space, double tol) {
    const std::size_t n = space.size();
    if (n == 0) throw std::runtime_error("empty space");
    for (std::size_t i = 0; i < n; ++i) {
        if (space.dist[i].size() != n) throw std::runtime_error("distance matrix not square");
        if (space.dist[i][i] != 0.0) throw std::runtime_error("nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (space.dist[i][j] < 0.0) throw std::runtime_error("negative distance");
            if (space.dist[i][j] != space.dist[j][i])
                throw std::runtime_error("asymmetric distance matrix");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                if (space.dist[i][j] > space.dist[i][l] + space.dist[l][j] + tol)
                    throw std::runtime_error("triangle inequality violated at (" +
                                             std::to_string(i) + "," + std::to_string(j) +
                                             "," + std::to_string(l) + ")");
    double sum = 0.0;
    for (double w : space.weights) {
        if (w < 0.0) throw std::runtime_error("negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::runtime_error("weights do not sum to 1");
    if (space.weights.size() != n) throw std::runtime_error("weight length mismatch");
    if (space.coords) {
        const auto& pts = *space.coords;
        if (pts.size() != n) throw std::runtime_error("coordinate count mismatch");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t d = 0; d < pts[i].size(); ++d) {
                    const double diff = pts[i][d] - pts[j][d];
                    s += diff * diff;
                }
                if (std::abs(std::sqrt(s) - space.dist[i][j]) > 1e-12)
                    throw std::runtime_error("coordinates disagree with distance matrix");
            }
    }
}

} // namespace tda

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tda {

// Finite metric measure space: a full symmetric distance matrix, a
// probability vector over the points, and (when the space came from a
// point cloud) the ambient coordinates.
struct FiniteMetricSpace {
    std::vector<std::vector<double>> dist;
    std::vector<double> weights;
    std::optional<std::vector<std::vector<double>>> coords;

    std::size_t size() const { return dist.size(); }
};

// Euclidean space on a point cloud; uniform weights when omitted.
FiniteMetricSpace from_points(const std::vector<std::vector<double>>& coords,
                              const std::vector<double>& weights = {});

// Arbitrary distance matrix; symmetry is enforced, the triangle inequality
// is the caller's responsibility (see validate_metric).
FiniteMetricSpace from_distance_matrix(std::vector<std::vector<double>> dist,
                                       const std::vector<double>& weights = {});

// k points with d(x_i, x_j) = ell * min(|i-j|, |k-i-j|), indices 1-based.
//
// The verbatim |k-i-j| term is not the usual cyclic distance and in fact
// assigns distance 0 to some distinct pairs (e.g. i=3, j=5, k=8); with
// cyclic_standard the usual min(|i-j|, k-|i-j|) is used instead, which is
// the genuine metric circle.
FiniteMetricSpace metric_circle(std::size_t k, double ell,
                                bool cyclic_standard = false);

// Restriction to a list of indices (repeats allowed; a repeated index
// yields a pair at distance zero).  Weights become uniform over the list.
FiniteMetricSpace subspace(const FiniteMetricSpace& space,
                           const std::vector<std::size_t>& indices);

// Throws std::runtime_error if the distance matrix is not symmetric with a
// zero diagonal, violates the triangle inequality beyond tol, the weights
// do not form a probability vector, or stored coordinates disagree with
// the matrix.
void validate_metric(const FiniteMetricSpace& space, double tol = 1e-9);

} // namespace tda

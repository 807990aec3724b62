#pragma once

#include <utility>
#include <vector>

#include "tda/metric_space.hpp"

namespace tda {

// Relation between the index sets of two spaces; valid when every index on
// both sides appears in some pair.
struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// sup over pairs of pairs in R of |d_X(x,x') - d_Y(y,y')|.
// Throws if R does not cover both spaces.
double distortion(const Correspondence& R, const FiniteMetricSpace& X,
                  const FiniteMetricSpace& Y);

// Exact Gromov-Hausdorff distance, half the minimum distortion over all
// correspondences.  Enumeration-based; enforces |X|, |Y| <= 7.
double gromov_hausdorff_bruteforce(const FiniteMetricSpace& X,
                                   const FiniteMetricSpace& Y);

} // namespace tda

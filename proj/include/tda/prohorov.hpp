#pragma once

#include <vector>

#include "tda/metric_space.hpp"

namespace tda {

// Joint mass matrix between the supports of two measures.
struct FiniteCoupling {
    std::vector<std::vector<double>> mass;
};

// Throws unless row sums match mu1 and column sums match mu2 within tol.
void validate_coupling(const FiniteCoupling& coupling,
                       const std::vector<double>& mu1,
                       const std::vector<double>& mu2, double tol = 1e-9);

// Exact Prohorov distance between two finitely supported measures, given
// the pairwise distances d[i][j] between their supports.
//
// For a candidate eps, feasibility means some coupling puts mass at most
// eps on pairs with d >= eps; equivalently the maximum mass transportable
// along pairs with d < eps (a max-flow value) is at least 1 - eps.  The
// feasibility frontier only moves at the distinct values of d, so the
// infimum is found exactly by scanning those thresholds with an
// incrementally augmented max-flow.
double prohorov_finite(const std::vector<double>& mu1,
                       const std::vector<double>& mu2,
                       const std::vector<std::vector<double>>& d);

} // namespace tda

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tda/metric_space.hpp"

namespace tda {

struct Simplex {
    std::vector<int> vertices;  // strictly increasing
    double value = 0.0;         // scale at which the simplex appears

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

// Simplices sorted by (value, dimension, vertex lex), closed under faces,
// with monotone filtration values, all <= cutoff.
struct FilteredComplex {
    std::vector<Simplex> simplices;
    int max_dim = 0;
    double cutoff = 0.0;
};

// Guard against runaway clique expansion; callers may raise it explicitly.
inline constexpr std::size_t kDefaultSimplexCap = 50'000'000;

// Vietoris-Rips (clique) filtration: vertices at 0, edge {i,j} at d(i,j)
// when <= cutoff, higher simplices at the max of their edge values.
FilteredComplex vietoris_rips(const FiniteMetricSpace& space, int max_dim,
                              double cutoff,
                              std::size_t simplex_cap = kDefaultSimplexCap);

// Weak witness filtration on the landmark vertices: edge {a,b} appears at
// min over witnesses p of max(d(a,p), d(b,p)) when <= cutoff; higher
// simplices by the clique rule on witnessed edges.
FilteredComplex weak_witness(const FiniteMetricSpace& space,
                             const std::vector<std::size_t>& landmark_indices,
                             int max_dim, double cutoff,
                             std::size_t simplex_cap = kDefaultSimplexCap);

// Sorted deduplicated pairwise distances of the space.
std::vector<double> critical_values(const FiniteMetricSpace& space);

// Throws if face closure, monotonicity, the cutoff bound, or the sort
// order is violated.
void validate_complex(const FilteredComplex& complex);

// One line per simplex, "v0 v1 ... : value", for differential testing.
std::string dump_complex(const FilteredComplex& complex);

} // namespace tda

#pragma once

#include "tda/barcode.hpp"

namespace tda {

// Exact bottleneck distance: binary search over the finite candidate set
// {d_inf(I,J)} u {len/2}, feasibility by maximum bipartite matching where
// intervals may also match the diagonal at half their length.
double bottleneck_distance(const Barcode& b1, const Barcode& b2);

// Exhaustive enumeration over all matchings; testing oracle, enforces
// |b1| + |b2| <= 8.
double bottleneck_bruteforce(const Barcode& b1, const Barcode& b2);

} // namespace tda

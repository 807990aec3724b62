#pragma once

#include "tda/barcode.hpp"
#include "tda/filtration.hpp"

namespace tda {

struct PersistenceOptions {
    bool reduced_h0 = false;  // drop the one infinite component bar in H0
    bool clearing = true;     // twist optimization; output identical either way
};

// Degree-k barcode over the two-element field by boundary-matrix column
// reduction.  Classes alive at the cutoff are truncated to death = cutoff;
// zero-length intervals are dropped.  Requires complex.max_dim >= k + 1 so
// death times in degree k are reliable.
Barcode compute_barcode(const FilteredComplex& complex, int k,
                        PersistenceOptions options = {});

} // namespace tda

#include "tda/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tda {

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 14695981039346656037ULL;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL;
            h *= 1099511628211ULL;
        }
        return h;
    }
};

using Column = std::vector<int>;  // sorted row indices, F2 coefficients

void add_column(Column& target, const Column& other) {
    Column merged;
    merged.reserve(target.size() + other.size());
    std::set_symmetric_difference(target.begin(), target.end(), other.begin(),
                                  other.end(), std::back_inserter(merged));
    target = std::move(merged);
}

// Boundary columns of the simplices in `cofaces`, with rows the positions
// of their facets within `faces` (both in filtration order).
std::vector<Column> boundary_columns(const std::vector<const Simplex*>& faces,
                                     const std::vector<const Simplex*>& cofaces) {
    std::unordered_map<std::vector<int>, int, VectorHash> row_of;
    row_of.reserve(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i)
        row_of.emplace(faces[i]->vertices, static_cast<int>(i));

    std::vector<Column> columns(cofaces.size());
    std::vector<int> facet;
    for (std::size_t j = 0; j < cofaces.size(); ++j) {
        const auto& verts = cofaces[j]->vertices;
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            facet.clear();
            for (std::size_t v = 0; v < verts.size(); ++v)
                if (v != drop) facet.push_back(verts[v]);
            const auto it = row_of.find(facet);
            if (it == row_of.end())
                throw std::runtime_error("complex not closed under faces");
            columns[j].push_back(it->second);
        }
        std::sort(columns[j].begin(), columns[j].end());
    }
    return columns;
}

// Standard left-to-right reduction.  Returns, per column, the pivot row or
// -1 when the column reduced to zero.
std::vector<int> reduce(std::vector<Column>& columns) {
    std::vector<int> pivots(columns.size(), -1);
    std::unordered_map<int, int> owner;  // pivot row -> column index
    owner.reserve(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        Column& col = columns[j];
        while (!col.empty()) {
            const int pivot = col.back();
            const auto it = owner.find(pivot);
            if (it == owner.end()) break;
            add_column(col, columns[it->second]);
        }
        if (!col.empty()) {
            pivots[j] = col.back();
            owner.emplace(col.back(), static_cast<int>(j));
        }
    }
    return pivots;
}

} // namespace

Barcode compute_barcode(const FilteredComplex& complex, int k,
                        PersistenceOptions options) {
    if (complex.simplices.empty()) throw std::invalid_argument("empty complex");
    if (k < 0) throw std::invalid_argument("homology degree must be >= 0");
    if (complex.max_dim < k + 1)
        throw std::invalid_argument(
            "complex.max_dim must be at least k + 1 for reliable death times");

    std::vector<const Simplex*> faces, cofaces, subfaces;
    for (const auto& s : complex.simplices) {
        if (s.dim() == k) faces.push_back(&s);
        else if (s.dim() == k + 1) cofaces.push_back(&s);
        else if (s.dim() == k - 1) subfaces.push_back(&s);
    }
    if (faces.empty()) return Barcode{};

    // Pair (k+1)-simplices against k-simplices first; with clearing, the
    // paired k-simplices are known cycle-creators and their own boundary
    // columns need not be reduced.
    auto coface_cols = boundary_columns(faces, cofaces);
    const auto coface_pivots = reduce(coface_cols);

    std::vector<bool> killed(faces.size(), false);
    std::vector<double> death(faces.size(), complex.cutoff);
    for (std::size_t j = 0; j < cofaces.size(); ++j) {
        if (coface_pivots[j] < 0) continue;
        killed[coface_pivots[j]] = true;
        death[coface_pivots[j]] = cofaces[j]->value;
    }

    // Which k-simplices create cycles: those whose own boundary vanishes
    // after reduction.  Every vertex does in degree 0.
    std::vector<bool> positive(faces.size(), k == 0);
    if (k > 0) {
        std::vector<Column> face_cols = boundary_columns(subfaces, faces);
        if (options.clearing) {
            for (std::size_t i = 0; i < faces.size(); ++i)
                if (killed[i]) face_cols[i].clear();
        }
        const auto face_pivots = reduce(face_cols);
        for (std::size_t i = 0; i < faces.size(); ++i)
            positive[i] = killed[i] || face_pivots[i] < 0;
    }

    std::vector<Interval> bars;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (!positive[i]) continue;
        const double birth = faces[i]->value;
        if (birth < death[i]) bars.push_back({birth, death[i]});
    }
    Barcode barcode(std::move(bars));

    if (options.reduced_h0 && k == 0 && !barcode.empty()) {
        // the single infinite component bar: earliest birth, death at cutoff
        auto& bars_ref = barcode.intervals;
        for (auto it = bars_ref.begin(); it != bars_ref.end(); ++it) {
            if (it->death == complex.cutoff) {
                bars_ref.erase(it);
                break;
            }
        }
    }
    return barcode;
}

} // namespace tda

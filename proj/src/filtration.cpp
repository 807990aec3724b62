#include "tda/filtration.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tda {

namespace {

constexpr double kNoEdge = std::numeric_limits<double>::infinity();

// Clique (flag) expansion over an edge-value matrix: a simplex appears at
// the max of its edge values.  Enumeration goes by increasing last vertex
// so each clique is produced exactly once.
FilteredComplex clique_expand(const std::vector<std::vector<double>>& edge,
                              int max_dim, double cutoff, std::size_t simplex_cap) {
    const int n = static_cast<int>(edge.size());
    FilteredComplex complex;
    complex.max_dim = max_dim;
    complex.cutoff = cutoff;

    auto emit = [&](std::vector<int> verts, double value) {
        if (complex.simplices.size() >= simplex_cap)
            throw std::runtime_error("simplex cap exceeded (" +
                                     std::to_string(simplex_cap) +
                                     "); raise the cap or lower cutoff/max_dim");
        complex.simplices.push_back({std::move(verts), value});
    };

    std::vector<std::vector<int>> nb(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge[i][j] <= cutoff) nb[i].push_back(j);

    std::vector<int> verts;
    // depth-first over cliques; cands holds vertices > back() adjacent to all
    auto expand = [&](auto&& self, double value, const std::vector<int>& cands) -> void {
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const int u = cands[c];
            double v = value;
            for (int w : verts) v = std::max(v, edge[w][u]);
            verts.push_back(u);
            emit(verts, v);
            if (static_cast<int>(verts.size()) <= max_dim) {
                std::vector<int> next;
                for (std::size_t c2 = c + 1; c2 < cands.size(); ++c2)
                    if (edge[u][cands[c2]] <= cutoff) next.push_back(cands[c2]);
                self(self, v, next);
            }
            verts.pop_back();
        }
    };

    for (int i = 0; i < n; ++i) {
        emit({i}, 0.0);
        if (max_dim >= 1) {
            verts.assign(1, i);
            expand(expand, 0.0, nb[i]);
            verts.clear();
        }
    }

    std::sort(complex.simplices.begin(), complex.simplices.end(),
              [](const Simplex& a, const Simplex& b) {
                  if (a.value != b.value) return a.value < b.value;
                  if (a.vertices.size() != b.vertices.size())
                      return a.vertices.size() < b.vertices.size();
                  return a.vertices < b.vertices;
              });
    return complex;
}

} // namespace

FilteredComplex vietoris_rips(const FiniteMetricSpace& space, int max_dim,
                              double cutoff, std::size_t simplex_cap) {
    if (max_dim < 0) throw std::invalid_argument("max_dim must be >= 0");
    if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
    return clique_expand(space.dist, max_dim, cutoff, simplex_cap);
}

FilteredComplex weak_witness(const FiniteMetricSpace& space,
                             const std::vector<std::size_t>& landmark_indices,
                             int max_dim, double cutoff, std::size_t simplex_cap) {
    if (max_dim < 0) throw std::invalid_argument("max_dim must be >= 0");
    if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
    if (landmark_indices.empty()) throw std::invalid_argument("empty landmark set");
    std::vector<bool> seen(space.size(), false);
    for (std::size_t l : landmark_indices) {
        if (l >= space.size()) throw std::invalid_argument("landmark index out of range");
        if (seen[l]) throw std::invalid_argument("duplicate landmark index");
        seen[l] = true;
    }

    const std::size_t m = landmark_indices.size();
    std::vector<std::vector<double>> edge(m, std::vector<double>(m, kNoEdge));
    for (std::size_t a = 0; a < m; ++a) {
        edge[a][a] = 0.0;
        for (std::size_t b = a + 1; b < m; ++b) {
            double best = kNoEdge;
            for (std::size_t p = 0; p < space.size(); ++p)
                best = std::min(best, std::max(space.dist[landmark_indices[a]][p],
                                               space.dist[landmark_indices[b]][p]));
            edge[a][b] = best;
            edge[b][a] = best;
        }
    }
    return clique_expand(edge, max_dim, cutoff, simplex_cap);
}

std::vector<double> critical_values(const FiniteMetricSpace& space) {
    std::vector<double> values;
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = i + 1; j < space.size(); ++j)
            values.push_back(space.dist[i][j]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void validate_complex(const FilteredComplex& complex) {
    struct Less {
        bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
            return a < b;
        }
    };
    std::vector<std::pair<std::vector<int>, double>> index;
    index.reserve(complex.simplices.size());
    for (const auto& s : complex.simplices) {
        if (s.value < 0.0 || s.value > complex.cutoff)
            throw std::runtime_error("filtration value outside [0, cutoff]");
        if (!std::is_sorted(s.vertices.begin(), s.vertices.end()) ||
            std::adjacent_find(s.vertices.begin(), s.vertices.end()) != s.vertices.end())
            throw std::runtime_error("simplex vertices not strictly increasing");
        if (s.dim() > complex.max_dim) throw std::runtime_error("dimension above max_dim");
        index.emplace_back(s.vertices, s.value);
    }
    std::sort(index.begin(), index.end());
    auto lookup = [&](const std::vector<int>& verts) -> const double* {
        auto it = std::lower_bound(index.begin(), index.end(),
                                   std::make_pair(verts, -1.0));
        if (it == index.end() || it->first != verts) return nullptr;
        return &it->second;
    };
    for (const auto& s : complex.simplices) {
        if (s.dim() == 0) continue;
        for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
            std::vector<int> face;
            for (std::size_t v = 0; v < s.vertices.size(); ++v)
                if (v != drop) face.push_back(s.vertices[v]);
            const double* fv = lookup(face);
            if (!fv) throw std::runtime_error("complex not closed under faces");
            if (*fv > s.value) throw std::runtime_error("face value above coface value");
        }
    }
    for (std::size_t i = 1; i < complex.simplices.size(); ++i) {
        const auto& a = complex.simplices[i - 1];
        const auto& b = complex.simplices[i];
        const auto key = [](const Simplex& s) {
            return std::make_tuple(s.value, s.vertices.size(), s.vertices);
        };
        if (key(b) < key(a)) throw std::runtime_error("simplices out of order");
    }
}

std::string dump_complex(const FilteredComplex& complex) {
    std::ostringstream out;
    for (const auto& s : complex.simplices) {
        for (std::size_t v = 0; v < s.vertices.size(); ++v) {
            if (v) out << ' ';
            out << s.vertices[v];
        }
        out << " : " << s.value << '\n';
    }
    return out.str();
}

} // namespace tda

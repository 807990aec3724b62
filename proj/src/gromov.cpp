#include "tda/gromov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tda {

double distortion(const Correspondence& R, const FiniteMetricSpace& X,
                  const FiniteMetricSpace& Y) {
    std::vector<bool> coveredX(X.size(), false), coveredY(Y.size(), false);
    for (const auto& [i, j] : R.pairs) {
        if (i >= X.size() || j >= Y.size())
            throw std::invalid_argument("correspondence index out of range");
        coveredX[i] = true;
        coveredY[j] = true;
    }
    if (std::find(coveredX.begin(), coveredX.end(), false) != coveredX.end() ||
        std::find(coveredY.begin(), coveredY.end(), false) != coveredY.end())
        throw std::invalid_argument("relation does not cover both spaces");

    double dis = 0.0;
    for (const auto& [i, j] : R.pairs)
        for (const auto& [i2, j2] : R.pairs)
            dis = std::max(dis, std::abs(X.dist[i][i2] - Y.dist[j][j2]));
    return dis;
}

namespace {

// Any distortion-minimizing correspondence contains the union of the
// graphs of a map X -> Y and a map Y -> X, and such a union is itself a
// correspondence, so it suffices to search over those unions.  The search
// tests feasibility at a fixed distortion threshold t by depth-first
// assignment with pairwise pruning.
struct GhSearch {
    const FiniteMetricSpace& X;
    const FiniteMetricSpace& Y;
    double t;
    // assigned pairs (x index, y index) so far
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    bool compatible(std::size_t i, std::size_t j) const {
        for (const auto& [i2, j2] : pairs) {
            if (std::abs(X.dist[i][i2] - Y.dist[j][j2]) > t) return false;
        }
        return true;
    }

    bool assign_forward(std::size_t i) {
        if (i == X.size()) return assign_backward(0);
        for (std::size_t j = 0; j < Y.size(); ++j) {
            if (!compatible(i, j)) continue;
            pairs.emplace_back(i, j);
            if (assign_forward(i + 1)) return true;
            pairs.pop_back();
        }
        return false;
    }

    bool assign_backward(std::size_t j) {
        if (j == Y.size()) return true;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (!compatible(i, j)) continue;
            pairs.emplace_back(i, j);
            if (assign_backward(j + 1)) return true;
            pairs.pop_back();
        }
        return false;
    }

    bool feasible() {
        pairs.clear();
        return assign_forward(0);
    }
};

} // namespace

double gromov_hausdorff_bruteforce(const FiniteMetricSpace& X,
                                   const FiniteMetricSpace& Y) {
    if (X.size() > 7 || Y.size() > 7)
        throw std::invalid_argument("gromov_hausdorff_bruteforce limited to 7 points");

    // The minimum distortion is one of the values |d_X(i,i') - d_Y(j,j')|.
    std::vector<double> candidates;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t i2 = 0; i2 < X.size(); ++i2)
            for (std::size_t j = 0; j < Y.size(); ++j)
                for (std::size_t j2 = 0; j2 < Y.size(); ++j2)
                    candidates.push_back(std::abs(X.dist[i][i2] - Y.dist[j][j2]));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    GhSearch search{X, Y, candidates[hi], {}};
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        search.t = candidates[mid];
        if (search.feasible())
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo] / 2.0;
}

} // namespace tda

#include "tda/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tda {

namespace {

double d_inf(const Interval& a, const Interval& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

// Perfect-matching feasibility at threshold t on the augmented graph where
// each interval may match a partner (d_inf <= t) or a diagonal slot
// (len/2 <= t) and diagonal slots match each other freely.
class Feasibility {
public:
    Feasibility(const Barcode& b1, const Barcode& b2)
        : b1_(b1.intervals), b2_(b2.intervals) {}

    bool feasible(double t) const {
        const int n1 = static_cast<int>(b1_.size());
        const int n2 = static_cast<int>(b2_.size());
        const int left = n1 + n2;   // intervals of b1, then diagonal slots
        const int right = n2 + n1;  // intervals of b2, then diagonal slots
        std::vector<std::vector<int>> adj(left);
        for (int i = 0; i < n1; ++i) {
            for (int j = 0; j < n2; ++j)
                if (d_inf(b1_[i], b2_[j]) <= t) adj[i].push_back(j);
            if (b1_[i].length() / 2.0 <= t) adj[i].push_back(n2 + i);
        }
        for (int j = 0; j < n2; ++j) {
            if (b2_[j].length() / 2.0 <= t) adj[n1 + j].push_back(j);
            for (int i = 0; i < n1; ++i) adj[n1 + j].push_back(n2 + i);
        }
        std::vector<int> match(right, -1);
        std::vector<bool> visited(right);
        int matched = 0;
        for (int u = 0; u < left; ++u) {
            std::fill(visited.begin(), visited.end(), false);
            if (try_kuhn(u, adj, match, visited)) ++matched;
        }
        return matched == left;
    }

private:
    static bool try_kuhn(int u, const std::vector<std::vector<int>>& adj,
                         std::vector<int>& match, std::vector<bool>& visited) {
        for (int v : adj[u]) {
            if (visited[v]) continue;
            visited[v] = true;
            if (match[v] < 0 || try_kuhn(match[v], adj, match, visited)) {
                match[v] = u;
                return true;
            }
        }
        return false;
    }

    const std::vector<Interval>& b1_;
    const std::vector<Interval>& b2_;
};

} // namespace

double bottleneck_distance(const Barcode& b1, const Barcode& b2) {
    if (b1.empty() && b2.empty()) return 0.0;
    std::vector<double> candidates{0.0};
    for (const auto& a : b1.intervals) {
        candidates.push_back(a.length() / 2.0);
        for (const auto& b : b2.intervals) candidates.push_back(d_inf(a, b));
    }
    for (const auto& b : b2.intervals) candidates.push_back(b.length() / 2.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    const Feasibility check(b1, b2);
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (check.feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

namespace {

double bruteforce_rec(const std::vector<Interval>& a, const std::vector<Interval>& b,
                      std::size_t i, std::vector<bool>& used, double current) {
    if (i == a.size()) {
        double cost = current;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j]) cost = std::max(cost, b[j].length() / 2.0);
        return cost;
    }
    // match a[i] to the diagonal
    double best = bruteforce_rec(a, b, i + 1, used,
                                 std::max(current, a[i].length() / 2.0));
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        best = std::min(best, bruteforce_rec(a, b, i + 1, used,
                                             std::max(current, d_inf(a[i], b[j]))));
        used[j] = false;
    }
    return best;
}

} // namespace

double bottleneck_bruteforce(const Barcode& b1, const Barcode& b2) {
    if (b1.size() + b2.size() > 8)
        throw std::invalid_argument("bottleneck_bruteforce limited to 8 intervals");
    std::vector<bool> used(b2.size(), false);
    return bruteforce_rec(b1.intervals, b2.intervals, 0, used, 0.0);
}

} // namespace tda

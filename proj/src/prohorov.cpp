#include "tda/prohorov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace tda {

namespace {

constexpr double kFlowEps = 1e-13;

// Dinic max-flow with double capacities; edges can be added between runs
// and the flow re-augmented from the current state.
class Dinic {
public:
    explicit Dinic(int n) : head_(n, -1), level_(n), iter_(n) {}

    void add_edge(int from, int to, double cap) {
        edges_.push_back({to, head_[from], cap});
        head_[from] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({from, head_[to], 0.0});
        head_[to] = static_cast<int>(edges_.size()) - 1;
    }

    double augment(int s, int t) {
        double added = 0.0;
        while (bfs(s, t)) {
            std::fill(iter_.begin(), iter_.end(), -2);
            double f;
            while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > kFlowEps)
                added += f;
        }
        return added;
    }

private:
    struct Edge {
        int to;
        int next;
        double cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e = head_[v]; e != -1; e = edges_[e].next) {
                if (edges_[e].cap > kFlowEps && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[v] + 1;
                    q.push(edges_[e].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(int v, int t, double f) {
        if (v == t) return f;
        if (iter_[v] == -2) iter_[v] = head_[v];
        for (int& e = iter_[v]; e != -1; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap > kFlowEps && level_[v] < level_[ed.to]) {
                const double d = dfs(ed.to, t, std::min(f, ed.cap));
                if (d > kFlowEps) {
                    ed.cap -= d;
                    edges_[e ^ 1].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_, level_, iter_;
};

} // namespace

void validate_coupling(const FiniteCoupling& coupling,
                       const std::vector<double>& mu1,
                       const std::vector<double>& mu2, double tol) {
    if (coupling.mass.size() != mu1.size())
        throw std::invalid_argument("coupling row count mismatch");
    std::vector<double> col(mu2.size(), 0.0);
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        if (coupling.mass[i].size() != mu2.size())
            throw std::invalid_argument("coupling column count mismatch");
        double row = 0.0;
        for (std::size_t j = 0; j < mu2.size(); ++j) {
            if (coupling.mass[i][j] < -tol)
                throw std::invalid_argument("negative coupling mass");
            row += coupling.mass[i][j];
            col[j] += coupling.mass[i][j];
        }
        if (std::abs(row - mu1[i]) > tol)
            throw std::invalid_argument("coupling row sum mismatch");
    }
    for (std::size_t j = 0; j < mu2.size(); ++j)
        if (std::abs(col[j] - mu2[j]) > tol)
            throw std::invalid_argument("coupling column sum mismatch");
}

double prohorov_finite(const std::vector<double>& mu1,
                       const std::vector<double>& mu2,
                       const std::vector<std::vector<double>>& d) {
    const std::size_t n1 = mu1.size(), n2 = mu2.size();
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("empty support");
    if (d.size() != n1) throw std::invalid_argument("distance matrix row mismatch");
    double s1 = 0.0, s2 = 0.0;
    for (double w : mu1) s1 += w;
    for (double w : mu2) s2 += w;
    if (std::abs(s1 - 1.0) > 1e-9 || std::abs(s2 - 1.0) > 1e-9)
        throw std::invalid_argument("weights must sum to 1");

    struct Pair {
        double dist;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
        if (d[i].size() != n2) throw std::invalid_argument("distance matrix column mismatch");
        for (std::size_t j = 0; j < n2; ++j) {
            if (d[i][j] < 0.0) throw std::invalid_argument("negative distance");
            pairs.push_back({d[i][j], i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return a.dist < b.dist; });

    const int source = 0;
    const int sink = static_cast<int>(n1 + n2) + 1;
    Dinic flow(static_cast<int>(n1 + n2) + 2);
    for (std::size_t i = 0; i < n1; ++i)
        flow.add_edge(source, static_cast<int>(i) + 1, mu1[i]);
    for (std::size_t j = 0; j < n2; ++j)
        flow.add_edge(static_cast<int>(n1 + j) + 1, sink, mu2[j]);

    // Brackets: for eps in (v_k, v_{k+1}] the usable pairs are {d <= v_k},
    // with max transportable mass M_k; the infimum of feasible eps in the
    // bracket is max(v_k, 1 - M_k).  The empty bracket (0, v_0] uses no
    // pairs and contributes max(0, 1) = 1.
    double best = (pairs.front().dist > 0.0) ? 1.0
                                             : std::numeric_limits<double>::infinity();
    double transported = 0.0;
    std::size_t k = 0;
    while (k < pairs.size()) {
        const double v = pairs[k].dist;
        while (k < pairs.size() && pairs[k].dist == v) {
            flow.add_edge(static_cast<int>(pairs[k].i) + 1,
                          static_cast<int>(n1 + pairs[k].j) + 1,
                          std::numeric_limits<double>::infinity());
            ++k;
        }
        transported += flow.augment(source, sink);
        best = std::min(best, std::max(v, 1.0 - transported));
    }
    return std::max(best, 0.0);
}

} // namespace tda

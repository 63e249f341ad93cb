#include "sttr/network.hpp"

#include <algorithm>
#include <numeric>

namespace sttr {

std::vector<int> Topology::closed_neighborhood(int i) const {
    std::vector<int> out{i};
    const auto& nb = neighbors.at(i);
    out.insert(out.end(), nb.begin(), nb.end());
    return out;
}

Topology nearest_neighbors(std::span<const Vec3> positions, int m) {
    const int n = static_cast<int>(positions.size());
    if (m < 0 || n <= m) throw std::invalid_argument("nearest_neighbors: need n > m >= 0");

    Topology topo;
    topo.n = n;
    topo.m = m;
    topo.neighbors.resize(n);
    std::vector<int> order(n);
    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            dist[j] = (positions[j] - positions[i]).squaredNorm();
        std::iota(order.begin(), order.end(), 0);
        // (distance, index) lexicographic order breaks ties by lower index
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = dist[a], db = dist[b];
            return da != db ? da < db : a < b;
        });
        auto& nb = topo.neighbors[i];
        for (int j : order) {
            if (static_cast<int>(nb.size()) == m) break;
            if (j != i) nb.push_back(j);
        }
    }
    return topo;
}

Topology complete_graph(int n) {
    if (n < 1) throw std::invalid_argument("complete_graph: n must be >= 1");
    Topology topo;
    topo.n = n;
    topo.m = n - 1;
    topo.neighbors.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) topo.neighbors[i].push_back(j);
    return topo;
}

}  // namespace sttr

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sttr/types.hpp"

namespace sttr {

/// Directed communication graph for one time step: neighbors[i] lists the
/// observers whose packets observer i receives (never i itself).
struct Topology {
    int n = 0;
    int m = 0;
    std::vector<std::vector<int>> neighbors;

    /// Observer i followed by its neighbors.
    std::vector<int> closed_neighborhood(int i) const;
};

/// For every observer, the m closest others by Euclidean distance; ties go to
/// the lower index. Throws std::invalid_argument unless n > m >= 0.
Topology nearest_neighbors(std::span<const Vec3> positions, int m);

/// Every observer hears every other observer.
Topology complete_graph(int n);

class MissingPacketError : public std::runtime_error {
public:
    explicit MissingPacketError(int observer)
        : std::runtime_error("exchange_round: no packet from observer " + std::to_string(observer)),
          observer_(observer) {}
    int observer() const noexcept { return observer_; }

private:
    int observer_;
};

/// Synchronous delivery: all packets for the step are in `packets` (one per
/// observer, any order) before any inbox is built. inbox[i] holds copies of
/// the packets of N_i in neighbor-list order. `Packet` needs an int
/// `sender_id` member.
template <class Packet>
std::vector<std::vector<Packet>> exchange_round(const Topology& topology, std::span<const Packet> packets) {
    std::vector<const Packet*> by_sender(topology.n, nullptr);
    for (const Packet& p : packets) {
        if (p.sender_id < 0 || p.sender_id >= topology.n)
            throw std::invalid_argument("exchange_round: sender id out of range");
        by_sender[p.sender_id] = &p;
    }
    for (int i = 0; i < topology.n; ++i)
        if (by_sender[i] == nullptr) throw MissingPacketError(i);

    std::vector<std::vector<Packet>> inbox(topology.n);
    for (int i = 0; i < topology.n; ++i) {
        auto& box = inbox[i];
        box.reserve(topology.neighbors[i].size());
        for (int j : topology.neighbors[i]) box.push_back(*by_sender[j]);
    }
    return inbox;
}

}  // namespace sttr

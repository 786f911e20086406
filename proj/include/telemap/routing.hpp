// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "telemap/channel.hpp"
#include "telemap/circuit.hpp"
#include "telemap/cost_model.hpp"
#include "telemap/coupling_map.hpp"
#include "telemap/error.hpp"
#include "telemap/lowering.hpp"

namespace telemap {

/// Dynamic logical-to-physical mapping plus the live channel set.
/// Physical qubits are partitioned into data positions, channel halves,
/// and free ancillas.
struct MappingState {
    static constexpr int kFree = -1;
    static constexpr int kChannelHalf = -2;

    std::vector<int> placement; // logical -> physical
    std::vector<int> occupant;  // physical -> logical, kFree or kChannelHalf
    std::vector<Channel> channels;

    [[nodiscard]] int logical_count() const {
        return static_cast<int>(placement.size());
    }

    [[nodiscard]] int physical_count() const {
        return static_cast<int>(occupant.size());
    }

    [[nodiscard]] bool holds_data(int physical) const {
        return occupant[static_cast<std::size_t>(physical)] >= 0;
    }

    [[nodiscard]] int channel_at(int physical) const {
        for (std::size_t i = 0; i < channels.size(); ++i) {
            if (channels[i].has_endpoint(physical)) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    /// Checks the data/channel/free partition; throws Error on violation.
    void validate() const {
        if (static_cast<int>(channels.size()) >
            (physical_count() - logical_count()) / 2) {
            throw Error("more channels than spare qubit pairs");
        }
        std::vector<int> seen(occupant.size(), 0);
        for (std::size_t l = 0; l < placement.size(); ++l) {
            int p = placement[l];
            if (p < 0 || p >= physical_count() ||
                occupant[static_cast<std::size_t>(p)] != static_cast<int>(l)) {
                throw Error("placement of q" + std::to_string(l) +
                            " disagrees with occupancy");
            }
            ++seen[static_cast<std::size_t>(p)];
        }
        for (const Channel& c : channels) {
            if (c.endpoint_a == c.endpoint_b) {
                throw Error("channel with coincident endpoints");
            }
            for (int e : {c.endpoint_a, c.endpoint_b}) {
                if (occupant[static_cast<std::size_t>(e)] != kChannelHalf) {
                    throw Error("channel endpoint not marked as ancilla");
                }
                ++seen[static_cast<std::size_t>(e)];
            }
        }
        for (std::size_t p = 0; p < occupant.size(); ++p) {
            int expected = occupant[p] == kFree ? 0 : 1;
            if (seen[p] != expected) {
                throw Error("physical qubit " + std::to_string(p) +
                            " claimed " + std::to_string(seen[p]) + " times");
            }
        }
    }
};

/// Exchanges the contents of a physical edge, whether data, channel
/// half, or free; channel endpoint coordinates follow the states.
inline MappingState apply_swap(const MappingState& state,
                               const CouplingMap& map, int a, int b) {
    if (!map.has_edge(a, b)) {
        throw Error("swap on non-edge (" + std::to_string(a) + "," +
                    std::to_string(b) + ")");
    }
    MappingState next = state;
    for (Channel& c : next.channels) {
        for (int* e : {&c.endpoint_a, &c.endpoint_b}) {
            if (*e == a) {
                *e = b;
            } else if (*e == b) {
                *e = a;
            }
        }
    }
    std::swap(next.occupant[static_cast<std::size_t>(a)],
              next.occupant[static_cast<std::size_t>(b)]);
    for (int p : {a, b}) {
        int occ = next.occupant[static_cast<std::size_t>(p)];
        if (occ >= 0) {
            next.placement[static_cast<std::size_t>(occ)] = p;
        }
    }
    return next;
}

/// Teleports the data at `source` to the far endpoint of the channel
/// whose near endpoint is adjacent to `source`. The consumed pair is
/// immediately re-established on (source, e_near).
inline MappingState apply_teleport(const MappingState& state,
                                   const CouplingMap& map, int source,
                                   int e_near, int e_far) {
    int ci = state.channel_at(e_near);
    if (ci < 0 || !state.channels[static_cast<std::size_t>(ci)].has_endpoint(e_far) ||
        ci != state.channel_at(e_far)) {
        throw Error("no channel on (" + std::to_string(e_near) + "," +
                    std::to_string(e_far) + ")");
    }
    if (!state.channels[static_cast<std::size_t>(ci)].established()) {
        throw Error("channel is consumed and not re-established");
    }
    if (!map.has_edge(source, e_near)) {
        throw Error("teleport source " + std::to_string(source) +
                    " not adjacent to endpoint " + std::to_string(e_near));
    }
    if (!state.holds_data(source)) {
        throw Error("teleport source " + std::to_string(source) +
                    " holds no data");
    }
    MappingState next = state;
    int logical = next.occupant[static_cast<std::size_t>(source)];
    next.placement[static_cast<std::size_t>(logical)] = e_far;
    next.occupant[static_cast<std::size_t>(e_far)] = logical;
    next.occupant[static_cast<std::size_t>(source)] = MappingState::kChannelHalf;

    Channel& ch = next.channels[static_cast<std::size_t>(ci)];
    int far_identity =
        ch.endpoint_a == e_far ? ch.ancilla_a : ch.ancilla_b;
    int near_identity =
        ch.endpoint_a == e_near ? ch.ancilla_a : ch.ancilla_b;
    ch.endpoint_a = source;
    ch.endpoint_b = e_near;
    ch.ancilla_a = far_identity;
    ch.ancilla_b = near_identity;
    ch.status = ChannelStatus::Established;
    return next;
}

inline MappingState apply_move(const MappingState& state,
                               const CouplingMap& map, const Move& move) {
    if (move.kind == MoveKind::Swap) {
        return apply_swap(state, map, move.a, move.b);
    }
    return apply_teleport(state, map, move.a, move.via, move.b);
}

// ---------------------------------------------------------------------------
// Initial mapping

/// Samples a placement satisfying the first layer's CNOTs: each
/// first-layer CNOT pair goes onto a random free edge, remaining logical
/// qubits onto random free positions. Leftover free qubits are paired
/// into channels on lexicographically smallest edges, up to
/// floor((m - n) / 2) pairs.
inline MappingState initial_mapping(const std::vector<Layer>& layers,
                                    const Circuit& circuit,
                                    const CouplingMap& map, std::uint64_t seed,
                                    int max_attempts = 10000) {
    const int n = circuit.qubit_count;
    const int m = map.qubit_count();
    if (n > m) {
        throw PlacementError("circuit needs " + std::to_string(n) +
                             " qubits but the device has " +
                             std::to_string(m));
    }
    std::vector<const Gate*> first_cnots;
    if (!layers.empty()) {
        first_cnots = layer_cnots(circuit, layers.front());
    }

    std::mt19937_64 rng(seed);
    MappingState state;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        state.placement.assign(static_cast<std::size_t>(n), -1);
        state.occupant.assign(static_cast<std::size_t>(m),
                              MappingState::kFree);
        state.channels.clear();

        auto edges = map.edges();
        std::shuffle(edges.begin(), edges.end(), rng);
        bool ok = true;
        for (const Gate* g : first_cnots) {
            auto it = std::find_if(edges.begin(), edges.end(), [&](auto e) {
                return state.occupant[static_cast<std::size_t>(e.first)] ==
                           MappingState::kFree &&
                       state.occupant[static_cast<std::size_t>(e.second)] ==
                           MappingState::kFree;
            });
            if (it == edges.end()) {
                ok = false;
                break;
            }
            int control_pos = it->first;
            int target_pos = it->second;
            if (rng() & 1U) {
                std::swap(control_pos, target_pos);
            }
            state.placement[static_cast<std::size_t>(g->q0)] = control_pos;
            state.placement[static_cast<std::size_t>(g->q1)] = target_pos;
            state.occupant[static_cast<std::size_t>(control_pos)] = g->q0;
            state.occupant[static_cast<std::size_t>(target_pos)] = g->q1;
        }
        if (!ok) {
            continue;
        }
        std::vector<int> free_positions;
        for (int p = 0; p < m; ++p) {
            if (state.occupant[static_cast<std::size_t>(p)] ==
                MappingState::kFree) {
                free_positions.push_back(p);
            }
        }
        std::shuffle(free_positions.begin(), free_positions.end(), rng);
        std::size_t next_free = 0;
        for (int l = 0; l < n; ++l) {
            if (state.placement[static_cast<std::size_t>(l)] < 0) {
                int p = free_positions[next_free++];
                state.placement[static_cast<std::size_t>(l)] = p;
                state.occupant[static_cast<std::size_t>(p)] = l;
            }
        }

        const int max_channels = (m - n) / 2;
        int ancilla_id = 0;
        for (auto [a, b] : map.edges()) {
            if (static_cast<int>(state.channels.size()) >= max_channels) {
                break;
            }
            if (state.occupant[static_cast<std::size_t>(a)] ==
                    MappingState::kFree &&
                state.occupant[static_cast<std::size_t>(b)] ==
                    MappingState::kFree) {
                state.occupant[static_cast<std::size_t>(a)] =
                    MappingState::kChannelHalf;
                state.occupant[static_cast<std::size_t>(b)] =
                    MappingState::kChannelHalf;
                state.channels.push_back({a, b, ChannelStatus::Established,
                                          ancilla_id, ancilla_id + 1});
                ancilla_id += 2;
            }
        }
        return state;
    }
    throw PlacementError("no placement satisfying the first layer found in " +
                         std::to_string(max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Per-layer A* search

struct RouterConfig {
    std::size_t node_budget = 1'000'000;
    double lookahead_weight = 0.5;
    bool lookahead = true;
};

struct RouteLayerResult {
    std::vector<Move> moves;
    MappingState state;
    double cost = 0.0;
    std::size_t expanded = 0;
};

namespace detail {

/// Cheapest point-to-point distance where physical edges cost
/// swap_cost and the channels' virtual edges cost teleport_cost.
/// Lower-bounds the movement cost of bringing one CNOT together.
inline double weighted_distance(const CouplingMap& map,
                                const std::vector<VirtualEdge>& virt,
                                double swap_cost, double teleport_cost,
                                int from, int to) {
    if (from == to) {
        return 0.0;
    }
    const auto m = static_cast<std::size_t>(map.qubit_count());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(m, kInf);
    std::vector<char> done(m, 0);
    dist[static_cast<std::size_t>(from)] = 0.0;
    for (;;) {
        int best = -1;
        double best_d = kInf;
        for (std::size_t v = 0; v < m; ++v) {
            if (!done[v] && dist[v] < best_d) {
                best_d = dist[v];
                best = static_cast<int>(v);
            }
        }
        if (best < 0 || best == to) {
            break;
        }
        done[static_cast<std::size_t>(best)] = 1;
        for (int nbr : map.neighbors(best)) {
            double d = best_d + swap_cost;
            if (d < dist[static_cast<std::size_t>(nbr)]) {
                dist[static_cast<std::size_t>(nbr)] = d;
            }
        }
        for (const VirtualEdge& e : virt) {
            int other = -1;
            if (e.source == best) {
                other = e.destination;
            } else if (e.destination == best) {
                other = e.source;
            } else {
                continue;
            }
            double d = best_d + teleport_cost;
            if (d < dist[static_cast<std::size_t>(other)]) {
                dist[static_cast<std::size_t>(other)] = d;
            }
        }
    }
    return dist[static_cast<std::size_t>(to)];
}

struct SearchNode {
    MappingState state;
    std::vector<Move> moves;
    double g = 0.0;
    double h = 0.0;
    int teleports = 0;
};

inline double pair_cost_bound(const CouplingMap& map,
                              const std::vector<VirtualEdge>& virt,
                              const CostModel& cost, int pos_a, int pos_b) {
    if (virt.empty()) { // pure swap metric: hops * swap_cost
        return std::max(0.0, cost.swap_cost() *
                                 (map.distance(pos_a, pos_b) - 1));
    }
    double d = weighted_distance(map, virt, cost.swap_cost(),
                                 cost.teleport_cost(), pos_a, pos_b);
    return std::max(0.0, d - cost.swap_cost());
}

/// Orders nodes by f, then fewer teleports, then the lexicographically
/// smallest move sequence. Total and deterministic.
inline bool search_node_after(const SearchNode& x, const SearchNode& y) {
    double fx = x.g + x.h;
    double fy = y.g + y.h;
    if (fx != fy) {
        return fx > fy;
    }
    if (x.teleports != y.teleports) {
        return x.teleports > y.teleports;
    }
    const std::size_t len = std::min(x.moves.size(), y.moves.size());
    for (std::size_t i = 0; i < len; ++i) {
        auto kx = x.moves[i].order_key();
        auto ky = y.moves[i].order_key();
        if (kx != ky) {
            return kx > ky;
        }
    }
    return x.moves.size() > y.moves.size();
}

struct VectorIntHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<std::size_t>(static_cast<unsigned>(x) + 0x9e3779b9U);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

constexpr int kAnonymousData = -3;

/// Canonical dedup key: per physical qubit, the logical occupant, the
/// free marker, or (n + partner position) for channel halves. Logical
/// qubits outside `relevant` collapse to one anonymous marker: states
/// differing only by a relabeling of such qubits reach the layer goal
/// at identical cost.
inline std::vector<int> state_signature(const MappingState& state,
                                        const std::vector<char>& relevant) {
    std::vector<int> sig(state.occupant.begin(), state.occupant.end());
    const int n = state.logical_count();
    for (int& entry : sig) {
        if (entry >= 0 && !relevant[static_cast<std::size_t>(entry)]) {
            entry = kAnonymousData;
        }
    }
    for (const Channel& c : state.channels) {
        sig[static_cast<std::size_t>(c.endpoint_a)] = n + c.endpoint_b;
        sig[static_cast<std::size_t>(c.endpoint_b)] = n + c.endpoint_a;
    }
    return sig;
}

} // namespace detail

/// Admissible lower bound on the cost of making every CNOT of the layer
/// simultaneously adjacent: the largest per-CNOT weighted distance, less
/// one swap, over the coupling graph augmented with the state's virtual
/// edges.
inline double layer_cost_bound(const MappingState& state, const Layer& layer,
                               const Circuit& circuit, const CouplingMap& map,
                               const CostModel& cost, bool teleport_enabled) {
    std::vector<VirtualEdge> virt;
    if (teleport_enabled) {
        virt = virtual_edges(map, state.channels);
    }
    double bound = 0.0;
    for (const Gate* g : layer_cnots(circuit, layer)) {
        bound = std::max(
            bound,
            detail::pair_cost_bound(
                map, virt, cost,
                state.placement[static_cast<std::size_t>(g->q0)],
                state.placement[static_cast<std::size_t>(g->q1)]));
    }
    return bound;
}

/// Finds a cheapest move sequence making every CNOT of the layer
/// adjacent, by A* over swaps (and teleports when enabled). The
/// heuristic without lookahead is admissible, so the returned cost is
/// optimal over the move alphabet; lookahead layers bias the search
/// toward placements that help upcoming gates.
inline RouteLayerResult route_layer(const MappingState& state,
                                    const Layer& layer,
                                    const std::vector<Layer>& lookahead_layers,
                                    const Circuit& circuit,
                                    const CouplingMap& map,
                                    const CostModel& cost,
                                    bool teleport_enabled,
                                    const RouterConfig& config = {}) {
    auto cnots = layer_cnots(circuit, layer);
    std::vector<const Gate*> lookahead_cnots;
    for (const Layer& la : lookahead_layers) {
        lookahead_cnots = layer_cnots(circuit, la);
        if (!lookahead_cnots.empty()) {
            break;
        }
    }

    auto satisfied = [&](const MappingState& s) {
        return std::all_of(cnots.begin(), cnots.end(), [&](const Gate* g) {
            return map.has_edge(s.placement[static_cast<std::size_t>(g->q0)],
                                s.placement[static_cast<std::size_t>(g->q1)]);
        });
    };

    auto heuristic = [&](const MappingState& s) {
        std::vector<VirtualEdge> virt;
        if (teleport_enabled) {
            virt = virtual_edges(map, s.channels);
        }
        double h = 0.0;
        for (const Gate* g : cnots) {
            h = std::max(h,
                         detail::pair_cost_bound(
                             map, virt, cost,
                             s.placement[static_cast<std::size_t>(g->q0)],
                             s.placement[static_cast<std::size_t>(g->q1)]));
        }
        if (!lookahead_cnots.empty()) {
            double ahead = 0.0;
            for (const Gate* g : lookahead_cnots) {
                ahead += detail::pair_cost_bound(
                    map, virt, cost,
                    s.placement[static_cast<std::size_t>(g->q0)],
                    s.placement[static_cast<std::size_t>(g->q1)]);
            }
            h += config.lookahead_weight * ahead;
        }
        return h;
    };

    RouteLayerResult result;
    if (cnots.empty() || (satisfied(state) && lookahead_cnots.empty())) {
        result.state = state;
        return result;
    }

    // Only the qubits the goal and heuristic inspect keep their identity
    // in the dedup key.
    std::vector<char> relevant(
        static_cast<std::size_t>(circuit.qubit_count), 0);
    for (const Gate* g : cnots) {
        relevant[static_cast<std::size_t>(g->q0)] = 1;
        relevant[static_cast<std::size_t>(g->q1)] = 1;
    }
    for (const Gate* g : lookahead_cnots) {
        relevant[static_cast<std::size_t>(g->q0)] = 1;
        relevant[static_cast<std::size_t>(g->q1)] = 1;
    }

    using detail::SearchNode;
    auto cmp = [](const SearchNode& x, const SearchNode& y) {
        return detail::search_node_after(x, y);
    };
    std::priority_queue<SearchNode, std::vector<SearchNode>, decltype(cmp)>
        open(cmp);
    std::unordered_map<std::vector<int>, double, detail::VectorIntHash> best_g;

    SearchNode start;
    start.state = state;
    start.h = heuristic(state);
    best_g[detail::state_signature(state, relevant)] = 0.0;
    open.push(std::move(start));

    constexpr double kEps = 1e-9;
    std::size_t expanded = 0;
    while (!open.empty()) {
        SearchNode node = open.top();
        open.pop();
        auto node_sig = detail::state_signature(node.state, relevant);
        auto it = best_g.find(node_sig);
        if (it != best_g.end() && node.g > it->second + kEps) {
            continue; // superseded by a cheaper path
        }
        if (satisfied(node.state)) {
            result.moves = node.moves;
            result.state = node.state;
            result.cost = node.g;
            result.expanded = expanded;
            return result;
        }
        if (++expanded > config.node_budget) {
            throw SearchBudgetExceeded(config.node_budget);
        }

        auto relax = [&](const Move& move, MappingState&& child_state) {
            double g = node.g + move_cost(cost, move);
            auto sig = detail::state_signature(child_state, relevant);
            auto found = best_g.find(sig);
            if (found != best_g.end() && g >= found->second - kEps) {
                return;
            }
            best_g[sig] = g;
            SearchNode child;
            child.state = std::move(child_state);
            child.moves = node.moves;
            child.moves.push_back(move);
            child.g = g;
            child.h = heuristic(child.state);
            child.teleports =
                node.teleports + (move.kind == MoveKind::Teleport ? 1 : 0);
            open.push(std::move(child));
        };

        for (auto [a, b] : map.edges()) {
            relax(make_swap(a, b), apply_swap(node.state, map, a, b));
        }
        if (teleport_enabled) {
            for (std::size_t ci = 0; ci < node.state.channels.size(); ++ci) {
                const Channel& ch = node.state.channels[ci];
                if (!ch.established()) {
                    continue;
                }
                for (auto [near, far] :
                     {std::pair{ch.endpoint_a, ch.endpoint_b},
                      std::pair{ch.endpoint_b, ch.endpoint_a}}) {
                    for (int src : map.neighbors(near)) {
                        if (src == far || !node.state.holds_data(src)) {
                            continue;
                        }
                        relax(make_teleport(src, near, far,
                                            static_cast<int>(ci)),
                              apply_teleport(node.state, map, src, near, far));
                    }
                }
            }
        }
        if (best_g.size() > 8 * config.node_budget) {
            throw SearchBudgetExceeded(config.node_budget);
        }
    }
    throw Error("route_layer: search space exhausted without a solution");
}

// ---------------------------------------------------------------------------
// Bridging

/// CNOT chain realizing a long-range CNOT along the lexicographically
/// smallest shortest path, leaving the mapping unchanged. A path with k
/// intermediate qubits costs 3 * 2^k - 2 gates.
inline std::vector<Gate> bridge_path_gates(const std::vector<int>& path) {
    if (path.size() < 2) {
        throw Error("bridge path needs at least two qubits");
    }
    if (path.size() == 2) {
        return {make_cx(path[0], path[1])};
    }
    std::vector<int> prefix(path.begin(), path.end() - 1);
    std::vector<Gate> inner = bridge_path_gates(prefix);
    Gate last = make_cx(path[path.size() - 2], path.back());
    std::vector<Gate> out = inner;
    out.push_back(last);
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back(last);
    return out;
}

inline std::vector<Gate> bridge_plan(const MappingState& state,
                                     const Gate& cnot,
                                     const CouplingMap& map) {
    if (cnot.kind != GateKind::CX) {
        throw Error("bridge_plan expects a CX gate");
    }
    int control = state.placement[static_cast<std::size_t>(cnot.q0)];
    int target = state.placement[static_cast<std::size_t>(cnot.q1)];
    return bridge_path_gates(map.shortest_path(control, target));
}

/// Static mapping for the bridge strategy: logical pairs are placed in
/// order of decreasing interaction count, each qubit onto the free
/// position minimizing its interaction-weighted distance to already
/// placed partners.
inline MappingState bridge_initial_mapping(const Circuit& circuit,
                                           const CouplingMap& map) {
    const int n = circuit.qubit_count;
    const int m = map.qubit_count();
    if (n > m) {
        throw PlacementError("circuit needs " + std::to_string(n) +
                             " qubits but the device has " +
                             std::to_string(m));
    }
    std::vector<std::vector<int>> weight(
        static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (const Gate& g : circuit.gates) {
        if (g.kind == GateKind::CX) {
            ++weight[static_cast<std::size_t>(g.q0)]
                    [static_cast<std::size_t>(g.q1)];
            ++weight[static_cast<std::size_t>(g.q1)]
                    [static_cast<std::size_t>(g.q0)];
        }
    }
    struct Pair {
        int count;
        int a;
        int b;
    };
    std::vector<Pair> pairs;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (weight[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] > 0) {
                pairs.push_back(
                    {weight[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], a, b});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.count != y.count) {
            return x.count > y.count;
        }
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });

    MappingState state;
    state.placement.assign(static_cast<std::size_t>(n), -1);
    state.occupant.assign(static_cast<std::size_t>(m), MappingState::kFree);

    auto place = [&](int logical, int physical) {
        state.placement[static_cast<std::size_t>(logical)] = physical;
        state.occupant[static_cast<std::size_t>(physical)] = logical;
    };
    auto weighted_pos = [&](int logical) {
        int best = -1;
        long long best_score = std::numeric_limits<long long>::max();
        for (int p = 0; p < m; ++p) {
            if (state.occupant[static_cast<std::size_t>(p)] !=
                MappingState::kFree) {
                continue;
            }
            long long score = 0;
            for (int other = 0; other < n; ++other) {
                int w = weight[static_cast<std::size_t>(logical)]
                              [static_cast<std::size_t>(other)];
                int q = state.placement[static_cast<std::size_t>(other)];
                if (w > 0 && q >= 0) {
                    score += static_cast<long long>(w) * map.distance(p, q);
                }
            }
            if (score < best_score) {
                best_score = score;
                best = p;
            }
        }
        return best;
    };

    for (const Pair& pr : pairs) {
        bool a_placed = state.placement[static_cast<std::size_t>(pr.a)] >= 0;
        bool b_placed = state.placement[static_cast<std::size_t>(pr.b)] >= 0;
        if (a_placed && b_placed) {
            continue;
        }
        if (!a_placed && !b_placed) {
            bool done = false;
            for (auto [x, y] : map.edges()) {
                if (state.occupant[static_cast<std::size_t>(x)] ==
                        MappingState::kFree &&
                    state.occupant[static_cast<std::size_t>(y)] ==
                        MappingState::kFree) {
                    place(pr.a, x);
                    place(pr.b, y);
                    done = true;
                    break;
                }
            }
            if (!done) {
                place(pr.a, weighted_pos(pr.a));
                place(pr.b, weighted_pos(pr.b));
            }
        } else if (!a_placed) {
            place(pr.a, weighted_pos(pr.a));
        } else {
            place(pr.b, weighted_pos(pr.b));
        }
    }
    for (int l = 0; l < n; ++l) {
        if (state.placement[static_cast<std::size_t>(l)] < 0) {
            place(l, weighted_pos(l));
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Whole-circuit routing

enum class Strategy { Swap, SwapTeleport, Bridge };

inline const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::Swap: return "swap";
    case Strategy::SwapTeleport: return "swap+teleport";
    case Strategy::Bridge: return "bridge";
    }
    return "?";
}

struct TrialStats {
    std::uint64_t seed = 0;
    int swaps = 0;
    int teleports = 0;
    double cost = 0.0;
    bool timed_out = false;
    double milliseconds = 0.0;
    std::size_t expanded = 0;
};

struct TrialResult {
    RoutedProgram program;
    TrialStats stats;
};

namespace detail {

inline std::string fresh_bit_name(const Circuit& circuit, int& counter) {
    for (;;) {
        std::string name = "c" + std::to_string(counter++);
        if (!circuit.has_creg_named(name)) {
            return name;
        }
    }
}

} // namespace detail

/// Routes one trial from the given initial state, expanding moves into
/// gates as it goes. The returned program still contains every
/// channel-establishment gate; apply eliminate_dead_channels to strip
/// the unused ones.
inline TrialResult route_trial(const Circuit& circuit,
                               const std::vector<Layer>& layers,
                               const CouplingMap& map, const CostModel& cost,
                               Strategy strategy, MappingState state,
                               const RouterConfig& config = {},
                               double timeout_seconds = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialResult result;
    RoutedProgram& prog = result.program;
    prog.circuit.qubit_count = map.qubit_count();
    prog.circuit.qreg_name = "q";
    prog.circuit.cregs = circuit.cregs;
    prog.data_qubit_count = circuit.qubit_count;
    prog.initial_placement = state.placement;

    auto emit = [&](const Gate& g) {
        prog.circuit.gates.push_back(g);
        return static_cast<int>(prog.circuit.gates.size()) - 1;
    };
    for (std::size_t ci = 0; ci < state.channels.size(); ++ci) {
        const Channel& ch = state.channels[ci];
        int lo = std::min(ch.endpoint_a, ch.endpoint_b);
        int hi = std::max(ch.endpoint_a, ch.endpoint_b);
        auto gates = establish_channel(lo, hi);
        int h_idx = emit(gates[0]);
        int cx_idx = emit(gates[1]);
        prog.establishments.push_back({static_cast<int>(ci), h_idx, cx_idx});
    }

    int bit_name_counter = 0;
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };

    for (std::size_t li = 0; li < layers.size(); ++li) {
        if (timeout_seconds > 0 && elapsed() > timeout_seconds) {
            result.stats.timed_out = true;
            break;
        }
        const Layer& layer = layers[li];
        if (strategy != Strategy::Bridge) {
            std::vector<Layer> lookahead;
            if (config.lookahead) {
                for (std::size_t lj = li + 1; lj < layers.size(); ++lj) {
                    if (!layer_cnots(circuit, layers[lj]).empty()) {
                        lookahead.push_back(layers[lj]);
                        break;
                    }
                }
            }
            RouteLayerResult routed = route_layer(
                state, layer, lookahead, circuit, map, cost,
                strategy == Strategy::SwapTeleport, config);
            result.stats.expanded += routed.expanded;
            for (const Move& move : routed.moves) {
                if (move.kind == MoveKind::Swap) {
                    for (const Gate& g : lower_swap(move.a, move.b)) {
                        emit(g);
                    }
                    ++result.stats.swaps;
                } else {
                    std::string n0 =
                        detail::fresh_bit_name(prog.circuit, bit_name_counter);
                    int r0 = prog.circuit.add_creg(n0, 1);
                    std::string n1 =
                        detail::fresh_bit_name(prog.circuit, bit_name_counter);
                    int r1 = prog.circuit.add_creg(n1, 1);
                    ClassicalBitRef c0{r0, prog.circuit.cregs[static_cast<std::size_t>(r0)].offset};
                    ClassicalBitRef c1{r1, prog.circuit.cregs[static_cast<std::size_t>(r1)].offset};
                    auto gates = lower_teleport(move.a, move.via, move.b, c0, c1);
                    int first = emit(gates[0]);
                    for (std::size_t gi = 1; gi < gates.size(); ++gi) {
                        emit(gates[gi]);
                    }
                    int h_idx = first + static_cast<int>(gates.size()) - 2;
                    int cx_idx = first + static_cast<int>(gates.size()) - 1;
                    prog.establishments.push_back(
                        {move.channel_index, h_idx, cx_idx});
                    ++result.stats.teleports;
                }
                result.stats.cost += move_cost(cost, move);
                prog.moves.push_back(move);
                state = apply_move(state, map, move);
            }
        }
        for (int gi : layer.gates) {
            const Gate& g = circuit.gates[static_cast<std::size_t>(gi)];
            if (g.kind == GateKind::Barrier) {
                Gate fence;
                fence.kind = GateKind::Barrier;
                emit(fence);
                continue;
            }
            Gate mapped = g;
            mapped.q0 = state.placement[static_cast<std::size_t>(g.q0)];
            if (g.kind == GateKind::CX) {
                mapped.q1 = state.placement[static_cast<std::size_t>(g.q1)];
                if (strategy == Strategy::Bridge &&
                    !map.has_edge(mapped.q0, mapped.q1)) {
                    for (const Gate& bg : bridge_plan(state, g, map)) {
                        Gate bridged = bg;
                        bridged.cond = g.cond;
                        emit(bridged);
                    }
                    continue;
                }
            }
            emit(mapped);
        }
    }

    prog.final_permutation = state.placement;
    for (const Channel& ch : state.channels) {
        prog.final_channels.push_back({ch.endpoint_a, ch.endpoint_b, true});
    }
    result.stats.milliseconds = elapsed() * 1000.0;
    return result;
}

struct RouteCircuitResult {
    RoutedProgram best;
    TrialStats best_stats;
    std::vector<TrialStats> trials;
    int best_index = -1;
};

/// Runs `trials` seeded routing trials (seed, seed+1, ...) and keeps the
/// cheapest successful one under the active cost model.
inline RouteCircuitResult route_circuit(const Circuit& circuit,
                                        const CouplingMap& map,
                                        const CostModel& cost,
                                        Strategy strategy, std::uint64_t seed,
                                        int trials,
                                        const RouterConfig& config = {},
                                        double trial_timeout_seconds = 0.0) {
    circuit.validate();
    auto layers = partition_layers(circuit);
    RouteCircuitResult result;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(t);
        MappingState initial =
            strategy == Strategy::Bridge
                ? bridge_initial_mapping(circuit, map)
                : initial_mapping(layers, circuit, map, trial_seed);
        TrialResult trial = route_trial(circuit, layers, map, cost, strategy,
                                        std::move(initial), config,
                                        trial_timeout_seconds);
        trial.stats.seed = trial_seed;
        result.trials.push_back(trial.stats);
        if (trial.stats.timed_out) {
            continue;
        }
        bool better = result.best_index < 0 ||
                      trial.stats.cost < result.best_stats.cost ||
                      (trial.stats.cost == result.best_stats.cost &&
                       trial.stats.teleports < result.best_stats.teleports);
        if (better) {
            result.best = std::move(trial.program);
            result.best_stats = trial.stats;
            result.best_index = t;
        }
    }
    if (result.best_index < 0) {
        throw Error("all routing trials timed out");
    }
    return result;
}

} // namespace telemap

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
#include <array>
#include <deque>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "telemap/channel.hpp"
#include "telemap/error.hpp"

namespace telemap {

/// Undirected physical-qubit graph with precomputed all-pairs hop
/// distances. Immutable after construction.
class CouplingMap {
  public:
    CouplingMap() = default;

    CouplingMap(int qubit_count, std::vector<std::pair<int, int>> edge_list)
        : qubit_count_(qubit_count) {
        if (qubit_count <= 0) {
            throw Error("coupling map needs at least one qubit");
        }
        std::set<std::pair<int, int>> seen;
        adjacency_.resize(static_cast<std::size_t>(qubit_count));
        for (auto [a, b] : edge_list) {
            if (a < 0 || b < 0 || a >= qubit_count || b >= qubit_count) {
                throw Error("edge (" + std::to_string(a) + "," +
                            std::to_string(b) + ") out of range");
            }
            if (a == b) {
                throw Error("self-loop on qubit " + std::to_string(a));
            }
            auto e = std::minmax(a, b);
            if (!seen.insert(e).second) {
                throw Error("duplicate edge (" + std::to_string(e.first) +
                            "," + std::to_string(e.second) + ")");
            }
        }
        edges_.assign(seen.begin(), seen.end());
        for (auto [a, b] : edges_) {
            adjacency_[static_cast<std::size_t>(a)].push_back(b);
            adjacency_[static_cast<std::size_t>(b)].push_back(a);
        }
        for (auto& n : adjacency_) {
            std::sort(n.begin(), n.end());
        }
        compute_distances();
    }

    [[nodiscard]] int qubit_count() const noexcept { return qubit_count_; }

    [[nodiscard]] const std::vector<std::pair<int, int>>& edges() const {
        return edges_;
    }

    [[nodiscard]] const std::vector<int>& neighbors(int q) const {
        return adjacency_[static_cast<std::size_t>(q)];
    }

    [[nodiscard]] bool has_edge(int a, int b) const {
        const auto& n = adjacency_[static_cast<std::size_t>(a)];
        return std::binary_search(n.begin(), n.end(), b);
    }

    /// Shortest-path hop count over physical edges.
    [[nodiscard]] int distance(int a, int b) const {
        return dist_[static_cast<std::size_t>(a)]
                    [static_cast<std::size_t>(b)];
    }

    /// Lexicographically smallest shortest path from `a` to `b`, inclusive.
    [[nodiscard]] std::vector<int> shortest_path(int a, int b) const {
        std::vector<int> path{a};
        int current = a;
        while (current != b) {
            int next = -1;
            for (int n : neighbors(current)) {
                if (distance(n, b) == distance(current, b) - 1) {
                    next = n;
                    break;
                }
            }
            path.push_back(next);
            current = next;
        }
        return path;
    }

    friend bool operator==(const CouplingMap& a, const CouplingMap& b) {
        return a.qubit_count_ == b.qubit_count_ && a.edges_ == b.edges_;
    }

  private:
    void compute_distances() {
        const auto m = static_cast<std::size_t>(qubit_count_);
        dist_.assign(m, std::vector<int>(m, -1));
        for (std::size_t s = 0; s < m; ++s) {
            auto& row = dist_[s];
            row[s] = 0;
            std::deque<int> queue{static_cast<int>(s)};
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                for (int n : adjacency_[static_cast<std::size_t>(v)]) {
                    if (row[static_cast<std::size_t>(n)] < 0) {
                        row[static_cast<std::size_t>(n)] =
                            row[static_cast<std::size_t>(v)] + 1;
                        queue.push_back(n);
                    }
                }
            }
            for (int d : row) {
                if (d < 0) {
                    throw Error("coupling map is disconnected");
                }
            }
        }
    }

    int qubit_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::vector<int>> dist_;
};

/// The 20-qubit IBM Q Tokyo device: a 5x4 grid with row, column, and
/// diagonal couplings.
inline const CouplingMap& tokyo_map() {
    static const CouplingMap map(
        20,
        {
            // rows
            {0, 1}, {1, 2}, {2, 3}, {3, 4},
            {5, 6}, {6, 7}, {7, 8}, {8, 9},
            {10, 11}, {11, 12}, {12, 13}, {13, 14},
            {15, 16}, {16, 17}, {17, 18}, {18, 19},
            // columns
            {0, 5}, {5, 10}, {10, 15},
            {1, 6}, {6, 11}, {11, 16},
            {2, 7}, {7, 12}, {12, 17},
            {3, 8}, {8, 13}, {13, 18},
            {4, 9}, {9, 14}, {14, 19},
            // diagonals
            {1, 7}, {7, 13}, {13, 19},
            {2, 6}, {6, 10},
            {3, 9},
            {4, 8}, {8, 12}, {12, 16},
            {5, 11}, {11, 17},
            {14, 18},
        });
    return map;
}

inline CouplingMap coupling_map_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("qubits") || !j.contains("edges")) {
        throw Error("coupling map JSON needs \"qubits\" and \"edges\"");
    }
    int qubits = j.at("qubits").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw Error("each edge must be a two-element array");
        }
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return CouplingMap(qubits, std::move(edges));
}

inline nlohmann::json coupling_map_to_json(const CouplingMap& map) {
    nlohmann::json j;
    j["qubits"] = map.qubit_count();
    auto edges = nlohmann::json::array();
    for (auto [a, b] : map.edges()) {
        edges.push_back({a, b});
    }
    j["edges"] = std::move(edges);
    return j;
}

inline CouplingMap load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open coupling map file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed coupling map file '" + path +
                    "': " + e.what());
    }
    return coupling_map_from_json(j);
}

/// A teleport option: moving the state at `source` to `destination`
/// through the enabling channel.
struct VirtualEdge {
    int source = -1;
    int destination = -1;
    int channel_index = -1;

    friend bool operator==(const VirtualEdge& a, const VirtualEdge& b) {
        return a.source == b.source && a.destination == b.destination &&
               a.channel_index == b.channel_index;
    }
};

/// Moves enabled by the established channels: one per neighbor of either
/// endpoint, targeting the opposite endpoint. A neighbor that is itself
/// the opposite endpoint yields no move.
inline std::vector<VirtualEdge> virtual_edges(const CouplingMap& map,
                                              const std::vector<Channel>& channels) {
    std::vector<VirtualEdge> out;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Channel& channel = channels[c];
        if (!channel.established()) {
            continue;
        }
        for (auto [from, to] :
             {std::pair{channel.endpoint_a, channel.endpoint_b},
              std::pair{channel.endpoint_b, channel.endpoint_a}}) {
            for (int nbr : map.neighbors(from)) {
                if (nbr == to) {
                    continue;
                }
                out.push_back({nbr, to, static_cast<int>(c)});
            }
        }
    }
    return out;
}

} // namespace telemap

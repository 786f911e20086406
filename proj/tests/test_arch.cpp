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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "telemap/coupling_map.hpp"
#include "test_util.hpp"

using namespace telemap;

namespace {

/// Independent distance oracle: plain BFS over an adjacency list built
/// directly from an edge list, no CouplingMap machinery involved.
std::vector<std::vector<int>>
bfs_all_pairs(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<std::vector<int>> dist(
        static_cast<std::size_t>(n),
        std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int s = 0; s < n; ++s) {
        std::vector<int> queue{s};
        dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)] =
                        dist[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return dist;
}

} // namespace

TEST_CASE("the Tokyo map matches the published device") {
    const CouplingMap& tokyo = tokyo_map();
    CHECK(tokyo.qubit_count() == 20);
    CHECK(tokyo.edges().size() == 43);
    CHECK(tokyo.neighbors(17) == std::vector<int>{11, 12, 16, 18});
    CHECK(tokyo.neighbors(2) == std::vector<int>{1, 3, 6, 7});
    CHECK(tokyo.has_edge(0, 5));
    CHECK_FALSE(tokyo.has_edge(0, 2));
}

TEST_CASE("Tokyo distances agree with an independent BFS oracle") {
    const CouplingMap& tokyo = tokyo_map();
    auto oracle = bfs_all_pairs(20, tokyo.edges());
    for (int a = 0; a < 20; ++a) {
        for (int b = 0; b < 20; ++b) {
            REQUIRE(tokyo.distance(a, b) ==
                    oracle[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
        }
    }
    CHECK(tokyo.distance(0, 0) == 0);
    CHECK(tokyo.distance(0, 2) == 2);
    CHECK(tokyo.distance(3, 16) == 3);
}

TEST_CASE("distances are symmetric and edge-consistent") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        CouplingMap map = testutil::random_connected_map(rng, 9, 6);
        for (int a = 0; a < map.qubit_count(); ++a) {
            for (int b = 0; b < map.qubit_count(); ++b) {
                REQUIRE(map.distance(a, b) == map.distance(b, a));
                REQUIRE((map.distance(a, b) == 1) == map.has_edge(a, b));
                for (int c = 0; c < map.qubit_count(); ++c) {
                    REQUIRE(map.distance(a, b) <=
                            map.distance(a, c) + map.distance(c, b));
                }
            }
        }
    }
}

TEST_CASE("JSON maps load with validation") {
    auto two = coupling_map_from_json(
        nlohmann::json::parse(R"({"qubits":2, "edges":[[0,1]]})"));
    CHECK(two.qubit_count() == 2);
    CHECK(two.distance(0, 1) == 1);

    CHECK_THROWS_AS(coupling_map_from_json(nlohmann::json::parse(
                        R"({"qubits":3, "edges":[[0,1]]})")),
                    Error); // disconnected
    CHECK_THROWS_AS(coupling_map_from_json(nlohmann::json::parse(
                        R"({"qubits":2, "edges":[[0,0]]})")),
                    Error); // self-loop
    CHECK_THROWS_AS(coupling_map_from_json(nlohmann::json::parse(
                        R"({"qubits":2, "edges":[[0,1],[1,0]]})")),
                    Error); // duplicate
    CHECK_THROWS_AS(coupling_map_from_json(nlohmann::json::parse(
                        R"({"edges":[[0,1]]})")),
                    Error); // malformed
}

TEST_CASE("Tokyo JSON export round-trips to an equal map") {
    auto j = coupling_map_to_json(tokyo_map());
    CHECK(coupling_map_from_json(j) == tokyo_map());
}

TEST_CASE("a channel on (Q2,Q17) contributes eight virtual edges") {
    std::vector<Channel> channels{{2, 17, ChannelStatus::Established, 0, 1}};
    auto moves = virtual_edges(tokyo_map(), channels);
    REQUIRE(moves.size() == 8);
    for (const VirtualEdge& e : moves) {
        bool into_17 = e.destination == 17 && tokyo_map().has_edge(e.source, 2);
        bool into_2 = e.destination == 2 && tokyo_map().has_edge(e.source, 17);
        REQUIRE((into_17 || into_2));
    }
    CHECK(virtual_edges(tokyo_map(), {}).empty());
}

TEST_CASE("adjacent channel endpoints yield no self-moves") {
    CouplingMap line(2, {{0, 1}});
    std::vector<Channel> channels{{0, 1, ChannelStatus::Established, 0, 1}};
    CHECK(virtual_edges(line, channels).empty());
}

TEST_CASE("consumed channels contribute nothing") {
    std::vector<Channel> channels{{2, 17, ChannelStatus::Consumed, 0, 1}};
    CHECK(virtual_edges(tokyo_map(), channels).empty());
}

TEST_CASE("virtual edge counts match the degree formula") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        CouplingMap map = testutil::random_connected_map(rng, 8, 5);
        std::uniform_int_distribution<int> pick(0, 7);
        int a = pick(rng);
        int b = pick(rng);
        if (a == b) {
            continue;
        }
        std::vector<Channel> channels{{a, b, ChannelStatus::Established, 0, 1}};
        auto moves = virtual_edges(map, channels);
        std::size_t expected =
            map.neighbors(a).size() - (map.has_edge(a, b) ? 1 : 0) +
            map.neighbors(b).size() - (map.has_edge(b, a) ? 1 : 0);
        REQUIRE(moves.size() == expected);
    }
}

TEST_CASE("load_map reads files and rejects garbage") {
    std::string path = "/tmp/telemap_test_map.json";
    {
        std::ofstream out(path);
        out << coupling_map_to_json(tokyo_map());
    }
    CHECK(load_map(path) == tokyo_map());
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_map(path), Error);
    CHECK_THROWS_AS(load_map("/nonexistent/file.json"), Error);
}

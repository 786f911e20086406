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

#include "route_oracle.hpp"
#include "telemap/qasm.hpp"
#include "telemap/routing.hpp"
#include "test_util.hpp"

using namespace telemap;

namespace {

/// 18 data qubits on Tokyo with q0 at Q3, q1 at Q16 and the channel on
/// (Q2, Q17): the teleport-versus-two-swaps scenario.
MappingState fig5_state() {
    MappingState state;
    state.placement.assign(18, -1);
    state.occupant.assign(20, MappingState::kFree);
    auto place = [&](int logical, int physical) {
        state.placement[static_cast<std::size_t>(logical)] = physical;
        state.occupant[static_cast<std::size_t>(physical)] = logical;
    };
    place(0, 3);
    place(1, 16);
    int next = 2;
    for (int p = 0; p < 20; ++p) {
        if (p == 2 || p == 3 || p == 16 || p == 17) {
            continue;
        }
        place(next++, p);
    }
    state.channels.push_back({2, 17, ChannelStatus::Established, 0, 1});
    state.occupant[2] = MappingState::kChannelHalf;
    state.occupant[17] = MappingState::kChannelHalf;
    state.validate();
    return state;
}

Circuit single_cx_circuit(int qubits, int control, int target) {
    Circuit c;
    c.qubit_count = qubits;
    c.gates.push_back(make_cx(control, target));
    return c;
}

MappingState random_state(std::mt19937_64& rng, const CouplingMap& map,
                          int logical_count, int channel_count) {
    MappingState state;
    const int m = map.qubit_count();
    state.placement.assign(static_cast<std::size_t>(logical_count), -1);
    state.occupant.assign(static_cast<std::size_t>(m), MappingState::kFree);
    std::vector<int> positions(static_cast<std::size_t>(m));
    std::iota(positions.begin(), positions.end(), 0);
    std::shuffle(positions.begin(), positions.end(), rng);
    for (int l = 0; l < logical_count; ++l) {
        int p = positions[static_cast<std::size_t>(l)];
        state.placement[static_cast<std::size_t>(l)] = p;
        state.occupant[static_cast<std::size_t>(p)] = l;
    }
    int next = logical_count;
    for (int c = 0; c < channel_count && next + 1 < m; ++c) {
        int a = positions[static_cast<std::size_t>(next++)];
        int b = positions[static_cast<std::size_t>(next++)];
        state.channels.push_back({a, b, ChannelStatus::Established, 2 * c,
                                  2 * c + 1});
        state.occupant[static_cast<std::size_t>(a)] =
            MappingState::kChannelHalf;
        state.occupant[static_cast<std::size_t>(b)] =
            MappingState::kChannelHalf;
    }
    state.validate();
    return state;
}

} // namespace

TEST_CASE("move costs follow the cost model") {
    CostModel ibm = ibm_cost_model();
    CostModel equal = equal_cost_model();
    CHECK(move_cost(ibm, make_swap(0, 1)) == 30.0);
    CHECK(move_cost(ibm, make_teleport(0, 1, 2, 0)) == 44.0);
    CHECK(move_cost(equal, make_swap(0, 1)) == 1.0);
    CHECK(move_cost(equal, make_teleport(0, 1, 2, 0)) == 1.0);
}

TEST_CASE("swaps drag channel endpoints along") {
    MappingState state;
    state.placement.assign(0, -1);
    state.occupant.assign(20, MappingState::kFree);
    state.channels.push_back({12, 17, ChannelStatus::Established, 0, 1});
    state.occupant[12] = MappingState::kChannelHalf;
    state.occupant[17] = MappingState::kChannelHalf;

    MappingState s1 = apply_swap(state, tokyo_map(), 12, 7);
    MappingState s2 = apply_swap(s1, tokyo_map(), 7, 2);
    CHECK(s2.channels[0].endpoint_a == 2);
    CHECK(s2.channels[0].endpoint_b == 17);
    s2.validate();
}

TEST_CASE("swapping two free qubits changes nothing observable") {
    MappingState state;
    state.placement = {0};
    state.occupant.assign(20, MappingState::kFree);
    state.occupant[0] = 0;
    state.placement[0] = 0;
    MappingState after = apply_swap(state, tokyo_map(), 5, 10);
    CHECK(after.placement == state.placement);
    CHECK(after.occupant == state.occupant);
}

TEST_CASE("a double swap is the identity") {
    std::mt19937_64 rng(3);
    MappingState state = random_state(rng, tokyo_map(), 17, 1);
    for (auto [a, b] : tokyo_map().edges()) {
        MappingState twice =
            apply_swap(apply_swap(state, tokyo_map(), a, b), tokyo_map(), a, b);
        REQUIRE(twice.placement == state.placement);
        REQUIRE(twice.occupant == state.occupant);
    }
    CHECK_THROWS_AS(apply_swap(state, tokyo_map(), 0, 2), Error);
}

TEST_CASE("teleporting relocates the data and the channel") {
    MappingState state = fig5_state();
    MappingState after = apply_teleport(state, tokyo_map(), 16, 17, 2);
    CHECK(after.placement[1] == 2);
    CHECK(after.channels.size() == 1);
    CHECK(after.channels[0].endpoint_a == 16);
    CHECK(after.channels[0].endpoint_b == 17);
    CHECK(after.channels[0].established());
    after.validate();

    CHECK_THROWS_AS(apply_teleport(state, tokyo_map(), 0, 17, 2), Error);
    CHECK_THROWS_AS(apply_teleport(state, tokyo_map(), 16, 2, 17), Error);
}

TEST_CASE("successive teleports through the relocated channel are legal") {
    CouplingMap line(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    MappingState state;
    state.placement = {0, 1};
    state.occupant = {0, 1, MappingState::kChannelHalf,
                      MappingState::kChannelHalf, MappingState::kFree,
                      MappingState::kFree};
    state.channels.push_back({2, 3, ChannelStatus::Established, 0, 1});
    state.validate();

    MappingState s1 = apply_teleport(state, line, 1, 2, 3);
    CHECK(s1.placement == std::vector<int>{0, 3});
    CHECK(s1.channels[0].endpoint_a == 1);
    CHECK(s1.channels[0].endpoint_b == 2);

    MappingState s2 = apply_teleport(s1, line, 0, 1, 2);
    CHECK(s2.placement == std::vector<int>{2, 3});
    CHECK(s2.channels[0].endpoint_a == 0);
    CHECK(s2.channels[0].endpoint_b == 1);
    CHECK(s2.channels.size() == 1);
    s2.validate();
}

TEST_CASE("initial mapping is a deterministic function of the seed") {
    Circuit c = qasm::parse(testutil::kExampleSource);
    auto layers = partition_layers(c);
    MappingState a = initial_mapping(layers, c, tokyo_map(), 42);
    MappingState b = initial_mapping(layers, c, tokyo_map(), 42);
    CHECK(a.placement == b.placement);
    CHECK(a.occupant == b.occupant);
    MappingState other = initial_mapping(layers, c, tokyo_map(), 43);
    CHECK(a.placement != other.placement); // overwhelmingly likely
}

TEST_CASE("initial mapping satisfies every first-layer CNOT") {
    std::mt19937_64 rng(9);
    Circuit c;
    c.qubit_count = 10;
    c.gates = {make_cx(0, 1), make_cx(2, 3), make_cx(4, 5), make_cx(6, 7)};
    auto layers = partition_layers(c);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        MappingState s = initial_mapping(layers, c, tokyo_map(), seed);
        s.validate();
        for (const Gate* g : layer_cnots(c, layers[0])) {
            REQUIRE(tokyo_map().has_edge(
                s.placement[static_cast<std::size_t>(g->q0)],
                s.placement[static_cast<std::size_t>(g->q1)]));
        }
    }
}

TEST_CASE("n = m leaves no room for channels") {
    Circuit c;
    c.qubit_count = 20;
    c.gates = {make_cx(0, 1)};
    MappingState s =
        initial_mapping(partition_layers(c), c, tokyo_map(), 5);
    CHECK(s.channels.empty());
    s.validate();
}

TEST_CASE("an 18-qubit circuit on Tokyo gets one channel when the free "
          "pair is adjacent") {
    Circuit c;
    c.qubit_count = 18;
    c.gates = {make_cx(0, 1)};
    auto layers = partition_layers(c);
    int adjacent_seeds = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        MappingState s = initial_mapping(layers, c, tokyo_map(), seed);
        s.validate();
        std::vector<int> unused; // positions holding no data
        for (int p = 0; p < 20; ++p) {
            if (s.occupant[static_cast<std::size_t>(p)] < 0) {
                unused.push_back(p);
            }
        }
        REQUIRE(unused.size() == 2);
        bool adjacent = tokyo_map().has_edge(unused[0], unused[1]);
        if (adjacent) {
            REQUIRE(s.channels.size() == 1);
            ++adjacent_seeds;
        } else {
            REQUIRE(s.channels.empty());
        }
    }
    CHECK(adjacent_seeds > 0);
}

TEST_CASE("infeasible first layers exhaust the attempt budget") {
    // every edge of a star shares the hub, so two disjoint first-layer
    // CNOTs can never be satisfied
    CouplingMap star(4, {{0, 1}, {0, 2}, {0, 3}});
    Circuit d;
    d.qubit_count = 4;
    d.gates = {make_cx(0, 1), make_cx(2, 3)};
    CHECK_THROWS_AS(initial_mapping(partition_layers(d), d, star, 1, 200),
                    PlacementError);
    // more logical than physical qubits is rejected outright
    Circuit big;
    big.qubit_count = 5;
    CHECK_THROWS_AS(initial_mapping({}, big, star, 1), PlacementError);
}

TEST_CASE("teleporting beats two swaps on the Q3/Q16 scenario") {
    MappingState state = fig5_state();
    Circuit c = single_cx_circuit(18, 0, 1);
    auto layers = partition_layers(c);

    SECTION("priced model: 44 versus 60") {
        RouteLayerResult with_tel = route_layer(
            state, layers[0], {}, c, tokyo_map(), ibm_cost_model(), true);
        CHECK(with_tel.cost == 44.0);
        REQUIRE(with_tel.moves.size() == 1);
        CHECK(with_tel.moves[0].kind == MoveKind::Teleport);
        CHECK(with_tel.moves[0].a == 16); // state at Q16 teleports to Q2
        CHECK(with_tel.moves[0].b == 2);

        RouteLayerResult no_tel = route_layer(
            state, layers[0], {}, c, tokyo_map(), ibm_cost_model(), false);
        CHECK(no_tel.cost == 60.0);
        REQUIRE(no_tel.moves.size() == 2);
        CHECK(no_tel.moves[0].kind == MoveKind::Swap);
        CHECK(no_tel.moves[1].kind == MoveKind::Swap);
    }

    SECTION("equal model: 1 versus 2") {
        RouteLayerResult with_tel = route_layer(
            state, layers[0], {}, c, tokyo_map(), equal_cost_model(), true);
        CHECK(with_tel.cost == 1.0);
        CHECK(with_tel.moves.size() == 1);
        RouteLayerResult no_tel = route_layer(
            state, layers[0], {}, c, tokyo_map(), equal_cost_model(), false);
        CHECK(no_tel.cost == 2.0);
    }
}

TEST_CASE("an already satisfied layer routes to an empty move list") {
    MappingState state = fig5_state();
    Circuit c = single_cx_circuit(18, 2, 3); // q2 and q3 sit at Q0 and Q1
    auto layers = partition_layers(c);
    REQUIRE(tokyo_map().has_edge(state.placement[2], state.placement[3]));
    RouteLayerResult r = route_layer(state, layers[0], {}, c, tokyo_map(),
                                     ibm_cost_model(), true);
    CHECK(r.moves.empty());
    CHECK(r.cost == 0.0);
    CHECK(r.state.placement == state.placement);
}

TEST_CASE("A* matches the exhaustive oracle on small maps") {
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 60) {
        int m = 4 + static_cast<int>(rng() % 3); // 4..6 physical qubits
        CouplingMap map =
            testutil::random_connected_map(rng, m, static_cast<int>(rng() % 3));
        int n = 2 + static_cast<int>(rng() % (m - 1 > 2 ? m - 2 : 1));
        int channels = static_cast<int>(rng() % ((m - n) / 2 + 1));
        MappingState state = random_state(rng, map, n, channels);
        Circuit c = single_cx_circuit(n, 0, 1);
        auto layers = partition_layers(c);
        CostModel cost = (rng() & 1) ? ibm_cost_model() : equal_cost_model();
        bool teleport = (rng() & 1) != 0;

        RouteLayerResult found =
            route_layer(state, layers[0], {}, c, map, cost, teleport);
        double expected = testoracle::optimal_route_cost(
            map, testoracle::from_mapping_state(state), {{0, 1}},
            cost.swap_cost(), cost.teleport_cost(), teleport);
        REQUIRE(found.cost == expected);
        // the returned moves really produce the returned state
        MappingState replay = state;
        for (const Move& mv : found.moves) {
            replay = apply_move(replay, map, mv);
        }
        REQUIRE(replay.placement == found.state.placement);
        replay.validate();
        ++checked;
    }
}

TEST_CASE("A* stays optimal for multi-CNOT layers") {
    std::mt19937_64 rng(23);
    int checked = 0;
    while (checked < 25) {
        CouplingMap map = testutil::random_connected_map(
            rng, 6, static_cast<int>(rng() % 4));
        MappingState state = random_state(rng, map, 4, 1);
        Circuit c;
        c.qubit_count = 4;
        c.gates = {make_cx(0, 1), make_cx(2, 3)};
        auto layers = partition_layers(c);
        REQUIRE(layers.size() == 1);
        CostModel cost = (rng() & 1) ? ibm_cost_model() : equal_cost_model();
        bool teleport = (rng() & 1) != 0;

        RouteLayerResult found =
            route_layer(state, layers[0], {}, c, map, cost, teleport);
        double expected = testoracle::optimal_route_cost(
            map, testoracle::from_mapping_state(state), {{0, 1}, {2, 3}},
            cost.swap_cost(), cost.teleport_cost(), teleport);
        REQUIRE(found.cost == expected);
        ++checked;
    }
}

TEST_CASE("the layer cost bound never exceeds the true optimum") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 80; ++trial) {
        int m = 4 + static_cast<int>(rng() % 3);
        CouplingMap map =
            testutil::random_connected_map(rng, m, static_cast<int>(rng() % 3));
        int n = std::min(m - 2, 3);
        if (n < 2) {
            continue;
        }
        MappingState state = random_state(rng, map, n, 1);
        Circuit c = single_cx_circuit(n, 0, 1);
        auto layers = partition_layers(c);
        for (bool teleport : {false, true}) {
            CostModel cost =
                (rng() & 1) ? ibm_cost_model() : equal_cost_model();
            double bound = layer_cost_bound(state, layers[0], c, map, cost,
                                            teleport);
            double optimal = testoracle::optimal_route_cost(
                map, testoracle::from_mapping_state(state), {{0, 1}},
                cost.swap_cost(), cost.teleport_cost(), teleport);
            REQUIRE(bound <= optimal + 1e-9);
        }
    }
}

TEST_CASE("enabling teleportation never worsens a layer") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        CouplingMap map = testutil::random_connected_map(
            rng, 8 + static_cast<int>(rng() % 5),
            static_cast<int>(rng() % 6));
        int m = map.qubit_count();
        int n = std::max(2, m - 4);
        MappingState state = random_state(rng, map, n, (m - n) / 2);
        Circuit c = single_cx_circuit(n, 0, 1);
        auto layers = partition_layers(c);
        CostModel cost = (rng() & 1) ? ibm_cost_model() : equal_cost_model();
        double with_tel =
            route_layer(state, layers[0], {}, c, map, cost, true).cost;
        double without =
            route_layer(state, layers[0], {}, c, map, cost, false).cost;
        REQUIRE(with_tel <= without);
    }
}

TEST_CASE("bridge plans expand with the 3*2^k - 2 pattern") {
    CouplingMap line(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    MappingState state;
    state.placement = {0, 1, 2, 3, 4};
    state.occupant = {0, 1, 2, 3, 4};

    auto adjacent = bridge_plan(state, make_cx(0, 1), line);
    REQUIRE(adjacent.size() == 1);
    CHECK(adjacent[0] == make_cx(0, 1));

    auto one_hop = bridge_plan(state, make_cx(0, 2), line);
    REQUIRE(one_hop.size() == 4);
    CHECK(one_hop[0] == make_cx(0, 1));
    CHECK(one_hop[1] == make_cx(1, 2));
    CHECK(one_hop[2] == make_cx(0, 1));
    CHECK(one_hop[3] == make_cx(1, 2));

    CHECK(bridge_plan(state, make_cx(0, 3), line).size() == 10);
    CHECK(bridge_plan(state, make_cx(0, 4), line).size() == 22);
}

TEST_CASE("the bridge strategy keeps the mapping static") {
    CouplingMap line(3, {{0, 1}, {1, 2}});
    Circuit c = qasm::parse(testutil::kExampleSource);
    RouteCircuitResult result = route_circuit(
        c, line, ibm_cost_model(), Strategy::Bridge, 1, 1);
    CHECK(result.best_stats.swaps == 0);
    CHECK(result.best_stats.teleports == 0);
    CHECK(result.best_stats.cost == 0.0);
    CHECK(result.best.initial_placement ==
          result.best.final_permutation);
    // greedy interaction placement is the identity here, and the second
    // CNOT (q0,q2) spans distance 2, so it becomes the 4-gate pattern
    REQUIRE(result.best.initial_placement == std::vector<int>{0, 1, 2});
    std::vector<Gate> expected = {
        make_gate(GateKind::H, 1), make_gate(GateKind::X, 0),
        make_cx(1, 2),
        make_cx(0, 1), make_cx(1, 2), make_cx(0, 1), make_cx(1, 2),
        make_cx(1, 0),
        make_gate(GateKind::T, 0)};
    CHECK(result.best.circuit.gates == expected);
}

TEST_CASE("a satisfiable single-layer circuit routes without moves") {
    Circuit c;
    c.qubit_count = 4;
    c.gates = {make_cx(0, 1), make_cx(2, 3)};
    RouteCircuitResult result = route_circuit(
        c, tokyo_map(), ibm_cost_model(), Strategy::SwapTeleport, 3, 5);
    CHECK(result.best_stats.swaps == 0);
    CHECK(result.best_stats.teleports == 0);
    CHECK(result.best_stats.cost == 0.0);
}

TEST_CASE("the Q3/Q16 scenario costs 60 by swapping and 44 by teleporting") {
    Circuit c = single_cx_circuit(18, 0, 1);
    auto layers = partition_layers(c);
    MappingState fixture = fig5_state();

    TrialResult swap_only =
        route_trial(c, layers, tokyo_map(), ibm_cost_model(), Strategy::Swap,
                    fixture, {});
    CHECK(swap_only.stats.cost == 60.0);
    CHECK(swap_only.stats.swaps == 2);
    CHECK(swap_only.stats.teleports == 0);

    TrialResult with_tel =
        route_trial(c, layers, tokyo_map(), ibm_cost_model(),
                    Strategy::SwapTeleport, fixture, {});
    CHECK(with_tel.stats.cost == 44.0);
    CHECK(with_tel.stats.swaps == 0);
    CHECK(with_tel.stats.teleports == 1);

    // teleport count in the statistics equals gadgets in the lowered text:
    // each gadget contributes exactly two measurements
    int measures = 0;
    for (const Gate& g : with_tel.program.circuit.gates) {
        measures += g.kind == GateKind::Measure ? 1 : 0;
    }
    CHECK(measures == 2 * with_tel.stats.teleports);
}

TEST_CASE("the node budget cuts off pathological searches") {
    MappingState state = fig5_state();
    Circuit c = single_cx_circuit(18, 0, 1);
    auto layers = partition_layers(c);
    RouterConfig tiny;
    tiny.node_budget = 1;
    CHECK_THROWS_AS(route_layer(state, layers[0], {}, c, tokyo_map(),
                                ibm_cost_model(), true, tiny),
                    SearchBudgetExceeded);
}

TEST_CASE("trials that exceed their time budget are marked, not returned") {
    Circuit c = qasm::parse(testutil::kExampleSource);
    auto layers = partition_layers(c);
    MappingState initial = initial_mapping(layers, c, tokyo_map(), 1);
    TrialResult trial = route_trial(c, layers, tokyo_map(), ibm_cost_model(),
                                    Strategy::Swap, initial, {}, 1e-12);
    CHECK(trial.stats.timed_out);
    CHECK_THROWS_AS(route_circuit(c, tokyo_map(), ibm_cost_model(),
                                  Strategy::Swap, 1, 2, {}, 1e-12),
                    Error);
}

TEST_CASE("trial costs accumulate move costs exactly") {
    std::mt19937_64 rng(37);
    Circuit c = testutil::random_circuit(rng, 6, 25, false);
    RouteCircuitResult result = route_circuit(
        c, tokyo_map(), ibm_cost_model(), Strategy::SwapTeleport, 11, 3);
    const RoutedProgram& p = result.best;
    double total = 0.0;
    for (const Move& m : p.moves) {
        total += move_cost(ibm_cost_model(), m);
    }
    CHECK(total == result.best_stats.cost);
    CHECK(p.swap_count() == result.best_stats.swaps);
    CHECK(p.teleport_count() == result.best_stats.teleports);
}

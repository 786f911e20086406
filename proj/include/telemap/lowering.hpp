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

#include <string>
#include <vector>

#include "telemap/channel.hpp"
#include "telemap/circuit.hpp"
#include "telemap/cost_model.hpp"
#include "telemap/coupling_map.hpp"
#include "telemap/error.hpp"
#include "telemap/gate.hpp"

namespace telemap {

/// One channel-establishment (or re-establishment) event in a routed
/// program: the channel slot it belongs to and the indices of its H and
/// CX gates.
struct EstablishmentRecord {
    int channel_slot = -1;
    int h_gate = -1;
    int cx_gate = -1;
};

/// Where an ancilla pair ends up, and whether its final establishment
/// survives dead-channel elimination (true: Bell pair, false: |00>).
struct FinalChannel {
    int endpoint_a = -1;
    int endpoint_b = -1;
    bool entangled = true;
};

/// A mapped circuit over physical qubits together with the bookkeeping
/// needed to verify it: initial placement, final output permutation,
/// the move log, and the channel lifecycle records.
struct RoutedProgram {
    Circuit circuit; // addressed by physical indices
    int data_qubit_count = 0;
    std::vector<int> initial_placement;  // logical -> physical
    std::vector<int> final_permutation;  // logical -> physical
    std::vector<Move> moves;
    std::vector<EstablishmentRecord> establishments;
    std::vector<FinalChannel> final_channels;

    [[nodiscard]] int swap_count() const {
        int n = 0;
        for (const Move& m : moves) {
            n += m.kind == MoveKind::Swap ? 1 : 0;
        }
        return n;
    }

    [[nodiscard]] int teleport_count() const {
        return static_cast<int>(moves.size()) - swap_count();
    }
};

/// Entangles an adjacent |00> pair into (|00>+|11>)/sqrt(2).
inline std::vector<Gate> establish_channel(int a, int b) {
    return {make_gate(GateKind::H, a), make_cx(a, b)};
}

/// Minimal SWAP decomposition: three alternating CNOTs.
inline std::vector<Gate> lower_swap(int a, int b) {
    return {make_cx(a, b), make_cx(b, a), make_cx(a, b)};
}

/// Flat index plus owning register, for the fresh bits of a teleport.
struct ClassicalBitRef {
    int creg = -1;
    int bit = -1; // flat index
};

/// The full teleport gadget: Bell measurement of (source, e_near),
/// conditioned X/Z corrections at e_far, conditioned resets of the two
/// measured qubits, and re-establishment of the channel on
/// (source, e_near) with the Hadamard on the lower-indexed qubit.
inline std::vector<Gate> lower_teleport(int source, int e_near, int e_far,
                                        ClassicalBitRef c0,
                                        ClassicalBitRef c1) {
    std::vector<Gate> gates;
    gates.push_back(make_cx(source, e_near));
    gates.push_back(make_gate(GateKind::H, source));
    gates.push_back(make_measure(source, c0.bit));
    gates.push_back(make_measure(e_near, c1.bit));

    auto conditioned = [](GateKind kind, int qubit, ClassicalBitRef bit) {
        Gate g = make_gate(kind, qubit);
        g.cond.creg = bit.creg;
        g.cond.value = 1;
        return g;
    };
    gates.push_back(conditioned(GateKind::X, e_far, c1));
    gates.push_back(conditioned(GateKind::Z, e_far, c0));
    // reset the measured qubits to |0>
    gates.push_back(conditioned(GateKind::X, e_near, c1));
    gates.push_back(conditioned(GateKind::X, source, c0));
    // re-entangle on (source, e_near)
    int lo = std::min(source, e_near);
    int hi = std::max(source, e_near);
    for (Gate& g : establish_channel(lo, hi)) {
        gates.push_back(g);
    }
    return gates;
}

/// Removes the establishment (and re-establishment) gate pairs of every
/// channel that no teleport in the move log ever consumed. Data-qubit
/// gates are untouched; an eliminated channel's qubits end in |00>.
inline RoutedProgram eliminate_dead_channels(const RoutedProgram& program) {
    RoutedProgram out = program;
    std::vector<char> used(program.final_channels.size(), 0);
    for (const Move& move : program.moves) {
        if (move.kind == MoveKind::Teleport) {
            used[static_cast<std::size_t>(move.channel_index)] = 1;
        }
    }

    std::vector<char> drop(program.circuit.gates.size(), 0);
    for (const EstablishmentRecord& rec : program.establishments) {
        if (!used[static_cast<std::size_t>(rec.channel_slot)]) {
            drop[static_cast<std::size_t>(rec.h_gate)] = 1;
            drop[static_cast<std::size_t>(rec.cx_gate)] = 1;
        }
    }

    std::vector<int> remap(program.circuit.gates.size(), -1);
    std::vector<Gate> kept;
    kept.reserve(program.circuit.gates.size());
    for (std::size_t i = 0; i < program.circuit.gates.size(); ++i) {
        if (!drop[i]) {
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(program.circuit.gates[i]);
        }
    }
    out.circuit.gates = std::move(kept);

    out.establishments.clear();
    for (const EstablishmentRecord& rec : program.establishments) {
        if (used[static_cast<std::size_t>(rec.channel_slot)]) {
            out.establishments.push_back(
                {rec.channel_slot, remap[static_cast<std::size_t>(rec.h_gate)],
                 remap[static_cast<std::size_t>(rec.cx_gate)]});
        }
    }
    for (std::size_t slot = 0; slot < out.final_channels.size(); ++slot) {
        out.final_channels[slot].entangled = used[slot] != 0;
    }
    return out;
}

} // namespace telemap

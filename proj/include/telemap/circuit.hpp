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
#include <string>
#include <vector>

#include "telemap/error.hpp"
#include "telemap/gate.hpp"

namespace telemap {

struct ClassicalRegister {
    std::string name;
    int size = 0;
    int offset = 0; // index of the register's first bit in the flat bit space

    friend bool operator==(const ClassicalRegister& a,
                           const ClassicalRegister& b) {
        return a.name == b.name && a.size == b.size && a.offset == b.offset;
    }
};

/// Ordered gate list over logical qubits q_0 .. q_{n-1}.
struct Circuit {
    int qubit_count = 0;
    std::string qreg_name = "q";
    std::vector<ClassicalRegister> cregs;
    std::vector<Gate> gates;

    [[nodiscard]] int classical_bit_count() const {
        if (cregs.empty()) {
            return 0;
        }
        return cregs.back().offset + cregs.back().size;
    }

    int add_creg(const std::string& name, int size) {
        cregs.push_back({name, size, classical_bit_count()});
        return static_cast<int>(cregs.size()) - 1;
    }

    [[nodiscard]] int creg_of_bit(int bit) const {
        for (std::size_t i = 0; i < cregs.size(); ++i) {
            if (bit >= cregs[i].offset && bit < cregs[i].offset + cregs[i].size) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    [[nodiscard]] bool has_creg_named(const std::string& name) const {
        return std::any_of(cregs.begin(), cregs.end(),
                           [&](const auto& r) { return r.name == name; });
    }

    /// Checks operand ranges; throws Error on violation.
    void validate() const {
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate& g = gates[i];
            auto check_qubit = [&](int q) {
                if (q < 0 || q >= qubit_count) {
                    throw Error("gate " + std::to_string(i) +
                                " addresses qubit " + std::to_string(q) +
                                " outside register of size " +
                                std::to_string(qubit_count));
                }
            };
            if (g.kind == GateKind::Barrier) {
                for (int q : g.barrier_qubits) {
                    check_qubit(q);
                }
                continue;
            }
            check_qubit(g.q0);
            if (g.kind == GateKind::CX) {
                check_qubit(g.q1);
                if (g.q0 == g.q1) {
                    throw Error("cx with identical control and target q" +
                                std::to_string(g.q0));
                }
            }
            if (g.kind == GateKind::Measure) {
                if (g.cbit < 0 || g.cbit >= classical_bit_count()) {
                    throw Error("measure writes classical bit " +
                                std::to_string(g.cbit) + " out of range");
                }
            }
            if (g.cond.active() &&
                g.cond.creg >= static_cast<int>(cregs.size())) {
                throw Error("condition references unknown classical register");
            }
        }
    }

    [[nodiscard]] int cx_count() const {
        return static_cast<int>(std::count_if(
            gates.begin(), gates.end(),
            [](const Gate& g) { return g.kind == GateKind::CX; }));
    }
};

/// A set of gates acting on pairwise disjoint qubits.
struct Layer {
    std::vector<int> gates; // indices into Circuit::gates, in circuit order
};

/// Greedy as-soon-as-possible layering. Every gate is placed into the
/// earliest layer whose qubits it does not conflict with; barriers act as
/// a fence across all qubits and occupy a layer of their own.
inline std::vector<Layer> partition_layers(const Circuit& circuit) {
    std::vector<Layer> layers;
    std::vector<int> last_layer(static_cast<std::size_t>(circuit.qubit_count),
                                -1);
    auto place = [&](int gate_index, int layer_index) {
        if (static_cast<int>(layers.size()) <= layer_index) {
            layers.resize(static_cast<std::size_t>(layer_index) + 1);
        }
        layers[static_cast<std::size_t>(layer_index)].gates.push_back(
            gate_index);
    };
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        if (g.kind == GateKind::Barrier) {
            int fence = 0;
            for (int l : last_layer) {
                fence = std::max(fence, l + 1);
            }
            place(static_cast<int>(i), fence);
            std::fill(last_layer.begin(), last_layer.end(), fence);
            continue;
        }
        int layer = last_layer[static_cast<std::size_t>(g.q0)] + 1;
        if (g.kind == GateKind::CX) {
            layer = std::max(layer,
                             last_layer[static_cast<std::size_t>(g.q1)] + 1);
        }
        place(static_cast<int>(i), layer);
        last_layer[static_cast<std::size_t>(g.q0)] = layer;
        if (g.kind == GateKind::CX) {
            last_layer[static_cast<std::size_t>(g.q1)] = layer;
        }
    }
    return layers;
}

/// CX gates of a layer, in circuit order.
inline std::vector<const Gate*> layer_cnots(const Circuit& circuit,
                                            const Layer& layer) {
    std::vector<const Gate*> out;
    for (int idx : layer.gates) {
        const Gate& g = circuit.gates[static_cast<std::size_t>(idx)];
        if (g.kind == GateKind::CX) {
            out.push_back(&g);
        }
    }
    return out;
}

} // namespace telemap

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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "telemap/circuit.hpp"
#include "telemap/error.hpp"
#include "telemap/lowering.hpp"

namespace telemap {

using Amplitude = std::complex<double>;
using Statevector = std::vector<Amplitude>;

/// One execution branch of a measured circuit: amplitudes over the full
/// register, recorded classical bits, and the branch probability.
struct BranchState {
    Statevector amplitudes;
    std::vector<std::uint8_t> classical;
    double probability = 1.0;
};

struct SimulatorOptions {
    int max_qubits = 20;
    double prune_threshold = 1e-12; // conditional probabilities below vanish
    bool check_norms = false;       // verify norm 1 after every gate
    double norm_tolerance = 1e-9;
    // Fold together branches whose states coincide and whose classical
    // bits are never read again. Keeps the branch count flat across
    // teleport gadgets; off by default so callers see every outcome.
    bool merge_indistinguishable_branches = false;
    double merge_tolerance = 1e-12;
};

namespace detail {

inline std::array<Amplitude, 4> single_qubit_matrix(const Gate& g) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Amplitude i(0.0, 1.0);
    switch (g.kind) {
    case GateKind::H:
        return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::S:
        return {1.0, 0.0, 0.0, i};
    case GateKind::Sdg:
        return {1.0, 0.0, 0.0, -i};
    case GateKind::T:
        return {1.0, 0.0, 0.0, std::exp(i * (M_PI / 4.0))};
    case GateKind::Tdg:
        return {1.0, 0.0, 0.0, std::exp(-i * (M_PI / 4.0))};
    case GateKind::Rz: {
        double t = g.params[0] / 2.0;
        return {std::exp(-i * t), 0.0, 0.0, std::exp(i * t)};
    }
    case GateKind::Rx: {
        double t = g.params[0] / 2.0;
        return {std::cos(t), -i * std::sin(t), -i * std::sin(t), std::cos(t)};
    }
    case GateKind::Ry: {
        double t = g.params[0] / 2.0;
        return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
    }
    case GateKind::U: {
        double theta = g.params[0] / 2.0;
        double phi = g.params[1];
        double lambda = g.params[2];
        return {std::cos(theta), -std::exp(i * lambda) * std::sin(theta),
                std::exp(i * phi) * std::sin(theta),
                std::exp(i * (phi + lambda)) * std::cos(theta)};
    }
    default:
        throw Error("not a single-qubit unitary");
    }
}

inline void apply_single_qubit(Statevector& amps, int qubit,
                               const std::array<Amplitude, 4>& m) {
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < amps.size(); base += 2 * bit) {
        for (std::size_t low = 0; low < bit; ++low) {
            std::size_t i0 = base + low;
            std::size_t i1 = i0 + bit;
            Amplitude a0 = amps[i0];
            Amplitude a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

inline void apply_cx(Statevector& amps, int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & cbit) != 0 && (idx & tbit) == 0) {
            std::swap(amps[idx], amps[idx | tbit]);
        }
    }
}

inline double probability_of_one(const Statevector& amps, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & bit) != 0) {
            p += std::norm(amps[idx]);
        }
    }
    return p;
}

/// Projects onto the given outcome and renormalizes.
inline void collapse(Statevector& amps, int qubit, int outcome,
                     double outcome_probability) {
    const std::size_t bit = std::size_t{1} << qubit;
    const double scale = 1.0 / std::sqrt(outcome_probability);
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        bool is_one = (idx & bit) != 0;
        if (is_one == (outcome == 1)) {
            amps[idx] *= scale;
        } else {
            amps[idx] = 0.0;
        }
    }
}

inline double norm_squared(const Statevector& amps) {
    double n = 0.0;
    for (const Amplitude& a : amps) {
        n += std::norm(a);
    }
    return n;
}

inline bool condition_holds(const Circuit& circuit, const BranchState& branch,
                            const Condition& cond) {
    if (!cond.active()) {
        return true;
    }
    const ClassicalRegister& reg =
        circuit.cregs[static_cast<std::size_t>(cond.creg)];
    long long value = 0;
    for (int j = 0; j < reg.size; ++j) {
        value |= static_cast<long long>(
                     branch.classical[static_cast<std::size_t>(reg.offset + j)])
                 << j;
    }
    return value == cond.value;
}

} // namespace detail

/// Builds |b_{k-1} ... b_1 b_0> with qubit q at bit q.
inline Statevector basis_state(int qubits, std::uint64_t bits = 0) {
    Statevector v(std::size_t{1} << qubits, Amplitude(0.0));
    v[bits] = 1.0;
    return v;
}

/// Tensor product of per-qubit states; entry q of `locals` is qubit q.
inline Statevector
product_state(const std::vector<std::array<Amplitude, 2>>& locals) {
    Statevector v(std::size_t{1} << locals.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        Amplitude a(1.0);
        for (std::size_t q = 0; q < locals.size(); ++q) {
            a *= locals[q][(idx >> q) & 1U];
        }
        v[idx] = a;
    }
    return v;
}

/// Executes the circuit on the given initial state, forking into
/// outcome branches at each measurement (and reset) and pruning
/// zero-probability branches. Conditioned gates consult the branch's
/// recorded classical bits.
inline std::vector<BranchState>
simulate_branching(const Circuit& circuit, Statevector initial,
                   const SimulatorOptions& options = {}) {
    if (circuit.qubit_count > options.max_qubits) {
        throw SimulationLimitError(
            "circuit has " + std::to_string(circuit.qubit_count) +
            " qubits, limit is " + std::to_string(options.max_qubits));
    }
    if (initial.size() != (std::size_t{1} << circuit.qubit_count)) {
        throw Error("initial state has wrong dimension");
    }

    std::vector<BranchState> branches(1);
    branches[0].amplitudes = std::move(initial);
    branches[0].classical.assign(
        static_cast<std::size_t>(circuit.classical_bit_count()), 0);

    auto check_norm = [&](const BranchState& b) {
        if (!options.check_norms) {
            return;
        }
        double n = detail::norm_squared(b.amplitudes);
        if (std::abs(n - 1.0) > options.norm_tolerance) {
            throw Error("branch state lost normalization: |psi|^2 = " +
                        std::to_string(n));
        }
    };
    check_norm(branches[0]);

    // Classical bits still read by gates at index >= i; used to decide
    // which branches have become indistinguishable.
    std::vector<std::vector<std::uint8_t>> read_after;
    if (options.merge_indistinguishable_branches) {
        const auto bit_count =
            static_cast<std::size_t>(circuit.classical_bit_count());
        read_after.assign(circuit.gates.size() + 1,
                          std::vector<std::uint8_t>(bit_count, 0));
        for (std::size_t i = circuit.gates.size(); i-- > 0;) {
            read_after[i] = read_after[i + 1];
            const Gate& g = circuit.gates[i];
            if (g.cond.active()) {
                const ClassicalRegister& reg =
                    circuit.cregs[static_cast<std::size_t>(g.cond.creg)];
                for (int j = 0; j < reg.size; ++j) {
                    read_after[i][static_cast<std::size_t>(reg.offset + j)] = 1;
                }
            }
        }
    }

    auto merge_branches = [&](std::vector<BranchState>& set,
                              const std::vector<std::uint8_t>& live_bits) {
        std::vector<BranchState> merged;
        for (BranchState& candidate : set) {
            bool absorbed = false;
            for (BranchState& keeper : merged) {
                bool same = true;
                for (std::size_t b = 0; same && b < live_bits.size(); ++b) {
                    if (live_bits[b] &&
                        keeper.classical[b] != candidate.classical[b]) {
                        same = false;
                    }
                }
                for (std::size_t a = 0;
                     same && a < keeper.amplitudes.size(); ++a) {
                    if (std::abs(keeper.amplitudes[a] -
                                 candidate.amplitudes[a]) >
                        options.merge_tolerance) {
                        same = false;
                    }
                }
                if (same) {
                    keeper.probability += candidate.probability;
                    absorbed = true;
                    break;
                }
            }
            if (!absorbed) {
                merged.push_back(std::move(candidate));
            }
        }
        set = std::move(merged);
    };

    for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
        const Gate& g = circuit.gates[gi];
        if (g.kind == GateKind::Barrier) {
            continue;
        }
        std::vector<BranchState> next;
        next.reserve(branches.size());
        for (BranchState& branch : branches) {
            if (!detail::condition_holds(circuit, branch, g.cond)) {
                next.push_back(std::move(branch));
                continue;
            }
            if (g.kind == GateKind::CX) {
                detail::apply_cx(branch.amplitudes, g.q0, g.q1);
                check_norm(branch);
                next.push_back(std::move(branch));
            } else if (g.kind == GateKind::Measure ||
                       g.kind == GateKind::Reset) {
                double p1 = detail::probability_of_one(branch.amplitudes, g.q0);
                double outcome_p[2] = {1.0 - p1, p1};
                int last = outcome_p[1] > options.prune_threshold ? 1 : 0;
                for (int outcome : {0, 1}) {
                    double p = outcome_p[outcome];
                    if (p <= options.prune_threshold) {
                        continue;
                    }
                    BranchState child;
                    child.amplitudes = outcome == last
                                           ? std::move(branch.amplitudes)
                                           : branch.amplitudes;
                    child.classical = branch.classical;
                    child.probability = branch.probability * p;
                    detail::collapse(child.amplitudes, g.q0, outcome, p);
                    if (g.kind == GateKind::Measure) {
                        child.classical[static_cast<std::size_t>(g.cbit)] =
                            static_cast<std::uint8_t>(outcome);
                    } else if (outcome == 1) {
                        detail::apply_single_qubit(
                            child.amplitudes, g.q0,
                            detail::single_qubit_matrix(
                                make_gate(GateKind::X, 0)));
                    }
                    check_norm(child);
                    next.push_back(std::move(child));
                }
            } else {
                detail::apply_single_qubit(branch.amplitudes, g.q0,
                                           detail::single_qubit_matrix(g));
                check_norm(branch);
                next.push_back(std::move(branch));
            }
        }
        branches = std::move(next);
        if (options.merge_indistinguishable_branches && g.cond.active() &&
            branches.size() > 1) {
            merge_branches(branches, read_after[gi + 1]);
        }
    }
    return branches;
}

/// |<a|b>| for normalized states; insensitive to global phase.
inline double fidelity(const Statevector& a, const Statevector& b) {
    Amplitude overlap(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        overlap += std::conj(a[i]) * b[i];
    }
    return std::abs(overlap);
}

// ---------------------------------------------------------------------------
// Static coupling check

struct CouplingVerdict {
    bool pass = true;
    int first_offending_gate = -1;

    explicit operator bool() const { return pass; }
};

/// PASS iff every two-qubit gate addresses a physical edge.
inline CouplingVerdict check_coupling(const Circuit& physical,
                                      const CouplingMap& map) {
    for (std::size_t i = 0; i < physical.gates.size(); ++i) {
        const Gate& g = physical.gates[i];
        if (g.kind == GateKind::CX && !map.has_edge(g.q0, g.q1)) {
            return {false, static_cast<int>(i)};
        }
    }
    return {};
}

inline CouplingVerdict check_coupling(const RoutedProgram& program,
                                      const CouplingMap& map) {
    return check_coupling(program.circuit, map);
}

// ---------------------------------------------------------------------------
// Functional equivalence

struct EquivalenceOptions {
    int max_qubits = 20; // per connected component
    double tolerance = 1e-9;
    int random_states = 20;
    int basis_enumeration_limit = 10; // enumerate basis inputs for n <= this
    std::uint64_t seed = 99;
};

struct EquivalenceVerdict {
    bool pass = true;
    std::string detail;

    explicit operator bool() const { return pass; }
};

namespace detail {

struct DisjointSets {
    std::vector<int> parent;

    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        }
        return x;
    }

    void unite(int a, int b) {
        parent[static_cast<std::size_t>(find(a))] = find(b);
    }
};

/// Haar-like single-qubit state from two uniform draws.
inline std::array<Amplitude, 2> random_bloch_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double theta = std::acos(1.0 - 2.0 * uniform(rng));
    double phi = 2.0 * M_PI * uniform(rng);
    return {Amplitude(std::cos(theta / 2.0)),
            std::exp(Amplitude(0.0, phi)) * std::sin(theta / 2.0)};
}

} // namespace detail

/// Simulates the original circuit and the mapped program on a shared set
/// of input states and compares outputs branch by branch. The mapped
/// register is split into independently evolving components so that idle
/// ancillas cost nothing; data qubits are compared through the final
/// permutation, ancilla pairs against their recorded Bell/|00> states.
/// Requires a measurement-free original circuit.
inline EquivalenceVerdict
check_equivalence(const Circuit& original, const RoutedProgram& mapped,
                  const EquivalenceOptions& options = {}) {
    for (const Gate& g : original.gates) {
        if (g.kind == GateKind::Measure || g.kind == GateKind::Reset) {
            throw SimulationLimitError(
                "equivalence checking requires a measurement-free circuit");
        }
    }
    const int n = original.qubit_count;
    const int m = mapped.circuit.qubit_count;
    if (static_cast<int>(mapped.initial_placement.size()) != n ||
        static_cast<int>(mapped.final_permutation.size()) != n) {
        throw Error("mapped program does not match the original's qubit count");
    }

    // Group physical qubits that interact through gates or classical bits.
    detail::DisjointSets sets(m);
    std::vector<int> creg_anchor(mapped.circuit.cregs.size(), -1);
    auto link_creg = [&](int creg, int qubit) {
        int& anchor = creg_anchor[static_cast<std::size_t>(creg)];
        if (anchor < 0) {
            anchor = qubit;
        } else {
            sets.unite(anchor, qubit);
        }
    };
    std::vector<char> touched(static_cast<std::size_t>(m), 0);
    for (const Gate& g : mapped.circuit.gates) {
        if (g.kind == GateKind::Barrier) {
            continue;
        }
        touched[static_cast<std::size_t>(g.q0)] = 1;
        if (g.kind == GateKind::CX) {
            touched[static_cast<std::size_t>(g.q1)] = 1;
            sets.unite(g.q0, g.q1);
        }
        if (g.kind == GateKind::Measure) {
            link_creg(mapped.circuit.creg_of_bit(g.cbit), g.q0);
        }
        if (g.cond.active()) {
            link_creg(g.cond.creg, g.q0);
        }
    }

    // Collect the components that need simulation: those holding data or
    // touched ancillas. Untouched |0> ancillas are trivially correct.
    std::vector<char> relevant(static_cast<std::size_t>(m), 0);
    for (int l = 0; l < n; ++l) {
        relevant[static_cast<std::size_t>(mapped.initial_placement[l])] = 1;
        relevant[static_cast<std::size_t>(mapped.final_permutation[l])] = 1;
    }
    for (const FinalChannel& fc : mapped.final_channels) {
        if (touched[static_cast<std::size_t>(fc.endpoint_a)] ||
            touched[static_cast<std::size_t>(fc.endpoint_b)]) {
            relevant[static_cast<std::size_t>(fc.endpoint_a)] = 1;
            relevant[static_cast<std::size_t>(fc.endpoint_b)] = 1;
        }
    }
    for (int q = 0; q < m; ++q) {
        if (touched[static_cast<std::size_t>(q)]) {
            relevant[static_cast<std::size_t>(q)] = 1;
        }
    }

    std::vector<std::vector<int>> components;
    {
        std::unordered_map<int, int> root_to_component;
        for (int q = 0; q < m; ++q) {
            if (!relevant[static_cast<std::size_t>(q)]) {
                continue;
            }
            int root = sets.find(q);
            auto it = root_to_component.find(root);
            if (it == root_to_component.end()) {
                root_to_component.emplace(root,
                                          static_cast<int>(components.size()));
                components.emplace_back();
                it = root_to_component.find(root);
            }
            components[static_cast<std::size_t>(it->second)].push_back(q);
        }
    }

    // Random product inputs over the data qubits, shared by all components.
    std::mt19937_64 rng(options.seed);
    std::vector<std::vector<std::array<Amplitude, 2>>> random_inputs;
    for (int s = 0; s < options.random_states; ++s) {
        std::vector<std::array<Amplitude, 2>> locals;
        locals.reserve(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            locals.push_back(detail::random_bloch_state(rng));
        }
        random_inputs.push_back(std::move(locals));
    }

    SimulatorOptions sim_options;
    sim_options.max_qubits = options.max_qubits;
    sim_options.merge_indistinguishable_branches = true;

    for (const std::vector<int>& component : components) {
        const int k = static_cast<int>(component.size());
        if (k > options.max_qubits) {
            throw SimulationLimitError(
                "component of " + std::to_string(k) +
                " qubits exceeds the simulation limit of " +
                std::to_string(options.max_qubits));
        }
        std::vector<int> compact(static_cast<std::size_t>(m), -1);
        for (int j = 0; j < k; ++j) {
            compact[static_cast<std::size_t>(component[static_cast<std::size_t>(j)])] = j;
        }

        // Logical qubits living in this component, in ascending order.
        std::vector<int> data;
        for (int l = 0; l < n; ++l) {
            if (compact[static_cast<std::size_t>(mapped.initial_placement[l])] >= 0) {
                data.push_back(l);
            }
        }
        for (int l : data) {
            if (compact[static_cast<std::size_t>(mapped.final_permutation[l])] < 0) {
                return {false, "logical qubit q" + std::to_string(l) +
                                   " leaves its interaction component"};
            }
        }

        // Restrictions of the two circuits to this component.
        Circuit original_sub;
        original_sub.qubit_count = std::max<int>(1, static_cast<int>(data.size()));
        std::vector<int> logical_compact(static_cast<std::size_t>(n), -1);
        for (std::size_t j = 0; j < data.size(); ++j) {
            logical_compact[static_cast<std::size_t>(data[j])] =
                static_cast<int>(j);
        }
        for (const Gate& g : original.gates) {
            if (g.kind == GateKind::Barrier) {
                continue;
            }
            bool in0 = logical_compact[static_cast<std::size_t>(g.q0)] >= 0;
            bool in1 = g.kind == GateKind::CX &&
                       logical_compact[static_cast<std::size_t>(g.q1)] >= 0;
            if (!in0 && !in1) {
                continue;
            }
            if (g.kind == GateKind::CX && (!in0 || !in1)) {
                return {false, "original gate straddles mapped components"};
            }
            Gate h = g;
            h.q0 = logical_compact[static_cast<std::size_t>(g.q0)];
            if (g.kind == GateKind::CX) {
                h.q1 = logical_compact[static_cast<std::size_t>(g.q1)];
            }
            original_sub.gates.push_back(h);
        }

        Circuit mapped_sub;
        mapped_sub.qubit_count = k;
        mapped_sub.cregs = mapped.circuit.cregs;
        for (const Gate& g : mapped.circuit.gates) {
            if (g.kind == GateKind::Barrier) {
                continue;
            }
            if (compact[static_cast<std::size_t>(g.q0)] < 0) {
                continue;
            }
            Gate h = g;
            h.q0 = compact[static_cast<std::size_t>(g.q0)];
            if (g.kind == GateKind::CX) {
                h.q1 = compact[static_cast<std::size_t>(g.q1)];
            }
            mapped_sub.gates.push_back(h);
        }

        // Ancilla expectations within the component.
        std::vector<std::pair<int, int>> bell_pairs;
        for (const FinalChannel& fc : mapped.final_channels) {
            int ca = compact[static_cast<std::size_t>(fc.endpoint_a)];
            int cb = compact[static_cast<std::size_t>(fc.endpoint_b)];
            if (ca >= 0 && fc.entangled) {
                if (cb < 0) {
                    return {false, "entangled pair straddles components"};
                }
                bell_pairs.emplace_back(ca, cb);
            }
        }

        auto run_case =
            [&](const std::vector<std::array<Amplitude, 2>>& locals)
            -> EquivalenceVerdict {
            // Original side.
            Statevector original_in;
            if (data.empty()) {
                original_in = basis_state(original_sub.qubit_count);
            } else {
                std::vector<std::array<Amplitude, 2>> sub_locals;
                for (int l : data) {
                    sub_locals.push_back(locals[static_cast<std::size_t>(l)]);
                }
                original_in = product_state(sub_locals);
            }
            auto original_out =
                simulate_branching(original_sub, std::move(original_in),
                                   sim_options);
            const Statevector& reference = original_out.front().amplitudes;

            // Mapped side.
            std::vector<std::array<Amplitude, 2>> mapped_locals(
                static_cast<std::size_t>(k),
                std::array<Amplitude, 2>{Amplitude(1.0), Amplitude(0.0)});
            for (int l : data) {
                mapped_locals[static_cast<std::size_t>(compact[static_cast<std::size_t>(
                    mapped.initial_placement[static_cast<std::size_t>(l)])])] =
                    locals[static_cast<std::size_t>(l)];
            }
            auto mapped_out = simulate_branching(
                mapped_sub, product_state(mapped_locals), sim_options);

            // Expected mapped state: original output at the permuted data
            // positions, Bell pairs on entangled channels, |0> elsewhere.
            // Only its nonzero amplitudes are enumerated.
            const double bell_factor =
                std::pow(1.0 / std::sqrt(2.0),
                         static_cast<double>(bell_pairs.size()));
            std::vector<std::size_t> data_bits(data.size());
            for (std::size_t j = 0; j < data.size(); ++j) {
                data_bits[j] = std::size_t{1}
                               << compact[static_cast<std::size_t>(
                                      mapped.final_permutation
                                          [static_cast<std::size_t>(data[j])])];
            }
            std::vector<std::size_t> bell_bits(bell_pairs.size());
            for (std::size_t j = 0; j < bell_pairs.size(); ++j) {
                bell_bits[j] =
                    (std::size_t{1} << bell_pairs[j].first) |
                    (std::size_t{1} << bell_pairs[j].second);
            }
            auto overlap_with_expected = [&](const Statevector& amps) {
                Amplitude overlap(0.0);
                const std::size_t data_cases = std::size_t{1} << data.size();
                const std::size_t bell_cases = std::size_t{1}
                                               << bell_pairs.size();
                for (std::size_t d = 0; d < data_cases; ++d) {
                    std::size_t base = 0;
                    for (std::size_t j = 0; j < data_bits.size(); ++j) {
                        if ((d >> j) & 1U) {
                            base |= data_bits[j];
                        }
                    }
                    Amplitude expected_amp =
                        std::conj(reference[d]) * bell_factor;
                    for (std::size_t b = 0; b < bell_cases; ++b) {
                        std::size_t idx = base;
                        for (std::size_t j = 0; j < bell_bits.size(); ++j) {
                            if ((b >> j) & 1U) {
                                idx |= bell_bits[j];
                            }
                        }
                        overlap += expected_amp * amps[idx];
                    }
                }
                return std::abs(overlap);
            };

            double total_probability = 0.0;
            for (const BranchState& branch : mapped_out) {
                total_probability += branch.probability;
                if (overlap_with_expected(branch.amplitudes) <
                    1.0 - options.tolerance) {
                    return {false, "branch output deviates from the original"};
                }
            }
            if (std::abs(total_probability - 1.0) > options.tolerance) {
                return {false, "branch probabilities do not sum to one"};
            }
            return {};
        };

        // Basis inputs (for small circuits) and random product inputs.
        if (static_cast<int>(data.size()) <= options.basis_enumeration_limit &&
            original.qubit_count <= options.basis_enumeration_limit) {
            std::vector<std::array<Amplitude, 2>> locals(
                static_cast<std::size_t>(n),
                std::array<Amplitude, 2>{Amplitude(1.0), Amplitude(0.0)});
            const std::size_t cases = std::size_t{1} << data.size();
            for (std::size_t bits = 0; bits < cases; ++bits) {
                for (std::size_t j = 0; j < data.size(); ++j) {
                    bool one = ((bits >> j) & 1U) != 0;
                    locals[static_cast<std::size_t>(data[j])] = {
                        Amplitude(one ? 0.0 : 1.0), Amplitude(one ? 1.0 : 0.0)};
                }
                EquivalenceVerdict v = run_case(locals);
                if (!v.pass) {
                    return v;
                }
            }
        }
        for (const auto& locals : random_inputs) {
            EquivalenceVerdict v = run_case(locals);
            if (!v.pass) {
                return v;
            }
        }
    }
    return {};
}

} // namespace telemap

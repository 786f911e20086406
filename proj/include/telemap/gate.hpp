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

namespace telemap {

enum class GateKind {
    H,
    X,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rz,
    Rx,
    Ry,
    U,
    CX,
    Measure,
    Reset,
    Barrier,
};

/// Classical condition `if (creg == value)` attached to a gate.
/// `creg` indexes Circuit::cregs; creg < 0 means unconditioned.
struct Condition {
    int creg = -1;
    long long value = 0;

    [[nodiscard]] bool active() const noexcept { return creg >= 0; }

    friend bool operator==(const Condition& a, const Condition& b) {
        if (a.creg < 0 && b.creg < 0) {
            return true;
        }
        return a.creg == b.creg && a.value == b.value;
    }
};

/// One circuit instruction. Qubit operands are register indices:
/// q0 is the sole operand of single-qubit kinds (and measure/reset),
/// CX uses q0 as control and q1 as target.
struct Gate {
    GateKind kind = GateKind::H;
    int q0 = -1;
    int q1 = -1;
    std::vector<double> params; // rz/rx/ry take 1 angle, u takes 3
    int cbit = -1;              // measure destination, flat classical index
    Condition cond;
    std::vector<int> barrier_qubits; // explicit barrier operands; empty = all

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.kind == b.kind && a.q0 == b.q0 && a.q1 == b.q1 &&
               a.params == b.params && a.cbit == b.cbit && a.cond == b.cond &&
               a.barrier_qubits == b.barrier_qubits;
    }
};

inline int gate_param_count(GateKind kind) {
    switch (kind) {
    case GateKind::Rz:
    case GateKind::Rx:
    case GateKind::Ry:
        return 1;
    case GateKind::U:
        return 3;
    default:
        return 0;
    }
}

inline bool is_single_qubit_unitary(GateKind kind) {
    switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::Sdg:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::Rz:
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::U:
        return true;
    default:
        return false;
    }
}

inline const char* gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rz: return "rz";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::U: return "u";
    case GateKind::CX: return "cx";
    case GateKind::Measure: return "measure";
    case GateKind::Reset: return "reset";
    case GateKind::Barrier: return "barrier";
    }
    return "?";
}

/// Convenience constructors used throughout routing and lowering.
inline Gate make_gate(GateKind kind, int q0) {
    Gate g;
    g.kind = kind;
    g.q0 = q0;
    return g;
}

inline Gate make_gate(GateKind kind, int q0, double angle) {
    Gate g;
    g.kind = kind;
    g.q0 = q0;
    g.params.push_back(angle);
    return g;
}

inline Gate make_cx(int control, int target) {
    Gate g;
    g.kind = GateKind::CX;
    g.q0 = control;
    g.q1 = target;
    return g;
}

inline Gate make_measure(int qubit, int cbit) {
    Gate g;
    g.kind = GateKind::Measure;
    g.q0 = qubit;
    g.cbit = cbit;
    return g;
}

} // namespace telemap

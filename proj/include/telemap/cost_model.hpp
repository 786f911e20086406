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
#include <tuple>

#include "telemap/error.hpp"

namespace telemap {

enum class MoveKind { Swap, Teleport };

/// A routing move. Swaps exchange the contents of a physical edge
/// {a, b}; teleports transfer the state at `a` to the far channel
/// endpoint `b` through the endpoint `via` adjacent to `a`.
struct Move {
    MoveKind kind = MoveKind::Swap;
    int a = -1;
    int b = -1;
    int via = -1;           // teleport only: E_near
    int channel_index = -1; // teleport only: index into the channel list

    /// Deterministic ordering used to break ties between equally cheap
    /// routes: swaps before teleports, then by sorted endpoints.
    [[nodiscard]] std::tuple<int, int, int, int> order_key() const {
        return {kind == MoveKind::Teleport ? 1 : 0, std::min(a, b),
                std::max(a, b), a};
    }

    friend bool operator==(const Move& x, const Move& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b && x.via == y.via;
    }
};

inline Move make_swap(int a, int b) {
    Move m;
    m.kind = MoveKind::Swap;
    m.a = std::min(a, b);
    m.b = std::max(a, b);
    return m;
}

inline Move make_teleport(int source, int via, int destination,
                          int channel_index) {
    Move m;
    m.kind = MoveKind::Teleport;
    m.a = source;
    m.b = destination;
    m.via = via;
    m.channel_index = channel_index;
    return m;
}

enum class CostModelKind { Equal, Ibm };

/// Per-primitive prices and the move prices derived from them. In equal
/// mode a swap and a teleport both cost one unit; in priced mode a swap
/// is three CNOTs and a teleport is two CNOTs, two Hadamards, two
/// measurements, and two worst-case corrections (resets priced at zero).
struct CostModel {
    CostModelKind kind = CostModelKind::Ibm;
    double cnot_price = 10.0;
    double single_qubit_price = 1.0;
    double measurement_price = 10.0;

    [[nodiscard]] double swap_cost() const {
        if (kind == CostModelKind::Equal) {
            return 1.0;
        }
        return 3.0 * cnot_price;
    }

    [[nodiscard]] double teleport_cost() const {
        if (kind == CostModelKind::Equal) {
            return 1.0;
        }
        return 2.0 * cnot_price + 2.0 * single_qubit_price +
               2.0 * measurement_price + 2.0 * single_qubit_price;
    }

    [[nodiscard]] std::string name() const {
        return kind == CostModelKind::Equal ? "equal" : "ibm";
    }
};

inline CostModel equal_cost_model() {
    CostModel m;
    m.kind = CostModelKind::Equal;
    return m;
}

/// Prices from the IBM Qiskit Developer Challenge cost function: 10 per
/// CNOT and measurement, 1 per single-qubit gate.
inline CostModel ibm_cost_model() {
    CostModel m;
    m.kind = CostModelKind::Ibm;
    return m;
}

inline CostModel make_cost_model(CostModelKind kind) {
    return kind == CostModelKind::Equal ? equal_cost_model()
                                        : ibm_cost_model();
}

inline double move_cost(const CostModel& model, const Move& move) {
    return move.kind == MoveKind::Swap ? model.swap_cost()
                                       : model.teleport_cost();
}

} // namespace telemap

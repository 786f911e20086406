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

namespace telemap {

enum class ChannelStatus { Established, Consumed };

/// An entangled ancilla pair usable as a transportation channel. The
/// endpoints are physical-qubit positions and move with the mapping; the
/// ancilla identities label which abstract ancilla sits at each endpoint.
struct Channel {
    int endpoint_a = -1;
    int endpoint_b = -1;
    ChannelStatus status = ChannelStatus::Established;
    int ancilla_a = -1;
    int ancilla_b = -1;

    [[nodiscard]] bool established() const noexcept {
        return status == ChannelStatus::Established;
    }

    [[nodiscard]] bool has_endpoint(int q) const noexcept {
        return endpoint_a == q || endpoint_b == q;
    }

    [[nodiscard]] int other_endpoint(int q) const noexcept {
        return endpoint_a == q ? endpoint_b : endpoint_a;
    }
};

} // namespace telemap

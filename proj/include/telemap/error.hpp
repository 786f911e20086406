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

#include <stdexcept>
#include <string>

namespace telemap {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Raised when OpenQASM input is rejected. Carries the source position.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, int line, int column)
        : Error(message + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line), column_(column) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

/// Raised when a search exceeds its node budget.
class SearchBudgetExceeded : public Error {
  public:
    explicit SearchBudgetExceeded(std::size_t budget)
        : Error("search expanded more than " + std::to_string(budget) +
                " nodes") {}
};

/// Raised when no valid initial placement is found within the attempt budget.
class PlacementError : public Error {
  public:
    using Error::Error;
};

/// Raised when a simulation would exceed the configured qubit limit or
/// encounters inputs the checker does not support.
class SimulationLimitError : public Error {
  public:
    using Error::Error;
};

} // namespace telemap

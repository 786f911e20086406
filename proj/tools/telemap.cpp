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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "telemap/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRouting = 2;
constexpr int kExitVerification = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw telemap::Error("cannot write '" + path + "'");
    }
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"telemap: quantum circuit mapper with SWAP, teleportation, "
                 "and bridge strategies"};

    telemap::RunOptions options;
    std::string strategy = "swap+teleport";
    std::string cost = "ibm";
    std::string lookahead = "on";
    std::string output_path;
    std::string csv_path;

    app.add_option("--input", options.input_path, "input OpenQASM 2.0 file")
        ->required();
    app.add_option("--arch", options.arch,
                   "coupling map: 'tokyo' or a JSON file");
    app.add_option("--strategy", strategy,
                   "routing strategy: swap, swap+teleport, or bridge")
        ->check(CLI::IsMember({"swap", "swap+teleport", "bridge"}));
    app.add_option("--cost", cost, "cost model: equal or ibm")
        ->check(CLI::IsMember({"equal", "ibm"}));
    app.add_option("--trials", options.trials,
                   "number of seeded initial mappings")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seed, "base seed; trial t uses seed+t");
    app.add_option("--lookahead", lookahead, "lookahead: on or off")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--output", output_path, "write the best mapped QASM here");
    app.add_option("--csv", csv_path, "append per-trial records here");
    app.add_flag("--verify", options.verify,
                 "check coupling constraints and functional equivalence");
    app.add_flag("--compare", options.compare,
                 "run both swap and swap+teleport and report the relative cost");
    app.add_flag("--timing", options.timing,
                 "record wall-clock milliseconds in the CSV (not reproducible "
                 "byte-for-byte across runs)");
    app.add_option("--node-budget", options.router.node_budget,
                   "A* node budget per layer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    options.strategy = strategy == "swap" ? telemap::Strategy::Swap
                       : strategy == "bridge"
                           ? telemap::Strategy::Bridge
                           : telemap::Strategy::SwapTeleport;
    options.cost = cost == "equal" ? telemap::CostModelKind::Equal
                                   : telemap::CostModelKind::Ibm;
    options.lookahead = lookahead == "on";

    try {
        telemap::RunOutcome outcome = telemap::run_benchmark(options);

        if (!csv_path.empty()) {
            write_file(csv_path, outcome.csv);
        }
        if (!output_path.empty()) {
            write_file(output_path, outcome.qasm);
        }

        for (const telemap::StrategyOutcome& so : outcome.strategies) {
            std::cout << outcome.name << ": "
                      << telemap::strategy_name(so.strategy)
                      << " best cost=" << so.best_stats.cost
                      << " swaps=" << so.best_stats.swaps
                      << " teleports=" << so.best_stats.teleports
                      << " (seed " << so.best_stats.seed << ")";
            if (so.verdict != "-") {
                std::cout << " verified=" << so.verdict;
            }
            std::cout << "\n";
        }
        if (!outcome.compare_line.empty()) {
            std::cout << outcome.compare_line << "\n";
        }
        if (outcome.verification_failed) {
            std::cerr << "verification FAILED\n";
            return kExitVerification;
        }
        return kExitOk;
    } catch (const telemap::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const telemap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRouting;
    }
}

// Copyright 2026 The RVQC Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rvqc: command-line front end.
//
//   rvqc run <config.json>
//   rvqc verify
//   rvqc dump-circuit <seed> <n_qubits> <gates> <out>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <rvqc/circuit.hpp>
#include <rvqc/harness.hpp>
#include <rvqc/verify.hpp>

namespace {

int cmd_verify(const std::string &fault) {
    rvqc::verify::Options opts;
    if (fault == "depolarizing-trace") {
        // leaks trace: keeps only the (1-p) branch
        opts.depolarizing = [](rvqc::DensityMatrix rho, std::size_t, double p) {
            return rvqc::DensityMatrix(rho.matrix() * (1.0 - p));
        };
    } else if (!fault.empty()) {
        std::cerr << "unknown fault '" << fault << "'\n";
        return 2;
    }
    const auto results = rvqc::verify::run_suite(opts);
    int failed = 0;
    for (const auto &r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        failed += r.passed ? 0 : 1;
    }
    if (failed > 0) {
        std::cout << failed << " of " << results.size() << " properties failed:";
        for (const auto &r : results) {
            if (!r.passed) {
                std::cout << ' ' << r.name;
            }
        }
        std::cout << '\n';
        return 1;
    }
    std::cout << "all " << results.size() << " properties passed\n";
    return 0;
}

int cmd_dump(std::uint64_t seed, std::size_t n, std::size_t gates, const std::string &out) {
    try {
        const auto c = rvqc::harness::generate_target(seed, n, gates);
        std::ofstream os(out);
        if (!os) {
            std::cerr << "cannot write '" << out << "'\n";
            return 2;
        }
        rvqc::write_circuit(os, c, {"master_seed " + std::to_string(seed)});
    } catch (const std::exception &e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Recursive variational circuit compression on simulated hardware"};
    app.require_subcommand(1);

    std::string config_path;
    auto *run = app.add_subcommand("run", "Run an experiment from a JSON configuration");
    run->add_option("config", config_path, "Experiment configuration file")->required();

    std::string fault;
    auto *verify = app.add_subcommand("verify", "Run the fixed cross-module invariant suite");
    verify->add_option("--inject-fault", fault, "Test hook: replace a component with a broken one")
        ->group("");

    std::uint64_t seed = 0;
    std::size_t n_qubits = 0;
    std::size_t gates = 0;
    std::string out;
    auto *dump = app.add_subcommand("dump-circuit", "Write the random target for a seed");
    dump->add_option("seed", seed)->required();
    dump->add_option("n", n_qubits)->required()->check(CLI::Range(1, 20));
    dump->add_option("gates", gates)->required();
    dump->add_option("out", out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    if (*run) {
        return rvqc::harness::run_experiment(config_path);
    }
    if (*verify) {
        return cmd_verify(fault);
    }
    return cmd_dump(seed, n_qubits, gates, out);
}

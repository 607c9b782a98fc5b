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
/**
 * @file
 * Experiment harness: strict JSON run configuration, seeded execution of
 * VQC / RVQC, and the on-disk outputs
 *
 *   target.circ           target circuit in the circuit text format
 *   training_log.csv      mode,step,epoch,train_cost,ideal_cost (flushed per epoch)
 *   fidelity_report.json  per-step fidelity triples and final summary
 *   manifest.json         resolved configuration, including the master seed
 *
 * Relative paths in the configuration are resolved against the directory
 * holding the configuration file.
 */
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuit.hpp"
#include "common.hpp"
#include "cost.hpp"
#include "density.hpp"
#include "driver.hpp"

namespace rvqc::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum class Mode { Vqc, Rvqc, Both };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct ExperimentConfig {
    Mode mode{Mode::Both};
    fs::path output_dir;
    std::uint64_t master_seed{0};
    std::size_t n_qubits{1};
    std::size_t target_gate_count{0};
    std::optional<fs::path> target_file;
    std::size_t n_parts{1};
    std::size_t ansatz_layers{0};
    std::size_t epochs_per_part{100};
    double tolerance{0.0};
    double learning_rate{0.1};
    std::size_t n_shots{8192};
    Backend train_backend{Backend::SampledNoisy};
    NoiseModel noise{1e-3, 1e-2, 2e-2};
    bool write_csv{true};
    bool write_json{true};
};

inline std::string mode_name(Mode m) {
    switch (m) {
    case Mode::Vqc:
        return "vqc";
    case Mode::Rvqc:
        return "rvqc";
    case Mode::Both:
        return "both";
    }
    return "?";
}

namespace detail {

inline const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys{
        "mode",         "output_dir",      "master_seed",   "n_qubits",
        "target_gate_count", "target_file", "n_parts",      "ansatz_layers",
        "epochs_per_part", "tolerance",    "learning_rate", "n_shots",
        "train_backend", "noise",          "report_formats"};
    return keys;
}

inline const json &require(const json &j, const std::string &key) {
    if (!j.contains(key)) {
        throw ConfigError("missing required key '" + key + "'");
    }
    return j.at(key);
}

inline std::uint64_t as_uint(const json &v, const std::string &key, std::uint64_t lo,
                             std::uint64_t hi) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        throw ConfigError("key '" + key + "' must be a nonnegative integer");
    }
    const auto x = v.get<std::uint64_t>();
    if (x < lo || x > hi) {
        throw ConfigError("key '" + key + "' must lie in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got " + std::to_string(x));
    }
    return x;
}

inline double as_real(const json &v, const std::string &key, double lo, double hi,
                      bool lo_open = false) {
    if (!v.is_number()) {
        throw ConfigError("key '" + key + "' must be a number");
    }
    const double x = v.get<double>();
    if (!(x <= hi) || (lo_open ? !(x > lo) : !(x >= lo))) {
        std::ostringstream os;
        os << "key '" << key << "' must lie in " << (lo_open ? "(" : "[") << lo << ", " << hi
           << "], got " << x;
        throw ConfigError(os.str());
    }
    return x;
}

inline std::string as_string(const json &v, const std::string &key) {
    if (!v.is_string()) {
        throw ConfigError("key '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

/**
 * Parse and validate a configuration document. Unknown keys are rejected
 * and every range is checked here, before anything runs.
 */
inline ExperimentConfig parse_config(const json &j, const fs::path &base_dir = {}) {
    using namespace detail;
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    for (const auto &[key, _] : j.items()) {
        if (!known_keys().contains(key)) {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    ExperimentConfig c;
    const auto mode = as_string(require(j, "mode"), "mode");
    if (mode == "vqc") {
        c.mode = Mode::Vqc;
    } else if (mode == "rvqc") {
        c.mode = Mode::Rvqc;
    } else if (mode == "both") {
        c.mode = Mode::Both;
    } else {
        throw ConfigError("key 'mode' must be one of vqc, rvqc, both");
    }
    c.output_dir = base_dir / fs::path(as_string(require(j, "output_dir"), "output_dir"));
    c.master_seed = as_uint(require(j, "master_seed"), "master_seed", 0, UINT64_MAX);
    c.n_qubits = as_uint(require(j, "n_qubits"), "n_qubits", 1, kMaxDensityQubits);
    if (j.contains("target_file")) {
        c.target_file = base_dir / fs::path(as_string(j.at("target_file"), "target_file"));
        if (j.contains("target_gate_count")) {
            throw ConfigError("keys 'target_file' and 'target_gate_count' are exclusive");
        }
    } else {
        c.target_gate_count =
            as_uint(require(j, "target_gate_count"), "target_gate_count", 0, 10'000'000);
    }
    c.n_parts = as_uint(require(j, "n_parts"), "n_parts", 1, 1'000'000);
    c.ansatz_layers = as_uint(require(j, "ansatz_layers"), "ansatz_layers", 0, 1000);
    c.epochs_per_part = as_uint(require(j, "epochs_per_part"), "epochs_per_part", 1, 1'000'000);
    c.learning_rate = as_real(require(j, "learning_rate"), "learning_rate", 0.0, 1e6, true);
    const auto backend = as_string(require(j, "train_backend"), "train_backend");
    if (auto b = backend_from_name(backend)) {
        c.train_backend = *b;
    } else {
        throw ConfigError("key 'train_backend' must be one of exact-ideal, sampled-ideal, "
                          "sampled-noisy");
    }
    if (j.contains("tolerance")) {
        c.tolerance = as_real(j.at("tolerance"), "tolerance", 0.0, 1.0);
    }
    if (j.contains("n_shots")) {
        c.n_shots = as_uint(j.at("n_shots"), "n_shots", 1, 1'000'000'000);
    }
    if (j.contains("noise")) {
        const auto &nz = j.at("noise");
        if (!nz.is_object()) {
            throw ConfigError("key 'noise' must be an object");
        }
        for (const auto &[key, _] : nz.items()) {
            if (key != "p1" && key != "p2" && key != "p_readout") {
                throw ConfigError("unknown key 'noise." + key + "'");
            }
        }
        c.noise.p1 = as_real(require(nz, "p1"), "noise.p1", 0.0, 1.0);
        c.noise.p2 = as_real(require(nz, "p2"), "noise.p2", 0.0, 1.0);
        c.noise.p_readout = as_real(require(nz, "p_readout"), "noise.p_readout", 0.0, 0.5);
    }
    if (j.contains("report_formats")) {
        const auto &rf = j.at("report_formats");
        if (!rf.is_array() || rf.empty()) {
            throw ConfigError("key 'report_formats' must be a non-empty array");
        }
        c.write_csv = false;
        c.write_json = false;
        for (const auto &f : rf) {
            const auto s = as_string(f, "report_formats");
            if (s == "csv") {
                c.write_csv = true;
            } else if (s == "json") {
                c.write_json = true;
            } else {
                throw ConfigError("report_formats entries must be 'csv' or 'json'");
            }
        }
    }
    return c;
}

inline ExperimentConfig load_config(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read configuration file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
    return parse_config(j, path.parent_path());
}

inline json config_to_json(const ExperimentConfig &c) {
    json j;
    j["mode"] = mode_name(c.mode);
    j["output_dir"] = c.output_dir.string();
    j["master_seed"] = c.master_seed;
    j["n_qubits"] = c.n_qubits;
    if (c.target_file) {
        j["target_file"] = c.target_file->string();
    } else {
        j["target_gate_count"] = c.target_gate_count;
    }
    j["n_parts"] = c.n_parts;
    j["ansatz_layers"] = c.ansatz_layers;
    j["epochs_per_part"] = c.epochs_per_part;
    j["tolerance"] = c.tolerance;
    j["learning_rate"] = c.learning_rate;
    j["n_shots"] = c.n_shots;
    j["train_backend"] = backend_name(c.train_backend);
    j["noise"] = {{"p1", c.noise.p1}, {"p2", c.noise.p2}, {"p_readout", c.noise.p_readout}};
    json formats = json::array();
    if (c.write_csv) {
        formats.push_back("csv");
    }
    if (c.write_json) {
        formats.push_back("json");
    }
    j["report_formats"] = formats;
    return j;
}

/// Target generation shared by `run` and `dump-circuit`.
inline Circuit generate_target(std::uint64_t master_seed, std::size_t n_qubits,
                               std::size_t gate_count) {
    Rng rng = Rng::substream(master_seed, {tag(Stream::Target)});
    return random_circuit(n_qubits, gate_count, rng);
}

inline Circuit load_target(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read target file '" + path.string() + "'");
    }
    try {
        return read_circuit(in);
    } catch (const UsageError &e) {
        throw ConfigError(std::string("bad target file: ") + e.what());
    }
}

inline json report_to_json(const RunRecord &rec) {
    json steps = json::array();
    for (const auto &s : rec.steps) {
        steps.push_back({{"step", s.step},
                         {"part_gate_count", s.part_gate_count},
                         {"epochs_run", s.epochs.size()},
                         {"best_epoch", s.best_epoch},
                         {"best_train_cost", s.epochs[s.best_epoch].train_cost},
                         {"best_ideal_cost", s.epochs[s.best_epoch].ideal_cost},
                         {"ideal_ansatz_vs_ideal_target", s.fidelity_ideal_ansatz},
                         {"noisy_ansatz_vs_ideal_target", s.fidelity_noisy_ansatz},
                         {"noisy_target_vs_ideal_target", s.fidelity_noisy_target},
                         {"max_cost_circuit_gates", s.max_cost_circuit_gates}});
    }
    json j;
    j["complete"] = !rec.aborted;
    if (rec.aborted) {
        j["abort_reason"] = rec.abort_reason;
    }
    j["ansatz_gate_count"] = rec.ansatz_gate_count;
    j["steps"] = steps;
    if (!rec.steps.empty()) {
        const auto rep = fidelity_report(rec);
        j["final"] = {{"step", rep.final_row.step},
                      {"ideal_ansatz_vs_ideal_target", rep.final_row.ideal_ansatz},
                      {"noisy_ansatz_vs_ideal_target", rep.final_row.noisy_ansatz},
                      {"noisy_target_vs_ideal_target", rep.final_row.noisy_target}};
    } else {
        j["final"] = nullptr;
    }
    return j;
}

/**
 * Run one experiment from a parsed configuration. Returns the process exit
 * status: 0 on success, 3 if a run aborted on a numerical error (logs
 * written so far are kept).
 */
inline int run_experiment(const ExperimentConfig &cfg, std::ostream &log = std::cout) {
    fs::create_directories(cfg.output_dir);

    Circuit target = cfg.target_file
                         ? load_target(*cfg.target_file)
                         : generate_target(cfg.master_seed, cfg.n_qubits, cfg.target_gate_count);
    if (target.n_qubits() != cfg.n_qubits) {
        throw ConfigError("target file has " + std::to_string(target.n_qubits()) +
                          " qubits but n_qubits is " + std::to_string(cfg.n_qubits));
    }

    CompileConfig cc;
    cc.target = target;
    cc.n_parts = cfg.n_parts;
    cc.ansatz = AnsatzSpec{cfg.n_qubits, cfg.ansatz_layers};
    cc.epochs_per_part = cfg.epochs_per_part;
    cc.tolerance = cfg.tolerance;
    cc.learning_rate = cfg.learning_rate;
    cc.n_shots = cfg.n_shots;
    cc.train_backend = cfg.train_backend;
    cc.noise = cfg.noise;
    cc.master_seed = cfg.master_seed;
    cc.validate();

    {
        std::ofstream out(cfg.output_dir / "target.circ");
        write_circuit(out, target,
                      {"master_seed " + std::to_string(cfg.master_seed),
                       cfg.target_file ? "source file " + cfg.target_file->string()
                                       : "source random_circuit gates " +
                                             std::to_string(cfg.target_gate_count)});
    }

    json manifest;
    manifest["master_seed"] = cfg.master_seed;
    manifest["config"] = config_to_json(cfg);
    manifest["resolved"] = {{"target_gate_count", target.size()},
                            {"ansatz_param_count", cc.ansatz.param_count()},
                            {"ansatz_gate_count", cc.ansatz.gate_count()},
                            {"rvqc_parts", cfg.n_parts},
                            {"vqc_epochs", cfg.n_parts * cfg.epochs_per_part},
                            {"depth_convention", "gate count"}};
    {
        std::ofstream out(cfg.output_dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }

    std::ofstream csv;
    if (cfg.write_csv) {
        csv.open(cfg.output_dir / "training_log.csv");
        csv << "mode,step,epoch,train_cost,ideal_cost\n" << std::flush;
    }

    json report;
    report["master_seed"] = cfg.master_seed;
    report["runs"] = json::object();
    auto write_report = [&] {
        if (cfg.write_json) {
            std::ofstream out(cfg.output_dir / "fidelity_report.json");
            out << report.dump(2) << '\n';
        }
    };

    auto execute = [&](const std::string &name, CompileConfig run_cfg) {
        RunHooks hooks;
        hooks.on_epoch = [&](std::size_t step, const EpochLog &e) {
            if (csv.is_open()) {
                csv << name << ',' << step << ',' << e.epoch << ',' << detail::fmt17(e.train_cost)
                    << ',' << detail::fmt17(e.ideal_cost) << '\n'
                    << std::flush;
            }
        };
        const RunRecord rec = run_rvqc(run_cfg, hooks);
        report["runs"][name] = report_to_json(rec);
        write_report();
        for (const auto &s : rec.steps) {
            log << name << " step " << s.step << "/" << run_cfg.n_parts << ": best cost "
                << s.epochs[s.best_epoch].train_cost << " at epoch " << s.best_epoch
                << ", F_ideal " << s.fidelity_ideal_ansatz << ", F_noisy "
                << s.fidelity_noisy_ansatz << " (" << s.wall_seconds << " s)\n";
        }
        if (rec.aborted) {
            log << name << " aborted: " << rec.abort_reason << '\n';
        }
        return !rec.aborted;
    };

    bool ok = true;
    if (cfg.mode == Mode::Rvqc || cfg.mode == Mode::Both) {
        ok = execute("rvqc", cc);
    }
    if (ok && (cfg.mode == Mode::Vqc || cfg.mode == Mode::Both)) {
        CompileConfig vqc = cc;
        vqc.n_parts = 1;
        vqc.epochs_per_part = cfg.n_parts * cfg.epochs_per_part;
        ok = execute("vqc", vqc);
    }
    write_report();
    return ok ? kExitOk : kExitNumerical;
}

/// File-level entry point with the documented exit statuses.
inline int run_experiment(const fs::path &config_path, std::ostream &log = std::cout,
                          std::ostream &err = std::cerr) {
    try {
        return run_experiment(load_config(config_path), log);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace rvqc::harness

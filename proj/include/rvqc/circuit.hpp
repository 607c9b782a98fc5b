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
 * Circuit intermediate representation.
 *
 * A Circuit is an ordered gate list; list order is execution order, so the
 * operator product U_N ... U_1 of parts is `concat(U_1, ..., U_N)`.
 * "Depth" everywhere in this library means gate count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "gate.hpp"

namespace rvqc {

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::size_t n_qubits, std::string label = {})
        : n_qubits_{n_qubits}, label_{std::move(label)} {
        if (n_qubits == 0) {
            throw UsageError("Circuit: n_qubits must be positive");
        }
    }

    Circuit(std::size_t n_qubits, std::vector<Gate> gates, std::string label = {})
        : Circuit(n_qubits, std::move(label)) {
        gates_.reserve(gates.size());
        for (auto &g : gates) {
            push(g);
        }
    }

    void push(const Gate &g) {
        check_gate(g);
        gates_.push_back(g);
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }
    [[nodiscard]] bool empty() const { return gates_.empty(); }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] const std::string &label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    [[nodiscard]] auto begin() const { return gates_.begin(); }
    [[nodiscard]] auto end() const { return gates_.end(); }
    const Gate &operator[](std::size_t i) const { return gates_[i]; }

    /// Gate-for-gate equality; labels are ignored.
    bool operator==(const Circuit &o) const {
        return n_qubits_ == o.n_qubits_ && gates_ == o.gates_;
    }

  private:
    void check_gate(const Gate &g) const {
        for (std::size_t i = 0; i < g.arity(); ++i) {
            if (g.qubits[i] >= n_qubits_) {
                throw UsageError("Circuit: qubit index " + std::to_string(g.qubits[i]) +
                                 " out of range for " + std::to_string(n_qubits_) +
                                 " qubits");
            }
        }
        if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
            throw UsageError("Circuit: 2-qubit gate on repeated qubit");
        }
        if (is_rotation(g.kind) && !std::isfinite(g.angle)) {
            throw UsageError("Circuit: non-finite rotation angle");
        }
    }

    std::size_t n_qubits_{1};
    std::vector<Gate> gates_;
    std::string label_;
};

/// Gates of `a` followed by gates of `b`.
inline Circuit concat(const Circuit &a, const Circuit &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw UsageError("concat: qubit-count mismatch (" + std::to_string(a.n_qubits()) +
                         " vs " + std::to_string(b.n_qubits()) + ")");
    }
    std::vector<Gate> gates;
    gates.reserve(a.size() + b.size());
    gates.insert(gates.end(), a.begin(), a.end());
    gates.insert(gates.end(), b.begin(), b.end());
    return Circuit(a.n_qubits(), std::move(gates));
}

inline Circuit concat(const std::vector<Circuit> &parts) {
    if (parts.empty()) {
        throw UsageError("concat: no parts");
    }
    Circuit out(parts.front().n_qubits());
    for (const auto &p : parts) {
        out = concat(out, p);
    }
    return out;
}

/// Reverse order and adjoint each gate.
inline Circuit inverse(const Circuit &c) {
    std::vector<Gate> gates;
    gates.reserve(c.size());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        gates.push_back(adjoint(*it));
    }
    return Circuit(c.n_qubits(), std::move(gates),
                   c.label().empty() ? std::string{} : c.label() + "^dag");
}

/**
 * Contiguous, order-preserving partition into `n_parts` blocks whose sizes
 * differ by at most one. Earlier parts take the remainder: 7 gates into 3
 * parts gives sizes {3, 2, 2}.
 */
inline std::vector<Circuit> split(const Circuit &c, std::size_t n_parts) {
    if (n_parts == 0) {
        throw UsageError("split: n_parts must be positive");
    }
    const std::size_t base = c.size() / n_parts;
    const std::size_t extra = c.size() % n_parts;
    std::vector<Circuit> parts;
    parts.reserve(n_parts);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n_parts; ++k) {
        const std::size_t len = base + (k < extra ? 1 : 0);
        std::vector<Gate> gates(c.gates().begin() + static_cast<std::ptrdiff_t>(pos),
                                c.gates().begin() + static_cast<std::ptrdiff_t>(pos + len));
        parts.emplace_back(c.n_qubits(), std::move(gates), "U_" + std::to_string(k + 1));
        pos += len;
    }
    return parts;
}

/**
 * Random target circuit: kind uniform over all nine kinds, support qubits
 * uniform without replacement, rotation angles uniform on [-pi, pi).
 * On a single qubit a drawn 2-qubit kind is redrawn from the 1-qubit kinds.
 */
inline Circuit random_circuit(std::size_t n_qubits, std::size_t gate_count, Rng &rng) {
    Circuit c(n_qubits, "U");
    constexpr std::size_t n_single = 7; // kAllGateKinds[0..7) are 1-qubit
    for (std::size_t i = 0; i < gate_count; ++i) {
        GateKind kind = kAllGateKinds[rng.index(kAllGateKinds.size())];
        if (n_qubits == 1 && arity(kind) == 2) {
            kind = kAllGateKinds[rng.index(n_single)];
        }
        if (arity(kind) == 2) {
            const std::size_t q0 = rng.index(n_qubits);
            std::size_t q1 = rng.index(n_qubits - 1);
            if (q1 >= q0) {
                ++q1;
            }
            c.push(Gate::two(kind, q0, q1));
        } else {
            const std::size_t q = rng.index(n_qubits);
            if (is_rotation(kind)) {
                c.push(Gate::rotation(kind, q, rng.uniform(-kPi, kPi)));
            } else {
                c.push(Gate::single(kind, q));
            }
        }
    }
    return c;
}

/**
 * Shape of the layered ansatz: an RyRz block, then `n_ent_layers` repeats
 * of [CNOT ladder, RyRz block].
 */
struct AnsatzSpec {
    std::size_t n_qubits{1};
    std::size_t n_ent_layers{0};

    [[nodiscard]] std::size_t param_count() const { return 2 * n_qubits * (n_ent_layers + 1); }
    [[nodiscard]] std::size_t cnot_count() const {
        return (n_qubits - 1) * n_ent_layers;
    }
    [[nodiscard]] std::size_t gate_count() const { return param_count() + cnot_count(); }

    bool operator==(const AnsatzSpec &) const = default;
};

/// Trainable rotation angles (radians), one per ansatz parameter slot.
class ParamVector {
  public:
    ParamVector() = default;
    explicit ParamVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
    explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}
    ParamVector(std::initializer_list<double> values) : values_(values) {}

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    double &operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const std::vector<double> &values() const { return values_; }
    [[nodiscard]] auto begin() const { return values_.begin(); }
    [[nodiscard]] auto end() const { return values_.end(); }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(),
                           [](double v) { return std::isfinite(v); });
    }

    bool operator==(const ParamVector &) const = default;

  private:
    std::vector<double> values_;
};

/**
 * Build V(params). Within each RyRz block parameters are consumed as: Ry on
 * qubits 0..n-1, then Rz on qubits 0..n-1. The ladder is CNOT(0,1),
 * CNOT(1,2), ..., CNOT(n-2,n-1).
 */
inline Circuit build_ansatz(const AnsatzSpec &spec, const ParamVector &params) {
    if (params.size() != spec.param_count()) {
        throw UsageError("build_ansatz: expected " + std::to_string(spec.param_count()) +
                         " parameters, got " + std::to_string(params.size()));
    }
    const std::size_t n = spec.n_qubits;
    Circuit c(n, "V");
    std::size_t pid = 0;
    auto rotation_block = [&] {
        for (auto kind : {GateKind::Ry, GateKind::Rz}) {
            for (std::size_t q = 0; q < n; ++q) {
                c.push(Gate::rotation(kind, q, params[pid], pid));
                ++pid;
            }
        }
    };
    rotation_block();
    for (std::size_t layer = 0; layer < spec.n_ent_layers; ++layer) {
        for (std::size_t q = 0; q + 1 < n; ++q) {
            c.push(Gate::cnot(q, q + 1));
        }
        rotation_block();
    }
    return c;
}

/// i.i.d. uniform on [-pi, pi).
inline ParamVector init_params(const AnsatzSpec &spec, Rng &rng) {
    ParamVector p(spec.param_count());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform(-kPi, kPi);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Text format
//
//   # qubits <n>
//   KIND q0[,q1][,angle]
//
// Angles are written with 17 significant digits so a reload is bit-exact.
// Other lines starting with '#' and blank lines are ignored.
// ---------------------------------------------------------------------------

inline std::string format_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    return buf;
}

inline void write_circuit(std::ostream &os, const Circuit &c,
                          const std::vector<std::string> &comments = {}) {
    os << "# qubits " << c.n_qubits() << '\n';
    for (const auto &line : comments) {
        os << "# " << line << '\n';
    }
    for (const auto &g : c) {
        os << kind_name(g.kind) << ' ' << g.qubits[0];
        if (g.arity() == 2) {
            os << ',' << g.qubits[1];
        }
        if (is_rotation(g.kind)) {
            os << ',' << format_angle(g.angle);
        }
        os << '\n';
    }
}

inline std::string to_text(const Circuit &c) {
    std::ostringstream os;
    write_circuit(os, c);
    return os.str();
}

inline Circuit read_circuit(std::istream &is) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t n_qubits = 0;
    std::vector<Gate> gates;
    auto fail = [&](const std::string &msg) {
        throw UsageError("circuit text line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "qubits") {
                if (!(hs >> n_qubits) || n_qubits == 0) {
                    fail("bad qubit count");
                }
            }
            continue;
        }
        const auto sp = line.find(' ');
        if (sp == std::string::npos) {
            fail("expected 'KIND operands'");
        }
        const auto kind = kind_from_name(line.substr(0, sp));
        if (!kind) {
            fail("unknown gate kind '" + line.substr(0, sp) + "'");
        }
        std::vector<std::string> fields;
        std::istringstream fs(line.substr(sp + 1));
        for (std::string f; std::getline(fs, f, ',');) {
            fields.push_back(f);
        }
        const std::size_t want = arity(*kind) + (is_rotation(*kind) ? 1 : 0);
        if (fields.size() != want) {
            fail("expected " + std::to_string(want) + " operands");
        }
        Gate g{*kind, {0, 0}, 0.0, {}};
        try {
            for (std::size_t i = 0; i < arity(*kind); ++i) {
                std::size_t used = 0;
                g.qubits[i] = std::stoul(fields[i], &used);
                if (used != fields[i].size()) {
                    fail("bad qubit index");
                }
            }
            if (arity(*kind) == 1) {
                g.qubits[1] = g.qubits[0];
            }
            if (is_rotation(*kind)) {
                std::size_t used = 0;
                g.angle = std::stod(fields.back(), &used);
                if (used != fields.back().size()) {
                    fail("bad angle");
                }
            }
        } catch (const UsageError &) {
            throw;
        } catch (const std::logic_error &) {
            fail("unparsable operand");
        }
        gates.push_back(g);
    }
    if (n_qubits == 0) {
        throw UsageError("circuit text: missing '# qubits <n>' header");
    }
    return Circuit(n_qubits, std::move(gates), "U");
}

inline Circuit from_text(const std::string &text) {
    std::istringstream is(text);
    return read_circuit(is);
}

} // namespace rvqc

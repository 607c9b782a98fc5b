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
 * Noisy simulation with density matrices: per-gate depolarizing noise,
 * classical readout error, and state fidelity.
 *
 * The density matrix is stored column-major, so entry (r, c) sits at flat
 * index c*d + r. Row qubit q is bit n-1-q and column qubit q is bit
 * 2n-1-q of that index; gate conjugation rho -> G rho G^dag is G on the
 * row bits and conj(G) on the column bits.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circuit.hpp"
#include "common.hpp"
#include "kernels.hpp"
#include "statevec.hpp"
#include "unitary.hpp"

namespace rvqc {

inline constexpr std::size_t kMaxDensityQubits = 10;
inline constexpr double kClipTolerance = 1e-9;

class DensityMatrix {
  public:
    DensityMatrix() = default;

    explicit DensityMatrix(Matrix entries) : rho_(std::move(entries)) {
        const auto d = static_cast<std::size_t>(rho_.rows());
        if (rho_.rows() != rho_.cols() || d < 2 || (d & (d - 1)) != 0) {
            throw UsageError("DensityMatrix: must be square with power-of-two dimension");
        }
        while ((std::size_t{1} << n_qubits_) < d) {
            ++n_qubits_;
        }
        if (n_qubits_ > kMaxDensityQubits) {
            throw ConfigError("DensityMatrix: at most " + std::to_string(kMaxDensityQubits) +
                              " qubits supported");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    [[nodiscard]] const Matrix &matrix() const { return rho_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    [[nodiscard]] std::span<Complex> flat() {
        return {rho_.data(), static_cast<std::size_t>(rho_.size())};
    }

    [[nodiscard]] double trace() const { return rho_.trace().real(); }
    [[nodiscard]] double purity() const { return (rho_ * rho_).trace().real(); }

    static DensityMatrix maximally_mixed(std::size_t n_qubits) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
        return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
    }

  private:
    std::size_t n_qubits_{0};
    Matrix rho_;
};

/**
 * Synthetic device noise: depolarizing probability after each 1-qubit gate
 * (p1), per support qubit after each 2-qubit gate (p2), and an independent
 * per-qubit bit-flip at readout.
 */
struct NoiseModel {
    double p1{0.0};
    double p2{0.0};
    double p_readout{0.0};

    [[nodiscard]] bool is_noiseless() const {
        return p1 == 0.0 && p2 == 0.0 && p_readout == 0.0;
    }

    void validate() const {
        auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!in01(p1) || !in01(p2)) {
            throw ConfigError("NoiseModel: p1 and p2 must lie in [0, 1]");
        }
        if (!(p_readout >= 0.0 && p_readout <= 0.5)) {
            throw ConfigError("NoiseModel: p_readout must lie in [0, 0.5]");
        }
    }

    bool operator==(const NoiseModel &) const = default;
};

inline DensityMatrix density_from_state(const StateVector &psi) {
    const auto d = static_cast<Eigen::Index>(psi.dim());
    Eigen::Map<const Eigen::VectorXcd> v(psi.data().data(), d);
    return DensityMatrix(v * v.adjoint());
}

/// rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on `qubit`.
inline void depolarize_inplace(DensityMatrix &rho, std::size_t qubit, double p) {
    if (qubit >= rho.n_qubits()) {
        throw UsageError("apply_depolarizing: qubit out of range");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw UsageError("apply_depolarizing: p must lie in [0, 1]");
    }
    if (p == 0.0) {
        return;
    }
    const std::size_t n = rho.n_qubits();
    const std::size_t row_bit = n - 1 - qubit;
    const std::size_t col_bit = 2 * n - 1 - qubit;
    const double keep = 1.0 - 2.0 * p / 3.0;
    const double move = 2.0 * p / 3.0;
    const double coherence = 1.0 - 4.0 * p / 3.0;
    auto data = rho.flat();
    // quad order: (row0,col0), (row1,col0), (row0,col1), (row1,col1)
    kernels::detail::for_each_quad(
        data.size(), col_bit, row_bit,
        [&](std::size_t i00, std::size_t i_r1, std::size_t i_c1, std::size_t i11) {
            const Complex a = data[i00];
            const Complex d = data[i11];
            data[i00] = keep * a + move * d;
            data[i11] = keep * d + move * a;
            data[i_r1] *= coherence;
            data[i_c1] *= coherence;
        });
}

inline DensityMatrix apply_depolarizing(DensityMatrix rho, std::size_t qubit, double p) {
    depolarize_inplace(rho, qubit, p);
    return rho;
}

/// rho -> G rho G^dag without forming G.
inline void conjugate_inplace(DensityMatrix &rho, const Gate &g) {
    const std::size_t n = rho.n_qubits();
    auto data = rho.flat();
    kernels::apply_gate(data, n, 0, g);
    kernels::apply_gate(data, n, n, g, /*conjugate=*/true);
}

/**
 * Each gate is applied as a unitary conjugation followed by depolarizing
 * noise on its support qubits (p1 for 1-qubit gates, p2 on each qubit of a
 * 2-qubit gate). Readout error is not part of the evolution.
 */
inline DensityMatrix evolve_density(DensityMatrix rho, const Circuit &c, const NoiseModel &noise) {
    if (c.n_qubits() != rho.n_qubits()) {
        throw UsageError("evolve_density: circuit has " + std::to_string(c.n_qubits()) +
                         " qubits, density matrix has " + std::to_string(rho.n_qubits()));
    }
    for (const auto &g : c) {
        conjugate_inplace(rho, g);
        if (g.arity() == 1) {
            depolarize_inplace(rho, g.qubits[0], noise.p1);
        } else {
            depolarize_inplace(rho, g.qubits[0], noise.p2);
            depolarize_inplace(rho, g.qubits[1], noise.p2);
        }
    }
    return rho;
}

/// Apply independent per-qubit bit-flip confusion to a probability vector.
inline void apply_readout_error(std::span<double> probs, std::size_t n_qubits, double p_flip) {
    if (p_flip == 0.0) {
        return;
    }
    for (std::size_t q = 0; q < n_qubits; ++q) {
        const std::size_t stride = std::size_t{1} << (n_qubits - 1 - q);
        for (std::size_t i = 0; i < probs.size(); i += 2 * stride) {
            for (std::size_t j = i; j < i + stride; ++j) {
                const double a = probs[j];
                const double b = probs[j + stride];
                probs[j] = (1.0 - p_flip) * a + p_flip * b;
                probs[j + stride] = p_flip * a + (1.0 - p_flip) * b;
            }
        }
    }
}

/**
 * Outcome distribution of measuring every qubit, including readout error.
 * Diagonal entries in (-1e-9, 0) are clipped to zero and the vector is
 * renormalized; anything more negative means upstream corruption.
 */
inline std::vector<double> measurement_probs(const DensityMatrix &rho, const NoiseModel &noise) {
    const std::size_t d = rho.dim();
    std::vector<double> probs(d);
    bool clipped = false;
    for (std::size_t i = 0; i < d; ++i) {
        double p = rho(i, i).real();
        if (p < 0.0) {
            if (p < -kClipTolerance) {
                throw NumericalError("measurement_probs: diagonal entry " + std::to_string(i) +
                                     " is " + std::to_string(p));
            }
            p = 0.0;
            clipped = true;
        }
        probs[i] = p;
    }
    if (clipped) {
        double s = 0.0;
        for (double p : probs) {
            s += p;
        }
        for (double &p : probs) {
            p /= s;
        }
    }
    apply_readout_error(probs, rho.n_qubits(), noise.p_readout);
    return probs;
}

/// <psi| rho |psi>.
inline double fidelity_pure(const StateVector &psi, const DensityMatrix &rho) {
    if (psi.dim() != rho.dim()) {
        throw UsageError("fidelity_pure: dimension mismatch");
    }
    const auto d = static_cast<Eigen::Index>(psi.dim());
    Eigen::Map<const Eigen::VectorXcd> v(psi.data().data(), d);
    const double f = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    return std::clamp(f, 0.0, 1.0);
}

inline constexpr std::size_t kMaxFidelityDim = 64;

namespace detail {

/// Eigenvalues below this fraction of the largest are rounding noise; sqrt would amplify them.
inline double eigen_floor(const Eigen::VectorXd &ev) {
    return 64.0 * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
}

inline Matrix psd_sqrt(const Matrix &m, const char *who) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) {
        throw NumericalError(std::string(who) + ": eigendecomposition failed");
    }
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -kClipTolerance) {
        throw NumericalError(std::string(who) + ": input is not positive semidefinite (eigenvalue " +
                             std::to_string(ev.minCoeff()) + ")");
    }
    const double floor = eigen_floor(ev);
    ev = ev.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline double fidelity_general(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw UsageError("fidelity_general: dimension mismatch");
    }
    if (rho.dim() > kMaxFidelityDim) {
        throw ConfigError("fidelity_general: dimension above " + std::to_string(kMaxFidelityDim));
    }
    const Matrix sr = detail::psd_sqrt(rho.matrix(), "fidelity_general");
    // validates sigma
    (void)detail::psd_sqrt(sigma.matrix(), "fidelity_general");
    Matrix inner = sr * sigma.matrix() * sr;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
    const double floor = detail::eigen_floor(es.eigenvalues());
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double x = es.eigenvalues()(i);
        tr += x > floor ? std::sqrt(x) : 0.0;
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

/// Hermiticity / trace / PSD diagnostics for a density matrix.
struct DensityCheck {
    double hermiticity_error{0.0};
    double trace_error{0.0};
    double min_eigenvalue{0.0};

    [[nodiscard]] bool ok(double herm_tol = 1e-10, double trace_tol = 1e-10,
                          double psd_tol = 1e-9) const {
        return hermiticity_error <= herm_tol && trace_error <= trace_tol &&
               min_eigenvalue >= -psd_tol;
    }
};

inline DensityCheck check_density(const DensityMatrix &rho) {
    DensityCheck out;
    out.hermiticity_error = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
    out.trace_error = std::abs(rho.matrix().trace() - Complex{1.0, 0.0});
    const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    return out;
}

} // namespace rvqc

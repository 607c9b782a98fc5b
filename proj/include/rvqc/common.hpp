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
 * Error types, scalar aliases and the seeded random stream shared by every
 * module.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace rvqc {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Caller violated a precondition (bad qubit index, shape mismatch, ...).
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A resource guard or configuration range was violated.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values or inputs outside a numerical domain (e.g. non-PSD).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

} // namespace detail

/**
 * Seeded pseudo-random stream.
 *
 * Substreams are derived from a master seed and a path of counters, e.g.
 * `Rng::substream(seed, {kShots, step, epoch, param, sign})`. The path is
 * folded through splitmix64 so that distinct paths give uncorrelated
 * mt19937_64 seeds. The same path always yields the same stream.
 */
class Rng {
  public:
    using Engine = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : seed_{seed}, engine_{seed} {}

    static Rng substream(std::uint64_t master,
                         std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = detail::splitmix64(master);
        for (auto id : path) {
            h = detail::splitmix64(h ^ detail::splitmix64(id + 0x632be59bd9b4e019ULL));
        }
        return Rng{h};
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    Engine &engine() { return engine_; }

    /// Uniform double on [lo, hi).
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        double x = dist(engine_);
        // libstdc++ can round up to hi for some (lo, hi) pairs
        while (x >= hi) {
            x = dist(engine_);
        }
        return x;
    }

    /// Uniform integer on [0, n).
    std::size_t index(std::size_t n) {
        std::uniform_int_distribution<std::size_t> dist(0, n - 1);
        return dist(engine_);
    }

  private:
    std::uint64_t seed_;
    Engine engine_;
};

/// Substream tags used by the compile driver and harness.
enum class Stream : std::uint64_t {
    Target = 1,
    Init = 2,
    Shots = 3,
    Eval = 4,
};

inline constexpr std::uint64_t tag(Stream s) {
    return static_cast<std::uint64_t>(s);
}

} // namespace rvqc

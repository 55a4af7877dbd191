// Copyright 2026 The qwalk Authors
//
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
/**
 * @file
 * Shared scalar types, tolerance constants and the error hierarchy.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;
using Bits = std::uint64_t;

inline constexpr const char *kVersion = "0.3.0";

/// Numerical tolerances used across modules. Tests and validation code read
/// these instead of sprinkling literals.
struct Tolerance {
    static constexpr double state_norm = 1e-12;
    static constexpr double distribution_sum = 1e-9;
    static constexpr double unitarity = 1e-10;
    static constexpr double fidelity_input = 1e-6;
    static constexpr double weight_leak = 1e-9;
    /// Amplitudes with squared modulus below this are dropped from sparse
    /// states.
    static constexpr double sparse_drop = 1e-30;
};

/// Error categories. The CLI maps each onto a process exit code.
enum class ErrorKind {
    Parse,        ///< malformed input document
    Validation,   ///< input violates a documented invariant
    Infeasible,   ///< search (layout, sampling) exhausted its budget
    Capability,   ///< backend limit or undefined estimate
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &what)
        : Error(ErrorKind::Parse,
                "line " + std::to_string(line) + ": " + what),
          line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &what)
        : Error(ErrorKind::Validation, what) {}
};

class InfeasibleError : public Error {
  public:
    explicit InfeasibleError(const std::string &what)
        : Error(ErrorKind::Infeasible, what) {}
};

class CapabilityError : public Error {
  public:
    explicit CapabilityError(const std::string &what)
        : Error(ErrorKind::Capability, what) {}
};

namespace detail {

[[noreturn]] inline void fail_validation(const std::string &what) {
    throw ValidationError(what);
}

inline void require(bool cond, const std::string &what) {
    if (!cond) {
        fail_validation(what);
    }
}

} // namespace detail

/// Independent random stream for work item `index` of a run seeded with
/// `seed`. Streams do not depend on the order in which items are processed.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32U), 0x9e3779b9U};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits; portable across standard
/// libraries unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(std::mt19937_64 &rng, std::size_t n) {
    const auto k =
        static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return k < n ? k : n - 1;
}

inline int popcount(Bits b) { return __builtin_popcountll(b); }

} // namespace qwalk

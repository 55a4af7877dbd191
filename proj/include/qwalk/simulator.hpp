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
 * Gate program execution: dense statevectors, sparse statevectors (used for
 * the bounded-weight exact backend and for noisy trajectories on large
 * registers), Monte Carlo noise and shot sampling.
 *
 * Bit ordering: qubit q is bit q of a basis index; in bitstring text the
 * rightmost character is qubit 0.
 */
#pragma once

#include "qwalk/circuit.hpp"
#include "qwalk/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

inline constexpr int kDefaultDenseCap = 24;
inline constexpr int kMaxSparseQubits = 64;

namespace detail {

inline Bits operand_mask(std::span<const Qubit> qubits) {
    Bits m = 0;
    for (auto q : qubits) {
        m |= Bits{1} << q;
    }
    return m;
}

/// Offset (within the full index) of local basis state `local` of a k-qubit
/// gate.
inline Bits scatter_local(std::span<const Qubit> qubits, Bits local) {
    Bits out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        if ((local >> j) & 1U) {
            out |= Bits{1} << qubits[j];
        }
    }
    return out;
}

inline Bits gather_local(std::span<const Qubit> qubits, Bits full) {
    Bits out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        out |= ((full >> qubits[j]) & 1U) << j;
    }
    return out;
}

} // namespace detail

/// Full 2^n statevector.
class DenseState {
  public:
    DenseState() = default;
    explicit DenseState(int qubits, int cap = kDefaultDenseCap) : n_(qubits) {
        if (qubits > cap) {
            throw CapabilityError("dense simulation of " + std::to_string(qubits) +
                                  " qubits exceeds the cap of " + std::to_string(cap) +
                                  "; use the bounded or sparse backend");
        }
        amp_.assign(std::size_t{1} << qubits, Complex{});
        amp_[0] = 1.0;
    }

    [[nodiscard]] int qubit_count() const { return n_; }
    [[nodiscard]] const std::vector<Complex> &amplitudes() const { return amp_; }
    std::vector<Complex> &amplitudes() { return amp_; }
    [[nodiscard]] Complex amplitude(Bits b) const { return amp_.at(b); }

    void apply(std::span<const Qubit> qubits, const Matrix &m) {
        const auto k = qubits.size();
        const Bits mask = detail::operand_mask(qubits);
        const std::size_t dim = std::size_t{1} << k;
        std::vector<Bits> offset(dim);
        for (std::size_t l = 0; l < dim; ++l) {
            offset[l] = detail::scatter_local(qubits, l);
        }
        std::vector<Complex> in(dim);
        std::vector<Complex> out(dim);
        for (Bits base = 0; base < amp_.size(); ++base) {
            if (base & mask) {
                continue;
            }
            bool any = false;
            for (std::size_t l = 0; l < dim; ++l) {
                in[l] = amp_[base | offset[l]];
                any = any || in[l] != Complex{};
            }
            if (!any) {
                continue;
            }
            for (std::size_t r = 0; r < dim; ++r) {
                Complex s{};
                for (std::size_t c = 0; c < dim; ++c) {
                    s += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
                }
                out[r] = s;
            }
            for (std::size_t l = 0; l < dim; ++l) {
                amp_[base | offset[l]] = out[l];
            }
        }
    }

    void apply_x(Qubit q) {
        const Bits bit = Bits{1} << q;
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (!(b & bit)) {
                std::swap(amp_[b], amp_[b | bit]);
            }
        }
    }

    void apply_z(Qubit q) {
        const Bits bit = Bits{1} << q;
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (b & bit) {
                amp_[b] = -amp_[b];
            }
        }
    }

    void apply_y(Qubit q) {
        // Y = i X Z
        apply_z(q);
        apply_x(q);
        for (auto &a : amp_) {
            a *= Complex{0.0, 1.0};
        }
    }

    [[nodiscard]] double excitation_probability(Qubit q) const {
        const Bits bit = Bits{1} << q;
        double p = 0.0;
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (b & bit) {
                p += std::norm(amp_[b]);
            }
        }
        return p;
    }

    /// Applies sigma^- on q (|1> -> |0>) without normalizing.
    void lower(Qubit q) {
        const Bits bit = Bits{1} << q;
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (b & bit) {
                amp_[b ^ bit] = amp_[b];
                amp_[b] = Complex{};
            } else {
                amp_[b] = Complex{};
            }
        }
    }

    void scale_excited(Qubit q, double factor) {
        const Bits bit = Bits{1} << q;
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (b & bit) {
                amp_[b] *= factor;
            }
        }
    }

    [[nodiscard]] double norm_sq() const {
        double s = 0.0;
        for (const auto &a : amp_) {
            s += std::norm(a);
        }
        return s;
    }

    void normalize() {
        const double n = std::sqrt(norm_sq());
        for (auto &a : amp_) {
            a /= n;
        }
    }

    template <class F> void for_each(F &&f) const {
        for (Bits b = 0; b < amp_.size(); ++b) {
            if (amp_[b] != Complex{}) {
                f(b, amp_[b]);
            }
        }
    }

  private:
    int n_ = 0;
    std::vector<Complex> amp_;
};

/// Sparse statevector: basis index -> amplitude, zero entries omitted.
class SparseState {
  public:
    struct Entry {
        Bits bits;
        Complex amp;
    };

    SparseState() = default;
    explicit SparseState(int qubits) : n_(qubits) {
        if (qubits > kMaxSparseQubits) {
            throw CapabilityError("sparse simulation is limited to 64 qubits");
        }
        amp_.push_back({Bits{0}, Complex{1.0, 0.0}});
    }

    [[nodiscard]] int qubit_count() const { return n_; }
    [[nodiscard]] std::size_t support_size() const { return amp_.size(); }
    /// Nonzero entries, each basis state at most once, in no particular order.
    [[nodiscard]] const std::vector<Entry> &entries() const { return amp_; }

    [[nodiscard]] Complex amplitude(Bits b) const {
        for (const auto &e : amp_) {
            if (e.bits == b) {
                return e.amp;
            }
        }
        return {};
    }

    /// Groups entries by their bits outside the operand set (sort by that
    /// key), applies `m` to each group's local vector and keeps nonzero
    /// results.
    void apply(std::span<const Qubit> qubits, const Matrix &m) {
        const auto k = qubits.size();
        const std::size_t dim = std::size_t{1} << k;
        const Bits mask = detail::operand_mask(qubits);
        struct Keyed {
            Bits rest;
            std::uint32_t local;
            Complex amp;
        };
        std::vector<Keyed> work;
        work.reserve(amp_.size());
        for (const auto &e : amp_) {
            work.push_back({e.bits & ~mask, static_cast<std::uint32_t>(detail::gather_local(qubits, e.bits)),
                            e.amp});
        }
        std::sort(work.begin(), work.end(),
                  [](const Keyed &a, const Keyed &b) { return a.rest < b.rest; });
        std::vector<Bits> offset(dim);
        for (std::size_t l = 0; l < dim; ++l) {
            offset[l] = detail::scatter_local(qubits, l);
        }
        std::vector<Complex> in(dim);
        std::vector<std::size_t> nz;
        std::vector<Entry> next;
        next.reserve(amp_.size() * 2);
        for (std::size_t i = 0; i < work.size();) {
            const Bits rest = work[i].rest;
            nz.clear();
            for (; i < work.size() && work[i].rest == rest; ++i) {
                in[work[i].local] = work[i].amp;
                nz.push_back(work[i].local);
            }
            for (std::size_t r = 0; r < dim; ++r) {
                Complex s{};
                for (auto c : nz) {
                    s += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
                }
                if (std::norm(s) > Tolerance::sparse_drop) {
                    next.push_back({rest | offset[r], s});
                }
            }
            for (auto c : nz) {
                in[c] = Complex{};
            }
        }
        amp_ = std::move(next);
    }

    void apply_x(Qubit q) {
        for (auto &e : amp_) {
            e.bits ^= Bits{1} << q;
        }
    }

    void apply_z(Qubit q) {
        for (auto &e : amp_) {
            if ((e.bits >> q) & 1U) {
                e.amp = -e.amp;
            }
        }
    }

    void apply_y(Qubit q) {
        apply_z(q);
        apply_x(q);
        for (auto &e : amp_) {
            e.amp *= Complex{0.0, 1.0};
        }
    }

    [[nodiscard]] double excitation_probability(Qubit q) const {
        double p = 0.0;
        for (const auto &e : amp_) {
            if ((e.bits >> q) & 1U) {
                p += std::norm(e.amp);
            }
        }
        return p;
    }

    /// |1> -> |0> on qubit q, dropping the |0> branch (the jump operator).
    void lower(Qubit q) {
        std::vector<Entry> next;
        for (const auto &e : amp_) {
            if ((e.bits >> q) & 1U) {
                next.push_back({e.bits ^ (Bits{1} << q), e.amp});
            }
        }
        amp_ = std::move(next);
    }

    void scale_excited(Qubit q, double factor) {
        for (auto &e : amp_) {
            if ((e.bits >> q) & 1U) {
                e.amp *= factor;
            }
        }
    }

    [[nodiscard]] double norm_sq() const {
        double s = 0.0;
        for (const auto &e : amp_) {
            s += std::norm(e.amp);
        }
        return s;
    }

    void normalize() {
        const double n = std::sqrt(norm_sq());
        for (auto &e : amp_) {
            e.amp /= n;
        }
    }

    /// Removes entries of Hamming weight above `w`; returns the largest
    /// removed modulus.
    double truncate_weight(int w) {
        double worst = 0.0;
        std::erase_if(amp_, [&](const Entry &e) {
            if (popcount(e.bits) > w) {
                worst = std::max(worst, std::abs(e.amp));
                return true;
            }
            return false;
        });
        return worst;
    }

    template <class F> void for_each(F &&f) const {
        for (const auto &e : amp_) {
            f(e.bits, e.amp);
        }
    }

  private:
    int n_ = 0;
    std::vector<Entry> amp_;
};

/// Sparse state of an exact run whose support never exceeded weight W_max.
struct BoundedWeightState {
    SparseState state;
    int max_weight = 0;
};

template <class State> void apply_gate(State &s, const Gate &g) {
    if (is_measure(g)) {
        return;
    }
    const auto ops = operands(g, s.qubit_count());
    s.apply(ops, gate_matrix(g));
}

/// Exact statevector of `p` from |0...0>. measure_all is a no-op.
inline DenseState simulate_dense(const GateProgram &p, int cap = kDefaultDenseCap) {
    DenseState s(p.qubit_count, cap);
    for (const auto &g : p.gates) {
        apply_gate(s, g);
    }
    return s;
}

inline SparseState simulate_sparse(const GateProgram &p) {
    SparseState s(p.qubit_count);
    for (const auto &g : p.gates) {
        apply_gate(s, g);
    }
    return s;
}

/**
 * Exact simulation restricted to Hamming weight <= `max_weight`. After each
 * gate, higher-weight amplitudes are dropped; if any dropped amplitude exceeds
 * the leak tolerance the program does not conform and CapabilityError is
 * thrown.
 */
inline BoundedWeightState simulate_bounded(const GateProgram &p, int max_weight) {
    detail::require(max_weight >= 1, "max_weight must be >= 1");
    SparseState s(p.qubit_count);
    for (std::size_t k = 0; k < p.gates.size(); ++k) {
        apply_gate(s, p.gates[k]);
        const double leak = s.truncate_weight(max_weight);
        if (leak > Tolerance::weight_leak) {
            throw CapabilityError("gate " + std::to_string(k) +
                                  " lifts amplitude " + std::to_string(leak) +
                                  " above Hamming weight " + std::to_string(max_weight));
        }
    }
    return {std::move(s), max_weight};
}

/// Probability of each weight-1 basis state e_q, q = 0..n-1.
template <class State> std::vector<double> single_excitation_probabilities(const State &s) {
    std::vector<double> p(static_cast<std::size_t>(s.qubit_count()), 0.0);
    s.for_each([&p](Bits b, Complex a) {
        if (popcount(b) == 1) {
            p[static_cast<std::size_t>(__builtin_ctzll(b))] += std::norm(a);
        }
    });
    return p;
}

// ---------------------------------------------------------------------------
// Noise

/**
 * Stochastic noise proxy. Depolarizing errors follow every gate on its
 * operands; with `native_cost_scaling` an entangling gate counts as as many
 * two-qubit error opportunities as its native CZ cost. Amplitude damping with
 * probability `gamma` hits every qubit after each entangling layer. Readout
 * flips are applied when sampling.
 */
struct NoiseModel {
    double p1 = 0.0;          ///< single-qubit depolarizing probability
    double p2 = 0.0;          ///< two-qubit depolarizing probability
    double gamma = 0.0;       ///< amplitude damping per qubit per entangling layer
    double readout_01 = 0.0;  ///< P(read 1 | state 0)
    double readout_10 = 0.0;  ///< P(read 0 | state 1)
    std::vector<double> readout_01_per_qubit; ///< overrides readout_01 when non-empty
    std::vector<double> readout_10_per_qubit;
    bool native_cost_scaling = true;

    /// Device medians: 1q 2.2e-4, 2q 2.1e-3, readout 8.4e-3.
    static NoiseModel kingston() { return {2.2e-4, 2.1e-3, 0.0, 8.4e-3, 8.4e-3, {}, {}, true}; }
    /// Device medians: 1q 2.1e-4, 2q 1.7e-3, readout 4.1e-3.
    static NoiseModel pittsburgh() { return {2.1e-4, 1.7e-3, 0.0, 4.1e-3, 4.1e-3, {}, {}, true}; }

    [[nodiscard]] bool noiseless() const {
        auto zero = [](const std::vector<double> &v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
        };
        return p1 == 0.0 && p2 == 0.0 && gamma == 0.0 && readout_01 == 0.0 &&
               readout_10 == 0.0 && zero(readout_01_per_qubit) && zero(readout_10_per_qubit);
    }

    [[nodiscard]] double flip01(int q) const {
        return readout_01_per_qubit.empty() ? readout_01
                                            : readout_01_per_qubit.at(static_cast<std::size_t>(q));
    }
    [[nodiscard]] double flip10(int q) const {
        return readout_10_per_qubit.empty() ? readout_10
                                            : readout_10_per_qubit.at(static_cast<std::size_t>(q));
    }

    void validate() const {
        auto prob = [](double x, const char *name) {
            detail::require(x >= 0.0 && x <= 1.0,
                            std::string("noise parameter ") + name + " must lie in [0, 1]");
        };
        prob(p1, "p1");
        prob(p2, "p2");
        prob(gamma, "gamma");
        prob(readout_01, "readout_01");
        prob(readout_10, "readout_10");
        for (auto x : readout_01_per_qubit) {
            prob(x, "readout_01");
        }
        for (auto x : readout_10_per_qubit) {
            prob(x, "readout_10");
        }
    }
};

namespace detail {

/// Pauli code 0..3 = I, X, Y, Z.
template <class State> void apply_pauli(State &s, Qubit q, int code) {
    switch (code) {
    case 1:
        s.apply_x(q);
        break;
    case 2:
        s.apply_y(q);
        break;
    case 3:
        s.apply_z(q);
        break;
    default:
        break;
    }
}

template <class State> void depolarize1(State &s, Qubit q, double p, std::mt19937_64 &rng) {
    if (p > 0.0 && uniform01(rng) < p) {
        apply_pauli(s, q, 1 + static_cast<int>(uniform_index(rng, 3)));
    }
}

template <class State>
void depolarize2(State &s, Qubit a, Qubit b, double p, std::mt19937_64 &rng) {
    if (p > 0.0 && uniform01(rng) < p) {
        const int code = 1 + static_cast<int>(uniform_index(rng, 15));
        apply_pauli(s, a, code & 3);
        apply_pauli(s, b, code >> 2);
    }
}

/// One amplitude-damping trajectory step on qubit q.
template <class State> void amplitude_damp(State &s, Qubit q, double gamma, std::mt19937_64 &rng) {
    const double excited = s.excitation_probability(q);
    if (excited <= 0.0) {
        return;
    }
    if (uniform01(rng) < gamma * excited) {
        s.lower(q);
    } else {
        s.scale_excited(q, std::sqrt(1.0 - gamma));
    }
    s.normalize();
}

/// Gate order for execution: program order, or ASAP-layer order when
/// damping is active. Second member flags the last gate of each
/// entangling layer.
inline std::pair<std::vector<std::size_t>, std::vector<bool>>
execution_order(const GateProgram &p, bool layered) {
    std::vector<std::size_t> order(p.gates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<bool> layer_end(p.gates.size(), false);
    if (!layered) {
        return {order, layer_end};
    }
    const auto layer = asap_layers(p, false);
    auto key = [&](std::size_t k) {
        return is_measure(p.gates[k]) ? std::numeric_limits<int>::max() : layer[k];
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const bool last_of_layer =
            pos + 1 == order.size() || key(order[pos + 1]) != key(order[pos]);
        if (!last_of_layer || is_measure(p.gates[order[pos]])) {
            continue;
        }
        bool has_entangling = false;
        for (std::size_t j = pos + 1; j-- > 0 && key(order[j]) == key(order[pos]);) {
            has_entangling = has_entangling || is_entangling(p.gates[order[j]]);
        }
        layer_end[pos] = has_entangling;
    }
    return {order, layer_end};
}

} // namespace detail

/// One noisy trajectory of `p`; the random stream fully determines it.
template <class State>
State run_trajectory(const GateProgram &p, const NoiseModel &noise, std::mt19937_64 &rng,
                     State initial) {
    State s = std::move(initial);
    const bool damping = noise.gamma > 0.0;
    const auto [order, layer_end] = detail::execution_order(p, damping);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto &g = p.gates[order[pos]];
        if (is_measure(g)) {
            continue;
        }
        apply_gate(s, g);
        const auto ops = operands(g, p.qubit_count);
        if (!is_entangling(g)) {
            for (auto q : ops) {
                detail::depolarize1(s, q, noise.p1, rng);
            }
        } else {
            const int events = noise.native_cost_scaling ? std::max(1, native_two_qubit_cost(g)) : 1;
            const auto pairs = static_cast<int>(ops.size()) - 1;
            for (int e = 0; e < events; ++e) {
                const auto j = static_cast<std::size_t>(e % pairs);
                detail::depolarize2(s, ops[j], ops[j + 1], noise.p2, rng);
            }
        }
        if (damping && layer_end[pos]) {
            for (int q = 0; q < p.qubit_count; ++q) {
                detail::amplitude_damp(s, q, noise.gamma, rng);
            }
        }
    }
    return s;
}

enum class Engine { Dense, Sparse };

/// Final states of `n_traj` trajectories. Trajectory i uses stream
/// (rng_seed, i).
template <class State>
std::vector<State> simulate_noisy_trajectories(const GateProgram &p, const NoiseModel &noise,
                                               int n_traj, std::uint64_t rng_seed,
                                               int dense_cap = kDefaultDenseCap) {
    noise.validate();
    std::vector<State> out;
    out.reserve(static_cast<std::size_t>(n_traj));
    for (int i = 0; i < n_traj; ++i) {
        auto rng = make_stream(rng_seed, static_cast<std::uint64_t>(i));
        if constexpr (std::is_same_v<State, DenseState>) {
            out.push_back(run_trajectory(p, noise, rng, DenseState(p.qubit_count, dense_cap)));
        } else {
            out.push_back(run_trajectory(p, noise, rng, SparseState(p.qubit_count)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shots

/// Multiset of measured bitstrings.
class ShotTable {
  public:
    ShotTable() = default;
    explicit ShotTable(int bits) : bits_(bits) {}

    [[nodiscard]] int bit_count() const { return bits_; }
    [[nodiscard]] const std::map<Bits, std::uint64_t> &counts() const { return counts_; }
    [[nodiscard]] std::uint64_t total() const { return total_; }

    void add(Bits b, std::uint64_t count = 1) {
        if (count == 0) {
            return;
        }
        detail::require(bits_ == 64 || b < (Bits{1} << bits_), "bitstring wider than table");
        counts_[b] += count;
        total_ += count;
    }

    /// Text form with qubit 0 as the rightmost character.
    [[nodiscard]] std::string format(Bits b) const {
        std::string s(static_cast<std::size_t>(bits_), '0');
        for (int q = 0; q < bits_; ++q) {
            if ((b >> q) & 1U) {
                s[static_cast<std::size_t>(bits_ - 1 - q)] = '1';
            }
        }
        return s;
    }

    static Bits parse(std::string_view text) {
        Bits b = 0;
        for (char c : text) {
            detail::require(c == '0' || c == '1', "bitstring must contain only 0 and 1");
            b = (b << 1U) | static_cast<Bits>(c == '1');
        }
        return b;
    }

    /// Convenience constructor from {"0101", count} pairs.
    static ShotTable from_strings(std::initializer_list<std::pair<std::string, std::uint64_t>> rows) {
        detail::require(rows.size() > 0, "empty shot table");
        ShotTable t(static_cast<int>(rows.begin()->first.size()));
        for (const auto &[s, c] : rows) {
            detail::require(static_cast<int>(s.size()) == t.bits_, "inconsistent bitstring length");
            t.add(parse(s), c);
        }
        return t;
    }

    void merge(const ShotTable &other) {
        detail::require(other.bits_ == bits_, "cannot merge shot tables of different width");
        for (const auto &[b, c] : other.counts_) {
            add(b, c);
        }
    }

    friend bool operator==(const ShotTable &a, const ShotTable &b) {
        return a.bits_ == b.bits_ && a.counts_ == b.counts_;
    }

  private:
    int bits_ = 0;
    std::map<Bits, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Keeps the listed bits: output bit l is input bit `positions[l]`. Used to
/// read logical qubits out of a routed register.
inline ShotTable select_bits(const ShotTable &st, std::span<const int> positions) {
    ShotTable out(static_cast<int>(positions.size()));
    for (const auto &[b, c] : st.counts()) {
        Bits r = 0;
        for (std::size_t l = 0; l < positions.size(); ++l) {
            detail::require(positions[l] >= 0 && positions[l] < st.bit_count(),
                            "selected bit out of range");
            r |= ((b >> positions[l]) & 1U) << l;
        }
        out.add(r, c);
    }
    return out;
}

/// Shots per step: round(base * growth^t).
inline std::uint64_t scheduled_shots(int step, double base = 5.3e5, double growth = 1.1) {
    return static_cast<std::uint64_t>(std::llround(base * std::pow(growth, step)));
}

namespace detail {

template <class State> class BornSampler {
  public:
    explicit BornSampler(const State &s) {
        double acc = 0.0;
        s.for_each([&](Bits b, Complex a) {
            acc += std::norm(a);
            keys_.push_back(b);
            cdf_.push_back(acc);
        });
        total_ = acc;
    }
    Bits operator()(std::mt19937_64 &rng) const {
        const double u = uniform01(rng) * total_;
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) {
            --it;
        }
        return keys_[static_cast<std::size_t>(it - cdf_.begin())];
    }

  private:
    std::vector<Bits> keys_;
    std::vector<double> cdf_;
    double total_ = 0.0;
};

inline Bits apply_readout(Bits b, int bits, const NoiseModel &noise, std::mt19937_64 &rng) {
    for (int q = 0; q < bits; ++q) {
        const bool one = (b >> q) & 1U;
        const double e = one ? noise.flip10(q) : noise.flip01(q);
        if (e > 0.0 && uniform01(rng) < e) {
            b ^= Bits{1} << q;
        }
    }
    return b;
}

inline bool has_readout_error(const NoiseModel &noise, int bits) {
    for (int q = 0; q < bits; ++q) {
        if (noise.flip01(q) > 0.0 || noise.flip10(q) > 0.0) {
            return true;
        }
    }
    return false;
}

} // namespace detail

/**
 * Samples `shots` outcomes from an ensemble of trajectory states, spreading
 * shots evenly (member i gets shots/n, the first shots%n one extra), then
 * flips each bit with the readout probabilities. Member i samples from
 * stream (rng_seed, i).
 */
template <class State>
ShotTable sample_shots(std::span<const State> ensemble, std::uint64_t shots,
                       const NoiseModel &readout, std::uint64_t rng_seed) {
    detail::require(!ensemble.empty(), "empty state ensemble");
    detail::require(shots >= 1, "shot count must be >= 1");
    const int bits = ensemble.front().qubit_count();
    ShotTable table(bits);
    const bool flips = detail::has_readout_error(readout, bits);
    const auto n = ensemble.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto mine = shots / n + (i < shots % n ? 1 : 0);
        if (mine == 0) {
            continue;
        }
        auto rng = make_stream(rng_seed, i);
        detail::BornSampler<State> born(ensemble[i]);
        std::map<Bits, std::uint64_t> local;
        for (std::uint64_t k = 0; k < mine; ++k) {
            Bits b = born(rng);
            if (flips) {
                b = detail::apply_readout(b, bits, readout, rng);
            }
            ++local[b];
        }
        for (const auto &[b, c] : local) {
            table.add(b, c);
        }
    }
    return table;
}

/**
 * Streams noisy trajectories straight into a shot table without keeping the
 * states: trajectory i evolves with stream (rng_seed, 2i) and samples its
 * share of `shots` with stream (rng_seed, 2i + 1).
 * When `retention_per_trajectory` is given, each trajectory's fraction of
 * shots with exactly one set bit among `measured` is appended to it.
 */
template <class State = SparseState>
ShotTable sample_noisy_shots(const GateProgram &p, const NoiseModel &noise, int n_traj,
                             std::uint64_t shots, std::uint64_t rng_seed,
                             int dense_cap = kDefaultDenseCap,
                             std::vector<double> *retention_per_trajectory = nullptr,
                             Bits measured = ~Bits{0}) {
    noise.validate();
    detail::require(n_traj >= 1, "trajectory count must be >= 1");
    detail::require(shots >= 1, "shot count must be >= 1");
    ShotTable table(p.qubit_count);
    const bool flips = detail::has_readout_error(noise, p.qubit_count);
    const auto n = static_cast<std::uint64_t>(n_traj);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto mine = shots / n + (i < shots % n ? 1 : 0);
        auto rng = make_stream(rng_seed, 2 * i);
        State initial = [&] {
            if constexpr (std::is_same_v<State, DenseState>) {
                return DenseState(p.qubit_count, dense_cap);
            } else {
                return SparseState(p.qubit_count);
            }
        }();
        const auto s = run_trajectory(p, noise, rng, std::move(initial));
        if (mine == 0) {
            continue;
        }
        auto srng = make_stream(rng_seed, 2 * i + 1);
        detail::BornSampler<State> born(s);
        std::map<Bits, std::uint64_t> local;
        for (std::uint64_t k = 0; k < mine; ++k) {
            Bits b = born(srng);
            if (flips) {
                b = detail::apply_readout(b, p.qubit_count, noise, srng);
            }
            ++local[b];
        }
        std::uint64_t kept = 0;
        for (const auto &[b, c] : local) {
            table.add(b, c);
            kept += popcount(b & measured) == 1 ? c : 0;
        }
        if (retention_per_trajectory != nullptr) {
            retention_per_trajectory->push_back(static_cast<double>(kept) /
                                                static_cast<double>(mine));
        }
    }
    return table;
}

} // namespace qwalk

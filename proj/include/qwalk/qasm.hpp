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
 * OpenQASM 3 export.
 *
 * Gates are lowered to U, gphase, cx and swap, with ctrl/negctrl
 * modifiers. Dense unitaries go through a two-level decomposition over a
 * Gray-code ordering of the local basis, so every factor is a single-qubit
 * gate conditioned on the remaining operands.
 */
#pragma once

#include "qwalk/circuit.hpp"
#include "qwalk/core.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

enum class BasicKind { U, GPhase, Cx, Swap, Measure };

/// One OpenQASM statement. `controls` are matched against `control_values`
/// (true = ctrl, false = negctrl); for U the single target is `targets[0]`.
struct BasicOp {
    BasicKind kind = BasicKind::U;
    std::vector<Qubit> controls;
    std::vector<bool> control_values;
    std::vector<Qubit> targets;
    double theta = 0.0, phi = 0.0, lambda = 0.0; ///< U parameters
    double gamma = 0.0;                          ///< gphase angle
};

namespace detail {

inline constexpr double kQasmDropTol = 1e-14;

/// OpenQASM 3 U(theta, phi, lambda).
inline Matrix u_matrix(double theta, double phi, double lambda) {
    Matrix m(2, 2);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    m(0, 0) = c;
    m(0, 1) = -std::polar(1.0, lambda) * s;
    m(1, 0) = std::polar(1.0, phi) * s;
    m(1, 1) = std::polar(1.0, phi + lambda) * c;
    return m;
}

struct ZyzAngles {
    double gamma, theta, phi, lambda;
};

/// v = e^{i gamma} U(theta, phi, lambda).
inline ZyzAngles zyz(const Matrix &v) {
    const double a = std::abs(v(0, 0));
    const double b = std::abs(v(1, 0));
    ZyzAngles z{};
    z.theta = 2.0 * std::atan2(b, a);
    if (a > 1e-12) {
        z.gamma = std::arg(v(0, 0));
        if (b > 1e-12) {
            z.phi = std::arg(v(1, 0)) - z.gamma;
            z.lambda = std::arg(-v(0, 1)) - z.gamma;
        } else {
            z.phi = 0.0;
            z.lambda = std::arg(v(1, 1)) - z.gamma;
        }
    } else {
        z.gamma = std::arg(v(1, 0));
        z.phi = 0.0;
        z.lambda = std::arg(-v(0, 1)) - z.gamma;
    }
    return z;
}

inline void emit_controlled(std::vector<BasicOp> &out, const Matrix &v, Qubit target,
                            const std::vector<Qubit> &controls,
                            const std::vector<bool> &values) {
    const auto z = zyz(v);
    BasicOp u;
    u.kind = BasicKind::U;
    u.controls = controls;
    u.control_values = values;
    u.targets = {target};
    u.theta = z.theta;
    u.phi = z.phi;
    u.lambda = z.lambda;
    out.push_back(u);
    if (std::abs(std::remainder(z.gamma, 2.0 * M_PI)) > kQasmDropTol) {
        BasicOp g;
        g.kind = BasicKind::GPhase;
        g.controls = controls;
        g.control_values = values;
        g.gamma = z.gamma;
        out.push_back(g);
    }
}

/// Single-qubit gate on bit `t` of the local basis acting between local
/// states s0 and s1 (which differ only in bit t), conditioned on every
/// other local bit equal to s0's.
inline void emit_two_level(std::vector<BasicOp> &out, const Matrix &g, Bits s0, Bits s1,
                           const std::vector<Qubit> &qubits) {
    const Bits diff = s0 ^ s1;
    const int t = __builtin_ctzll(diff);
    Matrix v(2, 2);
    if (((s0 >> t) & 1U) == 0) {
        v = g;
    } else {
        v << g(1, 1), g(1, 0), g(0, 1), g(0, 0);
    }
    std::vector<Qubit> controls;
    std::vector<bool> values;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        if (static_cast<int>(j) != t) {
            controls.push_back(qubits[j]);
            values.push_back(((s0 >> j) & 1U) != 0);
        }
    }
    emit_controlled(out, v, qubits[static_cast<std::size_t>(t)], controls, values);
}

} // namespace detail

/// Lowers a dense unitary on `qubits` (qubits[0] = bit 0 of the matrix
/// index) into controlled single-qubit gates.
inline std::vector<BasicOp> decompose_unitary(const Matrix &u, const std::vector<Qubit> &qubits) {
    const auto k = static_cast<int>(qubits.size());
    const auto d = Eigen::Index{1} << k;
    detail::require(u.rows() == d && u.cols() == d, "unitary dimension does not match operands");
    if (k == 1) {
        std::vector<BasicOp> out;
        detail::emit_controlled(out, u, qubits[0], {}, {});
        return out;
    }
    auto gray = [](Eigen::Index i) { return static_cast<Bits>(i ^ (i >> 1)); };
    Matrix w = u;
    struct Step {
        Matrix g;
        Bits s0, s1;
    };
    std::vector<Step> steps;
    for (Eigen::Index c = 0; c + 1 < d; ++c) {
        const auto col = static_cast<Eigen::Index>(gray(c));
        for (Eigen::Index r = d - 1; r > c; --r) {
            const auto i0 = static_cast<Eigen::Index>(gray(r - 1));
            const auto i1 = static_cast<Eigen::Index>(gray(r));
            const Complex a = w(i0, col);
            const Complex b = w(i1, col);
            if (std::abs(b) < detail::kQasmDropTol) {
                continue;
            }
            const double n = std::hypot(std::abs(a), std::abs(b));
            Matrix g(2, 2);
            g << std::conj(a) / n, std::conj(b) / n, -b / n, a / n;
            const Eigen::RowVectorXcd r0 = w.row(i0);
            const Eigen::RowVectorXcd r1 = w.row(i1);
            w.row(i0) = g(0, 0) * r0 + g(0, 1) * r1;
            w.row(i1) = g(1, 0) * r0 + g(1, 1) * r1;
            steps.push_back({g, static_cast<Bits>(i0), static_cast<Bits>(i1)});
        }
    }
    // u = g_1^dag ... g_m^dag D: apply D first, then the g's in reverse.
    std::vector<BasicOp> out;
    for (Eigen::Index b = 0; b < d; ++b) {
        const double ph = std::arg(w(b, b));
        if (std::abs(ph) < detail::kQasmDropTol) {
            continue;
        }
        const auto bits = static_cast<Bits>(b);
        Matrix v = Matrix::Identity(2, 2);
        v((bits & 1U) ? 1 : 0, (bits & 1U) ? 1 : 0) = std::polar(1.0, ph);
        std::vector<Qubit> controls(qubits.begin() + 1, qubits.end());
        std::vector<bool> values;
        for (int j = 1; j < k; ++j) {
            values.push_back(((bits >> j) & 1U) != 0);
        }
        detail::emit_controlled(out, v, qubits[0], controls, values);
    }
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const Matrix gd = it->g.adjoint();
        detail::emit_two_level(out, gd, it->s0, it->s1, qubits);
    }
    return out;
}

/// Lowers a whole program; segment boundaries become comment markers in
/// `marks` (index into the returned op list -> text).
inline std::vector<BasicOp> lower_program(const GateProgram &p,
                                          std::vector<std::pair<std::size_t, std::string>> *marks =
                                              nullptr) {
    std::vector<BasicOp> out;
    std::size_t seg = 0;
    for (std::size_t k = 0; k < p.gates.size(); ++k) {
        while (marks && seg < p.segments.size() && p.segments[seg].begin == k) {
            marks->emplace_back(out.size(), std::string(to_string(p.segments[seg].kind)) +
                                                " step " + std::to_string(p.segments[seg].step));
            ++seg;
        }
        const auto &g = p.gates[k];
        if (const auto *c = std::get_if<Cnot>(&g)) {
            BasicOp op;
            op.kind = BasicKind::Cx;
            op.targets = {c->control, c->target};
            out.push_back(op);
        } else if (const auto *s = std::get_if<Swap>(&g)) {
            BasicOp op;
            op.kind = BasicKind::Swap;
            op.targets = {s->a, s->b};
            out.push_back(op);
        } else if (is_measure(g)) {
            BasicOp op;
            op.kind = BasicKind::Measure;
            out.push_back(op);
        } else {
            const auto ops = operands(g, p.qubit_count);
            const auto lowered = decompose_unitary(gate_matrix(g), ops);
            out.insert(out.end(), lowered.begin(), lowered.end());
        }
    }
    return out;
}

/// Unitary of one lowered op on its operand list (controls first, then
/// targets; first operand = bit 0). Measure has no matrix.
inline std::vector<Qubit> basic_operands(const BasicOp &op) {
    auto q = op.controls;
    q.insert(q.end(), op.targets.begin(), op.targets.end());
    return q;
}

inline Matrix basic_op_matrix(const BasicOp &op) {
    detail::require(op.kind != BasicKind::Measure, "measure has no unitary");
    const auto nc = static_cast<int>(op.controls.size());
    if (op.kind == BasicKind::Cx) {
        return gates::cnot();
    }
    if (op.kind == BasicKind::Swap) {
        return gates::swap();
    }
    Bits match = 0;
    for (int j = 0; j < nc; ++j) {
        if (op.control_values[static_cast<std::size_t>(j)]) {
            match |= Bits{1} << j;
        }
    }
    if (op.kind == BasicKind::GPhase) {
        const auto dim = Eigen::Index{1} << nc;
        Matrix m = Matrix::Identity(dim, dim);
        m(static_cast<Eigen::Index>(match), static_cast<Eigen::Index>(match)) =
            std::polar(1.0, op.gamma);
        return m;
    }
    const auto dim = Eigen::Index{1} << (nc + 1);
    Matrix m = Matrix::Identity(dim, dim);
    const Matrix v = detail::u_matrix(op.theta, op.phi, op.lambda);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const auto row = static_cast<Eigen::Index>(match | (Bits(a) << nc));
            const auto col = static_cast<Eigen::Index>(match | (Bits(b) << nc));
            m(row, col) = v(a, b);
        }
    }
    return m;
}

namespace detail {

inline std::string fmt_angle(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string modifiers(const BasicOp &op) {
    std::string s;
    for (bool v : op.control_values) {
        s += v ? "ctrl @ " : "negctrl @ ";
    }
    return s;
}

inline std::string qubit_args(const std::vector<Qubit> &qs) {
    std::string s;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        s += (i ? ", q[" : "q[") + std::to_string(qs[i]) + "]";
    }
    return s;
}

} // namespace detail

struct QasmOptions {
    std::string header_comment; ///< e.g. provenance line; may be empty
};

/// OpenQASM 3 text for a program (logical or routed).
inline std::string to_qasm3(const GateProgram &p, const QasmOptions &opt = {}) {
    std::vector<std::pair<std::size_t, std::string>> marks;
    const auto ops = lower_program(p, &marks);
    std::ostringstream os;
    os << "OPENQASM 3.0;\n";
    if (!opt.header_comment.empty()) {
        os << "// " << opt.header_comment << "\n";
    }
    os << "include \"stdgates.inc\";\n";
    os << "qubit[" << p.qubit_count << "] q;\n";
    os << "bit[" << p.qubit_count << "] c;\n";
    std::size_t m = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (; m < marks.size() && marks[m].first == i; ++m) {
            os << "// " << marks[m].second << "\n";
        }
        const auto &op = ops[i];
        switch (op.kind) {
        case BasicKind::U:
            os << detail::modifiers(op) << "U(" << detail::fmt_angle(op.theta) << ", "
               << detail::fmt_angle(op.phi) << ", " << detail::fmt_angle(op.lambda) << ") "
               << detail::qubit_args(basic_operands(op)) << ";\n";
            break;
        case BasicKind::GPhase:
            os << detail::modifiers(op) << "gphase(" << detail::fmt_angle(op.gamma) << ")";
            if (!op.controls.empty()) {
                os << " " << detail::qubit_args(op.controls);
            }
            os << ";\n";
            break;
        case BasicKind::Cx:
            os << "cx " << detail::qubit_args(op.targets) << ";\n";
            break;
        case BasicKind::Swap:
            os << "swap " << detail::qubit_args(op.targets) << ";\n";
            break;
        case BasicKind::Measure:
            os << "c = measure q;\n";
            break;
        }
    }
    for (; m < marks.size(); ++m) {
        os << "// " << marks[m].second << "\n";
    }
    return os.str();
}

} // namespace qwalk

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

// Test-side reference code. Nothing here calls into the library's walk or
// simulator code paths it is used to check.
#pragma once

#include "qwalk.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace qwalk::testing {

inline std::string data_path(const std::string &rel) { return std::string(QWALK_DATA_DIR) + "/" + rel; }

inline Graph load_graph_file(const std::string &rel) {
    std::ifstream in(data_path(rel));
    std::stringstream ss;
    ss << in.rdbuf();
    return load_edge_list(ss.str());
}

inline Graph paw() { return load_graph_file("graphs/paw.tsv"); }

/// Random connected simple graph: a random spanning tree plus extra edges,
/// every degree <= max_degree.
inline Graph random_connected_graph(std::mt19937_64 &rng, int nodes, int edges, int max_degree = 3) {
    for (;;) {
        std::vector<int> deg(static_cast<std::size_t>(nodes), 0);
        std::set<std::pair<int, int>> e;
        bool ok = true;
        for (int v = 1; v < nodes && ok; ++v) {
            std::vector<int> cand;
            for (int u = 0; u < v; ++u) {
                if (deg[static_cast<std::size_t>(u)] < max_degree) {
                    cand.push_back(u);
                }
            }
            if (cand.empty()) {
                ok = false;
                break;
            }
            const int u = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
            e.insert({u, v});
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        }
        for (int tries = 0; ok && static_cast<int>(e.size()) < edges && tries < 1000; ++tries) {
            const int a = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
            const int b = std::uniform_int_distribution<int>(0, nodes - 1)(rng);
            if (a == b || e.count(std::minmax(a, b)) || deg[static_cast<std::size_t>(a)] >= max_degree ||
                deg[static_cast<std::size_t>(b)] >= max_degree) {
                continue;
            }
            e.insert(std::minmax(a, b));
            ++deg[static_cast<std::size_t>(a)];
            ++deg[static_cast<std::size_t>(b)];
        }
        if (!ok || static_cast<int>(e.size()) != edges) {
            continue;
        }
        std::vector<std::string> ids;
        for (int v = 0; v < nodes; ++v) {
            ids.push_back("n" + std::to_string(v));
        }
        std::vector<std::pair<NodeIndex, NodeIndex>> ev;
        for (const auto &[a, b] : e) {
            ev.emplace_back(static_cast<NodeIndex>(a), static_cast<NodeIndex>(b));
        }
        return Graph(ids, ev);
    }
}

/**
 * Reference walk built from scratch: directed edges enumerated in a
 * test-local order, S and C assembled as explicit matrices, U = C S applied
 * by matrix-vector products.
 */
inline std::vector<std::vector<double>> reference_walk(const Graph &g, NodeIndex seed, double alpha,
                                                       int steps) {
    std::vector<std::pair<NodeIndex, NodeIndex>> de;
    for (const auto &[u, v] : g.edges()) {
        de.emplace_back(u, v);
        de.emplace_back(v, u);
    }
    std::map<std::pair<NodeIndex, NodeIndex>, int> pos;
    for (std::size_t k = 0; k < de.size(); ++k) {
        pos[de[k]] = static_cast<int>(k);
    }
    const auto d = static_cast<Eigen::Index>(de.size());
    Matrix s = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < de.size(); ++k) {
        const auto [i, j] = de[k];
        const auto col = static_cast<Eigen::Index>(k);
        s(pos[{j, i}], col) += std::sqrt(1.0 - alpha);
        s(col, col) += Complex{0.0, std::sqrt(alpha)};
    }
    Matrix c = Matrix::Zero(d, d);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const double k = static_cast<double>(g.degree(i));
        for (auto a : g.neighbors(i)) {
            for (auto b : g.neighbors(i)) {
                c(pos[{i, a}], pos[{i, b}]) = 2.0 / k - (a == b ? 1.0 : 0.0);
            }
        }
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    for (auto j : g.neighbors(seed)) {
        psi(pos[{seed, j}]) = 1.0 / std::sqrt(static_cast<double>(g.degree(seed)));
    }
    std::vector<std::vector<double>> out;
    auto record = [&] {
        std::vector<double> p(g.node_count(), 0.0);
        for (std::size_t k = 0; k < de.size(); ++k) {
            p[de[k].first] += std::norm(psi(static_cast<Eigen::Index>(k)));
        }
        out.push_back(p);
    };
    record();
    const Matrix u = c * s;
    for (int t = 1; t <= steps; ++t) {
        psi = u * psi;
        record();
    }
    return out;
}

/// Embeds a gate matrix on `qubits` into the full 2^n space by direct index
/// arithmetic.
inline Matrix full_matrix(const Matrix &m, const std::vector<Qubit> &qubits, int n) {
    const auto dim = Eigen::Index{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::Index local_c = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            local_c |= ((col >> qubits[j]) & 1) << j;
        }
        for (Eigen::Index local_r = 0; local_r < m.rows(); ++local_r) {
            Eigen::Index row = col;
            for (std::size_t j = 0; j < qubits.size(); ++j) {
                const auto bit = Eigen::Index{1} << qubits[j];
                row = ((local_r >> j) & 1) ? (row | bit) : (row & ~bit);
            }
            out(row, col) += m(local_r, local_c);
        }
    }
    return out;
}

/// Whole-program unitary as a product of embedded gate matrices.
inline Matrix program_matrix(const GateProgram &p) {
    const auto dim = Eigen::Index{1} << p.qubit_count;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &g : p.gates) {
        if (is_measure(g)) {
            continue;
        }
        u = full_matrix(gate_matrix(g), operands(g, p.qubit_count), p.qubit_count) * u;
    }
    return u;
}

inline Matrix random_unitary(std::mt19937_64 &rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            a(r, c) = Complex{n(rng), n(rng)};
        }
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ();
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace qwalk::testing

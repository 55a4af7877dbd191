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
 * Serialization of walk results, shot tables, reports and device data.
 *
 * Every CSV starts with a `# qwalk ...` provenance comment; every JSON
 * document carries a "provenance" object. Both hold the config hash and the
 * library version.
 */
#pragma once

#include "json.hpp"

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/prioritize.hpp"
#include "qwalk/simulator.hpp"
#include "qwalk/transpile.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace qwalk {

using Json = nlohmann::json;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Hash of the canonical (key-sorted, compact) JSON form, as 16 hex digits.
inline std::string config_hash(const Json &config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.dump())));
    return buf;
}

struct Provenance {
    std::string command;
    std::string config_hash;
    std::string version = kVersion;

    [[nodiscard]] Json to_json() const {
        return {{"tool", "qwalk"}, {"command", command}, {"config_hash", config_hash},
                {"version", version}};
    }
    [[nodiscard]] std::string csv_line() const {
        return "# qwalk command=" + command + " version=" + version +
               " config_hash=" + config_hash + "\n";
    }
};

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

inline Json optional_num(const std::optional<double> &x) { return x ? Json(*x) : Json(nullptr); }

} // namespace detail

// ---------------------------------------------------------------------------
// Node distributions over time

inline std::string trajectory_csv(const std::vector<std::vector<double>> &dists, const Graph &g,
                                  const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "step,node,id,label,probability\n";
    for (std::size_t t = 0; t < dists.size(); ++t) {
        for (NodeIndex i = 0; i < dists[t].size(); ++i) {
            os << t << ',' << i << ',' << detail::csv_field(g.id(i)) << ','
               << detail::csv_field(g.label(i)) << ',' << detail::num(dists[t][i]) << '\n';
        }
    }
    return os.str();
}

inline Json trajectory_json(const std::vector<std::vector<double>> &dists, const Graph &g,
                            const Provenance &prov) {
    Json j;
    j["provenance"] = prov.to_json();
    j["nodes"] = g.ids();
    j["labels"] = g.labels();
    j["steps"] = Json::array();
    for (std::size_t t = 0; t < dists.size(); ++t) {
        j["steps"].push_back({{"step", t}, {"probabilities", dists[t]}});
    }
    return j;
}

/// Step distributions back from trajectory_json output.
inline std::vector<std::vector<double>> trajectory_from_json(const Json &j) {
    std::vector<std::vector<double>> out;
    try {
        for (const auto &s : j.at("steps")) {
            out.push_back(s.at("probabilities").get<std::vector<double>>());
        }
    } catch (const Json::exception &e) {
        throw ParseError(0, std::string("malformed trajectory JSON: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shot tables; bitstrings are written with qubit 0 rightmost

inline Json shots_json(const ShotTable &st, int step, const Provenance &prov) {
    Json counts = Json::object();
    for (const auto &[b, c] : st.counts()) {
        counts[st.format(b)] = c;
    }
    return {{"provenance", prov.to_json()},
            {"bits", st.bit_count()},
            {"step", step},
            {"total", st.total()},
            {"counts", counts}};
}

inline ShotTable shots_from_json(const Json &j) {
    try {
        ShotTable st(j.at("bits").get<int>());
        for (const auto &[k, v] : j.at("counts").items()) {
            detail::require(static_cast<int>(k.size()) == st.bit_count(),
                            "bitstring '" + k + "' does not match declared width");
            st.add(ShotTable::parse(k), v.get<std::uint64_t>());
        }
        return st;
    } catch (const Json::exception &e) {
        throw ParseError(0, std::string("malformed shot table JSON: ") + e.what());
    }
}

inline std::string shots_csv(const ShotTable &st, const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "bitstring,count\n";
    for (const auto &[b, c] : st.counts()) {
        os << st.format(b) << ',' << c << '\n';
    }
    return os.str();
}

inline ShotTable shots_from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    ShotTable st;
    bool started = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#' || line.rfind("bitstring", 0) == 0) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(line_no, "expected 'bitstring,count'");
        }
        const auto bits = line.substr(0, comma);
        if (!started) {
            st = ShotTable(static_cast<int>(bits.size()));
            started = true;
        }
        if (static_cast<int>(bits.size()) != st.bit_count()) {
            throw ParseError(line_no, "inconsistent bitstring width");
        }
        try {
            st.add(ShotTable::parse(bits), std::stoull(line.substr(comma + 1)));
        } catch (const std::logic_error &) {
            throw ParseError(line_no, "bad bitstring or count");
        }
    }
    if (!started) {
        throw ParseError(line_no, "shot table is empty");
    }
    return st;
}

// ---------------------------------------------------------------------------
// Metric reports

inline std::string metrics_csv(const std::vector<StepMetrics> &rows, const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line()
       << "step,fidelity_raw,fidelity_post,fidelity_bc_raw,fidelity_bc_post,retention,kept_shots,"
          "total_shots\n";
    auto opt = [](const std::optional<double> &x) { return x ? detail::num(*x) : std::string(); };
    for (const auto &r : rows) {
        os << r.step << ',' << detail::num(r.fidelity_raw) << ',' << detail::num(r.fidelity_post)
           << ',' << opt(r.fidelity_bc_raw) << ',' << opt(r.fidelity_bc_post) << ','
           << detail::num(r.retention) << ',' << r.kept_shots << ',' << r.total_shots << '\n';
    }
    return os.str();
}

inline Json metrics_json(const std::vector<StepMetrics> &rows, const Provenance &prov) {
    Json j;
    j["provenance"] = prov.to_json();
    j["steps"] = Json::array();
    for (const auto &r : rows) {
        j["steps"].push_back({{"step", r.step},
                              {"fidelity_raw", r.fidelity_raw},
                              {"fidelity_post", r.fidelity_post},
                              {"fidelity_bc_raw", detail::optional_num(r.fidelity_bc_raw)},
                              {"fidelity_bc_post", detail::optional_num(r.fidelity_bc_post)},
                              {"retention", r.retention},
                              {"kept_shots", r.kept_shots},
                              {"total_shots", r.total_shots}});
    }
    return j;
}

/// Long-format absolute errors (one row per step and node) for box plots.
inline std::string error_boxplot_csv(const std::vector<ErrorStats> &per_step, const Graph &g,
                                     const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "step,node,id,abs_error\n";
    for (std::size_t t = 0; t < per_step.size(); ++t) {
        const auto &e = per_step[t].errors;
        for (NodeIndex i = 0; i < e.size(); ++i) {
            os << t << ',' << i << ',' << detail::csv_field(g.id(i)) << ',' << detail::num(e[i])
               << '\n';
        }
    }
    return os.str();
}

inline std::string error_summary_csv(const std::vector<ErrorStats> &per_step,
                                     const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "step,min,q1,median,q3,max\n";
    for (std::size_t t = 0; t < per_step.size(); ++t) {
        const auto &s = per_step[t];
        os << t << ',' << detail::num(s.min) << ',' << detail::num(s.q1) << ','
           << detail::num(s.median) << ',' << detail::num(s.q3) << ',' << detail::num(s.max)
           << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Prioritization

inline std::string scores_csv(const std::vector<RankEntry> &rows, const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "rank,node,id,label,score,is_seed\n";
    for (const auto &r : rows) {
        os << r.rank << ',' << r.node << ',' << detail::csv_field(r.id) << ','
           << detail::csv_field(r.label) << ',' << detail::num(r.score) << ','
           << (r.is_seed ? 1 : 0) << '\n';
    }
    return os.str();
}

inline Json scores_json(const std::vector<RankEntry> &rows, const ScoreTable &s,
                        const Provenance &prov) {
    Json j;
    j["provenance"] = prov.to_json();
    j["window"] = {s.t_min, s.t_max};
    j["ranking"] = Json::array();
    for (const auto &r : rows) {
        j["ranking"].push_back({{"rank", r.rank},
                                {"node", r.node},
                                {"id", r.id},
                                {"label", r.label},
                                {"score", r.score},
                                {"is_seed", r.is_seed}});
    }
    return j;
}

/// Matrix of I_i(t): one row per step, one column per node.
inline std::string qii_heatmap_csv(const QiiSeries &q, const std::vector<std::string> &ids,
                                   const Provenance &prov) {
    std::ostringstream os;
    os << prov.csv_line() << "step";
    for (const auto &id : ids) {
        os << ',' << detail::csv_field(id);
    }
    os << '\n';
    for (std::size_t t = 0; t < q.steps(); ++t) {
        os << t;
        for (auto v : q.index[t]) {
            os << ',' << detail::num(v);
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Device data and routing reports

/**
 * Calibration JSON:
 *   {"qubits": 156,
 *    "coupling": [[0, 1], ...],                      (optional)
 *    "readout_error": [0.01, ...] | {"0": 0.01, ...},
 *    "two_qubit_error": [{"qubits": [0, 1], "error": 0.002}, ...]}
 */
inline CalibrationData calibration_from_json(const Json &j, int qubit_count) {
    CalibrationData c;
    try {
        if (j.contains("readout_error")) {
            const auto &r = j.at("readout_error");
            c.readout_error.assign(static_cast<std::size_t>(qubit_count), 0.0);
            if (r.is_array()) {
                detail::require(static_cast<int>(r.size()) == qubit_count,
                                "readout_error array length does not match qubit count");
                c.readout_error = r.get<std::vector<double>>();
            } else {
                for (const auto &[k, v] : r.items()) {
                    const int q = std::stoi(k);
                    detail::require(q >= 0 && q < qubit_count,
                                    "readout_error names unknown qubit " + k);
                    c.readout_error[static_cast<std::size_t>(q)] = v.get<double>();
                }
            }
            for (auto x : c.readout_error) {
                detail::require(x >= 0.0 && x <= 1.0, "readout error outside [0, 1]");
            }
        }
        if (j.contains("two_qubit_error")) {
            for (const auto &e : j.at("two_qubit_error")) {
                const auto q = e.at("qubits").get<std::vector<int>>();
                detail::require(q.size() == 2, "two_qubit_error entries need two qubits");
                c.two_qubit_error[std::minmax(q[0], q[1])] = e.at("error").get<double>();
            }
        }
    } catch (const Json::exception &e) {
        throw ParseError(0, std::string("malformed calibration JSON: ") + e.what());
    } catch (const std::logic_error &e) {
        if (dynamic_cast<const Error *>(&e)) {
            throw;
        }
        throw ParseError(0, std::string("malformed calibration JSON: ") + e.what());
    }
    return c;
}

/// Coupling map from calibration JSON: explicit "coupling" edges when given,
/// else the 156-qubit heavy-hex layout.
inline CouplingMap coupling_map_from_json(const Json &j) {
    CouplingMap cm;
    if (j.contains("coupling")) {
        try {
            const int n = j.at("qubits").get<int>();
            cm = CouplingMap(n, j.at("coupling").get<std::vector<std::pair<int, int>>>());
        } catch (const Json::exception &e) {
            throw ParseError(0, std::string("malformed coupling map: ") + e.what());
        }
    } else {
        cm = heavy_hex(8);
    }
    cm.calibration = calibration_from_json(j, cm.qubit_count());
    return cm;
}

struct CompileSummary {
    int logical_qubits = 0;
    int steps = 0;
    int logical_entangling_layers = 0;
    std::vector<int> logical_layers_by_step;
    int logical_native_depth = 0;
};

inline CompileSummary summarize(const GateProgram &p) {
    CompileSummary s;
    s.logical_qubits = p.qubit_count;
    s.logical_layers_by_step = entangling_layers_by_step(p);
    s.steps = static_cast<int>(s.logical_layers_by_step.size());
    s.logical_entangling_layers = count_logical_layers(p).entangling;
    s.logical_native_depth = native_entangling_depth(p);
    return s;
}

inline Json routing_json(const CompileSummary &cs, const LayoutResult &lr, const RoutedProgram &rp,
                         const CouplingMap &cm, const Provenance &prov) {
    Json layout = Json::array();
    for (std::size_t l = 0; l < lr.layout.physical.size(); ++l) {
        layout.push_back({{"logical", l},
                          {"physical", lr.layout.physical[l]},
                          {"final_physical", rp.final_layout.physical[l]},
                          {"readout_error", cm.readout_error(lr.layout.physical[l])}});
    }
    return {{"provenance", prov.to_json()},
            {"logical",
             {{"qubits", cs.logical_qubits},
              {"steps", cs.steps},
              {"entangling_layers", cs.logical_entangling_layers},
              {"entangling_layers_by_step", cs.logical_layers_by_step},
              {"native_entangling_depth", cs.logical_native_depth}}},
            {"device", {{"qubits", cm.qubit_count()}, {"edges", cm.edges().size()}}},
            {"layout",
             {{"best_trial", lr.best_trial},
              {"feasible_trials", lr.feasible_trials},
              {"rejected_pair_distance", lr.rejected_pair_distance},
              {"rejected_readout", lr.rejected_readout},
              {"worst_pair_distance", lr.worst_pair_distance},
              {"swap_estimate", lr.score.swap_estimate},
              {"readout_sum", lr.score.readout_sum},
              {"mapping", layout}}},
            {"routed",
             {{"swap_count", rp.swap_count},
              {"entangling_layers", entangling_layer_count(rp)},
              {"entangling_layers_by_step", entangling_layers_by_step(rp.program)},
              {"native_entangling_depth", native_entangling_depth(rp.program)},
              {"cz_equivalent", cz_equivalent_count(rp)}}}};
}

} // namespace qwalk

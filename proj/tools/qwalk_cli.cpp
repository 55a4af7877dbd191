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
//
// qwalk: command-line driver.
//
//   qwalk sample     --graph net.tsv --seed-candidates 7 --out dir
//   qwalk walk       --config run.toml [--backend oracle|dense|bounded|noisy]
//   qwalk compile    --config run.toml
//   qwalk layout     --config run.toml
//   qwalk simulate   --config run.toml          (noisy shot tables)
//   qwalk metrics    --config run.toml --shots dir/shots_t1.json ...
//   qwalk prioritize --config run.toml [--quantum trajectory.json]
//   qwalk report     --config run.toml
//
// Exit codes: 0 ok, 2 invalid input, 3 infeasible search, 4 backend
// capability, 1 anything else.

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk.hpp"
#include "toml.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using qwalk::Json;

namespace {

enum Exit { kOk = 0, kOther = 1, kValidation = 2, kInfeasible = 3, kCapability = 4 };

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw qwalk::ValidationError("cannot read " + p.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path &p, const std::string &text) {
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw qwalk::ValidationError("cannot write " + p.string());
    }
    out << text;
}

Json toml_to_json(const toml::node &n) {
    if (const auto *t = n.as_table()) {
        Json j = Json::object();
        for (const auto &[k, v] : *t) {
            j[std::string(k.str())] = toml_to_json(v);
        }
        return j;
    }
    if (const auto *a = n.as_array()) {
        Json j = Json::array();
        for (const auto &v : *a) {
            j.push_back(toml_to_json(v));
        }
        return j;
    }
    if (const auto *s = n.as_string()) {
        return s->get();
    }
    if (const auto *i = n.as_integer()) {
        return i->get();
    }
    if (const auto *f = n.as_floating_point()) {
        return f->get();
    }
    if (const auto *b = n.as_boolean()) {
        return b->get();
    }
    throw qwalk::ValidationError("unsupported TOML value (dates and times are not accepted)");
}

/// Config file as JSON: TOML unless the extension is .json.
Json load_config_file(const fs::path &p) {
    const auto text = read_file(p);
    if (p.extension() == ".json") {
        try {
            return Json::parse(text);
        } catch (const Json::exception &e) {
            throw qwalk::ValidationError("config " + p.string() + ": " + e.what());
        }
    }
    try {
        return toml_to_json(toml::parse(text, p.string()));
    } catch (const toml::parse_error &e) {
        std::ostringstream os;
        os << "config " << p.string() << ":" << e.source().begin.line << ": " << e.description();
        throw qwalk::ValidationError(os.str());
    }
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    std::string graph;
    std::string labels; // optional sidecar
    std::string seed_node;
    double alpha = qwalk::kDefaultAlpha;
    int steps = 7;
    std::string backend = "oracle";
    int max_weight = 0; // 0: max(2, max degree), the widest intermediate sector

    std::string noise_model = "kingston";
    std::optional<double> p1, p2, gamma, readout;
    std::string calibration;

    std::string device = "heavy-hex";
    int layout_trials = 100;
    int max_pair_distance = 8;
    double readout_threshold = std::numeric_limits<double>::infinity();
    std::string routing = "restore";

    double shot_base = 5.3e5;
    double shot_growth = 1.1;
    int trajectories = 200;

    std::uint64_t rng_seed = 1;

    int score_t_min = qwalk::kDefaultScoreStart;
    int score_t_max = -1;
    bool exclude_seed = false;

    std::vector<std::string> seed_candidates;
    int max_degree = 3;
    int max_edges = 20;
    int trial_budget = 10000;

    std::string out = "qwalk_out";

    /// Every field that influences results; hashed for provenance.
    [[nodiscard]] Json to_json() const {
        Json j = {{"graph", graph},
                  {"labels", labels},
                  {"seed_node", seed_node},
                  {"alpha", alpha},
                  {"steps", steps},
                  {"backend", backend},
                  {"max_weight", max_weight},
                  {"noise",
                   {{"model", noise_model},
                    {"p1", qwalk::detail::optional_num(p1)},
                    {"p2", qwalk::detail::optional_num(p2)},
                    {"gamma", qwalk::detail::optional_num(gamma)},
                    {"readout", qwalk::detail::optional_num(readout)},
                    {"calibration", calibration}}},
                  {"layout",
                   {{"device", device},
                    {"trials", layout_trials},
                    {"max_pair_distance", max_pair_distance},
                    {"readout_threshold",
                     std::isfinite(readout_threshold) ? Json(readout_threshold) : Json(nullptr)},
                    {"routing", routing}}},
                  {"shots", {{"base", shot_base}, {"growth", shot_growth}, {"trajectories", trajectories}}},
                  {"rng", {{"seed", rng_seed}}},
                  {"prioritize",
                   {{"t_min", score_t_min}, {"t_max", score_t_max}, {"exclude_seed", exclude_seed}}},
                  {"sample",
                   {{"seed_candidates", seed_candidates},
                    {"max_degree", max_degree},
                    {"max_edges", max_edges},
                    {"trial_budget", trial_budget}}}};
        return j;
    }
};

template <class T> void take(const Json &j, const char *key, T &dst) {
    if (j.contains(key) && !j.at(key).is_null()) {
        try {
            dst = j.at(key).get<T>();
        } catch (const Json::exception &e) {
            throw qwalk::ValidationError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

template <class T> void take(const Json &j, const char *key, std::optional<T> &dst) {
    if (j.contains(key) && !j.at(key).is_null()) {
        T v{};
        take(j, key, v);
        dst = v;
    }
}

const Json &section(const Json &j, const char *key) {
    static const Json empty = Json::object();
    return j.contains(key) ? j.at(key) : empty;
}

/// Paths in a config file are relative to the file.
std::string resolve(const std::string &path, const fs::path &base) {
    if (path.empty() || fs::path(path).is_absolute()) {
        return path;
    }
    return (base / path).lexically_normal().string();
}

void apply_config(RunConfig &c, const Json &j, const fs::path &base) {
    take(j, "graph", c.graph);
    take(j, "labels", c.labels);
    if (j.contains("seed_node") && j.at("seed_node").is_number_integer()) {
        c.seed_node = std::to_string(j.at("seed_node").get<long long>());
    } else {
        take(j, "seed_node", c.seed_node);
    }
    take(j, "alpha", c.alpha);
    take(j, "steps", c.steps);
    take(j, "backend", c.backend);
    take(j, "max_weight", c.max_weight);
    take(j, "out", c.out);
    const auto &n = section(j, "noise");
    take(n, "model", c.noise_model);
    take(n, "p1", c.p1);
    take(n, "p2", c.p2);
    take(n, "gamma", c.gamma);
    take(n, "readout", c.readout);
    take(n, "calibration", c.calibration);
    const auto &l = section(j, "layout");
    take(l, "device", c.device);
    take(l, "trials", c.layout_trials);
    take(l, "max_pair_distance", c.max_pair_distance);
    take(l, "readout_threshold", c.readout_threshold);
    take(l, "routing", c.routing);
    const auto &s = section(j, "shots");
    take(s, "base", c.shot_base);
    take(s, "growth", c.shot_growth);
    take(s, "trajectories", c.trajectories);
    take(section(j, "rng"), "seed", c.rng_seed);
    const auto &p = section(j, "prioritize");
    take(p, "t_min", c.score_t_min);
    take(p, "t_max", c.score_t_max);
    take(p, "exclude_seed", c.exclude_seed);
    const auto &sm = section(j, "sample");
    if (sm.contains("seed_candidates")) {
        c.seed_candidates.clear();
        for (const auto &v : sm.at("seed_candidates")) {
            c.seed_candidates.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    take(sm, "max_degree", c.max_degree);
    take(sm, "max_edges", c.max_edges);
    take(sm, "trial_budget", c.trial_budget);
    c.graph = resolve(c.graph, base);
    c.labels = resolve(c.labels, base);
    c.calibration = resolve(c.calibration, base);
}

void validate(const RunConfig &c, bool needs_graph) {
    using qwalk::detail::require;
    if (needs_graph) {
        require(!c.graph.empty(), "no graph given (--graph or 'graph' in the config)");
        require(fs::exists(c.graph), "graph file not found: " + c.graph);
    }
    require(c.labels.empty() || fs::exists(c.labels), "label file not found: " + c.labels);
    require(c.calibration.empty() || fs::exists(c.calibration),
            "calibration file not found: " + c.calibration);
    qwalk::check_alpha(c.alpha);
    require(c.steps >= 0, "steps must be >= 0");
    require(c.backend == "oracle" || c.backend == "dense" || c.backend == "bounded" ||
                c.backend == "noisy",
            "backend must be one of oracle, dense, bounded, noisy; got '" + c.backend + "'");
    require(c.max_weight >= 0, "max_weight must be >= 0 (0 picks it from the graph)");
    require(c.noise_model == "kingston" || c.noise_model == "pittsburgh" || c.noise_model == "none",
            "noise model must be kingston, pittsburgh or none; got '" + c.noise_model + "'");
    require(c.device == "heavy-hex" || c.device == "all-to-all" || c.device == "calibration",
            "device must be heavy-hex, all-to-all or calibration; got '" + c.device + "'");
    require(c.device != "calibration" || !c.calibration.empty(),
            "device = calibration needs a calibration file");
    require(c.routing == "restore" || c.routing == "track",
            "routing must be restore or track; got '" + c.routing + "'");
    require(c.layout_trials >= 1, "layout trials must be >= 1");
    require(c.max_pair_distance >= 1, "max_pair_distance must be >= 1");
    require(c.shot_base >= 1.0 && c.shot_growth > 0.0, "shot schedule needs base >= 1, growth > 0");
    require(c.trajectories >= 1, "trajectories must be >= 1");
    require(c.max_degree >= 1 && c.max_edges >= 1 && c.trial_budget >= 1,
            "sampling caps and trial budget must be >= 1");
}

// ---------------------------------------------------------------------------
// Shared pieces

struct Context {
    std::string command;
    RunConfig cfg;
    qwalk::Provenance prov;
    fs::path out;
};

qwalk::Graph load_graph(const RunConfig &c) {
    auto g = qwalk::load_edge_list(read_file(c.graph));
    if (!c.labels.empty()) {
        qwalk::apply_label_sidecar(g, read_file(c.labels));
    }
    return g;
}

qwalk::NodeIndex seed_index(const qwalk::Graph &g, const RunConfig &c) {
    qwalk::detail::require(!c.seed_node.empty(), "no seed node given (--seed-node)");
    return g.index_of(c.seed_node);
}

qwalk::NoiseModel noise_of(const RunConfig &c) {
    qwalk::NoiseModel n;
    if (c.noise_model == "kingston") {
        n = qwalk::NoiseModel::kingston();
    } else if (c.noise_model == "pittsburgh") {
        n = qwalk::NoiseModel::pittsburgh();
    }
    if (c.p1) {
        n.p1 = *c.p1;
    }
    if (c.p2) {
        n.p2 = *c.p2;
    }
    if (c.gamma) {
        n.gamma = *c.gamma;
    }
    if (c.readout) {
        n.readout_01 = n.readout_10 = *c.readout;
    }
    n.validate();
    return n;
}

std::optional<qwalk::CouplingMap> device_of(const RunConfig &c) {
    if (c.device == "all-to-all") {
        return std::nullopt;
    }
    if (!c.calibration.empty()) {
        Json j;
        try {
            j = Json::parse(read_file(c.calibration));
        } catch (const Json::exception &e) {
            throw qwalk::ValidationError("calibration " + c.calibration + ": " + e.what());
        }
        auto cm = qwalk::coupling_map_from_json(j);
        if (c.device == "heavy-hex" && j.contains("coupling")) {
            auto hh = qwalk::heavy_hex(8);
            hh.calibration = cm.calibration;
            return hh;
        }
        return cm;
    }
    return qwalk::heavy_hex(8);
}

qwalk::LayoutOptions layout_options(const RunConfig &c) {
    qwalk::LayoutOptions o;
    o.trials = c.layout_trials;
    o.max_pair_distance = c.max_pair_distance;
    o.readout_threshold = c.readout_threshold;
    o.rng_seed = c.rng_seed;
    return o;
}

qwalk::RoutingPolicy policy_of(const RunConfig &c) {
    return c.routing == "track" ? qwalk::RoutingPolicy::Track : qwalk::RoutingPolicy::Restore;
}

qwalk::NoisyWalkOptions noisy_options(const RunConfig &c) {
    qwalk::NoisyWalkOptions o;
    o.alpha = c.alpha;
    o.steps = c.steps;
    o.trajectories = c.trajectories;
    o.shot_base = c.shot_base;
    o.shot_growth = c.shot_growth;
    o.rng_seed = c.rng_seed;
    o.noise = noise_of(c);
    o.device = device_of(c);
    o.layout = layout_options(c);
    o.policy = policy_of(c);
    return o;
}

/// Node distributions for t = 0..steps from the configured exact backend.
std::vector<std::vector<double>> exact_distributions(const qwalk::Graph &g, qwalk::NodeIndex seed,
                                                     const RunConfig &c) {
    const qwalk::DirectedEdgeIndex idx(g);
    if (c.backend == "oracle") {
        return qwalk::distributions_of(qwalk::run_walk(g, idx, seed, c.alpha, c.steps));
    }
    std::vector<std::vector<double>> out;
    for (int t = 0; t <= c.steps; ++t) {
        const auto p = qwalk::compile_walk(g, seed, c.alpha, t);
        std::vector<double> edge;
        if (c.backend == "dense") {
            edge = qwalk::single_excitation_probabilities(qwalk::simulate_dense(p));
        } else {
            const int w = c.max_weight > 0 ? c.max_weight
                                           : std::max<int>(2, static_cast<int>(g.max_degree()));
            edge = qwalk::single_excitation_probabilities(qwalk::simulate_bounded(p, w).state);
        }
        out.push_back(qwalk::detail::node_marginals(edge, idx));
    }
    return out;
}

std::string json_text(const Json &j) { return j.dump(2) + "\n"; }

void say(const std::string &line) { std::cout << line << '\n'; }

// ---------------------------------------------------------------------------
// Commands

int cmd_sample(Context &ctx) {
    const auto &c = ctx.cfg;
    const auto g = load_graph(c);
    std::set<std::string> candidates(c.seed_candidates.begin(), c.seed_candidates.end());
    qwalk::SampleOptions o;
    o.max_degree = static_cast<std::size_t>(c.max_degree);
    o.max_edges = static_cast<std::size_t>(c.max_edges);
    o.rng_seed = c.rng_seed;
    o.trial_budget = static_cast<std::size_t>(c.trial_budget);
    const auto s = qwalk::sample_subgraph(g, candidates, o);
    write_file(ctx.out / "subgraph.tsv", "# qwalk command=sample version=" + ctx.prov.version +
                                             " config_hash=" + ctx.prov.config_hash +
                                             " seed_node=" + s.seed + "\n" +
                                             qwalk::to_edge_list(s.graph));
    Json j = {{"provenance", ctx.prov.to_json()},
              {"seed_node", s.seed},
              {"rng_seed", s.rng_seed},
              {"trials", s.trials},
              {"nodes", s.graph.node_count()},
              {"edges", s.graph.edge_count()},
              {"max_degree", s.graph.max_degree()},
              {"diameter", s.graph.diameter()}};
    write_file(ctx.out / "sample.json", json_text(j));
    say("sampled " + std::to_string(s.graph.node_count()) + " nodes, " +
                 std::to_string(s.graph.edge_count()) + " edges, seed " + s.seed + " after " +
                 std::to_string(s.trials) + " trials");
    return kOk;
}

void write_noisy(const Context &ctx, const qwalk::Graph &g, const qwalk::NoisyWalkResult &r) {
    std::vector<qwalk::StepMetrics> rows;
    std::vector<qwalk::ErrorStats> raw_err;
    std::vector<qwalk::ErrorStats> post_err;
    std::vector<std::vector<double>> raw;
    std::vector<std::vector<double>> post;
    Json shots = Json::array();
    for (const auto &s : r.steps) {
        const auto &ideal = r.ideal[static_cast<std::size_t>(s.step)].distribution.probabilities;
        rows.push_back(s.metrics);
        raw.push_back(s.raw_node);
        post.push_back(s.post_node);
        raw_err.push_back(qwalk::absolute_error_stats(s.raw_node, ideal));
        post_err.push_back(qwalk::absolute_error_stats(s.post_node, ideal));
        write_file(ctx.out / ("shots_t" + std::to_string(s.step) + ".json"),
                   json_text(qwalk::shots_json(s.shots, s.step, ctx.prov)));
    }
    write_file(ctx.out / "metrics.csv", qwalk::metrics_csv(rows, ctx.prov));
    write_file(ctx.out / "metrics.json", json_text(qwalk::metrics_json(rows, ctx.prov)));
    write_file(ctx.out / "raw_trajectory.csv", qwalk::trajectory_csv(raw, g, ctx.prov));
    write_file(ctx.out / "postselected_trajectory.csv", qwalk::trajectory_csv(post, g, ctx.prov));
    write_file(ctx.out / "postselected_trajectory.json",
               json_text(qwalk::trajectory_json(post, g, ctx.prov)));
    write_file(ctx.out / "error_raw.csv", qwalk::error_boxplot_csv(raw_err, g, ctx.prov));
    write_file(ctx.out / "error_postselected.csv", qwalk::error_boxplot_csv(post_err, g, ctx.prov));
    write_file(ctx.out / "error_summary_postselected.csv",
               qwalk::error_summary_csv(post_err, ctx.prov));
}

void print_metrics(const qwalk::NoisyWalkResult &r) {
    std::printf("%4s %9s %9s %9s\n", "t", "F_raw", "F_post", "retained");
    for (const auto &s : r.steps) {
        std::printf("%4d %9.4f %9.4f %9.4f\n", s.step, s.metrics.fidelity_raw,
                    s.metrics.fidelity_post, s.metrics.retention);
    }
}

int cmd_walk(Context &ctx) {
    const auto &c = ctx.cfg;
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    if (c.backend == "noisy") {
        const auto r = qwalk::run_noisy_walk(g, seed, noisy_options(c));
        write_noisy(ctx, g, r);
        write_file(ctx.out / "trajectory.csv",
                   qwalk::trajectory_csv(qwalk::distributions_of(r.ideal), g, ctx.prov));
        print_metrics(r);
        return kOk;
    }
    const auto d = exact_distributions(g, seed, c);
    write_file(ctx.out / "trajectory.csv", qwalk::trajectory_csv(d, g, ctx.prov));
    write_file(ctx.out / "trajectory.json", json_text(qwalk::trajectory_json(d, g, ctx.prov)));
    say("wrote " + std::to_string(d.size()) + " distributions (t = 0.." +
                 std::to_string(c.steps) + ") with the " + c.backend + " backend");
    return kOk;
}

int cmd_compile(Context &ctx) {
    const auto &c = ctx.cfg;
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    const auto p = qwalk::compile_walk(g, seed, c.alpha, c.steps);
    const auto summary = qwalk::summarize(p);
    const qwalk::QasmOptions qo{"qwalk version=" + ctx.prov.version +
                                " config_hash=" + ctx.prov.config_hash};
    write_file(ctx.out / "circuit.qasm", qwalk::to_qasm3(p, qo));
    say("qubits: " + std::to_string(summary.logical_qubits));
    say("entangling layers (all-to-all): " + std::to_string(summary.logical_entangling_layers));
    Json j = {{"provenance", ctx.prov.to_json()},
              {"logical",
               {{"qubits", summary.logical_qubits},
                {"steps", summary.steps},
                {"entangling_layers", summary.logical_entangling_layers},
                {"entangling_layers_by_step", summary.logical_layers_by_step},
                {"native_entangling_depth", summary.logical_native_depth},
                {"native_two_qubit_gates", qwalk::total_native_two_qubit_cost(p)}}}};
    if (const auto cm = device_of(c)) {
        const auto lr = qwalk::layout_search(p, *cm, layout_options(c));
        const auto rp = qwalk::route(p, lr.layout, *cm, policy_of(c));
        j = qwalk::routing_json(summary, lr, rp, *cm, ctx.prov);
        j["logical"]["native_two_qubit_gates"] = qwalk::total_native_two_qubit_cost(p);
        write_file(ctx.out / "routed.qasm", qwalk::to_qasm3(rp.program, qo));
        say("entangling layers (routed): " + std::to_string(qwalk::entangling_layer_count(rp)) +
                     ", swaps: " + std::to_string(rp.swap_count));
    }
    write_file(ctx.out / "compile.json", json_text(j));
    return kOk;
}

int cmd_layout(Context &ctx) {
    const auto &c = ctx.cfg;
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    const auto cm = device_of(c);
    qwalk::detail::require(cm.has_value(), "layout needs a device (heavy-hex or calibration)");
    const auto p = qwalk::compile_walk(g, seed, c.alpha, std::max(1, c.steps));
    const auto lr = qwalk::layout_search(p, *cm, layout_options(c));
    const auto rp = qwalk::route(p, lr.layout, *cm, policy_of(c));
    write_file(ctx.out / "layout.json",
               json_text(qwalk::routing_json(qwalk::summarize(p), lr, rp, *cm, ctx.prov)));
    say("layout: trial " + std::to_string(lr.best_trial) + " of " +
                 std::to_string(c.layout_trials) + ", " + std::to_string(lr.feasible_trials) +
                 " feasible, estimated swaps " + std::to_string(lr.score.swap_estimate));
    return kOk;
}

int cmd_simulate(Context &ctx) {
    auto &c = ctx.cfg;
    c.backend = "noisy";
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    const auto r = qwalk::run_noisy_walk(g, seed, noisy_options(c));
    for (const auto &s : r.steps) {
        write_file(ctx.out / ("shots_t" + std::to_string(s.step) + ".json"),
                   json_text(qwalk::shots_json(s.shots, s.step, ctx.prov)));
        write_file(ctx.out / ("shots_t" + std::to_string(s.step) + ".csv"),
                   qwalk::shots_csv(s.shots, ctx.prov));
    }
    say("wrote shot tables for t = 1.." + std::to_string(c.steps));
    return kOk;
}

int cmd_metrics(Context &ctx, const std::vector<std::string> &shot_files) {
    const auto &c = ctx.cfg;
    qwalk::detail::require(!shot_files.empty(), "metrics needs at least one --shots file");
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    const qwalk::DirectedEdgeIndex idx(g);
    int t_max = 0;
    std::vector<std::pair<int, qwalk::ShotTable>> tables;
    for (const auto &f : shot_files) {
        Json j;
        try {
            j = Json::parse(read_file(f));
        } catch (const Json::exception &e) {
            throw qwalk::ValidationError(f + ": " + e.what());
        }
        qwalk::detail::require(j.contains("step"), f + ": shot table has no step");
        const int t = j.at("step").get<int>();
        t_max = std::max(t_max, t);
        tables.emplace_back(t, qwalk::shots_from_json(j));
    }
    const auto walk = qwalk::run_walk(g, idx, seed, c.alpha, t_max);
    const auto r = qwalk::stationary_distribution(g).probabilities;
    std::vector<qwalk::StepMetrics> rows;
    std::vector<qwalk::ErrorStats> post_err;
    for (const auto &[t, st] : tables) {
        const auto &ideal = walk[static_cast<std::size_t>(t)].distribution.probabilities;
        rows.push_back(qwalk::evaluate_step(t, st, idx, ideal, r));
        post_err.push_back(qwalk::absolute_error_stats(
            qwalk::postselected_probabilities(st, idx).node, ideal));
    }
    write_file(ctx.out / "metrics.csv", qwalk::metrics_csv(rows, ctx.prov));
    write_file(ctx.out / "metrics.json", json_text(qwalk::metrics_json(rows, ctx.prov)));
    write_file(ctx.out / "error_postselected.csv", qwalk::error_boxplot_csv(post_err, g, ctx.prov));
    for (const auto &m : rows) {
        std::printf("t=%d F_raw=%.4f F_post=%.4f retained=%.4f\n", m.step, m.fidelity_raw,
                    m.fidelity_post, m.retention);
    }
    return kOk;
}

int cmd_prioritize(Context &ctx, const std::string &quantum_file,
                   const std::string &classical_file) {
    const auto &c = ctx.cfg;
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    std::vector<std::vector<double>> pq;
    std::vector<std::vector<double>> pcl;
    if (!quantum_file.empty()) {
        pq = qwalk::trajectory_from_json(Json::parse(read_file(quantum_file)));
    } else if (c.backend == "noisy") {
        const auto r = qwalk::run_noisy_walk(g, seed, noisy_options(c));
        write_noisy(ctx, g, r);
        pq.push_back(r.ideal.front().distribution.probabilities);
        for (const auto &s : r.steps) {
            pq.push_back(s.post_node);
        }
    } else {
        pq = exact_distributions(g, seed, c);
    }
    if (!classical_file.empty()) {
        pcl = qwalk::trajectory_from_json(Json::parse(read_file(classical_file)));
    } else {
        pcl = qwalk::distributions_of(
            qwalk::classical_walk(g, seed, c.alpha, static_cast<int>(pq.size()) - 1));
    }
    const auto series = qwalk::qii(pq, pcl);
    const auto table = qwalk::score(series, c.score_t_min, c.score_t_max);
    qwalk::RankOptions ro;
    ro.seed = seed;
    ro.exclude_seed = c.exclude_seed;
    const auto rows = qwalk::rank_report(table, g.ids(), g.labels(), ro);
    write_file(ctx.out / "scores.csv", qwalk::scores_csv(rows, ctx.prov));
    write_file(ctx.out / "scores.json", json_text(qwalk::scores_json(rows, table, ctx.prov)));
    write_file(ctx.out / "qii_heatmap.csv", qwalk::qii_heatmap_csv(series, g.ids(), ctx.prov));
    for (const auto &e : rows) {
        std::printf("%3zu  %-10s %-12s %.6f%s\n", e.rank, e.id.c_str(), e.label.c_str(), e.score,
                    e.is_seed ? "  (seed)" : "");
    }
    return kOk;
}

int cmd_report(Context &ctx) {
    auto &c = ctx.cfg;
    const auto g = load_graph(c);
    const auto seed = seed_index(g, c);
    const auto p = qwalk::compile_walk(g, seed, c.alpha, c.steps);
    const auto summary = qwalk::summarize(p);
    std::ostringstream md;
    md << "# qwalk report\n\n"
       << "- version: " << ctx.prov.version << "\n- config hash: " << ctx.prov.config_hash
       << "\n- graph: " << c.graph << " (" << g.node_count() << " nodes, " << g.edge_count()
       << " edges, max degree " << g.max_degree() << ", diameter " << g.diameter() << ")\n"
       << "- seed node: " << c.seed_node << "\n- steps: " << c.steps << ", alpha: " << c.alpha
       << "\n\n## Circuit\n\n- qubits: " << summary.logical_qubits
       << "\n- entangling layers (all-to-all): " << summary.logical_entangling_layers << '\n';
    Json j = {{"provenance", ctx.prov.to_json()}, {"config", c.to_json()}};
    j["circuit"] = {{"qubits", summary.logical_qubits},
                    {"entangling_layers", summary.logical_entangling_layers},
                    {"entangling_layers_by_step", summary.logical_layers_by_step}};
    if (const auto cm = device_of(c)) {
        const auto lr = qwalk::layout_search(p, *cm, layout_options(c));
        const auto rp = qwalk::route(p, lr.layout, *cm, policy_of(c));
        md << "- entangling layers (routed): " << qwalk::entangling_layer_count(rp)
           << "\n- swaps: " << rp.swap_count << '\n';
        j["circuit"]["routed_entangling_layers"] = qwalk::entangling_layer_count(rp);
        j["circuit"]["swaps"] = rp.swap_count;
    }
    std::vector<std::vector<double>> pq;
    if (c.backend == "noisy") {
        const auto r = qwalk::run_noisy_walk(g, seed, noisy_options(c));
        write_noisy(ctx, g, r);
        md << "\n## Noisy run\n\n| t | F_H raw | F_H postselected | retention |\n|---|---|---|---|\n";
        pq.push_back(r.ideal.front().distribution.probabilities);
        for (const auto &s : r.steps) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "| %d | %.4f | %.4f | %.4f |\n", s.step,
                          s.metrics.fidelity_raw, s.metrics.fidelity_post, s.metrics.retention);
            md << buf;
            pq.push_back(s.post_node);
        }
        j["metrics"] = qwalk::metrics_json([&] {
            std::vector<qwalk::StepMetrics> rows;
            for (const auto &s : r.steps) {
                rows.push_back(s.metrics);
            }
            return rows;
        }(), ctx.prov)["steps"];
    } else {
        pq = exact_distributions(g, seed, c);
    }
    if (c.steps >= c.score_t_min) {
        const auto pcl = qwalk::distributions_of(qwalk::classical_walk(g, seed, c.alpha, c.steps));
        const auto table = qwalk::score(qwalk::qii(pq, pcl), c.score_t_min, c.score_t_max);
        qwalk::RankOptions ro;
        ro.seed = seed;
        ro.exclude_seed = c.exclude_seed;
        const auto rows = qwalk::rank_report(table, g.ids(), g.labels(), ro);
        md << "\n## Ranking (" << c.backend << " backend)\n\n| rank | id | label | score |\n|---|---|---|---|\n";
        for (const auto &e : rows) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "| %zu | %s | %s | %.6f |\n", e.rank, e.id.c_str(),
                          e.label.c_str(), e.score);
            md << buf;
        }
        j["ranking"] = qwalk::scores_json(rows, table, ctx.prov)["scores"];
    }
    write_file(ctx.out / "report.md", md.str());
    write_file(ctx.out / "report.json", json_text(j));
    std::cout << md.str();
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qwalk: discrete-time quantum walk compiler, simulator and gene prioritization"};
    app.set_version_flag("--version", std::string(qwalk::kVersion));
    app.require_subcommand(1);

    // Flag values land here; std::optional marks "given on the command line".
    std::string config_path;
    std::optional<std::uint64_t> rng_seed;
    std::optional<std::string> out, graph, labels, seed_node, backend, noise, calibration, device,
        routing;
    std::optional<double> alpha, p1, p2, gamma, readout, shot_base, shot_growth, readout_threshold;
    std::optional<int> steps, trajectories, layout_trials, max_pair_distance, max_weight, t_min,
        t_max, max_degree, max_edges, trial_budget;
    std::vector<std::string> seed_candidates;
    std::vector<std::string> shot_files;
    std::string quantum_file;
    std::string classical_file;
    bool exclude_seed = false;

    struct Sub {
        const char *name;
        const char *help;
    };
    const Sub subs[] = {
        {"sample", "sample a capped connected subgraph containing a seed candidate"},
        {"walk", "node distributions over time with the chosen backend"},
        {"compile", "compile to a gate program, route it and export OpenQASM 3"},
        {"layout", "search a qubit layout on the device"},
        {"simulate", "noisy shot tables for t = 1..T"},
        {"metrics", "fidelities and retention from shot tables"},
        {"prioritize", "rank nodes by their maximum interference index"},
        {"report", "compile, walk and rank in one summary"},
    };
    for (const auto &s : subs) {
        auto *sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_path, "TOML or JSON run configuration");
        sc->add_option("--seed", rng_seed, "rng seed for every random choice");
        sc->add_option("--out", out, "output directory");
        sc->add_option("--graph", graph, "edge list (TSV/CSV/whitespace)");
        sc->add_option("--labels", labels, "node label sidecar");
        sc->add_option("--seed-node", seed_node, "walk seed node id");
        sc->add_option("--alpha", alpha, "shift mixing parameter in [0, 1]");
        sc->add_option("--steps", steps, "walk steps T");
        sc->add_option("--backend", backend, "oracle, dense, bounded or noisy");
        sc->add_option("--max-weight", max_weight, "Hamming-weight bound of the bounded backend");
        sc->add_option("--noise", noise, "kingston, pittsburgh or none");
        sc->add_option("--p1", p1, "single-qubit depolarizing probability");
        sc->add_option("--p2", p2, "two-qubit depolarizing probability");
        sc->add_option("--gamma", gamma, "amplitude damping per entangling layer");
        sc->add_option("--readout", readout, "symmetric readout flip probability");
        sc->add_option("--calibration", calibration, "device calibration JSON");
        sc->add_option("--device", device, "heavy-hex, all-to-all or calibration");
        sc->add_option("--routing", routing, "restore or track");
        sc->add_option("--layout-trials", layout_trials, "random layout trials");
        sc->add_option("--max-pair-distance", max_pair_distance, "layout pair-distance cap");
        sc->add_option("--readout-threshold", readout_threshold, "layout readout-error cap");
        sc->add_option("--trajectories", trajectories, "noisy trajectories per step");
        sc->add_option("--shots-base", shot_base, "shots at t = 0");
        sc->add_option("--shots-growth", shot_growth, "shot growth factor per step");
        if (std::string(s.name) == "sample") {
            sc->add_option("--seed-candidates", seed_candidates, "seed candidate node ids");
            sc->add_option("--max-degree", max_degree, "degree cap");
            sc->add_option("--max-edges", max_edges, "edge cap");
            sc->add_option("--trial-budget", trial_budget, "sampling trials before giving up");
        }
        if (std::string(s.name) == "metrics") {
            sc->add_option("--shots", shot_files, "shot table JSON files")->expected(1, -1);
        }
        if (std::string(s.name) == "prioritize") {
            sc->add_option("--quantum", quantum_file, "replay: quantum trajectory JSON");
            sc->add_option("--classical", classical_file, "replay: classical trajectory JSON");
            sc->add_option("--t-min", t_min, "first scored step");
            sc->add_option("--t-max", t_max, "last scored step");
            sc->add_flag("--exclude-seed", exclude_seed, "leave the seed out of the ranking");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    Context ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    try {
        auto &c = ctx.cfg;
        if (!config_path.empty()) {
            const fs::path p(config_path);
            apply_config(c, load_config_file(p), p.parent_path());
        }
        auto set = [](auto &dst, const auto &src) {
            if (src) {
                dst = *src;
            }
        };
        set(c.rng_seed, rng_seed);
        set(c.out, out);
        set(c.graph, graph);
        set(c.labels, labels);
        set(c.seed_node, seed_node);
        set(c.alpha, alpha);
        set(c.steps, steps);
        set(c.backend, backend);
        set(c.max_weight, max_weight);
        set(c.noise_model, noise);
        if (p1) {
            c.p1 = p1;
        }
        if (p2) {
            c.p2 = p2;
        }
        if (gamma) {
            c.gamma = gamma;
        }
        if (readout) {
            c.readout = readout;
        }
        set(c.calibration, calibration);
        set(c.device, device);
        set(c.routing, routing);
        set(c.layout_trials, layout_trials);
        set(c.max_pair_distance, max_pair_distance);
        set(c.readout_threshold, readout_threshold);
        set(c.trajectories, trajectories);
        set(c.shot_base, shot_base);
        set(c.shot_growth, shot_growth);
        set(c.score_t_min, t_min);
        set(c.score_t_max, t_max);
        set(c.max_degree, max_degree);
        set(c.max_edges, max_edges);
        set(c.trial_budget, trial_budget);
        if (!seed_candidates.empty()) {
            c.seed_candidates = seed_candidates;
        }
        c.exclude_seed = c.exclude_seed || exclude_seed;
        validate(c, true);
        if (ctx.command == "sample") {
            qwalk::detail::require(!c.seed_candidates.empty(),
                                   "sample needs seed candidates (--seed-candidates)");
        }

        ctx.prov.command = ctx.command;
        // Input files enter the hash by content, so moving a checkout keeps it.
        Json hashed = c.to_json();
        auto content = [](const std::string &path) {
            return path.empty() ? std::string() : qwalk::config_hash(Json(read_file(path)));
        };
        hashed["graph"] = content(c.graph);
        hashed["labels"] = content(c.labels);
        hashed["noise"]["calibration"] = content(c.calibration);
        hashed.erase("out");
        ctx.prov.config_hash = qwalk::config_hash(hashed);
        ctx.out = c.out;
        fs::create_directories(ctx.out);
        write_file(ctx.out / (ctx.command + ".config.json"),
                   json_text({{"provenance", ctx.prov.to_json()}, {"config", c.to_json()}}));

        if (ctx.command == "sample") {
            return cmd_sample(ctx);
        }
        if (ctx.command == "walk") {
            return cmd_walk(ctx);
        }
        if (ctx.command == "compile") {
            return cmd_compile(ctx);
        }
        if (ctx.command == "layout") {
            return cmd_layout(ctx);
        }
        if (ctx.command == "simulate") {
            return cmd_simulate(ctx);
        }
        if (ctx.command == "metrics") {
            return cmd_metrics(ctx, shot_files);
        }
        if (ctx.command == "prioritize") {
            return cmd_prioritize(ctx, quantum_file, classical_file);
        }
        return cmd_report(ctx);
    } catch (const qwalk::Error &e) {
        std::cerr << "qwalk " << ctx.command << ": " << e.what() << '\n';
        switch (e.kind()) {
        case qwalk::ErrorKind::Parse:
        case qwalk::ErrorKind::Validation:
            return kValidation;
        case qwalk::ErrorKind::Infeasible:
            return kInfeasible;
        case qwalk::ErrorKind::Capability:
            std::cerr << "hint: use the bounded backend (--backend bounded) for registers above "
                      << qwalk::kDefaultDenseCap << " qubits, or more shots/trajectories\n";
            return kCapability;
        }
    } catch (const Json::exception &e) {
        std::cerr << "qwalk " << ctx.command << ": malformed JSON input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception &e) {
        std::cerr << "qwalk " << ctx.command << ": " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}

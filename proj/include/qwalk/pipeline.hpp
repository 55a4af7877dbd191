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
 * End-to-end noisy walk: compile each step's circuit, place and route it on
 * a device, simulate noisy trajectories of the routed circuit, sample shots
 * and score them against the reference walk.
 */
#pragma once

#include "qwalk/encoding.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/simulator.hpp"
#include "qwalk/transpile.hpp"
#include "qwalk/walk.hpp"

#include <optional>
#include <vector>

namespace qwalk {

struct NoisyWalkOptions {
    double alpha = kDefaultAlpha;
    int steps = 7;
    int trajectories = 200;
    double shot_base = 5.3e5;
    double shot_growth = 1.1;
    std::uint64_t rng_seed = 1;
    NoiseModel noise = NoiseModel::kingston();
    /// Device to route onto; empty means all-to-all (no SWAPs).
    std::optional<CouplingMap> device = heavy_hex(8);
    LayoutOptions layout;
    RoutingPolicy policy = RoutingPolicy::Restore;
};

struct NoisyStep {
    int step = 0;
    ShotTable shots; ///< over logical qubits
    StepMetrics metrics;
    std::vector<double> raw_node;
    std::vector<double> post_node;
    std::vector<double> retention_per_trajectory;
    int simulated_qubits = 0;
    int swap_count = 0;
};

struct NoisyWalkResult {
    std::vector<WalkStep> ideal; ///< t = 0..steps
    std::vector<double> stationary;
    std::optional<LayoutResult> layout;
    std::vector<NoisyStep> steps; ///< t = 1..steps
};

/// Readout errors of the compact register taken from the device calibration.
inline NoiseModel noise_on_device(NoiseModel noise, const CouplingMap &cm,
                                  const std::vector<int> &physical_of) {
    if (!cm.calibration || cm.calibration->readout_error.empty()) {
        return noise;
    }
    noise.readout_01_per_qubit.clear();
    for (int p : physical_of) {
        noise.readout_01_per_qubit.push_back(cm.readout_error(p));
    }
    noise.readout_10_per_qubit = noise.readout_01_per_qubit;
    return noise;
}

/**
 * Step t uses shot count round(base * growth^t) and rng stream seed
 * rng_seed + t. The layout is chosen once, on the one-step circuit, and kept
 * for every step.
 */
inline NoisyWalkResult run_noisy_walk(const Graph &g, NodeIndex seed,
                                      const NoisyWalkOptions &opt) {
    detail::require(opt.steps >= 1, "noisy walk needs at least one step");
    const DirectedEdgeIndex idx(g);
    const auto assign = QubitAssignment::identity(idx);
    NoisyWalkResult out;
    out.ideal = run_walk(g, idx, seed, opt.alpha, opt.steps);
    out.stationary = stationary_distribution(g).probabilities;
    if (opt.device) {
        out.layout = layout_search(compile_walk(g, idx, assign, seed, opt.alpha, 1), *opt.device,
                                   opt.layout);
    }
    for (int t = 1; t <= opt.steps; ++t) {
        const auto logical = compile_walk(g, idx, assign, seed, opt.alpha, t);
        NoisyStep s;
        s.step = t;
        const auto shots = scheduled_shots(t, opt.shot_base, opt.shot_growth);
        const auto stream = opt.rng_seed + static_cast<std::uint64_t>(t);
        if (opt.device) {
            const auto rp = route(logical, out.layout->layout, *opt.device, opt.policy);
            const auto cp = compact(rp);
            const auto noise = noise_on_device(opt.noise, *opt.device, cp.physical_of);
            Bits measured = 0;
            for (int c : cp.final_compact) {
                measured |= Bits{1} << c;
            }
            s.shots = select_bits(sample_noisy_shots<SparseState>(cp.program, noise,
                                                                  opt.trajectories, shots, stream,
                                                                  kDefaultDenseCap,
                                                                  &s.retention_per_trajectory,
                                                                  measured),
                                  cp.final_compact);
            s.simulated_qubits = cp.program.qubit_count;
            s.swap_count = rp.swap_count;
        } else {
            s.shots = sample_noisy_shots<SparseState>(logical, opt.noise, opt.trajectories, shots,
                                                      stream, kDefaultDenseCap,
                                                      &s.retention_per_trajectory);
            s.simulated_qubits = logical.qubit_count;
        }
        const auto &ideal = out.ideal[static_cast<std::size_t>(t)].distribution.probabilities;
        s.metrics = evaluate_step(t, s.shots, idx, ideal, out.stationary);
        s.raw_node = raw_probabilities(s.shots, idx).node;
        s.post_node = postselected_probabilities(s.shots, idx).node;
        out.steps.push_back(std::move(s));
    }
    return out;
}

} // namespace qwalk

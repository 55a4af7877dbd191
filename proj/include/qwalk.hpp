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
 * Umbrella header: graphs, the reference walk, circuit compilation,
 * transpilation, simulation, metrics, prioritization, the noisy pipeline
 * and I/O.
 */
#pragma once

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/circuit.hpp"
#include "qwalk/encoding.hpp"
#include "qwalk/transpile.hpp"
#include "qwalk/qasm.hpp"
#include "qwalk/simulator.hpp"
#include "qwalk/metrics.hpp"
#include "qwalk/prioritize.hpp"
#include "qwalk/pipeline.hpp"
#include "qwalk/io.hpp"

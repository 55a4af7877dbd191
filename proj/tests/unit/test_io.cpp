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

#include "test_util.hpp"

#include <gtest/gtest.h>

namespace qwalk {
namespace {

const Provenance kProv{"test", "0123456789abcdef"};

TEST(ConfigHash, StableAndKeyOrderIndependent) {
    const auto a = Json::parse(R"({"alpha": 0.5, "steps": 7, "graph": "g.tsv"})");
    const auto b = Json::parse(R"({"graph": "g.tsv", "steps": 7, "alpha": 0.5})");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    EXPECT_NE(config_hash(a), config_hash(Json::parse(R"({"alpha": 0.5, "steps": 8, "graph": "g.tsv"})")));
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Provenance, EmbeddedEverywhere) {
    EXPECT_EQ(kProv.csv_line(), "# qwalk command=test version=" + std::string(kVersion) +
                                    " config_hash=0123456789abcdef\n");
    const auto j = shots_json(ShotTable::from_strings({{"01", 1}}), 1, kProv);
    EXPECT_EQ(j.at("provenance").at("config_hash"), "0123456789abcdef");
    EXPECT_EQ(j.at("provenance").at("version"), kVersion);
}

TEST(Shots, JsonAndCsvRoundTrip) {
    const auto st = ShotTable::from_strings({{"0001", 5}, {"0100", 3}, {"0110", 2}});
    const auto a = shots_from_json(Json::parse(shots_json(st, 2, kProv).dump()));
    EXPECT_EQ(a.counts(), st.counts());
    EXPECT_EQ(a.bit_count(), 4);
    const auto b = shots_from_csv(shots_csv(st, kProv));
    EXPECT_EQ(b.counts(), st.counts());
    EXPECT_THROW(shots_from_csv("bitstring,count\n01,3\n011,1\n"), ParseError);
    EXPECT_THROW(shots_from_csv("# nothing\n"), ParseError);
    EXPECT_THROW(shots_from_csv("01;3\n"), ParseError);
    EXPECT_THROW(shots_from_json(Json::parse(R"({"bits": 2, "counts": {"011": 1}})")), ValidationError);
}

TEST(Trajectory, JsonRoundTripAndCsvShape) {
    const auto g = testing::paw();
    const DirectedEdgeIndex idx(g);
    const auto d = distributions_of(run_walk(g, idx, 0, 0.5, 3));
    const auto back = trajectory_from_json(Json::parse(trajectory_json(d, g, kProv).dump()));
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t t = 0; t < d.size(); ++t) {
        EXPECT_LT(testing::max_abs_diff(back[t], d[t]), 1e-15);
    }
    const auto csv = trajectory_csv(d, g, kProv);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'),
              static_cast<long>(2 + d.size() * g.node_count()));
    EXPECT_THROW(trajectory_from_json(Json::parse(R"({"steps": [{}]})")), ParseError);
}

TEST(Calibration, ArrayAndMapForms) {
    const auto a = calibration_from_json(Json::parse(R"({"readout_error": [0.1, 0.2, 0.3]})"), 3);
    EXPECT_EQ(a.readout_error, (std::vector<double>{0.1, 0.2, 0.3}));
    const auto b = calibration_from_json(
        Json::parse(R"({"readout_error": {"2": 0.4},
                        "two_qubit_error": [{"qubits": [2, 1], "error": 0.01}]})"),
        3);
    EXPECT_EQ(b.readout_error, (std::vector<double>{0.0, 0.0, 0.4}));
    EXPECT_DOUBLE_EQ(b.two_qubit_error.at({1, 2}), 0.01);
}

TEST(Calibration, Errors) {
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"readout_error": [0.1]})"), 3),
                 ValidationError);
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"readout_error": {"7": 0.1}})"), 3),
                 ValidationError);
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"readout_error": [0.1, 2.0, 0.1]})"), 3),
                 ValidationError);
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"readout_error": {"x": 0.1}})"), 3),
                 ParseError);
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"two_qubit_error": [{"qubits": [1]}]})"), 3),
                 ValidationError);
    EXPECT_THROW(calibration_from_json(Json::parse(R"({"two_qubit_error": [{"qubits": [0, 1]}]})"), 3),
                 ParseError);
}

TEST(Calibration, CouplingMapDefaultsToHeavyHex) {
    EXPECT_EQ(coupling_map_from_json(Json::object()).qubit_count(), 156);
    const auto cm = coupling_map_from_json(
        Json::parse(R"({"qubits": 3, "coupling": [[0, 1], [1, 2]], "readout_error": [0, 0.5, 0]})"));
    EXPECT_EQ(cm.qubit_count(), 3);
    EXPECT_DOUBLE_EQ(cm.readout_error(1), 0.5);
}

TEST(Scores, CsvAndJsonCarryRanking) {
    ScoreTable s;
    s.scores = {0.2, 0.7};
    s.ranking = rank_descending(s.scores);
    s.t_min = 2;
    s.t_max = 5;
    const auto rows = rank_report(s, {"a", "b,c"}, {"", ""}, {});
    const auto csv = scores_csv(rows, kProv);
    EXPECT_NE(csv.find("1,1,\"b,c\",\"b,c\",0.7,0\n"), std::string::npos);
    const auto j = scores_json(rows, s, kProv);
    EXPECT_EQ(j.at("window"), Json::parse("[2, 5]"));
    EXPECT_EQ(j.at("ranking").at(0).at("id"), "b,c");
}

} // namespace
} // namespace qwalk

// Copyright 2026 The nlcausal Authors
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
 * Behavior <-> JSON:
 *
 *     {"m_x": 2, "m_y": 2, "o_a": 2, "o_b": 2, "p": [[[[...]]]]}
 *
 * where p[a][b][x][y] = p(a,b|x,y).
 */

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "behavior.hpp"

namespace nlcausal {

inline nlohmann::json to_json(const Behavior &behavior) {
    const Scenario &s = behavior.scenario();
    nlohmann::json p = nlohmann::json::array();
    for (int a = 0; a < s.o_a; ++a) {
        nlohmann::json pa = nlohmann::json::array();
        for (int b = 0; b < s.o_b; ++b) {
            nlohmann::json pb = nlohmann::json::array();
            for (int x = 0; x < s.m_x; ++x) {
                nlohmann::json px = nlohmann::json::array();
                for (int y = 0; y < s.m_y; ++y) {
                    px.push_back(behavior(a, b, x, y));
                }
                pb.push_back(std::move(px));
            }
            pa.push_back(std::move(pb));
        }
        p.push_back(std::move(pa));
    }
    return nlohmann::json{{"m_x", s.m_x},
                          {"m_y", s.m_y},
                          {"o_a", s.o_a},
                          {"o_b", s.o_b},
                          {"p", std::move(p)}};
}

inline Behavior behavior_from_json(const nlohmann::json &doc) {
    for (const char *key : {"m_x", "m_y", "o_a", "o_b", "p"}) {
        if (!doc.contains(key)) {
            throw DomainError(std::string("behavior JSON missing key \"") +
                              key + "\"");
        }
    }
    const Scenario s{doc.at("m_x").get<int>(), doc.at("m_y").get<int>(),
                     doc.at("o_a").get<int>(), doc.at("o_b").get<int>()};
    require_valid(s);
    const auto &p = doc.at("p");
    auto check_len = [](const nlohmann::json &arr, int n, const char *axis) {
        if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
            throw DomainError(std::string("behavior JSON: axis ") + axis +
                              " must be an array of length " +
                              std::to_string(n));
        }
    };
    std::vector<double> table(s.table_size());
    check_len(p, s.o_a, "a");
    for (int a = 0; a < s.o_a; ++a) {
        check_len(p[a], s.o_b, "b");
        for (int b = 0; b < s.o_b; ++b) {
            check_len(p[a][b], s.m_x, "x");
            for (int x = 0; x < s.m_x; ++x) {
                check_len(p[a][b][x], s.m_y, "y");
                for (int y = 0; y < s.m_y; ++y) {
                    table[s.index(a, b, x, y)] = p[a][b][x][y].get<double>();
                }
            }
        }
    }
    return Behavior(s, std::move(table));
}

inline Behavior behavior_from_json_string(const std::string &text) {
    return behavior_from_json(nlohmann::json::parse(text));
}

} // namespace nlcausal

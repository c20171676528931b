#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "treeca/quotient.hpp"
#include "treeca/rules.hpp"
#include "treeca/simulation.hpp"

namespace treeca::io {

// Rule file:
//   {"k": 3, "alphabet_size": 2, "radius": 1,
//    "table": [{"ball": "0(0,0,0)", "out": 0}, ...]}
// Every canonical ball must appear exactly once.
nlohmann::json rule_to_json(const Rule& rule);
Rule rule_from_json(const nlohmann::json& doc, const Limits& limits = {});

// Configuration text: one "vertex symbol" pair per line, "e" for the root;
// blank lines and '#' comments are ignored. Zero symbols may be listed and
// are dropped. Repeated vertices are rejected.
std::string format_config(const FiniteConfig& x);
FiniteConfig parse_config(std::string_view text, const TreeParams& params, const Alphabet& alphabet);

// Trajectory text: each step as "## step n" followed by the config lines.
std::string format_trajectory(const Trajectory& traj);
nlohmann::json trajectory_to_json(const Trajectory& traj);

// 1D rule file: {"alphabet_size": 2, "radius": 1,
//                "table": [{"window": "010", "out": 1}, ...]}
nlohmann::json oned_rule_to_json(const OneDimRule& rule);
OneDimRule oned_rule_from_json(const nlohmann::json& doc);

// 1D configuration text: "level symbol" lines.
std::string format_oned_config(const OneDimConfig& x);
OneDimConfig parse_oned_config(std::string_view text, const Alphabet& alphabet);

nlohmann::json automorphism_to_json(const AutomorphismDescription& g);
AutomorphismDescription automorphism_from_json(const nlohmann::json& doc);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace treeca::io

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "flcc/instances.hpp"

namespace flcc {

enum class InstanceKind { Flpm, Ncc, Sirpfl };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(std::string_view s);

using AnyInstance = std::variant<FlpmInstance, NccInstance, SirpflInstance>;

// Parse one JSON instance document. Throws ParseError on malformed syntax or
// schema shape, ValidationError (naming the field) on invariant violations,
// including a "kind" that disagrees with `kind`.
AnyInstance parse_instance(std::string_view text, InstanceKind kind);
FlpmInstance parse_flpm(std::string_view text);
NccInstance parse_ncc(std::string_view text);
SirpflInstance parse_sirpfl(std::string_view text);

// Normalized form: ids as strings, "inf" sentinels, explicit defaults,
// full holding matrices.
nlohmann::json to_json(const FlpmInstance& inst);
nlohmann::json to_json(const NccInstance& inst);
nlohmann::json to_json(const SirpflInstance& inst);
std::string serialize_instance(const AnyInstance& inst);

// ORLIB uncapacitated facility location text: "n m", then n lines
// "capacity opening_cost", then per client "demand" followed by n costs.
// The capacity token is a placeholder and may be non-numeric.
FlpmInstance read_orlib(std::string_view text);

// Numbers with "inf" sentinel.
nlohmann::json number_or_inf(double v);
double number_or_inf(const nlohmann::json& v, const std::string& field);

}  // namespace flcc

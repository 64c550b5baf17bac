#pragma once

#include "oscil/modulus.hpp"
#include "oscil/oscillation.hpp"
#include "oscil/step_function.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace oscil {

/// {"domain": [a, b], "breakpoints": [...], "values": [...]}
nlohmann::json step_function_to_json(const StepFunction& phi);
StepFunction step_function_from_json(const nlohmann::json& j);

/// {"horizon", "kind": "power" | "linear" | "sampled", plus "alpha"/"scale",
/// "slope" or "grid"/"values"}
nlohmann::json modulus_to_json(const Modulus& xi);
Modulus modulus_from_json(const nlohmann::json& j);

/// "power:ALPHA[:SCALE]" or "linear:SLOPE".
Modulus parse_modulus_spec(const std::string& spec, double horizon);

/// Decimal with 17 significant digits, so values round-trip exactly.
std::string format_real(double x);

/// length,xi,witness_left,witness_right
std::string profile_csv(const OscillationProfile& profile);

}  // namespace oscil

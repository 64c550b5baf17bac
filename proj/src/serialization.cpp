#include "oscil/serialization.hpp"

#include "oscil/errors.hpp"

#include <cstdlib>
#include <fmt/format.h>

namespace oscil {

namespace {

double parse_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw ArgumentError(fmt::format("modulus spec: {} '{}' is not a number", what, text));
    }
    return v;
}

template <class T>
T require(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ArgumentError(fmt::format("missing field '{}'", key));
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(fmt::format("field '{}': {}", key, e.what()));
    }
}

}  // namespace

nlohmann::json step_function_to_json(const StepFunction& phi) {
    return {{"domain", {phi.domain().left(), phi.domain().right()}},
            {"breakpoints", phi.breakpoints()},
            {"values", phi.values()}};
}

StepFunction step_function_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ArgumentError("step function: expected a JSON object");
    const auto domain = require<std::vector<double>>(j, "domain");
    if (domain.size() != 2) throw ArgumentError("step function: domain must be [left, right]");
    return StepFunction(Interval(domain[0], domain[1]), require<std::vector<double>>(j, "breakpoints"),
                        require<std::vector<double>>(j, "values"));
}

nlohmann::json modulus_to_json(const Modulus& xi) {
    nlohmann::json j{{"horizon", xi.horizon()}};
    if (const auto* p = std::get_if<PowerModulus>(&xi.kind())) {
        j["kind"] = "power";
        j["alpha"] = p->alpha;
        j["scale"] = p->scale;
    } else if (const auto* l = std::get_if<LinearModulus>(&xi.kind())) {
        j["kind"] = "linear";
        j["slope"] = l->slope;
    } else {
        const auto& s = std::get<SampledModulus>(xi.kind()).samples;
        j["kind"] = "sampled";
        j["grid"] = s.grid;
        j["values"] = s.values;
    }
    return j;
}

Modulus modulus_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ArgumentError("modulus: expected a JSON object");
    const auto kind = require<std::string>(j, "kind");
    if (kind == "sampled") {
        return Modulus::sampled(require<std::vector<double>>(j, "grid"), require<std::vector<double>>(j, "values"));
    }
    const double horizon = require<double>(j, "horizon");
    if (kind == "power") {
        return Modulus::power(require<double>(j, "alpha"), j.value("scale", 1.0), horizon);
    }
    if (kind == "linear") return Modulus::linear(require<double>(j, "slope"), horizon);
    throw ArgumentError("modulus: unknown kind '" + kind + "'");
}

Modulus parse_modulus_spec(const std::string& spec, double horizon) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts[0] == "power" && (parts.size() == 2 || parts.size() == 3)) {
        const double scale = parts.size() == 3 ? parse_number(parts[2], "scale") : 1.0;
        return Modulus::power(parse_number(parts[1], "alpha"), scale, horizon);
    }
    if (parts[0] == "linear" && parts.size() == 2) return Modulus::linear(parse_number(parts[1], "slope"), horizon);
    throw ArgumentError("modulus spec '" + spec + "': expected power:ALPHA[:SCALE] or linear:SLOPE");
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string profile_csv(const OscillationProfile& profile) {
    std::string out = "length,xi,witness_left,witness_right\n";
    for (std::size_t i = 0; i < profile.lengths.size(); ++i) {
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", profile.lengths[i], profile.xi_values[i],
                           profile.witnesses[i].left(), profile.witnesses[i].right());
    }
    return out;
}

}  // namespace oscil

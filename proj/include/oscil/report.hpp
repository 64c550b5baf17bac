#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <limits>
#include <string>

namespace oscil {

/// Outcome of checking one statement over many trials.
///
/// A trial fails when its signed margin is below -tolerance. The witness
/// holds the inputs of the trial with the most adverse margin.
struct VerificationReport {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    nlohmann::json witness = nlohmann::json::object();

    bool passed() const noexcept { return failures == 0; }

    /// Folds one trial in; ties keep the witness already held.
    void record(double margin, const nlohmann::json& trial_witness) {
        ++trials;
        if (margin < -tolerance) ++failures;
        if (margin < worst_margin) {
            worst_margin = margin;
            witness = trial_witness;
        }
    }
};

nlohmann::json to_json(const VerificationReport& report);

}  // namespace oscil

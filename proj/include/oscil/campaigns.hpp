#pragma once

#include "oscil/geometry.hpp"
#include "oscil/modulus.hpp"
#include "oscil/oscillation.hpp"
#include "oscil/report.hpp"
#include "oscil/step_function.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace oscil {

/// Shared knobs for the randomized campaigns. Random functions live on
/// [0, 1] with values in `values`.
struct CampaignSettings {
    std::size_t grid_size = 128;
    std::size_t pieces_max = 16;
    ValueRange values{-1.0, 1.0};
    /// Nodes of the length grid used by norm normalizations and checks.
    std::size_t norm_grid = 256;
    /// 0 = hardware concurrency, capped by OSCILLIB_THREADS.
    unsigned threads = 0;
    /// Replaces the statement's default tolerance when set.
    std::optional<double> tolerance;
};

struct Trial {
    double margin = 0.0;
    nlohmann::json witness = nlohmann::json::object();
    bool skipped = false;
};

using TrialFn = std::function<Trial(std::uint64_t seed)>;

/// Runs `trial` for every seed, possibly on several threads, and reduces in
/// seed-list order so the report does not depend on scheduling.
VerificationReport run_campaign(const std::string& name, double tolerance, std::span<const std::uint64_t> seeds,
                                const TrialFn& trial, unsigned threads = 0);

/// Worker count: `requested` (or hardware concurrency), capped by OSCILLIB_THREADS.
unsigned resolve_threads(unsigned requested);

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t last_exclusive);

/// k / grid_size for k = 1..grid_size, scaled to the domain length.
std::vector<double> profile_lengths(double domain_length, std::size_t grid_size);

/// Divides phi's deviation from its mean so that its norm against xi is 1
/// on a uniform length grid with at least `norm_grid` nodes and a step of at
/// most a quarter of phi's shortest piece. Constant functions are returned
/// unchanged.
StepFunction normalize_to_unit_norm(const StepFunction& phi, const Modulus& xi, std::size_t norm_grid);

// Single trials, exposed so that a witness seed can be re-run in isolation.
Trial rearrangement_trial(std::uint64_t seed, const CampaignSettings& settings);
Trial thcor_trial(std::uint64_t seed, const CampaignSettings& settings);
Trial pr00_trial(std::uint64_t seed, const CampaignSettings& settings);
Trial cutout_trial(std::uint64_t seed, const GeometryContext& ctx, const CampaignSettings& settings);
Trial inf_bound_trial(std::uint64_t seed, const GeometryContext& ctx, const CampaignSettings& settings);
Trial lem55_trial(std::uint64_t seed, const GeometryContext& ctx);

/// xi_{phi*} <= xi_phi on the shared length grid; margins are
/// (xi_phi - xi_phi*) / (xi_phi + 1e-3) with tolerance 1e-9, which is the
/// same as xi_phi* <= xi_phi (1 + 1e-9) + 1e-12.
VerificationReport verify_rearrangement(std::span<const std::uint64_t> seeds, const CampaignSettings& settings = {});

/// xi_{phi*} <= conv{xi_phi}, margins relative to max xi_phi, tolerance 1e-7.
VerificationReport verify_thcor(std::span<const std::uint64_t> seeds, const CampaignSettings& settings = {});

/// For monotone psi: t^2 xi_psi^2 and t -> t int psi^2 - (int psi)^2 over
/// windows growing from a random anchor (both directions) are convex.
/// Margins are second differences over the largest value, tolerance 1e-9.
VerificationReport verify_pr00(std::span<const std::uint64_t> seeds, const CampaignSettings& settings = {});

/// Cutting the extreme-value pieces out of a unit-norm function keeps the
/// norm <= 1; also replays the truncate-then-cutout reduction for one middle
/// segment of the rearrangement. Tolerance 1e-9.
VerificationReport verify_cutout(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                 const CampaignSettings& settings = {});

/// min phi <= U(<phi>, <phi^2>, |I|) for unit-norm phi, and the mirrored
/// statement for -phi. Tolerance 1e-9.
VerificationReport verify_inf_bound(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                    const CampaignSettings& settings = {});

/// Dilating a point with U >= a about (a, a^2) by t/s lands under the
/// parabola of scale s. Tolerance 1e-10.
VerificationReport verify_lem55(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                const CampaignSettings& settings = {});

struct LinearStaircaseReport {
    VerificationReport report;
    /// max |var(J) - slope^2 |J|^2 / 12| over the maximizing windows examined
    double max_variance_gap;
    /// slope^2 * piece_width^2
    double gap_bound;
    /// xi(t) >= slope * t on the grid; with bound 1 the check can only pass
    /// when this holds up to discretization
    bool dominates;
};

/// Norm check of the fine staircase of s -> slope * s against xi with the
/// given bound.
LinearStaircaseReport verify_th0_linear(double slope, const Modulus& xi, double bound = 1.0,
                                        std::size_t pieces = 512, std::size_t grid_size = 128);

}  // namespace oscil

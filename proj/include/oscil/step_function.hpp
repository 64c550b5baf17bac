#pragma once

#include "oscil/interval.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace oscil {

/// Piecewise-constant function on a finite interval.
///
/// Piece k occupies [cut(k), cut(k+1)) where cut(0) = domain.left(),
/// cut(n) = domain.right() and the interior cuts are the breakpoints.
/// The representation need not be minimal: adjacent pieces may carry equal
/// values until normalized() merges them.
class StepFunction {
public:
    StepFunction(Interval domain, std::vector<double> breakpoints, std::vector<double> values);

    static StepFunction constant(Interval domain, double value);

    const Interval& domain() const noexcept { return domain_; }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }

    std::size_t piece_count() const noexcept { return values_.size(); }
    double piece_left(std::size_t k) const noexcept {
        return k == 0 ? domain_.left() : breakpoints_[k - 1];
    }
    double piece_right(std::size_t k) const noexcept {
        return k + 1 == values_.size() ? domain_.right() : breakpoints_[k];
    }
    double piece_length(std::size_t k) const noexcept { return piece_right(k) - piece_left(k); }
    double value(std::size_t k) const noexcept { return values_[k]; }

    /// Index of the piece containing x (right-continuous; the right end of
    /// the domain belongs to the last piece).
    std::size_t piece_index(double x) const;
    double operator()(double x) const { return values_[piece_index(x)]; }

    double min_value() const;
    double max_value() const;
    double integral() const;

    /// Same function with equal-valued neighbours merged.
    StepFunction normalized() const;

    friend bool operator==(const StepFunction&, const StepFunction&) = default;

private:
    Interval domain_;
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

struct IntervalStats {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double length = 0.0;
};

/// Exact averages of phi and phi^2 over J; J must lie inside phi's domain.
IntervalStats stats(const StepFunction& phi, const Interval& J);

/// Piece indices in the order they appear in the decreasing rearrangement:
/// sorted by value descending, ties kept in original order.
std::vector<std::size_t> rearrangement_order(const StepFunction& phi);

StepFunction decreasing_rearrangement(const StepFunction& phi);

/// |{s : phi(s) > level}|.
double distribution_measure(const StepFunction& phi, double level);

/// Values clamped into [lo, hi].
StepFunction truncate(const StepFunction& phi, double lo, double hi);

StepFunction affine_image(const StepFunction& phi, double scale, double shift);

struct PieceTransport {
    std::size_t source_piece;
    double target_left;
};

struct CutoutResult {
    StepFunction function;
    double removed_measure;
    std::vector<PieceTransport> transport;
};

/// Deletes the piece-aligned set E (a union of intervals whose endpoints are
/// piece boundaries of phi) and glues the surviving pieces onto [0, d].
CutoutResult cutout(const StepFunction& phi, std::span<const Interval> removed);

/// Same, with E given as a set of piece indices.
CutoutResult cutout_pieces(const StepFunction& phi, std::span<const std::size_t> removed_pieces);

struct ValueRange {
    double lo;
    double hi;
};

/// Deterministic pseudo-random step function: the piece count is uniform in
/// [1, pieces_max], breakpoints are uniform draws sorted, values uniform in range.
StepFunction random_step_function(std::uint64_t seed, std::size_t pieces_max, ValueRange range,
                                  Interval domain);

/// Piecewise-constant approximation of s -> slope * s on the domain, with
/// the value of each piece taken at its midpoint.
StepFunction linear_staircase(Interval domain, std::size_t pieces, double slope);

}  // namespace oscil

#pragma once

#include "oscil/errors.hpp"

#include <cmath>
#include <string>

namespace oscil {

/// Closed interval [left, right] with positive length.
class Interval {
public:
    Interval(double left, double right) : left_(left), right_(right) {
        if (!std::isfinite(left) || !std::isfinite(right) || !(left < right)) {
            throw ArgumentError("Interval: need finite left < right, got [" +
                                std::to_string(left) + ", " + std::to_string(right) + "]");
        }
    }

    double left() const noexcept { return left_; }
    double right() const noexcept { return right_; }
    double length() const noexcept { return right_ - left_; }
    double midpoint() const noexcept { return 0.5 * (left_ + right_); }

    bool contains(double x) const noexcept { return left_ <= x && x <= right_; }
    bool contains(const Interval& other) const noexcept {
        return left_ <= other.left_ && other.right_ <= right_;
    }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double left_;
    double right_;
};

}  // namespace oscil

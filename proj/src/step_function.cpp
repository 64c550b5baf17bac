#include "oscil/step_function.hpp"

#include "oscil/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace oscil {

StepFunction::StepFunction(Interval domain, std::vector<double> breakpoints,
                           std::vector<double> values)
    : domain_(domain), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1) {
        throw ArgumentError("StepFunction: expected " + std::to_string(breakpoints_.size() + 1) +
                            " values, got " + std::to_string(values_.size()));
    }
    double prev = domain_.left();
    for (double b : breakpoints_) {
        if (!std::isfinite(b) || !(b > prev)) {
            throw ArgumentError("StepFunction: breakpoints must be strictly increasing inside the domain");
        }
        prev = b;
    }
    if (!(domain_.right() > prev)) {
        throw ArgumentError("StepFunction: breakpoints must be strictly increasing inside the domain");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ArgumentError("StepFunction: values must be finite");
    }
}

StepFunction StepFunction::constant(Interval domain, double value) {
    return StepFunction(domain, {}, {value});
}

std::size_t StepFunction::piece_index(double x) const {
    if (!domain_.contains(x)) {
        throw DomainError("StepFunction: point " + std::to_string(x) + " outside the domain");
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

double StepFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double StepFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double StepFunction::integral() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) sum += piece_length(k) * values_[k];
    return sum;
}

StepFunction StepFunction::normalized() const {
    std::vector<double> cuts;
    std::vector<double> vals{values_.front()};
    for (std::size_t k = 1; k < values_.size(); ++k) {
        if (values_[k] != vals.back()) {
            cuts.push_back(breakpoints_[k - 1]);
            vals.push_back(values_[k]);
        }
    }
    return StepFunction(domain_, std::move(cuts), std::move(vals));
}

IntervalStats stats(const StepFunction& phi, const Interval& J) {
    if (!phi.domain().contains(J)) {
        throw DomainError("stats: window lies outside the function's domain");
    }
    const std::size_t first = phi.piece_index(J.left());
    const double len = J.length();

    // two passes: the centred sum keeps the variance free of cancellation
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t last = first;
    double lo_value = phi.value(first);
    double hi_value = lo_value;
    for (std::size_t k = first; k < phi.piece_count(); ++k) {
        const double lo = std::max(phi.piece_left(k), J.left());
        const double hi = std::min(phi.piece_right(k), J.right());
        if (hi <= lo) {
            if (phi.piece_left(k) >= J.right()) break;
            continue;
        }
        sum += (hi - lo) * phi.value(k);
        sum_sq += (hi - lo) * phi.value(k) * phi.value(k);
        lo_value = std::min(lo_value, phi.value(k));
        hi_value = std::max(hi_value, phi.value(k));
        last = k;
    }
    IntervalStats out;
    out.length = len;
    out.mean = sum / len;
    out.second_moment = sum_sq / len;
    if (lo_value == hi_value) {
        // a single level: report it exactly
        out.mean = lo_value;
        out.second_moment = lo_value * lo_value;
        return out;
    }
    double centred = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        const double lo = std::max(phi.piece_left(k), J.left());
        const double hi = std::min(phi.piece_right(k), J.right());
        if (hi <= lo) continue;
        const double d = phi.value(k) - out.mean;
        centred += (hi - lo) * d * d;
    }
    out.variance = std::max(0.0, centred / len);
    return out;
}

std::vector<std::size_t> rearrangement_order(const StepFunction& phi) {
    std::vector<std::size_t> order(phi.piece_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return phi.value(a) > phi.value(b); });
    return order;
}

StepFunction decreasing_rearrangement(const StepFunction& phi) {
    const auto order = rearrangement_order(phi);
    std::vector<double> cuts;
    std::vector<double> vals;
    double pos = phi.domain().left();
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t k = order[i];
        if (!vals.empty() && vals.back() == phi.value(k)) {
            pos += phi.piece_length(k);
            continue;
        }
        if (!vals.empty()) cuts.push_back(pos);
        vals.push_back(phi.value(k));
        pos += phi.piece_length(k);
    }
    // accumulated lengths may drift past the right end by an ulp
    while (!cuts.empty() && cuts.back() >= phi.domain().right()) {
        cuts.pop_back();
        vals.pop_back();
    }
    return StepFunction(phi.domain(), std::move(cuts), std::move(vals));
}

double distribution_measure(const StepFunction& phi, double level) {
    double measure = 0.0;
    for (std::size_t k = 0; k < phi.piece_count(); ++k) {
        if (phi.value(k) > level) measure += phi.piece_length(k);
    }
    return measure;
}

StepFunction truncate(const StepFunction& phi, double lo, double hi) {
    if (lo > hi) throw ArgumentError("truncate: lower level exceeds upper level");
    std::vector<double> vals(phi.values().begin(), phi.values().end());
    for (double& v : vals) v = std::clamp(v, lo, hi);
    return StepFunction(phi.domain(),
                        std::vector<double>(phi.breakpoints().begin(), phi.breakpoints().end()),
                        std::move(vals));
}

StepFunction affine_image(const StepFunction& phi, double scale, double shift) {
    std::vector<double> vals(phi.values().begin(), phi.values().end());
    for (double& v : vals) v = scale * v + shift;
    return StepFunction(phi.domain(),
                        std::vector<double>(phi.breakpoints().begin(), phi.breakpoints().end()),
                        std::move(vals));
}

CutoutResult cutout_pieces(const StepFunction& phi, std::span<const std::size_t> removed_pieces) {
    std::vector<bool> removed(phi.piece_count(), false);
    for (std::size_t k : removed_pieces) {
        if (k >= phi.piece_count()) throw ArgumentError("cutout: piece index out of range");
        removed[k] = true;
    }
    std::vector<double> cuts;
    std::vector<double> vals;
    std::vector<PieceTransport> transport;
    double pos = 0.0;
    double removed_measure = 0.0;
    for (std::size_t k = 0; k < phi.piece_count(); ++k) {
        if (removed[k]) {
            removed_measure += phi.piece_length(k);
            continue;
        }
        transport.push_back({k, pos});
        if (!vals.empty()) cuts.push_back(pos);
        vals.push_back(phi.value(k));
        pos += phi.piece_length(k);
    }
    if (vals.empty()) throw DomainError("cutout: the removed set covers the whole domain");
    return CutoutResult{StepFunction(Interval(0.0, pos), std::move(cuts), std::move(vals)),
                        removed_measure, std::move(transport)};
}

CutoutResult cutout(const StepFunction& phi, std::span<const Interval> removed) {
    const Interval& dom = phi.domain();
    const double snap = 1e-12 * dom.length();
    auto snap_to_boundary = [&](double x) -> std::size_t {
        // boundary index b in [0, n]: 0 = left end, n = right end
        for (std::size_t b = 0; b <= phi.piece_count(); ++b) {
            const double cut = b == phi.piece_count() ? dom.right() : phi.piece_left(b);
            if (std::abs(cut - x) <= snap) return b;
        }
        throw ArgumentError("cutout: removed set is not aligned with the pieces (endpoint " +
                            std::to_string(x) + ")");
    };
    std::vector<bool> hit(phi.piece_count(), false);
    for (const Interval& e : removed) {
        if (e.left() < dom.left() - snap || e.right() > dom.right() + snap) {
            throw ArgumentError("cutout: removed interval outside the domain");
        }
        const std::size_t from = snap_to_boundary(e.left());
        const std::size_t to = snap_to_boundary(e.right());
        for (std::size_t k = from; k < to; ++k) hit[k] = true;
    }
    std::vector<std::size_t> pieces;
    for (std::size_t k = 0; k < hit.size(); ++k) {
        if (hit[k]) pieces.push_back(k);
    }
    return cutout_pieces(phi, pieces);
}

StepFunction random_step_function(std::uint64_t seed, std::size_t pieces_max, ValueRange range,
                                  Interval domain) {
    if (pieces_max < 1) throw ArgumentError("random_step_function: pieces_max must be >= 1");
    if (!(range.lo < range.hi)) throw ArgumentError("random_step_function: empty value range");
    Rng rng(seed);
    const auto pieces = static_cast<std::size_t>(rng.integer(1, pieces_max));
    std::vector<double> cuts;
    for (std::size_t i = 0; i + 1 < pieces; ++i) {
        const double b = rng.uniform(domain.left(), domain.right());
        if (b > domain.left()) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> vals(cuts.size() + 1);
    for (double& v : vals) v = rng.uniform(range.lo, range.hi);
    return StepFunction(domain, std::move(cuts), std::move(vals));
}

StepFunction linear_staircase(Interval domain, std::size_t pieces, double slope) {
    if (pieces < 1) throw ArgumentError("linear_staircase: need at least one piece");
    const double h = domain.length() / static_cast<double>(pieces);
    std::vector<double> cuts;
    std::vector<double> vals;
    for (std::size_t k = 0; k < pieces; ++k) {
        if (k > 0) cuts.push_back(domain.left() + h * static_cast<double>(k));
        vals.push_back(slope * (domain.left() + h * (static_cast<double>(k) + 0.5)));
    }
    return StepFunction(domain, std::move(cuts), std::move(vals));
}

}  // namespace oscil

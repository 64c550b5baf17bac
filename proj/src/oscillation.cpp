#include "oscil/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <numeric>

namespace oscil {

namespace {

struct Block {
    double length = 0.0;
    double mean = 0.0;
    double centred_ss = 0.0;  // integral of (phi - mean)^2
};

// pieces [first, last)
Block block_stats(const StepFunction& phi, std::size_t first, std::size_t last) {
    Block b;
    if (first >= last) return b;
    double sum = 0.0;
    for (std::size_t k = first; k < last; ++k) sum += phi.piece_length(k) * phi.value(k);
    b.length = phi.piece_right(last - 1) - phi.piece_left(first);
    b.mean = sum / b.length;
    for (std::size_t k = first; k < last; ++k) {
        const double d = phi.value(k) - b.mean;
        b.centred_ss += phi.piece_length(k) * d * d;
    }
    return b;
}

// Chan's update: append a piece of the given length and value.
void merge_piece(Block& b, double len, double value) {
    const double total = b.length + len;
    const double delta = value - b.mean;
    b.mean += delta * len / total;
    b.centred_ss += delta * delta * b.length * len / total;
    b.length = total;
}

double clamp_length(const StepFunction& phi, double length, const char* who) {
    const double full = phi.domain().length();
    if (!(length > 0.0) || length > full * (1.0 + 1e-12)) {
        throw ArgumentError(fmt::format("{}: window length {} outside (0, {}]", who, length, full));
    }
    return std::min(length, full);
}

// One-sided family: one end of the window pinned at `anchor`, the window
// covering a block of whole pieces and a partial piece of value v.
struct AnchoredFamily {
    double anchor;
    bool forward;       // window is [anchor, anchor + w] when true, [anchor - w, anchor] otherwise
    double lo;          // w range (lo, hi]
    double hi;
    double block_len;   // L0
    double block_ss;    // M
    double gap_sq;      // D = (block mean - v)^2
    double peak;        // unconstrained maximizer in w

    double variance(double w) const {
        const double u = w - block_len;
        return (block_ss + block_len * u * gap_sq / w) / w;
    }
};

std::vector<AnchoredFamily> anchored_families(const StepFunction& phi) {
    std::vector<AnchoredFamily> out;
    const std::size_t n = phi.piece_count();
    auto push = [&](double anchor, bool forward, const Block& blk, double len, double v) {
        const double gap = blk.mean - v;
        const double d = gap * gap;
        const double denom = blk.centred_ss + blk.length * d;
        if (denom <= 0.0) return;
        AnchoredFamily f{anchor, forward, blk.length, blk.length + len, blk.length, blk.centred_ss, d,
                         2.0 * blk.length * blk.length * d / denom};
        out.push_back(f);
    };
    for (std::size_t k = 0; k < n; ++k) {
        Block blk;
        for (std::size_t j = k; j < n; ++j) {
            if (j > k) push(phi.piece_left(k), true, blk, phi.piece_length(j), phi.value(j));
            if (blk.length == 0.0) {
                blk = Block{phi.piece_length(j), phi.value(j), 0.0};
            } else {
                merge_piece(blk, phi.piece_length(j), phi.value(j));
            }
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        Block blk;
        for (std::size_t i = k + 1; i-- > 0;) {
            if (i < k) push(phi.piece_right(k), false, blk, phi.piece_length(i), phi.value(i));
            if (blk.length == 0.0) {
                blk = Block{phi.piece_length(i), phi.value(i), 0.0};
            } else {
                merge_piece(blk, phi.piece_length(i), phi.value(i));
            }
        }
    }
    return out;
}

// Golden-section minimization of f on [lo, hi]; returns the best abscissa seen.
double golden_minimize(const std::function<double(double)>& f, double lo, double hi, int iterations) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iterations && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Evaluates `objective` (to be minimized) on the nodes, then refines the
// most adverse local minima between neighbouring nodes. Calls `visit` for
// every length examined.
void scan_lengths(const LengthGrid& grid, const std::function<double(double)>& objective,
                  const std::function<void(double)>& visit) {
    const auto& nodes = grid.nodes;
    std::vector<double> values(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        values[k] = objective(nodes[k]);
        visit(nodes[k]);
    }
    if (!grid.refine || nodes.size() < 2) return;

    std::vector<std::size_t> minima;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const bool left_ok = k == 0 || values[k] <= values[k - 1];
        const bool right_ok = k + 1 == nodes.size() || values[k] <= values[k + 1];
        if (left_ok && right_ok) minima.push_back(k);
    }
    std::stable_sort(minima.begin(), minima.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    constexpr std::size_t kMaxRefinements = 8;
    if (minima.size() > kMaxRefinements) minima.resize(kMaxRefinements);
    for (std::size_t k : minima) {
        const double lo = nodes[k == 0 ? 0 : k - 1];
        const double hi = nodes[std::min(k + 1, nodes.size() - 1)];
        if (!(hi > lo)) continue;
        visit(golden_minimize(objective, lo, hi, 80));
    }
}

std::vector<double> checked_nodes(const LengthGrid& grid, double domain_length) {
    std::vector<double> out;
    for (double x : grid.nodes) {
        if (x > 0.0 && x <= domain_length * (1.0 + 1e-12)) out.push_back(std::min(x, domain_length));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw ArgumentError("length grid has no node inside (0, |I|]");
    return out;
}

}  // namespace

Window max_variance_at_length(const StepFunction& phi, double length) {
    const double t = clamp_length(phi, length, "max_variance_at_length");
    const double a = phi.domain().left();
    const double b = phi.domain().right();
    const double s_max = b - t;
    if (!(s_max > a)) return Window{phi.domain(), stats(phi, phi.domain()).variance};

    std::vector<double> events{a, s_max};
    for (double cut : phi.breakpoints()) {
        if (cut > a && cut < s_max) events.push_back(cut);
        if (cut - t > a && cut - t < s_max) events.push_back(cut - t);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    Window best{Interval(a, a + t), -1.0};
    for (std::size_t e = 0; e + 1 < events.size(); ++e) {
        const double s0 = events[e];
        const double s1 = events[e + 1];
        const double mid = 0.5 * (s0 + s1);
        const std::size_t i = phi.piece_index(mid);
        const std::size_t j = phi.piece_index(std::min(mid + t, b));
        if (i == j) {
            if (best.variance < 0.0) best = Window{Interval(s0, std::min(s0 + t, b)), 0.0};
            continue;
        }
        const Block mid_block = block_stats(phi, i + 1, j);
        const double block_len = phi.piece_left(j) - phi.piece_right(i);
        const double ref = block_len > 0.0 ? mid_block.mean : phi.value(i);
        const double vi = phi.value(i) - ref;
        const double vj = phi.value(j) - ref;
        const double mu = block_len > 0.0 ? mid_block.mean - ref : 0.0;
        const double rest = t - block_len;  // p + q
        const double right_i = phi.piece_right(i);
        const double p_lo = std::clamp(right_i - s1, 0.0, rest);
        const double p_hi = std::clamp(right_i - s0, 0.0, rest);

        double p = p_lo;
        if (vi != vj) {
            p = (t * 0.5 * (vi + vj) - block_len * mu - rest * vj) / (vi - vj);
            p = std::clamp(p, p_lo, p_hi);
        }
        const double q = std::max(0.0, rest - p);
        const double m = (block_len * mu + p * vi + q * vj) / t;
        const double ss = mid_block.centred_ss + block_len * (mu - m) * (mu - m) + p * (vi - m) * (vi - m) +
                          q * (vj - m) * (vj - m);
        const double var = ss / t;
        if (var > best.variance) {
            const double left = std::clamp(right_i - p, a, s_max);
            best = Window{Interval(left, std::min(left + t, b)), var};
        }
    }
    best.variance = std::max(best.variance, 0.0);
    return best;
}

Modulus OscillationProfile::as_modulus() const {
    std::vector<double> grid{0.0};
    std::vector<double> values{0.0};
    grid.insert(grid.end(), lengths.begin(), lengths.end());
    values.insert(values.end(), xi_values.begin(), xi_values.end());
    return Modulus::sampled(std::move(grid), std::move(values));
}

OscillationProfile oscillation_profile(const StepFunction& phi, std::span<const double> lengths) {
    if (lengths.empty()) throw ArgumentError("oscillation_profile: empty length grid");
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        clamp_length(phi, lengths[k], "oscillation_profile");
        if (k > 0 && !(lengths[k] > lengths[k - 1])) {
            throw ArgumentError("oscillation_profile: lengths must be strictly increasing");
        }
    }
    const auto families = anchored_families(phi);

    OscillationProfile out;
    double best_var = -1.0;
    std::optional<Interval> best_window;
    for (double raw : lengths) {
        const double t = std::min(raw, phi.domain().length());
        Window w = max_variance_at_length(phi, t);
        for (const AnchoredFamily& f : families) {
            if (!(f.lo < t)) continue;
            const double len = std::clamp(f.peak, f.lo, std::min(f.hi, t));
            const double var = f.variance(len);
            if (var > w.variance) {
                const Interval J = f.forward
                                       ? Interval(f.anchor, std::min(f.anchor + len, phi.domain().right()))
                                       : Interval(std::max(f.anchor - len, phi.domain().left()), f.anchor);
                w = Window{J, var};
            }
        }
        // running maximum; ties keep the earlier witness
        if (w.variance > best_var) {
            best_var = w.variance;
            best_window = w.interval;
        }
        out.lengths.push_back(raw);
        out.xi_values.push_back(std::sqrt(best_var));
        out.witnesses.push_back(*best_window);
    }
    return out;
}

LengthGrid LengthGrid::uniform(double domain_length, std::size_t count) {
    if (count == 0) throw ArgumentError("LengthGrid: need at least one node");
    LengthGrid g;
    for (std::size_t k = 1; k <= count; ++k) {
        g.nodes.push_back(domain_length * static_cast<double>(k) / static_cast<double>(count));
    }
    g.nodes.back() = domain_length;
    return g;
}

LengthGrid default_length_grid(const Modulus& xi, double domain_length, std::size_t count) {
    if (const auto* s = std::get_if<SampledModulus>(&xi.kind())) {
        LengthGrid g;
        g.refine = false;
        for (double x : s->samples.grid) {
            if (x > 0.0 && x <= domain_length * (1.0 + 1e-12)) g.nodes.push_back(x);
        }
        return g;
    }
    return LengthGrid::uniform(domain_length, count);
}

VerificationReport norm_bound_check(const StepFunction& phi, const Modulus& xi, double bound,
                                    const std::optional<LengthGrid>& lengths, double tolerance) {
    const double full = phi.domain().length();
    if (xi.horizon() < full * (1.0 - 1e-12)) {
        throw ArgumentError(fmt::format("norm_bound_check: modulus horizon {} shorter than |I| = {}",
                                        xi.horizon(), full));
    }
    if (!(bound >= 0.0)) throw ArgumentError("norm_bound_check: bound must be non-negative");
    LengthGrid grid = lengths ? *lengths : default_length_grid(xi, full);
    grid.nodes = checked_nodes(grid, full);

    VerificationReport report;
    report.name = "norm_bound";
    report.tolerance = tolerance;
    auto margin_of = [&](const Window& w, double len) {
        const double x = xi.eval(std::min(len, xi.horizon()));
        return bound * bound * x * x - w.variance;
    };
    auto objective = [&](double len) { return margin_of(max_variance_at_length(phi, len), len); };
    scan_lengths(grid, objective, [&](double len) {
        const Window w = max_variance_at_length(phi, len);
        const double margin = margin_of(w, len);
        report.record(margin, nlohmann::json{{"length", len},
                                             {"window", {w.interval.left(), w.interval.right()}},
                                             {"variance", w.variance},
                                             {"bound", bound}});
    });
    return report;
}

NormEstimate xi_norm(const StepFunction& phi, const Modulus& xi, const std::optional<LengthGrid>& lengths) {
    const double full = phi.domain().length();
    if (xi.horizon() < full * (1.0 - 1e-12)) {
        throw ArgumentError("xi_norm: modulus horizon shorter than the domain");
    }
    LengthGrid grid = lengths ? *lengths : default_length_grid(xi, full);
    grid.nodes = checked_nodes(grid, full);

    NormEstimate best{0.0, Window{phi.domain(), 0.0}};
    auto ratio = [&](const Window& w, double len) {
        const double x = xi.eval(std::min(len, xi.horizon()));
        return std::sqrt(w.variance) / x;
    };
    auto objective = [&](double len) { return -ratio(max_variance_at_length(phi, len), len); };
    scan_lengths(grid, objective, [&](double len) {
        const Window w = max_variance_at_length(phi, len);
        const double r = ratio(w, len);
        if (r > best.ratio) best = NormEstimate{r, w};
    });
    return best;
}

nlohmann::json to_json(const VerificationReport& report) {
    return nlohmann::json{{"name", report.name},
                          {"trials", report.trials},
                          {"failures", report.failures},
                          {"skipped", report.skipped},
                          {"worst_margin", report.worst_margin},
                          {"tolerance", report.tolerance},
                          {"witness", report.witness}};
}

}  // namespace oscil

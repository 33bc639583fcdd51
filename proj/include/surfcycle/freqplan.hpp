#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfcycle/fabric.hpp"

// Operating-frequency ladder, the closed-form residual-error model, and the
// static interaction-zone checker. All frequencies are ordinary (not angular)
// and carried in GHz; the coupling strength xi is angular (rad/s).

namespace surfcycle {

enum class Arrangement { standard, inverted };

struct DegenerateLadder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnassignedQubit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct FrequencyLadder {
    double f1 = 0, f1_int = 0;
    double f2 = 0, f2_park = 0, f2_int = 0;
    double f3 = 0, f3_park = 0;
    double delta_f = 0;
    double alpha = 0;  // negative
    Arrangement arrangement = Arrangement::standard;

    double abs_alpha() const { return std::abs(alpha); }
    std::vector<double> levels() const { return {f1, f1_int, f2, f2_park, f2_int, f3, f3_park}; }
};

// Ladder identities: one uniform detuning scale delta_f separates each
// operating frequency from its detuned partner, and the two interaction
// levels sit one |alpha| above the partner group.
inline FrequencyLadder build_ladder(double f2, double delta_f, double alpha,
                                    Arrangement arrangement = Arrangement::standard,
                                    double guard_ghz = 0.050) {
    if (delta_f <= 0) throw DegenerateLadder("delta_f must be positive");
    if (alpha >= 0) throw DegenerateLadder("alpha must be negative");
    FrequencyLadder l;
    l.f2 = f2;
    l.delta_f = delta_f;
    l.alpha = alpha;
    l.arrangement = arrangement;
    l.f1_int = f2 - alpha;
    l.f1 = l.f1_int + delta_f;
    l.f2_park = f2 - delta_f;
    l.f2_int = l.f2_park - delta_f;
    l.f3 = l.f2_int + alpha;
    l.f3_park = l.f3 - delta_f;

    const std::vector<double> lv = l.levels();
    for (std::size_t i = 0; i + 1 < lv.size(); ++i)
        if (lv[i] <= lv[i + 1])
            throw DegenerateLadder("ladder is not strictly decreasing");

    // No accidental zone coincidence: every non-intended pair of ladder
    // levels must clear the exchange and avoided-crossing zones by the guard
    // band. The two CZ pairs (f1_int,f2) and (f2_int,f3) sit on a zone by
    // construction and are excluded.
    const double a = l.abs_alpha();
    if (a < guard_ghz)
        throw DegenerateLadder("avoided crossings collapse onto the exchange zone");
    auto intended = [&](std::size_t i, std::size_t j) {
        auto is = [&](std::size_t k, double v) { return lv[k] == v; };
        return (is(i, l.f1_int) && is(j, l.f2)) || (is(i, l.f2) && is(j, l.f1_int)) ||
               (is(i, l.f2_int) && is(j, l.f3)) || (is(i, l.f3) && is(j, l.f2_int));
    };
    for (std::size_t i = 0; i < lv.size(); ++i)
        for (std::size_t j = i + 1; j < lv.size(); ++j) {
            if (intended(i, j)) continue;
            const double gap = std::abs(lv[i] - lv[j]);
            for (double zone : {0.0, a})
                if (std::abs(gap - zone) < guard_ghz)
                    throw DegenerateLadder("ladder gap " + std::to_string(gap) +
                                           " GHz falls on a zone");
        }
    return l;
}

struct ErrorModelParams {
    double xi_rad_per_s = 0;  // |11> <-> |02> coupling strength, angular
    double tau_1q_ns = 20.0;
    double tau_2q_ns = 40.0;
};

inline double xi_from_tau_2q(double tau_2q_ns) {
    return 2.0 * std::numbers::pi / (tau_2q_ns * 1e-9);
}

// Residual single-qubit gate error from parked spectators:
// epsilon = (xi^2 tau_1q / (4 pi dF))^2.
inline double residual_error(double xi_rad_per_s, double delta_f_ghz, double tau_1q_ns) {
    const double df_hz = delta_f_ghz * 1e9;
    const double tau_s = tau_1q_ns * 1e-9;
    const double x = xi_rad_per_s * xi_rad_per_s * tau_s / (4.0 * std::numbers::pi * df_hz);
    return x * x;
}

// Exact algebraic inverse of residual_error in delta_f.
inline double required_detuning(double epsilon_target, double xi_rad_per_s, double tau_1q_ns) {
    if (epsilon_target <= 0 || epsilon_target >= 1)
        throw std::invalid_argument("epsilon target must lie in (0,1)");
    const double tau_s = tau_1q_ns * 1e-9;
    const double df_hz =
        xi_rad_per_s * xi_rad_per_s * tau_s / (4.0 * std::numbers::pi * std::sqrt(epsilon_target));
    return df_hz / 1e9;
}

enum class ZoneKind { exchange_10_01, avoided_11_02, avoided_11_20 };
enum class ZoneStatus { intended, violation, safe };

inline std::string zone_kind_name(ZoneKind z) {
    switch (z) {
        case ZoneKind::exchange_10_01: return "exchange_10_01";
        case ZoneKind::avoided_11_02: return "avoided_11_02";
        case ZoneKind::avoided_11_20: return "avoided_11_20";
    }
    return "?";
}

inline std::string zone_status_name(ZoneStatus s) {
    switch (s) {
        case ZoneStatus::intended: return "intended";
        case ZoneStatus::violation: return "violation";
        case ZoneStatus::safe: return "safe";
    }
    return "?";
}

struct InteractionZoneReport {
    Coupling pair;           // (first, second) as evaluated; detuning = f(first)-f(second)
    std::string context;     // slot or transition id
    ZoneKind zone_kind = ZoneKind::exchange_10_01;
    ZoneStatus status = ZoneStatus::safe;
    double margin_ghz = 0;   // distance to the nearest zone (0 for intended)
};

using SlotFrequencies = std::map<GridCoord, double>;
using PairSet = std::set<Coupling>;

namespace detail {

struct ZoneEval {
    ZoneKind kind;
    double distance;
};

// Nearest zone for a detuning delta = f_a - f_b.
inline ZoneEval nearest_zone(double delta, double abs_alpha) {
    ZoneEval best{ZoneKind::exchange_10_01, std::abs(delta)};
    const double d02 = std::abs(delta + abs_alpha);  // delta = -|alpha|
    const double d20 = std::abs(delta - abs_alpha);  // delta = +|alpha|
    if (d02 < best.distance) best = {ZoneKind::avoided_11_02, d02};
    if (d20 < best.distance) best = {ZoneKind::avoided_11_20, d20};
    return best;
}

}  // namespace detail

// Classify every coupling of the fabric against the second-order interaction
// zones {0, +|alpha|, -|alpha|} for one time slot. Pairs listed in
// intended_cz are expected to sit exactly on the +|alpha| avoided crossing
// (higher-frequency qubit first).
inline std::vector<InteractionZoneReport> check_static(const Fabric& fabric,
                                                       const FrequencyLadder& ladder,
                                                       const SlotFrequencies& freqs,
                                                       const PairSet& intended_cz,
                                                       double guard_ghz = 0.050,
                                                       const std::string& context = "slot") {
    std::vector<InteractionZoneReport> out;
    auto freq_of = [&](GridCoord q) {
        auto it = freqs.find(q);
        if (it == freqs.end())
            throw UnassignedQubit("no frequency for (" + std::to_string(q.row) + "," +
                                  std::to_string(q.col) + ")");
        return it->second;
    };
    const double a = ladder.abs_alpha();
    for (const auto& cpl : fabric.couplings()) {
        const auto [qa, qb] = cpl;
        const bool a_first = freq_of(qa) >= freq_of(qb);
        const GridCoord hi = a_first ? qa : qb;
        const GridCoord lo = a_first ? qb : qa;
        const double delta = freq_of(hi) - freq_of(lo);
        InteractionZoneReport r;
        r.pair = {hi, lo};
        r.context = context;
        const auto zone = detail::nearest_zone(delta, a);
        r.zone_kind = zone.kind;
        r.margin_ghz = zone.distance;
        const bool is_intended = intended_cz.count(cpl) != 0;
        if (is_intended) {
            r.status = ZoneStatus::intended;  // expected at delta = +|alpha|
        } else if (zone.distance < guard_ghz) {
            r.status = ZoneStatus::violation;
        } else {
            r.status = ZoneStatus::safe;
        }
        out.push_back(r);
    }
    return out;
}

// Flux-pulse transitions between two slot assignments. A moving qubit must
// not sweep through any zone of a coupled neighbor, with the neighbor
// evaluated at both its source and destination frequencies (conservative). A
// zone of the neighbor's destination frequency sitting exactly at the
// mover's destination endpoint is legal only for the pair whose CZ is
// intended in the destination slot. Zones at the source endpoint were vetted
// by the static check of the source slot, and a zone the neighbor has moved
// away from is not a hit.
inline std::vector<InteractionZoneReport> check_transition(
    const Fabric& fabric, const FrequencyLadder& ladder, const SlotFrequencies& from,
    const SlotFrequencies& to, const PairSet& intended_endpoints,
    [[maybe_unused]] double guard_ghz = 0.050, const std::string& context = "transition") {
    std::vector<InteractionZoneReport> out;
    auto freq_of = [&](const SlotFrequencies& m, GridCoord q) {
        auto it = m.find(q);
        if (it == m.end())
            throw UnassignedQubit("no frequency for (" + std::to_string(q.row) + "," +
                                  std::to_string(q.col) + ")");
        return it->second;
    };
    const double a = ladder.abs_alpha();
    const double eps = 1e-9;
    for (const auto& cpl : fabric.couplings()) {
        for (const auto& [mover, neighbor] :
             {std::pair{cpl.first, cpl.second}, std::pair{cpl.second, cpl.first}}) {
            const double f_from = freq_of(from, mover);
            const double f_to = freq_of(to, mover);
            if (std::abs(f_from - f_to) < eps) continue;
            const double lo = std::min(f_from, f_to);
            const double hi = std::max(f_from, f_to);
            InteractionZoneReport r;
            r.pair = {mover, neighbor};
            r.context = context;
            r.status = ZoneStatus::safe;
            r.margin_ghz = hi - lo;
            // Crossing check against both neighbor evaluations.
            for (double fn : {freq_of(from, neighbor), freq_of(to, neighbor)}) {
                for (double d : {0.0, a, -a}) {
                    const double z = fn + d;
                    if (z > lo + eps && z < hi - eps) {
                        r.status = ZoneStatus::violation;
                        r.zone_kind = detail::nearest_zone(z - fn, a).kind;
                        r.margin_ghz = 0;
                    }
                }
            }
            // Destination-endpoint check against the end-state configuration.
            if (r.status != ZoneStatus::violation) {
                const double fn_to = freq_of(to, neighbor);
                for (double d : {0.0, a, -a}) {
                    if (std::abs(fn_to + d - f_to) >= eps) continue;
                    r.zone_kind = detail::nearest_zone(f_to - fn_to, a).kind;
                    r.margin_ghz = 0;
                    r.status = intended_endpoints.count(cpl) ? ZoneStatus::intended
                                                             : ZoneStatus::violation;
                }
            }
            out.push_back(r);
        }
    }
    return out;
}

struct CheckSummary {
    int violations = 0;
    double min_margin_ghz = 0;
};

inline CheckSummary summarize(const std::vector<InteractionZoneReport>& reports) {
    CheckSummary s;
    bool seen = false;
    for (const auto& r : reports) {
        if (r.status == ZoneStatus::violation) ++s.violations;
        if (r.status == ZoneStatus::safe) {
            if (!seen || r.margin_ghz < s.min_margin_ghz) s.min_margin_ghz = r.margin_ghz;
            seen = true;
        }
    }
    return s;
}

}  // namespace surfcycle

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfcycle/fabric.hpp"
#include "surfcycle/freqplan.hpp"
#include "surfcycle/schedule.hpp"

// Per-role detuning sequences synthesized by on/off masking of three
// flux-pulse primitives, and logical-qubit operations expressed as mask or
// schedule edits.

namespace surfcycle {

enum class Primitive { P1, P2, P3 };  // f1->f1_int, f2->f2_int, f3->f3_park

inline std::string primitive_name(Primitive p) {
    switch (p) {
        case Primitive::P1: return "P1";
        case Primitive::P2: return "P2";
        case Primitive::P3: return "P3";
    }
    return "?";
}

struct LadderMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidTarget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OrderViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mask bits of one qubit over interaction slots 1..8. Bits exist only where
// the qubit's primitive is defined: all eight slots for data, the four
// own-type slots for an ancilla.
struct QubitMask {
    Primitive primitive = Primitive::P1;
    std::array<bool, 9> on{};       // 1-indexed by interaction slot
    std::array<bool, 9> defined{};

    std::set<int> on_slots() const {
        std::set<int> s;
        for (int k = 1; k <= 8; ++k)
            if (defined[k] && on[k]) s.insert(k);
        return s;
    }
};

struct MaskTable {
    std::map<GridCoord, QubitMask> entries;

    const QubitMask& at(GridCoord q) const {
        auto it = entries.find(q);
        if (it == entries.end())
            throw InvalidTarget("no mask entry for (" + std::to_string(q.row) + "," +
                                std::to_string(q.col) + ")");
        return it->second;
    }
};

// Derive the mask table from a pipelined schedule: P1 fires where an f1 data
// qubit interacts, P2 where an ancilla meets an f3 partner, and P3 parks an
// f3 data qubit in every slot it does not interact.
inline MaskTable synthesize_masks(const CycleSchedule& schedule, const Fabric& fabric) {
    if (schedule.mode != ScheduleMode::pipelined)
        throw UnsupportedSchedule("mask synthesis is defined for the pipelined cycle");
    std::map<GridCoord, std::set<int>> cz_slots;
    std::map<std::pair<GridCoord, int>, GridCoord> partner;
    for (const auto& g : schedule.gates) {
        if (g.kind != GateKind::CZ) continue;
        const int k = interaction_slot_number(schedule, g.slot);
        cz_slots[g.q0].insert(k);
        cz_slots[*g.q1].insert(k);
        partner[{g.q0, k}] = *g.q1;
        partner[{*g.q1, k}] = g.q0;
    }

    MaskTable table;
    for (const auto& [coord, role] : fabric.qubits()) {
        QubitMask m;
        const auto& slots = cz_slots[coord];
        switch (frequency_group(role)) {
            case FreqGroup::F1:
                m.primitive = Primitive::P1;
                for (int k = 1; k <= 8; ++k) {
                    m.defined[k] = true;
                    m.on[k] = slots.count(k) != 0;
                }
                break;
            case FreqGroup::F3:
                m.primitive = Primitive::P3;
                for (int k = 1; k <= 8; ++k) {
                    m.defined[k] = true;
                    m.on[k] = slots.count(k) == 0;
                }
                break;
            case FreqGroup::F2: {
                m.primitive = Primitive::P2;
                const bool x_kind = stab_kind_of(role) == StabKind::X;
                for (int k = x_kind ? 1 : 5; k <= (x_kind ? 4 : 8); ++k) {
                    m.defined[k] = true;
                    auto it = partner.find({coord, k});
                    m.on[k] = it != partner.end() &&
                              frequency_group(fabric.role_of(it->second)) == FreqGroup::F3;
                }
                break;
            }
        }
        table.entries[coord] = m;
    }
    return table;
}

// Frequency levels for every qubit over the 14 pipelined slots, plus the
// realized CZ pairs per interaction slot.
struct DetuningPlan {
    std::map<GridCoord, std::array<double, 14>> levels;
    std::array<PairSet, 14> intended;

    std::array<double, 8> interaction_levels(GridCoord q) const {
        std::array<double, 8> out{};
        const auto& l = levels.at(q);
        for (int k = 1; k <= 8; ++k) out[k - 1] = l[interaction_slot_index(k)];
        return out;
    }
};

enum class LadderVariant { standard, break_f1_f3, break_all };

inline int primitive_count(LadderVariant v) {
    switch (v) {
        case LadderVariant::standard: return 3;
        case LadderVariant::break_f1_f3: return 5;
        case LadderVariant::break_all: return 8;
    }
    return 0;
}

// Home-frequency offset a role carries when pulse-primitive degeneracies are
// broken. Offsets shift single-qubit levels only; interaction levels are
// shared so the avoided crossings stay exact. Splits point away from the
// pulse intervals: up for the f1 group, down for f2 and f3, so no sweep
// gains an interior zone.
inline double home_offset(QubitRole role, LadderVariant v, double split_ghz) {
    if (v == LadderVariant::standard) return 0.0;
    switch (role) {
        case QubitRole::D2: return split_ghz;
        case QubitRole::D4: return -split_ghz;
        case QubitRole::X2: return v == LadderVariant::break_all ? -split_ghz : 0.0;
        case QubitRole::Z1: return v == LadderVariant::break_all ? -2 * split_ghz : 0.0;
        case QubitRole::Z2: return v == LadderVariant::break_all ? -3 * split_ghz : 0.0;
        default: return 0.0;
    }
}

// Expand mask bits into per-slot frequencies. An ancilla holds f2 exactly in
// the slots hosting a realized CZ with an f1-group partner and parks at
// f2_park in any other own-type slot (absent arm or edited-off pair); it
// spends the opposite half-cycle at f2_park for measurement.
inline DetuningPlan masks_to_sequences(const MaskTable& table, const FrequencyLadder& ladder,
                                       const Fabric& fabric,
                                       LadderVariant variant = LadderVariant::standard,
                                       double split_ghz = 0.02) {
    if (ladder.arrangement != Arrangement::standard)
        throw LadderMismatch("mask tables describe the standard arrangement");
    DetuningPlan plan;
    const int A = 0, B = 5, C = 6, D = 7, E = 12, F = 13;

    std::map<std::pair<GridCoord, int>, GridCoord> arm_partner;
    for (const auto& p : fabric.plaquettes())
        for (const auto& [arm, d] : p.arms)
            arm_partner[{p.ancilla, cz_slot(p.kind, arm)}] = d;
    auto f1_pair_realized = [&](GridCoord anc, int k) {
        auto it = arm_partner.find({anc, k});
        if (it == arm_partner.end()) return false;
        if (frequency_group(fabric.role_of(it->second)) != FreqGroup::F1) return false;
        return table.at(it->second).on[k];
    };

    for (const auto& [coord, role] : fabric.qubits()) {
        const QubitMask& m = table.at(coord);
        std::array<double, 14> lv{};
        const double off = home_offset(role, variant, split_ghz);
        switch (frequency_group(role)) {
            case FreqGroup::F1:
                lv.fill(ladder.f1 + off);
                for (int k = 1; k <= 8; ++k)
                    if (m.on[k]) lv[interaction_slot_index(k)] = ladder.f1_int;
                break;
            case FreqGroup::F3:
                lv.fill(ladder.f3 + off);
                for (int k = 1; k <= 8; ++k)
                    lv[interaction_slot_index(k)] = m.on[k] ? ladder.f3_park : ladder.f3;
                break;
            case FreqGroup::F2: {
                const bool x_kind = stab_kind_of(role) == StabKind::X;
                lv.fill(ladder.f2_park);
                for (int s : {x_kind ? A : D, x_kind ? B : E}) lv[s] = ladder.f2 + off;
                if (x_kind) lv[C] = ladder.f2 + off;
                else lv[F] = ladder.f2 + off;
                for (int k = x_kind ? 1 : 5; k <= (x_kind ? 4 : 8); ++k) {
                    const int idx = interaction_slot_index(k);
                    if (m.on[k]) lv[idx] = ladder.f2_int;
                    else if (f1_pair_realized(coord, k)) lv[idx] = ladder.f2;
                    else lv[idx] = ladder.f2_park;
                }
                break;
            }
        }
        plan.levels[coord] = lv;
    }

    // Realized CZs: pairs co-located at an intended crossing.
    for (const auto& p : fabric.plaquettes()) {
        for (const auto& [arm, d] : p.arms) {
            const int k = cz_slot(p.kind, arm);
            const int idx = interaction_slot_index(k);
            const QubitMask& anc_m = table.at(p.ancilla);
            const QubitMask& dat_m = table.at(d);
            bool realized = false;
            if (frequency_group(fabric.role_of(d)) == FreqGroup::F1)
                realized = dat_m.on[k] && !anc_m.on[k];
            else
                realized = anc_m.on[k] && !dat_m.on[k];
            if (realized) plan.intended[idx].insert(make_coupling(p.ancilla, d));
        }
    }
    return plan;
}

inline std::map<int, PairSet> realized_czs(const DetuningPlan& plan) {
    std::map<int, PairSet> out;
    for (int k = 1; k <= 8; ++k) {
        const auto& s = plan.intended[interaction_slot_index(k)];
        if (!s.empty()) out[k] = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Logical edits

enum class EditKind {
    stabilizer_off_h_mask,
    stabilizer_off_flux_mask,
    remove_data_from_check,
    reorder_gates
};

inline std::string edit_kind_name(EditKind k) {
    switch (k) {
        case EditKind::stabilizer_off_h_mask: return "stabilizer_off_h_mask";
        case EditKind::stabilizer_off_flux_mask: return "stabilizer_off_flux_mask";
        case EditKind::remove_data_from_check: return "remove_data_from_check";
        case EditKind::reorder_gates: return "reorder_gates";
    }
    return "?";
}

struct LogicalEdit {
    EditKind kind = EditKind::stabilizer_off_h_mask;
    GridCoord ancilla;
    std::optional<Arm> arm;          // remove_data_from_check
    std::vector<Arm> order;          // reorder_gates
    int cycle_from = -1;             // -1: all cycles
    int cycle_to = -1;

    bool applies_to_cycle(int cycle) const {
        if (cycle_from < 0) return true;
        return cycle >= cycle_from && (cycle_to < 0 || cycle <= cycle_to);
    }
};

namespace detail {

inline const Plaquette& plaquette_or_throw(const Fabric& fabric, GridCoord anc) {
    const Plaquette* p = fabric.plaquette_at(anc);
    if (!p) throw InvalidTarget("no plaquette at (" + std::to_string(anc.row) + "," +
                                std::to_string(anc.col) + ")");
    return *p;
}

// Clear the single primitive bit realizing one arm's CZ. For an f1 arm the
// data qubit's P1 bit suffices; for an f3 arm the ancilla's P2 bit is
// cleared and the data qubit parks so the pair stays off-zone.
inline void clear_arm(MaskTable& table, const Fabric& fabric, const Plaquette& p, Arm arm) {
    auto it = p.arms.find(arm);
    if (it == p.arms.end()) throw InvalidTarget("plaquette has no arm " + arm_name(arm));
    const GridCoord d = it->second;
    const int k = cz_slot(p.kind, arm);
    if (frequency_group(fabric.role_of(d)) == FreqGroup::F1) {
        table.entries.at(d).on[k] = false;
    } else {
        table.entries.at(p.ancilla).on[k] = false;
        table.entries.at(d).on[k] = true;
    }
}

}  // namespace detail

// Flux-level edits act on the mask table.
inline MaskTable apply_edit(const MaskTable& table, const Fabric& fabric,
                            const LogicalEdit& edit) {
    MaskTable out = table;
    const Plaquette& p = detail::plaquette_or_throw(fabric, edit.ancilla);
    switch (edit.kind) {
        case EditKind::stabilizer_off_flux_mask:
            for (const auto& [arm, d] : p.arms) detail::clear_arm(out, fabric, p, arm);
            break;
        case EditKind::remove_data_from_check:
            if (!edit.arm) throw InvalidTarget("remove_data_from_check needs an arm");
            detail::clear_arm(out, fabric, p, *edit.arm);
            break;
        default:
            throw InvalidTarget(edit_kind_name(edit.kind) + " is not a mask edit");
    }
    return out;
}

// Gate-level edits act on the schedule.
inline CycleSchedule apply_edit(const CycleSchedule& schedule, const Fabric& fabric,
                                const LogicalEdit& edit) {
    CycleSchedule out = schedule;
    const Plaquette& p = detail::plaquette_or_throw(fabric, edit.ancilla);
    switch (edit.kind) {
        case EditKind::stabilizer_off_h_mask: {
            // Remove the ancilla's opening/closing single-qubit gates; its
            // detuning sequence and measurement stay untouched.
            std::erase_if(out.gates, [&](const GateOp& g) {
                return g.q0 == edit.ancilla &&
                       (g.kind == GateKind::H || g.kind == GateKind::YPlus90 ||
                        g.kind == GateKind::YMinus90);
            });
            break;
        }
        case EditKind::reorder_gates: {
            if (edit.order.size() != p.arms.size())
                throw OrderViolation("permutation must list each present arm once");
            std::vector<int> slots;
            for (const auto& [arm, d] : p.arms)
                slots.push_back(interaction_slot_index(cz_slot(p.kind, arm)));
            std::sort(slots.begin(), slots.end());
            std::set<Arm> seen;
            for (std::size_t i = 0; i < edit.order.size(); ++i) {
                Arm a = edit.order[i];
                if (!p.arms.count(a) || !seen.insert(a).second)
                    throw OrderViolation("permutation must list each present arm once");
                const GridCoord d = p.arms.at(a);
                for (auto& g : out.gates)
                    if (g.kind == GateKind::CZ && g.q0 == edit.ancilla && *g.q1 == d)
                        g.slot = slots[i];
            }
            for (const auto& v : validate_ordering(out, fabric)) {
                if (v.kind == OrderingViolationKind::slot_conflict ||
                    v.kind == OrderingViolationKind::shared_qubit_interleave)
                    throw OrderViolation("reorder breaks the shared-qubit constraint at (" +
                                         std::to_string(v.subject.row) + "," +
                                         std::to_string(v.subject.col) + ")");
            }
            break;
        }
        default:
            throw InvalidTarget(edit_kind_name(edit.kind) + " is not a schedule edit");
    }
    return out;
}

inline bool is_mask_edit(EditKind k) {
    return k == EditKind::stabilizer_off_flux_mask || k == EditKind::remove_data_from_check;
}

struct EditedCycle {
    CycleSchedule schedule;
    MaskTable masks;
};

inline EditedCycle apply_edits(const CycleSchedule& schedule, const MaskTable& masks,
                               const Fabric& fabric, const std::vector<LogicalEdit>& edits,
                               int cycle = -1) {
    EditedCycle out{schedule, masks};
    for (const auto& e : edits) {
        if (cycle >= 0 && !e.applies_to_cycle(cycle)) continue;
        if (is_mask_edit(e.kind)) out.masks = apply_edit(out.masks, fabric, e);
        else out.schedule = apply_edit(out.schedule, fabric, e);
    }
    return out;
}

// Rebuild the executable gate list after flux edits: CZs not realized by the
// mask table are dropped (the pair is never co-located on its crossing).
inline CycleSchedule masked_schedule(const CycleSchedule& schedule, const DetuningPlan& plan) {
    CycleSchedule out = schedule;
    std::erase_if(out.gates, [&](const GateOp& g) {
        if (g.kind != GateKind::CZ) return false;
        return plan.intended[g.slot].count(make_coupling(g.q0, *g.q1)) == 0;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Full-cycle zone checking and sequence statistics

struct CycleCheckResult {
    std::vector<InteractionZoneReport> reports;
    CheckSummary summary;
    // Same-frequency pairs at lattice distance 2 per slot, summed over the
    // cycle. Their exchange coupling is fourth order (qubit-resonator paths
    // through the shared neighbor); reported for information, never as a
    // violation.
    int fourth_order_same_freq = 0;
};

// Static checks for all 14 slots plus the 14 slot boundaries (including the
// wrap back to slot A of the next cycle).
inline CycleCheckResult full_cycle_check(const Fabric& fabric, const FrequencyLadder& ladder,
                                         const DetuningPlan& plan, double guard_ghz = 0.050) {
    CycleCheckResult out;
    const auto& slots = pipelined_slots();
    std::map<GridCoord, std::vector<GridCoord>> neighbors;
    for (const auto& [a, b] : fabric.couplings()) {
        neighbors[a].push_back(b);
        neighbors[b].push_back(a);
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
        SlotFrequencies freqs;
        for (const auto& [q, lv] : plan.levels) freqs[q] = lv[s];
        auto reports = check_static(fabric, ladder, freqs, plan.intended[s], guard_ghz,
                                    "slot " + slots[s].id);
        out.reports.insert(out.reports.end(), reports.begin(), reports.end());
        for (const auto& [mid, nbrs] : neighbors)
            for (std::size_t i = 0; i < nbrs.size(); ++i)
                for (std::size_t j = i + 1; j < nbrs.size(); ++j)
                    if (freqs.at(nbrs[i]) == freqs.at(nbrs[j])) ++out.fourth_order_same_freq;
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
        const std::size_t t = (s + 1) % slots.size();
        SlotFrequencies from, to;
        for (const auto& [q, lv] : plan.levels) {
            from[q] = lv[s];
            to[q] = lv[t];
        }
        auto reports = check_transition(fabric, ladder, from, to, plan.intended[t], guard_ghz,
                                        "transition " + slots[s].id + "->" + slots[t].id);
        out.reports.insert(out.reports.end(), reports.begin(), reports.end());
    }
    out.summary = summarize(out.reports);
    return out;
}

// Distinct detuning sequences over a set of qubits (by full 14-slot level
// vector, tagged by primitive).
inline int distinct_sequence_count(const DetuningPlan& plan, const MaskTable& table,
                                   const std::vector<GridCoord>& qubits) {
    std::set<std::pair<Primitive, std::array<double, 14>>> seqs;
    for (GridCoord q : qubits) seqs.insert({table.at(q).primitive, plan.levels.at(q)});
    return static_cast<int>(seqs.size());
}

// Canonical per-role sequences computed on a boundary-free torus, where every
// qubit carries its bulk sequence.
inline std::map<QubitRole, std::array<double, 14>> canonical_role_sequences(
    const FrequencyLadder& ladder, LadderVariant variant = LadderVariant::standard) {
    Fabric torus = build_fabric(PatchSpec::torus(8, 8));
    CycleSchedule sched = pipelined_cycle(torus);
    MaskTable masks = synthesize_masks(sched, torus);
    DetuningPlan plan = masks_to_sequences(masks, ladder, torus, variant);
    std::map<QubitRole, std::array<double, 14>> out;
    for (const auto& [coord, role] : torus.qubits()) {
        auto it = out.find(role);
        if (it == out.end()) out[role] = plan.levels.at(coord);
        else if (it->second != plan.levels.at(coord))
            throw std::logic_error("bulk sequence is not a pure function of role");
    }
    return out;
}

// Interaction steps a qubit spends at its top (sweetspot) frequency.
inline int sweetspot_steps(const std::array<double, 14>& levels) {
    double top = 0;
    for (int k = 1; k <= 8; ++k) top = std::max(top, levels[interaction_slot_index(k)]);
    int n = 0;
    for (int k = 1; k <= 8; ++k) n += levels[interaction_slot_index(k)] == top;
    return n;
}

// ---------------------------------------------------------------------------
// Inverted arrangement (ancillas at the outer frequencies)

// Detuning plan for the inverted arrangement: data qubits live at f2 and
// detune to f2_int for CZs with f3-group ancillas, park at f2_park otherwise;
// X1/Z1 ancillas pulse f1 -> f1_int over their whole coherent block, X2/Z2
// stay at f3 and park when idle. Data qubits reach their top frequency in
// only two of the eight interaction steps.
inline DetuningPlan inverted_plan(const Fabric& fabric, const FrequencyLadder& ladder) {
    if (ladder.arrangement != Arrangement::inverted)
        throw LadderMismatch("inverted plan needs an inverted-arrangement ladder");
    DetuningPlan plan;
    const int A = 0, B = 5, C = 6, D = 7, E = 12, F = 13;

    auto outer_high = [](QubitRole r) { return r == QubitRole::X1 || r == QubitRole::Z1; };

    std::map<std::pair<GridCoord, int>, GridCoord> arm_partner;
    for (const auto& p : fabric.plaquettes())
        for (const auto& [arm, d] : p.arms)
            arm_partner[{p.ancilla, cz_slot(p.kind, arm)}] = d;

    for (const auto& [coord, role] : fabric.qubits()) {
        std::array<double, 14> lv{};
        if (is_data_role(role)) {
            lv.fill(ladder.f2);
            for (int k = 1; k <= 8; ++k) lv[interaction_slot_index(k)] = ladder.f2_park;
        } else if (outer_high(role)) {
            lv.fill(ladder.f1);
            const bool x_kind = stab_kind_of(role) == StabKind::X;
            for (int k = x_kind ? 1 : 5; k <= (x_kind ? 4 : 8); ++k)
                if (arm_partner.count({coord, k}))
                    lv[interaction_slot_index(k)] = ladder.f1_int;
        } else {
            lv.fill(ladder.f3_park);
            const bool x_kind = stab_kind_of(role) == StabKind::X;
            for (int s : {x_kind ? A : D, x_kind ? B : E}) lv[s] = ladder.f3;
            if (x_kind) lv[C] = ladder.f3;
            else lv[F] = ladder.f3;
            for (int k = x_kind ? 1 : 5; k <= (x_kind ? 4 : 8); ++k)
                if (arm_partner.count({coord, k}))
                    lv[interaction_slot_index(k)] = ladder.f3;
        }
        plan.levels[coord] = lv;
    }

    for (const auto& p : fabric.plaquettes()) {
        for (const auto& [arm, d] : p.arms) {
            const int k = cz_slot(p.kind, arm);
            const int idx = interaction_slot_index(k);
            if (outer_high(fabric.role_of(p.ancilla))) {
                plan.levels[d][idx] = ladder.f2;  // CZ at (f1_int, f2)
            } else {
                plan.levels[d][idx] = ladder.f2_int;  // CZ at (f2_int, f3)
            }
            plan.intended[idx].insert(make_coupling(p.ancilla, d));
        }
    }
    return plan;
}

}  // namespace surfcycle

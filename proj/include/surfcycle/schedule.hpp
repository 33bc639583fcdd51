#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfcycle/fabric.hpp"

// QEC-cycle schedule generation: the pipelined depth-7 cycle for any fabric
// and the depth-9 fully parallel Surface-17 reference.

namespace surfcycle {

enum class SlotKind { single_qubit, two_qubit, flex, readout };

struct TimeSlot {
    std::string id;
    SlotKind kind = SlotKind::single_qubit;
};

enum class GateKind { H, YPlus90, YMinus90, CZ, Measure, Idle, PauliX, PauliZ };

inline std::string gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::YPlus90: return "Y+90";
        case GateKind::YMinus90: return "Y-90";
        case GateKind::CZ: return "CZ";
        case GateKind::Measure: return "M";
        case GateKind::Idle: return "I";
        case GateKind::PauliX: return "X";
        case GateKind::PauliZ: return "Z";
    }
    return "?";
}

struct GateOp {
    GateKind kind = GateKind::Idle;
    GridCoord q0;
    std::optional<GridCoord> q1;  // CZ partner
    int slot = 0;                 // index into CycleSchedule::slots
};

enum class ScheduleMode { pipelined, parallel_s17 };

struct Durations {
    double tau_1q_ns = 20.0;
    double tau_2q_ns = 40.0;
    double tau_ro_ns = 500.0;  // readout + photon depletion
};

struct CycleSchedule {
    ScheduleMode mode = ScheduleMode::pipelined;
    PatchSpec patch;
    std::vector<TimeSlot> slots;
    std::vector<GateOp> gates;

    int slot_index(const std::string& id) const {
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i].id == id) return static_cast<int>(i);
        throw std::out_of_range("no slot named " + id);
    }

    std::vector<GateOp> gates_in_slot(int slot) const {
        std::vector<GateOp> out;
        for (const auto& g : gates)
            if (g.slot == slot) out.push_back(g);
        return out;
    }
};

// Pipelined slot ids in execution order; interaction slot k (1..8) lives at
// index interaction_slot_index(k).
inline const std::vector<TimeSlot>& pipelined_slots() {
    static const std::vector<TimeSlot> slots = {
        {"A", SlotKind::single_qubit}, {"1", SlotKind::two_qubit},
        {"2", SlotKind::two_qubit},    {"3", SlotKind::two_qubit},
        {"4", SlotKind::two_qubit},    {"B", SlotKind::single_qubit},
        {"C", SlotKind::flex},         {"D", SlotKind::single_qubit},
        {"5", SlotKind::two_qubit},    {"6", SlotKind::two_qubit},
        {"7", SlotKind::two_qubit},    {"8", SlotKind::two_qubit},
        {"E", SlotKind::single_qubit}, {"F", SlotKind::flex}};
    return slots;
}

inline int interaction_slot_index(int k) {
    // slots "1".."4" at indices 1..4, "5".."8" at indices 8..11
    return k <= 4 ? k : k + 3;
}

inline int interaction_slot_number(const CycleSchedule& s, int slot_index) {
    const std::string& id = s.slots[slot_index].id;
    if (id.size() == 1 && id[0] >= '1' && id[0] <= '8') return id[0] - '0';
    return 0;
}

// Pipelined QEC cycle: X-type checks run H(A), CZs in slots 1-4 named
// NE,NW,SE,SW, H(B), and are measured over D-F; Z-type checks mirror this in
// D,5-8,E with measurement over A-C (completing in the next cycle). Data
// qubits taking part in X-checks receive basis-change gates in A and B.
// Ancillas idle in the coherent slots where an arm is absent, so depth per
// ancilla is 7 regardless of fabric size.
inline CycleSchedule pipelined_cycle(const Fabric& fabric) {
    CycleSchedule s;
    s.mode = ScheduleMode::pipelined;
    s.patch = fabric.patch();
    s.slots = pipelined_slots();
    const int A = 0, B = 5, C = 6, D = 7, E = 12, F = 13;

    std::set<GridCoord> x_check_data;
    for (const auto& p : fabric.plaquettes())
        if (p.kind == StabKind::X)
            for (const auto& [arm, d] : p.arms) x_check_data.insert(d);

    for (const auto& p : fabric.plaquettes()) {
        const bool x_kind = p.kind == StabKind::X;
        const int open_slot = x_kind ? A : D;
        const int close_slot = x_kind ? B : E;
        s.gates.push_back({GateKind::H, p.ancilla, std::nullopt, open_slot});
        std::map<int, GateOp> cz_by_slot;
        for (const auto& [arm, d] : p.arms) {
            const int idx = interaction_slot_index(cz_slot(p.kind, arm));
            cz_by_slot[idx] = {GateKind::CZ, p.ancilla, d, idx};
        }
        const int first = x_kind ? 1 : 5, last = x_kind ? 4 : 8;
        for (int k = first; k <= last; ++k) {
            const int idx = interaction_slot_index(k);
            if (auto it = cz_by_slot.find(idx); it != cz_by_slot.end())
                s.gates.push_back(it->second);
            else
                s.gates.push_back({GateKind::Idle, p.ancilla, std::nullopt, idx});
        }
        s.gates.push_back({GateKind::H, p.ancilla, std::nullopt, close_slot});
        // X ancillas are measured over D-F, Z ancillas over A-C (next cycle).
        s.gates.push_back({GateKind::Measure, p.ancilla, std::nullopt, x_kind ? D : A});
    }

    for (GridCoord d : fabric.data_coords()) {
        if (x_check_data.count(d)) {
            s.gates.push_back({GateKind::H, d, std::nullopt, A});
            s.gates.push_back({GateKind::H, d, std::nullopt, B});
        }
        s.gates.push_back({GateKind::Idle, d, std::nullopt, C});
        s.gates.push_back({GateKind::Idle, d, std::nullopt, F});
    }
    return s;
}

// Parallel Surface-17 slot layout: four single-qubit slots interleaved with
// the four CZ slots, then one readout slot.
inline const std::vector<TimeSlot>& parallel_slots() {
    static const std::vector<TimeSlot> slots = {
        {"Q1", SlotKind::single_qubit}, {"C1", SlotKind::two_qubit},
        {"Q2", SlotKind::single_qubit}, {"C2", SlotKind::two_qubit},
        {"C3", SlotKind::two_qubit},    {"Q3", SlotKind::single_qubit},
        {"C4", SlotKind::two_qubit},    {"Q4", SlotKind::single_qubit},
        {"RO", SlotKind::readout}};
    return slots;
}

struct UnsupportedSchedule : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Depth-nine fully parallel Surface-17 cycle. Every ancilla acts in all nine
// slots (two enforced idles in the interior single-qubit slots); each data
// qubit switches to the X basis exactly around its X-type CZs. Slot placement
// is certified by the stabilizer-projection oracle rather than assumed.
inline CycleSchedule parallel_cycle_s17(const Fabric& fabric) {
    if (fabric.patch().kind != PatchSpec::Kind::planar || fabric.patch().distance != 3)
        throw UnsupportedSchedule("parallel schedule is defined for the distance-3 patch");
    CycleSchedule s;
    s.mode = ScheduleMode::parallel_s17;
    s.patch = fabric.patch();
    s.slots = parallel_slots();
    const int Q1 = 0, C1 = 1, Q2 = 2, C2 = 3, C3 = 4, Q3 = 5, C4 = 6, Q4 = 7, RO = 8;
    auto cz_index = [&](int k) { return std::array<int, 4>{C1, C2, C3, C4}[k - 1]; };

    for (const auto& p : fabric.plaquettes()) {
        s.gates.push_back({GateKind::H, p.ancilla, std::nullopt, Q1});
        std::map<int, GateOp> cz_by_slot;
        for (const auto& [arm, d] : p.arms) {
            // Name order NE,NW,SE,SW (X) / NE,SE,NW,SW (Z) maps onto C1..C4.
            const int k = cz_slot(p.kind, arm);
            const int idx = cz_index(p.kind == StabKind::X ? k : k - 4);
            cz_by_slot[idx] = {GateKind::CZ, p.ancilla, d, idx};
        }
        for (int idx : {C1, C2, C3, C4}) {
            if (auto it = cz_by_slot.find(idx); it != cz_by_slot.end())
                s.gates.push_back(it->second);
            else
                s.gates.push_back({GateKind::Idle, p.ancilla, std::nullopt, idx});
        }
        s.gates.push_back({GateKind::Idle, p.ancilla, std::nullopt, Q2});
        s.gates.push_back({GateKind::Idle, p.ancilla, std::nullopt, Q3});
        s.gates.push_back({GateKind::H, p.ancilla, std::nullopt, Q4});
        s.gates.push_back({GateKind::Measure, p.ancilla, std::nullopt, RO});
    }

    // A data qubit's X-type CZs land either in {C2,C3} (one frame window) or
    // in {C1,C4} (two windows). Basis changes bracket each window.
    for (GridCoord d : fabric.data_coords()) {
        std::set<int> x_czs;
        for (const auto& p : fabric.plaquettes()) {
            if (p.kind != StabKind::X) continue;
            for (const auto& [arm, c] : p.arms)
                if (c == d) x_czs.insert(cz_index(cz_slot(p.kind, arm)));
        }
        const bool inner = x_czs.count(C2) || x_czs.count(C3);
        const bool outer = x_czs.count(C1) || x_czs.count(C4);
        if (inner && outer)
            throw UnsupportedSchedule("data qubit mixes X-CZ windows");
        if (inner || x_czs.empty()) {
            s.gates.push_back({GateKind::H, d, std::nullopt, Q2});
            s.gates.push_back({GateKind::H, d, std::nullopt, Q3});
        } else {
            s.gates.push_back({GateKind::H, d, std::nullopt, Q1});
            s.gates.push_back({GateKind::H, d, std::nullopt, Q2});
            s.gates.push_back({GateKind::H, d, std::nullopt, Q3});
            s.gates.push_back({GateKind::H, d, std::nullopt, Q4});
        }
    }
    return s;
}

inline CycleSchedule parallel_cycle_s17() {
    return parallel_cycle_s17(build_fabric(PatchSpec::planar(3)));
}

enum class OrderingViolationKind { slot_conflict, pattern, shared_qubit_interleave };

struct OrderingViolation {
    OrderingViolationKind kind;
    GridCoord subject;  // ancilla (pattern) or qubit (conflict/interleave)
    std::string detail;
};

// Ordering rules: each qubit appears in at most one gate per slot; every
// plaquette runs its present arms in the name order NE-NW-SE-SW (X-type) or
// NE-SE-NW-SW (Z-type); and a data qubit shared by two same-type plaquettes
// finishes all its CZs with one ancilla before starting the other's.
inline std::vector<OrderingViolation> validate_ordering(const CycleSchedule& s,
                                                        const Fabric& fabric) {
    std::vector<OrderingViolation> out;

    std::map<std::pair<GridCoord, int>, int> gates_per_slot;
    for (const auto& g : s.gates) {
        if (g.kind == GateKind::Idle) continue;
        gates_per_slot[{g.q0, g.slot}]++;
        if (g.q1) gates_per_slot[{*g.q1, g.slot}]++;
    }
    for (const auto& [key, n] : gates_per_slot)
        if (n > 1)
            out.push_back({OrderingViolationKind::slot_conflict, key.first,
                           "qubit in " + std::to_string(n) + " gates in slot " +
                               s.slots[key.second].id});

    // CZ slot per (ancilla, data) pair.
    std::map<Coupling, int> cz_slot_of;
    for (const auto& g : s.gates)
        if (g.kind == GateKind::CZ) cz_slot_of[make_coupling(g.q0, *g.q1)] = g.slot;

    static const std::vector<Arm> x_order{Arm::NE, Arm::NW, Arm::SE, Arm::SW};
    static const std::vector<Arm> z_order{Arm::NE, Arm::SE, Arm::NW, Arm::SW};
    for (const auto& p : fabric.plaquettes()) {
        const auto& order = p.kind == StabKind::X ? x_order : z_order;
        int prev = -1;
        for (Arm a : order) {
            auto arm_it = p.arms.find(a);
            if (arm_it == p.arms.end()) continue;
            auto it = cz_slot_of.find(make_coupling(p.ancilla, arm_it->second));
            if (it == cz_slot_of.end()) continue;
            if (it->second <= prev) {
                out.push_back({OrderingViolationKind::pattern, p.ancilla,
                               "arm " + arm_name(a) + " out of NE-NW-SE-SW/NE-SE-NW-SW order"});
                break;
            }
            prev = it->second;
        }
    }

    // Shared-data grouping between same-type plaquettes.
    std::map<GridCoord, std::vector<std::pair<GridCoord, int>>> x_uses, z_uses;
    for (const auto& p : fabric.plaquettes())
        for (const auto& [arm, d] : p.arms) {
            auto it = cz_slot_of.find(make_coupling(p.ancilla, d));
            if (it == cz_slot_of.end()) continue;
            (p.kind == StabKind::X ? x_uses : z_uses)[d].push_back({p.ancilla, it->second});
        }
    for (const auto* uses : {&x_uses, &z_uses})
        for (const auto& [d, list] : *uses)
            for (std::size_t i = 0; i < list.size(); ++i)
                for (std::size_t j = i + 1; j < list.size(); ++j)
                    if (list[i].second == list[j].second)
                        out.push_back({OrderingViolationKind::shared_qubit_interleave, d,
                                       "simultaneous CZs with two same-type ancillas"});
    return out;
}

// Wall-clock duration of one QEC cycle. The pipelined cycle is bounded per
// half by the longer of the coherent block and the concurrent readout of the
// other ancilla type, with slots C/F absorbing the slack; it does not grow
// with fabric size.
inline double cycle_time_ns(const CycleSchedule& s, const Durations& d) {
    if (s.mode == ScheduleMode::parallel_s17)
        return 4 * d.tau_1q_ns + 4 * d.tau_2q_ns + d.tau_ro_ns;
    const double coherent = 2 * d.tau_1q_ns + 4 * d.tau_2q_ns;
    return 2.0 * std::max(coherent, d.tau_ro_ns);
}

// Gates on one ancilla per cycle, measurement included, initialization
// excluded. Scheduled idles count; the flex slots C/F hold no ancilla ops.
inline std::map<GridCoord, int> depth_per_ancilla(const CycleSchedule& s,
                                                  const Fabric& fabric) {
    std::map<GridCoord, int> depth;
    for (GridCoord a : fabric.ancilla_coords()) depth[a] = 0;
    for (const auto& g : s.gates) {
        if (auto it = depth.find(g.q0); it != depth.end()) it->second++;
        if (g.q1)
            if (auto it = depth.find(*g.q1); it != depth.end()) it->second++;
    }
    return depth;
}

enum class HadamardSubstitution { open_Yminus_close_Yplus };

// Replace H gates with Y rotations per H = Y+90 Z = Z Y-90: on each wire the
// opening H of a frame window becomes Y-90 and the closing H becomes Y+90.
// The residual Z operators commute through the CZ block, so the circuit is
// unchanged as a unitary.
inline CycleSchedule substitute_hadamards(
    const CycleSchedule& s,
    HadamardSubstitution dir = HadamardSubstitution::open_Yminus_close_Yplus) {
    (void)dir;
    CycleSchedule out = s;
    std::map<GridCoord, std::vector<GateOp*>> h_gates;
    for (auto& g : out.gates)
        if (g.kind == GateKind::H) h_gates[g.q0].push_back(&g);
    for (auto& [q, gates] : h_gates) {
        std::stable_sort(gates.begin(), gates.end(),
                         [](const GateOp* a, const GateOp* b) { return a->slot < b->slot; });
        for (std::size_t i = 0; i < gates.size(); ++i)
            gates[i]->kind = i % 2 == 0 ? GateKind::YMinus90 : GateKind::YPlus90;
    }
    return out;
}

}  // namespace surfcycle

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "surfcycle/fabric.hpp"
#include "surfcycle/freqplan.hpp"
#include "surfcycle/pulsemask.hpp"
#include "surfcycle/schedule.hpp"

using namespace surfcycle;
using Catch::Approx;

namespace {

struct TorusFixture {
    Fabric fabric = build_fabric(PatchSpec::torus(8, 8));
    CycleSchedule schedule = pipelined_cycle(fabric);
    MaskTable masks = synthesize_masks(schedule, fabric);
    FrequencyLadder ladder = build_ladder(6.0, 0.4, -0.3);

    GridCoord find_role(QubitRole r) const {
        for (const auto& [c, role] : fabric.qubits())
            if (role == r) return c;
        FAIL("role not present");
        return {};
    }
};

}  // namespace

TEST_CASE("per-role mask classes on a boundary-free fabric") {
    TorusFixture fx;
    const std::map<QubitRole, std::pair<Primitive, std::set<int>>> expected{
        {QubitRole::D1, {Primitive::P1, {2, 3, 5, 8}}},
        {QubitRole::D2, {Primitive::P1, {1, 4, 6, 7}}},
        {QubitRole::D3, {Primitive::P3, {1, 4, 6, 7}}},
        {QubitRole::D4, {Primitive::P3, {2, 3, 5, 8}}},
        {QubitRole::X1, {Primitive::P2, {1, 2}}},
        {QubitRole::X2, {Primitive::P2, {3, 4}}},
        {QubitRole::Z1, {Primitive::P2, {5, 7}}},
        {QubitRole::Z2, {Primitive::P2, {6, 8}}}};
    for (const auto& [coord, role] : fx.fabric.qubits()) {
        const auto& [prim, slots] = expected.at(role);
        INFO(role_name(role) << " at (" << coord.row << "," << coord.col << ")");
        CHECK(fx.masks.at(coord).primitive == prim);
        CHECK(fx.masks.at(coord).on_slots() == slots);
    }
}

TEST_CASE("mask bits are defined only where the primitive exists") {
    TorusFixture fx;
    for (const auto& [coord, role] : fx.fabric.qubits()) {
        const auto& m = fx.masks.at(coord);
        for (int k = 1; k <= 8; ++k) {
            const bool x_slot = k <= 4;
            if (is_data_role(role)) CHECK(m.defined[k]);
            else if (stab_kind_of(role) == StabKind::X) CHECK(m.defined[k] == x_slot);
            else CHECK(m.defined[k] == !x_slot);
        }
    }
}

TEST_CASE("mask synthesis rejects the parallel schedule") {
    Fabric f = build_fabric(PatchSpec::planar(3));
    CHECK_THROWS_AS(synthesize_masks(parallel_cycle_s17(f), f), UnsupportedSchedule);
}

TEST_CASE("D2 bit pattern expands to the documented frequency sequence") {
    TorusFixture fx;
    DetuningPlan plan = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    const GridCoord d2 = fx.find_role(QubitRole::D2);
    auto lv = plan.interaction_levels(d2);
    const double fi = fx.ladder.f1_int, fh = fx.ladder.f1;
    const std::array<double, 8> want{fi, fh, fh, fi, fh, fi, fi, fh};
    for (int i = 0; i < 8; ++i) CHECK(lv[i] == Approx(want[i]));
}

TEST_CASE("round trip: realized CZ set equals the schedule's CZ set") {
    for (auto spec : {PatchSpec::planar(3), PatchSpec::planar(5), PatchSpec::torus(4, 8)}) {
        Fabric fabric = build_fabric(spec);
        CycleSchedule sched = pipelined_cycle(fabric);
        MaskTable masks = synthesize_masks(sched, fabric);
        FrequencyLadder ladder = build_ladder(6.0, 0.4, -0.3);
        DetuningPlan plan = masks_to_sequences(masks, ladder, fabric);

        std::map<int, PairSet> scheduled;
        for (const auto& g : sched.gates)
            if (g.kind == GateKind::CZ)
                scheduled[interaction_slot_number(sched, g.slot)].insert(
                    make_coupling(g.q0, *g.q1));
        CHECK(realized_czs(plan) == scheduled);
    }
}

TEST_CASE("eight distinct sequences from three primitives") {
    TorusFixture fx;
    auto canonical = canonical_role_sequences(fx.ladder);
    CHECK(canonical.size() == 8);
    std::set<std::array<double, 14>> distinct;
    for (const auto& [role, seq] : canonical) distinct.insert(seq);
    CHECK(distinct.size() == 8);

    DetuningPlan plan = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    std::vector<GridCoord> all;
    for (const auto& [c, r] : fx.fabric.qubits()) all.push_back(c);
    CHECK(distinct_sequence_count(plan, fx.masks, all) == 8);

    // Patch sequences are boundary restrictions of the canonical ones: on
    // defined slots where the qubit keeps all arms the levels agree.
    Fabric patch = build_fabric(PatchSpec::planar(5));
    CycleSchedule psched = pipelined_cycle(patch);
    MaskTable pmask = synthesize_masks(psched, patch);
    DetuningPlan pplan = masks_to_sequences(pmask, fx.ladder, patch);
    for (const auto& [coord, role] : patch.qubits()) {
        if (patch.coupled_neighbors(coord).size() != 4) continue;
        bool full_partners = true;
        for (GridCoord n : patch.coupled_neighbors(coord))
            if (patch.coupled_neighbors(n).size() !=
                (patch.is_data(n) ? 4u : static_cast<std::size_t>(4)))
                full_partners = false;
        if (!full_partners) continue;
        CHECK(pplan.levels.at(coord) == canonical.at(role));
    }
}

TEST_CASE("all-zero mask table parks everything and realizes nothing") {
    TorusFixture fx;
    MaskTable zero = fx.masks;
    for (auto& [c, m] : zero.entries) m.on.fill(false);
    DetuningPlan plan = masks_to_sequences(zero, fx.ladder, fx.fabric);
    for (int s = 0; s < 14; ++s) CHECK(plan.intended[s].empty());
    for (const auto& [coord, role] : fx.fabric.qubits()) {
        const auto lv = plan.interaction_levels(coord);
        for (double v : lv) {
            switch (frequency_group(role)) {
                case FreqGroup::F1: CHECK(v == Approx(fx.ladder.f1)); break;
                case FreqGroup::F3: CHECK(v == Approx(fx.ladder.f3)); break;
                case FreqGroup::F2:
                    CHECK((v == Approx(fx.ladder.f2) || v == Approx(fx.ladder.f2_park)));
                    break;
            }
        }
    }
    // Still zone-free.
    CHECK(full_cycle_check(fx.fabric, fx.ladder, plan).summary.violations == 0);
}

TEST_CASE("default plan passes every static and transition check") {
    FrequencyLadder ladder = build_ladder(6.0, 0.4, -0.3);
    for (int d : {3, 5, 7, 9}) {
        Fabric fabric = build_fabric(PatchSpec::planar(d));
        CycleSchedule sched = pipelined_cycle(fabric);
        MaskTable masks = synthesize_masks(sched, fabric);
        DetuningPlan plan = masks_to_sequences(masks, ladder, fabric);
        auto result = full_cycle_check(fabric, ladder, plan);
        INFO("d = " << d);
        CHECK(result.summary.violations == 0);
        CHECK(result.summary.min_margin_ghz >= 0.050);
    }
}

TEST_CASE("mismatched ladder arrangement is rejected") {
    TorusFixture fx;
    FrequencyLadder inv = build_ladder(6.0, 0.4, -0.3, Arrangement::inverted);
    CHECK_THROWS_AS(masks_to_sequences(fx.masks, inv, fx.fabric), LadderMismatch);
    CHECK_THROWS_AS(inverted_plan(fx.fabric, fx.ladder), LadderMismatch);
}

TEST_CASE("primitive counts per variant") {
    CHECK(primitive_count(LadderVariant::standard) == 3);
    CHECK(primitive_count(LadderVariant::break_f1_f3) == 5);
    CHECK(primitive_count(LadderVariant::break_all) == 8);
}

TEST_CASE("degeneracy-broken variants split home frequencies and stay safe") {
    TorusFixture fx;
    for (auto v : {LadderVariant::break_f1_f3, LadderVariant::break_all}) {
        DetuningPlan plan = masks_to_sequences(fx.masks, fx.ladder, fx.fabric, v);
        const GridCoord d1 = fx.find_role(QubitRole::D1);
        const GridCoord d2 = fx.find_role(QubitRole::D2);
        CHECK(plan.levels.at(d1)[0] != plan.levels.at(d2)[0]);
        // Interaction levels stay exact: realized pairs unchanged.
        CHECK(realized_czs(plan) ==
              realized_czs(masks_to_sequences(fx.masks, fx.ladder, fx.fabric)));
        CHECK(full_cycle_check(fx.fabric, fx.ladder, plan).summary.violations == 0);
    }
    // f2 homes split only in break_all.
    DetuningPlan p5 = masks_to_sequences(fx.masks, fx.ladder, fx.fabric,
                                         LadderVariant::break_f1_f3);
    DetuningPlan p8 = masks_to_sequences(fx.masks, fx.ladder, fx.fabric,
                                         LadderVariant::break_all);
    const GridCoord x1 = fx.find_role(QubitRole::X1);
    const GridCoord x2 = fx.find_role(QubitRole::X2);
    CHECK(p5.levels.at(x1)[0] == Approx(p5.levels.at(x2)[0]));
    CHECK(p8.levels.at(x1)[0] != p8.levels.at(x2)[0]);
}

TEST_CASE("sweetspot steps: 4 of 8 standard vs 2 of 8 inverted for data") {
    TorusFixture fx;
    auto canonical = canonical_role_sequences(fx.ladder);
    for (QubitRole r : {QubitRole::D1, QubitRole::D2, QubitRole::D3, QubitRole::D4})
        CHECK(sweetspot_steps(canonical.at(r)) == 4);

    FrequencyLadder inv = build_ladder(6.0, 0.4, -0.3, Arrangement::inverted);
    DetuningPlan iplan = inverted_plan(fx.fabric, inv);
    for (const auto& [coord, role] : fx.fabric.qubits()) {
        if (!is_data_role(role)) continue;
        CHECK(sweetspot_steps(iplan.levels.at(coord)) == 2);
    }
    // Ancillas: X1/Z1 never reach their top during their own four steps,
    // X2/Z2 always do.
    for (const auto& [coord, role] : fx.fabric.qubits()) {
        if (is_data_role(role)) continue;
        const bool x_kind = stab_kind_of(role) == StabKind::X;
        int own_at_top = 0;
        for (int k = x_kind ? 1 : 5; k <= (x_kind ? 4 : 8); ++k) {
            const double v = iplan.levels.at(coord)[interaction_slot_index(k)];
            if (role == QubitRole::X1 || role == QubitRole::Z1)
                own_at_top += v == Approx(inv.f1);
            else
                own_at_top += v == Approx(inv.f3);
        }
        if (role == QubitRole::X1 || role == QubitRole::Z1) CHECK(own_at_top == 0);
        else CHECK(own_at_top == 4);
    }
}

TEST_CASE("inverted plan passes the zone checks") {
    FrequencyLadder inv = build_ladder(6.0, 0.4, -0.3, Arrangement::inverted);
    for (auto spec : {PatchSpec::planar(3), PatchSpec::torus(8, 8)}) {
        Fabric fabric = build_fabric(spec);
        DetuningPlan plan = inverted_plan(fabric, inv);
        CHECK(full_cycle_check(fabric, inv, plan).summary.violations == 0);
    }
}

TEST_CASE("remove_data_from_check clears exactly one realized CZ") {
    TorusFixture fx;
    DetuningPlan base = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);

    for (Arm arm : all_arms) {
        const GridCoord anc = fx.find_role(QubitRole::X1);
        LogicalEdit edit{EditKind::remove_data_from_check, anc, arm, {}, -1, -1};
        MaskTable edited = apply_edit(fx.masks, fx.fabric, edit);
        DetuningPlan plan = masks_to_sequences(edited, fx.ladder, fx.fabric);

        const Plaquette* p = fx.fabric.plaquette_at(anc);
        const int k = cz_slot(p->kind, arm);
        const Coupling removed = make_coupling(anc, p->arms.at(arm));
        int diff = 0;
        for (int s = 0; s < 14; ++s) {
            std::set<Coupling> lost;
            for (const auto& c : base.intended[s])
                if (!plan.intended[s].count(c)) lost.insert(c);
            diff += static_cast<int>(lost.size());
            if (!lost.empty()) {
                CHECK(lost == std::set<Coupling>{removed});
                CHECK(s == interaction_slot_index(k));
            }
            // Nothing new appears.
            for (const auto& c : plan.intended[s]) CHECK(base.intended[s].count(c) == 1);
        }
        CHECK(diff == 1);
        // Check weight drops 4 -> 3 and the checks stay green.
        CHECK(full_cycle_check(fx.fabric, fx.ladder, plan).summary.violations == 0);
    }
}

TEST_CASE("stabilizer_off_flux_mask removes the ancilla's four CZs only") {
    TorusFixture fx;
    DetuningPlan base = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    const GridCoord anc = fx.find_role(QubitRole::Z2);
    LogicalEdit edit{EditKind::stabilizer_off_flux_mask, anc, std::nullopt, {}, -1, -1};
    MaskTable edited = apply_edit(fx.masks, fx.fabric, edit);
    DetuningPlan plan = masks_to_sequences(edited, fx.ladder, fx.fabric);

    int removed = 0;
    for (int s = 0; s < 14; ++s)
        for (const auto& c : base.intended[s])
            if (!plan.intended[s].count(c)) {
                ++removed;
                CHECK((c.first == anc || c.second == anc));
            }
    CHECK(removed == 4);
    CHECK(full_cycle_check(fx.fabric, fx.ladder, plan).summary.violations == 0);
}

TEST_CASE("edit locality: untouched pairs keep their realized CZs bitwise") {
    TorusFixture fx;
    DetuningPlan base = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    const GridCoord anc = fx.find_role(QubitRole::X2);
    LogicalEdit edit{EditKind::stabilizer_off_flux_mask, anc, std::nullopt, {}, -1, -1};
    DetuningPlan plan =
        masks_to_sequences(apply_edit(fx.masks, fx.fabric, edit), fx.ladder, fx.fabric);
    for (int s = 0; s < 14; ++s) {
        PairSet base_rest, plan_rest;
        for (const auto& c : base.intended[s])
            if (c.first != anc && c.second != anc) base_rest.insert(c);
        for (const auto& c : plan.intended[s])
            if (c.first != anc && c.second != anc) plan_rest.insert(c);
        CHECK(base_rest == plan_rest);
    }
}

TEST_CASE("h-mask edit strips single-qubit gates but keeps CZs and measure") {
    Fabric fabric = build_fabric(PatchSpec::planar(3));
    CycleSchedule sched = pipelined_cycle(fabric);
    const GridCoord anc{2, 1};
    LogicalEdit edit{EditKind::stabilizer_off_h_mask, anc, std::nullopt, {}, -1, -1};
    CycleSchedule edited = apply_edit(sched, fabric, edit);

    int h = 0, cz = 0, m = 0;
    for (const auto& g : edited.gates) {
        if (g.q0 == anc) {
            h += g.kind == GateKind::H;
            cz += g.kind == GateKind::CZ;
            m += g.kind == GateKind::Measure;
        }
    }
    CHECK(h == 0);
    CHECK(cz == 4);
    CHECK(m == 1);
    CHECK(edited.gates.size() == sched.gates.size() - 2);
}

TEST_CASE("reorder_gates permutes slots subject to the shared-qubit rule") {
    Fabric fabric = build_fabric(PatchSpec::planar(3));
    CycleSchedule sched = pipelined_cycle(fabric);
    const GridCoord anc{1, 2};

    // Exchanging the NE and NW slots keeps all shared qubits conflict-free.
    LogicalEdit ok{EditKind::reorder_gates, anc, std::nullopt,
                   {Arm::NW, Arm::NE, Arm::SE, Arm::SW}, -1, -1};
    CycleSchedule edited = apply_edit(sched, fabric, ok);
    auto violations = validate_ordering(edited, fabric);
    CHECK(!violations.empty());
    for (const auto& v : violations)
        CHECK(v.kind == OrderingViolationKind::pattern);  // pattern changes allowed

    // Moving SE into the second slot collides with (2,2)'s other X-type CZ.
    LogicalEdit bad{EditKind::reorder_gates, anc, std::nullopt,
                    {Arm::NE, Arm::SE, Arm::NW, Arm::SW}, -1, -1};
    CHECK_THROWS_AS(apply_edit(sched, fabric, bad), OrderViolation);

    LogicalEdit incomplete{EditKind::reorder_gates, anc, std::nullopt,
                           {Arm::NE, Arm::NE, Arm::SE, Arm::SW}, -1, -1};
    CHECK_THROWS_AS(apply_edit(sched, fabric, incomplete), OrderViolation);
}

TEST_CASE("edits reject missing targets and wrong artifacts") {
    Fabric fabric = build_fabric(PatchSpec::planar(3));
    CycleSchedule sched = pipelined_cycle(fabric);
    MaskTable masks = synthesize_masks(sched, fabric);

    LogicalEdit no_anc{EditKind::stabilizer_off_flux_mask, GridCoord{0, 0}, std::nullopt,
                       {}, -1, -1};
    CHECK_THROWS_AS(apply_edit(masks, fabric, no_anc), InvalidTarget);

    LogicalEdit absent_arm{EditKind::remove_data_from_check, GridCoord{1, 0}, Arm::NW,
                           {}, -1, -1};
    CHECK_THROWS_AS(apply_edit(masks, fabric, absent_arm), InvalidTarget);

    LogicalEdit h_on_mask{EditKind::stabilizer_off_h_mask, GridCoord{2, 1}, std::nullopt,
                          {}, -1, -1};
    CHECK_THROWS_AS(apply_edit(masks, fabric, h_on_mask), InvalidTarget);

    LogicalEdit flux_on_schedule{EditKind::stabilizer_off_flux_mask, GridCoord{2, 1},
                                 std::nullopt, {}, -1, -1};
    CHECK_THROWS_AS(apply_edit(sched, fabric, flux_on_schedule), InvalidTarget);
}

TEST_CASE("masked schedule drops unrealized CZ gates") {
    TorusFixture fx;
    const GridCoord anc = fx.find_role(QubitRole::X1);
    LogicalEdit edit{EditKind::stabilizer_off_flux_mask, anc, std::nullopt, {}, -1, -1};
    MaskTable edited = apply_edit(fx.masks, fx.fabric, edit);
    DetuningPlan plan = masks_to_sequences(edited, fx.ladder, fx.fabric);
    CycleSchedule ms = masked_schedule(fx.schedule, plan);
    int anc_czs = 0;
    for (const auto& g : ms.gates)
        if (g.kind == GateKind::CZ && (g.q0 == anc || *g.q1 == anc)) ++anc_czs;
    CHECK(anc_czs == 0);
    CHECK(ms.gates.size() == fx.schedule.gates.size() - 4);
}

TEST_CASE("cycle-ranged edits apply only inside their window") {
    Fabric fabric = build_fabric(PatchSpec::planar(3));
    CycleSchedule sched = pipelined_cycle(fabric);
    MaskTable masks = synthesize_masks(sched, fabric);
    LogicalEdit edit{EditKind::stabilizer_off_h_mask, GridCoord{2, 1}, std::nullopt, {}, 2, 3};
    CHECK_FALSE(edit.applies_to_cycle(1));
    CHECK(edit.applies_to_cycle(2));
    CHECK(edit.applies_to_cycle(3));
    CHECK_FALSE(edit.applies_to_cycle(4));

    auto in_window = apply_edits(sched, masks, fabric, {edit}, 2);
    auto outside = apply_edits(sched, masks, fabric, {edit}, 1);
    CHECK(in_window.schedule.gates.size() == sched.gates.size() - 2);
    CHECK(outside.schedule.gates.size() == sched.gates.size());
}

TEST_CASE("fourth-order same-frequency pairs are informational only") {
    TorusFixture fx;
    DetuningPlan plan = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    auto result = full_cycle_check(fx.fabric, fx.ladder, plan);
    CHECK(result.summary.violations == 0);
    // Same-group qubits two hops apart share a frequency in many slots.
    CHECK(result.fourth_order_same_freq > 0);
}

TEST_CASE("random edit sequences preserve locality and zone freedom") {
    TorusFixture fx;
    DetuningPlan base = masks_to_sequences(fx.masks, fx.ladder, fx.fabric);
    std::mt19937_64 gen(2024);
    std::vector<GridCoord> ancillas = fx.fabric.ancilla_coords();

    for (int trial = 0; trial < 12; ++trial) {
        MaskTable table = fx.masks;
        std::set<GridCoord> touched;
        const int n_edits = 1 + static_cast<int>(gen() % 3);
        for (int e = 0; e < n_edits; ++e) {
            const GridCoord anc = ancillas[gen() % ancillas.size()];
            touched.insert(anc);
            LogicalEdit edit;
            edit.ancilla = anc;
            if (gen() % 2) {
                edit.kind = EditKind::stabilizer_off_flux_mask;
            } else {
                edit.kind = EditKind::remove_data_from_check;
                edit.arm = all_arms[gen() % 4];
            }
            table = apply_edit(table, fx.fabric, edit);
        }
        DetuningPlan plan = masks_to_sequences(table, fx.ladder, fx.fabric);
        INFO("trial " << trial);
        CHECK(full_cycle_check(fx.fabric, fx.ladder, plan).summary.violations == 0);
        // Pairs not touching an edited ancilla keep their realized CZs.
        for (int s = 0; s < 14; ++s) {
            PairSet base_rest, plan_rest;
            for (const auto& c : base.intended[s])
                if (!touched.count(c.first) && !touched.count(c.second))
                    base_rest.insert(c);
            for (const auto& c : plan.intended[s])
                if (!touched.count(c.first) && !touched.count(c.second))
                    plan_rest.insert(c);
            CHECK(base_rest == plan_rest);
        }
    }
}

TEST_CASE("random reorder permutations either apply cleanly or throw") {
    Fabric fabric = build_fabric(PatchSpec::torus(8, 8));
    CycleSchedule sched = pipelined_cycle(fabric);
    std::mt19937_64 gen(77);
    std::vector<GridCoord> ancillas = fabric.ancilla_coords();
    int applied = 0, rejected = 0;
    for (int trial = 0; trial < 24; ++trial) {
        LogicalEdit edit;
        edit.kind = EditKind::reorder_gates;
        edit.ancilla = ancillas[gen() % ancillas.size()];
        edit.order = {all_arms.begin(), all_arms.end()};
        for (std::size_t i = edit.order.size(); i > 1; --i)
            std::swap(edit.order[i - 1], edit.order[gen() % i]);
        try {
            CycleSchedule edited = apply_edit(sched, fabric, edit);
            ++applied;
            // Anything that applies must be free of hard conflicts.
            for (const auto& v : validate_ordering(edited, fabric))
                CHECK(v.kind == OrderingViolationKind::pattern);
        } catch (const OrderViolation&) {
            ++rejected;
        }
    }
    CHECK(applied + rejected == 24);
    CHECK(applied > 0);
    CHECK(rejected > 0);
}

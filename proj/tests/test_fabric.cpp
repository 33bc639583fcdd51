#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "surfcycle/fabric.hpp"

using namespace surfcycle;

namespace {

// Symplectic overlap of two plaquettes: number of shared data qubits.
int shared_data(const Plaquette& a, const Plaquette& b) {
    int n = 0;
    for (const auto& [arm, c] : a.arms)
        for (const auto& [arm2, c2] : b.arms) n += (c == c2);
    return n;
}

}  // namespace

TEST_CASE("distance-3 patch is Surface-17") {
    Fabric f = build_fabric(PatchSpec::planar(3));
    CHECK(f.data_count() == 9);
    CHECK(f.ancilla_count() == 8);
    CHECK(f.qubits().size() == 17);

    int w4 = 0, w2 = 0, x_count = 0, z_count = 0;
    for (const auto& p : f.plaquettes()) {
        if (p.weight() == 4) ++w4;
        if (p.weight() == 2) ++w2;
        (p.kind == StabKind::X ? x_count : z_count)++;
    }
    CHECK(w4 == 4);
    CHECK(w2 == 4);
    CHECK(x_count == 4);
    CHECK(z_count == 4);
}

TEST_CASE("distance-3 plaquettes match the enumerated layout") {
    // Expected plaquettes of the standard distance-3 planar patch, enumerated
    // by hand from the role table and per-orientation arm naming.
    Fabric f = build_fabric(PatchSpec::planar(3));

    using ArmMap = std::map<Arm, GridCoord>;
    std::map<GridCoord, std::pair<StabKind, ArmMap>> expected;
    expected[{1, 2}] = {StabKind::X,
                        ArmMap{{Arm::NE, {1, 3}}, {Arm::NW, {0, 2}}, {Arm::SE, {2, 2}}, {Arm::SW, {1, 1}}}};
    expected[{3, 2}] = {StabKind::X,
                        ArmMap{{Arm::NE, {3, 3}}, {Arm::NW, {2, 2}}, {Arm::SE, {4, 2}}, {Arm::SW, {3, 1}}}};
    expected[{2, 1}] = {StabKind::Z,
                        ArmMap{{Arm::NE, {2, 2}}, {Arm::NW, {1, 1}}, {Arm::SE, {3, 1}}, {Arm::SW, {2, 0}}}};
    expected[{2, 3}] = {StabKind::Z,
                        ArmMap{{Arm::NE, {2, 4}}, {Arm::NW, {1, 3}}, {Arm::SE, {3, 3}}, {Arm::SW, {2, 2}}}};
    expected[{1, 0}] = {StabKind::X, ArmMap{{Arm::NE, {1, 1}}, {Arm::SE, {2, 0}}}};
    expected[{3, 4}] = {StabKind::X, ArmMap{{Arm::NW, {2, 4}}, {Arm::SW, {3, 3}}}};
    expected[{0, 3}] = {StabKind::Z, ArmMap{{Arm::SE, {1, 3}}, {Arm::SW, {0, 2}}}};
    expected[{4, 1}] = {StabKind::Z, ArmMap{{Arm::NE, {4, 2}}, {Arm::NW, {3, 1}}}};

    REQUIRE(f.plaquettes().size() == expected.size());
    for (const auto& p : f.plaquettes()) {
        auto it = expected.find(p.ancilla);
        REQUIRE(it != expected.end());
        CHECK(p.kind == it->second.first);
        CHECK(p.arms == it->second.second);
    }
}

TEST_CASE("patch counts follow the distance formulas") {
    for (int d : {3, 5, 7, 9}) {
        Fabric f = build_fabric(PatchSpec::planar(d));
        INFO("d = " << d);
        CHECK(f.data_count() == d * d);
        CHECK(f.ancilla_count() == d * d - 1);
        // Per stabilizer type: 2d(d-1) CZ-hosting couplings; both types together.
        int x_weight = 0, z_weight = 0;
        for (const auto& p : f.plaquettes())
            (p.kind == StabKind::X ? x_weight : z_weight) += p.weight();
        CHECK(x_weight == 2 * d * (d - 1));
        CHECK(z_weight == 2 * d * (d - 1));
        CHECK(static_cast<int>(f.couplings().size()) == 4 * d * (d - 1));
    }
}

TEST_CASE("all plaquettes commute and cover the data") {
    for (int d : {3, 5, 7}) {
        Fabric f = build_fabric(PatchSpec::planar(d));
        INFO("d = " << d);
        for (std::size_t i = 0; i < f.plaquettes().size(); ++i)
            for (std::size_t j = i + 1; j < f.plaquettes().size(); ++j) {
                const auto& a = f.plaquettes()[i];
                const auto& b = f.plaquettes()[j];
                if (a.kind == b.kind) continue;
                CHECK(shared_data(a, b) % 2 == 0);
            }
        // Every data qubit touches 1..2 ancillas of each kind, 2+2 in the bulk.
        for (GridCoord q : f.data_coords()) {
            int x_adj = 0, z_adj = 0;
            for (const auto& p : f.plaquettes())
                for (const auto& [arm, c] : p.arms)
                    if (c == q) (p.kind == StabKind::X ? x_adj : z_adj)++;
            CHECK(x_adj >= 1);
            CHECK(x_adj <= 2);
            CHECK(z_adj >= 1);
            CHECK(z_adj <= 2);
            if (f.coupled_neighbors(q).size() == 4) {
                CHECK(x_adj == 2);
                CHECK(z_adj == 2);
            }
        }
    }
}

TEST_CASE("ancilla kinds form a checkerboard around each data qubit") {
    Fabric f = build_fabric(PatchSpec::planar(5));
    for (GridCoord q : f.data_coords()) {
        auto kind_at = [&](GridCoord c) -> std::optional<StabKind> {
            const Plaquette* p = f.plaquette_at(c);
            if (!p) return std::nullopt;
            return p->kind;
        };
        auto row_a = kind_at({q.row, q.col - 1});
        auto row_b = kind_at({q.row, q.col + 1});
        auto col_a = kind_at({q.row - 1, q.col});
        auto col_b = kind_at({q.row + 1, q.col});
        if (row_a && row_b) CHECK(*row_a == *row_b);
        if (col_a && col_b) CHECK(*col_a == *col_b);
        if ((row_a || row_b) && (col_a || col_b)) {
            StabKind row_kind = row_a ? *row_a : *row_b;
            StabKind col_kind = col_a ? *col_a : *col_b;
            CHECK(row_kind != col_kind);
        }
    }
}

TEST_CASE("role assignment anchors and alternation") {
    CHECK(infinite_role({0, 0}) == QubitRole::D1);
    CHECK(infinite_role({1, 1}) == QubitRole::D2);
    CHECK(infinite_role({2, 2}) == QubitRole::D1);
    CHECK(infinite_role({0, 4}) == QubitRole::D1);
    CHECK(infinite_role({0, 2}) == QubitRole::D3);
    CHECK(infinite_role({1, 3}) == QubitRole::D4);
    CHECK(infinite_role({1, 2}) == QubitRole::X1);
    CHECK(infinite_role({1, 0}) == QubitRole::X2);
    CHECK(infinite_role({0, 1}) == QubitRole::Z1);
    CHECK(infinite_role({0, 3}) == QubitRole::Z2);

    // f1 and f3 data alternate along diagonals; ancillas sit at f2.
    CHECK(frequency_group(infinite_role({4, 0})) == FreqGroup::F1);
    CHECK(frequency_group(infinite_role({2, 0})) == FreqGroup::F3);
    CHECK(frequency_group(infinite_role({2, 1})) == FreqGroup::F2);

    // Translation invariance with period 4 in rows and cols.
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            GridCoord base{r, c};
            CHECK(infinite_role(base) == infinite_role({r + 4, c}));
            CHECK(infinite_role(base) == infinite_role({r, c + 4}));
            CHECK(infinite_role(base) == infinite_role({r - 4, c - 4}));
        }
}

TEST_CASE("role_of respects the patch boundary") {
    Fabric f = build_fabric(PatchSpec::planar(3));
    CHECK(f.role_of({2, 2}) == QubitRole::D1);
    CHECK(f.role_of({0, 2}) == QubitRole::D3);
    CHECK_THROWS_AS(f.role_of({0, 0}), OutOfPatch);
    CHECK_THROWS_AS(f.role_of({7, 7}), OutOfPatch);
}

TEST_CASE("invalid patch specs are rejected") {
    CHECK_THROWS_AS(build_fabric(PatchSpec::planar(2)), InvalidPatch);
    CHECK_THROWS_AS(build_fabric(PatchSpec::planar(1)), InvalidPatch);
    CHECK_THROWS_AS(build_fabric(PatchSpec::planar(4)), InvalidPatch);
    CHECK_THROWS_AS(build_fabric(PatchSpec::torus(0, 4)), InvalidPatch);
    CHECK_THROWS_AS(build_fabric(PatchSpec::torus(4, 6)), InvalidPatch);
    CHECK_THROWS_AS(build_fabric(PatchSpec::torus(2, 2)), InvalidPatch);
}

TEST_CASE("torus fabric has no boundary") {
    Fabric f = build_fabric(PatchSpec::torus(4, 4));
    CHECK(f.qubits().size() == 16);
    CHECK(f.data_count() == 8);
    CHECK(f.ancilla_count() == 8);
    CHECK(f.couplings().size() == 32);
    for (const auto& p : f.plaquettes()) CHECK(p.weight() == 4);
    // One unit cell's share: 4 data, 4 ancillas, 16 couplings.
    const int cells = static_cast<int>(f.qubits().size()) / 8;
    CHECK(cells == 2);
    CHECK(f.data_count() / cells == 4);
    CHECK(f.ancilla_count() / cells == 4);
    CHECK(static_cast<int>(f.couplings().size()) / cells == 16);
}

TEST_CASE("unit cell census: 9 internal, 14 boundary CZs") {
    Fabric f = build_fabric(PatchSpec::torus(8, 8));
    int anchors = 0;
    for (const auto& [c, role] : f.qubits()) {
        if (role != QubitRole::D1) continue;
        ++anchors;
        CellCensus census = unit_cell_census(f, c);
        CHECK(census.internal_cz == 9);
        CHECK(census.boundary_cz == 14);
        // Double-counting identity: 16 ancilla-incident + 16 data-incident
        // minus the internal CZs (counted twice) equals the 23 CZs touching
        // the cell.
        CHECK(16 + 16 - census.internal_cz == census.internal_cz + census.boundary_cz);
        CHECK(census.internal_cz + census.boundary_cz == 23);
    }
    CHECK(anchors == 8);  // one D1 per cell, 8 cells on an 8x8 torus

    CHECK_THROWS_AS(unit_cell_census(f, GridCoord{0, 2}), MisalignedAnchor);
    Fabric planar = build_fabric(PatchSpec::planar(3));
    CHECK_THROWS_AS(unit_cell_census(planar, GridCoord{0, 0}), MisalignedAnchor);
}

TEST_CASE("unit cell contains one qubit of each role") {
    Fabric f = build_fabric(PatchSpec::torus(8, 8));
    for (const auto& [anchor, role] : f.qubits()) {
        if (role != QubitRole::D1) continue;
        std::set<QubitRole> roles;
        for (GridCoord s : unit_cell_sites(anchor)) roles.insert(f.role_of(s));
        CHECK(roles.size() == 8);
    }
}

TEST_CASE("couplings join data to ancilla at Manhattan distance 1") {
    for (auto spec : {PatchSpec::planar(5), PatchSpec::torus(4, 8)}) {
        Fabric f = build_fabric(spec);
        for (const auto& [a, b] : f.couplings()) {
            const bool a_data = f.is_data(a);
            CHECK(a_data != f.is_data(b));
            if (!f.is_torus()) {
                CHECK(std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1);
            }
        }
        // Interior ancillas have 4 data neighbors, boundary ancillas 2.
        for (const auto& p : f.plaquettes()) {
            CHECK((p.weight() == 4 || p.weight() == 2));
            CHECK(f.coupled_neighbors(p.ancilla).size() == static_cast<std::size_t>(p.weight()));
        }
    }
}

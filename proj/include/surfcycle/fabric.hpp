#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Surface-code fabric construction from the repeating 8-qubit unit cell.
// The lattice is an integer grid: data qubits sit on even-parity sites,
// ancillas on odd-parity sites, and every coupling joins grid neighbors.

namespace surfcycle {

struct GridCoord {
    int row = 0;
    int col = 0;
    auto operator<=>(const GridCoord&) const = default;
};

enum class QubitRole { D1, D2, D3, D4, X1, X2, Z1, Z2 };
enum class StabKind { X, Z };
enum class Arm { NE, NW, SE, SW };
enum class FreqGroup { F1, F2, F3 };

struct InvalidPatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfPatch : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct MisalignedAnchor : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string role_name(QubitRole r) {
    switch (r) {
        case QubitRole::D1: return "D1";
        case QubitRole::D2: return "D2";
        case QubitRole::D3: return "D3";
        case QubitRole::D4: return "D4";
        case QubitRole::X1: return "X1";
        case QubitRole::X2: return "X2";
        case QubitRole::Z1: return "Z1";
        case QubitRole::Z2: return "Z2";
    }
    return "?";
}

inline std::string arm_name(Arm a) {
    switch (a) {
        case Arm::NE: return "NE";
        case Arm::NW: return "NW";
        case Arm::SE: return "SE";
        case Arm::SW: return "SW";
    }
    return "?";
}

inline std::optional<Arm> arm_from_name(const std::string& s) {
    if (s == "NE") return Arm::NE;
    if (s == "NW") return Arm::NW;
    if (s == "SE") return Arm::SE;
    if (s == "SW") return Arm::SW;
    return std::nullopt;
}

constexpr std::array<Arm, 4> all_arms{Arm::NE, Arm::NW, Arm::SE, Arm::SW};

namespace detail {
inline int mod4(int v) { return ((v % 4) + 4) % 4; }
inline int mod2(int v) { return ((v % 2) + 2) % 2; }
}  // namespace detail

inline bool is_data_site(GridCoord c) { return detail::mod2(c.row + c.col) == 0; }
inline bool is_ancilla_site(GridCoord c) { return !is_data_site(c); }

inline bool is_data_role(QubitRole r) {
    return r == QubitRole::D1 || r == QubitRole::D2 || r == QubitRole::D3 ||
           r == QubitRole::D4;
}

inline StabKind stab_kind_of(QubitRole r) {
    return (r == QubitRole::X1 || r == QubitRole::X2) ? StabKind::X : StabKind::Z;
}

inline FreqGroup frequency_group(QubitRole r) {
    switch (r) {
        case QubitRole::D1:
        case QubitRole::D2: return FreqGroup::F1;
        case QubitRole::D3:
        case QubitRole::D4: return FreqGroup::F3;
        default: return FreqGroup::F2;
    }
}

// Role of a site in the infinite unit-cell tiling. Data qubits alternate
// frequency group along grid diagonals: f1 on (row - col) = 0 mod 4, f3 on
// 2 mod 4, matching the alternating data rows of the tilted lattice
// drawing. X ancillas live on odd rows, Z ancillas on even rows, and the
// D1/D2 (X1/X2, ...) split repeats with the 8-qubit cell, i.e. with period
// 4 along rows and columns.
inline QubitRole infinite_role(GridCoord c) {
    using detail::mod2;
    using detail::mod4;
    const int diag = mod4(c.row - c.col);
    if (is_data_site(c)) {
        const int sum = mod4(c.row + c.col);
        if (diag == 0) return sum == 0 ? QubitRole::D1 : QubitRole::D2;
        return sum == 2 ? QubitRole::D3 : QubitRole::D4;
    }
    if (mod2(c.row) == 1) return diag == 3 ? QubitRole::X1 : QubitRole::X2;
    return diag == 3 ? QubitRole::Z1 : QubitRole::Z2;
}

// Arm naming of a plaquette: one fixed bijection between the four grid
// neighbors and the compass labels, uniform across the fabric. With the
// diagonal frequency pattern every ancilla's two same-group arms share a
// name pair ({NE,NW} or {SE,SW}), which is what makes the per-plaquette
// gate order NE-NW-SE-SW (X) / NE-SE-NW-SW (Z) reproduce the eight
// per-role detuning sequences.
inline std::array<std::pair<Arm, GridCoord>, 4> arm_targets(GridCoord anc) {
    const int r = anc.row, c = anc.col;
    return {{{Arm::NE, GridCoord{r, c + 1}},
             {Arm::NW, GridCoord{r - 1, c}},
             {Arm::SE, GridCoord{r + 1, c}},
             {Arm::SW, GridCoord{r, c - 1}}}};
}

// Interaction slot (1..8) hosting the CZ of a given arm.
inline int cz_slot(StabKind kind, Arm arm) {
    if (kind == StabKind::X) {
        switch (arm) {
            case Arm::NE: return 1;
            case Arm::NW: return 2;
            case Arm::SE: return 3;
            case Arm::SW: return 4;
        }
    }
    switch (arm) {
        case Arm::NE: return 5;
        case Arm::SE: return 6;
        case Arm::NW: return 7;
        case Arm::SW: return 8;
    }
    return 0;
}

struct Plaquette {
    GridCoord ancilla;
    StabKind kind = StabKind::X;
    std::map<Arm, GridCoord> arms;  // present arms only

    int weight() const { return static_cast<int>(arms.size()); }
};

struct PatchSpec {
    enum class Kind { planar, torus };
    Kind kind = Kind::planar;
    int distance = 0;  // planar
    int rows = 0;      // torus
    int cols = 0;

    static PatchSpec planar(int d) { return {Kind::planar, d, 0, 0}; }
    static PatchSpec torus(int rows, int cols) { return {Kind::torus, 0, rows, cols}; }
};

using Coupling = std::pair<GridCoord, GridCoord>;

inline Coupling make_coupling(GridCoord a, GridCoord b) {
    return a <= b ? Coupling{a, b} : Coupling{b, a};
}

class Fabric {
public:
    Fabric(PatchSpec spec, std::map<GridCoord, QubitRole> qubits,
           std::vector<Plaquette> plaquettes)
        : spec_(spec), qubits_(std::move(qubits)), plaquettes_(std::move(plaquettes)) {
        for (std::size_t i = 0; i < plaquettes_.size(); ++i) {
            plaq_index_[plaquettes_[i].ancilla] = i;
            for (const auto& [arm, d] : plaquettes_[i].arms) {
                couplings_.insert(make_coupling(plaquettes_[i].ancilla, d));
            }
        }
    }

    const PatchSpec& patch() const { return spec_; }
    const std::map<GridCoord, QubitRole>& qubits() const { return qubits_; }
    const std::vector<Plaquette>& plaquettes() const { return plaquettes_; }
    const std::set<Coupling>& couplings() const { return couplings_; }

    bool is_torus() const { return spec_.kind == PatchSpec::Kind::torus; }

    GridCoord wrap(GridCoord c) const {
        if (!is_torus()) return c;
        auto m = [](int v, int n) { return ((v % n) + n) % n; };
        return {m(c.row, spec_.rows), m(c.col, spec_.cols)};
    }

    bool contains(GridCoord c) const { return qubits_.count(wrap(c)) != 0; }

    QubitRole role_of(GridCoord c) const {
        auto it = qubits_.find(wrap(c));
        if (it == qubits_.end())
            throw OutOfPatch("no qubit at (" + std::to_string(c.row) + "," +
                             std::to_string(c.col) + ")");
        return it->second;
    }

    bool is_data(GridCoord c) const { return is_data_role(role_of(c)); }
    bool is_ancilla(GridCoord c) const { return !is_data(c); }

    const Plaquette* plaquette_at(GridCoord anc) const {
        auto it = plaq_index_.find(wrap(anc));
        return it == plaq_index_.end() ? nullptr : &plaquettes_[it->second];
    }

    std::vector<GridCoord> coupled_neighbors(GridCoord q) const {
        q = wrap(q);
        std::vector<GridCoord> out;
        for (const auto& [a, b] : couplings_) {
            if (a == q) out.push_back(b);
            if (b == q) out.push_back(a);
        }
        return out;
    }

    int data_count() const {
        int n = 0;
        for (const auto& [c, r] : qubits_) n += is_data_role(r);
        return n;
    }
    int ancilla_count() const { return static_cast<int>(qubits_.size()) - data_count(); }

    std::vector<GridCoord> data_coords() const {
        std::vector<GridCoord> out;
        for (const auto& [c, r] : qubits_)
            if (is_data_role(r)) out.push_back(c);
        return out;
    }
    std::vector<GridCoord> ancilla_coords() const {
        std::vector<GridCoord> out;
        for (const auto& [c, r] : qubits_)
            if (!is_data_role(r)) out.push_back(c);
        return out;
    }

private:
    PatchSpec spec_;
    std::map<GridCoord, QubitRole> qubits_;
    std::vector<Plaquette> plaquettes_;
    std::map<GridCoord, std::size_t> plaq_index_;
    std::set<Coupling> couplings_;
};

namespace detail {

inline Fabric build_planar(int d) {
    if (d < 3 || d % 2 == 0) throw InvalidPatch("planar distance must be odd and >= 3");
    std::set<GridCoord> data;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) data.insert({a + b, (d - 1) + a - b});

    std::map<GridCoord, QubitRole> qubits;
    for (GridCoord c : data) qubits[c] = infinite_role(c);

    auto data_neighbors = [&](GridCoord anc) {
        std::vector<GridCoord> out;
        for (GridCoord n : {GridCoord{anc.row - 1, anc.col}, GridCoord{anc.row + 1, anc.col},
                            GridCoord{anc.row, anc.col - 1}, GridCoord{anc.row, anc.col + 1}})
            if (data.count(n)) out.push_back(n);
        return out;
    };

    // Candidate ancilla sites: odd-parity neighbors of the data diamond.
    std::set<GridCoord> candidates;
    for (GridCoord q : data)
        for (GridCoord n : {GridCoord{q.row - 1, q.col}, GridCoord{q.row + 1, q.col},
                            GridCoord{q.row, q.col - 1}, GridCoord{q.row, q.col + 1}})
            candidates.insert(n);

    std::vector<Plaquette> plaquettes;
    for (GridCoord anc : candidates) {
        auto nbrs = data_neighbors(anc);
        const bool x_kind = mod2(anc.row) == 1;
        bool keep = false;
        if (nbrs.size() == 4) {
            keep = true;  // bulk plaquette
        } else if (nbrs.size() == 2) {
            // Weight-2 checks alternate around the boundary: X-type bumps on
            // the NW/SE diamond sides, Z-type on the NE/SW sides.
            const int r = anc.row, c = anc.col;
            if (r + c == d - 2 && x_kind) keep = true;          // top-left side
            if (r + c == 3 * d - 2 && x_kind) keep = true;      // bottom-right side
            if (c - r == d && !x_kind) keep = true;             // top-right side
            if (r - c == d && !x_kind) keep = true;             // bottom-left side
        }
        if (!keep) continue;
        Plaquette p;
        p.ancilla = anc;
        p.kind = x_kind ? StabKind::X : StabKind::Z;
        for (const auto& [arm, target] : arm_targets(anc))
            if (data.count(target)) p.arms[arm] = target;
        plaquettes.push_back(p);
        qubits[anc] = infinite_role(anc);
    }

    std::sort(plaquettes.begin(), plaquettes.end(),
              [](const Plaquette& a, const Plaquette& b) { return a.ancilla < b.ancilla; });
    return Fabric(PatchSpec::planar(d), std::move(qubits), std::move(plaquettes));
}

inline Fabric build_torus(int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw InvalidPatch("torus dimensions must be positive");
    if (rows % 4 != 0 || cols % 4 != 0)
        throw InvalidPatch("torus dimensions must be multiples of 4 (whole unit cells)");
    std::map<GridCoord, QubitRole> qubits;
    std::vector<Plaquette> plaquettes;
    auto wrap = [&](GridCoord c) {
        return GridCoord{((c.row % rows) + rows) % rows, ((c.col % cols) + cols) % cols};
    };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            GridCoord site{r, c};
            qubits[site] = infinite_role(site);
            if (!is_ancilla_site(site)) continue;
            Plaquette p;
            p.ancilla = site;
            p.kind = mod2(r) == 1 ? StabKind::X : StabKind::Z;
            for (const auto& [arm, target] : arm_targets(site)) p.arms[arm] = wrap(target);
            plaquettes.push_back(p);
        }
    return Fabric(PatchSpec::torus(rows, cols), std::move(qubits), std::move(plaquettes));
}

}  // namespace detail

inline Fabric build_fabric(const PatchSpec& spec) {
    if (spec.kind == PatchSpec::Kind::planar) return detail::build_planar(spec.distance);
    return detail::build_torus(spec.rows, spec.cols);
}

// The 8-qubit unit cell anchored at a D1 site: a diamond containing one
// qubit of each role. Cells tile the plane with the oblique lattice
// generated by (2,2) and (2,-2).
inline std::array<GridCoord, 8> unit_cell_sites(GridCoord anchor) {
    const int r = anchor.row, c = anchor.col;
    return {GridCoord{r, c},          GridCoord{r + 1, c - 1}, GridCoord{r + 1, c},
            GridCoord{r + 1, c + 1},  GridCoord{r + 2, c - 1}, GridCoord{r + 2, c},
            GridCoord{r + 2, c + 1},  GridCoord{r + 3, c}};
}

struct CellCensus {
    int internal_cz = 0;  // both endpoints inside the cell
    int boundary_cz = 0;  // one endpoint shared with a neighboring cell
};

inline CellCensus unit_cell_census(const Fabric& fabric, GridCoord anchor) {
    if (!fabric.is_torus())
        throw MisalignedAnchor("unit-cell census requires a torus fabric");
    if (fabric.patch().rows < 8)
        throw MisalignedAnchor("cell spans 4 rows and wraps onto itself; need rows >= 8");
    anchor = fabric.wrap(anchor);
    if (infinite_role(anchor) != QubitRole::D1)
        throw MisalignedAnchor("cell anchor must be a D1 site");
    std::set<GridCoord> cell;
    for (GridCoord s : unit_cell_sites(anchor)) cell.insert(fabric.wrap(s));
    CellCensus out;
    for (const auto& [a, b] : fabric.couplings()) {
        const int inside = static_cast<int>(cell.count(a)) + static_cast<int>(cell.count(b));
        if (inside == 2) ++out.internal_cz;
        else if (inside == 1) ++out.boundary_cz;
    }
    return out;
}

}  // namespace surfcycle

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfcycle/cliffsim.hpp"
#include "surfcycle/fabric.hpp"
#include "surfcycle/freqplan.hpp"
#include "surfcycle/pulsemask.hpp"
#include "surfcycle/schedule.hpp"

// File-format exports: JSON for every artifact, CSV for mask tables, SVG
// lattice rendering, and the ASCII timing diagram.

namespace surfcycle {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

inline json to_json(GridCoord c) { return json::array({c.row, c.col}); }

inline json to_json(const PatchSpec& spec) {
    if (spec.kind == PatchSpec::Kind::planar)
        return {{"kind", "planar"}, {"distance", spec.distance}};
    return {{"kind", "torus"}, {"rows", spec.rows}, {"cols", spec.cols}};
}

inline json to_json(const Fabric& fabric) {
    json qubits = json::array();
    for (const auto& [c, role] : fabric.qubits())
        qubits.push_back({{"row", c.row}, {"col", c.col}, {"role", role_name(role)}});
    json couplings = json::array();
    for (const auto& [a, b] : fabric.couplings())
        couplings.push_back(json::array({to_json(a), to_json(b)}));
    json plaquettes = json::array();
    for (const auto& p : fabric.plaquettes()) {
        json arms = json::object();
        for (const auto& [arm, d] : p.arms) arms[arm_name(arm)] = to_json(d);
        plaquettes.push_back({{"ancilla", to_json(p.ancilla)},
                              {"kind", p.kind == StabKind::X ? "X" : "Z"},
                              {"arms", arms}});
    }
    return {{"patch", to_json(fabric.patch())},
            {"qubits", qubits},
            {"couplings", couplings},
            {"plaquettes", plaquettes}};
}

inline json to_json(const FrequencyLadder& l) {
    return {{"f1_ghz", l.f1},           {"f1_int_ghz", l.f1_int},
            {"f2_ghz", l.f2},           {"f2_park_ghz", l.f2_park},
            {"f2_int_ghz", l.f2_int},   {"f3_ghz", l.f3},
            {"f3_park_ghz", l.f3_park}, {"delta_f_ghz", l.delta_f},
            {"alpha_ghz", l.alpha},
            {"arrangement", l.arrangement == Arrangement::standard ? "standard" : "inverted"}};
}

inline json to_json(const CycleSchedule& s) {
    json slots = json::array();
    for (std::size_t i = 0; i < s.slots.size(); ++i) {
        json gates = json::array();
        for (const auto& g : s.gates) {
            if (g.slot != static_cast<int>(i)) continue;
            json jg = {{"kind", gate_kind_name(g.kind)}, {"q", to_json(g.q0)}};
            if (g.q1) jg["q2"] = to_json(*g.q1);
            gates.push_back(jg);
        }
        const char* kind = "single_qubit";
        switch (s.slots[i].kind) {
            case SlotKind::two_qubit: kind = "two_qubit"; break;
            case SlotKind::flex: kind = "flex"; break;
            case SlotKind::readout: kind = "readout"; break;
            default: break;
        }
        slots.push_back({{"id", s.slots[i].id}, {"kind", kind}, {"gates", gates}});
    }
    return {{"mode", s.mode == ScheduleMode::pipelined ? "pipelined" : "parallel_s17"},
            {"patch", to_json(s.patch)},
            {"slots", slots}};
}

inline json to_json(const InteractionZoneReport& r) {
    return {{"pair", json::array({to_json(r.pair.first), to_json(r.pair.second)})},
            {"context", r.context},
            {"zone", zone_kind_name(r.zone_kind)},
            {"status", zone_status_name(r.status)},
            {"margin_ghz", r.margin_ghz}};
}

inline json masks_to_json(const MaskTable& table, const Fabric& fabric) {
    json out = json::array();
    for (const auto& [c, m] : table.entries) {
        json slots = json::object();
        for (int k = 1; k <= 8; ++k)
            if (m.defined[k]) slots[std::to_string(k)] = m.on[k];
        out.push_back({{"row", c.row},
                       {"col", c.col},
                       {"role", role_name(fabric.role_of(c))},
                       {"primitive", primitive_name(m.primitive)},
                       {"slots", slots}});
    }
    return out;
}

inline std::string masks_to_csv(const MaskTable& table, const Fabric& fabric) {
    std::ostringstream out;
    out << "row,col,role,slot,primitive,bit\n";
    for (const auto& [c, m] : table.entries)
        for (int k = 1; k <= 8; ++k) {
            if (!m.defined[k]) continue;
            out << c.row << ',' << c.col << ',' << role_name(fabric.role_of(c)) << ',' << k
                << ',' << primitive_name(m.primitive) << ',' << (m.on[k] ? 1 : 0) << '\n';
        }
    return out.str();
}

inline json to_json(const SyndromeRecord& rec) {
    auto coord_map = [](const std::map<GridCoord, int>& m) {
        json out = json::object();
        for (const auto& [c, v] : m)
            out[std::to_string(c.row) + "," + std::to_string(c.col)] = v;
        return out;
    };
    return {{"cycle", rec.cycle},
            {"outcomes", coord_map(rec.outcomes)},
            {"syndromes", coord_map(rec.syndromes)}};
}

// Lattice rendering with the conventional colors: red/pink data for the f1
// and f3 groups, blue X ancillas, green Z ancillas.
inline std::string fabric_to_svg(const Fabric& fabric) {
    const int cell = 48, margin = 40, radius = 14;
    int max_row = 0, max_col = 0;
    for (const auto& [c, r] : fabric.qubits()) {
        max_row = std::max(max_row, c.row);
        max_col = std::max(max_col, c.col);
    }
    auto x = [&](GridCoord c) { return margin + c.col * cell; };
    auto y = [&](GridCoord c) { return margin + c.row * cell; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << 2 * margin + max_col * cell << "\" height=\"" << 2 * margin + max_row * cell
        << "\">\n";
    for (const auto& [a, b] : fabric.couplings()) {
        // Skip wrapped torus couplings in the drawing.
        if (std::abs(a.row - b.row) + std::abs(a.col - b.col) != 1) continue;
        svg << "  <line x1=\"" << x(a) << "\" y1=\"" << y(a) << "\" x2=\"" << x(b)
            << "\" y2=\"" << y(b) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (const auto& [c, role] : fabric.qubits()) {
        const char* fill = "#d62728";  // f1 data: red
        if (frequency_group(role) == FreqGroup::F3) fill = "#ff9896";  // f3 data: pink
        else if (!is_data_role(role))
            fill = stab_kind_of(role) == StabKind::X ? "#1f77b4" : "#2ca02c";
        svg << "  <circle cx=\"" << x(c) << "\" cy=\"" << y(c) << "\" r=\"" << radius
            << "\" fill=\"" << fill << "\"/>\n"
            << "  <text x=\"" << x(c) << "\" y=\"" << y(c) + 4
            << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"white\">"
            << role_name(role) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// One row per qubit, one column per slot. Measurement windows are drawn as
// M~~ continuations over the slots they span.
inline std::string ascii_timing_diagram(const CycleSchedule& s, const Fabric& fabric) {
    const int width = 5;
    std::ostringstream out;
    auto pad = [&](std::string v) {
        v.resize(width, ' ');
        return v;
    };
    out << pad("qubit") << "|";
    for (const auto& slot : s.slots) out << pad(" " + slot.id);
    out << "\n";

    std::map<GridCoord, std::vector<std::string>> rows;
    for (const auto& [c, role] : fabric.qubits())
        rows[c] = std::vector<std::string>(s.slots.size(), ".");
    for (const auto& g : s.gates) {
        std::string name = gate_kind_name(g.kind);
        if (g.kind == GateKind::Idle) name = "-";
        rows[g.q0][g.slot] = name;
        if (g.q1) rows[*g.q1][g.slot] = name;
    }
    // Measurement spans: pipelined X ancillas read out over D..F, Z over A..C.
    if (s.mode == ScheduleMode::pipelined) {
        for (const auto& p : fabric.plaquettes()) {
            const int from = p.kind == StabKind::X ? s.slot_index("D") : s.slot_index("A");
            const int to = p.kind == StabKind::X ? s.slot_index("F") : s.slot_index("C");
            for (int i = from + 1; i <= to; ++i) rows[p.ancilla][i] = "~";
        }
    }
    for (const auto& [c, cells] : rows) {
        out << pad(std::to_string(c.row) + "," + std::to_string(c.col)) << "|";
        for (const auto& cell : cells) out << pad(" " + cell);
        out << "\n";
    }
    return out.str();
}

}  // namespace surfcycle

#pragma once

#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfcycle/cliffsim.hpp"
#include "surfcycle/export.hpp"
#include "surfcycle/fabric.hpp"
#include "surfcycle/freqplan.hpp"
#include "surfcycle/pulsemask.hpp"
#include "surfcycle/schedule.hpp"

// Command-line front end: compile-check-simulate pipelines with file-based
// configuration and reproducible, config-stamped outputs.
//
// Exit codes: 0 success, 1 zone-check violations, 2 usage or config errors.

namespace surfcycle::cli {

struct RunConfig {
    int distance = 3;
    std::string torus;  // "RxC"; empty selects the planar patch
    double f2_ghz = 6.0;
    double delta_f_ghz = 0.4;
    double alpha_ghz = -0.3;
    double guard_ghz = 0.050;
    std::string arrangement = "standard";
    std::string variant = "standard";
    double tau_1q_ns = 20.0;
    double tau_2q_ns = 40.0;
    double tau_ro_ns = 500.0;
    std::uint64_t seed = 0;
    int cycles = 5;
    int sweep_seeds = 1;
    std::string edits_path;
    std::vector<std::string> injections;
    std::string ancilla_one;  // "r,c"
    std::string mode = "pipelined";
    std::string format = "json";  // masks: json|csv
    std::string out_path;         // empty: stdout
    std::string svg_path;
    bool ascii = false;
    bool full_report = false;
};

namespace detail {

inline PatchSpec patch_spec(const RunConfig& cfg) {
    if (cfg.torus.empty()) return PatchSpec::planar(cfg.distance);
    const auto x = cfg.torus.find('x');
    if (x == std::string::npos)
        throw InvalidPatch("torus spec must be ROWSxCOLS, e.g. 4x4");
    return PatchSpec::torus(std::stoi(cfg.torus.substr(0, x)),
                            std::stoi(cfg.torus.substr(x + 1)));
}

inline Arrangement arrangement(const RunConfig& cfg) {
    if (cfg.arrangement == "standard") return Arrangement::standard;
    if (cfg.arrangement == "inverted") return Arrangement::inverted;
    throw std::invalid_argument("arrangement must be standard or inverted");
}

inline LadderVariant variant(const RunConfig& cfg) {
    if (cfg.variant == "standard") return LadderVariant::standard;
    if (cfg.variant == "break_f1_f3") return LadderVariant::break_f1_f3;
    if (cfg.variant == "break_all") return LadderVariant::break_all;
    throw std::invalid_argument("variant must be standard, break_f1_f3, or break_all");
}

inline Durations durations(const RunConfig& cfg) {
    Durations d{cfg.tau_1q_ns, cfg.tau_2q_ns, cfg.tau_ro_ns};
    if (d.tau_1q_ns <= 0 || d.tau_2q_ns <= 0 || d.tau_ro_ns <= 0)
        throw std::invalid_argument("durations must be positive");
    return d;
}

inline GridCoord parse_coord(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("coordinate must be ROW,COL");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

// Injection spec: PAULI@ROW,COL@cycleN (applied between cycles N and N+1).
inline ErrorInjection parse_injection(const std::string& spec) {
    const auto first = spec.find('@');
    const auto second = spec.find('@', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("injection must be P@ROW,COL@cycleN: " + spec);
    const auto pauli = pauli_from_name(spec.substr(0, first));
    if (!pauli) throw std::invalid_argument("unknown Pauli in injection: " + spec);
    const GridCoord target = parse_coord(spec.substr(first + 1, second - first - 1));
    const std::string cycle = spec.substr(second + 1);
    if (cycle.rfind("cycle", 0) != 0)
        throw std::invalid_argument("injection cycle must look like cycle2: " + spec);
    return ErrorInjection::after_cycle(*pauli, target, std::stoi(cycle.substr(5)));
}

inline std::vector<LogicalEdit> load_edits(const std::string& path) {
    std::vector<LogicalEdit> out;
    if (path.empty()) return out;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open edits file " + path);
    json doc = json::parse(in);
    for (const auto& e : doc) {
        LogicalEdit edit;
        const std::string kind = e.at("kind");
        if (kind == "stabilizer_off_h_mask") edit.kind = EditKind::stabilizer_off_h_mask;
        else if (kind == "stabilizer_off_flux_mask")
            edit.kind = EditKind::stabilizer_off_flux_mask;
        else if (kind == "remove_data_from_check")
            edit.kind = EditKind::remove_data_from_check;
        else if (kind == "reorder_gates") edit.kind = EditKind::reorder_gates;
        else throw std::invalid_argument("unknown edit kind " + kind);
        edit.ancilla = {e.at("ancilla").at(0).get<int>(), e.at("ancilla").at(1).get<int>()};
        if (e.contains("arm")) {
            auto arm = arm_from_name(e.at("arm"));
            if (!arm) throw std::invalid_argument("unknown arm in edit");
            edit.arm = *arm;
        }
        if (e.contains("order"))
            for (const auto& a : e.at("order")) {
                auto arm = arm_from_name(a.get<std::string>());
                if (!arm) throw std::invalid_argument("unknown arm in reorder");
                edit.order.push_back(*arm);
            }
        if (e.contains("cycles")) {
            edit.cycle_from = e.at("cycles").at(0).get<int>();
            edit.cycle_to = e.at("cycles").at(1).get<int>();
        }
        out.push_back(edit);
    }
    return out;
}

// Flat key=value config file mirroring the long flags; '#' starts a comment.
// File values are injected before the explicit flags, which therefore win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::vector<std::string> expanded;
    if (!rest.empty()) expanded.push_back(rest.front());  // subcommand first
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        expanded.push_back("--" + key);
        if (!value.empty()) expanded.push_back(value);
    }
    for (std::size_t i = 1; i < rest.size(); ++i) expanded.push_back(rest[i]);
    return expanded;
}

inline json config_json(const RunConfig& cfg) {
    return {{"distance", cfg.distance},
            {"torus", cfg.torus},
            {"f2_ghz", cfg.f2_ghz},
            {"delta_f_ghz", cfg.delta_f_ghz},
            {"alpha_ghz", cfg.alpha_ghz},
            {"guard_ghz", cfg.guard_ghz},
            {"arrangement", cfg.arrangement},
            {"variant", cfg.variant},
            {"tau_1q_ns", cfg.tau_1q_ns},
            {"tau_2q_ns", cfg.tau_2q_ns},
            {"tau_ro_ns", cfg.tau_ro_ns},
            {"seed", cfg.seed},
            {"cycles", cfg.cycles},
            {"mode", cfg.mode}};
}

inline json stamped(const RunConfig& cfg, json body) {
    body["version"] = kVersion;
    body["config"] = config_json(cfg);
    return body;
}

inline void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out_path);
    if (!file) throw std::invalid_argument("cannot write " + cfg.out_path);
    file << text;
}

}  // namespace detail

inline int cmd_fabric(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Fabric fabric = build_fabric(detail::patch_spec(cfg));
        json doc = detail::stamped(cfg, to_json(fabric));
        if (fabric.is_torus()) {
            // Census numbers are properties of the repeating cell; measure
            // them on a tiling large enough that the cell does not self-wrap.
            const PatchSpec& p = fabric.patch();
            Fabric census_fabric =
                p.rows >= 8 ? fabric : build_fabric(PatchSpec::torus(8, std::max(8, p.cols)));
            GridCoord anchor{0, 0};
            CellCensus census = unit_cell_census(census_fabric, anchor);
            doc["census"] = {{"internal_cz", census.internal_cz},
                             {"boundary_cz", census.boundary_cz}};
            const int cells = static_cast<int>(fabric.qubits().size()) / 8;
            doc["cells"] = cells;
            doc["per_cell"] = {{"data", fabric.data_count() / cells},
                               {"ancillas", fabric.ancilla_count() / cells},
                               {"couplings", static_cast<int>(fabric.couplings().size()) / cells}};
        }
        detail::write_output(cfg, doc.dump(2) + "\n", out);
        if (!cfg.svg_path.empty()) {
            std::ofstream svg(cfg.svg_path);
            if (!svg) throw std::invalid_argument("cannot write " + cfg.svg_path);
            svg << fabric_to_svg(fabric);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_plan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        FrequencyLadder ladder = build_ladder(cfg.f2_ghz, cfg.delta_f_ghz, cfg.alpha_ghz,
                                              detail::arrangement(cfg), cfg.guard_ghz);
        const double xi = xi_from_tau_2q(cfg.tau_2q_ns);
        json doc = detail::stamped(
            cfg, {{"ladder", to_json(ladder)},
                  {"error_model",
                   {{"xi_rad_per_s", xi},
                    {"epsilon_at_delta_f", residual_error(xi, cfg.delta_f_ghz, cfg.tau_1q_ns)},
                    {"delta_f_for_1e-2_ghz", required_detuning(1e-2, xi, cfg.tau_1q_ns)},
                    {"delta_f_for_1e-3_ghz", required_detuning(1e-3, xi, cfg.tau_1q_ns)}}},
                  {"primitives", primitive_count(detail::variant(cfg))}});
        detail::write_output(cfg, doc.dump(2) + "\n", out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_schedule(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Fabric fabric = build_fabric(detail::patch_spec(cfg));
        CycleSchedule sched = cfg.mode == "parallel_s17" ? parallel_cycle_s17(fabric)
                                                         : pipelined_cycle(fabric);
        if (cfg.ascii) {
            detail::write_output(cfg, ascii_timing_diagram(sched, fabric), out);
            return 0;
        }
        json doc = detail::stamped(cfg, to_json(sched));
        doc["cycle_time_ns"] = cycle_time_ns(sched, detail::durations(cfg));
        detail::write_output(cfg, doc.dump(2) + "\n", out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_masks(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Fabric fabric = build_fabric(detail::patch_spec(cfg));
        CycleSchedule sched = pipelined_cycle(fabric);
        MaskTable masks = synthesize_masks(sched, fabric);
        for (const auto& e : detail::load_edits(cfg.edits_path))
            if (is_mask_edit(e.kind)) masks = apply_edit(masks, fabric, e);
        if (cfg.format == "csv") {
            detail::write_output(cfg, masks_to_csv(masks, fabric), out);
        } else {
            json doc = detail::stamped(cfg, {{"masks", masks_to_json(masks, fabric)}});
            detail::write_output(cfg, doc.dump(2) + "\n", out);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

// schedule -> masks -> sequences -> zone checks; exit 0 iff no violations.
inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Fabric fabric = build_fabric(detail::patch_spec(cfg));
        FrequencyLadder ladder = build_ladder(cfg.f2_ghz, cfg.delta_f_ghz, cfg.alpha_ghz,
                                              detail::arrangement(cfg), cfg.guard_ghz);
        json doc;
        CycleCheckResult result;
        if (ladder.arrangement == Arrangement::standard) {
            CycleSchedule sched = pipelined_cycle(fabric);
            MaskTable masks = synthesize_masks(sched, fabric);
            for (const auto& e : detail::load_edits(cfg.edits_path))
                if (is_mask_edit(e.kind)) masks = apply_edit(masks, fabric, e);
            DetuningPlan plan =
                masks_to_sequences(masks, ladder, fabric, detail::variant(cfg));
            result = full_cycle_check(fabric, ladder, plan, cfg.guard_ghz);
            auto canonical = canonical_role_sequences(ladder, detail::variant(cfg));
            std::set<std::array<double, 14>> distinct;
            int data_top = 0;
            for (const auto& [role, seq] : canonical) {
                distinct.insert(seq);
                if (role == QubitRole::D1) data_top = sweetspot_steps(seq);
            }
            doc["primitives"] = primitive_count(detail::variant(cfg));
            doc["distinct_sequences"] = static_cast<int>(distinct.size());
            doc["sweetspot_steps"] = {{"data_top_of_8", data_top}, {"standard_reference", 4}};
        } else {
            DetuningPlan plan = inverted_plan(fabric, ladder);
            result = full_cycle_check(fabric, ladder, plan, cfg.guard_ghz);
            int data_top = 0;
            for (const auto& [c, role] : fabric.qubits())
                if (role == QubitRole::D1) {
                    data_top = sweetspot_steps(plan.levels.at(c));
                    break;
                }
            doc["sweetspot_steps"] = {{"data_top_of_8", data_top}, {"standard_reference", 4}};
        }
        doc["ladder"] = to_json(ladder);
        doc["summary"] = {{"violations", result.summary.violations},
                          {"min_margin_ghz", result.summary.min_margin_ghz},
                          {"fourth_order_same_freq_pairs", result.fourth_order_same_freq}};
        json violations = json::array();
        for (const auto& r : result.reports)
            if (r.status == ZoneStatus::violation || cfg.full_report)
                violations.push_back(to_json(r));
        doc[cfg.full_report ? "reports" : "violations"] = violations;
        detail::write_output(cfg, detail::stamped(cfg, doc).dump(2) + "\n", out);
        return result.summary.violations == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Fabric fabric = build_fabric(detail::patch_spec(cfg));
        FrequencyLadder ladder = build_ladder(cfg.f2_ghz, cfg.delta_f_ghz, cfg.alpha_ghz,
                                              Arrangement::standard, cfg.guard_ghz);
        CycleSchedule base = cfg.mode == "parallel_s17" ? parallel_cycle_s17(fabric)
                                                        : pipelined_cycle(fabric);
        MaskTable base_masks = cfg.mode == "parallel_s17" ? MaskTable{}
                                                          : synthesize_masks(base, fabric);
        auto edits = detail::load_edits(cfg.edits_path);

        std::vector<ErrorInjection> injections;
        for (const auto& spec : cfg.injections) injections.push_back(detail::parse_injection(spec));

        RunOptions options;
        if (!cfg.ancilla_one.empty())
            options.ancillas_one.push_back(detail::parse_coord(cfg.ancilla_one));

        // Per-cycle schedule cache honoring cycle-ranged edits.
        std::map<int, CycleSchedule> cache;
        auto schedule_for_cycle = [&](int cycle) -> const CycleSchedule& {
            auto it = cache.find(cycle);
            if (it != cache.end()) return it->second;
            CycleSchedule sched = base;
            if (cfg.mode != "parallel_s17" && !edits.empty()) {
                EditedCycle edited = apply_edits(base, base_masks, fabric, edits, cycle);
                DetuningPlan plan = masks_to_sequences(edited.masks, ladder, fabric);
                sched = masked_schedule(edited.schedule, plan);
            }
            return cache.emplace(cycle, std::move(sched)).first->second;
        };

        std::ostringstream body;
        std::map<std::string, int> flip_counts;
        auto one_seed = [&](std::uint64_t seed) {
            return run_cycles(schedule_for_cycle, fabric, cfg.cycles, injections, seed, options);
        };

        std::vector<std::vector<SyndromeRecord>> runs;
        if (cfg.sweep_seeds > 1) {
            std::vector<std::future<std::vector<SyndromeRecord>>> futures;
            for (int i = 0; i < cfg.sweep_seeds; ++i)
                futures.push_back(std::async(std::launch::async, one_seed, cfg.seed + i));
            for (auto& f : futures) runs.push_back(f.get());
        } else {
            runs.push_back(one_seed(cfg.seed));
        }

        for (int i = 0; i < static_cast<int>(runs.size()); ++i)
            for (const auto& rec : runs[i]) {
                json line = to_json(rec);
                line["seed"] = cfg.seed + i;
                body << line.dump() << "\n";
                for (const auto& [anc, s] : rec.syndromes)
                    if (s) flip_counts[std::to_string(anc.row) + "," +
                                       std::to_string(anc.col)]++;
            }

        json summary = {{"cycles", cfg.cycles},
                        {"seeds", cfg.sweep_seeds},
                        {"flip_counts", flip_counts}};
        // With masked-off basis changes and an ancilla in |1>, report the
        // logical operator the edited cycle applies.
        if (!cfg.ancilla_one.empty()) {
            json reports = json::array();
            for (const auto& e : edits) {
                if (e.kind != EditKind::stabilizer_off_h_mask) continue;
                CycleSchedule edited = apply_edit(base, fabric, e);
                auto check = logical_operator_check(fabric, edited, e.ancilla, cfg.seed + 11);
                json ops = json::object();
                for (const auto& [q, p] : check.expected)
                    ops[std::to_string(q.row) + "," + std::to_string(q.col)] = pauli_name(p);
                reports.push_back({{"ancilla", to_json(e.ancilla)},
                                   {"identity_for_zero", check.identity_for_zero},
                                   {"matches_plaquette", check.matches_plaquette},
                                   {"operator", ops}});
            }
            summary["logical_operator_report"] = reports;
        }
        json tail = detail::stamped(cfg, {{"summary", summary}});
        body << tail.dump() << "\n";
        detail::write_output(cfg, body.str(), out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

// Build the CLI11 application over a shared RunConfig.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"surface-code QEC cycle compiler and verifier"};
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--distance,-d", cfg.distance, "planar code distance (odd, >= 3)");
        sub->add_option("--torus", cfg.torus, "torus dimensions ROWSxCOLS");
        sub->add_option("--f2", cfg.f2_ghz, "ancilla operating frequency [GHz]");
        sub->add_option("--delta-f", cfg.delta_f_ghz, "uniform detuning scale [GHz]");
        sub->add_option("--alpha", cfg.alpha_ghz, "transmon anharmonicity [GHz, negative]");
        sub->add_option("--guard", cfg.guard_ghz, "zone guard band [GHz]");
        sub->add_option("--arrangement", cfg.arrangement, "standard|inverted");
        sub->add_option("--variant", cfg.variant, "standard|break_f1_f3|break_all");
        sub->add_option("--tau-1q", cfg.tau_1q_ns, "single-qubit gate time [ns]");
        sub->add_option("--tau-2q", cfg.tau_2q_ns, "CZ gate time [ns]");
        sub->add_option("--tau-ro", cfg.tau_ro_ns, "readout + depletion time [ns]");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--edits", cfg.edits_path, "JSON edit script");
        sub->add_option("--out,-o", cfg.out_path, "output file (default stdout)");
        return sub;
    };

    auto* fab = add_common(app.add_subcommand("fabric", "build and export a fabric"));
    fab->add_option("--svg", cfg.svg_path, "write an SVG rendering to this path");

    add_common(app.add_subcommand("plan", "frequency ladder and error model"));

    auto* sched = add_common(app.add_subcommand("schedule", "generate a QEC cycle"));
    sched->add_option("--mode", cfg.mode, "pipelined|parallel_s17");
    sched->add_flag("--ascii", cfg.ascii, "print an ASCII timing diagram");

    auto* masks = add_common(app.add_subcommand("masks", "synthesize flux-pulse masks"));
    masks->add_option("--format", cfg.format, "json|csv");

    auto* check = add_common(app.add_subcommand("check", "zone-freedom verification"));
    check->add_flag("--full-report", cfg.full_report, "include every pair classification");

    auto* sim = add_common(app.add_subcommand("simulate", "run QEC cycles"));
    sim->add_option("--cycles", cfg.cycles, "number of QEC cycles");
    sim->add_option("--mode", cfg.mode, "pipelined|parallel_s17");
    sim->add_option("--inject", cfg.injections, "error injection P@ROW,COL@cycleN")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sim->add_option("--sweep-seeds", cfg.sweep_seeds, "run N seeds in parallel");
    sim->add_option("--ancilla-one", cfg.ancilla_one, "prepare ancilla ROW,COL in |1>");

    app.require_subcommand(1);

    try {
        args = detail::expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (app.got_subcommand("fabric")) return cmd_fabric(cfg, out, err);
    if (app.got_subcommand("plan")) return cmd_plan(cfg, out, err);
    if (app.got_subcommand("schedule")) return cmd_schedule(cfg, out, err);
    if (app.got_subcommand("masks")) return cmd_masks(cfg, out, err);
    if (app.got_subcommand("check")) return cmd_check(cfg, out, err);
    if (app.got_subcommand("simulate")) return cmd_simulate(cfg, out, err);
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace surfcycle::cli

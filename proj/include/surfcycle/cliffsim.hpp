#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfcycle/fabric.hpp"
#include "surfcycle/schedule.hpp"

// Stabilizer-tableau simulation of generated schedules with Pauli-error
// injection and Pauli-frame bookkeeping. Serves as the semantic oracle for
// the schedule and mask modules.

namespace surfcycle {

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct InjectionOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct TooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Pauli { X, Y, Z };

inline std::string pauli_name(Pauli p) {
    switch (p) {
        case Pauli::X: return "X";
        case Pauli::Y: return "Y";
        case Pauli::Z: return "Z";
    }
    return "?";
}

inline std::optional<Pauli> pauli_from_name(const std::string& s) {
    if (s == "X") return Pauli::X;
    if (s == "Y") return Pauli::Y;
    if (s == "Z") return Pauli::Z;
    return std::nullopt;
}

namespace detail {

// Deterministic bounded sampling; uniform_int_distribution is not portable
// across standard libraries.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    int bit() { return static_cast<int>((gen() >> 32) & 1u); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen() % n); }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Sparse signed Pauli string with Clifford conjugation, used for symbolic
// observable tracking (independent of the tableau path).

class PauliString {
public:
    PauliString() = default;

    int sign() const { return sign_; }
    bool is_identity() const {
        for (const auto& [q, bits] : ops_)
            if (bits.first || bits.second) return false;
        return true;
    }

    // bits: (x, z); (1,1) is Y.
    void set(GridCoord q, Pauli p) {
        switch (p) {
            case Pauli::X: ops_[q] = {1, 0}; break;
            case Pauli::Y: ops_[q] = {1, 1}; break;
            case Pauli::Z: ops_[q] = {0, 1}; break;
        }
    }

    std::optional<Pauli> at(GridCoord q) const {
        auto it = ops_.find(q);
        if (it == ops_.end()) return std::nullopt;
        const auto [x, z] = it->second;
        if (x && z) return Pauli::Y;
        if (x) return Pauli::X;
        if (z) return Pauli::Z;
        return std::nullopt;
    }

    std::map<GridCoord, Pauli> support() const {
        std::map<GridCoord, Pauli> out;
        for (const auto& [q, bits] : ops_)
            if (auto p = at(q)) out[q] = *p;
        return out;
    }

    // Conjugation by one gate: O <- g O g^dagger (forward) or g^dagger O g
    // (backward). All schedule gates map Pauli strings to +/- Pauli strings.
    void conjugate(const GateOp& g, bool backward) {
        switch (g.kind) {
            case GateKind::H: {
                auto& [x, z] = bits(g.q0);
                if (x && z) sign_ = -sign_;
                std::swap(x, z);
                break;
            }
            case GateKind::PauliX: {
                auto& [x, z] = bits(g.q0);
                (void)x;
                if (z) sign_ = -sign_;
                break;
            }
            case GateKind::PauliZ: {
                auto& [x, z] = bits(g.q0);
                (void)z;
                if (x) sign_ = -sign_;
                break;
            }
            case GateKind::YPlus90:
            case GateKind::YMinus90: {
                const bool plus = (g.kind == GateKind::YPlus90) != backward;
                auto& [x, z] = bits(g.q0);
                // Y+90: X -> -Z, Z -> X; Y-90 is the inverse.
                if (plus ? (x && !z) : (z && !x)) sign_ = -sign_;
                std::swap(x, z);
                break;
            }
            case GateKind::CZ: {
                auto& [xa, za] = bits(g.q0);
                auto& [xb, zb] = bits(*g.q1);
                if (xa && xb && (za ^ zb)) sign_ = -sign_;
                za ^= xb;
                zb ^= xa;
                break;
            }
            case GateKind::Measure:
            case GateKind::Idle:
                break;
        }
    }

    bool commutes_with_z(GridCoord q) const {
        auto it = ops_.find(q);
        return it == ops_.end() || it->second.first == 0;
    }

    bool operator==(const PauliString& o) const {
        return sign_ == o.sign_ && support() == o.support();
    }

private:
    std::pair<int, int>& bits(GridCoord q) { return ops_[q]; }

    std::map<GridCoord, std::pair<int, int>> ops_;
    int sign_ = 1;
};

// ---------------------------------------------------------------------------
// Aaronson-Gottesman tableau

class StabilizerState {
public:
    explicit StabilizerState(int n, std::uint64_t seed = 0)
        : n_(n), rng_(seed), x_(2 * n + 1, std::vector<std::uint8_t>(n, 0)),
          z_(2 * n + 1, std::vector<std::uint8_t>(n, 0)), r_(2 * n + 1, 0) {
        for (int i = 0; i < n; ++i) {
            x_[i][i] = 1;          // destabilizers
            z_[n + i][i] = 1;      // stabilizers: |0...0>
        }
    }

    int num_qubits() const { return n_; }

    void h(int a) {
        check(a);
        for (int i = 0; i < 2 * n_; ++i) {
            r_[i] ^= x_[i][a] & z_[i][a];
            std::swap(x_[i][a], z_[i][a]);
        }
    }
    void s(int a) {
        check(a);
        for (int i = 0; i < 2 * n_; ++i) {
            r_[i] ^= x_[i][a] & z_[i][a];
            z_[i][a] ^= x_[i][a];
        }
    }
    void x(int a) {
        check(a);
        for (int i = 0; i < 2 * n_; ++i) r_[i] ^= z_[i][a];
    }
    void z(int a) {
        check(a);
        for (int i = 0; i < 2 * n_; ++i) r_[i] ^= x_[i][a];
    }
    void y_plus_90(int a) {  // Ry(+pi/2) = H * Z
        z(a);
        h(a);
    }
    void y_minus_90(int a) {  // Ry(-pi/2) = Z * H
        h(a);
        z(a);
    }
    void cnot(int a, int b) {
        check(a);
        check(b);
        for (int i = 0; i < 2 * n_; ++i) {
            r_[i] ^= x_[i][a] & z_[i][b] & (x_[i][b] ^ z_[i][a] ^ 1);
            x_[i][b] ^= x_[i][a];
            z_[i][a] ^= z_[i][b];
        }
    }
    void cz(int a, int b) {
        h(b);
        cnot(a, b);
        h(b);
    }

    // Z-basis measurement; outcomes for anticommuting observables come from
    // the seeded generator.
    int measure_z(int a) {
        check(a);
        int p = -1;
        for (int i = n_; i < 2 * n_; ++i)
            if (x_[i][a]) {
                p = i;
                break;
            }
        if (p >= 0) {
            for (int i = 0; i < 2 * n_; ++i)
                if (i != p && x_[i][a]) rowsum(i, p);
            x_[p - n_] = x_[p];
            z_[p - n_] = z_[p];
            r_[p - n_] = r_[p];
            std::fill(x_[p].begin(), x_[p].end(), 0);
            std::fill(z_[p].begin(), z_[p].end(), 0);
            z_[p][a] = 1;
            r_[p] = static_cast<std::uint8_t>(rng_.bit());
            return r_[p];
        }
        // Deterministic: accumulate into the scratch row.
        const int scratch = 2 * n_;
        std::fill(x_[scratch].begin(), x_[scratch].end(), 0);
        std::fill(z_[scratch].begin(), z_[scratch].end(), 0);
        r_[scratch] = 0;
        for (int i = 0; i < n_; ++i)
            if (x_[i][a]) rowsum(scratch, i + n_);
        return r_[scratch];
    }

    void reseed(std::uint64_t seed) { rng_ = detail::Rng(seed); }

    // Signed stabilizer generators in a canonical (row-reduced) form; two
    // states are equal iff their canonical forms match.
    struct Generator {
        std::vector<std::uint8_t> x, z;
        int sign = 1;
        bool operator==(const Generator&) const = default;
    };

    std::vector<Generator> canonical_stabilizers() const {
        std::vector<std::vector<std::uint8_t>> gx, gz;
        std::vector<std::uint8_t> gr;
        for (int i = n_; i < 2 * n_; ++i) {
            gx.push_back(x_[i]);
            gz.push_back(z_[i]);
            gr.push_back(r_[i]);
        }
        auto mult = [&](int h, int i) {  // row h *= row i
            int phase = 2 * gr[h] + 2 * gr[i];
            for (int j = 0; j < n_; ++j)
                phase += g_phase(gx[i][j], gz[i][j], gx[h][j], gz[h][j]);
            phase = ((phase % 4) + 4) % 4;
            gr[h] = static_cast<std::uint8_t>(phase / 2);
            for (int j = 0; j < n_; ++j) {
                gx[h][j] ^= gx[i][j];
                gz[h][j] ^= gz[i][j];
            }
        };
        std::size_t row = 0;
        for (int pass = 0; pass < 2; ++pass) {
            const auto& bits = pass == 0 ? gx : gz;
            for (int q = 0; q < n_ && row < gx.size(); ++q) {
                std::size_t pivot = row;
                while (pivot < gx.size() && !bits[pivot][q]) ++pivot;
                if (pivot == gx.size()) continue;
                std::swap(gx[row], gx[pivot]);
                std::swap(gz[row], gz[pivot]);
                std::swap(gr[row], gr[pivot]);
                for (std::size_t i = 0; i < gx.size(); ++i)
                    if (i != row && (pass == 0 ? gx[i][q] : gz[i][q])) mult(static_cast<int>(i), static_cast<int>(row));
                ++row;
            }
        }
        std::vector<Generator> out;
        for (std::size_t i = 0; i < gx.size(); ++i)
            out.push_back({gx[i], gz[i], gr[i] ? -1 : 1});
        return out;
    }

    bool same_state(const StabilizerState& other) const {
        return n_ == other.n_ && canonical_stabilizers() == other.canonical_stabilizers();
    }

    // Membership of a signed Pauli in the stabilizer group; returns the sign
    // it carries in the group, if present.
    std::optional<int> group_sign(const std::vector<std::uint8_t>& px,
                                  const std::vector<std::uint8_t>& pz) const {
        auto gens = canonical_stabilizers();
        std::vector<std::uint8_t> qx = px, qz = pz;
        int phase = 0;  // i^phase accumulated while multiplying generators in
        for (const auto& gen : gens) {
            int pivot = -1;
            for (int j = 0; j < n_; ++j)
                if (gen.x[j]) {
                    pivot = j;
                    break;
                }
            bool use = false;
            if (pivot >= 0) {
                use = qx[pivot];
            } else {
                for (int j = 0; j < n_; ++j)
                    if (gen.z[j]) {
                        pivot = j;
                        break;
                    }
                if (pivot >= 0) use = qz[pivot];
            }
            if (!use) continue;
            // q *= gen
            int acc = gen.sign < 0 ? 2 : 0;
            for (int j = 0; j < n_; ++j)
                acc += g_phase(gen.x[j], gen.z[j], qx[j], qz[j]);
            phase = ((phase + acc) % 4 + 4) % 4;
            for (int j = 0; j < n_; ++j) {
                qx[j] ^= gen.x[j];
                qz[j] ^= gen.z[j];
            }
        }
        for (int j = 0; j < n_; ++j)
            if (qx[j] || qz[j]) return std::nullopt;
        if (phase == 0) return 1;
        if (phase == 2) return -1;
        return std::nullopt;  // imaginary phase: not a group element
    }

private:
    void check(int a) const {
        if (a < 0 || a >= n_) throw OutOfRange("qubit index out of range");
    }

    static int g_phase(int x1, int z1, int x2, int z2) {
        if (!x1 && !z1) return 0;
        if (x1 && z1) return z2 - x2;
        if (x1) return z2 * (2 * x2 - 1);
        return x2 * (1 - 2 * z2);
    }

    void rowsum(int h, int i) {
        int phase = 2 * r_[h] + 2 * r_[i];
        for (int j = 0; j < n_; ++j) phase += g_phase(x_[i][j], z_[i][j], x_[h][j], z_[h][j]);
        phase = ((phase % 4) + 4) % 4;
        r_[h] = static_cast<std::uint8_t>(phase / 2);
        for (int j = 0; j < n_; ++j) {
            x_[h][j] ^= x_[i][j];
            z_[h][j] ^= z_[i][j];
        }
    }

    int n_;
    detail::Rng rng_;
    std::vector<std::vector<std::uint8_t>> x_, z_;
    std::vector<std::uint8_t> r_;
};

// ---------------------------------------------------------------------------
// Fabric-indexed simulation

class QubitIndex {
public:
    explicit QubitIndex(const Fabric& fabric) {
        for (const auto& [c, r] : fabric.qubits()) {
            index_[c] = static_cast<int>(coords_.size());
            coords_.push_back(c);
        }
    }
    int of(GridCoord c) const {
        auto it = index_.find(c);
        if (it == index_.end()) throw OutOfRange("coordinate not in fabric");
        return it->second;
    }
    GridCoord coord(int i) const { return coords_.at(i); }
    int size() const { return static_cast<int>(coords_.size()); }

private:
    std::map<GridCoord, int> index_;
    std::vector<GridCoord> coords_;
};

inline void apply_gate(StabilizerState& state, const QubitIndex& idx, const GateOp& g,
                       std::map<GridCoord, int>* outcomes = nullptr) {
    switch (g.kind) {
        case GateKind::H: state.h(idx.of(g.q0)); break;
        case GateKind::YPlus90: state.y_plus_90(idx.of(g.q0)); break;
        case GateKind::YMinus90: state.y_minus_90(idx.of(g.q0)); break;
        case GateKind::CZ: state.cz(idx.of(g.q0), idx.of(*g.q1)); break;
        case GateKind::PauliX: state.x(idx.of(g.q0)); break;
        case GateKind::PauliZ: state.z(idx.of(g.q0)); break;
        case GateKind::Idle: break;
        case GateKind::Measure: {
            const int m = state.measure_z(idx.of(g.q0));
            if (outcomes) (*outcomes)[g.q0] = m;
            break;
        }
    }
}

// Tracked Pauli frame: composition of injected or deferred Pauli operators.
// Syndrome extraction never applies physical corrections.
struct PauliFrame {
    std::map<GridCoord, std::pair<int, int>> xz;  // (x bit, z bit) per qubit
    std::map<GridCoord, int> last_outcomes;

    void compose(Pauli p, GridCoord q) {
        auto& [x, z] = xz[q];
        switch (p) {
            case Pauli::X: x ^= 1; break;
            case Pauli::Z: z ^= 1; break;
            case Pauli::Y:
                x ^= 1;
                z ^= 1;
                break;
        }
    }
    bool identity() const {
        for (const auto& [q, b] : xz)
            if (b.first || b.second) return false;
        return true;
    }
};

struct ErrorInjection {
    Pauli pauli = Pauli::X;
    GridCoord target;
    int cycle = 1;        // 1-based; applied just before `before_slot` of this cycle
    int before_slot = 0;  // slot index within the cycle

    // Between cycles k and k+1.
    static ErrorInjection after_cycle(Pauli p, GridCoord q, int k) {
        return {p, q, k + 1, 0};
    }
};

struct SyndromeRecord {
    int cycle = 0;
    std::map<GridCoord, int> outcomes;   // raw measurement bit m_t
    std::map<GridCoord, int> syndromes;  // s_t = m_t xor m_{t-1}; s_1 = 0
};

struct RunOptions {
    bool random_data_state = false;  // stabilizer-projected random data state
    std::uint64_t state_seed = 1;
    std::vector<GridCoord> ancillas_one;  // ancillas prepared in |1>
};

namespace detail {

inline void inject(StabilizerState& state, const QubitIndex& idx, const ErrorInjection& e) {
    const int q = idx.of(e.target);
    switch (e.pauli) {
        case Pauli::X: state.x(q); break;
        case Pauli::Z: state.z(q); break;
        case Pauli::Y:
            state.z(q);
            state.x(q);
            break;
    }
}

inline void randomize_data(StabilizerState& state, const QubitIndex& idx,
                           const Fabric& fabric, std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<int> data;
    for (GridCoord c : fabric.data_coords()) data.push_back(idx.of(c));
    const std::size_t gates = data.size() * 6;
    for (std::size_t i = 0; i < gates; ++i) {
        const int a = data[rng.below(data.size())];
        switch (rng.below(4)) {
            case 0: state.h(a); break;
            case 1: state.s(a); break;
            case 2: state.x(a); break;
            default: {
                const int b = data[rng.below(data.size())];
                if (b != a) state.cz(a, b);
                break;
            }
        }
    }
}

}  // namespace detail

// Execute n_cycles of the schedule with Pauli-frame-update semantics:
// ancillas are never reset, outcomes are differenced against the previous
// round per ancilla, and injected Paulis are applied at slot boundaries. For
// the pipelined cycle the Z-type round t is completed by the measurement in
// slot A of cycle t+1, so one trailing measurement pass harvests round
// n_cycles. Fully reproducible for a fixed seed.
inline std::vector<SyndromeRecord> run_cycles(
    const std::function<const CycleSchedule&(int)>& schedule_for_cycle, const Fabric& fabric,
    int n_cycles, const std::vector<ErrorInjection>& injections, std::uint64_t seed,
    const RunOptions& options = {}) {
    const QubitIndex idx(fabric);
    StabilizerState state(idx.size(), seed);
    if (options.random_data_state)
        detail::randomize_data(state, idx, fabric, options.state_seed);
    for (GridCoord anc : options.ancillas_one) state.x(idx.of(anc));

    const CycleSchedule& first = schedule_for_cycle(1);
    const bool pipelined = first.mode == ScheduleMode::pipelined;
    const int n_slots = static_cast<int>(first.slots.size());

    for (const auto& e : injections) {
        if (!fabric.contains(e.target))
            throw InjectionOutOfRange("injection target outside the fabric");
        const bool final_boundary = e.cycle == n_cycles + 1 && e.before_slot == 0;
        if (e.cycle < 1 || (e.cycle > n_cycles && !final_boundary) || e.before_slot < 0 ||
            e.before_slot >= n_slots)
            throw InjectionOutOfRange("injection outside the simulated range");
    }

    // Execution-ordered outcome history per ancilla.
    std::map<GridCoord, std::vector<int>> history;
    auto run_slot = [&](const CycleSchedule& sched, int slot, int cycle) {
        for (const auto& e : injections)
            if (e.cycle == cycle && e.before_slot == slot) detail::inject(state, idx, e);
        std::map<GridCoord, int> outcomes;
        for (const auto& g : sched.gates)
            if (g.slot == slot) apply_gate(state, idx, g, &outcomes);
        for (const auto& [anc, m] : outcomes) history[anc].push_back(m);
    };

    for (int cycle = 1; cycle <= n_cycles; ++cycle) {
        const CycleSchedule& sched = schedule_for_cycle(cycle);
        for (int slot = 0; slot < n_slots; ++slot) run_slot(sched, slot, cycle);
    }
    if (pipelined) {
        // Trailing slot-A pass: measure the Z-type round of the last cycle.
        const CycleSchedule& sched = schedule_for_cycle(n_cycles + 1);
        for (const auto& e : injections)
            if (e.cycle == n_cycles + 1 && e.before_slot == 0) detail::inject(state, idx, e);
        std::map<GridCoord, int> outcomes;
        for (const auto& g : sched.gates)
            if (g.slot == 0 && g.kind == GateKind::Measure)
                apply_gate(state, idx, g, &outcomes);
        for (const auto& [anc, m] : outcomes) history[anc].push_back(m);
    }

    // Assemble rounds. Without reset the physical readings obey
    // m_t = m_{t-1} xor s_t, so the round outcome is the frame-corrected
    // eigenvalue bit: consecutive physical readings XORed, with the known
    // post-measurement ancilla state as the tracked frame. Pipelined Z
    // ancillas carry a cycle-1 baseline entry.
    std::vector<SyndromeRecord> records(n_cycles);
    PauliFrame frame;
    for (int t = 1; t <= n_cycles; ++t) {
        SyndromeRecord& rec = records[t - 1];
        rec.cycle = t;
        for (const auto& [anc, hist] : history) {
            const bool z_kind = fabric.plaquette_at(anc)->kind == StabKind::Z;
            const int offset = (pipelined && z_kind) ? 1 : 0;
            const int pos = t - 1 + offset;
            if (pos >= static_cast<int>(hist.size())) continue;
            const int previous_reading = pos > 0 ? hist[pos - 1] : 0;
            const int m = hist[pos] ^ previous_reading;
            rec.outcomes[anc] = m;
            const int prev = frame.last_outcomes.count(anc) ? frame.last_outcomes[anc] : m;
            rec.syndromes[anc] = t == 1 ? 0 : (m ^ prev);
            frame.last_outcomes[anc] = m;
        }
    }
    return records;
}

inline std::vector<SyndromeRecord> run_cycles(const CycleSchedule& schedule,
                                              const Fabric& fabric, int n_cycles,
                                              const std::vector<ErrorInjection>& injections,
                                              std::uint64_t seed,
                                              const RunOptions& options = {}) {
    return run_cycles([&](int) -> const CycleSchedule& { return schedule; }, fabric,
                      n_cycles, injections, seed, options);
}

// ---------------------------------------------------------------------------
// Stabilizer-projection oracle

struct ProjectionReport {
    struct Entry {
        GridCoord ancilla;
        bool pass = false;
        int sign = 1;
        std::map<GridCoord, Pauli> extracted;  // data-qubit part
        std::map<GridCoord, Pauli> expected;
    };
    std::vector<Entry> entries;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return !entries.empty();
    }
};

// Conjugate each ancilla's measured Z backward through the cycle to the
// cycle start and compare the data-qubit part with the plaquette operator.
// This is a symbolic check, independent of the tableau simulation. Crossing
// another measurement is legal only if the observable commutes with it.
inline ProjectionReport verify_stabilizer_projection(const CycleSchedule& schedule,
                                                     const Fabric& fabric) {
    ProjectionReport report;
    const bool pipelined = schedule.mode == ScheduleMode::pipelined;

    // Time-ordered gate list of one cycle, plus the next cycle's slot-A
    // measurements which complete the pipelined Z-type round.
    struct Timed {
        GateOp gate;
        int time = 0;
    };
    std::vector<Timed> timeline;
    const int n_slots = static_cast<int>(schedule.slots.size());
    for (int slot = 0; slot < n_slots; ++slot)
        for (const auto& g : schedule.gates)
            if (g.slot == slot) timeline.push_back({g, slot});
    if (pipelined)
        for (const auto& g : schedule.gates)
            if (g.slot == 0 && g.kind == GateKind::Measure)
                timeline.push_back({g, n_slots});

    for (const auto& p : fabric.plaquettes()) {
        ProjectionReport::Entry entry;
        entry.ancilla = p.ancilla;
        for (const auto& [arm, d] : p.arms)
            entry.expected[d] = p.kind == StabKind::X ? Pauli::X : Pauli::Z;

        // Locate this ancilla's round-completing measurement.
        int measure_at = -1;
        for (std::size_t i = 0; i < timeline.size(); ++i) {
            const auto& [g, time] = timeline[i];
            if (g.kind != GateKind::Measure || !(g.q0 == p.ancilla)) continue;
            const bool next_cycle_measure = pipelined && time == n_slots;
            const bool z_kind = p.kind == StabKind::Z;
            if (!pipelined || z_kind == next_cycle_measure) measure_at = static_cast<int>(i);
        }
        if (measure_at < 0) {
            report.entries.push_back(entry);
            continue;
        }

        PauliString obs;
        obs.set(p.ancilla, Pauli::Z);
        bool disturbed = false;
        for (int i = measure_at - 1; i >= 0; --i) {
            const GateOp& g = timeline[i].gate;
            if (g.kind == GateKind::Measure) {
                if (!obs.commutes_with_z(g.q0)) disturbed = true;
                continue;
            }
            obs.conjugate(g, /*backward=*/true);
        }

        auto full = obs.support();
        entry.sign = obs.sign();
        if (auto self = obs.at(p.ancilla); self && *self == Pauli::Z) full.erase(p.ancilla);
        else disturbed = true;
        entry.extracted = full;
        entry.pass = !disturbed && obs.sign() == 1 && full == entry.expected;
        report.entries.push_back(entry);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Logical-operator extraction for a masked-off stabilizer

struct LogicalOperatorResult {
    bool identity_for_zero = false;
    bool matches_plaquette = false;
    std::map<GridCoord, Pauli> expected;
};

// With an ancilla's basis-change gates masked off, running one cycle with
// the ancilla in |b> applies the plaquette operator to the data iff b = 1.
// Verified by comparing tableau states across seeded runs.
inline LogicalOperatorResult logical_operator_check(const Fabric& fabric,
                                                    const CycleSchedule& edited_schedule,
                                                    GridCoord ancilla,
                                                    std::uint64_t seed = 11) {
    const QubitIndex idx(fabric);
    const Plaquette* p = fabric.plaquette_at(ancilla);
    if (!p) throw OutOfRange("no plaquette at the edit target");

    LogicalOperatorResult result;
    for (const auto& [arm, d] : p->arms)
        result.expected[d] = p->kind == StabKind::X ? Pauli::X : Pauli::Z;

    auto fresh_state = [&](int b) {
        StabilizerState st(idx.size(), seed);
        detail::randomize_data(st, idx, fabric, seed + 1);
        if (b) st.x(idx.of(ancilla));
        st.reseed(seed + 2);  // align measurement randomness across runs
        return st;
    };
    auto run_once = [&](StabilizerState& st, bool drop_target_czs) {
        const int n_slots = static_cast<int>(edited_schedule.slots.size());
        for (int slot = 0; slot < n_slots; ++slot)
            for (const auto& g : edited_schedule.gates) {
                if (g.slot != slot) continue;
                if (drop_target_czs && g.kind == GateKind::CZ &&
                    (g.q0 == ancilla || (g.q1 && *g.q1 == ancilla)))
                    continue;
                apply_gate(st, idx, g);
            }
    };

    StabilizerState no_cz = fresh_state(0);
    run_once(no_cz, true);
    StabilizerState run0 = fresh_state(0);
    run_once(run0, false);
    StabilizerState run1 = fresh_state(1);
    run_once(run1, false);

    result.identity_for_zero = run0.same_state(no_cz);

    // Expect run1 == X_ancilla * plaquette * run0.
    StabilizerState expected = run0;
    expected.x(idx.of(ancilla));
    for (const auto& [d, pauli] : result.expected) {
        if (pauli == Pauli::X) expected.x(idx.of(d));
        else expected.z(idx.of(d));
    }
    result.matches_plaquette = run1.same_state(expected);
    return result;
}

// ---------------------------------------------------------------------------
// Code distance by brute-force enumeration

// Smallest weight of a data-qubit Pauli that commutes with every stabilizer
// yet is not in the stabilizer group. Feasible up to distance 5.
inline int distance_check(const Fabric& fabric) {
    if (fabric.is_torus()) throw TooLarge("distance check covers planar patches only");
    const int d = fabric.patch().distance;
    if (d > 5) throw TooLarge("enumeration is limited to d <= 5");

    std::vector<GridCoord> data = fabric.data_coords();
    const int nd = static_cast<int>(data.size());
    std::map<GridCoord, int> pos;
    for (int i = 0; i < nd; ++i) pos[data[i]] = i;

    // Stabilizers as (x|z) bitmasks over data qubits.
    struct Row {
        std::uint64_t x = 0, z = 0;
    };
    std::vector<Row> gens;
    for (const auto& p : fabric.plaquettes()) {
        Row row;
        for (const auto& [arm, c] : p.arms) {
            if (p.kind == StabKind::X) row.x |= 1ull << pos[c];
            else row.z |= 1ull << pos[c];
        }
        gens.push_back(row);
    }
    auto anticommutes = [&](Row a, Row b) {
        return (__builtin_parityll(a.x & b.z) ^ __builtin_parityll(a.z & b.x)) != 0;
    };
    // Row-reduce a copy of the generators for membership testing.
    std::vector<Row> basis = gens;
    std::vector<int> pivot_bit;
    {
        std::size_t r = 0;
        for (int bit = 0; bit < 2 * nd && r < basis.size(); ++bit) {
            auto get = [&](const Row& row) {
                return bit < nd ? ((row.x >> bit) & 1) : ((row.z >> (bit - nd)) & 1);
            };
            std::size_t piv = r;
            while (piv < basis.size() && !get(basis[piv])) ++piv;
            if (piv == basis.size()) continue;
            std::swap(basis[r], basis[piv]);
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (i != r && get(basis[i])) {
                    basis[i].x ^= basis[r].x;
                    basis[i].z ^= basis[r].z;
                }
            pivot_bit.push_back(bit);
            ++r;
        }
        basis.resize(pivot_bit.size());
    }
    auto in_group = [&](Row e) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const int bit = pivot_bit[i];
            const bool set =
                bit < nd ? ((e.x >> bit) & 1) : ((e.z >> (bit - nd)) & 1);
            if (set) {
                e.x ^= basis[i].x;
                e.z ^= basis[i].z;
            }
        }
        return e.x == 0 && e.z == 0;
    };
    auto detected = [&](Row e) {
        for (const Row& g : gens)
            if (anticommutes(g, e)) return true;
        return false;
    };

    // Enumerate supports of increasing weight.
    std::vector<int> support;
    std::function<std::optional<int>(int, int, int)> search =
        [&](int start, int remaining, int weight) -> std::optional<int> {
        if (remaining == 0) {
            const int w = weight;
            // All 3^w sign patterns on the chosen support.
            std::vector<int> pattern(support.size(), 0);
            while (true) {
                Row e;
                for (std::size_t i = 0; i < support.size(); ++i) {
                    const std::uint64_t bit = 1ull << support[i];
                    if (pattern[i] == 0) e.x |= bit;           // X
                    else if (pattern[i] == 1) e.z |= bit;      // Z
                    else {                                     // Y
                        e.x |= bit;
                        e.z |= bit;
                    }
                }
                if (!detected(e) && !in_group(e)) return w;
                int i = 0;
                while (i < static_cast<int>(pattern.size()) && pattern[i] == 2)
                    pattern[i++] = 0;
                if (i == static_cast<int>(pattern.size())) break;
                ++pattern[i];
            }
            return std::nullopt;
        }
        for (int q = start; q <= nd - remaining; ++q) {
            support.push_back(q);
            if (auto w = search(q + 1, remaining - 1, weight)) return w;
            support.pop_back();
        }
        return std::nullopt;
    };

    for (int w = 1; w <= d; ++w) {
        support.clear();
        if (auto found = search(0, w, w)) return *found;
    }
    throw std::logic_error("no logical operator found up to weight d");
}

}  // namespace surfcycle

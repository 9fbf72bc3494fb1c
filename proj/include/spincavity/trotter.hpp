// trotter.hpp — First-order Trotter circuits for the spin-cavity model,
// two-qubit gate decomposition, statevector simulation, and timing accounting
//
// Qubit q is ordering slot q (bit q of the basis index). One step applies, in
// order: on-site RZ layers, the driving RX layer, RXX+RYY pairs over the odd
// then even cavity bonds, and the four-rotation compilation of each chiral
// atom-cavity pair. Rotation convention: RAB(theta) = exp(-i theta/2 A⊗B),
// so the exchange J(s+ s- + h.c.) = (J/2)(XX + YY) costs theta = J dt per
// axis. The timing model prices a single-qubit layer at 50 ns and a two-qubit
// rotation layer at its decomposed cost 3*50 + 2*500 = 1150 ns.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "spincavity/core.hpp"
#include "spincavity/dynamics.hpp"
#include "spincavity/entanglement.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

enum class GateKind { RX, RZ, H, CX, RXX, RYY, RXY, RYX };

inline bool is_two_qubit(GateKind k) { return k != GateKind::RX && k != GateKind::RZ && k != GateKind::H; }

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::RX: return "RX";
        case GateKind::RZ: return "RZ";
        case GateKind::H: return "H";
        case GateKind::CX: return "CX";
        case GateKind::RXX: return "RXX";
        case GateKind::RYY: return "RYY";
        case GateKind::RXY: return "RXY";
        case GateKind::RYX: return "RYX";
    }
    return "?";
}

struct Gate {
    GateKind kind = GateKind::RX;
    int q0 = 0;
    int q1 = -1;       // -1 for single-qubit gates
    double angle = 0.0; // ignored for H and CX

    void validate(int n_qubits) const {
        if (!std::isfinite(angle)) throw ParameterError("Gate: non-finite angle");
        if (q0 < 0 || q0 >= n_qubits) throw ParameterError("Gate: qubit index out of range");
        if (is_two_qubit(kind)) {
            if (q1 < 0 || q1 >= n_qubits || q1 == q0) {
                throw ParameterError("Gate: two-qubit gate needs two distinct qubits");
            }
        }
    }
};

inline constexpr double kSingleQubitLayerNs = 50.0;
inline constexpr double kEntanglerLayerNs = 500.0;
// decomposed two-qubit rotation: 3 single-qubit layers + 2 entangling layers
inline constexpr double kTwoQubitRotationLayerNs =
    3.0 * kSingleQubitLayerNs + 2.0 * kEntanglerLayerNs;

enum class LayerKind { SingleQubit, Entangler, TwoQubitRotation };

struct Layer {
    LayerKind kind = LayerKind::SingleQubit;
    std::vector<Gate> gates;

    double duration_ns() const {
        switch (kind) {
            case LayerKind::SingleQubit: return kSingleQubitLayerNs;
            case LayerKind::Entangler: return kEntanglerLayerNs;
            case LayerKind::TwoQubitRotation: return kTwoQubitRotationLayerNs;
        }
        return 0.0;
    }
};

struct GateSequence {
    int n_qubits = 0;
    std::vector<Layer> layers;

    std::size_t depth() const { return layers.size(); }

    std::size_t gate_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += l.gates.size();
        return n;
    }

    std::size_t two_qubit_gate_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) {
            if (l.kind != LayerKind::SingleQubit) n += l.gates.size();
        }
        return n;
    }

    double duration_ns() const {
        double total = 0.0;
        for (const auto& l : layers) total += l.duration_ns();
        return total;
    }

    void append_layer(LayerKind kind, std::vector<Gate> gates) {
        if (gates.empty()) return;
        for (const auto& g : gates) g.validate(n_qubits);
        layers.push_back({kind, std::move(gates)});
    }

    void extend(const GateSequence& other) {
        if (other.n_qubits > n_qubits) throw ParameterError("GateSequence: qubit count mismatch");
        for (const auto& l : other.layers) layers.push_back(l);
    }
};

// ------------------------------ Gate matrices --------------------------------

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

inline Eigen::Matrix2cd single_qubit_matrix(const Gate& g) {
    Eigen::Matrix2cd m;
    switch (g.kind) {
        case GateKind::RX: {
            const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
            m << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
            return m;
        }
        case GateKind::RZ: {
            m << std::polar(1.0, -0.5 * g.angle), 0.0, 0.0, std::polar(1.0, 0.5 * g.angle);
            return m;
        }
        case GateKind::H: {
            const double r = std::numbers::sqrt2 / 2.0;
            m << r, r, r, -r;
            return m;
        }
        default:
            throw ParameterError("single_qubit_matrix: not a single-qubit gate");
    }
}

// 4x4 matrix in the local basis |q0 q1> with q0 the high bit.
inline Eigen::Matrix4cd two_qubit_matrix(const Gate& g) {
    using M4 = Eigen::Matrix4cd;
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        M4 out;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
        return out;
    };
    switch (g.kind) {
        case GateKind::CX: {
            M4 m = M4::Zero();
            m(0, 0) = 1;
            m(1, 1) = 1;
            m(2, 3) = 1;
            m(3, 2) = 1;
            return m;
        }
        case GateKind::RXX:
        case GateKind::RYY:
        case GateKind::RXY:
        case GateKind::RYX: {
            const Eigen::Matrix2cd a =
                (g.kind == GateKind::RXX || g.kind == GateKind::RXY) ? pauli_x() : pauli_y();
            const Eigen::Matrix2cd b =
                (g.kind == GateKind::RXX || g.kind == GateKind::RYX) ? pauli_x() : pauli_y();
            const M4 ab = kron(a, b);
            return std::cos(0.5 * g.angle) * M4::Identity() -
                   Complex(0, 1) * std::sin(0.5 * g.angle) * ab;
        }
        default:
            throw ParameterError("two_qubit_matrix: not a two-qubit gate");
    }
}

// --------------------------- Circuit construction ----------------------------

// One first-order Trotter step exp(-i H dt). Zero-angle gates are omitted, so
// e.g. phi = 0 emits no RXY/RYX and an undriven resonant chain emits only the
// cavity RXX/RYY pairs.
inline GateSequence trotter_step(const ModelParams& p, double dt) {
    p.validate();
    const SiteOrdering ord = SiteOrdering::from(p);
    if (ord.total() > 12) throw SizeError("trotter_step: more than 12 qubits");
    GateSequence seq;
    seq.n_qubits = ord.total();

    std::vector<Gate> cavity_rz;
    for (int i = 0; i < p.L; ++i) {
        if (p.delta_c[static_cast<std::size_t>(i)] != 0.0) {
            cavity_rz.push_back({GateKind::RZ, ord.cavity_slot[i], -1,
                                 -p.delta_c[static_cast<std::size_t>(i)] * dt});
        }
    }
    seq.append_layer(LayerKind::SingleQubit, std::move(cavity_rz));

    std::vector<Gate> atom_rz;
    for (int a = 0; a < p.N; ++a) {
        if (p.delta_n[static_cast<std::size_t>(a)] != 0.0) {
            atom_rz.push_back({GateKind::RZ, ord.atom_slot[a], -1,
                               -p.delta_n[static_cast<std::size_t>(a)] * dt});
        }
    }
    seq.append_layer(LayerKind::SingleQubit, std::move(atom_rz));

    std::vector<Gate> drive_rx;
    for (int a = 0; a < p.N; ++a) {
        if (p.omega[static_cast<std::size_t>(a)] != 0.0) {
            drive_rx.push_back({GateKind::RX, ord.atom_slot[a], -1,
                                2.0 * p.omega[static_cast<std::size_t>(a)] * dt});
        }
    }
    seq.append_layer(LayerKind::SingleQubit, std::move(drive_rx));

    // cavity bonds, odd-numbered first (parallel within a layer)
    for (int parity = 0; parity < 2; ++parity) {
        for (GateKind kind : {GateKind::RXX, GateKind::RYY}) {
            std::vector<Gate> layer;
            for (int i = parity; i + 1 < p.L; i += 2) {
                const double J = p.J_c[static_cast<std::size_t>(i)];
                if (J != 0.0) {
                    layer.push_back({kind, ord.cavity_slot[i], ord.cavity_slot[i + 1], J * dt});
                }
            }
            seq.append_layer(LayerKind::TwoQubitRotation, std::move(layer));
        }
    }

    // chiral atom-cavity pairs: left pairs, then right pairs. With
    // sigma^+ = (X - iY)/2 the left pair carries -(g sin phi)/2 (YX - XY)
    // over (atom, cavity), the right pair the opposite sign.
    for (int side = 0; side < 2; ++side) {
        struct Part {
            GateKind kind;
            double weight; // multiplies g dt
        };
        for (const Part part : {Part{GateKind::RXX, 1.0}, Part{GateKind::RYY, 1.0},
                                Part{GateKind::RYX, 1.0}, Part{GateKind::RXY, -1.0}}) {
            std::vector<Gate> layer;
            for (int a = 0; a < p.N; ++a) {
                const double g = side == 0 ? p.g_left[static_cast<std::size_t>(a)]
                                           : p.g_right[static_cast<std::size_t>(a)];
                const double phi = p.phi[static_cast<std::size_t>(a)];
                const bool chiral_part = part.kind == GateKind::RYX || part.kind == GateKind::RXY;
                const double sign = (side == 0 ? -1.0 : 1.0);
                const double angle = chiral_part ? part.weight * sign * g * std::sin(phi) * dt
                                                 : part.weight * g * std::cos(phi) * dt;
                if (angle == 0.0) continue;
                const int cav = ord.cavity_slot[p.pos[static_cast<std::size_t>(a)] - 1 + side];
                layer.push_back({part.kind, ord.atom_slot[a], cav, angle});
            }
            seq.append_layer(LayerKind::TwoQubitRotation, std::move(layer));
        }
    }
    return seq;
}

// Decompose a two-qubit rotation into 3 single-qubit layers and 2 CX layers.
// RAB(theta) = (U_A ⊗ U_B) CX (I ⊗ RZ(theta)) CX (U_A† ⊗ U_B†) with
// U Z U† = A (H for X, RX(-pi/2) for Y); layers listed in application order.
inline GateSequence decompose_two_qubit(const Gate& g) {
    if (!is_two_qubit(g.kind) || g.kind == GateKind::CX) {
        throw ParameterError("decompose_two_qubit: expected a two-qubit rotation");
    }
    const bool a_is_x = g.kind == GateKind::RXX || g.kind == GateKind::RXY;
    const bool b_is_x = g.kind == GateKind::RXX || g.kind == GateKind::RYX;
    const double half_pi = 0.5 * std::numbers::pi;
    auto basis_in = [&](int q, bool is_x) {
        return is_x ? Gate{GateKind::H, q, -1, 0.0} : Gate{GateKind::RX, q, -1, half_pi};
    };
    auto basis_out = [&](int q, bool is_x) {
        return is_x ? Gate{GateKind::H, q, -1, 0.0} : Gate{GateKind::RX, q, -1, -half_pi};
    };
    GateSequence seq;
    seq.n_qubits = std::max(g.q0, g.q1) + 1;
    seq.append_layer(LayerKind::SingleQubit, {basis_in(g.q0, a_is_x), basis_in(g.q1, b_is_x)});
    seq.append_layer(LayerKind::Entangler, {{GateKind::CX, g.q0, g.q1, 0.0}});
    seq.append_layer(LayerKind::SingleQubit, {{GateKind::RZ, g.q1, -1, g.angle}});
    seq.append_layer(LayerKind::Entangler, {{GateKind::CX, g.q0, g.q1, 0.0}});
    seq.append_layer(LayerKind::SingleQubit, {basis_out(g.q0, a_is_x), basis_out(g.q1, b_is_x)});
    return seq;
}

// ---------------------------- Statevector backend ----------------------------

inline void apply_gate(StateVector& psi, const Gate& g, int n_qubits) {
    g.validate(n_qubits);
    const std::size_t dim = std::size_t(1) << n_qubits;
    if (psi.size() != static_cast<Eigen::Index>(dim)) {
        throw ParameterError("apply_gate: state dimension mismatch");
    }
    if (!is_two_qubit(g.kind)) {
        const Eigen::Matrix2cd m = single_qubit_matrix(g);
        const std::size_t bit = std::size_t(1) << g.q0;
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (idx & bit) continue;
            const Complex a0 = psi(static_cast<Eigen::Index>(idx));
            const Complex a1 = psi(static_cast<Eigen::Index>(idx | bit));
            psi(static_cast<Eigen::Index>(idx)) = m(0, 0) * a0 + m(0, 1) * a1;
            psi(static_cast<Eigen::Index>(idx | bit)) = m(1, 0) * a0 + m(1, 1) * a1;
        }
        return;
    }
    const Eigen::Matrix4cd m = two_qubit_matrix(g);
    const std::size_t bit0 = std::size_t(1) << g.q0;
    const std::size_t bit1 = std::size_t(1) << g.q1;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (idx & (bit0 | bit1)) continue;
        Eigen::Vector4cd v;
        for (int k = 0; k < 4; ++k) {
            const std::size_t j = idx | (k & 2 ? bit0 : 0u) | (k & 1 ? bit1 : 0u);
            v(k) = psi(static_cast<Eigen::Index>(j));
        }
        const Eigen::Vector4cd w = m * v;
        for (int k = 0; k < 4; ++k) {
            const std::size_t j = idx | (k & 2 ? bit0 : 0u) | (k & 1 ? bit1 : 0u);
            psi(static_cast<Eigen::Index>(j)) = w(k);
        }
    }
}

inline StateVector simulate_circuit(const GateSequence& seq, const StateVector& psi0) {
    if (seq.n_qubits > 12) throw SizeError("simulate_circuit: more than 12 qubits");
    StateVector psi = psi0;
    for (const auto& layer : seq.layers) {
        for (const auto& g : layer.gates) apply_gate(psi, g, seq.n_qubits);
    }
    return psi;
}

// ------------------------------- Text export ---------------------------------

inline std::string export_gates(const GateSequence& seq) {
    std::string out;
    char line[96];
    for (const auto& layer : seq.layers) {
        for (const auto& g : layer.gates) {
            if (is_two_qubit(g.kind)) {
                std::snprintf(line, sizeof line, "GATE %s %d %d %.17g\n", gate_name(g.kind), g.q0,
                              g.q1, g.angle);
            } else {
                std::snprintf(line, sizeof line, "GATE %s %d %.17g\n", gate_name(g.kind), g.q0,
                              g.angle);
            }
            out += line;
        }
    }
    return out;
}

// --------------------------- Trotter-vs-exact study --------------------------

struct TrotterRun {
    double dt = 0.0;
    std::vector<double> times; // after each step
    std::vector<double> c;
    double peak_c = 0.0;
    double peak_time = 0.0;
    int steps = 0;
    double step_duration_us = 0.0;
    double total_duration_us = 0.0;
};

struct TrotterComparison {
    std::vector<TrotterRun> runs;
    std::vector<double> exact_times;
    std::vector<double> exact_c;
};

// Trotterized concurrence dynamics from atom n1 excited versus the exact
// single-excitation evolution, with the per-step duration budget.
inline TrotterComparison trotter_vs_exact(const ModelParams& p, const std::vector<double>& dts,
                                          double t_final) {
    p.validate();
    for (double w : p.omega) {
        if (w != 0.0) throw ParameterError("trotter_vs_exact: undriven comparison expected");
    }
    const SiteOrdering ord = SiteOrdering::from(p);
    TrotterComparison cmp;
    for (double dt : dts) {
        if (dt <= 0.0) throw ParameterError("trotter_vs_exact: dt must be positive");
        const GateSequence step = trotter_step(p, dt);
        TrotterRun run;
        run.dt = dt;
        run.steps = static_cast<int>(std::floor(t_final / dt + 1e-9));
        run.step_duration_us = step.duration_ns() / 1000.0;
        run.total_duration_us = run.steps * run.step_duration_us;
        StateVector psi = StateVector::Zero(Eigen::Index(1) << ord.total());
        psi(Eigen::Index(1) << ord.atom_slot.at(0)) = 1.0;
        run.times.reserve(static_cast<std::size_t>(run.steps) + 1);
        run.c.reserve(static_cast<std::size_t>(run.steps) + 1);
        run.times.push_back(0.0);
        run.c.push_back(0.0);
        for (int s = 1; s <= run.steps; ++s) {
            for (const auto& layer : step.layers) {
                for (const auto& g : layer.gates) apply_gate(psi, g, step.n_qubits);
            }
            run.times.push_back(s * dt);
            run.c.push_back(concurrence(partial_trace_atoms(psi, ord)));
        }
        for (std::size_t i = 0; i < run.c.size(); ++i) {
            if (run.c[i] > run.peak_c) {
                run.peak_c = run.c[i];
                run.peak_time = run.times[i];
            }
        }
        cmp.runs.push_back(std::move(run));
    }
    // exact reference on the union grid
    std::map<double, double> exact;
    for (const auto& run : cmp.runs) {
        for (double t : run.times) exact[t] = 0.0;
    }
    const Propagator prop(build_single_excitation_h(p));
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot.at(0)) = 1.0;
    for (auto& [t, c] : exact) {
        const StateVector psi = prop.apply(psi0, t);
        c = concurrence_pure_single_exc(psi(ord.atom_slot[0]), psi(ord.atom_slot[1]));
    }
    cmp.exact_times.reserve(exact.size());
    cmp.exact_c.reserve(exact.size());
    for (const auto& [t, c] : exact) {
        cmp.exact_times.push_back(t);
        cmp.exact_c.push_back(c);
    }
    return cmp;
}

} // namespace spincavity

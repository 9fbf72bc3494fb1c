#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numbers>

#include "spincavity/trotter.hpp"

using namespace spincavity;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix circuit_unitary(const GateSequence& seq) {
    const Eigen::Index dim = Eigen::Index(1) << seq.n_qubits;
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector psi = u.col(col);
        for (const auto& layer : seq.layers) {
            for (const auto& g : layer.gates) apply_gate(psi, g, seq.n_qubits);
        }
        u.col(col) = psi;
    }
    return u;
}

ComplexMatrix gate_unitary(const Gate& g, int n_qubits) {
    GateSequence seq;
    seq.n_qubits = n_qubits;
    seq.append_layer(is_two_qubit(g.kind) ? LayerKind::TwoQubitRotation : LayerKind::SingleQubit,
                     {g});
    return circuit_unitary(seq);
}

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const Complex tr = (a.adjoint() * b).trace();
    const Complex phase = tr / std::abs(tr);
    return (b - phase * a).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("two-qubit rotations decompose into singles and CX exactly") {
    for (GateKind kind : {GateKind::RXX, GateKind::RYY, GateKind::RXY, GateKind::RYX}) {
        const Gate g{kind, 0, 1, 0.7321};
        const auto seq = decompose_two_qubit(g);
        REQUIRE(seq.depth() == 5);
        REQUIRE(seq.two_qubit_gate_count() == 2);
        REQUIRE(seq.duration_ns() == Approx(1150.0));
        REQUIRE(phase_aligned_distance(gate_unitary(g, 2), circuit_unitary(seq)) < 1e-10);
    }
    SECTION("zero angle is the identity up to global phase") {
        const auto seq = decompose_two_qubit({GateKind::RYY, 0, 1, 0.0});
        REQUIRE(phase_aligned_distance(ComplexMatrix::Identity(4, 4), circuit_unitary(seq)) <
                1e-12);
    }
    SECTION("RXY and RYX differ for nonzero angles") {
        const ComplexMatrix a = gate_unitary({GateKind::RXY, 0, 1, 0.9}, 2);
        const ComplexMatrix b = gate_unitary({GateKind::RYX, 0, 1, 0.9}, 2);
        REQUIRE(phase_aligned_distance(a, b) > 0.1);
    }
    SECTION("CX is not decomposable") {
        REQUIRE_THROWS_AS(decompose_two_qubit({GateKind::CX, 0, 1, 0.0}), ParameterError);
    }
}

TEST_CASE("statevector backend basics") {
    SECTION("empty sequence preserves the state") {
        GateSequence seq;
        seq.n_qubits = 3;
        StateVector psi0 = StateVector::Zero(8);
        psi0(5) = 1.0;
        REQUIRE((simulate_circuit(seq, psi0) - psi0).norm() == 0.0);
    }
    SECTION("RX(pi) flips a qubit up to phase") {
        GateSequence seq;
        seq.n_qubits = 1;
        seq.append_layer(LayerKind::SingleQubit, {{GateKind::RX, 0, -1, kPi}});
        StateVector psi0(2);
        psi0 << 1, 0;
        const StateVector out = simulate_circuit(seq, psi0);
        REQUIRE(std::abs(out(1)) == Approx(1.0).margin(1e-12));
    }
    SECTION("norm is preserved across a long random-ish circuit") {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
        const auto step = trotter_step(p, 0.7);
        const auto ord = SiteOrdering::from(p);
        StateVector psi = StateVector::Zero(Eigen::Index(1) << ord.total());
        psi(3) = 1.0;
        for (int s = 0; s < 50; ++s) psi = simulate_circuit(step, psi);
        REQUIRE(std::abs(psi.norm() - 1.0) < 1e-10);
    }
    SECTION("bad qubit index rejected") {
        GateSequence seq;
        seq.n_qubits = 2;
        REQUIRE_THROWS_AS(seq.append_layer(LayerKind::SingleQubit, {{GateKind::RX, 5, -1, 1.0}}),
                          ParameterError);
    }
}

TEST_CASE("step structure follows the model terms") {
    SECTION("bare resonant cavity emits only exchange pairs") {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.0, 0.0);
        const auto step = trotter_step(p, 1.0);
        for (const auto& layer : step.layers) {
            for (const auto& g : layer.gates) {
                REQUIRE((g.kind == GateKind::RXX || g.kind == GateKind::RYY));
            }
        }
        REQUIRE(step.two_qubit_gate_count() == 10); // 5 bonds x 2 rotations
    }
    SECTION("zero phase emits no chiral rotations") {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, 0.0);
        const auto step = trotter_step(p, 1.0);
        for (const auto& layer : step.layers) {
            for (const auto& g : layer.gates) {
                REQUIRE(g.kind != GateKind::RXY);
                REQUIRE(g.kind != GateKind::RYX);
            }
        }
    }
    SECTION("the chiral step packs into twelve two-qubit layers near 14 us") {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
        const auto step = trotter_step(p, 5.0);
        std::size_t two_qubit_layers = 0;
        for (const auto& layer : step.layers) {
            if (layer.kind == LayerKind::TwoQubitRotation) ++two_qubit_layers;
        }
        REQUIRE(two_qubit_layers == 12);
        REQUIRE(step.duration_ns() / 1000.0 == Approx(14.0).margin(0.5));
    }
    SECTION("driving and detuning add single-qubit layers") {
        auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
        p.omega[0] = 0.2;
        p.delta_c[0] = 0.1;
        p.delta_n[1] = -0.3;
        const auto step = trotter_step(p, 1.0);
        std::size_t singles = 0;
        for (const auto& layer : step.layers) {
            if (layer.kind == LayerKind::SingleQubit) ++singles;
        }
        REQUIRE(singles == 3);
        REQUIRE(step.duration_ns() == Approx(3 * 50.0 + 12 * 1150.0));
    }
    SECTION("duration is additive over steps") {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
        const auto cmp = trotter_vs_exact(p, {5.0}, 120.0);
        REQUIRE(cmp.runs[0].steps == 24);
        REQUIRE(cmp.runs[0].total_duration_us ==
                Approx(24.0 * cmp.runs[0].step_duration_us).margin(1e-12));
    }
}

TEST_CASE("one step at small dt approximates the exact propagator") {
    const auto p = ModelParams::ordered_chain(4, {1, 3}, 0.1, kPi / 4);
    const auto ord = SiteOrdering::from(p);
    const ComplexMatrix h(build_full_h_sparse(p));
    const Propagator prop(h);
    for (double dt : {0.05, 0.025}) {
        const auto step = trotter_step(p, dt);
        const double dev = phase_aligned_distance(prop.matrix(dt), circuit_unitary(step));
        REQUIRE(dev < 20.0 * dt * dt); // one-step error is second order
    }
    (void)ord;
}

TEST_CASE("state error halves with the step size") {
    const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
    const auto ord = SiteOrdering::from(p);
    const Propagator prop(build_single_excitation_h(p));
    StateVector e0 = StateVector::Zero(ord.total());
    e0(ord.atom_slot[0]) = 1.0;
    std::vector<double> errs;
    for (double dt : {2.0, 1.0, 0.5, 0.25}) {
        const auto step = trotter_step(p, dt);
        StateVector psi = StateVector::Zero(Eigen::Index(1) << ord.total());
        psi(Eigen::Index(1) << ord.atom_slot[0]) = 1.0;
        const int steps = static_cast<int>(40.0 / dt + 1e-9);
        double err = 0.0;
        for (int s = 1; s <= steps; ++s) {
            psi = simulate_circuit(step, psi);
            const StateVector ex = prop.apply(e0, s * dt);
            StateVector exf = StateVector::Zero(psi.size());
            for (int q = 0; q < ord.total(); ++q) exf(Eigen::Index(1) << q) = ex(q);
            const Complex overlap = exf.dot(psi);
            err = std::max(err, (psi - (overlap / std::abs(overlap)) * exf).norm());
        }
        errs.push_back(err);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double ratio = errs[i - 1] / errs[i];
        REQUIRE(ratio > 1.6);
        REQUIRE(ratio < 2.4);
    }
}

TEST_CASE("fine steps reproduce the exact concurrence") {
    const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
    const auto cmp = trotter_vs_exact(p, {0.1}, 120.0);
    std::map<double, double> exact;
    for (std::size_t i = 0; i < cmp.exact_times.size(); ++i) {
        exact[cmp.exact_times[i]] = cmp.exact_c[i];
    }
    double err = 0.0;
    for (std::size_t i = 0; i < cmp.runs[0].times.size(); ++i) {
        err = std::max(err, std::abs(cmp.runs[0].c[i] - exact[cmp.runs[0].times[i]]));
    }
    REQUIRE(err < 0.01);
}

TEST_CASE("coarse-step circuits keep the chiral advantage") {
    auto peaks = [](double phi) {
        const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, phi);
        const auto cmp = trotter_vs_exact(p, {5.0, 10.0}, 360.0);
        return std::pair{cmp.runs[0].peak_time, cmp.runs[1].peak_time};
    };
    const auto [chiral5, chiral10] = peaks(kPi / 4);
    const auto [sym5, sym10] = peaks(0.0);
    REQUIRE(chiral5 < sym5);
    REQUIRE(chiral10 < sym10);
}

TEST_CASE("gate export lists every gate") {
    const auto p = ModelParams::ordered_chain(6, {2, 5}, 0.1, kPi / 4);
    const auto step = trotter_step(p, 5.0);
    const std::string text = export_gates(step);
    std::size_t lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    REQUIRE(lines == step.gate_count());
    REQUIRE(text.find("GATE RXX") != std::string::npos);
    REQUIRE(text.find("GATE RXY") != std::string::npos);
}

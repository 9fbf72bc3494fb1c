#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "spincavity/model.hpp"
#include "spincavity/rng.hpp"

using namespace spincavity;
using Catch::Approx;

namespace {

ModelParams random_params(SplitMix64& rng) {
    const int L = 4 + static_cast<int>(rng.next_u64() % 7);
    const int N = 1 + static_cast<int>(rng.next_u64() % 2);
    std::vector<int> pos;
    pos.push_back(1 + static_cast<int>(rng.next_u64() % 2));
    if (N == 2) pos.push_back(pos[0] + 1 + static_cast<int>(rng.next_u64() % (L - 1 - pos[0] - 1 + 1)));
    ModelParams p = ModelParams::ordered_chain(L, pos, 0.0, 0.0);
    for (double& d : p.delta_c) d = rng.uniform(-1.0, 1.0);
    for (double& d : p.delta_n) d = rng.uniform(-1.0, 1.0);
    for (double& j : p.J_c) j = rng.uniform(0.0, 1.5);
    for (double& g : p.g_left) g = rng.uniform(0.0, 0.4);
    for (double& g : p.g_right) g = rng.uniform(0.0, 0.4);
    for (double& f : p.phi) f = rng.uniform(0.0, std::numbers::pi / 2);
    return p;
}

} // namespace

TEST_CASE("canonical site ordering interleaves atoms by position") {
    const auto p = ModelParams::ordered_chain(10, {2, 8}, 0.1, 0.3);
    const auto ord = SiteOrdering::from(p);
    REQUIRE(ord.total() == 12);
    std::string labels;
    for (int s = 0; s < ord.total(); ++s) {
        if (s) labels += ',';
        labels += ord.label_string(s);
    }
    REQUIRE(labels == "c1,c2,n1,c3,c4,c5,c6,c7,c8,n2,c9,c10");
    REQUIRE(ord.atom_slot[0] == 2);
    REQUIRE(ord.atom_slot[1] == 9);
}

TEST_CASE("single-excitation matrix matches the printed L=10 layout entry by entry") {
    ModelParams p = ModelParams::ordered_chain(10, {2, 8}, 0.1, std::numbers::pi / 4);
    for (int i = 0; i < 10; ++i) p.delta_c[static_cast<std::size_t>(i)] = 0.01 * (i + 1);
    p.delta_n = {0.5, 0.6};
    for (int i = 0; i < 9; ++i) p.J_c[static_cast<std::size_t>(i)] = 1.0 + 0.1 * i;
    const Complex eip = std::polar(0.1, std::numbers::pi / 4);  // g e^{+i phi}
    const Complex eim = std::conj(eip);

    ComplexMatrix expect = ComplexMatrix::Zero(12, 12);
    // row/col order: c1 c2 n1 c3 c4 c5 c6 c7 c8 n2 c9 c10
    const int c[10] = {0, 1, 3, 4, 5, 6, 7, 8, 10, 11};
    const int n1 = 2, n2 = 9;
    for (int i = 0; i < 10; ++i) expect(c[i], c[i]) = p.delta_c[static_cast<std::size_t>(i)];
    expect(n1, n1) = 0.5;
    expect(n2, n2) = 0.6;
    for (int i = 0; i < 9; ++i) {
        expect(c[i], c[i + 1]) = p.J_c[static_cast<std::size_t>(i)];
        expect(c[i + 1], c[i]) = p.J_c[static_cast<std::size_t>(i)];
    }
    // row c_L, col n carries e^{+i phi}; row n, col c_R carries e^{+i phi}
    expect(c[1], n1) = eip; expect(n1, c[1]) = eim;
    expect(n1, c[2]) = eip; expect(c[2], n1) = eim;
    expect(c[7], n2) = eip; expect(n2, c[7]) = eim;
    expect(n2, c[8]) = eip; expect(c[8], n2) = eim;

    const ComplexMatrix h = build_single_excitation_h(p);
    REQUIRE((h - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("decoupled atoms leave a tridiagonal cavity plus isolated diagonals") {
    auto p = ModelParams::ordered_chain(8, {3, 6}, 0.0, 0.2);
    p.delta_n = {0.7, -0.4};
    const auto ord = SiteOrdering::from(p);
    const ComplexMatrix h = build_single_excitation_h(p);
    for (int a = 0; a < 2; ++a) {
        const int slot = ord.atom_slot[a];
        for (int s = 0; s < ord.total(); ++s) {
            if (s != slot) {
                REQUIRE(std::abs(h(slot, s)) == 0.0);
                REQUIRE(std::abs(h(s, slot)) == 0.0);
            }
        }
        REQUIRE(h(slot, slot) == Complex(p.delta_n[static_cast<std::size_t>(a)], 0.0));
    }
}

TEST_CASE("zero phase gives a real symmetric matrix") {
    const auto p = ModelParams::ordered_chain(7, {2, 5}, 0.13, 0.0);
    const ComplexMatrix h = build_single_excitation_h(p);
    REQUIRE(h.imag().cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constructed Hamiltonians are Hermitian") {
    SplitMix64 rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_params(rng);
        REQUIRE(hermiticity_defect(build_single_excitation_h(p)) < 1e-12);
        if (p.total_sites() <= 9) {
            REQUIRE(hermiticity_defect(build_full_h(p)) < 1e-12);
        }
    }
}

TEST_CASE("L=2 single-atom full Hamiltonian decouples as expected") {
    auto p = ModelParams::ordered_chain(2, {1}, 0.0, 0.0);
    const ComplexMatrix h = build_full_h(p);
    REQUIRE(h.rows() == 8);
    const auto ord = SiteOrdering::from(p);
    // one-excitation block: cavity pair hops with J=1, atom isolated (g=0)
    const auto idx = [](int slot) { return Eigen::Index(1) << slot; };
    REQUIRE(h(idx(ord.cavity_slot[0]), idx(ord.cavity_slot[1])) == Complex(1.0, 0.0));
    REQUIRE(std::abs(h(idx(ord.atom_slot[0]), idx(ord.cavity_slot[0]))) == 0.0);
    REQUIRE(std::abs(h(idx(ord.atom_slot[0]), idx(ord.atom_slot[1 - 1]))) == 0.0);
    REQUIRE(h.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one-excitation block of the full Hamiltonian equals the sector matrix") {
    for (auto [L, j] : {std::pair{6, 5}, {10, 8}}) {
        const auto p = ModelParams::ordered_chain(L, {2, j}, 0.1, std::numbers::pi / 4);
        const auto sparse = build_full_h_sparse(p);
        const auto h1 = build_single_excitation_h(p);
        const int n = p.total_sites();
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const Complex full = sparse.coeff(Eigen::Index(1) << a, Eigen::Index(1) << b);
                REQUIRE(std::abs(full - h1(a, b)) < 1e-12);
            }
        }
    }
}

TEST_CASE("sector eigenvalues agree between full and single-excitation matrices") {
    const auto p = ModelParams::ordered_chain(5, {1, 4}, 0.17, 0.6);
    const ComplexMatrix full = build_full_h(p);
    const int n = p.total_sites();
    ComplexMatrix block(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) block(a, b) = full(Eigen::Index(1) << a, Eigen::Index(1) << b);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s1(block);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s2(build_single_excitation_h(p));
    REQUIRE((s1.eigenvalues() - s2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("driving connects neighboring excitation sectors") {
    auto p = ModelParams::ordered_chain(3, {1}, 0.1, 0.0);
    p.omega[0] = 0.25;
    const ComplexMatrix h = build_full_h(p);
    const auto ord = SiteOrdering::from(p);
    REQUIRE(h(Eigen::Index(1) << ord.atom_slot[0], 0) == Complex(0.25, 0.0));
}

TEST_CASE("full-space guard rejects oversized systems") {
    const auto p = ModelParams::ordered_chain(14, {2, 12}, 0.1, 0.0);
    REQUIRE(p.total_sites() == 16);
    REQUIRE_THROWS_AS(build_full_h(p), SizeError);
}

TEST_CASE("cavity spectrum uses the closed form on uniform chains") {
    SECTION("L=3 energies") {
        const auto p = ModelParams::ordered_chain(3, {1}, 0.0, 0.0);
        const auto spec = cavity_spectrum(p);
        REQUIRE(spec.analytic);
        REQUIRE(spec.energies(0) == Approx(std::numbers::sqrt2).margin(1e-14));
        REQUIRE(spec.energies(1) == Approx(0.0).margin(1e-14));
        REQUIRE(spec.energies(2) == Approx(-std::numbers::sqrt2).margin(1e-14));
    }
    SECTION("transform orthogonality") {
        const auto p = ModelParams::ordered_chain(12, {2, 10}, 0.0, 0.0);
        const auto spec = cavity_spectrum(p);
        const RealMatrix gram = spec.modes * spec.modes.transpose();
        REQUIRE((gram - RealMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("analytic branch matches a tridiagonal eigendecomposition") {
        for (int L : {5, 17, 50}) {
            const auto p = ModelParams::ordered_chain(L, {2, 3}, 0.0, 0.0, 0.8);
            const auto spec = cavity_spectrum(p);
            RealMatrix tri = RealMatrix::Zero(L, L);
            for (int i = 0; i + 1 < L; ++i) tri(i, i + 1) = tri(i + 1, i) = 0.8;
            Eigen::SelfAdjointEigenSolver<RealMatrix> solver(tri);
            for (int k = 0; k < L; ++k) {
                REQUIRE(spec.energies(k) == Approx(solver.eigenvalues()(L - 1 - k)).margin(1e-10));
            }
        }
    }
    SECTION("non-uniform parameters fall back to numerics") {
        auto p = ModelParams::ordered_chain(6, {2, 4}, 0.0, 0.0);
        p.delta_c[3] = 0.5;
        const auto spec = cavity_spectrum(p);
        REQUIRE_FALSE(spec.analytic);
        REQUIRE(std::is_sorted(spec.energies.data(), spec.energies.data() + 6,
                               std::greater<double>()));
    }
}

TEST_CASE("parity of the cavity length controls the resonant mode") {
    for (int L = 4; L <= 21; ++L) {
        const auto p = ModelParams::ordered_chain(L, {1, 2}, 0.0, 0.0);
        const auto spec = cavity_spectrum(p);
        const double min_abs = spec.energies.cwiseAbs().minCoeff();
        if (L % 2 == 1) {
            REQUIRE(min_abs < 1e-12);
        } else {
            const double bound = 2.0 * std::cos(std::numbers::pi * L / (2.0 * (L + 1)));
            REQUIRE(min_abs >= bound - 1e-12);
            REQUIRE(min_abs > 0.0);
        }
    }
}

TEST_CASE("momentum coupling asymmetry follows the hopping phase") {
    SECTION("symmetric at phi=0") {
        const auto mc = momentum_coupling(0.1, 0.0, 50);
        REQUIRE(std::abs(mc.asymmetry) < 1e-14);
    }
    SECTION("right movers (K<0) couple stronger at phi=pi/4") {
        const auto mc = momentum_coupling(0.1, std::numbers::pi / 4, 50);
        REQUIRE(mc.asymmetry < -1e-3);
    }
    SECTION("zero coupling vanishes") {
        const auto mc = momentum_coupling(0.0, 0.7, 12);
        for (double g : mc.couplings) REQUIRE(g == 0.0);
    }
    SECTION("momenta cover [-pi, pi)") {
        const auto mc = momentum_coupling(1.0, 0.0, 9);
        REQUIRE(mc.momenta.size() == 9);
        REQUIRE(mc.momenta.front() >= -std::numbers::pi - 1e-12);
        REQUIRE(mc.momenta.back() < std::numbers::pi);
    }
}

TEST_CASE("parameter validation rejects inconsistent records") {
    auto p = ModelParams::ordered_chain(6, {2, 4}, 0.1, 0.1);
    SECTION("length mismatch") {
        p.delta_c.pop_back();
        REQUIRE_THROWS_AS(p.validate(), ParameterError);
    }
    SECTION("positions out of range") {
        p.pos = {0, 4};
        REQUIRE_THROWS_AS(p.validate(), ParameterError);
        p.pos = {2, 6};
        REQUIRE_THROWS_AS(p.validate(), ParameterError);
    }
    SECTION("positions must increase") {
        p.pos = {4, 4};
        REQUIRE_THROWS_AS(p.validate(), ParameterError);
    }
    SECTION("touching coupling windows are allowed") {
        const auto q = ModelParams::ordered_chain(5, {2, 3}, 0.1, 0.1);
        REQUIRE(SiteOrdering::from(q).total() == 7);
    }
    SECTION("negative hopping rejected") {
        p.J_c[2] = -0.1;
        REQUIRE_THROWS_AS(p.validate(), ParameterError);
    }
}

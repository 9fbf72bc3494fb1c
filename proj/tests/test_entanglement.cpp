#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "spincavity/entanglement.hpp"
#include "spincavity/model.hpp"
#include "spincavity/rng.hpp"

using namespace spincavity;
using Catch::Approx;

namespace {

StateVector random_single_excitation(const SiteOrdering& ord, SplitMix64& rng) {
    StateVector psi(ord.total());
    for (int s = 0; s < ord.total(); ++s) {
        psi(s) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    psi.normalize();
    return psi;
}

StateVector embed_single_excitation(const StateVector& psi, int n_sites) {
    StateVector full = StateVector::Zero(Eigen::Index(1) << n_sites);
    for (int s = 0; s < n_sites; ++s) full(Eigen::Index(1) << s) = psi(s);
    return full;
}

Eigen::Matrix2cd random_su2(SplitMix64& rng) {
    const double a = rng.uniform(0, 2 * std::numbers::pi);
    const double b = rng.uniform(0, 2 * std::numbers::pi);
    const double t = rng.uniform(0, std::numbers::pi / 2);
    Eigen::Matrix2cd u;
    u << std::polar(std::cos(t), a), std::polar(std::sin(t), b),
        -std::polar(std::sin(t), -b), std::polar(std::cos(t), -a);
    return u;
}

} // namespace

TEST_CASE("partial trace of product and mixed states") {
    const auto p = ModelParams::ordered_chain(5, {1, 3}, 0.1, 0.2);
    const auto ord = SiteOrdering::from(p);
    SECTION("all-ground product state") {
        StateVector full = StateVector::Zero(Eigen::Index(1) << ord.total());
        full(0) = 1.0;
        const ReducedState rho = partial_trace_atoms(full, ord);
        ReducedState expect = ReducedState::Zero();
        expect(0, 0) = 1.0;
        REQUIRE((rho - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("maximally mixed full state") {
        const Eigen::Index dim = Eigen::Index(1) << ord.total();
        const DensityMatrix rho_full =
            DensityMatrix::Identity(dim, dim) / static_cast<double>(dim);
        const ReducedState rho = partial_trace_atoms(rho_full, ord);
        REQUIRE((rho - 0.25 * ReducedState::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("dimension mismatch rejected") {
        StateVector bad = StateVector::Zero(10);
        REQUIRE_THROWS_AS(partial_trace_atoms(bad, ord), ParameterError);
    }
}

TEST_CASE("single-excitation reduction matches the explicit embedding") {
    const auto p = ModelParams::ordered_chain(8, {2, 6}, 0.1, 0.4);
    const auto ord = SiteOrdering::from(p);
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random_single_excitation(ord, rng);
        const ReducedState direct = reduced_state_single_excitation(psi, ord);
        const ReducedState via_full =
            partial_trace_atoms(embed_single_excitation(psi, ord.total()), ord);
        REQUIRE((direct - via_full).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(std::abs(direct.trace().real() - 1.0) < 1e-12);
    }
}

TEST_CASE("concurrence of canonical states") {
    SECTION("Bell state") {
        ReducedState rho = ReducedState::Zero();
        rho(1, 1) = rho(2, 2) = 0.5;
        rho(1, 2) = rho(2, 1) = 0.5;
        REQUIRE(concurrence(rho) == Approx(1.0).margin(1e-12));
    }
    SECTION("pure product states") {
        SplitMix64 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::Vector2cd a, b;
            a << Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            b << Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            a.normalize();
            b.normalize();
            Eigen::Vector4cd psi;
            psi << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
            const ReducedState rho = psi * psi.adjoint();
            REQUIRE(concurrence(rho) < 1e-8);
        }
    }
    SECTION("a|10> + b|01> + c|00> gives 2|ab|") {
        SplitMix64 rng(6);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::Vector3cd amp;
            amp << Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            amp.normalize();
            Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
            psi(2) = amp(0); // |10>
            psi(1) = amp(1); // |01>
            psi(0) = amp(2); // |00>
            const ReducedState rho = psi * psi.adjoint();
            REQUIRE(concurrence(rho) ==
                    Approx(2.0 * std::abs(amp(0)) * std::abs(amp(1))).margin(1e-10));
        }
    }
}

TEST_CASE("pure fast path agrees with the Wootters route on 1000 random states") {
    const auto p = ModelParams::ordered_chain(10, {2, 8}, 0.1, 0.5);
    const auto ord = SiteOrdering::from(p);
    SplitMix64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const StateVector psi = random_single_excitation(ord, rng);
        const double fast =
            concurrence_pure_single_exc(psi(ord.atom_slot[0]), psi(ord.atom_slot[1]));
        const double wootters = concurrence(reduced_state_single_excitation(psi, ord));
        worst = std::max(worst, std::abs(fast - wootters));
    }
    REQUIRE(worst < 1e-10);
}

TEST_CASE("concurrence is invariant under local unitaries") {
    const auto p = ModelParams::ordered_chain(6, {2, 4}, 0.1, 0.3);
    const auto ord = SiteOrdering::from(p);
    SplitMix64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const ReducedState rho =
            reduced_state_single_excitation(random_single_excitation(ord, rng), ord);
        Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
        const Eigen::Matrix2cd u1 = random_su2(rng);
        const Eigen::Matrix2cd u2 = random_su2(rng);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) u.block<2, 2>(2 * i, 2 * j) = u1(i, j) * u2;
        }
        const ReducedState rotated = u * rho * u.adjoint();
        REQUIRE(std::abs(concurrence(rotated) - concurrence(rho)) < 1e-9);
    }
}

TEST_CASE("inverse participation ratio") {
    SECTION("uniform eigenstate") {
        const int n = 8;
        const ComplexMatrix h = -ComplexMatrix::Ones(n, n);
        const auto res = ipr(h);
        // the lowest eigenvalue -n belongs to the uniform vector
        REQUIRE(res.energies(0) == Approx(-static_cast<double>(n)).margin(1e-12));
        REQUIRE(res.ipr(0) == Approx(1.0 / n).margin(1e-12));
    }
    SECTION("fully localized eigenstates") {
        ComplexMatrix h = ComplexMatrix::Zero(5, 5);
        h.diagonal() << 1, 2, 3, 4, 5;
        const auto res = ipr(h);
        for (int j = 0; j < 5; ++j) REQUIRE(res.ipr(j) == Approx(1.0).margin(1e-12));
    }
    SECTION("uniform chain modes carry the sine-mode value") {
        const auto p = ModelParams::ordered_chain(10, {2, 8}, 0.0, 0.0);
        const auto res = ipr(build_single_excitation_h(p));
        // oracle: I_k = sum_i (2/(L+1))^2 sin^4(pi k i / (L+1))
        const int L = 10;
        double expected = 0.0;
        for (int i = 1; i <= L; ++i) {
            const double s = std::sin(std::numbers::pi * 1 * i / (L + 1));
            expected += std::pow(2.0 / (L + 1) * s * s, 2);
        }
        REQUIRE(expected == Approx(3.0 / 22.0).margin(1e-12));
        int chain_modes = 0;
        for (int j = 0; j < res.energies.size(); ++j) {
            if (std::abs(res.energies(j)) > 1e-9) {
                REQUIRE(res.ipr(j) == Approx(expected).margin(1e-10));
                ++chain_modes;
            }
        }
        REQUIRE(chain_modes == 10);
    }
    SECTION("bounds hold for random Hamiltonians") {
        SplitMix64 rng(9);
        for (int trial = 0; trial < 5; ++trial) {
            ComplexMatrix h(7, 7);
            for (int i = 0; i < 7; ++i) {
                for (int j = 0; j < 7; ++j) h(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
            }
            h = 0.5 * (h + ComplexMatrix(h.adjoint()));
            const auto res = ipr(h);
            for (int j = 0; j < 7; ++j) {
                REQUIRE(res.ipr(j) >= 1.0 / 7 - 1e-12);
                REQUIRE(res.ipr(j) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("return probabilities read the atom populations") {
    const auto p = ModelParams::ordered_chain(6, {2, 4}, 0.1, 0.0);
    const auto ord = SiteOrdering::from(p);
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot[0]) = 1.0;
    SECTION("initial excitation on atom one") {
        const auto rp = return_probabilities({psi0}, ord);
        REQUIRE(rp.r1[0] == Approx(1.0));
        REQUIRE(rp.r2[0] == Approx(0.0).margin(1e-15));
    }
    SECTION("decoupled atom stays put") {
        const auto q = ModelParams::ordered_chain(6, {2, 4}, 0.0, 0.0);
        const Propagator prop(build_single_excitation_h(q));
        const auto states = prop.apply(psi0, std::vector<double>{0.0, 5.0, 50.0});
        const auto rp = return_probabilities(states, ord);
        for (double r : rp.r1) REQUIRE(r == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("peak statistics report the first occurrence") {
    SECTION("sampled |sin| trace") {
        ConcurrenceTrace trace;
        const double omega = 2.0 * 0.01; // 2 g^2 / J at g = 0.1
        trace.times = time_grid(400.0, 0.1);
        for (double t : trace.times) trace.c.push_back(std::abs(std::sin(omega * t)));
        const auto stats = peak_stats(trace, 1e-4);
        REQUIRE(stats.c_max == Approx(1.0).margin(1e-4));
        REQUIRE(std::abs(stats.t_max - std::numbers::pi / (4.0 * 0.01)) <= 0.2);
    }
    SECTION("constant trace reports the first grid point") {
        ConcurrenceTrace trace;
        trace.times = {1.0, 2.0, 3.0};
        trace.c = {0.5, 0.5, 0.5};
        REQUIRE(peak_stats(trace).t_max == 1.0);
    }
    SECTION("two equal peaks report the earlier") {
        ConcurrenceTrace trace;
        trace.times = {0, 1, 2, 3, 4};
        trace.c = {0.0, 0.8, 0.1, 0.8, 0.0};
        REQUIRE(peak_stats(trace).t_max == 1.0);
    }
    SECTION("empty trace rejected") {
        ConcurrenceTrace trace;
        REQUIRE_THROWS_AS(peak_stats(trace), ParameterError);
    }
}

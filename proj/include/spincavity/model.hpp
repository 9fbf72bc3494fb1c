// model.hpp — Spin-cavity model parameters and Hamiltonian constructors
//
// A chain of L cavity spins with open boundaries hosts N two-level atoms.
// Atom a couples to the two cavity spins pos[a] and pos[a]+1 with amplitudes
// g_left[a], g_right[a] and hopping phase phi[a]. The canonical site ordering
// interleaves atoms with the cavity by physical position, e.g. for L=10,
// pos=(2,8): c1 c2 n1 c3 c4 c5 c6 c7 c8 n2 c9 c10. All matrix constructors
// and partial traces in this library reference that ordering.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spincavity/core.hpp"

namespace spincavity {

struct ModelParams {
    int L = 0;                        // cavity length
    int N = 0;                        // atom count
    std::vector<double> delta_c;      // L on-site energies (units of J)
    std::vector<double> delta_n;      // N atom energies
    std::vector<double> J_c;          // L-1 hoppings, nonnegative
    std::vector<double> g_left;       // N couplings to cavity spin pos[a]
    std::vector<double> g_right;      // N couplings to cavity spin pos[a]+1
    std::vector<double> phi;          // N hopping phases in [0, pi/2]
    std::vector<double> omega;        // N driving strengths, nonnegative
    std::vector<int> pos;             // N positions, strictly increasing, in [1, L-1]

    int total_sites() const { return L + N; }

    // Resonant uniform chain: all on-site energies zero, uniform hopping J,
    // symmetric coupling amplitude g and common hopping phase for every atom.
    static ModelParams ordered_chain(int length, std::vector<int> positions, double g,
                                     double hopping_phase, double J = 1.0) {
        ModelParams p;
        p.L = length;
        p.N = static_cast<int>(positions.size());
        p.pos = std::move(positions);
        p.delta_c.assign(p.L, 0.0);
        p.delta_n.assign(p.N, 0.0);
        p.J_c.assign(p.L > 0 ? p.L - 1 : 0, J);
        p.g_left.assign(p.N, g);
        p.g_right.assign(p.N, g);
        p.phi.assign(p.N, hopping_phase);
        p.omega.assign(p.N, 0.0);
        p.validate();
        return p;
    }

    void validate() const {
        if (L < 1) throw ParameterError("ModelParams: L must be positive");
        if (N < 0) throw ParameterError("ModelParams: N must be nonnegative");
        auto check_len = [&](std::size_t have, std::size_t want, const char* name) {
            if (have != want) {
                throw ParameterError(std::string("ModelParams: ") + name + " has length " +
                                     std::to_string(have) + ", expected " + std::to_string(want));
            }
        };
        check_len(delta_c.size(), static_cast<std::size_t>(L), "delta_c");
        check_len(delta_n.size(), static_cast<std::size_t>(N), "delta_n");
        check_len(J_c.size(), static_cast<std::size_t>(L - 1), "J_c");
        check_len(g_left.size(), static_cast<std::size_t>(N), "g_left");
        check_len(g_right.size(), static_cast<std::size_t>(N), "g_right");
        check_len(phi.size(), static_cast<std::size_t>(N), "phi");
        check_len(omega.size(), static_cast<std::size_t>(N), "omega");
        check_len(pos.size(), static_cast<std::size_t>(N), "pos");
        for (double j : J_c) {
            if (j < 0.0) throw ParameterError("ModelParams: hoppings must be nonnegative");
        }
        for (int a = 0; a < N; ++a) {
            if (g_left[a] < 0.0 || g_right[a] < 0.0) {
                throw ParameterError("ModelParams: couplings must be nonnegative");
            }
            if (omega[a] < 0.0) throw ParameterError("ModelParams: drivings must be nonnegative");
            if (phi[a] < -1e-12 || phi[a] > std::numbers::pi / 2 + 1e-12) {
                throw ParameterError("ModelParams: hopping phase must lie in [0, pi/2]");
            }
            if (pos[a] < 1 || pos[a] > L - 1) {
                throw ParameterError("ModelParams: atom position out of range [1, L-1]");
            }
            // Coupling windows may touch (pos[a]+1 == pos[a+1]) but atoms must
            // sit at strictly increasing positions.
            if (a > 0 && pos[a] <= pos[a - 1]) {
                throw ParameterError("ModelParams: atom positions must be strictly increasing");
            }
        }
    }

    // Coupling amplitude of atom a in the symmetric-amplitude case.
    double symmetric_g(int a) const {
        if (g_left[a] != g_right[a]) {
            throw ParameterError("ModelParams: left/right couplings differ; no symmetric amplitude");
        }
        return g_left[a];
    }

    bool uniform_cavity() const {
        for (double d : delta_c) {
            if (d != delta_c.front()) return false;
        }
        for (double j : J_c) {
            if (j != J_c.front()) return false;
        }
        return true;
    }
};

// ----------------------------- Site ordering --------------------------------

enum class SiteKind { Cavity, Atom };

struct SiteLabel {
    SiteKind kind;
    int index; // 0-based cavity or atom index
};

struct SiteOrdering {
    std::vector<SiteLabel> labels;  // slot -> site
    std::vector<int> cavity_slot;   // cavity index (0-based) -> slot
    std::vector<int> atom_slot;     // atom index -> slot

    static SiteOrdering from(const ModelParams& p) {
        p.validate();
        SiteOrdering ord;
        ord.cavity_slot.resize(p.L);
        ord.atom_slot.resize(p.N);
        int atom = 0;
        for (int i = 0; i < p.L; ++i) {
            ord.cavity_slot[i] = static_cast<int>(ord.labels.size());
            ord.labels.push_back({SiteKind::Cavity, i});
            while (atom < p.N && p.pos[atom] == i + 1) {
                ord.atom_slot[atom] = static_cast<int>(ord.labels.size());
                ord.labels.push_back({SiteKind::Atom, atom});
                ++atom;
            }
        }
        return ord;
    }

    int total() const { return static_cast<int>(labels.size()); }

    std::string label_string(int slot) const {
        const SiteLabel& l = labels.at(static_cast<std::size_t>(slot));
        return (l.kind == SiteKind::Cavity ? "c" : "n") + std::to_string(l.index + 1);
    }
};

// ------------------------- Hamiltonian construction -------------------------

namespace detail {

struct FlipFlop {
    int from;        // slot carrying sigma^-
    int to;          // slot carrying sigma^+
    Complex amp;     // coefficient of sigma^+_to sigma^-_from
};

// All flip-flop terms of the excitation-conserving part, in the canonical
// left-to-right order (cavity bonds, then each atom's left and right pair).
inline std::vector<FlipFlop> flip_flop_terms(const ModelParams& p, const SiteOrdering& ord) {
    std::vector<FlipFlop> terms;
    for (int i = 0; i + 1 < p.L; ++i) {
        terms.push_back({.from = ord.cavity_slot[i], .to = ord.cavity_slot[i + 1],
                         .amp = Complex(p.J_c[i], 0.0)});
    }
    for (int a = 0; a < p.N; ++a) {
        const Complex conj_phase(std::cos(p.phi[a]), -std::sin(p.phi[a])); // e^{-i phi}
        const int left = ord.cavity_slot[p.pos[a] - 1];
        const int right = ord.cavity_slot[p.pos[a]];
        const int atom = ord.atom_slot[a];
        // g e^{-i phi} (sigma^+_n sigma^-_cL + sigma^+_cR sigma^-_n) + h.c.,
        // i.e. <c_L|H|n> and <n|H|c_R> both carry e^{+i phi}
        terms.push_back({.from = left, .to = atom, .amp = p.g_left[a] * conj_phase});
        terms.push_back({.from = atom, .to = right, .amp = p.g_right[a] * conj_phase});
    }
    return terms;
}

inline std::vector<double> slot_energies(const ModelParams& p, const SiteOrdering& ord) {
    std::vector<double> e(static_cast<std::size_t>(ord.total()));
    for (int i = 0; i < p.L; ++i) e[static_cast<std::size_t>(ord.cavity_slot[i])] = p.delta_c[i];
    for (int a = 0; a < p.N; ++a) e[static_cast<std::size_t>(ord.atom_slot[a])] = p.delta_n[a];
    return e;
}

} // namespace detail

// Single-excitation Hamiltonian over the canonical ordering (drivings are
// ignored: the single-excitation sector assumes Omega = 0).
inline ComplexMatrix build_single_excitation_h(const ModelParams& p) {
    p.validate();
    const SiteOrdering ord = SiteOrdering::from(p);
    const int n = ord.total();
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    const auto energies = detail::slot_energies(p, ord);
    for (int s = 0; s < n; ++s) h(s, s) = energies[static_cast<std::size_t>(s)];
    for (const auto& t : detail::flip_flop_terms(p, ord)) {
        // term amp * sigma^+_to sigma^-_from + h.c.
        h(t.to, t.from) += t.amp;
        h(t.from, t.to) += std::conj(t.amp);
    }
    return h;
}

inline constexpr int kFullSpaceMaxSites = 14;
inline constexpr int kSparseFullSpaceMaxSites = 24;

// Full 2^{L+N} Hamiltonian. Basis: bit s of the index is the occupation of
// ordering slot s (bit 0 = leftmost site).
inline Eigen::SparseMatrix<Complex> build_full_h_sparse(const ModelParams& p) {
    p.validate();
    const int n = p.total_sites();
    if (n > kSparseFullSpaceMaxSites) {
        throw SizeError("build_full_h_sparse: more than " +
                        std::to_string(kSparseFullSpaceMaxSites) + " sites");
    }
    const SiteOrdering ord = SiteOrdering::from(p);
    const auto energies = detail::slot_energies(p, ord);
    const auto terms = detail::flip_flop_terms(p, ord);
    const std::size_t dim = std::size_t(1) << n;

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(dim * static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        double diag = 0.0;
        for (int s = 0; s < n; ++s) {
            if (idx >> s & 1u) diag += energies[static_cast<std::size_t>(s)];
        }
        if (diag != 0.0) trip.emplace_back(idx, idx, Complex(diag, 0.0));
        for (const auto& t : terms) {
            if ((idx >> t.from & 1u) && !(idx >> t.to & 1u)) {
                const std::size_t jdx = (idx ^ (std::size_t(1) << t.from)) | (std::size_t(1) << t.to);
                trip.emplace_back(jdx, idx, t.amp);
                trip.emplace_back(idx, jdx, std::conj(t.amp));
            }
        }
        for (int a = 0; a < p.N; ++a) {
            if (p.omega[a] == 0.0) continue;
            // Omega (sigma^+ + sigma^-) flips the atom occupation
            const std::size_t jdx = idx ^ (std::size_t(1) << ord.atom_slot[a]);
            trip.emplace_back(jdx, idx, Complex(p.omega[a], 0.0));
        }
    }
    Eigen::SparseMatrix<Complex> h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

inline ComplexMatrix build_full_h(const ModelParams& p) {
    if (p.total_sites() > kFullSpaceMaxSites) {
        throw SizeError("build_full_h: more than " + std::to_string(kFullSpaceMaxSites) +
                        " sites; dense full space too large");
    }
    return ComplexMatrix(build_full_h_sparse(p));
}

// ------------------------------ Cavity spectrum ------------------------------

struct CavitySpectrum {
    RealVector energies;  // mode energies, ordered by mode number k = 1..L
    RealMatrix modes;     // column k-1 holds the site amplitudes of mode k
    bool analytic = false;
};

// Eigenmodes of the bare cavity chain. For a uniform chain the closed-form
// sine transform and dispersion Delta + 2J cos(pi k/(L+1)) are used; any
// non-uniform parameter set falls back to a tridiagonal eigendecomposition
// (reported in the same mode ordering, energies descending).
inline CavitySpectrum cavity_spectrum(const ModelParams& p) {
    p.validate();
    const int L = p.L;
    CavitySpectrum spec;
    spec.energies.resize(L);
    spec.modes.resize(L, L);
    if (p.uniform_cavity()) {
        spec.analytic = true;
        const double delta = p.delta_c.front();
        const double J = L > 1 ? p.J_c.front() : 0.0;
        const double norm = std::sqrt(2.0 / (L + 1));
        for (int k = 1; k <= L; ++k) {
            spec.energies(k - 1) = delta + 2.0 * J * std::cos(std::numbers::pi * k / (L + 1));
            for (int i = 1; i <= L; ++i) {
                spec.modes(i - 1, k - 1) = norm * std::sin(std::numbers::pi * k * i / (L + 1));
            }
        }
        return spec;
    }
    RealMatrix h = RealMatrix::Zero(L, L);
    for (int i = 0; i < L; ++i) h(i, i) = p.delta_c[i];
    for (int i = 0; i + 1 < L; ++i) {
        h(i, i + 1) = p.J_c[i];
        h(i + 1, i) = p.J_c[i];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw AccuracyError("cavity_spectrum: eigendecomposition failed");
    }
    // solver returns ascending energies; mode number increases with decreasing energy
    for (int k = 0; k < L; ++k) {
        spec.energies(k) = solver.eigenvalues()(L - 1 - k);
        spec.modes.col(k) = solver.eigenvectors().col(L - 1 - k);
    }
    return spec;
}

// --------------------------- Momentum-space coupling -------------------------

struct MomentumCoupling {
    std::vector<double> momenta;    // K = 2 pi j / L in [-pi, pi), lattice constant 1
    std::vector<double> couplings;  // g_K = (2g/sqrt(L)) cos(K/2 + phi)
    double asymmetry = 0.0;         // sum_{K>0} g_K^2 - sum_{K<0} g_K^2
};

// Periodic-boundary diagnostic: the coupling of one atom to momentum modes.
// A phase phi != 0 makes g_K asymmetric in K; modes with K < 0 move right.
inline MomentumCoupling momentum_coupling(double g, double phi, int L) {
    if (L < 2) throw ParameterError("momentum_coupling: L must be at least 2");
    MomentumCoupling mc;
    mc.momenta.reserve(static_cast<std::size_t>(L));
    mc.couplings.reserve(static_cast<std::size_t>(L));
    const double norm = 2.0 * g / std::sqrt(static_cast<double>(L));
    for (int j = -(L / 2); j < (L + 1) / 2; ++j) {
        const double K = 2.0 * std::numbers::pi * j / L;
        const double gk = norm * std::cos(0.5 * K + phi);
        mc.momenta.push_back(K);
        mc.couplings.push_back(gk);
        if (K > 0.0) mc.asymmetry += gk * gk;
        if (K < 0.0) mc.asymmetry -= gk * gk;
    }
    return mc;
}

} // namespace spincavity

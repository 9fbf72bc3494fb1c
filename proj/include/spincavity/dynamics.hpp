// dynamics.hpp — Exact time evolution: dense eigendecomposition, sparse
// Krylov stepping, and damped single-excitation propagation
//
// Every Hamiltonian here is time independent, so unitary evolution reuses a
// single eigendecomposition across all requested times. The Krylov path
// serves full-space scans whose dimension makes a dense solve wasteful; both
// paths agree to solver tolerance and are cross-checked in the test suite.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <vector>

#include "spincavity/core.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

inline constexpr double kUnitNormTol = 1e-10;

inline void require_normalized(const StateVector& psi, double tol = kUnitNormTol) {
    if (std::abs(psi.norm() - 1.0) > tol) {
        throw ParameterError("state vector is not normalized");
    }
}

inline void require_sorted_nonnegative(const std::vector<double>& times) {
    double prev = 0.0;
    for (double t : times) {
        if (t < 0.0 || t < prev) {
            throw ParameterError("times must be sorted and nonnegative");
        }
        prev = t;
    }
}

// ------------------------------- Propagator ---------------------------------

// Cached eigendecomposition of a Hermitian H; exp(-iHt) applied per time.
struct Propagator {
    RealVector energies;
    ComplexMatrix modes; // columns are eigenvectors

    explicit Propagator(const ComplexMatrix& h, double herm_tol = 1e-10) {
        require_hermitian(h, herm_tol, "Propagator Hamiltonian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
        if (solver.info() != Eigen::Success) {
            throw AccuracyError("Propagator: eigendecomposition failed");
        }
        energies = solver.eigenvalues();
        modes = solver.eigenvectors();
    }

    Eigen::Index dim() const { return energies.size(); }

    StateVector apply(const StateVector& psi0, double t) const {
        ComplexVector coeff = modes.adjoint() * psi0;
        for (Eigen::Index k = 0; k < coeff.size(); ++k) {
            coeff(k) *= std::polar(1.0, -energies(k) * t);
        }
        return modes * coeff;
    }

    std::vector<StateVector> apply(const StateVector& psi0, const std::vector<double>& times) const {
        const ComplexVector coeff0 = modes.adjoint() * psi0;
        std::vector<StateVector> out;
        out.reserve(times.size());
        ComplexVector coeff(coeff0.size());
        for (double t : times) {
            for (Eigen::Index k = 0; k < coeff.size(); ++k) {
                coeff(k) = coeff0(k) * std::polar(1.0, -energies(k) * t);
            }
            out.push_back(modes * coeff);
        }
        return out;
    }

    ComplexMatrix matrix(double t) const {
        ComplexVector phases(energies.size());
        for (Eigen::Index k = 0; k < energies.size(); ++k) {
            phases(k) = std::polar(1.0, -energies(k) * t);
        }
        return modes * phases.asDiagonal() * modes.adjoint();
    }
};

// psi(t) = exp(-iHt) psi0 for each requested time.
inline std::vector<StateVector> evolve_unitary(const ComplexMatrix& h, const StateVector& psi0,
                                               const std::vector<double>& times) {
    if (psi0.size() != h.rows()) throw ParameterError("evolve_unitary: dimension mismatch");
    require_normalized(psi0);
    require_sorted_nonnegative(times);
    return Propagator(h).apply(psi0, times);
}

// ----------------------------- Krylov propagation ---------------------------

// One Lanczos step: approximates exp(-iH dt) psi for sparse Hermitian H.
// Full reorthogonalization; the basis stays small (m <= ~40).
inline StateVector krylov_step(const Eigen::SparseMatrix<Complex>& h, const StateVector& psi,
                               double dt, int max_basis = 30) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return psi;
    const Eigen::Index dim = psi.size();
    std::vector<StateVector> basis;
    basis.reserve(static_cast<std::size_t>(max_basis));
    basis.push_back(psi / beta0);
    std::vector<double> alpha, beta;
    int m = 0;
    for (int j = 0; j < max_basis; ++j) {
        StateVector w = h * basis[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const Complex overlap = basis[k].dot(w);
            w -= overlap * basis[k];
            if (static_cast<int>(k) == j) alpha.push_back(overlap.real());
        }
        m = j + 1;
        const double b = w.norm();
        if (b < 1e-13 || j + 1 == max_basis) break;
        beta.push_back(b);
        basis.push_back(w / b);
    }
    RealMatrix t = RealMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j) t(j, j) = alpha[static_cast<std::size_t>(j)];
    for (int j = 0; j + 1 < m; ++j) {
        t(j, j + 1) = beta[static_cast<std::size_t>(j)];
        t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(t);
    ComplexVector small = ComplexVector::Zero(m);
    for (int k = 0; k < m; ++k) {
        const Complex phase = std::polar(1.0, -solver.eigenvalues()(k) * dt);
        small += phase * solver.eigenvectors()(0, k) * solver.eigenvectors().col(k);
    }
    StateVector out = StateVector::Zero(dim);
    for (int j = 0; j < m; ++j) out += small(j) * basis[static_cast<std::size_t>(j)];
    return beta0 * out;
}

// Evolve through a sorted time grid with Krylov substeps of at most max_dt.
inline std::vector<StateVector> evolve_krylov(const Eigen::SparseMatrix<Complex>& h,
                                              const StateVector& psi0,
                                              const std::vector<double>& times,
                                              double max_dt = 0.5, int max_basis = 30) {
    if (psi0.size() != h.rows()) throw ParameterError("evolve_krylov: dimension mismatch");
    require_normalized(psi0);
    require_sorted_nonnegative(times);
    std::vector<StateVector> out;
    out.reserve(times.size());
    StateVector psi = psi0;
    double now = 0.0;
    for (double t : times) {
        double remaining = t - now;
        while (remaining > 1e-12) {
            const double dt = std::min(remaining, max_dt);
            psi = krylov_step(h, psi, dt, max_basis);
            remaining -= dt;
        }
        now = t;
        out.push_back(psi);
    }
    return out;
}

// --------------------------- Damped sector evolution ------------------------

// With Omega = 0 and lowering-only dissipation, a state starting in the
// one-excitation sector stays in span{one excitation, vacuum}: the sector
// block of the master equation closes and evolves under the non-Hermitian
// H_eff = H - (i/2) diag(Gamma). The returned amplitudes are unnormalized;
// 1 - |psi|^2 is the accumulated vacuum population.
struct DecayPropagator {
    ComplexVector eigenvalues;        // complex eigenvalues of H_eff
    ComplexMatrix modes;              // right eigenvectors
    Eigen::PartialPivLU<ComplexMatrix> lu; // factors modes for coefficient solves

    DecayPropagator(const ComplexMatrix& h, const std::vector<double>& gammas) {
        require_hermitian(h, 1e-10, "DecayPropagator Hamiltonian");
        if (static_cast<Eigen::Index>(gammas.size()) != h.rows()) {
            throw ParameterError("DecayPropagator: gamma length mismatch");
        }
        ComplexMatrix heff = h;
        for (Eigen::Index s = 0; s < h.rows(); ++s) {
            if (gammas[static_cast<std::size_t>(s)] < 0.0) {
                throw ParameterError("DecayPropagator: negative decay rate");
            }
            heff(s, s) -= Complex(0.0, 0.5 * gammas[static_cast<std::size_t>(s)]);
        }
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(heff);
        if (solver.info() != Eigen::Success) {
            throw AccuracyError("DecayPropagator: eigendecomposition failed");
        }
        eigenvalues = solver.eigenvalues();
        modes = solver.eigenvectors();
        lu.compute(modes);
    }

    StateVector apply(const StateVector& psi0, double t) const {
        ComplexVector coeff = lu.solve(psi0);
        for (Eigen::Index k = 0; k < coeff.size(); ++k) {
            coeff(k) *= std::exp(Complex(0.0, -t) * eigenvalues(k));
        }
        return modes * coeff;
    }

    std::vector<StateVector> apply(const StateVector& psi0, const std::vector<double>& times) const {
        std::vector<StateVector> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(apply(psi0, t));
        return out;
    }
};

// ---------------------------- Excitation transport --------------------------

struct ExcitationPropagation {
    std::vector<double> times;
    RealMatrix occupations;          // slot x time, |<site|psi(t)>|^2
    std::vector<double> left_weight; // total cavity occupation left of the atom
    std::vector<double> right_weight;
    SiteOrdering ordering;
};

// Single-excitation transport from one initially occupied slot; used to map
// the emission direction versus hopping phase. Requires a single atom.
inline ExcitationPropagation propagate_excitation(const ModelParams& p, int site0,
                                                  const std::vector<double>& times) {
    p.validate();
    if (p.N != 1) throw ParameterError("propagate_excitation: exactly one atom expected");
    require_sorted_nonnegative(times);
    const SiteOrdering ord = SiteOrdering::from(p);
    const int n = ord.total();
    if (site0 < 0 || site0 >= n) throw ParameterError("propagate_excitation: bad initial slot");

    const Propagator prop(build_single_excitation_h(p));
    StateVector psi0 = StateVector::Zero(n);
    psi0(site0) = 1.0;
    const auto states = prop.apply(psi0, times);

    ExcitationPropagation result;
    result.times = times;
    result.ordering = ord;
    result.occupations.resize(n, static_cast<Eigen::Index>(times.size()));
    result.left_weight.resize(times.size());
    result.right_weight.resize(times.size());
    const int atom_slot = ord.atom_slot[0];
    for (std::size_t it = 0; it < times.size(); ++it) {
        double left = 0.0, right = 0.0;
        for (int s = 0; s < n; ++s) {
            const double occ = std::norm(states[it](s));
            result.occupations(s, static_cast<Eigen::Index>(it)) = occ;
            if (ord.labels[static_cast<std::size_t>(s)].kind == SiteKind::Cavity) {
                if (s < atom_slot) left += occ;
                if (s > atom_slot) right += occ;
            }
        }
        result.left_weight[it] = left;
        result.right_weight[it] = right;
    }
    return result;
}

} // namespace spincavity

// entanglement.hpp — Reduced states of the atom pair, Wootters concurrence,
// inverse participation ratio, return probabilities, and peak statistics

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "spincavity/core.hpp"
#include "spincavity/dynamics.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

// 4x4 density matrix of the two atoms, basis |n1 n2> = {00, 01, 10, 11}.
using ReducedState = Eigen::Matrix4cd;

// ------------------------------- Partial trace -------------------------------

// Reduced atom-pair state of a single-excitation amplitude vector (dimension
// L+N in the canonical ordering). The vector may be sub-normalized; the
// missing weight plus any extra_vacuum_weight lands on |00><00|.
inline ReducedState reduced_state_single_excitation(const StateVector& psi,
                                                    const SiteOrdering& ord,
                                                    double extra_vacuum_weight = 0.0) {
    if (psi.size() != ord.total()) {
        throw ParameterError("reduced_state_single_excitation: dimension mismatch");
    }
    if (ord.atom_slot.size() != 2) {
        throw ParameterError("reduced_state_single_excitation: two atoms expected");
    }
    const Complex a = psi(ord.atom_slot[0]);
    const Complex b = psi(ord.atom_slot[1]);
    double cavity = extra_vacuum_weight;
    for (int s = 0; s < ord.total(); ++s) {
        if (ord.labels[static_cast<std::size_t>(s)].kind == SiteKind::Cavity) {
            cavity += std::norm(psi(s));
        }
    }
    ReducedState rho = ReducedState::Zero();
    rho(0, 0) = cavity;
    rho(1, 1) = std::norm(b);
    rho(2, 2) = std::norm(a);
    rho(2, 1) = a * std::conj(b);
    rho(1, 2) = std::conj(rho(2, 1));
    return rho;
}

// Reduced atom-pair state of a full-space density matrix (dimension 2^{L+N};
// bit s of a basis index is the occupation of ordering slot s).
inline ReducedState partial_trace_atoms(const DensityMatrix& rho, const SiteOrdering& ord) {
    if (ord.atom_slot.size() != 2) throw ParameterError("partial_trace_atoms: two atoms expected");
    const int n = ord.total();
    if (rho.rows() != rho.cols() || rho.rows() != (Eigen::Index(1) << n)) {
        throw ParameterError("partial_trace_atoms: dimension mismatch");
    }
    const std::size_t bit1 = std::size_t(1) << ord.atom_slot[0];
    const std::size_t bit2 = std::size_t(1) << ord.atom_slot[1];
    std::vector<std::size_t> cavity_bits;
    for (int s = 0; s < n; ++s) {
        if (ord.labels[static_cast<std::size_t>(s)].kind == SiteKind::Cavity) {
            cavity_bits.push_back(std::size_t(1) << s);
        }
    }
    const std::size_t n_cav = cavity_bits.size();
    ReducedState out = ReducedState::Zero();
    for (std::size_t c = 0; c < (std::size_t(1) << n_cav); ++c) {
        std::size_t base = 0;
        for (std::size_t k = 0; k < n_cav; ++k) {
            if (c >> k & 1u) base |= cavity_bits[k];
        }
        for (int r = 0; r < 4; ++r) {
            const std::size_t ri = base | (r & 2 ? bit1 : 0u) | (r & 1 ? bit2 : 0u);
            for (int col = 0; col < 4; ++col) {
                const std::size_t ci = base | (col & 2 ? bit1 : 0u) | (col & 1 ? bit2 : 0u);
                out(r, col) += rho(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(ci));
            }
        }
    }
    return out;
}

inline ReducedState partial_trace_atoms(const StateVector& psi, const SiteOrdering& ord) {
    const int n = ord.total();
    if (psi.size() == n) {
        return reduced_state_single_excitation(psi, ord);
    }
    if (psi.size() == (Eigen::Index(1) << n)) {
        const std::size_t bit1 = std::size_t(1) << ord.atom_slot.at(0);
        const std::size_t bit2 = std::size_t(1) << ord.atom_slot.at(1);
        const std::size_t mask = bit1 | bit2;
        const std::size_t dim = static_cast<std::size_t>(psi.size());
        ReducedState out = ReducedState::Zero();
        std::array<Complex, 4> amp;
        for (std::size_t base = 0; base < dim; ++base) {
            if (base & mask) continue; // enumerate cavity configurations once
            for (int pattern = 0; pattern < 4; ++pattern) {
                const std::size_t idx = base | (pattern & 2 ? bit1 : 0u) | (pattern & 1 ? bit2 : 0u);
                amp[static_cast<std::size_t>(pattern)] = psi(static_cast<Eigen::Index>(idx));
            }
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    out(r, c) += amp[static_cast<std::size_t>(r)] * std::conj(amp[static_cast<std::size_t>(c)]);
                }
            }
        }
        return out;
    }
    throw ParameterError("partial_trace_atoms: state dimension is neither L+N nor 2^{L+N}");
}

// -------------------------------- Concurrence --------------------------------

// Wootters concurrence of a two-qubit state: C = max{0, sqrt(l1) - sqrt(l2)
// - sqrt(l3) - sqrt(l4)} with l_i the eigenvalues of rho (sy x sy) rho*
// (sy x sy) in decreasing order. Those eigenvalues equal the eigenvalues of
// the Hermitian matrix sqrt(rho) rhot sqrt(rho), which is what gets
// diagonalized: the non-normal product loses ~8 digits on its clustered zero
// eigenvalues, the Hermitian route keeps full precision.
inline double concurrence(const ReducedState& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
        throw ParameterError("concurrence: state not Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-6) {
        throw ParameterError("concurrence: state trace differs from one");
    }
    ReducedState flip = ReducedState::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    Eigen::SelfAdjointEigenSolver<ReducedState> rho_solver(rho);
    Eigen::Vector4d d = rho_solver.eigenvalues();
    for (int k = 0; k < 4; ++k) d(k) = std::sqrt(std::max(0.0, d(k)));
    const ReducedState sqrt_rho =
        rho_solver.eigenvectors() * d.asDiagonal() * rho_solver.eigenvectors().adjoint();
    const ReducedState product = sqrt_rho * flip * rho.conjugate() * flip * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<ReducedState> solver(
        ReducedState(0.5 * (product + product.adjoint())));
    // eigenvalues at the solver's noise floor are exact zeros; without the
    // cut their square roots would contaminate C at the 1e-8 level
    constexpr double noise_floor = 64.0 * std::numeric_limits<double>::epsilon();
    std::array<double, 4> lambda{};
    for (int k = 0; k < 4; ++k) {
        const double v = solver.eigenvalues()(k);
        lambda[static_cast<std::size_t>(k)] = v < noise_floor ? 0.0 : std::sqrt(v);
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

// Fast path for a pure single-excitation state a|10> + b|01> + c|00>.
inline double concurrence_pure_single_exc(Complex a, Complex b) {
    if (std::norm(a) + std::norm(b) > 1.0 + 1e-9) {
        throw ParameterError("concurrence_pure_single_exc: amplitudes exceed unit norm");
    }
    return 2.0 * std::abs(a) * std::abs(b);
}

// ----------------------------- Concurrence traces ----------------------------

struct ConcurrenceTrace {
    std::vector<double> times;
    std::vector<double> c;
    double c_max = 0.0;
    double t_max = 0.0;

    void finalize(double peak_tol = 1e-4);
};

struct PeakStats {
    double c_max = 0.0;
    double t_max = 0.0;
};

// Global maximum and the time of its first occurrence: the earliest local
// maximum of the sampled trace whose value lies within peak_tol of the global
// maximum. A flat trace reports the first grid point.
inline PeakStats peak_stats(const ConcurrenceTrace& trace, double peak_tol = 1e-4) {
    const std::size_t n = trace.c.size();
    if (n == 0 || trace.times.size() != n) {
        throw ParameterError("peak_stats: empty or inconsistent trace");
    }
    PeakStats stats;
    stats.c_max = *std::max_element(trace.c.begin(), trace.c.end());
    for (std::size_t i = 0; i < n; ++i) {
        const bool rise = i == 0 || trace.c[i] >= trace.c[i - 1];
        const bool fall = i + 1 == n || trace.c[i] >= trace.c[i + 1];
        if (rise && fall && trace.c[i] >= stats.c_max - peak_tol) {
            stats.t_max = trace.times[i];
            return stats;
        }
    }
    stats.t_max = trace.times.back();
    return stats;
}

inline void ConcurrenceTrace::finalize(double peak_tol) {
    const PeakStats stats = peak_stats(*this, peak_tol);
    c_max = stats.c_max;
    t_max = stats.t_max;
}

// Concurrence trace of a single-excitation evolution under a cached
// propagator; also reports the per-atom return probabilities.
struct SectorTraceResult {
    ConcurrenceTrace trace;
    std::vector<double> r1;
    std::vector<double> r2;
};

inline SectorTraceResult concurrence_trace_single_excitation(const Propagator& prop,
                                                             const StateVector& psi0,
                                                             const SiteOrdering& ord,
                                                             const std::vector<double>& times,
                                                             double peak_tol = 1e-4) {
    if (ord.atom_slot.size() != 2) {
        throw ParameterError("concurrence_trace_single_excitation: two atoms expected");
    }
    SectorTraceResult result;
    result.trace.times = times;
    result.trace.c.resize(times.size());
    result.r1.resize(times.size());
    result.r2.resize(times.size());
    const ComplexVector coeff0 = prop.modes.adjoint() * psi0;
    ComplexVector coeff(coeff0.size());
    for (std::size_t it = 0; it < times.size(); ++it) {
        for (Eigen::Index k = 0; k < coeff.size(); ++k) {
            coeff(k) = coeff0(k) * std::polar(1.0, -prop.energies(k) * times[it]);
        }
        const Complex a = prop.modes.row(ord.atom_slot[0]) * coeff;
        const Complex b = prop.modes.row(ord.atom_slot[1]) * coeff;
        result.trace.c[it] = concurrence_pure_single_exc(a, b);
        result.r1[it] = std::norm(a);
        result.r2[it] = std::norm(b);
    }
    result.trace.finalize(peak_tol);
    return result;
}

// Same trace for the damped sector evolution (unnormalized amplitudes).
inline SectorTraceResult concurrence_trace_damped(const DecayPropagator& prop,
                                                  const StateVector& psi0,
                                                  const SiteOrdering& ord,
                                                  const std::vector<double>& times,
                                                  double peak_tol = 1e-4) {
    SectorTraceResult result;
    result.trace.times = times;
    result.trace.c.resize(times.size());
    result.r1.resize(times.size());
    result.r2.resize(times.size());
    for (std::size_t it = 0; it < times.size(); ++it) {
        const StateVector psi = prop.apply(psi0, times[it]);
        const Complex a = psi(ord.atom_slot.at(0));
        const Complex b = psi(ord.atom_slot.at(1));
        result.trace.c[it] = 2.0 * std::abs(a) * std::abs(b);
        result.r1[it] = std::norm(a);
        result.r2[it] = std::norm(b);
    }
    result.trace.finalize(peak_tol);
    return result;
}

// ----------------------- Inverse participation ratio -------------------------

struct IprResult {
    RealVector energies; // eigenvalues, ascending
    RealVector ipr;      // I_j = sum_i |beta_i^j|^4 per eigenstate
    double mean = 0.0;
};

inline IprResult ipr(const ComplexMatrix& h) {
    require_hermitian(h, 1e-10, "ipr Hamiltonian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw AccuracyError("ipr: eigendecomposition failed");
    IprResult result;
    result.energies = solver.eigenvalues();
    result.ipr.resize(h.rows());
    for (Eigen::Index j = 0; j < h.rows(); ++j) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            sum += std::norm(solver.eigenvectors()(i, j)) * std::norm(solver.eigenvectors()(i, j));
        }
        result.ipr(j) = sum;
    }
    result.mean = result.ipr.mean();
    return result;
}

// ---------------------------- Return probabilities ---------------------------

struct ReturnProbabilities {
    std::vector<double> r1;
    std::vector<double> r2;
};

inline ReturnProbabilities return_probabilities(const std::vector<StateVector>& states,
                                                const SiteOrdering& ord) {
    if (ord.atom_slot.size() != 2) throw ParameterError("return_probabilities: two atoms expected");
    ReturnProbabilities rp;
    rp.r1.reserve(states.size());
    rp.r2.reserve(states.size());
    for (const auto& psi : states) {
        if (psi.size() != ord.total()) {
            throw ParameterError("return_probabilities: single-excitation states expected");
        }
        rp.r1.push_back(std::norm(psi(ord.atom_slot[0])));
        rp.r2.push_back(std::norm(psi(ord.atom_slot[1])));
    }
    return rp;
}

// ------------------------------- Time grids ----------------------------------

inline std::vector<double> time_grid(double t_end, double dt, double t_start = 0.0) {
    if (dt <= 0.0 || t_end < t_start) throw ParameterError("time_grid: bad range");
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::floor((t_end - t_start) / dt + 1e-9));
    times.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) times.push_back(t_start + static_cast<double>(i) * dt);
    return times;
}

} // namespace spincavity

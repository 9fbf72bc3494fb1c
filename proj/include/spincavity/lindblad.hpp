// lindblad.hpp — Fixed-step RK4 integration of the Lindblad master equation
// with per-site lowering operators
//
// d rho / dt = i[rho, H] + sum_s (Gamma_s/2) (2 s^- rho s^+ - n_s rho - rho n_s)
//
// The dissipator acts site by site through bit masks; no Liouvillian matrix is
// ever formed. The integrator reruns at half step and fails loudly when the
// final reduced-state concurrence moves by more than the convergence budget.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <vector>

#include "spincavity/core.hpp"
#include "spincavity/dynamics.hpp"
#include "spincavity/entanglement.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

struct DissipationParams {
    std::vector<double> gamma_c; // cavity decay rates, length L
    std::vector<double> gamma_n; // atom decay rates, length N

    static DissipationParams uniform(const ModelParams& p, double gamma) {
        DissipationParams d;
        d.gamma_c.assign(static_cast<std::size_t>(p.L), gamma);
        d.gamma_n.assign(static_cast<std::size_t>(p.N), gamma);
        return d;
    }

    void validate(const ModelParams& p) const {
        if (gamma_c.size() != static_cast<std::size_t>(p.L) ||
            gamma_n.size() != static_cast<std::size_t>(p.N)) {
            throw ParameterError("DissipationParams: length mismatch");
        }
        for (double g : gamma_c) {
            if (g < 0.0) throw ParameterError("DissipationParams: negative cavity rate");
        }
        for (double g : gamma_n) {
            if (g < 0.0) throw ParameterError("DissipationParams: negative atom rate");
        }
    }

    // Decay rate per ordering slot
    std::vector<double> per_slot(const SiteOrdering& ord) const {
        std::vector<double> out(static_cast<std::size_t>(ord.total()), 0.0);
        for (int s = 0; s < ord.total(); ++s) {
            const SiteLabel& l = ord.labels[static_cast<std::size_t>(s)];
            out[static_cast<std::size_t>(s)] = l.kind == SiteKind::Cavity
                                                   ? gamma_c.at(static_cast<std::size_t>(l.index))
                                                   : gamma_n.at(static_cast<std::size_t>(l.index));
        }
        return out;
    }

    double max_rate() const {
        double m = 0.0;
        for (double g : gamma_c) m = std::max(m, g);
        for (double g : gamma_n) m = std::max(m, g);
        return m;
    }
};

inline constexpr int kLindbladMaxSites = 10;

struct LindbladOptions {
    double dt = 0.0;               // 0: use min(0.01, 0.1/Gamma_max)
    bool convergence_check = true; // rerun at dt/2 and compare final concurrence
    double convergence_tol = 1e-6;
    double peak_tol = 1e-4;
};

namespace detail {

// Right-hand side written for Hermitian rho (preserved by the flow and by
// every RK4 stage): with H_nh = H - (i/2) sum_s Gamma_s n_s the commutator
// and both anticommutator halves collapse into B + B^dagger, B = -i H_nh rho,
// leaving only the recycling term sum_s Gamma_s s^- rho s^+.
class LindbladRhs {
public:
    LindbladRhs(const Eigen::SparseMatrix<Complex>& h, std::vector<double> slot_gammas)
        : h_nh_(h), gammas_(std::move(slot_gammas)) {
        for (Eigen::Index idx = 0; idx < h_nh_.rows(); ++idx) {
            double total = 0.0;
            for (std::size_t s = 0; s < gammas_.size(); ++s) {
                if (idx >> s & 1) total += gammas_[s];
            }
            if (total != 0.0) h_nh_.coeffRef(idx, idx) -= Complex(0.0, 0.5 * total);
        }
        h_nh_.makeCompressed();
    }

    DensityMatrix operator()(const DensityMatrix& rho) const {
        const DensityMatrix b = Complex(0, -1) * (h_nh_ * rho);
        DensityMatrix out = b + b.adjoint();
        const auto half = static_cast<std::size_t>(rho.rows()) / 2;
        for (std::size_t s = 0; s < gammas_.size(); ++s) {
            const double g = gammas_[s];
            if (g == 0.0) continue;
            const std::size_t bit = std::size_t(1) << s;
            const std::size_t low_mask = bit - 1;
            // expand u to the index with bit s inserted as 1 (and as 0)
            auto with_bit = [&](std::size_t u) { return ((u & ~low_mask) << 1) | bit | (u & low_mask); };
            for (std::size_t uc = 0; uc < half; ++uc) {
                const std::size_t c1 = with_bit(uc);
                const std::size_t c0 = c1 ^ bit;
                for (std::size_t ur = 0; ur < half; ++ur) {
                    const std::size_t r1 = with_bit(ur);
                    out(static_cast<Eigen::Index>(r1 ^ bit), static_cast<Eigen::Index>(c0)) +=
                        g * rho(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(c1));
                }
            }
        }
        return out;
    }

private:
    Eigen::SparseMatrix<Complex> h_nh_;
    std::vector<double> gammas_;
};

inline std::vector<DensityMatrix> lindblad_rk4(const LindbladRhs& rhs, DensityMatrix rho,
                                               const std::vector<double>& times, double dt) {
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    double now = 0.0;
    for (double t : times) {
        double remaining = t - now;
        while (remaining > 1e-12) {
            const double h = std::min(dt, remaining);
            const DensityMatrix k1 = rhs(rho);
            const DensityMatrix k2 = rhs(rho + 0.5 * h * k1);
            const DensityMatrix k3 = rhs(rho + 0.5 * h * k2);
            const DensityMatrix k4 = rhs(rho + h * k3);
            rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            remaining -= h;
        }
        now = t;
        out.push_back(rho);
    }
    return out;
}

} // namespace detail

inline void require_density_matrix(const DensityMatrix& rho) {
    require_hermitian(rho, 1e-8, "density matrix");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
        throw ParameterError("density matrix: trace differs from one");
    }
}

// Evolve a full-space density matrix under the master equation. The guard
// keeps the dense representation within 2^{kLindbladMaxSites}.
inline std::vector<DensityMatrix> evolve_lindblad(const ModelParams& p, const DensityMatrix& rho0,
                                                  const DissipationParams& d,
                                                  const std::vector<double>& times,
                                                  const LindbladOptions& opt = {}) {
    p.validate();
    d.validate(p);
    if (p.total_sites() > kLindbladMaxSites) {
        throw SizeError("evolve_lindblad: more than " + std::to_string(kLindbladMaxSites) +
                        " sites");
    }
    require_density_matrix(rho0);
    require_sorted_nonnegative(times);
    const SiteOrdering ord = SiteOrdering::from(p);
    if (rho0.rows() != (Eigen::Index(1) << ord.total())) {
        throw ParameterError("evolve_lindblad: density matrix dimension mismatch");
    }
    const auto h = build_full_h_sparse(p);
    const detail::LindbladRhs rhs(h, d.per_slot(ord));
    double dt = opt.dt;
    if (dt <= 0.0) {
        dt = 0.01;
        if (d.max_rate() > 0.0) dt = std::min(dt, 0.1 / d.max_rate());
    }
    auto states = detail::lindblad_rk4(rhs, rho0, times, dt);
    if (opt.convergence_check && !times.empty()) {
        const auto fine = detail::lindblad_rk4(rhs, rho0, {times.back()}, 0.5 * dt);
        double drift = 0.0;
        if (ord.atom_slot.size() == 2) {
            drift = std::abs(concurrence(partial_trace_atoms(states.back(), ord)) -
                             concurrence(partial_trace_atoms(fine.back(), ord)));
        } else {
            drift = (states.back() - fine.back()).cwiseAbs().maxCoeff();
        }
        if (drift > opt.convergence_tol) {
            throw AccuracyError("evolve_lindblad: step-size non-convergence");
        }
    }
    return states;
}

// Concurrence trace of a dissipative evolution from a pure initial state.
inline ConcurrenceTrace lindblad_concurrence_trace(const ModelParams& p, const StateVector& psi0,
                                                   const DissipationParams& d,
                                                   const std::vector<double>& times,
                                                   const LindbladOptions& opt = {}) {
    const SiteOrdering ord = SiteOrdering::from(p);
    require_normalized(psi0);
    const DensityMatrix rho0 = psi0 * psi0.adjoint();
    const auto states = evolve_lindblad(p, rho0, d, times, opt);
    ConcurrenceTrace trace;
    trace.times = times;
    trace.c.reserve(times.size());
    for (const auto& rho : states) {
        trace.c.push_back(concurrence(partial_trace_atoms(rho, ord)));
    }
    trace.finalize(opt.peak_tol);
    return trace;
}

// Dissipative concurrence trace in the one-excitation sector (Omega must be
// zero); exact for lowering-only dissipation and valid at any L the dense
// single-excitation solver handles.
inline SectorTraceResult damped_sector_concurrence_trace(const ModelParams& p,
                                                         const DissipationParams& d,
                                                         const std::vector<double>& times,
                                                         double peak_tol = 1e-4) {
    p.validate();
    d.validate(p);
    for (double w : p.omega) {
        if (w != 0.0) {
            throw ParameterError("damped_sector_concurrence_trace: driving breaks the sector");
        }
    }
    const SiteOrdering ord = SiteOrdering::from(p);
    const DecayPropagator prop(build_single_excitation_h(p), d.per_slot(ord));
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot.at(0)) = 1.0;
    return concurrence_trace_damped(prop, psi0, ord, times, peak_tol);
}

} // namespace spincavity

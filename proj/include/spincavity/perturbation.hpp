// perturbation.hpp — Second-order effective models of the atom pair, the
// closed-form concurrence for the four position-parity cases, the optimal-time
// formula, and the driving-dip predictor
//
// Conventions follow the single-excitation model: i = pos[0], j = pos[1]
// (i < j), uniform cavity with on-site energy Delta and hopping J, coupling
// amplitudes g1, g2 and hopping phases phi1, phi2. For an even cavity no mode
// is resonant with the atoms and the effective model is a 2x2 over (n1, n2);
// for an odd cavity the resonant mode enters at first order and the model is
// a 3x3 over (n1, n2, eta_Delta).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <numbers>
#include <vector>

#include "spincavity/core.hpp"
#include "spincavity/entanglement.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

enum class ParityCase {
    EvenEven,  // i, j even
    OddOdd,    // i, j odd
    EvenOdd,   // i even, j odd
    OddEven,   // i odd, j even
    OddCavity, // L odd: resonant-mode model, no closed form
};

struct EffectiveModel {
    ParityCase case_tag = ParityCase::EvenEven;
    ComplexMatrix h_eff; // 2x2 (even cavity) or 3x3 (odd cavity)
};

inline ParityCase parity_case(int i, int j) {
    if (i % 2 == 0) return j % 2 == 0 ? ParityCase::EvenEven : ParityCase::EvenOdd;
    return j % 2 == 0 ? ParityCase::OddEven : ParityCase::OddOdd;
}

namespace detail {

struct PerturbationInputs {
    int i = 0, j = 0;
    double delta = 0.0, J = 0.0;
    double g1 = 0.0, g2 = 0.0;
    double phi1 = 0.0, phi2 = 0.0;
};

inline PerturbationInputs perturbation_inputs(const ModelParams& p) {
    p.validate();
    if (p.N != 2) throw ParameterError("effective model: two atoms expected");
    if (!p.uniform_cavity()) {
        throw ParameterError("effective model: uniform cavity parameters required");
    }
    PerturbationInputs in;
    in.delta = p.delta_c.front();
    for (double d : p.delta_n) {
        if (d != in.delta) {
            throw ParameterError("effective model: atoms must be resonant with the cavity");
        }
    }
    in.J = p.J_c.front();
    if (in.J <= 0.0) throw ParameterError("effective model: positive hopping required");
    in.i = p.pos[0];
    in.j = p.pos[1];
    in.g1 = p.symmetric_g(0);
    in.g2 = p.symmetric_g(1);
    in.phi1 = p.phi[0];
    in.phi2 = p.phi[1];
    if (std::max(in.g1, in.g2) / in.J > 0.3) {
        std::cerr << "warning: effective model used at g/J > 0.3; expect visible deviations\n";
    }
    return in;
}

// (cos((i+j)pi/2) + sin((i-j)pi/2)) and e^{i[(-1)^i phi1 + (-1)^j phi2]}
inline double parity_amplitude(int i, int j) {
    return cos_half_pi(i + j) + sin_half_pi(i - j);
}

inline Complex parity_phase(int i, int j, double phi1, double phi2) {
    const double arg = (i % 2 == 0 ? phi1 : -phi1) + (j % 2 == 0 ? phi2 : -phi2);
    return Complex(std::cos(arg), std::sin(arg));
}

} // namespace detail

// 2x2 effective Hamiltonian for an even cavity: Lamb shifts
// -(g^2/J)(1-(-1)^i) cos(2 phi) on the diagonal and the cavity-mediated
// exchange on the off-diagonal.
inline EffectiveModel effective_h_even(const ModelParams& p) {
    if (p.L % 2 != 0) throw ParameterError("effective_h_even: cavity length must be even");
    const auto in = detail::perturbation_inputs(p);
    EffectiveModel model;
    model.case_tag = parity_case(in.i, in.j);
    model.h_eff = ComplexMatrix::Zero(2, 2);
    const double shift1 = in.i % 2 == 0 ? 0.0 : -2.0 * in.g1 * in.g1 / in.J * std::cos(2.0 * in.phi1);
    const double shift2 = in.j % 2 == 0 ? 0.0 : -2.0 * in.g2 * in.g2 / in.J * std::cos(2.0 * in.phi2);
    model.h_eff(0, 0) = in.delta + shift1;
    model.h_eff(1, 1) = in.delta + shift2;
    const Complex offdiag = in.g1 * in.g2 / in.J * detail::parity_amplitude(in.i, in.j) *
                            detail::parity_phase(in.i, in.j, in.phi1, in.phi2);
    model.h_eff(0, 1) = offdiag;
    model.h_eff(1, 0) = std::conj(offdiag);
    return model;
}

// 3x3 effective Hamiltonian for an odd cavity over (n1, n2, eta_Delta). The
// resonant mode couples at first order; its own second-order block vanishes.
inline EffectiveModel effective_h_odd(const ModelParams& p) {
    if (p.L % 2 != 1) throw ParameterError("effective_h_odd: cavity length must be odd");
    const auto in = detail::perturbation_inputs(p);
    const int L = p.L;
    EffectiveModel model;
    model.case_tag = ParityCase::OddCavity;
    model.h_eff = ComplexMatrix::Zero(3, 3);

    auto lamb = [&](int site, double g, double phi) {
        const int sgn = site % 2 == 0 ? 1 : -1;
        const double weight = (1 - sgn) * (L - site) + (1 + sgn) * site;
        return -g * g / in.J * weight / (L + 1) * std::cos(2.0 * phi);
    };
    model.h_eff(0, 0) = in.delta + lamb(in.i, in.g1, in.phi1);
    model.h_eff(1, 1) = in.delta + lamb(in.j, in.g2, in.phi2);
    model.h_eff(2, 2) = in.delta;

    const Complex phase = detail::parity_phase(in.i, in.j, in.phi1, in.phi2);
    const double w_direct = static_cast<double>(L - 2 * (in.j / 2) + (in.j % 2 == 0 ? 1 : -1)) / (L + 1);
    const double w_exchange = 2.0 * ((in.i - 1) / 2 + 1) * ((in.i + in.j) % 2 == 0 ? -1.0 : 1.0) / (L + 1);
    const Complex exchange = in.g1 * in.g2 / in.J * detail::parity_amplitude(in.i, in.j) *
                             (w_direct * phase + w_exchange * std::conj(phase));
    model.h_eff(0, 1) = exchange;
    model.h_eff(1, 0) = std::conj(exchange);

    const double norm = std::sqrt(2.0 / (L + 1));
    auto first_order = [&](int site, double g, double phi) {
        const Complex e_minus(std::cos(phi), -std::sin(phi));
        return g * norm * (static_cast<double>(sin_half_pi(site)) * e_minus +
                           static_cast<double>(cos_half_pi(site)) * std::conj(e_minus));
    };
    model.h_eff(0, 2) = first_order(in.i, in.g1, in.phi1);
    model.h_eff(1, 2) = first_order(in.j, in.g2, in.phi2);
    model.h_eff(2, 0) = std::conj(model.h_eff(0, 2));
    model.h_eff(2, 1) = std::conj(model.h_eff(1, 2));
    return model;
}

inline EffectiveModel effective_model(const ModelParams& p) {
    return p.L % 2 == 0 ? effective_h_even(p) : effective_h_odd(p);
}

// Concurrence of the effective model evolved from (1, 0, ...) — numerical
// route, valid for both the 2x2 and the 3x3 model.
inline ConcurrenceTrace effective_concurrence_trace(const EffectiveModel& model,
                                                    const std::vector<double>& times,
                                                    double peak_tol = 1e-4) {
    const Propagator prop(model.h_eff);
    StateVector psi0 = StateVector::Zero(model.h_eff.rows());
    psi0(0) = 1.0;
    ConcurrenceTrace trace;
    trace.times = times;
    trace.c.reserve(times.size());
    for (double t : times) {
        const StateVector psi = prop.apply(psi0, t);
        trace.c.push_back(concurrence_pure_single_exc(psi(0), psi(1)));
    }
    trace.finalize(peak_tol);
    return trace;
}

// Closed-form concurrence for the even-cavity parity cases: even distance
// gives |sin(2 g^2 t / J)|; odd distance gives 2 sqrt((1-a) a) with
// a(t) = sin^2(g^2 sqrt(1+cos^2 2phi) t / J) / (1 + cos^2 2phi).
inline ConcurrenceTrace analytic_concurrence(ParityCase tag, double g, double J, double phi,
                                             const std::vector<double>& times,
                                             double peak_tol = 1e-4) {
    if (tag == ParityCase::OddCavity) {
        throw ParameterError("analytic_concurrence: no closed form for an odd cavity");
    }
    ConcurrenceTrace trace;
    trace.times = times;
    trace.c.reserve(times.size());
    const bool even_distance = tag == ParityCase::EvenEven || tag == ParityCase::OddOdd;
    const double c2 = std::cos(2.0 * phi);
    const double stretch = std::sqrt(1.0 + c2 * c2);
    for (double t : times) {
        if (even_distance) {
            trace.c.push_back(std::abs(std::sin(2.0 * g * g / J * t)));
        } else {
            const double s = std::sin(g * g * stretch * t / J);
            const double a = s * s / (1.0 + c2 * c2);
            trace.c.push_back(2.0 * std::sqrt(std::max(0.0, (1.0 - a) * a)));
        }
    }
    trace.finalize(peak_tol);
    return trace;
}

enum class Branch { Minus, Plus };

// Times of maximal concurrence for the odd-distance cases:
// T_C = (J / 2 g^2) ((2k+1) pi -/+ arccos(cos^2 2 phi)) / sqrt(1 + cos^2 2 phi).
// Branch Minus with k = 0 is the first occurrence.
inline double optimal_time(double g, double J, double phi, int k = 0, Branch branch = Branch::Minus) {
    if (k < 0) throw ParameterError("optimal_time: k must be nonnegative");
    const double c2 = std::cos(2.0 * phi);
    const double acos_term = std::acos(std::min(1.0, c2 * c2));
    const double numer = (2 * k + 1) * std::numbers::pi +
                         (branch == Branch::Minus ? -acos_term : acos_term);
    return J / (2.0 * g * g) * numer / std::sqrt(1.0 + c2 * c2);
}

// ------------------------------ Driving dips ---------------------------------

struct DipPrediction {
    int k = 0;          // cavity mode index
    double omega = 0.0; // driving strength at which the dressed atom resonates
};

// Driving strengths where the driven atom's dressed splitting matches a
// cavity mode: Omega = sqrt(J cos(pi k/(L+1)) (Delta + J cos(pi k/(L+1)))).
// Entries with a negative radicand are dropped; duplicates collapse.
inline std::vector<DipPrediction> dip_strengths(int L, double J, double delta) {
    if (L < 2) throw ParameterError("dip_strengths: L must be at least 2");
    std::vector<DipPrediction> dips;
    for (int k = 1; k <= L; ++k) {
        const double mode = J * std::cos(std::numbers::pi * k / (L + 1));
        const double radicand = mode * (delta + mode);
        if (radicand < 0.0) continue;
        const double omega = std::sqrt(radicand);
        if (omega > 2.0 * std::abs(J)) continue;
        bool duplicate = false;
        for (const auto& d : dips) {
            if (std::abs(d.omega - omega) < 1e-12) duplicate = true;
        }
        if (!duplicate) dips.push_back({k, omega});
    }
    std::sort(dips.begin(), dips.end(),
              [](const DipPrediction& a, const DipPrediction& b) { return a.omega < b.omega; });
    return dips;
}

} // namespace spincavity

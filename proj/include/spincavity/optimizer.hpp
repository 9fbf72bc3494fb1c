// optimizer.hpp — Derivative-free maximization of the concurrence peak by
// engineering on-site energies or hoppings
//
// The decision vector is a set of angles; the cosine maps keep the physical
// parameters inside their restriction intervals by construction. The search
// is Powell's conjugate-direction method with a bracketing + Brent line
// minimizer, run from several seeded restarts. Everything is deterministic
// given (seed, restarts, budget).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "spincavity/dynamics.hpp"
#include "spincavity/entanglement.hpp"
#include "spincavity/lindblad.hpp"
#include "spincavity/model.hpp"
#include "spincavity/rng.hpp"

namespace spincavity {

enum class EngineeringMode { OnSite, Hopping };

struct ObjectiveSpec {
    EngineeringMode mode = EngineeringMode::OnSite;
    double r = 0.0;   // restriction bound (r_Delta or r_J)
    double t_f = 0.0; // stopping time, units of 1/J
    std::vector<double> angles;
    double dt = 0.05; // objective evaluation grid

    // onsite: one angle per cavity site and per atom; hopping: one per bond
    // plus left/right coupling angles per atom
    static std::size_t angle_count(EngineeringMode mode, const ModelParams& base) {
        return mode == EngineeringMode::OnSite
                   ? static_cast<std::size_t>(base.L + base.N)
                   : static_cast<std::size_t>(base.L - 1 + 2 * base.N);
    }

    void validate(const ModelParams& base) const {
        if (r < 0.0) throw ParameterError("ObjectiveSpec: restriction must be nonnegative");
        if (t_f < 0.0) throw ParameterError("ObjectiveSpec: stopping time must be nonnegative");
        if (dt <= 0.0) throw ParameterError("ObjectiveSpec: dt must be positive");
        if (angles.size() != angle_count(mode, base)) {
            throw ParameterError("ObjectiveSpec: expected " +
                                 std::to_string(angle_count(mode, base)) + " angles, got " +
                                 std::to_string(angles.size()));
        }
    }
};

// Angles -> physical parameters. OnSite: Delta = r cos(theta), keeping the
// base hoppings/couplings; Hopping: J (and each coupling) = r cos^2(theta/2),
// keeping the base on-site energies.
inline ModelParams map_parameters(const ObjectiveSpec& spec, const ModelParams& base) {
    spec.validate(base);
    ModelParams p = base;
    if (spec.mode == EngineeringMode::OnSite) {
        for (int i = 0; i < base.L; ++i) {
            p.delta_c[static_cast<std::size_t>(i)] =
                spec.r * std::cos(spec.angles[static_cast<std::size_t>(i)]);
        }
        for (int a = 0; a < base.N; ++a) {
            p.delta_n[static_cast<std::size_t>(a)] =
                spec.r * std::cos(spec.angles[static_cast<std::size_t>(base.L + a)]);
        }
    } else {
        auto squash = [&](double theta) {
            const double c = std::cos(0.5 * theta);
            return spec.r * c * c;
        };
        for (int i = 0; i + 1 < base.L; ++i) {
            p.J_c[static_cast<std::size_t>(i)] = squash(spec.angles[static_cast<std::size_t>(i)]);
        }
        for (int a = 0; a < base.N; ++a) {
            p.g_left[static_cast<std::size_t>(a)] =
                squash(spec.angles[static_cast<std::size_t>(base.L - 1 + 2 * a)]);
            p.g_right[static_cast<std::size_t>(a)] =
                squash(spec.angles[static_cast<std::size_t>(base.L - 1 + 2 * a + 1)]);
        }
    }
    return p;
}

// Concurrence peak over [0, t_f] for the mapped parameters, from atom n1
// excited, in the single-excitation sector.
inline double objective(const ObjectiveSpec& spec, const ModelParams& base) {
    const ModelParams p = map_parameters(spec, base);
    const SiteOrdering ord = SiteOrdering::from(p);
    const Propagator prop(build_single_excitation_h(p));
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot.at(0)) = 1.0;
    const auto times = time_grid(spec.t_f, spec.dt);
    const auto res = concurrence_trace_single_excitation(prop, psi0, ord, times);
    return res.trace.c_max;
}

struct OptimizationReport {
    ObjectiveSpec best;
    ModelParams params;
    double c_max = 0.0;
    double t_at_max = 0.0;
    long evaluations = 0;
    bool budget_exhausted = false;
    std::vector<std::pair<long, double>> history; // (evaluation count, best so far)
};

namespace detail {

struct BudgetExceeded {};

class CountedObjective {
public:
    CountedObjective(std::function<double(const std::vector<double>&)> f, long budget)
        : f_(std::move(f)), budget_(budget) {}

    double operator()(const std::vector<double>& x) {
        if (count_ >= budget_) throw BudgetExceeded{};
        ++count_;
        const double v = f_(x);
        if (v < best_value_) {
            best_value_ = v;
            best_x_ = x;
            history_.emplace_back(count_, -v);
        }
        return v;
    }

    long count() const { return count_; }
    double best_value() const { return best_value_; }
    const std::vector<double>& best_x() const { return best_x_; }
    const std::vector<std::pair<long, double>>& history() const { return history_; }

private:
    std::function<double(const std::vector<double>&)> f_;
    long budget_ = 0;
    long count_ = 0;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_x_;
    std::vector<std::pair<long, double>> history_;
};

// Bracket a minimum of f along increasing alpha, then shrink with Brent.
// Returns (alpha, f(alpha)).
inline std::pair<double, double> brent_line_min(const std::function<double(double)>& f, double f0,
                                                double step, int max_iter = 30) {
    const double golden = 1.618033988749895;
    double a = 0.0, fa = f0;
    double b = step, fb = f(b);
    if (fb > fa) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = b + golden * (b - a), fc = f(c);
    int guard = 0;
    while (fc < fb && guard++ < 40) {
        a = b; fa = fb;
        b = c; fb = fc;
        c = b + golden * (b - a);
        fc = f(c);
    }
    if (a > c) std::swap(a, c);
    // Brent's parabolic minimization on [a, c] with current best b
    double x = b, w = b, v = b;
    double fx = fb, fw = fb, fv = fb;
    double d = 0.0, e = 0.0;
    const double tol = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + c);
        const double tol1 = tol * std::abs(x) + 1e-10;
        if (std::abs(x - m) <= 2.0 * tol1 - 0.5 * (c - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (a - x) && p < q * (c - x)) {
                e = d;
                d = p / q;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = x < m ? c - x : a - x;
            d = 0.381966 * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) c = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else c = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

// Powell's direction-set minimization. Returns true when converged within
// the evaluation budget, false when the budget ran out first.
inline bool powell_minimize(CountedObjective& f, std::vector<double>& x, double ftol = 1e-8,
                            int max_cycles = 60) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;
    try {
        double fx = f(x);
        for (int cycle = 0; cycle < max_cycles; ++cycle) {
            const std::vector<double> x0 = x;
            const double fx0 = fx;
            double biggest_drop = 0.0;
            std::size_t biggest_index = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double before = fx;
                const auto& u = dirs[i];
                auto line = [&](double alpha) {
                    std::vector<double> xt = x;
                    for (std::size_t k = 0; k < n; ++k) xt[k] += alpha * u[k];
                    return f(xt);
                };
                const auto [alpha, fmin] = brent_line_min(line, fx, 0.4);
                for (std::size_t k = 0; k < n; ++k) x[k] += alpha * u[k];
                fx = fmin;
                if (before - fx > biggest_drop) {
                    biggest_drop = before - fx;
                    biggest_index = i;
                }
            }
            if (2.0 * (fx0 - fx) <= ftol * (std::abs(fx0) + std::abs(fx)) + 1e-14) {
                return true;
            }
            // Powell's direction update using the extrapolated point
            std::vector<double> xe(n);
            std::vector<double> diff(n);
            for (std::size_t k = 0; k < n; ++k) {
                xe[k] = 2.0 * x[k] - x0[k];
                diff[k] = x[k] - x0[k];
            }
            const double fe = f(xe);
            if (fe < fx0) {
                const double t = 2.0 * (fx0 - 2.0 * fx + fe) *
                                     (fx0 - fx - biggest_drop) * (fx0 - fx - biggest_drop) -
                                 biggest_drop * (fx0 - fe) * (fx0 - fe);
                if (t < 0.0) {
                    auto line = [&](double alpha) {
                        std::vector<double> xt = x;
                        for (std::size_t k = 0; k < n; ++k) xt[k] += alpha * diff[k];
                        return f(xt);
                    };
                    const auto [alpha, fmin] = brent_line_min(line, fx, 1.0);
                    for (std::size_t k = 0; k < n; ++k) x[k] += alpha * diff[k];
                    fx = fmin;
                    dirs[biggest_index] = dirs[n - 1];
                    dirs[n - 1] = diff;
                }
            }
        }
        return true;
    } catch (const BudgetExceeded&) {
        return false;
    }
}

} // namespace detail

struct PowellOptions {
    long budget = 5000;
    int restarts = 8;
    std::uint64_t seed = 1;
};

// Maximize the concurrence peak. Restart 0 starts from spec0.angles; the
// remaining restarts draw angles uniformly from [0, 2 pi) using per-restart
// substreams. The budget is split evenly across restarts.
inline OptimizationReport optimize(const ObjectiveSpec& spec0, const ModelParams& base,
                                   const PowellOptions& opt = {}) {
    spec0.validate(base);
    if (opt.budget < 100) throw ParameterError("optimize: budget must be at least 100");
    if (opt.restarts < 1) throw ParameterError("optimize: need at least one restart");
    const long per_restart = std::max<long>(1, opt.budget / opt.restarts);
    const std::size_t n = spec0.angles.size();

    struct RestartOutcome {
        std::vector<double> x;
        double value = std::numeric_limits<double>::infinity();
        long evals = 0;
        bool converged = false;
        std::vector<std::pair<long, double>> history;
    };
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opt.restarts));

#pragma omp parallel for schedule(dynamic)
    for (int rs = 0; rs < opt.restarts; ++rs) {
        ObjectiveSpec spec = spec0;
        std::vector<double> x = spec0.angles;
        if (rs > 0) {
            SplitMix64 rng = substream(opt.seed, static_cast<std::uint64_t>(rs));
            for (std::size_t k = 0; k < n; ++k) x[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        detail::CountedObjective counted(
            [&spec, &base](const std::vector<double>& angles) {
                spec.angles = angles;
                return -objective(spec, base);
            },
            per_restart);
        const bool converged = detail::powell_minimize(counted, x);
        auto& out = outcomes[static_cast<std::size_t>(rs)];
        out.x = counted.best_x();
        out.value = counted.best_value();
        out.evals = counted.count();
        out.converged = converged;
        out.history = counted.history();
    }

    OptimizationReport report;
    report.best = spec0;
    int best_rs = 0;
    for (int rs = 1; rs < opt.restarts; ++rs) {
        if (outcomes[static_cast<std::size_t>(rs)].value <
            outcomes[static_cast<std::size_t>(best_rs)].value) {
            best_rs = rs;
        }
    }
    long offset = 0;
    for (int rs = 0; rs < opt.restarts; ++rs) {
        const auto& out = outcomes[static_cast<std::size_t>(rs)];
        for (const auto& [count, value] : out.history) {
            const double prev = report.history.empty() ? 0.0 : report.history.back().second;
            if (value > prev) report.history.emplace_back(offset + count, value);
        }
        report.evaluations += out.evals;
        report.budget_exhausted = report.budget_exhausted || !out.converged;
        offset += out.evals;
    }
    report.best.angles = outcomes[static_cast<std::size_t>(best_rs)].x;
    report.params = map_parameters(report.best, base);
    report.c_max = -outcomes[static_cast<std::size_t>(best_rs)].value;

    // replay once to recover the time of the reported peak
    const SiteOrdering ord = SiteOrdering::from(report.params);
    const Propagator prop(build_single_excitation_h(report.params));
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot.at(0)) = 1.0;
    const auto res = concurrence_trace_single_excitation(
        prop, psi0, ord, time_grid(report.best.t_f, report.best.dt));
    report.t_at_max = res.trace.t_max;
    return report;
}

// ------------------------------ Tolerance sweep ------------------------------

enum class SweepTarget {
    OnSiteLargest,  // the single cavity energy of largest magnitude
    OnSiteCavity,   // all cavity energies
    AtomEnergies,
    Hoppings,
    Couplings,
    HoppingsAndCouplings,
};

struct SweepRow {
    double scale = 1.0; // multiplicative deviation (1.0 = optimized values)
    double c_max = 0.0;
};

inline std::vector<SweepRow> tolerance_sweep(const ModelParams& params_opt, SweepTarget target,
                                             const std::vector<double>& scales, double t_f,
                                             double dt = 0.05) {
    params_opt.validate();
    std::vector<SweepRow> rows;
    rows.reserve(scales.size());
    std::size_t largest = 0;
    for (std::size_t i = 1; i < params_opt.delta_c.size(); ++i) {
        if (std::abs(params_opt.delta_c[i]) > std::abs(params_opt.delta_c[largest])) largest = i;
    }
    for (double s : scales) {
        ModelParams p = params_opt;
        switch (target) {
            case SweepTarget::OnSiteLargest:
                p.delta_c[largest] *= s;
                break;
            case SweepTarget::OnSiteCavity:
                for (double& d : p.delta_c) d *= s;
                break;
            case SweepTarget::AtomEnergies:
                for (double& d : p.delta_n) d *= s;
                break;
            case SweepTarget::Hoppings:
                for (double& j : p.J_c) j *= s;
                break;
            case SweepTarget::Couplings:
                for (double& g : p.g_left) g *= s;
                for (double& g : p.g_right) g *= s;
                break;
            case SweepTarget::HoppingsAndCouplings:
                for (double& j : p.J_c) j *= s;
                for (double& g : p.g_left) g *= s;
                for (double& g : p.g_right) g *= s;
                break;
        }
        const SiteOrdering ord = SiteOrdering::from(p);
        const Propagator prop(build_single_excitation_h(p));
        StateVector psi0 = StateVector::Zero(ord.total());
        psi0(ord.atom_slot.at(0)) = 1.0;
        const auto res = concurrence_trace_single_excitation(prop, psi0, ord, time_grid(t_f, dt));
        rows.push_back({s, res.trace.c_max});
    }
    return rows;
}

// ----------------------------- Dissipative replay -----------------------------

struct DissipativeReplay {
    ConcurrenceTrace trace;
    bool used_full_lindblad = false; // false: exact damped-sector evolution
};

// Replay an optimized parameter set with per-site decay. Within the Lindblad
// size guard the full master equation runs; above it the exact damped
// single-excitation evolution is used (valid because these replays have no
// driving).
inline DissipativeReplay replay_with_dissipation(const ModelParams& params_opt,
                                                 const DissipationParams& d,
                                                 const std::vector<double>& times,
                                                 double peak_tol = 1e-4) {
    params_opt.validate();
    d.validate(params_opt);
    DissipativeReplay out;
    if (params_opt.total_sites() <= kLindbladMaxSites) {
        const SiteOrdering ord = SiteOrdering::from(params_opt);
        StateVector psi0 = StateVector::Zero(Eigen::Index(1) << ord.total());
        psi0(Eigen::Index(1) << ord.atom_slot.at(0)) = 1.0;
        LindbladOptions opt;
        opt.peak_tol = peak_tol;
        out.trace = lindblad_concurrence_trace(params_opt, psi0, d, times, opt);
        out.used_full_lindblad = true;
        return out;
    }
    out.trace = damped_sector_concurrence_trace(params_opt, d, times, peak_tol).trace;
    return out;
}

} // namespace spincavity

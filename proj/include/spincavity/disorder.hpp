// disorder.hpp — Seeded on-site-energy disorder ensembles: average
// concurrence, IPR statistics, and single-realization replays
//
// Realization r draws its cavity energies from substream(seed, r) in site
// order, so results are bit-reproducible for a given seed no matter how the
// loop is scheduled.

#pragma once

#include <cstdint>
#include <vector>

#include "spincavity/dynamics.hpp"
#include "spincavity/entanglement.hpp"
#include "spincavity/model.hpp"
#include "spincavity/rng.hpp"

namespace spincavity {

struct DisorderSpec {
    double W = 0.0;          // half-width of the uniform distribution, units of J
    int n_realizations = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (W < 0.0) throw ParameterError("DisorderSpec: W must be nonnegative");
        if (n_realizations < 1) throw ParameterError("DisorderSpec: need at least one realization");
    }
};

inline std::vector<double> draw_disorder(const DisorderSpec& spec, int length, int realization) {
    SplitMix64 rng = substream(spec.seed, static_cast<std::uint64_t>(realization));
    std::vector<double> delta(static_cast<std::size_t>(length));
    for (double& d : delta) d = rng.uniform(-spec.W, spec.W);
    return delta;
}

struct RealizationRecord {
    std::vector<double> delta_c;
    double c_max = 0.0;
    double t_max = 0.0;
    double ipr_mean = 0.0;
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<RealizationRecord> realizations;
    std::vector<double> mean_c;  // average concurrence trace over realizations
    double mean_c_max = 0.0;     // max of the average trace
};

struct ReplayResult {
    ConcurrenceTrace trace;
    std::vector<double> r1;
    std::vector<double> r2;
    double ipr_mean = 0.0;
};

// Single-realization diagnostics for an explicit energy draw.
inline ReplayResult replay_realization(const std::vector<double>& delta_c, const ModelParams& base,
                                       const std::vector<double>& times, double peak_tol = 1e-4) {
    if (delta_c.size() != static_cast<std::size_t>(base.L)) {
        throw ParameterError("replay_realization: delta_c length mismatch");
    }
    ModelParams p = base;
    p.delta_c = delta_c;
    const SiteOrdering ord = SiteOrdering::from(p);
    const ComplexMatrix h = build_single_excitation_h(p);
    const Propagator prop(h);
    StateVector psi0 = StateVector::Zero(ord.total());
    psi0(ord.atom_slot.at(0)) = 1.0;
    auto sector = concurrence_trace_single_excitation(prop, psi0, ord, times, peak_tol);
    ReplayResult out;
    out.trace = std::move(sector.trace);
    out.r1 = std::move(sector.r1);
    out.r2 = std::move(sector.r2);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < prop.dim(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < prop.dim(); ++i) {
            s += std::norm(prop.modes(i, j)) * std::norm(prop.modes(i, j));
        }
        sum += s;
    }
    out.ipr_mean = sum / static_cast<double>(prop.dim());
    return out;
}

// Draws n_realizations energy configurations, evolves each from atom n1
// excited, and aggregates the average concurrence trace.
inline EnsembleResult run_ensemble(const ModelParams& base, const DisorderSpec& spec,
                                   const std::vector<double>& times, double peak_tol = 1e-4) {
    base.validate();
    spec.validate();
    for (double w : base.omega) {
        if (w != 0.0) throw ParameterError("run_ensemble: driving breaks the sector");
    }
    require_sorted_nonnegative(times);
    EnsembleResult result;
    result.times = times;
    result.realizations.resize(static_cast<std::size_t>(spec.n_realizations));
    std::vector<std::vector<double>> traces(static_cast<std::size_t>(spec.n_realizations));

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < spec.n_realizations; ++r) {
        const auto delta = draw_disorder(spec, base.L, r);
        const auto replay = replay_realization(delta, base, times, peak_tol);
        RealizationRecord rec;
        rec.delta_c = delta;
        rec.c_max = replay.trace.c_max;
        rec.t_max = replay.trace.t_max;
        rec.ipr_mean = replay.ipr_mean;
        result.realizations[static_cast<std::size_t>(r)] = std::move(rec);
        traces[static_cast<std::size_t>(r)] = replay.trace.c;
    }

    result.mean_c.assign(times.size(), 0.0);
    for (const auto& trace : traces) {
        for (std::size_t i = 0; i < times.size(); ++i) result.mean_c[i] += trace[i];
    }
    for (double& v : result.mean_c) v /= static_cast<double>(spec.n_realizations);
    for (double v : result.mean_c) result.mean_c_max = std::max(result.mean_c_max, v);
    return result;
}

// ------------------------- IPR-versus-energy pooling -------------------------

struct IprHistogram {
    std::vector<double> energies; // pooled over realizations, realization-major
    std::vector<double> iprs;
    struct Bin {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        double mean = 0.0;
        double min = 1.0;
    };
    std::vector<Bin> bins;
};

inline IprHistogram ipr_energy_histogram(const ModelParams& base, const DisorderSpec& spec,
                                         int n_bins = 40) {
    base.validate();
    spec.validate();
    if (n_bins < 1) throw ParameterError("ipr_energy_histogram: need at least one bin");
    IprHistogram hist;
    const int n = base.total_sites();
    hist.energies.reserve(static_cast<std::size_t>(spec.n_realizations * n));
    hist.iprs.reserve(static_cast<std::size_t>(spec.n_realizations * n));
    for (int r = 0; r < spec.n_realizations; ++r) {
        ModelParams p = base;
        p.delta_c = draw_disorder(spec, base.L, r);
        const IprResult res = ipr(build_single_excitation_h(p));
        for (Eigen::Index j = 0; j < res.energies.size(); ++j) {
            hist.energies.push_back(res.energies(j));
            hist.iprs.push_back(res.ipr(j));
        }
    }
    double lo = hist.energies.front(), hi = hist.energies.front();
    for (double e : hist.energies) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    if (hi == lo) hi = lo + 1.0;
    hist.bins.resize(static_cast<std::size_t>(n_bins));
    const double width = (hi - lo) / n_bins;
    for (int b = 0; b < n_bins; ++b) {
        hist.bins[static_cast<std::size_t>(b)].lo = lo + b * width;
        hist.bins[static_cast<std::size_t>(b)].hi = lo + (b + 1) * width;
    }
    for (std::size_t i = 0; i < hist.energies.size(); ++i) {
        int b = static_cast<int>((hist.energies[i] - lo) / width);
        b = std::clamp(b, 0, n_bins - 1);
        auto& bin = hist.bins[static_cast<std::size_t>(b)];
        ++bin.count;
        bin.mean += hist.iprs[i];
        bin.min = std::min(bin.min, hist.iprs[i]);
    }
    for (auto& bin : hist.bins) {
        if (bin.count > 0) bin.mean /= bin.count;
    }
    return hist;
}

} // namespace spincavity

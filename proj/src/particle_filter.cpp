#include "geosteer/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geosteer/errors.hpp"
#include "geosteer/rng.hpp"

namespace geosteer {

ParticleSet pf_init(double prior_lo, double prior_hi, const TransitionModel& model,
                    int n_par, std::uint64_t seed) {
    if (prior_lo >= prior_hi) throw usage_error("pf_init: prior range inverted");
    if (n_par < 1) throw usage_error("pf_init: need at least one particle");
    ParticleSet set;
    set.stream_seed = seed;
    set.particles.resize(static_cast<std::size_t>(n_par));
    set.weights.assign(static_cast<std::size_t>(n_par), 1.0 / n_par);
    for (int i = 0; i < n_par; ++i) {
        SplitMix64 rng(derive_seed(seed, "init", i));
        set.particles[static_cast<std::size_t>(i)] = {
            rng.uniform(prior_lo, prior_hi),
            rng.uniform(-model.slope_clamp, model.slope_clamp)};
    }
    return set;
}

// Depth advances by the current slope, a fault jump may hit, then the slope
// itself evolves. Matches the stratigraphy generator's walk.
static void transition_one(Particle& p, const TransitionModel& model, SplitMix64& rng) {
    p.top_depth += p.slope;
    if (rng.uniform01() < model.p_fault) {
        const double mag = rng.uniform(model.throw_min, model.throw_max);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        p.top_depth += sign * mag;
    }
    p.slope = model.rho * p.slope + rng.gauss(0.0, model.sigma_s);
    p.slope = std::clamp(p.slope, -model.slope_clamp, model.slope_clamp);
}

void pf_propagate_ref(ParticleSet& set, const TransitionModel& model) {
    const int next_station = set.station + 1;
    for (int i = 0; i < set.n_par(); ++i) {
        SplitMix64 rng(derive_seed(set.stream_seed, "prop", next_station, i));
        transition_one(set.particles[static_cast<std::size_t>(i)], model, rng);
    }
    set.station = next_station;
}

void pf_propagate(ParticleSet& set, const TransitionModel& model) {
    const int next_station = set.station + 1;
    const int n = set.n_par();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(set.stream_seed, "prop", next_station, i));
        transition_one(set.particles[static_cast<std::size_t>(i)], model, rng);
    }
    set.station = next_station;
}

// Shared tail of the update: log-space weights -> normalized weights.
// Reductions run serially in index order so results do not depend on the
// thread count used to fill log_w.
static void finish_update(ParticleSet& set, std::vector<double>& log_w) {
    const int n = set.n_par();
    double max_lw = log_w[0];
    for (int i = 1; i < n; ++i) max_lw = std::max(max_lw, log_w[static_cast<std::size_t>(i)]);

    double sum = 0.0;
    if (std::isfinite(max_lw)) {
        for (int i = 0; i < n; ++i) {
            const double w = std::exp(log_w[static_cast<std::size_t>(i)] - max_lw);
            set.weights[static_cast<std::size_t>(i)] = w;
            sum += w;
        }
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        set.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
        set.degeneracy_count += 1;
        return;
    }
    for (int i = 0; i < n; ++i) set.weights[static_cast<std::size_t>(i)] /= sum;
}

static double log_likelihood(const Particle& p, double prior_weight, double observed,
                             double bit_tvd, const OffsetLog& log, double inv_two_sigma2) {
    const double predicted = gamma_at(log, bit_tvd - p.top_depth);
    const double res = observed - predicted;
    return std::log(prior_weight) - res * res * inv_two_sigma2;
}

void pf_update_ref(ParticleSet& set, double observed_gamma, double bit_tvd,
                   const OffsetLog& log, double sigma) {
    const int n = set.n_par();
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> log_w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        log_w[static_cast<std::size_t>(i)] =
            log_likelihood(set.particles[static_cast<std::size_t>(i)],
                           set.weights[static_cast<std::size_t>(i)], observed_gamma,
                           bit_tvd, log, inv_two_sigma2);
    finish_update(set, log_w);
}

void pf_update(ParticleSet& set, double observed_gamma, double bit_tvd,
               const OffsetLog& log, double sigma) {
    const int n = set.n_par();
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> log_w(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        log_w[static_cast<std::size_t>(i)] =
            log_likelihood(set.particles[static_cast<std::size_t>(i)],
                           set.weights[static_cast<std::size_t>(i)], observed_gamma,
                           bit_tvd, log, inv_two_sigma2);
    finish_update(set, log_w);
}

void pf_resample(ParticleSet& set) {
    const int n = set.n_par();
    SplitMix64 rng(derive_seed(set.stream_seed, "resample", set.station));
    const double u0 = rng.uniform01() / n;

    std::vector<Particle> out(static_cast<std::size_t>(n));
    double cum = set.weights[0];
    int j = 0;
    for (int i = 0; i < n; ++i) {
        const double u = u0 + static_cast<double>(i) / n;
        while (u > cum && j + 1 < n) {
            ++j;
            cum += set.weights[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = set.particles[static_cast<std::size_t>(j)];
    }
    set.particles = std::move(out);
    set.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
}

// Indices of the n_best highest weights, ties resolved toward lower index.
static std::vector<int> best_indices(const ParticleSet& set, int n_best) {
    if (n_best < 1 || n_best > set.n_par()) throw usage_error("pf_best: n_best out of range");
    std::vector<int> idx(static_cast<std::size_t>(set.n_par()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return set.weights[static_cast<std::size_t>(a)] > set.weights[static_cast<std::size_t>(b)];
    });
    idx.resize(static_cast<std::size_t>(n_best));
    return idx;
}

std::vector<BoundaryEstimate> pf_best(const ParticleSet& set, int n_best, double thickness) {
    const std::vector<int> idx = best_indices(set, n_best);
    double subtotal = 0.0;
    for (int k : idx) subtotal += set.weights[static_cast<std::size_t>(k)];

    std::vector<BoundaryEstimate> out;
    out.reserve(static_cast<std::size_t>(n_best));
    for (int k : idx) {
        const Particle& p = set.particles[static_cast<std::size_t>(k)];
        const double w = set.weights[static_cast<std::size_t>(k)];
        out.push_back({p.top_depth, p.top_depth + thickness,
                       subtotal > 0.0 ? w / subtotal : 1.0 / n_best});
    }
    return out;
}

std::vector<std::pair<Particle, double>> pf_best_particles(const ParticleSet& set, int n_best) {
    const std::vector<int> idx = best_indices(set, n_best);
    double subtotal = 0.0;
    for (int k : idx) subtotal += set.weights[static_cast<std::size_t>(k)];

    std::vector<std::pair<Particle, double>> out;
    out.reserve(static_cast<std::size_t>(n_best));
    for (int k : idx) {
        const double w = set.weights[static_cast<std::size_t>(k)];
        out.emplace_back(set.particles[static_cast<std::size_t>(k)],
                         subtotal > 0.0 ? w / subtotal : 1.0 / n_best);
    }
    return out;
}

std::vector<std::pair<double, double>> pf_lookahead(const Particle& start,
                                                    const TransitionModel& model, int n,
                                                    double thickness, std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, "lookahead"));
    Particle p = start;
    std::vector<std::pair<double, double>> path;
    path.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        transition_one(p, model, rng);
        path.emplace_back(p.top_depth, p.top_depth + thickness);
    }
    return path;
}

PfDiagnostics pf_mae(const std::vector<double>& predicted_gamma,
                     const std::vector<double>& true_gamma,
                     const std::vector<double>& estimated_top,
                     const std::vector<double>& true_top) {
    if (predicted_gamma.size() != true_gamma.size() || estimated_top.size() != true_top.size())
        throw usage_error("pf_mae: length mismatch");
    if (predicted_gamma.empty() || estimated_top.empty())
        throw usage_error("pf_mae: empty input");
    double g = 0.0, b = 0.0;
    for (std::size_t i = 0; i < predicted_gamma.size(); ++i)
        g += std::abs(predicted_gamma[i] - true_gamma[i]);
    for (std::size_t i = 0; i < estimated_top.size(); ++i)
        b += std::abs(estimated_top[i] - true_top[i]);
    return {g / static_cast<double>(predicted_gamma.size()),
            b / static_cast<double>(estimated_top.size())};
}

double pf_ess(const ParticleSet& set) {
    double s2 = 0.0;
    for (double w : set.weights) s2 += w * w;
    return s2 > 0.0 ? 1.0 / s2 : 0.0;
}

double PfTrace::boundary_mae(int n_best, const std::vector<double>& true_top) const {
    if (true_top.size() != stations.size()) throw usage_error("trace/truth length mismatch");
    if (n_best < 1 || n_best > top_k) throw usage_error("n_best outside traced range");
    double acc = 0.0;
    for (std::size_t s = 0; s < stations.size(); ++s) {
        const std::size_t base = s * static_cast<std::size_t>(top_k);
        double wsum = 0.0, err = 0.0;
        for (int i = 0; i < n_best; ++i) wsum += weight[base + static_cast<std::size_t>(i)];
        for (int i = 0; i < n_best; ++i)
            err += weight[base + static_cast<std::size_t>(i)] *
                   std::abs(top[base + static_cast<std::size_t>(i)] - true_top[s]);
        acc += wsum > 0.0 ? err / wsum : std::abs(top[base] - true_top[s]);
    }
    return acc / static_cast<double>(stations.size());
}

double PfTrace::gamma_mae(int n_best, const std::vector<double>& true_gamma) const {
    if (true_gamma.size() != stations.size()) throw usage_error("trace/truth length mismatch");
    if (n_best < 1 || n_best > top_k) throw usage_error("n_best outside traced range");
    double acc = 0.0;
    for (std::size_t s = 0; s < stations.size(); ++s) {
        const std::size_t base = s * static_cast<std::size_t>(top_k);
        double wsum = 0.0, err = 0.0;
        for (int i = 0; i < n_best; ++i) wsum += weight[base + static_cast<std::size_t>(i)];
        for (int i = 0; i < n_best; ++i)
            err += weight[base + static_cast<std::size_t>(i)] *
                   std::abs(pred_gamma[base + static_cast<std::size_t>(i)] - true_gamma[s]);
        acc += wsum > 0.0 ? err / wsum : std::abs(pred_gamma[base] - true_gamma[s]);
    }
    return acc / static_cast<double>(stations.size());
}

void pf_assimilate(ParticleSet& set, const TransitionModel& model, const OffsetLog& log,
                   double sigma, double bit_tvd, double observed_gamma, double thickness,
                   bool propagate_first, PfTrace* trace, bool allow_resample) {
    if (propagate_first) pf_propagate(set, model);
    pf_update(set, observed_gamma, bit_tvd, log, sigma);

    if (trace) {
        const auto subset = pf_best(set, std::min(trace->top_k, set.n_par()), thickness);
        trace->stations.push_back(set.station);
        trace->ess.push_back(pf_ess(set));
        for (int i = 0; i < trace->top_k; ++i) {
            // Pad with the last real particle if top_k exceeds n_par.
            const BoundaryEstimate& e =
                subset[std::min<std::size_t>(static_cast<std::size_t>(i), subset.size() - 1)];
            trace->top.push_back(e.top_depth);
            trace->pred_gamma.push_back(gamma_at(log, bit_tvd - e.top_depth));
            // Subset-normalized weights are fine here: prefix renormalization
            // cancels the common factor. Padding entries carry weight 0.
            trace->weight.push_back(static_cast<std::size_t>(i) < subset.size()
                                        ? e.normalized_weight
                                        : 0.0);
        }
    }

    if (allow_resample && pf_resample_due(set.station)) pf_resample(set);
}

} // namespace geosteer

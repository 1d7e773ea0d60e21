#pragma once

#include <cstdint>
#include <vector>

#include "geosteer/stratigraphy.hpp"

namespace geosteer {

struct Particle {
    double top_depth; // hypothesized top boundary TVD at the current station
    double slope;     // hypothesized local dip, ft/station
};

// Transition prior mirrors the stratigraphy generator's AR(1) slope walk, plus
// a per-station fault hazard (expected count 1.5 over a 320-station section).
struct TransitionModel {
    double rho = 0.97;
    double sigma_s = 0.1;
    double slope_clamp = 0.6;
    double p_fault = 1.5 / 320.0;
    double throw_min = 10.0;
    double throw_max = 30.0;
};

struct ParticleSet {
    std::vector<Particle> particles;
    std::vector<double> weights; // non-negative, sum 1
    int station = 0;
    std::uint64_t stream_seed = 0; // base of this filter's substreams
    int degeneracy_count = 0;      // times the weights collapsed and were reset

    int n_par() const { return static_cast<int>(particles.size()); }
};

struct BoundaryEstimate {
    double top_depth;
    double bottom_depth;
    double normalized_weight; // renormalized over the extracted subset
};

ParticleSet pf_init(double prior_lo, double prior_hi, const TransitionModel& model,
                    int n_par, std::uint64_t seed);

// One transition step for every particle; weights untouched, station += 1.
// The parallel version and the serial _ref version are bit-identical because
// each particle draws from its own derived substream.
void pf_propagate(ParticleSet& set, const TransitionModel& model);
void pf_propagate_ref(ParticleSet& set, const TransitionModel& model);

// Gaussian likelihood on the gamma residual, computed in log-space with
// max-subtraction; weights renormalized. A full collapse resets to uniform.
void pf_update(ParticleSet& set, double observed_gamma, double bit_tvd,
               const OffsetLog& log, double sigma);
void pf_update_ref(ParticleSet& set, double observed_gamma, double bit_tvd,
                   const OffsetLog& log, double sigma);

// Systematic resampling; all weights reset to 1/n_par.
void pf_resample(ParticleSet& set);

// The n_best highest-weight particles (ties -> lower index), subset weights
// renormalized to sum 1.
std::vector<BoundaryEstimate> pf_best(const ParticleSet& set, int n_best, double thickness);

// Same selection, but keeps the full particle state (for look-ahead rollouts).
std::vector<std::pair<Particle, double>> pf_best_particles(const ParticleSet& set, int n_best);

// Stochastic roll-forward of one particle's boundary for n stations.
std::vector<std::pair<double, double>> pf_lookahead(const Particle& start,
                                                    const TransitionModel& model, int n,
                                                    double thickness, std::uint64_t seed);

struct PfDiagnostics {
    double gamma_mae;
    double boundary_mae; // ft
};
PfDiagnostics pf_mae(const std::vector<double>& predicted_gamma,
                     const std::vector<double>& true_gamma,
                     const std::vector<double>& estimated_top,
                     const std::vector<double>& true_top);

double pf_ess(const ParticleSet& set);

// Stations at which the filter resamples: every 16th (before each decision
// point and midway between decision points).
inline bool pf_resample_due(int station) { return station % 16 == 0; }

// The top-k particles at every assimilated station, captured from the
// posterior (between update and resample). Row-major k-wide blocks;
// subset-normalized weights in descending order (any common factor cancels
// in the prefix-renormalizing MAE helpers below).
struct PfTrace {
    int top_k = 1;
    std::vector<int> stations;
    std::vector<double> top;        // stations x top_k
    std::vector<double> pred_gamma; // same shape
    std::vector<double> weight;     // same shape
    std::vector<double> ess;

    // Weighted mean absolute deviation of the n_best estimate from the truth,
    // averaged over stations (the "MAE of input" diagnostics).
    double boundary_mae(int n_best, const std::vector<double>& true_top) const;
    double gamma_mae(int n_best, const std::vector<double>& true_gamma) const;
};

// Assimilate one observation: optional propagate, weight update, scheduled
// resample. Trace rows capture the posterior between update and resample; the
// decision-station resample can be deferred (allow_resample = false) so the
// policy sees posterior weights, and must then be applied by the caller
// before the next propagate.
void pf_assimilate(ParticleSet& set, const TransitionModel& model, const OffsetLog& log,
                   double sigma, double bit_tvd, double observed_gamma, double thickness,
                   bool propagate_first, PfTrace* trace = nullptr, bool allow_resample = true);

} // namespace geosteer

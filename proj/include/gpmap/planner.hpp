#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpmap/field.hpp"
#include "gpmap/gp.hpp"
#include "gpmap/rng.hpp"

namespace gpmap {

struct EmptyCandidates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PolicyRule { benchmark, a1, a2, a1_randomized, a2_randomized };

const char* to_string(PolicyRule rule);
PolicyRule policy_from_string(const std::string& s);
inline bool is_randomized(PolicyRule rule) {
  return rule == PolicyRule::a1_randomized || rule == PolicyRule::a2_randomized;
}

struct SamplingPolicy {
  PolicyRule rule = PolicyRule::benchmark;
  int top_k = 5;  // randomized rules only
  std::uint64_t rng_seed = 0;
};

// At least one of the three criteria must be present.
struct StoppingCriteria {
  std::optional<int> max_samples;           // eta: total samples incl. the bootstrap
  std::optional<double> max_distance;       // delta
  std::optional<double> variance_threshold; // psi: on the max candidate-grid variance

  bool any() const {
    return max_samples.has_value() || max_distance.has_value() ||
           variance_threshold.has_value();
  }
  // Compact identifier, e.g. "eta20", "delta300", "psi0.4"; combinations joined by '+'.
  std::string label() const;
};

enum class StopReason {
  sample_budget,        // eta reached
  distance_budget,      // delta reached (final leg may overshoot)
  variance_threshold,   // max candidate variance fell below psi
  candidates_exhausted  // every candidate already sampled; no criterion fired
};

const char* to_string(StopReason reason);

struct CandidateGrid {
  std::vector<Point2> points;
  double d_max = 0.0;  // domain diagonal side*sqrt(2); normalizes distances in scores

  // Node grid of spec, optionally subsampled by taking every stride-th index per axis.
  static CandidateGrid from_grid(const GridSpec& spec, int stride = 1);
};

struct PlannerState {
  std::vector<Observation> dataset;
  Point2 current_location;
  double cumulative_distance = 0.0;
  int iteration = 0;
};

struct PlannerConfig {
  Point2 start{0.0, 0.0};
  int coarse_k = 2;          // coarse bootstrap is a k x k cell-center lattice
  int candidate_stride = 1;  // >1 coarsens the candidate grid for speed
  double signal_variance = 1.0;
  double noise_variance = kDefaultNoiseVariance;
  std::optional<double> length_scale;  // absent: side / 5

  GpHyperparams resolve_hyperparams(double side) const {
    return {signal_variance, length_scale.value_or(default_length_scale(side)),
            noise_variance};
  }
};

// Exclusion radius for revisits: candidates within this distance of an existing
// observation are never re-selected.
inline constexpr double kRevisitExclusionRadius = 1e-6;

// Multiplicative uncertainty/cost balance: variance * (1 - d/d_max).
double acquisition_a1(double variance, double dist, double d_max);

// Additive balance: 0.5 * (variance + (1 - d/d_max)).
double acquisition_a2(double variance, double dist, double d_max);

// Phase 1: visit the coarse points in serpentine order from start, sampling the truth
// at each. Throws OutOfBounds via sample_truth if a point is outside the domain.
PlannerState initial_coarse_sample(const GroundTruthField& truth,
                                   const std::vector<Point2>& coarse_points,
                                   Point2 start = {0.0, 0.0});

// One acquisition step: scores every non-excluded candidate under the policy rule and
// returns the chosen location. Deterministic rules take the argmax (ties to the lowest
// candidate index); randomized rules draw uniformly among the top_k best via rng.
// Throws EmptyCandidates when no candidate remains selectable.
Point2 select_next(const PlannerState& state, const GpModel& model,
                   const CandidateGrid& candidates, const SamplingPolicy& policy,
                   Rng& rng);

// One variance snapshot per fitted model: after the bootstrap and after each iterative
// sample (so count = iterative samples + 1).
struct Snapshot {
  double max_variance = 0.0;
  double avg_variance = 0.0;
  double cumulative_distance = 0.0;
};

// Per iterative sample: where the robot went, the winning acquisition score, leg length.
struct IterationRecord {
  Point2 position;
  double score = 0.0;
  double leg = 0.0;
};

struct CampaignResult {
  SamplingPolicy policy;
  StoppingCriteria stopping;
  StopReason stop_reason = StopReason::sample_budget;
  GpHyperparams hyperparams;
  GridSpec grid;  // spec of the final reconstruction grids

  int coarse_count = 0;
  std::vector<Observation> sample_log;      // bootstrap then iterative, in visit order
  std::vector<Point2> trajectory;           // start, then every sampled location
  std::vector<IterationRecord> iterations;  // one per iterative sample
  std::vector<Snapshot> per_iteration;      // iterations.size() + 1 entries

  std::vector<double> final_mean_grid;      // GP mean over the node grid
  std::vector<double> final_variance_grid;  // GP variance over the node grid

  double total_distance() const {
    return per_iteration.empty() ? 0.0 : per_iteration.back().cumulative_distance;
  }
  double final_max_variance() const {
    return per_iteration.empty() ? 0.0 : per_iteration.back().max_variance;
  }
  double final_avg_variance() const {
    return per_iteration.empty() ? 0.0 : per_iteration.back().avg_variance;
  }
  int sample_count() const { return static_cast<int>(sample_log.size()); }
};

// Full two-phase campaign: coarse bootstrap, then select -> travel -> sample -> refit
// -> snapshot -> stopping check (priority eta, delta, psi on simultaneous hits). The
// distance check runs post-travel, so the final leg may overshoot delta.
CampaignResult run_campaign(const GroundTruthField& truth, const SamplingPolicy& policy,
                            const StoppingCriteria& stopping,
                            const PlannerConfig& config = {});

}  // namespace gpmap

#include "gpmap/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>

#include "gpmap/io.hpp"

namespace gpmap {

const char* to_string(PolicyRule rule) {
  switch (rule) {
    case PolicyRule::benchmark: return "benchmark";
    case PolicyRule::a1: return "a1";
    case PolicyRule::a2: return "a2";
    case PolicyRule::a1_randomized: return "a1_randomized";
    case PolicyRule::a2_randomized: return "a2_randomized";
  }
  return "?";
}

PolicyRule policy_from_string(const std::string& s) {
  if (s == "benchmark") return PolicyRule::benchmark;
  if (s == "a1") return PolicyRule::a1;
  if (s == "a2") return PolicyRule::a2;
  if (s == "a1_randomized") return PolicyRule::a1_randomized;
  if (s == "a2_randomized") return PolicyRule::a2_randomized;
  throw std::invalid_argument("unknown policy rule: " + s);
}

std::string StoppingCriteria::label() const {
  std::string out;
  const auto add = [&out](const std::string& part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (max_samples) add("eta" + std::to_string(*max_samples));
  if (max_distance) add("delta" + format_double(*max_distance));
  if (variance_threshold) add("psi" + format_double(*variance_threshold));
  return out.empty() ? "none" : out;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::sample_budget: return "sample_budget";
    case StopReason::distance_budget: return "distance_budget";
    case StopReason::variance_threshold: return "variance_threshold";
    case StopReason::candidates_exhausted: return "candidates_exhausted";
  }
  return "?";
}

CandidateGrid CandidateGrid::from_grid(const GridSpec& spec, int stride) {
  if (stride < 1) throw ConfigError("candidate stride must be >= 1");
  CandidateGrid grid;
  grid.d_max = spec.side * std::sqrt(2.0);
  for (int iy = 0; iy < spec.resolution; iy += stride)
    for (int ix = 0; ix < spec.resolution; ix += stride)
      grid.points.push_back(spec.node(ix, iy));
  return grid;
}

double acquisition_a1(double variance, double dist, double d_max) {
  return variance * (1.0 - dist / d_max);
}

double acquisition_a2(double variance, double dist, double d_max) {
  return 0.5 * (variance + (1.0 - dist / d_max));
}

PlannerState initial_coarse_sample(const GroundTruthField& truth,
                                   const std::vector<Point2>& coarse_points,
                                   Point2 start) {
  if (coarse_points.empty()) throw ConfigError("coarse grid must be non-empty");
  PlannerState state;
  state.current_location = start;
  for (const Point2& p : serpentine_order(coarse_points)) {
    state.cumulative_distance += distance(state.current_location, p);
    state.current_location = p;
    state.dataset.push_back({p, sample_truth(truth, p)});
  }
  return state;
}

namespace {

std::vector<char> excluded_mask(const std::vector<Point2>& candidates,
                                const std::vector<Observation>& dataset) {
  std::vector<char> excluded(candidates.size(), 0);
  for (const Observation& obs : dataset)
    for (std::size_t q = 0; q < candidates.size(); ++q)
      if (!excluded[q] && distance(candidates[q], obs.location) <= kRevisitExclusionRadius)
        excluded[q] = 1;
  return excluded;
}

struct Choice {
  std::size_t index = 0;
  double score = 0.0;
};

// Scores every available candidate under the rule and picks the winner: argmax for
// deterministic rules (ties to the lowest index), a uniform draw among the sorted
// top_k for randomized ones. Empty optional when everything is excluded.
std::optional<Choice> choose_candidate(const std::vector<double>& variance,
                                       const std::vector<Point2>& candidates,
                                       const std::vector<char>& excluded, Point2 current,
                                       double d_max, PolicyRule rule, int top_k,
                                       Rng& rng) {
  const std::size_t m = candidates.size();
  const auto score_of = [&](std::size_t q) {
    const double v = variance[q];
    switch (rule) {
      case PolicyRule::benchmark: return v;
      case PolicyRule::a1:
      case PolicyRule::a1_randomized:
        return acquisition_a1(v, distance(current, candidates[q]), d_max);
      case PolicyRule::a2:
      case PolicyRule::a2_randomized:
        return acquisition_a2(v, distance(current, candidates[q]), d_max);
    }
    return v;
  };

  if (!is_randomized(rule)) {
    std::optional<Choice> best;
    for (std::size_t q = 0; q < m; ++q) {
      if (excluded[q]) continue;
      const double s = score_of(q);
      if (!best || s > best->score) best = Choice{q, s};
    }
    return best;
  }

  // Keep the top_k best (score descending, index ascending) in a small sorted array.
  std::vector<Choice> top;
  top.reserve(static_cast<std::size_t>(top_k));
  const auto better = [](const Choice& a, const Choice& b) {
    return a.score > b.score || (a.score == b.score && a.index < b.index);
  };
  for (std::size_t q = 0; q < m; ++q) {
    if (excluded[q]) continue;
    const Choice c{q, score_of(q)};
    if (top.size() < static_cast<std::size_t>(top_k)) {
      top.insert(std::upper_bound(top.begin(), top.end(), c, better), c);
    } else if (better(c, top.back())) {
      top.pop_back();
      top.insert(std::upper_bound(top.begin(), top.end(), c, better), c);
    }
  }
  if (top.empty()) return std::nullopt;
  return top[rng.next_index(top.size())];
}

}  // namespace

Point2 select_next(const PlannerState& state, const GpModel& model,
                   const CandidateGrid& candidates, const SamplingPolicy& policy,
                   Rng& rng) {
  if (candidates.points.empty()) throw EmptyCandidates("candidate grid is empty");
  if (policy.top_k < 1) throw ConfigError("top_k must be >= 1");
  std::vector<double> mean, variance;
  model.predict(candidates.points, mean, variance);
  const auto excluded = excluded_mask(candidates.points, state.dataset);
  const auto choice =
      choose_candidate(variance, candidates.points, excluded, state.current_location,
                       candidates.d_max, policy.rule, policy.top_k, rng);
  if (!choice) throw EmptyCandidates("every candidate is excluded");
  return candidates.points[choice->index];
}

namespace {

// Gram and candidate cross-covariance caches that grow a row per observation, so each
// full refit costs one O(n^2) matrix copy instead of O(n^2) kernel evaluations and the
// per-iteration candidate predict costs one O(n) kernel row.
struct FitBuffers {
  Eigen::MatrixXd gram;   // cap x cap, leading n x n valid (no noise on the diagonal)
  Eigen::MatrixXd cross;  // cap x m, leading n rows valid
  Eigen::Index n = 0;

  void init(Eigen::Index m) {
    gram.resize(64, 64);
    cross.resize(64, m);
  }

  void append(const Point2& p, const std::vector<Observation>& dataset,
              const std::vector<Point2>& candidates, const GpHyperparams& h) {
    if (n + 1 > gram.rows()) {
      const Eigen::Index cap = gram.rows() * 2;
      Eigen::MatrixXd g2(cap, cap);
      g2.topLeftCorner(n, n) = gram.topLeftCorner(n, n);
      gram.swap(g2);
      Eigen::MatrixXd c2(cap, cross.cols());
      c2.topRows(n) = cross.topRows(n);
      cross.swap(c2);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = kernel(p, dataset[static_cast<std::size_t>(j)].location, h);
      gram(n, j) = k;
      gram(j, n) = k;
    }
    gram(n, n) = h.signal_variance;
    for (std::size_t q = 0; q < candidates.size(); ++q)
      cross(n, static_cast<Eigen::Index>(q)) = kernel(p, candidates[q], h);
    ++n;
  }
};

}  // namespace

CampaignResult run_campaign(const GroundTruthField& truth, const SamplingPolicy& policy,
                            const StoppingCriteria& stopping,
                            const PlannerConfig& config) {
  if (!stopping.any())
    throw ConfigError("stopping criteria must include at least one of eta/delta/psi");
  if (config.coarse_k < 1) throw ConfigError("coarse_k must be >= 1");
  if (policy.top_k < 1) throw ConfigError("top_k must be >= 1");

  const GridSpec& spec = truth.spec;
  const GpHyperparams h = config.resolve_hyperparams(spec.side);
  if (!h.valid()) throw ConfigError("invalid GP hyperparameters");

  const CandidateGrid candidates = CandidateGrid::from_grid(spec, config.candidate_stride);
  const std::size_t m = candidates.points.size();

  CampaignResult result;
  result.policy = policy;
  result.stopping = stopping;
  result.hyperparams = h;
  result.grid = spec;

  PlannerState state =
      initial_coarse_sample(truth, cell_center_lattice(spec.side, config.coarse_k),
                            config.start);
  result.coarse_count = static_cast<int>(state.dataset.size());
  result.trajectory.push_back(config.start);
  for (const Observation& obs : state.dataset) result.trajectory.push_back(obs.location);

  std::vector<char> excluded = excluded_mask(candidates.points, state.dataset);
  Rng rng(policy.rng_seed);

  FitBuffers buffers;
  buffers.init(static_cast<Eigen::Index>(m));
  for (const Observation& obs : state.dataset)
    buffers.append(obs.location, state.dataset, candidates.points, h);

  std::optional<GpModel> model;
  std::vector<double> variance;
  std::optional<StopReason> reason;

  while (true) {
    model = GpModel::fit_with_gram(state.dataset, h,
                                   buffers.gram.topLeftCorner(buffers.n, buffers.n));
    model->predict_with_cross(buffers.cross.topRows(buffers.n), nullptr, &variance);

    Snapshot snap;
    snap.max_variance = *std::max_element(variance.begin(), variance.end());
    snap.avg_variance =
        std::accumulate(variance.begin(), variance.end(), 0.0) / variance.size();
    snap.cumulative_distance = state.cumulative_distance;
    result.per_iteration.push_back(snap);

    if (stopping.max_samples &&
        static_cast<int>(state.dataset.size()) >= *stopping.max_samples) {
      reason = StopReason::sample_budget;
      break;
    }
    if (stopping.max_distance && state.cumulative_distance >= *stopping.max_distance) {
      reason = StopReason::distance_budget;
      break;
    }
    if (stopping.variance_threshold && snap.max_variance < *stopping.variance_threshold) {
      reason = StopReason::variance_threshold;
      break;
    }

    const auto choice =
        choose_candidate(variance, candidates.points, excluded, state.current_location,
                         candidates.d_max, policy.rule, policy.top_k, rng);
    if (!choice) {
      reason = StopReason::candidates_exhausted;
      break;
    }

    const Point2 p = candidates.points[choice->index];
    const double leg = distance(state.current_location, p);
    state.cumulative_distance += leg;
    state.current_location = p;
    state.dataset.push_back({p, sample_truth(truth, p)});
    state.iteration += 1;

    buffers.append(p, state.dataset, candidates.points, h);
    for (std::size_t q = 0; q < m; ++q)
      if (!excluded[q] && distance(candidates.points[q], p) <= kRevisitExclusionRadius)
        excluded[q] = 1;

    result.iterations.push_back({p, choice->score, leg});
    result.trajectory.push_back(p);
  }

  result.stop_reason = *reason;
  result.sample_log = state.dataset;

  // Final reconstruction over the node grid; when the candidate grid is the node grid
  // (stride 1) its cached cross-covariances are reused directly.
  if (config.candidate_stride == 1) {
    model->predict_with_cross(buffers.cross.topRows(buffers.n), &result.final_mean_grid,
                              &result.final_variance_grid);
  } else {
    model->predict(grid_nodes(spec), result.final_mean_grid, result.final_variance_grid);
  }
  return result;
}

}  // namespace gpmap

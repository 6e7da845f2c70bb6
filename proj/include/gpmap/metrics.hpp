#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gpmap/field.hpp"
#include "gpmap/gp.hpp"
#include "gpmap/planner.hpp"

namespace gpmap {

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C(D_M) = M * c_sample + total Euclidean trajectory length (travel cost is identified
// with distance; c_sample defaults to 0 everywhere in the simulator).
double total_cost(const CampaignResult& result, double c_sample = 0.0);

// GP mean/variance evaluated at every node of spec.
void reconstruct(const std::vector<Observation>& dataset, const GridSpec& spec,
                 const GpHyperparams& h, std::vector<double>& mean,
                 std::vector<double>& variance);

// Root mean squared difference of two equally sized grids.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

// Convenience overload against a ground-truth field (ShapeMismatch on differing specs).
double rmse(const std::vector<double>& reconstruction, const GroundTruthField& truth);

// One campaign reduced to the four reported metrics plus its grouping keys. The three
// booleans record which budget axes the stopping criteria included (not what fired).
struct BatchRecord {
  std::string policy;
  double size = 0.0;
  std::string stopping;  // StoppingCriteria::label()
  bool has_sample_budget = false;
  bool has_distance_budget = false;
  bool has_variance_threshold = false;
  double distance = 0.0;
  int samples = 0;
  double final_max_variance = 0.0;
  double final_avg_variance = 0.0;
};

enum class SummaryMetric { distance, samples, max_variance, avg_variance };

const char* to_string(SummaryMetric metric);

struct SummaryRow {
  std::string policy;
  double size = 0.0;
  std::string stopping;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  int n = 0;
  bool excluded = false;  // stopping criterion conditions this metric (plot-exclusion rule)
};

// Groups records by (policy, size, stopping) in first-appearance order and aggregates
// the chosen metric. A row is flagged excluded when the group's stopping criterion
// conditions the dependent variable: distance<->delta, samples<->eta, max_variance<->psi
// (avg_variance is never flagged).
std::vector<SummaryRow> summarize_batch(const std::vector<BatchRecord>& records,
                                        SummaryMetric metric);

BatchRecord to_batch_record(const CampaignResult& result, double size);

}  // namespace gpmap

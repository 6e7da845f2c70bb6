#include "gpmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpmap {

double total_cost(const CampaignResult& result, double cost_per_sample) {
  return result.total_distance() +
         cost_per_sample * static_cast<double>(result.sample_log.size());
}

void reconstruct(const std::vector<Observation>& dataset, const GridSpec& spec,
                 const GpHyperparams& hyperparams, std::vector<double>& mean,
                 std::vector<double>& variance) {
  const GpModel model = GpModel::fit(dataset, hyperparams);
  model.predict(grid_nodes(spec), mean, variance);
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw ShapeMismatch("rmse requires two equally sized non-empty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

double rmse(const std::vector<double>& reconstruction, const GroundTruthField& truth) {
  return rmse(reconstruction, truth.values);
}

BatchRecord to_batch_record(const CampaignResult& result, double size) {
  BatchRecord record;
  record.policy = to_string(result.policy.rule);
  record.size = size;
  record.stopping = result.stopping.label();
  record.has_sample_budget = result.stopping.max_samples.has_value();
  record.has_distance_budget = result.stopping.max_distance.has_value();
  record.has_variance_threshold = result.stopping.variance_threshold.has_value();
  record.distance = result.total_distance();
  record.samples = static_cast<int>(result.sample_log.size());
  record.final_max_variance = result.final_max_variance();
  record.final_avg_variance = result.final_avg_variance();
  return record;
}

namespace {

double metric_value(const BatchRecord& r, SummaryMetric metric) {
  switch (metric) {
    case SummaryMetric::distance: return r.distance;
    case SummaryMetric::samples: return static_cast<double>(r.samples);
    case SummaryMetric::max_variance: return r.final_max_variance;
    case SummaryMetric::avg_variance: return r.final_avg_variance;
  }
  return 0.0;
}

// A metric is trivially pinned when the stopping criteria budget the same axis (mean
// distance under a distance budget, and so on); such rows are kept but flagged.
bool excluded_for(const BatchRecord& r, SummaryMetric metric) {
  switch (metric) {
    case SummaryMetric::distance: return r.has_distance_budget;
    case SummaryMetric::samples: return r.has_sample_budget;
    case SummaryMetric::max_variance: return r.has_variance_threshold;
    case SummaryMetric::avg_variance: return false;
  }
  return false;
}

}  // namespace

const char* to_string(SummaryMetric metric) {
  switch (metric) {
    case SummaryMetric::distance: return "distance";
    case SummaryMetric::samples: return "samples";
    case SummaryMetric::max_variance: return "max_variance";
    case SummaryMetric::avg_variance: return "avg_variance";
  }
  return "?";
}

std::vector<SummaryRow> summarize_batch(const std::vector<BatchRecord>& records,
                                        SummaryMetric metric) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> values;
  std::vector<bool> any_excluded;
  for (const BatchRecord& r : records) {
    std::size_t g = 0;
    for (; g < rows.size(); ++g)
      if (rows[g].policy == r.policy && rows[g].size == r.size &&
          rows[g].stopping == r.stopping)
        break;
    if (g == rows.size()) {
      SummaryRow row;
      row.policy = r.policy;
      row.size = r.size;
      row.stopping = r.stopping;
      rows.push_back(row);
      values.emplace_back();
      any_excluded.push_back(false);
    }
    values[g].push_back(metric_value(r, metric));
    if (excluded_for(r, metric)) any_excluded[g] = true;
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    const std::vector<double>& v = values[g];
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    rows[g].mean = mean;
    rows[g].stddev = std::sqrt(ss / n);
    rows[g].n = static_cast<int>(v.size());
    rows[g].excluded = any_excluded[g];
  }
  return rows;
}

}  // namespace gpmap

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpmap/field.hpp"
#include "gpmap/metrics.hpp"
#include "gpmap/planner.hpp"

namespace gpmap {

// Per-size map suite composition; map indices are assigned in this order.
struct MapsComposition {
  int n_uniform = 1;
  int n_sloped = 1;
  int n_gaussian = 5;
  int n_hybrid = 5;

  int total() const { return n_uniform + n_sloped + n_gaussian + n_hybrid; }
  FieldKind kind_of(int map_index) const;
};

struct ExperimentPlan {
  std::vector<double> sizes{20, 40, 60, 80, 100};
  MapsComposition maps_per_size;
  int n_clusters = 10;
  std::vector<PolicyRule> policies{PolicyRule::benchmark, PolicyRule::a1, PolicyRule::a2,
                                   PolicyRule::a1_randomized, PolicyRule::a2_randomized};
  int top_k = 5;
  std::vector<StoppingCriteria> stopping_grid;  // empty is invalid; see default_plan()
  std::uint64_t base_seed = 42;
  std::string output_dir = "out";
  PlannerConfig planner;
  int jobs = 1;

  void validate() const;  // throws ConfigError with a message naming the bad entry
};

// The full batch protocol: sizes 20..100 step 20, 12 maps per size (1 uniform,
// 1 sloped, 5 gaussian, 5 hybrid), all five policies, stopping grid
// eta in {20,40,60,80,100}, delta in {300,600,900,1200,1500}, psi = 0.4.
ExperimentPlan default_plan();

// Documented, portable seed derivation (splitmix64 chaining / FNV-1a; see README).
std::uint64_t derive_map_seed(std::uint64_t base_seed, double size, int map_index);
std::uint64_t derive_policy_seed(std::uint64_t base_seed, const std::string& tuple_id);

struct CampaignTuple {
  double size = 0.0;
  int map_index = 0;
  FieldKind kind = FieldKind::uniform;
  PolicyRule policy = PolicyRule::benchmark;
  StoppingCriteria stopping;
  std::string id;  // e.g. "s20_m03_gaussian_a2_delta300"; doubles as the results dir name
  std::uint64_t map_seed = 0;
  std::uint64_t policy_seed = 0;
};

std::vector<CampaignTuple> enumerate_tuples(const ExperimentPlan& plan);

// The suite's ground truth for one (size, map index), derived from the plan's base seed.
GroundTruthField make_map(const ExperimentPlan& plan, double size, int map_index);

// Config-file schema round trip (JSON; every field optional, defaults from default_plan).
ExperimentPlan plan_from_json_file(const std::string& path);
std::string plan_to_json(const ExperimentPlan& plan);

// Deterministic policies (benchmark/a1/a2) trace identical trajectories on every map of
// a size because posterior variance never depends on observed values. replay_campaign
// transfers such a result onto another map: observation values are re-sampled and the
// mean reconstruction is refit; trajectory, snapshots, variance grid and stop reason
// carry over unchanged. run_experiment uses this to compute each deterministic
// (size, stopping) campaign once per map suite.
CampaignResult replay_campaign(const CampaignResult& proto, const GroundTruthField& field);

struct RunOutcome {
  int executed = 0;
  int skipped = 0;
  int failed = 0;
};

// Executes every tuple of the plan with a pool of plan.jobs workers, skipping tuples
// whose campaign.json already exists (resume). Writes per-tuple artifacts, a manifest
// with one row per tuple, and summary/<metric>.csv tables. Returns the process exit
// code: 0 on success, 2 when any campaign failed (manifest records the errors).
int run_experiment(const ExperimentPlan& plan, std::ostream& log,
                   RunOutcome* outcome = nullptr);

// Loads every results/*/campaign.json under output_dir in canonical order
// (policy rank, size, stopping, map index) and reduces them to batch records.
std::vector<BatchRecord> load_batch_records(const std::string& output_dir);

// Rebuilds summary/<metric>.csv from persisted campaign files; 0 on success, 1 if the
// directory holds no results.
int summarize_output_dir(const std::string& output_dir, std::ostream& log);

// Writes the plan's ground-truth suite under <output_dir>/fields as JSON+CSV pairs.
int generate_fields(const ExperimentPlan& plan, std::ostream& log);

// Renders PGM heatmaps: for a campaign directory, mean.pgm and variance.pgm from its
// grid CSVs; for a saved field JSON, <stem>.pgm of the truth. 0 ok, 1 on input errors.
int render_path(const std::string& input_path, const std::string& out_dir,
                std::ostream& log);

}  // namespace gpmap

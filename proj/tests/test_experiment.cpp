#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gpmap/experiment.hpp"

using namespace gpmap;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentPlan tiny_plan(const fs::path& out) {
  ExperimentPlan plan;
  plan.sizes = {10.0};
  plan.maps_per_size = {1, 1, 1, 0};
  plan.n_clusters = 3;
  plan.policies = {PolicyRule::benchmark, PolicyRule::a2_randomized};
  plan.stopping_grid = {StoppingCriteria{.max_samples = 10}};
  plan.base_seed = 7;
  plan.output_dir = out.string();
  return plan;
}

}  // namespace

TEST_CASE("the default plan enumerates the full protocol") {
  const ExperimentPlan plan = default_plan();
  CHECK(plan.sizes == std::vector<double>{20, 40, 60, 80, 100});
  CHECK(plan.maps_per_size.total() == 12);
  CHECK(plan.policies.size() == 5);
  REQUIRE(plan.stopping_grid.size() == 11);
  CHECK(plan.stopping_grid[0].label() == "eta20");
  CHECK(plan.stopping_grid[4].label() == "eta100");
  CHECK(plan.stopping_grid[5].label() == "delta300");
  CHECK(plan.stopping_grid[9].label() == "delta1500");
  CHECK(plan.stopping_grid[10].label() == "psi0.4");
  CHECK(plan.base_seed == 42);

  const auto tuples = enumerate_tuples(plan);
  CHECK(tuples.size() == 5 * 12 * 5 * 11);  // 3300 campaigns

  // Identifiers are unique and well-formed.
  std::set<std::string> ids;
  for (const auto& t : tuples) ids.insert(t.id);
  CHECK(ids.size() == tuples.size());
  CHECK(tuples[0].id.rfind("s20_m00_uniform_", 0) == 0);
}

TEST_CASE("map indices map onto the suite composition in declaration order") {
  MapsComposition comp;  // 1 uniform, 1 sloped, 5 gaussian, 5 hybrid
  CHECK(comp.kind_of(0) == FieldKind::uniform);
  CHECK(comp.kind_of(1) == FieldKind::sloped);
  for (int i = 2; i <= 6; ++i) CHECK(comp.kind_of(i) == FieldKind::gaussian);
  for (int i = 7; i <= 11; ++i) CHECK(comp.kind_of(i) == FieldKind::hybrid);
  CHECK_THROWS_AS(comp.kind_of(12), ConfigError);
  CHECK_THROWS_AS(comp.kind_of(-1), ConfigError);
}

TEST_CASE("seed derivation is stable across runs and platforms") {
  CHECK(derive_map_seed(42, 20.0, 3) == 3234947248446789536ULL);
  CHECK(derive_policy_seed(42, "s20_m03_gaussian_a2_delta300") ==
        6758427496357123404ULL);
  // Distinct inputs decorrelate.
  CHECK(derive_map_seed(42, 20.0, 3) != derive_map_seed(42, 20.0, 4));
  CHECK(derive_map_seed(42, 20.0, 3) != derive_map_seed(42, 40.0, 3));
  CHECK(derive_map_seed(42, 20.0, 3) != derive_map_seed(43, 20.0, 3));
  CHECK(derive_policy_seed(42, "a") != derive_policy_seed(42, "b"));
}

TEST_CASE("every policy sees the same map for a given (size, index)") {
  const ExperimentPlan plan = default_plan();
  const auto tuples = enumerate_tuples(plan);
  // Collect the map seed for (size=20, map 3) across all tuples that reference it.
  std::set<std::uint64_t> seeds;
  for (const auto& t : tuples)
    if (t.size == 20.0 && t.map_index == 3) seeds.insert(t.map_seed);
  CHECK(seeds.size() == 1);

  const GroundTruthField a = make_map(plan, 20.0, 3);
  const GroundTruthField b = make_map(plan, 20.0, 3);
  CHECK(a.kind == FieldKind::gaussian);
  CHECK(a.values == b.values);
  CHECK(a.seed == *seeds.begin());
}

TEST_CASE("make_map honors the suite composition") {
  ExperimentPlan plan = default_plan();
  plan.n_clusters = 4;
  CHECK(make_map(plan, 20.0, 0).kind == FieldKind::uniform);
  CHECK(make_map(plan, 20.0, 1).kind == FieldKind::sloped);
  CHECK(make_map(plan, 20.0, 2).kind == FieldKind::gaussian);
  CHECK(make_map(plan, 20.0, 11).kind == FieldKind::hybrid);
  const GroundTruthField u = make_map(plan, 20.0, 0);
  // Uniform maps draw their level from the map seed.
  CHECK(u.values[0] >= 0.0);
  CHECK(u.values[0] < 1.0);
  for (double v : u.values) CHECK(v == u.values[0]);
}

TEST_CASE("plan JSON round-trips through the config schema") {
  ExperimentPlan plan = tiny_plan("somewhere");
  plan.planner.coarse_k = 3;
  plan.planner.candidate_stride = 2;
  plan.planner.length_scale = 1.5;
  plan.jobs = 4;
  const std::string json = plan_to_json(plan);

  const fs::path dir = fs::temp_directory_path() / "gpmap_plan_roundtrip";
  fs::create_directories(dir);
  const fs::path cfg = dir / "plan.json";
  {
    std::ofstream out(cfg);
    out << json;
  }
  const ExperimentPlan back = plan_from_json_file(cfg.string());
  CHECK(back.sizes == plan.sizes);
  CHECK(back.maps_per_size.n_uniform == 1);
  CHECK(back.maps_per_size.n_hybrid == 0);
  CHECK(back.n_clusters == 3);
  CHECK(back.policies == plan.policies);
  REQUIRE(back.stopping_grid.size() == 1);
  CHECK(back.stopping_grid[0].label() == "eta10");
  CHECK(back.base_seed == 7);
  CHECK(back.output_dir == "somewhere");
  CHECK(back.planner.coarse_k == 3);
  CHECK(back.planner.candidate_stride == 2);
  CHECK(back.planner.length_scale.value() == 1.5);
  CHECK(back.jobs == 4);
  fs::remove_all(dir);
}

TEST_CASE("config files with unknown or invalid keys are rejected") {
  const fs::path dir = fs::temp_directory_path() / "gpmap_bad_config";
  fs::create_directories(dir);
  const auto write_cfg = [&](const std::string& body) {
    const fs::path p = dir / "cfg.json";
    std::ofstream out(p);
    out << body;
    out.close();
    return p.string();
  };
  CHECK_THROWS_AS(plan_from_json_file(write_cfg("{\"sizzes\": [10]}")), ConfigError);
  CHECK_THROWS_AS(plan_from_json_file(write_cfg("{\"sizes\": \"ten\"}")), ConfigError);
  CHECK_THROWS_AS(plan_from_json_file(write_cfg("not json at all")), ConfigError);
  CHECK_THROWS_AS(plan_from_json_file(write_cfg("{\"policies\": [\"greedy\"]}")),
                  ConfigError);
  CHECK_THROWS_AS(
      plan_from_json_file(write_cfg("{\"stopping\": [{\"max_sample\": 3}]}")),
      ConfigError);
  CHECK_THROWS_AS(plan_from_json_file((dir / "missing.json").string()), ConfigError);
  // An empty stopping entry parses (the schema allows omissions) but fails validation.
  const ExperimentPlan parsed = plan_from_json_file(write_cfg("{\"stopping\": [{}]}"));
  CHECK_THROWS_AS(parsed.validate(), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("plan validation names bad entries") {
  ExperimentPlan plan = tiny_plan("x");
  plan.sizes = {};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = tiny_plan("x");
  plan.sizes = {-5.0};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = tiny_plan("x");
  plan.stopping_grid.clear();
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = tiny_plan("x");
  plan.stopping_grid = {StoppingCriteria{}};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = tiny_plan("x");
  plan.jobs = 0;
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  plan = tiny_plan("x");
  plan.maps_per_size = {0, 0, 0, 0};
  CHECK_THROWS_AS(plan.validate(), ConfigError);
  CHECK_NOTHROW(tiny_plan("x").validate());
}

TEST_CASE("replaying a deterministic campaign equals running it directly") {
  // The selection sequence of a value-blind policy depends only on geometry, so a
  // campaign computed on one map must transfer exactly onto another of the same size.
  ExperimentPlan plan = tiny_plan("unused");
  const GroundTruthField sloped = make_map(plan, 10.0, 1);
  const GroundTruthField gaussian = make_map(plan, 10.0, 2);

  const SamplingPolicy policy{PolicyRule::benchmark, plan.top_k, 0};
  const StoppingCriteria stopping{.max_samples = 12};
  const CampaignResult proto = run_campaign(sloped, policy, stopping, plan.planner);
  const CampaignResult direct = run_campaign(gaussian, policy, stopping, plan.planner);
  const CampaignResult replayed = replay_campaign(proto, gaussian);

  REQUIRE(replayed.sample_log.size() == direct.sample_log.size());
  for (std::size_t i = 0; i < direct.sample_log.size(); ++i) {
    CHECK(replayed.sample_log[i].location.x == direct.sample_log[i].location.x);
    CHECK(replayed.sample_log[i].location.y == direct.sample_log[i].location.y);
    CHECK(replayed.sample_log[i].value == direct.sample_log[i].value);
  }
  CHECK(replayed.stop_reason == direct.stop_reason);
  REQUIRE(replayed.per_iteration.size() == direct.per_iteration.size());
  for (std::size_t i = 0; i < direct.per_iteration.size(); ++i) {
    CHECK(replayed.per_iteration[i].max_variance == direct.per_iteration[i].max_variance);
    CHECK(replayed.per_iteration[i].avg_variance == direct.per_iteration[i].avg_variance);
    CHECK(replayed.per_iteration[i].cumulative_distance ==
          direct.per_iteration[i].cumulative_distance);
  }
  CHECK(replayed.final_variance_grid == direct.final_variance_grid);
  REQUIRE(replayed.final_mean_grid.size() == direct.final_mean_grid.size());
  for (std::size_t i = 0; i < direct.final_mean_grid.size(); ++i)
    CHECK(std::fabs(replayed.final_mean_grid[i] - direct.final_mean_grid[i]) < 1e-9);
}

TEST_CASE("run_experiment writes artifacts, resumes, and parallelizes reproducibly") {
  const fs::path base = fs::temp_directory_path() / "gpmap_experiment_run";
  fs::remove_all(base);
  const ExperimentPlan plan = tiny_plan(base / "run1");

  std::ostringstream log;
  RunOutcome outcome;
  REQUIRE(run_experiment(plan, log, &outcome) == 0);
  CHECK(outcome.executed == 6);  // 1 size x 3 maps x 2 policies x 1 stopping
  CHECK(outcome.skipped == 0);
  CHECK(outcome.failed == 0);

  const fs::path results = base / "run1" / "results";
  int campaign_dirs = 0;
  for (const auto& entry : fs::directory_iterator(results)) {
    ++campaign_dirs;
    CHECK(fs::exists(entry.path() / "campaign.json"));
    CHECK(fs::exists(entry.path() / "trajectory.csv"));
    CHECK(fs::exists(entry.path() / "mean.csv"));
    CHECK(fs::exists(entry.path() / "variance.csv"));
    CHECK(fs::exists(entry.path() / "truth.pgm"));
  }
  CHECK(campaign_dirs == 6);
  CHECK(fs::exists(base / "run1" / "manifest.json"));
  for (const char* metric : {"distance", "samples", "max_variance", "avg_variance"})
    CHECK(fs::exists(base / "run1" / "summary" / (std::string(metric) + ".csv")));

  SUBCASE("a second invocation skips every finished campaign and keeps summaries") {
    const std::string before = slurp(base / "run1" / "summary" / "distance.csv");
    std::ostringstream log2;
    RunOutcome again;
    REQUIRE(run_experiment(plan, log2, &again) == 0);
    CHECK(again.executed == 0);
    CHECK(again.skipped == 6);
    CHECK(slurp(base / "run1" / "summary" / "distance.csv") == before);
  }

  SUBCASE("a parallel run produces byte-identical summaries") {
    ExperimentPlan par = tiny_plan(base / "run2");
    par.jobs = 3;
    std::ostringstream log2;
    REQUIRE(run_experiment(par, log2, nullptr) == 0);
    for (const char* metric : {"distance", "samples", "max_variance", "avg_variance"}) {
      const std::string name = std::string(metric) + ".csv";
      CHECK(slurp(base / "run2" / "summary" / name) ==
            slurp(base / "run1" / "summary" / name));
    }
  }

  SUBCASE("summarize rebuilds tables from the stored campaigns") {
    const std::string before = slurp(base / "run1" / "summary" / "samples.csv");
    fs::remove(base / "run1" / "summary" / "samples.csv");
    std::ostringstream log2;
    CHECK(summarize_output_dir((base / "run1").string(), log2) == 0);
    CHECK(slurp(base / "run1" / "summary" / "samples.csv") == before);
  }

  SUBCASE("batch records come back in canonical order") {
    const auto records = load_batch_records((base / "run1").string());
    REQUIRE(records.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(records[i].policy == "benchmark");
    for (int i = 3; i < 6; ++i) CHECK(records[i].policy == "a2_randomized");
    CHECK(records[0].stopping == "eta10");
    CHECK(records[0].samples == 10);
  }

  fs::remove_all(base);
}

TEST_CASE("summarize on an empty directory reports failure") {
  const fs::path dir = fs::temp_directory_path() / "gpmap_empty_summary";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream log;
  CHECK(summarize_output_dir(dir.string(), log) == 1);
  fs::remove_all(dir);
}

TEST_CASE("generate_fields writes the ground-truth suite") {
  const fs::path base = fs::temp_directory_path() / "gpmap_fields_out";
  fs::remove_all(base);
  ExperimentPlan plan = tiny_plan(base);
  std::ostringstream log;
  REQUIRE(generate_fields(plan, log) == 0);
  int n = 0;
  for (const auto& entry : fs::directory_iterator(base / "fields"))
    if (entry.path().extension() == ".json") {
      ++n;
      const GroundTruthField f = load_field(entry.path().string());
      CHECK(f.spec.side == 10.0);
    }
  CHECK(n == 3);
  fs::remove_all(base);
}

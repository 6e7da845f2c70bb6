#include "gpmap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <initializer_list>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>
#include <utility>

#include "json.hpp"

#include "gpmap/io.hpp"

namespace gpmap {

namespace fs = std::filesystem;
using nlohmann::json;

FieldKind MapsComposition::kind_of(int map_index) const {
  int i = map_index;
  if (i >= 0 && i < n_uniform) return FieldKind::uniform;
  i -= n_uniform;
  if (i >= 0 && i < n_sloped) return FieldKind::sloped;
  i -= n_sloped;
  if (i >= 0 && i < n_gaussian) return FieldKind::gaussian;
  i -= n_gaussian;
  if (i >= 0 && i < n_hybrid) return FieldKind::hybrid;
  throw ConfigError("map index " + std::to_string(map_index) + " outside the map suite");
}

void ExperimentPlan::validate() const {
  if (sizes.empty()) throw ConfigError("sizes must be non-empty");
  for (double s : sizes)
    if (!std::isfinite(s) || !(s > 0.0))
      throw ConfigError("sizes entries must be positive and finite");
  if (maps_per_size.n_uniform < 0 || maps_per_size.n_sloped < 0 ||
      maps_per_size.n_gaussian < 0 || maps_per_size.n_hybrid < 0)
    throw ConfigError("map counts must be non-negative");
  if (maps_per_size.total() < 1) throw ConfigError("map suite must hold at least one map");
  if (n_clusters < 0) throw ConfigError("n_clusters must be non-negative");
  if (policies.empty()) throw ConfigError("policies must be non-empty");
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (stopping_grid.empty()) throw ConfigError("stopping grid must be non-empty");
  for (const StoppingCriteria& s : stopping_grid) {
    if (!s.any())
      throw ConfigError("every stopping entry must set at least one criterion");
    if (s.max_samples && *s.max_samples < 1)
      throw ConfigError("max_samples must be >= 1");
    if (s.max_distance && !(*s.max_distance > 0.0))
      throw ConfigError("max_distance must be positive");
    if (s.variance_threshold && !(*s.variance_threshold > 0.0))
      throw ConfigError("variance_threshold must be positive");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must be non-empty");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (planner.coarse_k < 1) throw ConfigError("coarse_k must be >= 1");
  if (planner.candidate_stride < 1) throw ConfigError("candidate_stride must be >= 1");
  if (!(planner.signal_variance > 0.0)) throw ConfigError("signal_variance must be positive");
  if (!(planner.noise_variance >= 0.0))
    throw ConfigError("noise_variance must be non-negative");
  if (planner.length_scale && !(*planner.length_scale > 0.0))
    throw ConfigError("length_scale must be positive");
}

ExperimentPlan default_plan() {
  ExperimentPlan plan;
  for (int eta : {20, 40, 60, 80, 100}) {
    StoppingCriteria s;
    s.max_samples = eta;
    plan.stopping_grid.push_back(s);
  }
  for (double delta : {300.0, 600.0, 900.0, 1200.0, 1500.0}) {
    StoppingCriteria s;
    s.max_distance = delta;
    plan.stopping_grid.push_back(s);
  }
  StoppingCriteria psi;
  psi.variance_threshold = 0.4;
  plan.stopping_grid.push_back(psi);
  return plan;
}

std::uint64_t derive_map_seed(std::uint64_t base_seed, double size, int map_index) {
  return mix(mix(base_seed, seed_from_double(size)),
             static_cast<std::uint64_t>(map_index));
}

std::uint64_t derive_policy_seed(std::uint64_t base_seed, const std::string& tuple_id) {
  return mix(base_seed, fnv1a(tuple_id));
}

namespace {

std::string pad2(int v) {
  return (v >= 0 && v < 10) ? "0" + std::to_string(v) : std::to_string(v);
}

std::string tuple_id(double size, int map_index, FieldKind kind, PolicyRule policy,
                     const StoppingCriteria& stopping) {
  return "s" + format_double(size) + "_m" + pad2(map_index) + "_" + to_string(kind) +
         "_" + to_string(policy) + "_" + stopping.label();
}

}  // namespace

std::vector<CampaignTuple> enumerate_tuples(const ExperimentPlan& plan) {
  std::vector<CampaignTuple> tuples;
  for (double size : plan.sizes)
    for (int m = 0; m < plan.maps_per_size.total(); ++m) {
      const FieldKind kind = plan.maps_per_size.kind_of(m);
      for (PolicyRule policy : plan.policies)
        for (const StoppingCriteria& stopping : plan.stopping_grid) {
          CampaignTuple t;
          t.size = size;
          t.map_index = m;
          t.kind = kind;
          t.policy = policy;
          t.stopping = stopping;
          t.id = tuple_id(size, m, kind, policy, stopping);
          t.map_seed = derive_map_seed(plan.base_seed, size, m);
          t.policy_seed = derive_policy_seed(plan.base_seed, t.id);
          tuples.push_back(std::move(t));
        }
    }
  return tuples;
}

GroundTruthField make_map(const ExperimentPlan& plan, double size, int map_index) {
  const GridSpec spec = default_grid(size);
  const std::uint64_t seed = derive_map_seed(plan.base_seed, size, map_index);
  GroundTruthField field;
  switch (plan.maps_per_size.kind_of(map_index)) {
    case FieldKind::uniform: {
      Rng rng(seed);
      field = generate_uniform(spec, rng.next_double());
      break;
    }
    case FieldKind::sloped:
      field = generate_sloped(spec, seed);
      break;
    case FieldKind::gaussian:
      field = generate_gaussian(spec, plan.n_clusters, seed);
      break;
    case FieldKind::hybrid:
      field = generate_hybrid(spec, plan.n_clusters, seed);
      break;
  }
  field.seed = seed;
  return field;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

json stopping_to_json(const StoppingCriteria& s) {
  json j = json::object();
  if (s.max_samples) j["max_samples"] = *s.max_samples;
  if (s.max_distance) j["max_distance"] = *s.max_distance;
  if (s.variance_threshold) j["variance_threshold"] = *s.variance_threshold;
  return j;
}

StoppingCriteria stopping_from_json(const json& j) {
  check_keys(j, {"max_samples", "max_distance", "variance_threshold"}, "stopping entry");
  StoppingCriteria s;
  if (j.contains("max_samples")) s.max_samples = j.at("max_samples").get<int>();
  if (j.contains("max_distance")) s.max_distance = j.at("max_distance").get<double>();
  if (j.contains("variance_threshold"))
    s.variance_threshold = j.at("variance_threshold").get<double>();
  return s;
}

json planner_to_json(const PlannerConfig& c) {
  json j;
  j["candidate_stride"] = c.candidate_stride;
  j["coarse_k"] = c.coarse_k;
  if (c.length_scale) j["length_scale"] = *c.length_scale;
  j["noise_variance"] = c.noise_variance;
  j["signal_variance"] = c.signal_variance;
  j["start"] = json::array({c.start.x, c.start.y});
  return j;
}

PlannerConfig planner_from_json(const json& j, const PlannerConfig& defaults) {
  check_keys(j,
             {"candidate_stride", "coarse_k", "length_scale", "noise_variance",
              "signal_variance", "start"},
             "planner");
  PlannerConfig c = defaults;
  if (j.contains("candidate_stride")) c.candidate_stride = j.at("candidate_stride").get<int>();
  if (j.contains("coarse_k")) c.coarse_k = j.at("coarse_k").get<int>();
  if (j.contains("length_scale")) c.length_scale = j.at("length_scale").get<double>();
  if (j.contains("noise_variance")) c.noise_variance = j.at("noise_variance").get<double>();
  if (j.contains("signal_variance")) c.signal_variance = j.at("signal_variance").get<double>();
  if (j.contains("start")) {
    const json& s = j.at("start");
    if (!s.is_array() || s.size() != 2)
      throw ConfigError("planner.start must be a [x, y] pair");
    c.start = {s.at(0).get<double>(), s.at(1).get<double>()};
  }
  return c;
}

ExperimentPlan plan_from_json(const json& j) {
  check_keys(j,
             {"sizes", "maps", "n_clusters", "policies", "top_k", "stopping", "base_seed",
              "output_dir", "planner", "jobs"},
             "plan");
  ExperimentPlan plan = default_plan();
  if (j.contains("sizes")) plan.sizes = j.at("sizes").get<std::vector<double>>();
  if (j.contains("maps")) {
    const json& m = j.at("maps");
    check_keys(m, {"uniform", "sloped", "gaussian", "hybrid"}, "maps");
    if (m.contains("uniform")) plan.maps_per_size.n_uniform = m.at("uniform").get<int>();
    if (m.contains("sloped")) plan.maps_per_size.n_sloped = m.at("sloped").get<int>();
    if (m.contains("gaussian")) plan.maps_per_size.n_gaussian = m.at("gaussian").get<int>();
    if (m.contains("hybrid")) plan.maps_per_size.n_hybrid = m.at("hybrid").get<int>();
  }
  if (j.contains("n_clusters")) plan.n_clusters = j.at("n_clusters").get<int>();
  if (j.contains("policies")) {
    plan.policies.clear();
    for (const json& p : j.at("policies"))
      plan.policies.push_back(policy_from_string(p.get<std::string>()));
  }
  if (j.contains("top_k")) plan.top_k = j.at("top_k").get<int>();
  if (j.contains("stopping")) {
    plan.stopping_grid.clear();
    for (const json& s : j.at("stopping")) plan.stopping_grid.push_back(stopping_from_json(s));
  }
  if (j.contains("base_seed")) plan.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("output_dir")) plan.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("planner")) plan.planner = planner_from_json(j.at("planner"), plan.planner);
  if (j.contains("jobs")) plan.jobs = j.at("jobs").get<int>();
  return plan;
}

}  // namespace

ExperimentPlan plan_from_json_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const std::exception& e) {  // unreadable file or malformed JSON
    throw ConfigError("cannot parse config " + path + ": " + e.what());
  }
  try {
    return plan_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad config " + path + ": " + e.what());
  }
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["base_seed"] = plan.base_seed;
  j["jobs"] = plan.jobs;
  j["maps"] = {{"gaussian", plan.maps_per_size.n_gaussian},
               {"hybrid", plan.maps_per_size.n_hybrid},
               {"sloped", plan.maps_per_size.n_sloped},
               {"uniform", plan.maps_per_size.n_uniform}};
  j["n_clusters"] = plan.n_clusters;
  j["output_dir"] = plan.output_dir;
  j["planner"] = planner_to_json(plan.planner);
  json policies = json::array();
  for (PolicyRule p : plan.policies) policies.push_back(to_string(p));
  j["policies"] = std::move(policies);
  j["sizes"] = plan.sizes;
  json stoppings = json::array();
  for (const StoppingCriteria& s : plan.stopping_grid) stoppings.push_back(stopping_to_json(s));
  j["stopping"] = std::move(stoppings);
  j["top_k"] = plan.top_k;
  return j.dump(2) + "\n";
}

CampaignResult replay_campaign(const CampaignResult& proto,
                               const GroundTruthField& field) {
  if (field.spec.resolution != proto.grid.resolution ||
      field.spec.side != proto.grid.side)
    throw ConfigError("replay requires a field on the prototype's grid");
  CampaignResult out = proto;
  for (Observation& obs : out.sample_log) obs.value = sample_truth(field, obs.location);
  const GpModel model = GpModel::fit(out.sample_log, out.hyperparams);
  model.predict(grid_nodes(out.grid), out.final_mean_grid, out.final_variance_grid);
  return out;
}

namespace {

json campaign_to_json(const CampaignTuple& t, const CampaignResult& r) {
  json j;
  j["coarse_count"] = r.coarse_count;
  j["final_avg_variance"] = r.final_avg_variance();
  j["final_max_variance"] = r.final_max_variance();
  j["grid"] = {{"resolution", r.grid.resolution}, {"side", r.grid.side}};
  j["hyperparams"] = {{"length_scale", r.hyperparams.length_scale},
                      {"noise_variance", r.hyperparams.noise_variance},
                      {"signal_variance", r.hyperparams.signal_variance}};
  j["id"] = t.id;
  j["kind"] = to_string(t.kind);
  j["map_index"] = t.map_index;
  j["map_seed"] = t.map_seed;
  j["policy"] = {{"rng_seed", r.policy.rng_seed},
                 {"rule", to_string(r.policy.rule)},
                 {"top_k", r.policy.top_k}};
  j["samples"] = r.sample_count();
  j["size"] = t.size;
  json snaps = json::array();
  for (const Snapshot& s : r.per_iteration)
    snaps.push_back({{"avg_variance", s.avg_variance},
                     {"cumulative_distance", s.cumulative_distance},
                     {"max_variance", s.max_variance}});
  j["snapshots"] = std::move(snaps);
  j["stop_reason"] = to_string(r.stop_reason);
  json stopping = stopping_to_json(r.stopping);
  stopping["label"] = r.stopping.label();
  j["stopping"] = std::move(stopping);
  j["total_distance"] = r.total_distance();
  return j;
}

std::string trajectory_csv(const CampaignResult& r) {
  std::string out = "step,phase,x,y,value,leg,cumulative_distance,score\n";
  double cumulative = 0.0;
  for (std::size_t k = 0; k < r.sample_log.size(); ++k) {
    const Observation& obs = r.sample_log[k];
    const double leg = distance(r.trajectory[k], r.trajectory[k + 1]);
    cumulative += leg;
    const bool bootstrap = static_cast<int>(k) < r.coarse_count;
    out += std::to_string(k);
    out += bootstrap ? ",bootstrap," : ",iterative,";
    out += format_double(obs.location.x);
    out += ',';
    out += format_double(obs.location.y);
    out += ',';
    out += format_double(obs.value);
    out += ',';
    out += format_double(leg);
    out += ',';
    out += format_double(cumulative);
    out += ',';
    if (!bootstrap)
      out += format_double(r.iterations[k - static_cast<std::size_t>(r.coarse_count)].score);
    out += '\n';
  }
  return out;
}

void write_campaign_outputs(const std::string& dir, const CampaignTuple& t,
                            const CampaignResult& r, const GroundTruthField& field) {
  ensure_dir(dir);
  atomic_write_file(dir + "/trajectory.csv", trajectory_csv(r));
  atomic_write_file(dir + "/mean.csv", grid_to_csv(r.final_mean_grid, r.grid.resolution));
  atomic_write_file(dir + "/variance.csv",
                    grid_to_csv(r.final_variance_grid, r.grid.resolution));
  atomic_write_file(dir + "/truth.pgm",
                    grid_to_pgm(field.values, field.spec.resolution));
  atomic_write_file(dir + "/mean.pgm", grid_to_pgm(r.final_mean_grid, r.grid.resolution));
  atomic_write_file(dir + "/variance.pgm",
                    grid_to_pgm(r.final_variance_grid, r.grid.resolution));
  // campaign.json is the resume marker, so it lands last.
  atomic_write_file(dir + "/campaign.json", campaign_to_json(t, r).dump(2) + "\n");
}

int policy_rank(const std::string& rule) {
  if (rule == "benchmark") return 0;
  if (rule == "a1") return 1;
  if (rule == "a2") return 2;
  if (rule == "a1_randomized") return 3;
  if (rule == "a2_randomized") return 4;
  return 5;
}

// "eta20+psi0.4" -> [(0,20),(2,0.4)]; axis ranks eta < delta < psi keep summary rows in
// the plan's natural order regardless of label spelling.
std::vector<std::pair<int, double>> stopping_sort_key(const std::string& label) {
  std::vector<std::pair<int, double>> key;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    const std::size_t next = label.find('+', pos);
    const std::string part =
        label.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    const auto with_prefix = [&part](const char* prefix) {
      return part.rfind(prefix, 0) == 0;
    };
    if (with_prefix("eta"))
      key.emplace_back(0, std::strtod(part.c_str() + 3, nullptr));
    else if (with_prefix("delta"))
      key.emplace_back(1, std::strtod(part.c_str() + 5, nullptr));
    else if (with_prefix("psi"))
      key.emplace_back(2, std::strtod(part.c_str() + 3, nullptr));
    else
      key.emplace_back(3, 0.0);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return key;
}

}  // namespace

std::vector<BatchRecord> load_batch_records(const std::string& output_dir) {
  const fs::path results = fs::path(output_dir) / "results";
  std::vector<json> docs;
  if (fs::is_directory(results))
    for (const fs::directory_entry& entry : fs::directory_iterator(results)) {
      const fs::path file = entry.path() / "campaign.json";
      if (!entry.is_directory() || !fs::exists(file)) continue;
      try {
        docs.push_back(json::parse(read_file(file.string())));
      } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + file.string() + ": " + e.what());
      }
    }
  std::sort(docs.begin(), docs.end(), [](const json& a, const json& b) {
    const auto key = [](const json& d) {
      return std::make_tuple(
          policy_rank(d.at("policy").at("rule").get<std::string>()),
          d.at("size").get<double>(),
          stopping_sort_key(d.at("stopping").at("label").get<std::string>()),
          d.at("map_index").get<int>());
    };
    return key(a) < key(b);
  });
  std::vector<BatchRecord> records;
  records.reserve(docs.size());
  for (const json& d : docs) {
    BatchRecord r;
    r.policy = d.at("policy").at("rule").get<std::string>();
    r.size = d.at("size").get<double>();
    r.stopping = d.at("stopping").at("label").get<std::string>();
    r.has_sample_budget = d.at("stopping").contains("max_samples");
    r.has_distance_budget = d.at("stopping").contains("max_distance");
    r.has_variance_threshold = d.at("stopping").contains("variance_threshold");
    r.distance = d.at("total_distance").get<double>();
    r.samples = d.at("samples").get<int>();
    r.final_max_variance = d.at("final_max_variance").get<double>();
    r.final_avg_variance = d.at("final_avg_variance").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

void write_summaries(const std::string& output_dir,
                     const std::vector<BatchRecord>& records) {
  const std::string dir = output_dir + "/summary";
  ensure_dir(dir);
  for (SummaryMetric metric :
       {SummaryMetric::distance, SummaryMetric::samples, SummaryMetric::max_variance,
        SummaryMetric::avg_variance}) {
    const std::vector<SummaryRow> rows = summarize_batch(records, metric);
    std::string csv = "policy,size,stopping,mean,std,n,excluded_flag\n";
    json rows_json = json::array();
    for (const SummaryRow& row : rows) {
      csv += row.policy + ',' + format_double(row.size) + ',' + row.stopping + ',' +
             format_double(row.mean) + ',' + format_double(row.stddev) + ',' +
             std::to_string(row.n) + ',' + (row.excluded ? "1" : "0") + '\n';
      rows_json.push_back({{"excluded", row.excluded},
                           {"mean", row.mean},
                           {"n", row.n},
                           {"policy", row.policy},
                           {"size", row.size},
                           {"std", row.stddev},
                           {"stopping", row.stopping}});
    }
    const std::string name = to_string(metric);
    atomic_write_file(dir + "/" + name + ".csv", csv);
    atomic_write_file(dir + "/" + name + ".json", rows_json.dump(2) + "\n");
  }
}

}  // namespace

int summarize_output_dir(const std::string& output_dir, std::ostream& log) {
  const std::vector<BatchRecord> records = load_batch_records(output_dir);
  if (records.empty()) {
    log << "no campaign results under " << output_dir << "/results\n";
    return 1;
  }
  write_summaries(output_dir, records);
  log << "summarized " << records.size() << " campaigns into " << output_dir
      << "/summary\n";
  return 0;
}

int run_experiment(const ExperimentPlan& plan, std::ostream& log, RunOutcome* outcome) {
  plan.validate();
  const std::string results_dir = plan.output_dir + "/results";
  ensure_dir(results_dir);
  const std::vector<CampaignTuple> tuples = enumerate_tuples(plan);

  enum class Status { ok, skipped, failed };
  struct Slot {
    Status status = Status::failed;
    std::string error;
  };
  std::vector<Slot> slots(tuples.size());

  // Deterministic rules ignore observed values, so every map of a size shares one
  // trajectory per (policy, stopping); compute it once and replay it per map.
  using ProtoFuture = std::shared_future<std::shared_ptr<const CampaignResult>>;
  std::map<std::string, ProtoFuture> protos;
  std::mutex proto_mutex;
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};

  const auto proto_for = [&](const CampaignTuple& t) {
    const std::string key =
        format_double(t.size) + '|' + to_string(t.policy) + '|' + t.stopping.label();
    std::promise<std::shared_ptr<const CampaignResult>> promise;
    ProtoFuture future;
    bool compute = false;
    {
      const std::lock_guard<std::mutex> lock(proto_mutex);
      const auto it = protos.find(key);
      if (it == protos.end()) {
        future = promise.get_future().share();
        protos.emplace(key, future);
        compute = true;
      } else {
        future = it->second;
      }
    }
    if (compute) {
      try {
        const GroundTruthField base_map = make_map(plan, t.size, 0);
        SamplingPolicy policy{t.policy, plan.top_k, 0};
        promise.set_value(std::make_shared<CampaignResult>(
            run_campaign(base_map, policy, t.stopping, plan.planner)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  };

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tuples.size()) return;
      const CampaignTuple& t = tuples[i];
      const std::string dir = results_dir + "/" + t.id;
      try {
        if (fs::exists(dir + "/campaign.json")) {
          slots[i].status = Status::skipped;
          done.fetch_add(1);
          continue;
        }
        const GroundTruthField field = make_map(plan, t.size, t.map_index);
        CampaignResult result;
        if (is_randomized(t.policy)) {
          result = run_campaign(field, {t.policy, plan.top_k, t.policy_seed}, t.stopping,
                                plan.planner);
        } else {
          result = replay_campaign(*proto_for(t), field);
          result.policy.rng_seed = t.policy_seed;
        }
        write_campaign_outputs(dir, t, result, field);
        slots[i].status = Status::ok;
        const int finished = done.fetch_add(1) + 1;
        const std::lock_guard<std::mutex> lock(log_mutex);
        log << "[" << finished << "/" << tuples.size() << "] " << t.id << " samples="
            << result.sample_count() << " distance=" << format_double(result.total_distance())
            << " stop=" << to_string(result.stop_reason) << "\n";
      } catch (const std::exception& e) {
        slots[i].status = Status::failed;
        slots[i].error = e.what();
        done.fetch_add(1);
        const std::lock_guard<std::mutex> lock(log_mutex);
        log << "FAILED " << t.id << ": " << e.what() << "\n";
      }
    }
  };

  if (plan.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(plan.jobs));
    for (int w = 0; w < plan.jobs; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  RunOutcome counts;
  json campaigns = json::array();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    json row;
    row["id"] = tuples[i].id;
    switch (slots[i].status) {
      case Status::ok:
        row["status"] = "ok";
        ++counts.executed;
        break;
      case Status::skipped:
        row["status"] = "skipped";
        ++counts.skipped;
        break;
      case Status::failed:
        row["status"] = "failed";
        row["error"] = slots[i].error;
        ++counts.failed;
        break;
    }
    campaigns.push_back(std::move(row));
  }
  json manifest;
  manifest["campaigns"] = std::move(campaigns);
  manifest["counts"] = {{"executed", counts.executed},
                        {"failed", counts.failed},
                        {"skipped", counts.skipped},
                        {"total", tuples.size()}};
  atomic_write_file(plan.output_dir + "/manifest.json", manifest.dump(2) + "\n");

  const std::vector<BatchRecord> records = load_batch_records(plan.output_dir);
  if (!records.empty()) write_summaries(plan.output_dir, records);

  log << "executed " << counts.executed << ", skipped " << counts.skipped << ", failed "
      << counts.failed << " of " << tuples.size() << " campaigns\n";
  if (outcome) *outcome = counts;
  return counts.failed > 0 ? 2 : 0;
}

int generate_fields(const ExperimentPlan& plan, std::ostream& log) {
  plan.validate();
  const std::string dir = plan.output_dir + "/fields";
  ensure_dir(dir);
  for (double size : plan.sizes)
    for (int m = 0; m < plan.maps_per_size.total(); ++m) {
      const GroundTruthField field = make_map(plan, size, m);
      const std::string stem =
          "s" + format_double(size) + "_m" + pad2(m) + "_" + to_string(field.kind);
      save_field(field, dir + "/" + stem + ".json", dir + "/" + stem + ".csv");
      log << "wrote " << dir << "/" << stem << ".json\n";
    }
  return 0;
}

int render_path(const std::string& input_path, const std::string& out_dir,
                std::ostream& log) {
  try {
    ensure_dir(out_dir);
    if (fs::is_directory(input_path)) {
      bool any = false;
      for (const char* name : {"mean", "variance"}) {
        const std::string csv = input_path + "/" + name + ".csv";
        if (!fs::exists(csv)) continue;
        int resolution = 0;
        const std::vector<double> values = grid_from_csv(read_file(csv), &resolution);
        const std::string out = out_dir + "/" + std::string(name) + ".pgm";
        atomic_write_file(out, grid_to_pgm(values, resolution));
        log << "wrote " << out << "\n";
        any = true;
      }
      if (!any) {
        log << "no mean.csv or variance.csv under " << input_path << "\n";
        return 1;
      }
      return 0;
    }
    if (fs::path(input_path).extension() == ".json") {
      const GroundTruthField field = load_field(input_path);
      const std::string out =
          out_dir + "/" + fs::path(input_path).stem().string() + ".pgm";
      atomic_write_file(out, grid_to_pgm(field.values, field.spec.resolution));
      log << "wrote " << out << "\n";
      return 0;
    }
    log << "render input must be a campaign directory or a saved field json\n";
    return 1;
  } catch (const std::exception& e) {
    log << "render failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gpmap

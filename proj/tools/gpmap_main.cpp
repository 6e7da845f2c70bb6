// Command-line front end for the batch simulator: generate ground-truth fields, run a
// campaign plan, rebuild summary tables, or render stored grids as images.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 partial campaign failures.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gpmap/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string output_dir;
  int jobs = 0;
  std::uint64_t base_seed = 0;
  CLI::Option* output_dir_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* base_seed_opt = nullptr;
};

// Precedence: built-in defaults, then the config file, then explicit flags.
gpmap::ExperimentPlan load_plan(const Overrides& o) {
  gpmap::ExperimentPlan plan =
      o.config.empty() ? gpmap::default_plan() : gpmap::plan_from_json_file(o.config);
  if (o.output_dir_opt && o.output_dir_opt->count() > 0) plan.output_dir = o.output_dir;
  if (o.jobs_opt && o.jobs_opt->count() > 0) plan.jobs = o.jobs;
  if (o.base_seed_opt && o.base_seed_opt->count() > 0) plan.base_seed = o.base_seed;
  return plan;
}

void add_plan_options(CLI::App* cmd, Overrides& o, bool with_jobs) {
  cmd->add_option("--config", o.config, "JSON experiment plan (defaults apply when absent)");
  o.output_dir_opt = cmd->add_option("--output-dir", o.output_dir, "Output directory");
  o.base_seed_opt = cmd->add_option("--base-seed", o.base_seed, "Master seed");
  if (with_jobs)
    o.jobs_opt = cmd->add_option("--jobs", o.jobs, "Parallel campaign workers")
                     ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive soil-moisture sampling simulator: Gaussian-process mapping with "
               "cost-aware sampling policies"};
  app.require_subcommand(1);

  Overrides run_o, fields_o;

  CLI::App* run_cmd = app.add_subcommand("run", "Execute every campaign in the plan");
  add_plan_options(run_cmd, run_o, true);

  CLI::App* fields_cmd =
      app.add_subcommand("generate-fields", "Write the plan's ground-truth field suite");
  add_plan_options(fields_cmd, fields_o, false);

  CLI::App* summarize_cmd =
      app.add_subcommand("summarize", "Rebuild summary tables from stored campaigns");
  std::string summarize_dir = "out";
  summarize_cmd->add_option("dir", summarize_dir, "Output directory holding results/");

  CLI::App* render_cmd =
      app.add_subcommand("render", "Render grid images from a campaign directory or a "
                                   "saved field JSON");
  std::string render_input;
  std::string render_out;
  render_cmd->add_option("input", render_input, "Campaign directory or field JSON")
      ->required();
  CLI::Option* render_out_opt =
      render_cmd->add_option("--out", render_out, "Directory for the rendered images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) return gpmap::run_experiment(load_plan(run_o), std::cout);
    if (fields_cmd->parsed()) return gpmap::generate_fields(load_plan(fields_o), std::cout);
    if (summarize_cmd->parsed())
      return gpmap::summarize_output_dir(summarize_dir, std::cout);
    if (render_cmd->parsed()) {
      std::string out = render_out;
      if (render_out_opt->count() == 0) {
        const std::filesystem::path input(render_input);
        out = std::filesystem::is_directory(input)
                  ? input.string()
                  : input.parent_path().string();
        if (out.empty()) out = ".";
      }
      return gpmap::render_path(render_input, out, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

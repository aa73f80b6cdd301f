#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invopt/batch.h"
#include "invopt/cutting_plane.h"
#include "invopt/error.h"
#include "invopt/generator.h"
#include "invopt/instance_io.h"
#include "invopt/report.h"

namespace {

using invopt::Error;
using invopt::ErrorCode;
using nlohmann::json;

int Emit(const json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::kSchema, "cannot write " + out);
  f << text;
  return 0;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kSchema, "cannot write " + path);
  f << text;
}

invopt::RunOptions ParseWeights(invopt::RunOptions run,
                                const std::string& spec) {
  if (spec == "default") {
    run.weight_mode = invopt::WeightMode::kDefault;
  } else if (spec == "unit") {
    run.weight_mode = invopt::WeightMode::kUnit;
  } else {
    run.weight_mode = invopt::WeightMode::kList;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        size_t used = 0;
        const double w = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        run.weight_list.push_back(w);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kSchema, "bad weight \"" + item + "\"");
      }
    }
  }
  return run;
}

uint64_t DefaultSeed() {
  if (const char* env = std::getenv("INVOPT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kSchema, "INVOPT_SEED must be an integer");
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse mixed-integer optimization"};
  app.require_subcommand(1);

  bool no_timing = false;
  std::string out;

  // solve
  auto* solve = app.add_subcommand("solve", "Run one inverse model");
  std::string solve_file, model = "tolerance", weights = "default";
  std::optional<double> tau;
  std::optional<double> fwd_cap;
  std::optional<int64_t> node_limit;
  bool scale = false, solve_oracle = false;
  solve->add_option("instance", solve_file, "Instance JSON")->required();
  solve->add_option("--model", model, "tolerance|biobj|bigm|concise");
  solve->add_option("--tau", tau, "Tolerance fraction");
  solve->add_option("--weights", weights, "default|unit|w1,w2,...");
  solve->add_flag("--scale", scale, "Rescale c_hat toward c_ring");
  solve->add_flag("--oracle", solve_oracle, "Certify by enumeration");
  solve->add_option("--forward-time-cap", fwd_cap, "Seconds per forward solve");
  solve->add_option("--node-limit", node_limit, "Nodes per forward solve");
  solve->add_option("--out", out, "Report path (default stdout)");
  solve->add_flag("--no-timing", no_timing, "Zero all timing fields");

  // cutplane
  auto* cut = app.add_subcommand("cutplane", "Cutting-plane refinement");
  std::string cut_file, log_path;
  invopt::CutPlaneConfig cfg;
  bool cut_oracle = false;
  cut->add_option("instance", cut_file, "Instance JSON")->required();
  cut->add_option("--max-iters", cfg.max_iters);
  cut->add_option("--tau-init", cfg.tau_init);
  cut->add_option("--tau-up", cfg.tau_up);
  cut->add_option("--tau-down", cfg.tau_down);
  cut->add_option("--forward-time-cap", cfg.forward_time_cap);
  cut->add_option("--total-time-cap", cfg.total_time_cap);
  cut->add_option("--gap-stop", cfg.abs_gap_stop);
  cut->add_option("--log", log_path, "Iteration records as JSON lines (- for stderr)");
  cut->add_flag("--oracle", cut_oracle, "Certify by enumeration");
  cut->add_option("--out", out, "Report path (default stdout)");
  cut->add_flag("--no-timing", no_timing, "Zero all timing fields");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a cost against x_hat");
  std::string verify_file, cost_file;
  verify->add_option("instance", verify_file, "Instance JSON")->required();
  verify->add_option("--cost", cost_file, "Cost JSON ([...] or {\"cost\": [...]})")
      ->required();
  verify->add_option("--forward-time-cap", fwd_cap);
  verify->add_option("--out", out, "Report path (default stdout)");

  // batch
  auto* batch = app.add_subcommand("batch", "Run a directory of instances");
  std::string batch_dir, csv_path, md_path, reports_dir;
  std::vector<std::string> models;
  int parallel = 1;
  bool batch_no_oracle = false;
  batch->add_option("dir", batch_dir, "Directory of instance files")->required();
  batch->add_option("--model", models, "Models to run (repeatable; also cutplane)");
  batch->add_option("--parallel", parallel, "Worker threads")
      ->check(CLI::Range(1, 256));
  batch->add_option("--csv", csv_path, "Write the summary as CSV");
  batch->add_option("--md", md_path, "Write the summary as Markdown");
  batch->add_option("--reports", reports_dir, "Write one report per run here");
  batch->add_option("--forward-time-cap", fwd_cap);
  batch->add_flag("--no-oracle", batch_no_oracle, "Skip enumeration checks");
  batch->add_flag("--no-timing", no_timing, "Zero all timing fields");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a generated instance suite");
  std::string gen_dir;
  std::optional<uint64_t> seed;
  std::vector<int> sizes = {3, 4, 5};
  int per_size = 20;
  gen->add_option("--out", gen_dir, "Target directory")->required();
  gen->add_option("--seed", seed, "RNG seed (default INVOPT_SEED or 1)");
  gen->add_option("--sizes", sizes)->delimiter(',');
  gen->add_option("--per-size", per_size)->check(CLI::Range(1, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    invopt::RunOptions run;
    run.timing = !no_timing;
    run.forward_time_cap = fwd_cap;
    run.node_limit = node_limit;

    if (*solve) {
      const auto kind = invopt::ParseModelKind(model);
      if (!kind) throw Error(ErrorCode::kSchema, "unknown model " + model);
      run = ParseWeights(run, weights);
      run.kind = *kind;
      run.tau = tau;
      run.scale = scale;
      run.oracle = solve_oracle;
      const invopt::Instance inst = invopt::LoadInstance(solve_file);
      return Emit(invopt::SolveReport(inst, run), out);
    }
    if (*cut) {
      const invopt::Instance inst = invopt::LoadInstance(cut_file);
      if (!cut->count("--max-iters") && inst.config.max_iters) {
        cfg.max_iters = *inst.config.max_iters;
      }
      if (!cut->count("--forward-time-cap") && inst.config.forward_time_cap) {
        cfg.forward_time_cap = *inst.config.forward_time_cap;
      }
      if (!cut->count("--total-time-cap") && inst.config.total_time_cap) {
        cfg.total_time_cap = *inst.config.total_time_cap;
      }
      run.oracle = cut_oracle;
      std::ofstream log_file;
      std::ostream* log = nullptr;
      if (log_path == "-") {
        log = &std::cerr;
      } else if (!log_path.empty()) {
        log_file.open(log_path);
        if (!log_file) throw Error(ErrorCode::kSchema, "cannot write " + log_path);
        log = &log_file;
      }
      invopt::IterationSink sink;
      if (log) {
        sink = [&](const invopt::IterationRecord& rec) {
          *log << invopt::IterationToJson(rec, run.timing).dump() << std::endl;
        };
      }
      return Emit(invopt::CutPlaneReport(inst, run, cfg, sink), out);
    }
    if (*verify) {
      const invopt::Instance inst = invopt::LoadInstance(verify_file);
      std::ifstream in(cost_file);
      if (!in) throw Error(ErrorCode::kSchema, "cannot read " + cost_file);
      json cost_json;
      try {
        cost_json = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kSchema, std::string("malformed cost: ") + e.what());
      }
      const Eigen::VectorXd cost =
          invopt::ParseCost(cost_json, inst.problem.num_vars);
      return Emit(invopt::VerifyReport(inst, cost, run), out);
    }
    if (*batch) {
      invopt::BatchOptions options;
      if (!models.empty()) options.models = models;
      options.parallel = parallel;
      options.run = run;
      options.run.oracle = !batch_no_oracle;
      const auto entries = invopt::RunBatch(batch_dir, options);
      const auto rows = invopt::Summarize(entries, options.models);
      if (!csv_path.empty()) WriteText(csv_path, invopt::SummaryCsv(rows));
      const std::string md = invopt::SummaryMarkdown(rows, entries);
      if (!md_path.empty()) WriteText(md_path, md);
      std::cout << md;
      if (!reports_dir.empty()) {
        std::filesystem::create_directories(reports_dir);
        for (const auto& e : entries) {
          if (!e.ok) continue;
          const auto stem = std::filesystem::path(e.file).stem().string();
          WriteText(reports_dir + "/" + stem + "." + e.model + ".json",
                    e.report.dump(2) + "\n");
        }
      }
      int failed = 0;
      for (const auto& e : entries) failed += !e.ok;
      return failed > 0 ? 1 : 0;
    }
    if (*gen) {
      std::filesystem::create_directories(gen_dir);
      const auto suite =
          invopt::GenerateSuite(seed.value_or(DefaultSeed()), sizes, per_size);
      for (const auto& inst : suite) {
        invopt::SaveInstance(inst, gen_dir + "/" + inst.name + ".json");
      }
      std::cout << "wrote " << suite.size() << " instances to " << gen_dir
                << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << invopt::ErrorCodeName(e.code()) << "]: "
              << e.what() << "\n";
    return invopt::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

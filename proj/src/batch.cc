#include "invopt/batch.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "invopt/error.h"
#include "invopt/instance_io.h"

namespace invopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

BatchEntry RunOne(const fs::path& file, const std::string& model,
                  const BatchOptions& options) {
  BatchEntry entry;
  entry.file = file.filename().string();
  entry.model = model;
  try {
    const Instance inst = LoadInstance(file);
    entry.name = inst.name;
    entry.group = inst.group.empty() ? "default" : inst.group;
    RunOptions run = options.run;
    if (model == "cutplane") {
      CutPlaneConfig cfg = options.cutplane;
      if (inst.config.forward_time_cap) {
        cfg.forward_time_cap = *inst.config.forward_time_cap;
      }
      if (inst.config.total_time_cap) {
        cfg.total_time_cap = *inst.config.total_time_cap;
      }
      if (inst.config.max_iters) cfg.max_iters = *inst.config.max_iters;
      entry.report = CutPlaneReport(inst, run, cfg);
    } else {
      run.kind = *ParseModelKind(model);
      entry.report = SolveReport(inst, run);
    }
    entry.ok = true;
  } catch (const Error& e) {
    entry.exit_code = ExitCodeFor(e.code());
    entry.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    entry.exit_code = 4;
    entry.error = e.what();
  }
  if (entry.name.empty()) entry.name = file.stem().string();
  if (entry.group.empty()) entry.group = "default";
  return entry;
}

Stat Collect(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.avg = sum / static_cast<double>(values.size());
  return s;
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

std::vector<BatchEntry> RunBatch(const fs::path& dir,
                                 const BatchOptions& options) {
  for (const std::string& m : options.models) {
    if (m != "cutplane" && !ParseModelKind(m)) {
      throw Error(ErrorCode::kSchema, "unknown model \"" + m + "\"");
    }
  }
  if (options.models.empty()) {
    throw Error(ErrorCode::kSchema, "no model requested");
  }
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        files.push_back(e.path());
      }
    }
  }
  if (files.empty()) {
    throw Error(ErrorCode::kSchema,
                "no .json instances in " + dir.string());
  }
  std::sort(files.begin(), files.end());

  struct Job {
    size_t file;
    size_t model;
  };
  std::vector<Job> jobs;
  for (size_t f = 0; f < files.size(); ++f) {
    for (size_t m = 0; m < options.models.size(); ++m) jobs.push_back({f, m});
  }
  std::vector<BatchEntry> entries(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      entries[i] = RunOne(files[jobs[i].file], options.models[jobs[i].model],
                          options);
    }
  };
  const int threads =
      std::clamp(options.parallel, 1, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return entries;
}

std::vector<SummaryRow> Summarize(const std::vector<BatchEntry>& entries,
                                  const std::vector<std::string>& models) {
  std::map<std::string, std::vector<const BatchEntry*>> by_group;
  for (const BatchEntry& e : entries) by_group[e.group].push_back(&e);

  std::vector<SummaryRow> rows;
  for (const auto& [group, list] : by_group) {
    for (const std::string& model : models) {
      SummaryRow row;
      row.group = group;
      row.model = model;
      std::vector<double> rgap, rnorm, cpu;
      for (const BatchEntry* e : list) {
        if (e->model != model) continue;
        ++row.count;
        if (!e->ok) {
          ++row.failed;
          continue;
        }
        const json& m = e->report.at("metrics");
        if (m.at("rgap").is_number()) rgap.push_back(m.at("rgap").get<double>());
        rnorm.push_back(m.at("rnorm_norm_of_diff").get<double>());
        cpu.push_back(m.at("cpu_seconds").get<double>());
        row.optimal_e2 += m.at("optimal_e2").get<bool>();
        row.optimal_e5 += m.at("optimal_e5").get<bool>();
        if (auto it = e->report.find("oracle");
            it != e->report.end() && it->at("status") != "skipped") {
          ++row.oracle_checked;
          row.oracle_e2 += it->at("rgap").get<double>() <= 1e-2;
        }
      }
      if (row.count == 0) continue;
      row.rgap = Collect(rgap);
      row.rnorm = Collect(rnorm);
      row.cpu = Collect(cpu);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string SummaryCsv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "group,model,count,failed,rgap_min,rgap_avg,rgap_max,rnorm_min,"
         "rnorm_avg,rnorm_max,cpu_min,cpu_avg,cpu_max,optimal_e2,optimal_e5,"
         "oracle_checked,oracle_e2\n";
  for (const SummaryRow& r : rows) {
    out << r.group << ',' << r.model << ',' << r.count << ',' << r.failed;
    for (const Stat* s : {&r.rgap, &r.rnorm, &r.cpu}) {
      out << ',' << Num(s->min) << ',' << Num(s->avg) << ',' << Num(s->max);
    }
    out << ',' << r.optimal_e2 << ',' << r.optimal_e5 << ','
        << r.oracle_checked << ',' << r.oracle_e2 << '\n';
  }
  return out.str();
}

std::string SummaryMarkdown(const std::vector<SummaryRow>& rows,
                            const std::vector<BatchEntry>& entries) {
  std::ostringstream out;
  out << "| group | model | n | failed | rgap min | rgap avg | rgap max | "
         "rnorm min | rnorm avg | rnorm max | cpu avg | opt e-2 | opt e-5 | "
         "oracle e-2 |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const SummaryRow& r : rows) {
    out << "| " << r.group << " | " << r.model << " | " << r.count << " | "
        << r.failed << " | " << Num(r.rgap.min) << " | " << Num(r.rgap.avg)
        << " | " << Num(r.rgap.max) << " | " << Num(r.rnorm.min) << " | "
        << Num(r.rnorm.avg) << " | " << Num(r.rnorm.max) << " | "
        << Num(r.cpu.avg) << " | " << r.optimal_e2 << " | " << r.optimal_e5
        << " | " << r.oracle_e2 << "/" << r.oracle_checked << " |\n";
  }
  bool header = false;
  for (const BatchEntry& e : entries) {
    if (e.ok) continue;
    if (!header) {
      out << "\nFailed:\n\n";
      header = true;
    }
    out << "- " << e.file << " (" << e.model << "): " << e.error << "\n";
  }
  return out.str();
}

}  // namespace invopt

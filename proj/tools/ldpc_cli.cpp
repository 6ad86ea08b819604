// Command-line harness: Monte-Carlo BER/FER sweeps, Gaussian-approximation
// analysis runs and schedule inspection. Records go to stdout (or --out) as
// JSON lines; `simulate` can mirror them to CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldpc/channel.hpp"
#include "ldpc/ga.hpp"
#include "ldpc/json_io.hpp"
#include "ldpc/schedule.hpp"
#include "ldpc/sim.hpp"
#include "ldpc/tanner.hpp"

namespace {

struct Output {
  std::ofstream file;
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
  }
  void emit(const nlohmann::json& record) { stream() << record.dump() << "\n"; }
};

ldpc::ScheduleKind parse_kind(const std::string& name) {
  if (name == "bp") return ldpc::ScheduleKind::flooding;
  if (name == "gsbp") return ldpc::ScheduleKind::disjoint;
  if (name == "ndgsbp") return ldpc::ScheduleKind::nondisjoint;
  throw CLI::ValidationError("--sched", "expected one of bp, gsbp, ndgsbp");
}

struct CodeArgs {
  std::string alist_path;
  int n = 0, dv = 0, dc = 0;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--code", alist_path, "alist file with the parity-check matrix");
    app->add_option("--n", n, "codeword length for a random regular ensemble");
    app->add_option("--dv", dv, "VN degree for a random regular ensemble");
    app->add_option("--dc", dc, "CN degree for a random regular ensemble");
    app->add_option("--seed-code", seed, "seed for the random ensemble draw");
  }

  ldpc::TannerGraph load() const {
    if (!alist_path.empty()) return ldpc::parse_alist(ldpc::read_file(alist_path));
    if (n <= 0 || dv <= 0 || dc <= 0)
      throw CLI::ValidationError("--code", "give --code or the full --n/--dv/--dc triple");
    return ldpc::random_regular_graph(n, dv, dc, seed);
  }
};

int run_simulate(const CodeArgs& code, const std::string& sched, int groups, double overlap, bool no_regroup,
                 const std::vector<double>& snr, int max_iter, bool budgeted, long frames, int min_errors,
                 std::uint64_t seed_channel, std::uint64_t seed_schedule, int workers, const std::string& out_path,
                 const std::string& csv_path, const std::string& dump_schedule) {
  ldpc::SimConfig cfg;
  cfg.alist_path = code.alist_path;
  cfg.rand_n = code.n;
  cfg.rand_dv = code.dv;
  cfg.rand_dc = code.dc;
  cfg.code_seed = code.seed;
  cfg.kind = parse_kind(sched);
  cfg.n_groups = groups;
  cfg.overlap = overlap;
  cfg.regroup_each_iteration = !no_regroup;
  cfg.ebn0_db = snr;
  cfg.i_max = max_iter;
  cfg.budgeted = budgeted;
  cfg.max_frames = frames;
  cfg.min_frame_errors = min_errors;
  cfg.channel_seed = seed_channel;
  cfg.schedule_seed = seed_schedule;
  cfg.workers = workers;

  const ldpc::TannerGraph g = ldpc::load_code(cfg);
  if (!dump_schedule.empty()) {
    std::ofstream dump(dump_schedule);
    if (!dump) throw std::runtime_error("cannot open schedule dump file: " + dump_schedule);
    dump << ldpc::schedule_to_json(ldpc::make_schedule(g, cfg)).dump(2) << "\n";
  }

  Output out;
  out.open(out_path);
  std::unique_ptr<std::ofstream> csv;
  if (!csv_path.empty()) {
    csv = std::make_unique<std::ofstream>(csv_path);
    if (!*csv) throw std::runtime_error("cannot open CSV file: " + csv_path);
    *csv << "ebn0_db,frames,bit_errors,frame_errors,converged_frames,ber,fer,"
            "mean_iters_converged,mean_iters_all,iter_limit,wall_seconds\n";
  }

  for (const ldpc::SimResult& r : ldpc::run_sweep(cfg, g)) {
    out.emit(ldpc::sim_result_to_json(r));
    if (csv) {
      char line[360];
      std::snprintf(line, sizeof(line), "%.6g,%ld,%lld,%ld,%ld,%.8g,%.8g,%.6g,%.6g,%d,%.4g\n", r.ebn0_db, r.frames,
                    r.bit_errors, r.frame_errors, r.converged_frames, r.ber, r.fer, r.mean_iters_converged,
                    r.mean_iters_all, r.iter_limit, r.wall_seconds);
      *csv << line;
    }
  }
  return 0;
}

int run_ga(int dv, int dc, const std::string& sched, const std::vector<int>& groups_list, double overlap,
           const std::vector<double>& snr, bool do_threshold, double mu_cap, int max_iter, bool trace,
           const std::string& out_path) {
  const ldpc::DegreeDistribution dd = ldpc::regular_degree_distribution(dv, dc);
  const ldpc::ScheduleKind kind = parse_kind(sched);
  const double rate = ldpc::design_rate(dd);
  const std::string ensemble = "(" + std::to_string(dv) + "," + std::to_string(dc) + ")";

  Output out;
  out.open(out_path);
  for (int groups : groups_list) {
    const double r = kind == ldpc::ScheduleKind::nondisjoint ? overlap : 0.0;
    if (do_threshold) {
      ldpc::ga::ThresholdOptions opt;
      opt.mu_cap = mu_cap;
      opt.max_iterations = max_iter;
      const double threshold = ldpc::ga::threshold_search(dd, kind, groups, r, opt);
      nlohmann::json record;
      record["type"] = "threshold";
      record["ensemble"] = ensemble;
      record["rate"] = rate;
      record["schedule"] = ldpc::to_string(kind);
      record["G"] = groups;
      record["r"] = r;
      record["ebn0_db"] = threshold;
      out.emit(record);
      continue;
    }
    for (double ebn0 : snr) {
      ldpc::ga::GaConfig cfg;
      cfg.dd = dd;
      cfg.kind = kind;
      cfg.n_groups = groups;
      cfg.overlap_ratio = r;
      cfg.mu0 = 2.0 / ldpc::sigma2_from_ebn0(ebn0, rate);
      cfg.mu_cap = mu_cap;
      cfg.max_iterations = max_iter;
      const ldpc::ga::GaRunResult run = ldpc::ga::iterations_to_convergence(cfg);
      out.emit(ldpc::ga_result_to_json(ensemble, kind, groups, r, ebn0, mu_cap, run, trace));
    }
  }
  return 0;
}

int run_schedule(const CodeArgs& code, const std::string& sched, int groups, double overlap,
                 std::uint64_t seed_schedule, int max_iter, const std::string& out_path) {
  const ldpc::TannerGraph g = code.load();
  ldpc::SimConfig cfg;
  cfg.kind = parse_kind(sched);
  cfg.n_groups = groups;
  cfg.overlap = overlap;
  cfg.schedule_seed = seed_schedule;
  const ldpc::GroupSchedule s = ldpc::make_schedule(g, cfg);

  nlohmann::json record = ldpc::schedule_to_json(s);
  record["type"] = "schedule";
  record["n_checks"] = g.n_checks;
  record["n_vars"] = g.n_vars;
  record["iteration_budget"] = ldpc::iteration_budget(g.n_checks, max_iter, s);
  record["i_max"] = max_iter;
  std::vector<int> sizes;
  for (const auto& grp : s.groups) sizes.push_back(static_cast<int>(grp.size()));
  record["group_sizes"] = sizes;
  std::vector<int> overlaps;
  for (std::size_t t = 1; t < s.groups.size(); ++t) {
    int count = 0;
    for (int m : s.groups[t])
      count += std::count(s.groups[t - 1].begin(), s.groups[t - 1].end(), m) > 0 ? 1 : 0;
    overlaps.push_back(count);
  }
  record["consecutive_overlaps"] = overlaps;
  record["cocsg"] = ldpc::cocsg_to_json(ldpc::measure_cocsg(g, s));

  Output out;
  out.open(out_path);
  out.stream() << record.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-shuffled LDPC decoding toolkit: simulation, analysis, schedules"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo BER/FER sweep over AWGN");
  CodeArgs sim_code;
  sim_code.attach(sim);
  std::string sim_sched = "bp";
  int sim_groups = 1;
  double sim_overlap = 0.0;
  bool sim_no_regroup = false;
  std::vector<double> sim_snr;
  int sim_max_iter = 1000;
  bool sim_budgeted = false;
  long sim_frames = 10000000;
  int sim_min_errors = 100;
  std::uint64_t seed_channel = 1, seed_schedule = 2;
  int sim_workers = 1;
  std::string sim_out, sim_csv, sim_dump_schedule;
  sim->add_option("--sched", sim_sched, "schedule: bp | gsbp | ndgsbp")->capture_default_str();
  sim->add_option("--groups", sim_groups, "number of CN groups G")->capture_default_str();
  sim->add_option("--overlap", sim_overlap, "overlap ratio r (ndgsbp)")->capture_default_str();
  sim->add_flag("--no-regroup", sim_no_regroup, "keep one fixed grouping instead of regrouping every iteration");
  sim->add_option("--snr", sim_snr, "Eb/N0 points in dB")->required()->expected(-1);
  sim->add_option("--max-iter", sim_max_iter, "I_max")->capture_default_str();
  sim->add_flag("--budgeted", sim_budgeted, "replace I_max by the complexity-fair budget");
  sim->add_option("--frames", sim_frames, "maximum frames per SNR point")->capture_default_str();
  sim->add_option("--min-errors", sim_min_errors, "frame errors to collect per SNR point")->capture_default_str();
  sim->add_option("--seed-channel", seed_channel, "channel noise seed")->capture_default_str();
  sim->add_option("--seed-schedule", seed_schedule, "schedule RNG seed")->capture_default_str();
  sim->add_option("--workers", sim_workers, "worker threads (results are worker-count independent)")
      ->capture_default_str();
  sim->add_option("--out", sim_out, "write JSON lines here instead of stdout");
  sim->add_option("--csv", sim_csv, "also mirror records to this CSV file");
  sim->add_option("--dump-schedule", sim_dump_schedule, "write the iteration-1 schedule as JSON to this file");

  // ga
  auto* ga_cmd = app.add_subcommand("ga", "Gaussian-approximation convergence analysis");
  int ga_dv = 3, ga_dc = 6;
  std::string ga_sched = "bp";
  std::vector<int> ga_groups = {1};
  double ga_overlap = 0.0;
  std::vector<double> ga_snr;
  bool ga_threshold = false;
  double ga_mu_cap = ldpc::ga::kDefaultMuCap;
  int ga_max_iter = 5000;
  bool ga_trace = false;
  std::string ga_out;
  ga_cmd->add_option("--dv", ga_dv, "ensemble VN degree")->capture_default_str();
  ga_cmd->add_option("--dc", ga_dc, "ensemble CN degree")->capture_default_str();
  ga_cmd->add_option("--sched", ga_sched, "schedule: bp | gsbp | ndgsbp")->capture_default_str();
  ga_cmd->add_option("--groups", ga_groups, "group counts G to analyze")->expected(-1)->capture_default_str();
  ga_cmd->add_option("--overlap", ga_overlap, "overlap ratio r (ndgsbp)")->capture_default_str();
  ga_cmd->add_option("--snr", ga_snr, "Eb/N0 points in dB");
  ga_cmd->add_flag("--threshold", ga_threshold, "bisect for the convergence threshold instead");
  ga_cmd->add_option("--mu-cap", ga_mu_cap, "mean treated as error-free")->capture_default_str();
  ga_cmd->add_option("--max-iter", ga_max_iter, "iteration cap per analysis run")->capture_default_str();
  ga_cmd->add_flag("--trace", ga_trace, "include the per-iteration mean trace in records");
  ga_cmd->add_option("--out", ga_out, "write JSON lines here instead of stdout");

  // schedule
  auto* sched_cmd = app.add_subcommand("schedule", "build a schedule and report its structure");
  CodeArgs sched_code;
  sched_code.attach(sched_cmd);
  std::string sched_sched = "gsbp";
  int sched_groups = 2;
  double sched_overlap = 0.0;
  std::uint64_t sched_seed = 2;
  int sched_max_iter = 1000;
  std::string sched_out;
  sched_cmd->add_option("--sched", sched_sched, "schedule: bp | gsbp | ndgsbp")->capture_default_str();
  sched_cmd->add_option("--groups", sched_groups, "number of CN groups G")->capture_default_str();
  sched_cmd->add_option("--overlap", sched_overlap, "overlap ratio r (ndgsbp)")->capture_default_str();
  sched_cmd->add_option("--seed-schedule", sched_seed, "schedule RNG seed")->capture_default_str();
  sched_cmd->add_option("--max-iter", sched_max_iter, "I_max used for the budget report")->capture_default_str();
  sched_cmd->add_option("--out", sched_out, "write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return run_simulate(sim_code, sim_sched, sim_groups, sim_overlap, sim_no_regroup, sim_snr, sim_max_iter,
                          sim_budgeted, sim_frames, sim_min_errors, seed_channel, seed_schedule, sim_workers, sim_out,
                          sim_csv, sim_dump_schedule);
    if (ga_cmd->parsed()) {
      if (!ga_threshold && ga_snr.empty()) {
        std::cerr << "error: ga needs --snr points or --threshold\n";
        return 1;
      }
      return run_ga(ga_dv, ga_dc, ga_sched, ga_groups, ga_overlap, ga_snr, ga_threshold, ga_mu_cap, ga_max_iter,
                    ga_trace, ga_out);
    }
    if (sched_cmd->parsed())
      return run_schedule(sched_code, sched_sched, sched_groups, sched_overlap, sched_seed, sched_max_iter, sched_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

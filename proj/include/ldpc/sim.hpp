#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ldpc/channel.hpp"
#include "ldpc/decoder.hpp"
#include "ldpc/schedule.hpp"
#include "ldpc/tanner.hpp"

namespace ldpc {

struct SimConfig {
  // Code source: an alist path, or a random regular ensemble when the path is empty.
  std::string alist_path;
  int rand_n = 0, rand_dv = 0, rand_dc = 0;
  std::uint64_t code_seed = 1;

  ScheduleKind kind = ScheduleKind::flooding;
  int n_groups = 1;
  double overlap = 0.0;
  bool regroup_each_iteration = true;

  std::vector<double> ebn0_db;
  int i_max = 1000;
  bool budgeted = false;  // replace I_max by the complexity-fair budget

  long max_frames = 10000000;
  int min_frame_errors = 100;
  std::uint64_t channel_seed = 1;
  std::uint64_t schedule_seed = 2;
  int workers = 1;
};

struct SimResult {
  double ebn0_db = 0.0;
  long frames = 0;
  long long bit_errors = 0;
  long frame_errors = 0;
  long converged_frames = 0;
  double ber = 0.0;
  double fer = 0.0;
  double mean_iters_converged = 0.0;  // 0 when no frame converged
  double mean_iters_all = 0.0;
  int iter_limit = 0;
  double wall_seconds = 0.0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TannerGraph load_code(const SimConfig& cfg) {
  if (!cfg.alist_path.empty()) return parse_alist(read_file(cfg.alist_path));
  if (cfg.rand_n <= 0) throw std::invalid_argument("no code source: give an alist path or a random ensemble spec");
  return random_regular_graph(cfg.rand_n, cfg.rand_dv, cfg.rand_dc, cfg.code_seed);
}

inline GroupSchedule make_schedule(const TannerGraph& g, const SimConfig& cfg) {
  switch (cfg.kind) {
    case ScheduleKind::flooding: return make_flooding_schedule(g);
    case ScheduleKind::disjoint:
      return make_disjoint_schedule(g, cfg.n_groups, cfg.schedule_seed, cfg.regroup_each_iteration);
    case ScheduleKind::nondisjoint:
      return make_nondisjoint_schedule(g, cfg.n_groups, cfg.overlap, cfg.schedule_seed, cfg.regroup_each_iteration);
  }
  throw std::invalid_argument("unknown schedule kind");
}

namespace detail {

struct FrameOutcome {
  int bit_errors = 0;
  int iterations = 0;
  bool converged = false;
};

}  // namespace detail

// Monte-Carlo sweep over the configured Eb/N0 points with the all-zero
// codeword convention. Each frame's noise and grouping are keyed by its frame
// id, and a point stops at the smallest frame index whose prefix holds
// min_frame_errors errors (or at max_frames), so the statistics are
// bit-identical for any worker count.
inline std::vector<SimResult> run_sweep(const SimConfig& cfg, const TannerGraph& g) {
  if (cfg.ebn0_db.empty()) throw std::invalid_argument("need at least one Eb/N0 point");
  if (cfg.min_frame_errors < 1) throw std::invalid_argument("min_frame_errors must be >= 1");
  if (cfg.max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");

  const GroupSchedule proto = make_schedule(g, cfg);
  const int iter_limit = cfg.budgeted ? iteration_budget(g.n_checks, cfg.i_max, proto) : cfg.i_max;
  const double rate = static_cast<double>(g.n_vars - g.n_checks) / g.n_vars;
  const int workers = std::max(1, cfg.workers);

  std::vector<SimResult> results;
  for (double ebn0 : cfg.ebn0_db) {
    const auto start = std::chrono::steady_clock::now();
    const ChannelConfig channel = make_channel_config(ebn0, rate, cfg.channel_seed);

    const auto run_frame = [&](long frame_id) {
      const auto llr = transmit_all_zero(channel, g.n_vars, static_cast<std::uint64_t>(frame_id));
      GroupSchedule sched = proto;
      if (proto.kind != ScheduleKind::flooding) {
        sched.seed = mix_seed(cfg.schedule_seed, static_cast<std::uint64_t>(frame_id));
        sched.groups = schedule_groups_for(sched, g.n_checks, 1);
      }
      const DecodeOutcome out = decode(g, sched, llr, iter_limit);
      detail::FrameOutcome fo;
      for (auto b : out.bits) fo.bit_errors += b;
      fo.iterations = out.iterations;
      fo.converged = out.converged;
      return fo;
    };

    std::vector<detail::FrameOutcome> outcomes;
    long produced = 0;
    long scan_pos = 0;
    long cum_errors = 0;
    long stop_index = -1;
    while (stop_index < 0) {
      const long wave = std::min<long>(std::max(64, 8 * workers), cfg.max_frames - produced);
      outcomes.resize(produced + wave);
      if (workers == 1) {
        for (long id = produced; id < produced + wave; ++id) outcomes[id] = run_frame(id);
      } else {
        std::atomic<long> next(produced);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&]() {
            for (;;) {
              const long id = next.fetch_add(1);
              if (id >= produced + wave) return;
              outcomes[id] = run_frame(id);
            }
          });
        }
        for (auto& t : pool) t.join();
      }
      produced += wave;
      for (; scan_pos < produced; ++scan_pos) {
        if (outcomes[scan_pos].bit_errors > 0) ++cum_errors;
        if (cum_errors >= cfg.min_frame_errors) {
          stop_index = scan_pos;
          break;
        }
      }
      if (stop_index < 0 && produced >= cfg.max_frames) stop_index = cfg.max_frames - 1;
    }

    SimResult res;
    res.ebn0_db = ebn0;
    res.iter_limit = iter_limit;
    res.frames = stop_index + 1;
    long long iter_sum = 0, iter_sum_converged = 0;
    for (long id = 0; id <= stop_index; ++id) {
      const auto& fo = outcomes[id];
      res.bit_errors += fo.bit_errors;
      if (fo.bit_errors > 0) ++res.frame_errors;
      if (fo.converged) {
        ++res.converged_frames;
        iter_sum_converged += fo.iterations;
      }
      iter_sum += fo.iterations;
    }
    res.ber = static_cast<double>(res.bit_errors) / (static_cast<double>(res.frames) * g.n_vars);
    res.fer = static_cast<double>(res.frame_errors) / res.frames;
    res.mean_iters_all = static_cast<double>(iter_sum) / res.frames;
    res.mean_iters_converged =
        res.converged_frames > 0 ? static_cast<double>(iter_sum_converged) / res.converged_frames : 0.0;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(res);
  }
  return results;
}

inline std::vector<SimResult> run_sweep(const SimConfig& cfg) {
  const TannerGraph g = load_code(cfg);
  return run_sweep(cfg, g);
}

}  // namespace ldpc

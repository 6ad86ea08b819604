// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria cover the analysis tables, threshold agreement, schedule
// degeneracy oracles, decoder kernel properties, fairness arithmetic, the
// Monte-Carlo ordering, channel statistics and the transfer-function
// numerics.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "flooding_reference.hpp"
#include "ga_oracles.hpp"
#include "ldpc/channel.hpp"
#include "ldpc/decoder.hpp"
#include "ldpc/ga.hpp"
#include "ldpc/rng.hpp"
#include "ldpc/schedule.hpp"
#include "ldpc/sim.hpp"
#include "ldpc/tanner.hpp"

using namespace ldpc;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, text.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct TableCell {
  ScheduleKind kind;
  int groups;
  double r;
  int paper_count;
};

int ga_iterations(const DegreeDistribution& dd, double ebn0_db, const TableCell& cell, double mu_cap) {
  ga::GaConfig cfg;
  cfg.dd = dd;
  cfg.kind = cell.kind;
  cfg.n_groups = cell.groups;
  cfg.overlap_ratio = cell.r;
  cfg.mu0 = 2.0 / sigma2_from_ebn0(ebn0_db, design_rate(dd));
  cfg.mu_cap = mu_cap;
  cfg.max_iterations = 5000;
  const ga::GaRunResult run = ga::iterations_to_convergence(cfg);
  return run.converged ? run.iterations : -1;
}

void criterion_1_table() {
  struct Row {
    DegreeDistribution dd;
    double ebn0_db;
    std::vector<TableCell> cells;
  };
  const std::vector<Row> rows = {
      {regular_degree_distribution(3, 6),
       1.163,
       {{ScheduleKind::flooding, 1, 0.0, 422},
        {ScheduleKind::disjoint, 4, 0.0, 293},
        {ScheduleKind::disjoint, 12, 0.0, 262},
        {ScheduleKind::disjoint, 36, 0.0, 251},
        {ScheduleKind::nondisjoint, 4, 0.4, 240},
        {ScheduleKind::nondisjoint, 12, 0.4, 208},
        {ScheduleKind::nondisjoint, 36, 0.4, 196}}},
      {regular_degree_distribution(4, 6),
       1.730,
       {{ScheduleKind::flooding, 1, 0.0, 632},
        {ScheduleKind::disjoint, 4, 0.0, 438},
        {ScheduleKind::disjoint, 16, 0.0, 386},
        {ScheduleKind::disjoint, 34, 0.0, 376},
        {ScheduleKind::nondisjoint, 4, 0.4, 368},
        {ScheduleKind::nondisjoint, 16, 0.4, 324},
        {ScheduleKind::nondisjoint, 34, 0.4, 317}}}};

  bool ok = true;
  std::string detail;
  for (const Row& row : rows) {
    std::map<std::pair<int, int>, int> counts;  // (kind index, G) -> iterations
    for (const TableCell& cell : row.cells) {
      const int got = ga_iterations(row.dd, row.ebn0_db, cell, ga::kDefaultMuCap);
      const int doubled = ga_iterations(row.dd, row.ebn0_db, cell, 2.0 * ga::kDefaultMuCap);
      counts[{static_cast<int>(cell.kind), cell.groups}] = got;
      const bool in_band = got > 0 && std::abs(got - cell.paper_count) <= 0.15 * cell.paper_count;
      const bool stable = doubled > 0 && std::abs(doubled - got) <= 1;
      if (!in_band || !stable) ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf), " [%s G=%d: got %d vs %d%s%s]", to_string(cell.kind), cell.groups, got,
                    cell.paper_count, in_band ? "" : " OUT-OF-BAND", stable ? "" : " CAP-UNSTABLE");
      detail += buf;
    }
    // strict orderings: ND(G) < GS(G) < BP, and non-increasing in G per family
    const int bp = counts[{static_cast<int>(ScheduleKind::flooding), 1}];
    std::vector<int> gs, nd;
    for (const TableCell& cell : row.cells) {
      if (cell.kind == ScheduleKind::disjoint) gs.push_back(counts[{static_cast<int>(cell.kind), cell.groups}]);
      if (cell.kind == ScheduleKind::nondisjoint) nd.push_back(counts[{static_cast<int>(cell.kind), cell.groups}]);
    }
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (!(nd[i] < gs[i] && gs[i] < bp)) ok = false;
      if (i > 0 && (gs[i] > gs[i - 1] || nd[i] > nd[i - 1])) ok = false;
    }
  }
  report(1, ok, "GA iteration counts reproduce both table rows within 15% with stable caps and strict orderings:" + detail);
}

void criterion_2_thresholds() {
  bool ok = true;
  std::string detail;
  ga::ThresholdOptions opt;
  for (auto [dv, dc, target] : {std::tuple<int, int, double>{3, 6, 1.163}, {4, 6, 1.730}}) {
    const DegreeDistribution dd = regular_degree_distribution(dv, dc);
    const double flood = ga::threshold_search(dd, ScheduleKind::flooding, 1, 0.0, opt);
    const double gsbp = ga::threshold_search(dd, ScheduleKind::disjoint, 12, 0.0, opt);
    const double ndgsbp = ga::threshold_search(dd, ScheduleKind::nondisjoint, 12, 0.4, opt);
    char buf[160];
    std::snprintf(buf, sizeof(buf), " [(%d,%d): bp %.4f gsbp %.4f ndgsbp %.4f]", dv, dc, flood, gsbp, ndgsbp);
    detail += buf;
    if (std::abs(flood - target) > 0.01) ok = false;
    if (std::abs(gsbp - flood) > 0.005) ok = false;
    if (std::abs(ndgsbp - flood) > 0.005) ok = false;
  }
  report(2, ok, "GA thresholds hit 1.163/1.730 dB and agree across schedules:" + detail);
}

void criterion_3_degeneracy() {
  const TannerGraph g = random_regular_graph(60, 3, 6, 31);
  const ChannelConfig ch = make_channel_config(1.5, 0.5, 7);
  bool ok = true;

  // (a) G=1 versus an independently written flooding decoder
  std::vector<int> all(g.n_checks);
  for (int m = 0; m < g.n_checks; ++m) all[m] = m;
  for (std::uint64_t frame = 0; frame < 10 && ok; ++frame) {
    const auto llr = transmit_all_zero(ch, g.n_vars, frame);
    DecoderState st = init_state(g, llr);
    oracle::FloodingDecoder ref(g, llr);
    for (int iter = 0; iter < 8 && ok; ++iter) {
      run_subiteration(st, g, all);
      ref.iterate();
      for (int e = 0; e < g.n_edges; ++e) {
        if (std::abs(st.c2v[e] - ref.c2v[e]) > 1e-12 || std::abs(st.v2c[e] - ref.v2c[e]) > 1e-12) {
          ok = false;
          break;
        }
      }
    }
  }
  for (std::uint64_t frame = 0; frame < 30 && ok; ++frame) {
    const auto llr = transmit_all_zero(ch, g.n_vars, frame);
    const DecodeOutcome out = decode(g, make_flooding_schedule(g), llr, 30);
    oracle::FloodingDecoder ref(g, llr);
    bool ref_converged = false;
    const int ref_iters = ref.decode(30, &ref_converged);
    if (out.converged != ref_converged || out.iterations != ref_iters || out.bits != ref.bits) ok = false;
  }

  // (b) NDGSBP r=0 versus GSBP on the same partition, bit-identical
  const GroupSchedule gs = make_disjoint_schedule(g, 5, 401);
  const GroupSchedule nd = make_nondisjoint_schedule(g, 5, 0.0, 401);
  if (gs.groups != nd.groups) ok = false;
  for (std::uint64_t frame = 0; frame < 30 && ok; ++frame) {
    const auto llr = transmit_all_zero(ch, g.n_vars, frame);
    const DecodeOutcome a = decode(g, gs, llr, 40);
    const DecodeOutcome b = decode(g, nd, llr, 40);
    if (a.bits != b.bits || a.converged != b.converged || a.iterations != b.iterations ||
        a.syndrome_weight_trace != b.syndrome_weight_trace)
      ok = false;
  }
  report(3, ok, "schedule degeneracy: G=1 matches the flooding reference (<=1e-12 per message) and r=0 is bit-identical to GSBP");
}

void criterion_4_kernel_properties() {
  Rng rng(424242);
  bool ok = true;
  const int cases = 10000;
  for (int c = 0; c < cases && ok; ++c) {
    const int degree = 2 + static_cast<int>(rng.next_below(11));
    std::vector<std::vector<int>> row(1);
    row[0].resize(degree);
    for (int k = 0; k < degree; ++k) row[0][k] = k;
    const TannerGraph g = build_from_check_lists(degree, std::move(row));
    std::vector<double> in(degree);
    for (int k = 0; k < degree; ++k) {
      const double mag = std::exp(std::log(1e-3) + rng.next_unit() * std::log(8.0 / 1e-3));
      in[k] = (rng.next_u64() & 1) ? mag : -mag;
    }
    DecoderState st = init_state(g, std::vector<double>(degree, 0.0));
    for (int k = 0; k < degree; ++k) st.v2c[g.edge_id(0, k)] = in[k];
    check_update(st, g, 0);

    int sign_product = 1;
    for (int k = 0; k < degree; ++k) sign_product *= in[k] < 0.0 ? -1 : 1;
    for (int k = 0; k < degree && ok; ++k) {
      const double out = st.c2v[g.edge_id(0, k)];
      if ((out < 0.0 ? -1 : 1) != sign_product * (in[k] < 0.0 ? -1 : 1)) ok = false;
      double min_excl = 1e300;
      for (int j = 0; j < degree; ++j)
        if (j != k) min_excl = std::min(min_excl, std::abs(in[j]));
      if (std::abs(out) > min_excl + 1e-9) ok = false;
    }

    std::vector<int> perm(degree);
    for (int k = 0; k < degree; ++k) perm[k] = k;
    rng.shuffle(perm.begin(), perm.end());
    DecoderState st2 = init_state(g, std::vector<double>(degree, 0.0));
    for (int k = 0; k < degree; ++k) st2.v2c[g.edge_id(0, k)] = in[perm[k]];
    check_update(st2, g, 0);
    for (int k = 0; k < degree && ok; ++k)
      if (std::abs(st2.c2v[g.edge_id(0, k)] - st.c2v[g.edge_id(0, perm[k])]) > 1e-12) ok = false;
  }

  // syndrome is exactly zero whenever convergence is reported
  const TannerGraph g = random_regular_graph(120, 3, 6, 77);
  const GroupSchedule s = make_nondisjoint_schedule(g, 6, 0.4, 5);
  const ChannelConfig ch = make_channel_config(1.4, 0.5, 3);
  int converged_seen = 0;
  for (std::uint64_t frame = 0; frame < 300 && ok; ++frame) {
    const auto llr = transmit_all_zero(ch, g.n_vars, frame);
    const DecodeOutcome out = decode(g, s, llr, 20);
    if (out.converged) {
      ++converged_seen;
      if (syndrome_weight(g, out.bits) != 0) ok = false;
    }
  }
  if (converged_seen == 0) ok = false;
  report(4, ok, "kernel sign/magnitude/permutation properties over 10^4 draws and zero syndrome on every reported convergence");
}

void criterion_5_budget() {
  const TannerGraph g = parse_alist(read_file(std::string(LDPC_DATA_DIR) + "/regular_n504_m252.alist"));
  const GroupSchedule s = make_nondisjoint_schedule(g, 12, 0.4, 1);
  const int budget = iteration_budget(252, 1000, s);
  report(5, budget == 627 && s.group_size == 34,
         "iteration_budget(252, 1000, G=12, N_G=34, r=0.4) = " + std::to_string(budget) + " (want 627)");
}

void criterion_6_monte_carlo() {
  SimConfig cfg;
  cfg.alist_path = std::string(LDPC_DATA_DIR) + "/regular_n504_m252.alist";
  cfg.ebn0_db = {2.0};
  cfg.i_max = 50;
  cfg.budgeted = true;
  cfg.min_frame_errors = 100;
  cfg.max_frames = 2000000;
  cfg.channel_seed = 20260809;
  cfg.schedule_seed = 7;

  cfg.kind = ScheduleKind::flooding;
  cfg.n_groups = 1;
  const SimResult bp = run_sweep(cfg)[0];
  cfg.kind = ScheduleKind::disjoint;
  cfg.n_groups = 12;
  const SimResult gs = run_sweep(cfg)[0];
  cfg.kind = ScheduleKind::nondisjoint;
  cfg.overlap = 0.4;
  const SimResult nd = run_sweep(cfg)[0];

  const bool fer_order = nd.fer <= gs.fer && gs.fer <= bp.fer;
  const bool iter_order = nd.mean_iters_converged < gs.mean_iters_converged &&
                          gs.mean_iters_converged < bp.mean_iters_converged;
  const bool enough = bp.frame_errors >= 100 && gs.frame_errors >= 100 && nd.frame_errors >= 100;
  char buf[360];
  std::snprintf(buf, sizeof(buf),
                "budgeted FER/mean-iters at 2.0 dB: bp %.3g/%.2f (lim %d), gsbp %.3g/%.2f (lim %d), ndgsbp %.3g/%.2f "
                "(lim %d), frames %ld/%ld/%ld",
                bp.fer, bp.mean_iters_converged, bp.iter_limit, gs.fer, gs.mean_iters_converged, gs.iter_limit,
                nd.fer, nd.mean_iters_converged, nd.iter_limit, bp.frames, gs.frames, nd.frames);
  report(6, fer_order && iter_order && enough, std::string("Monte-Carlo ordering holds: ") + buf);
}

void criterion_7_channel() {
  ChannelConfig cfg;
  cfg.sigma2 = 1.0;
  cfg.seed = 99;
  double sum = 0.0, sum_sq = 0.0;
  const int frames = 1000, n = 1000;
  for (int f = 0; f < frames; ++f) {
    const auto llr = transmit_all_zero(cfg, n, static_cast<std::uint64_t>(f));
    for (double v : llr) {
      sum += v;
      sum_sq += v * v;
    }
  }
  const double count = static_cast<double>(frames) * n;
  const double mean = sum / count;
  const double variance = sum_sq / count - mean * mean;
  const bool ok = std::abs(mean - 2.0) / 2.0 < 0.005 && std::abs(variance - 4.0) / 4.0 < 0.015;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "mean %.4f (want 2 +/- 0.5%%), variance %.4f (want 4 +/- 1.5%%)", mean, variance);
  report(7, ok, std::string("channel LLR statistics: ") + buf);
}

void criterion_8_ga_numerics() {
  bool ok = true;
  if (ga::phi(0.0) != 1.0) ok = false;
  double prev = 1.0;
  for (double mu : {1e-5, 1e-3, 0.1, 1.0, 4.0, 20.0, 100.0, 500.0, 2000.0}) {
    const double cur = ga::phi(mu);
    if (!(cur < prev) || !(cur > 0.0)) ok = false;
    prev = cur;
  }
  Rng rng(8);
  const auto& table = ga::PhiTable::instance();
  for (int c = 0; c < 100; ++c) {
    const double mu = std::exp(std::log(1e-6) + rng.next_unit() * std::log(2.0e3 / 1e-6));
    const double back = table.inverse(table.value(mu));
    if (std::abs(back - mu) > 1e-6 * mu) ok = false;
  }

  const DegreeDistribution dd = regular_degree_distribution(3, 6);
  ga::GaConfig cfg;
  cfg.dd = dd;
  cfg.kind = ScheduleKind::flooding;
  cfg.mu0 = 2.0 / sigma2_from_ebn0(1.163, 0.5);
  cfg.mu_cap = 1e18;
  cfg.max_iterations = 50;
  const ga::GaRunResult run = ga::iterations_to_convergence(cfg);
  const auto expected = oracle::textbook_ga_trace(dd, cfg.mu0, 50);
  if (run.mu_trace.size() != 50) ok = false;
  double worst = 0.0;
  for (std::size_t l = 0; l < run.mu_trace.size() && l < expected.size(); ++l) {
    const double rel = std::abs(run.mu_trace[l] - expected[l]) / std::max(1e-30, std::abs(expected[l]));
    worst = std::max(worst, rel);
  }
  if (worst > 1e-9) ok = false;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "phi monotone, inverse round-trip 1e-6, engine-vs-oracle worst rel err %.2e", worst);
  report(8, ok, std::string("GA numerics: ") + buf);
}

}  // namespace

int main() {
  criterion_1_table();
  criterion_2_thresholds();
  criterion_3_degeneracy();
  criterion_4_kernel_properties();
  criterion_5_budget();
  criterion_6_monte_carlo();
  criterion_7_channel();
  criterion_8_ga_numerics();
  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

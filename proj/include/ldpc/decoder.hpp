#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ldpc/schedule.hpp"
#include "ldpc/tanner.hpp"

namespace ldpc {

// Messages live in [-kLlrClamp, kLlrClamp]. 30 is far beyond any meaningful
// reliability for these codes and keeps tanh/atanh away from their saturation
// singularities.
constexpr double kLlrClamp = 30.0;

inline double clamp_llr(double x) { return std::clamp(x, -kLlrClamp, kLlrClamp); }

struct DecoderState {
  std::vector<double> channel_llr;     // per VN, clamped
  std::vector<double> v2c;             // per edge, CN-major ids
  std::vector<double> c2v;             // per edge
  std::vector<double> total_llr;       // per VN
  std::vector<std::uint8_t> hard_decision;
  int iteration = 0;
};

struct DecodeOutcome {
  std::vector<std::uint8_t> bits;
  bool converged = false;
  int iterations = 0;
  std::vector<int> syndrome_weight_trace;  // unsatisfied checks per iteration
  long long cn_updates = 0;                // total CN update count (fairness audit)
};

inline DecoderState init_state(const TannerGraph& g, std::span<const double> channel_llr) {
  if (static_cast<int>(channel_llr.size()) != g.n_vars)
    throw std::invalid_argument("channel LLR length does not match the code length");
  DecoderState st;
  st.channel_llr.resize(g.n_vars);
  for (int n = 0; n < g.n_vars; ++n) st.channel_llr[n] = clamp_llr(channel_llr[n]);
  st.v2c.assign(g.n_edges, 0.0);
  st.c2v.assign(g.n_edges, 0.0);
  for (int n = 0; n < g.n_vars; ++n)
    for (int eid : g.var_edge_ids[n]) st.v2c[eid] = st.channel_llr[n];
  st.total_llr.assign(g.n_vars, 0.0);
  st.hard_decision.assign(g.n_vars, 0);
  return st;
}

// Tanh-rule CN update: the outgoing message on each edge is
// 2*atanh(prod of tanh(v2c/2) over the other edges). Computed as one full
// product with per-edge division; if the product underflows to zero (some
// tanh term is zero or vanishingly small) the per-edge exclusion products are
// formed directly.
inline void check_update(DecoderState& st, const TannerGraph& g, int m) {
  const int degree = g.check_degree(m);
  const int offset = g.check_edge_offset[m];
  thread_local std::vector<double> terms;
  terms.resize(degree);

  double product = 1.0;
  for (int k = 0; k < degree; ++k) {
    terms[k] = std::tanh(0.5 * st.v2c[offset + k]);
    product *= terms[k];
  }

  constexpr double kTanhCap = 1.0 - 1e-15;  // keep atanh finite
  const auto emit = [&](int k, double excl) {
    excl = std::clamp(excl, -kTanhCap, kTanhCap);
    st.c2v[offset + k] = clamp_llr(2.0 * std::atanh(excl));
  };

  if (product == 0.0) {
    for (int k = 0; k < degree; ++k) {
      double excl = 1.0;
      for (int j = 0; j < degree; ++j)
        if (j != k) excl *= terms[j];
      emit(k, excl);
    }
  } else {
    for (int k = 0; k < degree; ++k) emit(k, product / terms[k]);
  }
}

// VN-to-CN message: channel LLR plus incoming CN messages from all neighbors
// except the target, summed in adjacency order.
inline double var_update(const DecoderState& st, const TannerGraph& g, int n, int exclude_m) {
  const auto& cns = g.var_adj[n];
  const auto& eids = g.var_edge_ids[n];
  double sum = st.channel_llr[n];
  bool found = false;
  for (std::size_t j = 0; j < cns.size(); ++j) {
    if (cns[j] == exclude_m) {
      found = true;
      continue;
    }
    sum += st.c2v[eids[j]];
  }
  if (!found) throw std::invalid_argument("excluded CN is not a neighbor of this VN");
  return sum;
}

// One sub-iteration: every CN of the group updates (reading the pre-phase
// v2c), then every VN adjacent to the group refreshes its outgoing messages
// on ALL of its edges, including those toward groups not yet processed. The
// two phases touch disjoint arrays, so results are independent of the order
// within each phase.
inline void run_subiteration(DecoderState& st, const TannerGraph& g, std::span<const int> group) {
  for (int m : group) check_update(st, g, m);

  thread_local std::vector<int> touched;
  touched.clear();
  for (int m : group)
    for (int n : g.check_adj[m]) touched.push_back(n);
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  for (int n : touched) {
    const auto& cns = g.var_adj[n];
    const auto& eids = g.var_edge_ids[n];
    for (std::size_t j = 0; j < cns.size(); ++j) st.v2c[eids[j]] = clamp_llr(var_update(st, g, n, cns[j]));
  }
}

inline int syndrome_weight(const TannerGraph& g, const std::vector<std::uint8_t>& bits) {
  int weight = 0;
  for (int m = 0; m < g.n_checks; ++m) {
    int parity = 0;
    for (int n : g.check_adj[m]) parity ^= bits[n];
    weight += parity;
  }
  return weight;
}

// Full decode under the given schedule: sub-iterations over the groups, then
// total LLRs, hard decision and the syndrome stopping test once per
// iteration. Groups are redrawn each iteration when the schedule asks for it,
// keyed by (schedule seed, iteration), so a decode is reproducible.
inline DecodeOutcome decode(const TannerGraph& g, const GroupSchedule& s, std::span<const double> channel_llr,
                            int max_iters) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  DecoderState st = init_state(g, channel_llr);
  DecodeOutcome out;
  out.bits.assign(g.n_vars, 0);

  std::vector<std::vector<int>> regrouped;
  const std::vector<std::vector<int>>* groups = &s.groups;
  for (int iter = 1; iter <= max_iters; ++iter) {
    if (iter > 1 && s.regroup_each_iteration && s.kind != ScheduleKind::flooding) {
      regrouped = schedule_groups_for(s, g.n_checks, static_cast<std::uint64_t>(iter));
      groups = &regrouped;
    }
    for (const auto& group : *groups) {
      run_subiteration(st, g, group);
      out.cn_updates += static_cast<long long>(group.size());
    }

    for (int n = 0; n < g.n_vars; ++n) {
      double total = st.channel_llr[n];
      for (int eid : g.var_edge_ids[n]) total += st.c2v[eid];
      st.total_llr[n] = total;
      st.hard_decision[n] = total >= 0.0 ? 0 : 1;
    }
    st.iteration = iter;

    const int weight = syndrome_weight(g, st.hard_decision);
    out.syndrome_weight_trace.push_back(weight);
    out.iterations = iter;
    if (weight == 0) {
      out.converged = true;
      out.bits = st.hard_decision;
      return out;
    }
  }
  out.bits = st.hard_decision;
  return out;
}

}  // namespace ldpc

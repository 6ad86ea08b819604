#pragma once

// Independently written flooding BP used as the schedule-degeneracy oracle.
// Plain per-iteration loops over all CNs then all VNs; no schedule machinery.
// Message conventions (clamp at +/-30, tanh product with per-edge division,
// adjacency-order sums, ties decode to 0) match the library so trajectories
// are comparable message-for-message.

#include <cmath>
#include <vector>

#include "ldpc/tanner.hpp"

namespace oracle {

struct FloodingDecoder {
  const ldpc::TannerGraph& g;
  std::vector<double> llr;   // clamped channel values
  std::vector<double> v2c;   // CN-major edge ids, same layout as the library
  std::vector<double> c2v;
  std::vector<double> total;
  std::vector<std::uint8_t> bits;

  FloodingDecoder(const ldpc::TannerGraph& graph, const std::vector<double>& channel) : g(graph) {
    llr.resize(g.n_vars);
    for (int n = 0; n < g.n_vars; ++n) llr[n] = clamp(channel[n]);
    v2c.assign(g.n_edges, 0.0);
    c2v.assign(g.n_edges, 0.0);
    for (int n = 0; n < g.n_vars; ++n)
      for (int e : g.var_edge_ids[n]) v2c[e] = llr[n];
    total.assign(g.n_vars, 0.0);
    bits.assign(g.n_vars, 0);
  }

  static double clamp(double x) { return x < -30.0 ? -30.0 : (x > 30.0 ? 30.0 : x); }

  void iterate() {
    // all CNs
    for (int m = 0; m < g.n_checks; ++m) {
      const int deg = g.check_degree(m);
      const int off = g.check_edge_offset[m];
      std::vector<double> t(deg);
      double prod = 1.0;
      for (int k = 0; k < deg; ++k) {
        t[k] = std::tanh(0.5 * v2c[off + k]);
        prod *= t[k];
      }
      for (int k = 0; k < deg; ++k) {
        double excl;
        if (prod == 0.0) {
          excl = 1.0;
          for (int j = 0; j < deg; ++j)
            if (j != k) excl *= t[j];
        } else {
          excl = prod / t[k];
        }
        if (excl > 1.0 - 1e-15) excl = 1.0 - 1e-15;
        if (excl < -(1.0 - 1e-15)) excl = -(1.0 - 1e-15);
        c2v[off + k] = clamp(2.0 * std::atanh(excl));
      }
    }
    // all VNs refresh every outgoing edge
    for (int n = 0; n < g.n_vars; ++n) {
      const auto& eids = g.var_edge_ids[n];
      for (std::size_t k = 0; k < eids.size(); ++k) {
        double sum = llr[n];
        for (std::size_t j = 0; j < eids.size(); ++j)
          if (j != k) sum += c2v[eids[j]];
        v2c[eids[k]] = clamp(sum);
      }
    }
    // totals and hard decision
    for (int n = 0; n < g.n_vars; ++n) {
      double sum = llr[n];
      for (int e : g.var_edge_ids[n]) sum += c2v[e];
      total[n] = sum;
      bits[n] = sum >= 0.0 ? 0 : 1;
    }
  }

  bool syndrome_ok() const {
    for (int m = 0; m < g.n_checks; ++m) {
      int parity = 0;
      for (int n : g.check_adj[m]) parity ^= bits[n];
      if (parity) return false;
    }
    return true;
  }

  // Runs up to max_iters iterations, stopping on a zero syndrome. Returns the
  // iteration count used.
  int decode(int max_iters, bool* converged) {
    for (int it = 1; it <= max_iters; ++it) {
      iterate();
      if (syndrome_ok()) {
        *converged = true;
        return it;
      }
    }
    *converged = false;
    return max_iters;
  }
};

}  // namespace oracle

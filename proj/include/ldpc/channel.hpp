#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ldpc/rng.hpp"

namespace ldpc {

// BI-AWGN with BPSK mapping 0 -> +1. Eb/N0 uses information-bit energy:
// sigma^2 = 1 / (2 * R * 10^(EbN0_dB / 10)).
struct ChannelConfig {
  double ebn0_db = 0.0;
  double code_rate = 0.5;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;
};

inline double sigma2_from_ebn0(double ebn0_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("code rate must be in (0, 1]");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

inline ChannelConfig make_channel_config(double ebn0_db, double rate, std::uint64_t seed) {
  ChannelConfig cfg;
  cfg.ebn0_db = ebn0_db;
  cfg.code_rate = rate;
  cfg.sigma2 = sigma2_from_ebn0(ebn0_db, rate);
  cfg.seed = seed;
  return cfg;
}

// Channel LLRs for an all-zero codeword: y = 1 + noise, L = 2*y/sigma^2.
// The noise stream is keyed by (seed, frame_id), so each frame is
// reproducible regardless of which worker generates it.
inline std::vector<double> transmit_all_zero(const ChannelConfig& cfg, int n, std::uint64_t frame_id) {
  if (n < 1) throw std::invalid_argument("frame length must be >= 1");
  Rng rng(mix_seed(cfg.seed, frame_id));
  const double sigma = std::sqrt(cfg.sigma2);
  const double scale = 2.0 / cfg.sigma2;
  std::vector<double> llr(n);
  for (int i = 0; i < n; ++i) llr[i] = scale * (1.0 + sigma * rng.next_gaussian());
  return llr;
}

}  // namespace ldpc

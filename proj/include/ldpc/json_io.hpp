#pragma once

#include <string>

#include <json.hpp>

#include "ldpc/ga.hpp"
#include "ldpc/schedule.hpp"
#include "ldpc/sim.hpp"

// JSON record shapes for the CLI surface. Group indices are 0-based in JSON;
// the alist files on disk stay 1-based per that format.
namespace ldpc {

inline nlohmann::json schedule_to_json(const GroupSchedule& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["n_groups"] = s.n_groups;
  j["overlap_ratio"] = s.overlap_ratio;
  j["group_size"] = s.group_size;
  j["seed"] = s.seed;
  j["regroup_each_iteration"] = s.regroup_each_iteration;
  j["groups"] = s.groups;
  return j;
}

inline nlohmann::json cocsg_to_json(const CocsgReport& report) {
  nlohmann::json j;
  j["transition_counts"] = report.transition_counts;
  if (report.average)
    j["average"] = *report.average;
  else
    j["average"] = nullptr;
  return j;
}

inline nlohmann::json sim_result_to_json(const SimResult& r) {
  nlohmann::json j;
  j["type"] = "sim";
  j["ebn0_db"] = r.ebn0_db;
  j["frames"] = r.frames;
  j["bit_errors"] = r.bit_errors;
  j["frame_errors"] = r.frame_errors;
  j["converged_frames"] = r.converged_frames;
  j["ber"] = r.ber;
  j["fer"] = r.fer;
  if (r.converged_frames > 0)
    j["mean_iters_converged"] = r.mean_iters_converged;
  else
    j["mean_iters_converged"] = nullptr;
  j["mean_iters_all"] = r.mean_iters_all;
  j["iter_limit"] = r.iter_limit;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline nlohmann::json ga_result_to_json(const std::string& ensemble, ScheduleKind kind, int n_groups, double overlap,
                                        double ebn0_db, double mu_cap, const ga::GaRunResult& run, bool with_trace) {
  nlohmann::json j;
  j["type"] = "ga";
  j["ensemble"] = ensemble;
  j["schedule"] = to_string(kind);
  j["G"] = n_groups;
  j["r"] = overlap;
  j["ebn0_db"] = ebn0_db;
  j["mu_cap"] = mu_cap;
  j["converged"] = run.converged;
  if (run.converged)
    j["iterations"] = run.iterations;
  else
    j["iterations"] = nullptr;
  if (with_trace) j["mu_trace"] = run.mu_trace;
  return j;
}

}  // namespace ldpc

// Reproducible output files: CSV with a fixed column order and 9-significant-
// digit formatting, JSON summaries, and a header stamp carrying the tool
// version and config hash on every file.
#pragma once

#include <string>
#include <vector>

#include "lamsa/actuator.hpp"
#include "lamsa/body.hpp"
#include "lamsa/fin_sweep.hpp"

namespace lamsa {

struct OutputStamp {
  std::string config_hash;
};

std::string format_sig9(double v);

void write_cycle_trace_csv(const std::string& path, const CycleTrace& trace,
                           const OutputStamp& stamp);
void write_cycle_summary_json(const std::string& path, const CycleTrace& trace,
                              const OutputStamp& stamp);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const OutputStamp& stamp);
void write_per_cycle_json(const std::string& path, const PerCycleReport& report,
                          const OutputStamp& stamp);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const OutputStamp& stamp);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lamsa

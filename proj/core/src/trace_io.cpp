#include "lamsa/trace_io.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "lamsa/config.hpp"
#include "lamsa/sim_error.hpp"

namespace lamsa {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file " + path);
  return out;
}

void stamp_header(std::ofstream& out, const OutputStamp& stamp) {
  out << "# tool_version=" << kToolVersion << "\n";
  out << "# config_hash=" << stamp.config_hash << "\n";
}

}  // namespace

std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_cycle_trace_csv(const std::string& path, const CycleTrace& trace,
                           const OutputStamp& stamp) {
  auto out = open_out(path);
  stamp_header(out, stamp);
  out << "t,s,q,fin_angle,latch_force,phase,thrust\n";
  for (size_t i = 0; i < trace.time_s.size(); ++i) {
    out << format_sig9(trace.time_s[i]) << ',' << format_sig9(trace.slider_mm[i]) << ','
        << format_sig9(trace.q_mm[i]) << ',' << format_sig9(trace.fin_angle_deg[i]) << ','
        << format_sig9(trace.latch_force_n[i]) << ',' << to_string(trace.phase[i]) << ','
        << format_sig9(trace.thrust_n[i]) << "\n";
  }
}

void write_cycle_summary_json(const std::string& path, const CycleTrace& trace,
                              const OutputStamp& stamp) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = stamp.config_hash;
  j["period_s"] = trace.period_s;
  j["snap_time_s"] = trace.snap_time_s;
  j["loading_duration_s"] = trace.loading_duration_s;
  j["release_duration_s"] = trace.release_duration_s;
  j["load_release_ratio"] =
      trace.release_duration_s > 0 ? trace.loading_duration_s / trace.release_duration_s : 0.0;
  j["peak_thrust_n"] = trace.peak_thrust_n;
  j["impulse_ns"] = trace.impulse_ns;
  j["work_input_mj"] = trace.work_input_mj;
  j["stored_gain_mj"] = trace.stored_gain_mj;
  open_out(path) << j.dump(2) << "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const OutputStamp& stamp) {
  auto out = open_out(path);
  stamp_header(out, stamp);
  out << "t,x,y,z,yaw,phase\n";
  for (size_t i = 0; i < traj.time_s.size(); ++i) {
    out << format_sig9(traj.time_s[i]) << ',' << format_sig9(traj.x_mm[i]) << ','
        << format_sig9(traj.y_mm[i]) << ',' << format_sig9(traj.z_mm[i]) << ','
        << format_sig9(traj.yaw_deg[i]) << ',' << to_string(traj.phase[i]) << "\n";
  }
}

void write_per_cycle_json(const std::string& path, const PerCycleReport& report,
                          const OutputStamp& stamp) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = stamp.config_hash;
  j["partial_trailing_excluded"] = report.partial_trailing_excluded;
  j["cycles"] = nlohmann::ordered_json::array();
  for (const auto& c : report.cycles) {
    nlohmann::ordered_json jc;
    jc["index"] = c.index;
    jc["start_s"] = c.start_s;
    jc["end_s"] = c.end_s;
    jc["rise_mm"] = c.rise_mm;
    jc["dip_mm"] = c.dip_mm;
    jc["net_mm"] = c.net_mm;
    jc["horizontal_mm"] = c.horizontal_mm;
    j["cycles"].push_back(jc);
  }
  open_out(path) << j.dump(2) << "\n";
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     const OutputStamp& stamp) {
  auto out = open_out(path);
  stamp_header(out, stamp);
  out << "area,peak_thrust,impulse,status\n";
  for (const auto& r : rows) {
    out << format_sig9(r.area_mm2) << ',' << format_sig9(r.peak_thrust_n) << ','
        << format_sig9(r.impulse_ns) << ',' << r.status << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  open_out(path) << content;
}

}  // namespace lamsa

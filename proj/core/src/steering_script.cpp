#include "lamsa/steering_script.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lamsa/sim_error.hpp"

namespace lamsa {

double SteeringScript::last_command_time_s() const {
  double last = 0.0;
  for (const auto& c : commands) last = std::max(last, c.time_s);
  return last;
}

std::array<double, 4> SteeringScript::deflections_at(double cycle_start_s) const {
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  for (const auto& c : commands) {  // sorted: later commands win
    if (c.time_s <= cycle_start_s) out[c.fin_id] = c.beta_deg;
  }
  return out;
}

SteeringScript parse_steering_script(const std::string& text) {
  SteeringScript script;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    SteeringCommand cmd;
    if (!(ls >> cmd.time_s)) continue;  // blank or comment-only line
    if (!(ls >> cmd.fin_id >> cmd.beta_deg))
      throw ConfigError("steering script: expected 'time_s fin_id beta_deg'", line_no);
    std::string extra;
    if (ls >> extra)
      throw ConfigError("steering script: trailing tokens", line_no);
    if (cmd.fin_id < 0 || cmd.fin_id > 3)
      throw ConfigError("steering script: fin_id must be 0..3", line_no);
    if (cmd.time_s < 0.0)
      throw ConfigError("steering script: time must be non-negative", line_no);
    for (const auto& prev : script.commands) {
      if (prev.fin_id == cmd.fin_id && prev.time_s == cmd.time_s &&
          prev.beta_deg != cmd.beta_deg)
        throw ConfigError("steering script: conflicting commands for fin " +
                              std::to_string(cmd.fin_id),
                          line_no);
    }
    script.commands.push_back(cmd);
  }
  std::stable_sort(script.commands.begin(), script.commands.end(),
                   [](const SteeringCommand& a, const SteeringCommand& b) {
                     return a.time_s < b.time_s;
                   });
  return script;
}

SteeringScript load_steering_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("steering script: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_steering_script(buf.str());
}

SteeringScript mirrored(const SteeringScript& script) {
  SteeringScript out = script;
  for (auto& c : out.commands) {
    switch (c.fin_id) {
      case 0: case 2: c.beta_deg = -c.beta_deg; break;
      case 1: c.fin_id = 3; break;
      case 3: c.fin_id = 1; break;
    }
  }
  return out;
}

}  // namespace lamsa

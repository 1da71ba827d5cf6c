#include "dppo/envs/environment.hpp"

#include <cstdio>

namespace dppo::envs {

std::string to_string(DoneReason r) {
  switch (r) {
    case DoneReason::kNone: return "";
    case DoneReason::kTimeLimit: return "time_limit";
    case DoneReason::kTilted: return "tilted";
    case DoneReason::kLowTorso: return "low_torso";
    case DoneReason::kFellInGap: return "fell_in_gap";
    case DoneReason::kCourseEnd: return "course_end";
  }
  return "?";
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out = "step,x,z,theta,reward,done_reason\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g,", r.step, r.pose.x, r.pose.z,
                  r.pose.theta, r.reward);
    out += buf;
    out += to_string(r.reason);
    out += '\n';
  }
  return out;
}

}  // namespace dppo::envs

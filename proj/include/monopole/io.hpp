#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "monopole/dynamics.hpp"

namespace monopole {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// RFC-4180-style CSV: header row, one row per sample, \r\n-free.
inline void trajectory_to_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,r,theta,phi,p_r,p_theta,p_phi,dH,dX1,dX2,dX\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& z = traj.states[i];
    const auto& d = traj.drift_log[i];
    os << fmt17(traj.times[i]) << ',' << fmt17(z.r) << ',' << fmt17(z.theta)
       << ',' << fmt17(z.phi) << ',' << fmt17(z.p_r) << ',' << fmt17(z.p_theta)
       << ',' << fmt17(z.p_phi) << ',' << fmt17(d[0]) << ',' << fmt17(d[1])
       << ',' << fmt17(d[2]) << ',' << fmt17(d[3]) << '\n';
  }
}

}  // namespace monopole

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dcrnn/errors.hpp"

namespace dcrnn {

using Vec3 = std::array<double, 3>;

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

// Right-hand side of the Lorenz equations.
inline Vec3 lorenz_deriv(const Vec3& s, const LorenzParams& p) {
  return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

struct Trajectory {
  double dt = 0.0;
  std::vector<Vec3> states;
};

// Explicit forward Euler; yields steps+1 states including the initial one.
// Throws DivergenceError with the first non-finite step index.
inline Trajectory integrate_euler(const Vec3& x0, const LorenzParams& p, double dt,
                                  std::size_t steps) {
  if (dt <= 0.0) throw DimensionError("integrate_euler: dt must be positive");
  if (steps < 1) throw DimensionError("integrate_euler: steps must be >= 1");
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  traj.states.push_back(x0);
  Vec3 s = x0;
  for (std::size_t i = 0; i < steps; ++i) {
    const Vec3 d = lorenz_deriv(s, p);
    for (int j = 0; j < 3; ++j) s[j] += dt * d[j];
    if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2]))
      throw DivergenceError("trajectory diverged", i + 1);
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace dcrnn

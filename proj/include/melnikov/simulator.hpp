#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "melnikov/systems.hpp"

namespace melnikov {

struct SimOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double event_tol = 1e-12;  // |y| at a located crossing
  double initial_dt = 1e-3;
  long max_steps = 2'000'000;
  /// Infinite: stop once max_events crossings are located. Finite: stop at
  /// t_end and fail if more than max_events crossings occur before it.
  double t_end = std::numeric_limits<double>::infinity();
  bool record = true;  // keep every accepted step in the trajectory
};

struct CrossingEvent {
  double t;
  double x;
  Side from;
  Side to;
};

struct TrajectoryPoint {
  double t;
  PlanarState state;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::vector<CrossingEvent> events;
  PlanarState final_state;
  double final_time = 0.0;
};

/// Integrates the half-plane field of the active side, switching sides at each
/// y = 0 crossing, until max_events crossings have been located. A start on the
/// section needs its side resolved; |eps| <= 0.1.
Trajectory integrate_piecewise(SystemId sys, const Perturbation& p, double eps, const PlanarState& start,
                               int max_events, const SimOptions& opt = {});

/// One revolution from (x_start, 0) on the crossing where the flow enters y > 0
/// (the left crossing x_a of the oval): upper half-plane, right crossing, lower
/// half-plane, back to the left crossing.
struct ReturnMapSample {
  double x_start;
  double x_return;
  double h_start;
  double h_return;
  double x_right;  // intermediate crossing
  double period;
  double displacement() const { return h_return - h_start; }
};

ReturnMapSample poincare_return(SystemId sys, const Perturbation& p, double eps, double x_start,
                                const SimOptions& opt = {});

/// Left-crossing segment of the section swept by the annulus.
std::pair<double, double> section_segment(SystemId sys);

/// x_a(h): left crossing for energy h (the section coordinate of the cycle with energy h).
double section_coordinate(SystemId sys, double h);

struct LimitCycleFinding {
  double eps;
  double fixed_x;
  double h_cycle;
  double residual;
};

/// Fixed points of the return map on [x_lo, x_hi]: sign changes of
/// x_return - x_start over `samples` uniform starts, refined by bisection.
std::vector<LimitCycleFinding> find_limit_cycles(SystemId sys, const Perturbation& p, double eps,
                                                 std::pair<double, double> x_interval, int samples,
                                                 const SimOptions& opt = {});

/// t,x,y,side rows.
std::string trajectory_csv(const Trajectory& tr);
std::string findings_json(SystemId sys, const std::vector<LimitCycleFinding>& f);

}  // namespace melnikov

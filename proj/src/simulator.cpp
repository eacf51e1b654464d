#include "melnikov/simulator.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "melnikov/errors.hpp"
#include "melnikov/parallel.hpp"

namespace melnikov {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

constexpr double kLvEscapeGuard = 1e-9;

double sign_of(Side s) { return s == Side::upper ? 1.0 : -1.0; }
Side opposite(Side s) { return s == Side::upper ? Side::lower : Side::upper; }

void check_box(SystemId sys, double x, double y) {
  bool out;
  if (sys == SystemId::LV)
    out = !(x > 1.0 / 3.0 + kLvEscapeGuard) || x > 1e6 || std::abs(y) > 1e6;
  else
    out = !(x > -3.0 && x < 2.0 && std::abs(y) < 10.0);
  if (out || !std::isfinite(x) || !std::isfinite(y))
    throw IntegrationError("trajectory left the bounding box at x = " + std::to_string(x) +
                           ", y = " + std::to_string(y));
}

/// Vertical velocity the given side's field would have on the section.
double section_ydot(SystemId sys, const Perturbation& p, double eps, double x, Side side) {
  return vector_field(sys, PlanarState{x, 0.0, side}, eps, p).second;
}

}  // namespace

Trajectory integrate_piecewise(SystemId sys, const Perturbation& p, double eps, const PlanarState& start,
                               int max_events, const SimOptions& opt) {
  if (!(std::abs(eps) <= 0.1)) throw PreconditionError("integrate_piecewise: |eps| must be <= 0.1");
  if (max_events < 0) throw PreconditionError("integrate_piecewise: max_events must be >= 0");
  Side side = start.side;
  if (side == Side::on_section) {
    side = side_of(start.y);
    if (side == Side::on_section) throw PreconditionError("integrate_piecewise: start on the section needs a side");
  }
  if (start.y * sign_of(side) < 0.0) throw PreconditionError("integrate_piecewise: start lies on the other side");
  check_box(sys, start.x, start.y);
  if (start.y == 0.0 && section_ydot(sys, p, eps, start.x, side) * sign_of(side) <= 0.0)
    throw IntegrationError("start on the section with the field not entering the chosen side");

  Trajectory tr;
  double t = 0.0;
  State x{start.x, start.y};
  auto record = [&](double tt, const State& s, Side sd) {
    if (opt.record) tr.points.push_back({tt, PlanarState{s[0], s[1], sd}});
  };
  record(t, x, side);

  const bool bounded_time = std::isfinite(opt.t_end);
  long steps = 0;
  double dt = opt.initial_dt;

  while (bounded_time || static_cast<int>(tr.events.size()) < max_events) {
    const Side active = side;
    auto rhs = [&](const State& s, State& d, double) {
      auto [dx, dy] = vector_field(sys, PlanarState{s[0], s[1], active}, eps, p);
      d[0] = dx;
      d[1] = dy;
    };
    auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
    stepper.initialize(x, t, dt);
    bool switched = false;
    while (!switched) {
      if (++steps > opt.max_steps) throw IntegrationError("step budget exhausted");
      std::pair<double, double> span;
      try {
        span = stepper.do_step(rhs);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw IntegrationError(std::string("integrator failure: ") + e.what());
      }
      auto [t0, t1] = span;
      if (stepper.current_time_step() < 1e-14 * (1.0 + std::abs(t1)))
        throw IntegrationError("step size underflow");
      State s1 = stepper.current_state();
      const double sg = sign_of(active);
      double stop = bounded_time ? opt.t_end : std::numeric_limits<double>::infinity();

      if (s1[1] * sg > 0.0) {
        check_box(sys, s1[0], s1[1]);
        if (t1 >= stop) {
          State se;
          stepper.calc_state(stop, se);
          record(stop, se, active);
          tr.final_state = {se[0], se[1], active};
          tr.final_time = stop;
          return tr;
        }
        record(t1, s1, active);
        continue;
      }

      // Crossing inside [t0, t1]: safeguarded secant (Illinois) on the dense output.
      State sa;
      stepper.calc_state(t0, sa);
      double a = t0, fa = sa[1] * sg, b = t1, fb = s1[1] * sg;
      if (!(fa > 0.0)) throw IntegrationError("trajectory grazes the switching line (tangency)");
      double tc = b;
      State sc = s1;
      int last = 0;
      bool resolved = false;
      for (int it = 0; it < 200; ++it) {
        tc = b - fb * (b - a) / (fb - fa);
        if (!(tc > a && tc < b)) tc = 0.5 * (a + b);
        stepper.calc_state(tc, sc);
        double fc = sc[1] * sg;
        if (std::abs(sc[1]) <= opt.event_tol) break;
        if ((b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(tc))) {
          // Time resolution exhausted: with a steep crossing |y| cannot get below
          // |y'| ulp(t), so the bracket itself is the answer.
          resolved = true;
          break;
        }
        if (fc > 0.0) {
          a = tc;
          fa = fc;
          if (last == 1) fb *= 0.5;
          last = 1;
        } else {
          b = tc;
          fb = fc;
          if (last == -1) fa *= 0.5;
          last = -1;
        }
      }
      if (!resolved && std::abs(sc[1]) > opt.event_tol) throw IntegrationError("event localisation did not converge");
      if (tc > stop) {
        State se;
        stepper.calc_state(stop, se);
        record(stop, se, active);
        tr.final_state = {se[0], se[1], active};
        tr.final_time = stop;
        return tr;
      }
      check_box(sys, sc[0], 0.0);
      Side next = opposite(active);
      if (section_ydot(sys, p, eps, sc[0], next) * sign_of(next) <= 0.0)
        throw IntegrationError("crossing at x = " + std::to_string(sc[0]) +
                               " is not transversal for the opposite field (sliding)");
      tr.events.push_back({tc, sc[0], active, next});
      if (static_cast<int>(tr.events.size()) > max_events) throw IntegrationError("event cap exceeded");
      t = tc;
      x = {sc[0], 0.0};
      record(t, x, next);
      side = next;
      dt = stepper.current_time_step();
      switched = true;
    }
  }
  tr.final_state = {x[0], x[1], side};
  tr.final_time = t;
  return tr;
}

std::pair<double, double> section_segment(SystemId sys) {
  return sys == SystemId::LV ? std::make_pair(1.0 / 3.0, 1.0) : std::make_pair(-2.0, -1.0);
}

double section_coordinate(SystemId sys, double h) { return oval_endpoints(sys, h).x_a; }

ReturnMapSample poincare_return(SystemId sys, const Perturbation& p, double eps, double x_start,
                                const SimOptions& opt) {
  auto [lo, hi] = section_segment(sys);
  if (!(x_start > lo && x_start < hi)) throw PreconditionError("poincare_return: x_start outside the section segment");
  SimOptions o = opt;
  o.record = false;
  o.t_end = std::numeric_limits<double>::infinity();
  Trajectory tr = integrate_piecewise(sys, p, eps, PlanarState{x_start, 0.0, Side::upper}, 2, o);
  const auto& ev = tr.events;
  if (ev.size() != 2 || ev[0].from != Side::upper || ev[1].from != Side::lower)
    throw IntegrationError("poincare_return: unexpected event sequence");
  if (!(ev[1].x > lo && ev[1].x < hi)) throw IntegrationError("poincare_return: trajectory left the annulus");
  ReturnMapSample r;
  r.x_start = x_start;
  r.x_return = ev[1].x;
  r.x_right = ev[0].x;
  r.h_start = hamiltonian(sys, x_start, 0.0);
  r.h_return = hamiltonian(sys, r.x_return, 0.0);
  r.period = ev[1].t;
  return r;
}

std::vector<LimitCycleFinding> find_limit_cycles(SystemId sys, const Perturbation& p, double eps,
                                                 std::pair<double, double> x_interval, int samples,
                                                 const SimOptions& opt) {
  if (eps == 0.0) throw PreconditionError("find_limit_cycles: eps must be nonzero");
  if (samples < 2) throw PreconditionError("find_limit_cycles: need at least 2 samples");
  auto [x_lo, x_hi] = x_interval;
  if (!(x_lo < x_hi)) throw PreconditionError("find_limit_cycles: empty interval");
  auto disp = [&](double x) {
    ReturnMapSample r = poincare_return(sys, p, eps, x, opt);
    return r.x_return - r.x_start;
  };
  std::vector<double> xs(samples), ds(samples);
  for (int k = 0; k < samples; ++k) xs[k] = x_lo + (x_hi - x_lo) * k / (samples - 1);
  parallel_for(samples, [&](std::size_t k) { ds[k] = disp(xs[k]); });

  std::vector<std::pair<int, int>> brackets;
  for (int k = 0; k + 1 < samples; ++k) {
    if (ds[k] == 0.0) brackets.push_back({k, k});
    else if (ds[k] * ds[k + 1] < 0.0) brackets.push_back({k, k + 1});
  }
  if (ds[samples - 1] == 0.0) brackets.push_back({samples - 1, samples - 1});

  std::vector<LimitCycleFinding> out(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t i) {
    auto [ka, kb] = brackets[i];
    double a = xs[ka], b = xs[kb], da = ds[ka];
    double xm = a, dm = da;
    if (ka != kb) {
      for (int it = 0; it < 100 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
        xm = 0.5 * (a + b);
        dm = disp(xm);
        if (dm == 0.0) break;
        if ((dm > 0.0) == (da > 0.0)) {
          a = xm;
          da = dm;
        } else {
          b = xm;
        }
      }
    }
    out[i] = {eps, xm, hamiltonian(sys, xm, 0.0), std::abs(dm)};
  });
  return out;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,x,y,side\n";
  char buf[128];
  for (const auto& pt : tr.points) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%s\n", pt.t, pt.state.x, pt.state.y,
                  pt.state.side == Side::upper ? "upper" : "lower");
    os << buf;
  }
  return os.str();
}

std::string findings_json(SystemId sys, const std::vector<LimitCycleFinding>& f) {
  nlohmann::ordered_json j;
  j["system"] = std::string(to_string(sys));
  j["count"] = f.size();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : f)
    arr.push_back({{"eps", c.eps}, {"fixed_x", c.fixed_x}, {"h_cycle", c.h_cycle}, {"residual", c.residual}});
  j["cycles"] = arr;
  return j.dump(2);
}

}  // namespace melnikov

#include "ymjoin/integrator.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace ymjoin {

namespace odeint = boost::numeric::odeint;

template <int N>
IntegrationStatus integrate_adaptive(const RhsN<N>& rhs, StateN<N>& y, double s0, double s1,
                                     const StepControl& ctl, const ObserverN<N>& observer,
                                     const std::vector<double>* samples,
                                     std::vector<StateN<N>>* sampled) {
  using State = StateN<N>;
  auto stepper = odeint::make_controlled(ctl.abs_tol, ctl.rel_tol, odeint::runge_kutta_fehlberg78<State>());
  auto system = [&](const State& x, State& dxdt, double s) { rhs(x, dxdt, s); };

  IntegrationStatus st;
  const double dir = s1 >= s0 ? 1.0 : -1.0;
  double s = s0;
  double dt = dir * std::min(ctl.first_step, std::abs(s1 - s0));
  std::size_t next = 0;
  if (sampled) sampled->clear();
  auto record_samples_at = [&](double where) {
    while (samples && next < samples->size() && std::abs((*samples)[next] - where) <= 1e-13 * (1 + std::abs(where))) {
      if (sampled) sampled->push_back(y);
      ++next;
    }
  };
  record_samples_at(s);
  while (dir * (s1 - s) > 0) {
    if (st.steps++ > ctl.max_steps) {
      st.ok = false;
      st.error = "step limit reached";
      break;
    }
    double target = s1;
    if (samples && next < samples->size()) target = (*samples)[next];
    double room = std::abs(target - s);
    double trial = dir * std::min({std::abs(dt), ctl.max_step, room});
    bool landing = std::abs(trial) >= room;
    if (landing) trial = target - s;
    double s_before = s;
    auto res = stepper.try_step(system, y, s, trial);
    if (res == odeint::fail) {
      dt = trial;  // already reduced by the stepper
      if (std::abs(dt) < 1e-14 * (1 + std::abs(s))) {
        st.ok = false;
        st.error = "step size underflow";
        break;
      }
      continue;
    }
    if (landing && s != target && std::abs(s - target) < 1e-12 * (1 + std::abs(target))) s = target;
    dt = trial;  // stepper proposes the next size through trial
    if (!std::isfinite(y[0])) {
      st.ok = false;
      st.error = "non-finite state";
      break;
    }
    (void)s_before;
    record_samples_at(s);
    if (observer && !observer(s, y)) {
      st.stopped = true;
      break;
    }
  }
  st.s_end = s;
  return st;
}

template IntegrationStatus integrate_adaptive<2>(const RhsN<2>&, StateN<2>&, double, double,
                                                 const StepControl&, const ObserverN<2>&,
                                                 const std::vector<double>*, std::vector<StateN<2>>*);
template IntegrationStatus integrate_adaptive<4>(const RhsN<4>&, StateN<4>&, double, double,
                                                 const StepControl&, const ObserverN<4>&,
                                                 const std::vector<double>*, std::vector<StateN<4>>*);

}  // namespace ymjoin

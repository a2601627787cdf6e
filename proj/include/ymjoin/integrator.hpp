#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ymjoin {

template <int N>
using StateN = std::array<double, N>;

template <int N>
using RhsN = std::function<void(const StateN<N>&, StateN<N>&, double)>;

/// Called after every accepted step; returning false stops the integration.
template <int N>
using ObserverN = std::function<bool(double, const StateN<N>&)>;

struct StepControl {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double max_step = 0.1;
  double first_step = 1e-3;
  long max_steps = 5'000'000;
};

struct IntegrationStatus {
  bool ok = true;
  bool stopped = false;  // observer asked to stop
  double s_end = 0;
  long steps = 0;
  std::string error;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) from s0 to s1 (either direction). When
/// sample points are given (ordered along the direction of travel), steps land
/// on them exactly and the states there are recorded.
template <int N>
IntegrationStatus integrate_adaptive(const RhsN<N>& rhs, StateN<N>& y, double s0, double s1,
                                     const StepControl& ctl, const ObserverN<N>& observer = {},
                                     const std::vector<double>* samples = nullptr,
                                     std::vector<StateN<N>>* sampled = nullptr);

extern template IntegrationStatus integrate_adaptive<2>(const RhsN<2>&, StateN<2>&, double, double,
                                                        const StepControl&, const ObserverN<2>&,
                                                        const std::vector<double>*,
                                                        std::vector<StateN<2>>*);
extern template IntegrationStatus integrate_adaptive<4>(const RhsN<4>&, StateN<4>&, double, double,
                                                        const StepControl&, const ObserverN<4>&,
                                                        const std::vector<double>*,
                                                        std::vector<StateN<4>>*);

}  // namespace ymjoin

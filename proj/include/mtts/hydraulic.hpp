#pragma once

// Steady-state surrogate of a two-motor circuit: one fixed-displacement pump
// with a relief valve feeding two motors through pressure-compensated flow
// valves (PCFVs). Valves are ideal flow limiters and the relief valve spills
// whatever flow the valves do not pass. No leakage, no losses.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "core.hpp"

namespace mtts::hydraulic {

struct CircuitParams {
  double pump_disp = 0.0;    // cc/rev
  double motor1_disp = 0.0;  // cc/rev
  double motor2_disp = 0.0;  // cc/rev
  double pcfv1_flow = 0.0;   // L/min
  double pcfv2_flow = 0.0;   // L/min

  static CircuitParams from_vector(std::span<const double> v) {
    if (v.size() != 5) throw std::invalid_argument("circuit parameter vector must have 5 entries");
    return {v[0], v[1], v[2], v[3], v[4]};
  }
};

inline constexpr std::array<std::string_view, 5> param_names{
    "pump_disp", "motor1_disp", "motor2_disp", "pcfv1_flow", "pcfv2_flow"};

struct CircuitState {
  double omega1 = 0.0;  // rev/min
  double omega2 = 0.0;  // rev/min
  double q_pump = 0.0;  // L/min
  double q1 = 0.0;      // L/min through PCFV 1
  double q2 = 0.0;      // L/min through PCFV 2
  double q_rv = 0.0;    // L/min over the relief valve
};

/// How the two valves share a pump that cannot meet their combined demand.
enum class StarvationPolicy { proportional, priority_valve1 };

inline StarvationPolicy parse_starvation_policy(std::string_view s) {
  if (s == "proportional") return StarvationPolicy::proportional;
  if (s == "priority" || s == "priority_valve1") return StarvationPolicy::priority_valve1;
  throw std::invalid_argument("unknown starvation policy: " + std::string(s));
}

struct CircuitTargets {
  double omega1_target = 120.0;  // rev/min
  double omega2_target = 60.0;   // rev/min
  double pump_speed = 1500.0;    // rev/min, shaft speed of the drive
  StarvationPolicy policy = StarvationPolicy::proportional;
};

/// Flows are resolved to 2^-32 L/min. For flows below 2^20 L/min every sum
/// and difference of grid values is exact, so the flow balance closes
/// bit for bit.
inline double quantize_flow(double q) { return std::ldexp(std::round(std::ldexp(q, 32)), -32); }

inline CircuitState simulate_steady(const CircuitParams& p, const CircuitTargets& t) {
  CircuitState s;
  s.q_pump = quantize_flow(p.pump_disp * t.pump_speed / 1000.0);
  const double d1 = quantize_flow(p.pcfv1_flow);
  const double d2 = quantize_flow(p.pcfv2_flow);

  if (d1 + d2 <= s.q_pump) {
    s.q1 = d1;
    s.q2 = d2;
  } else if (t.policy == StarvationPolicy::proportional) {
    s.q1 = quantize_flow(d1 * s.q_pump / (d1 + d2));
    s.q2 = s.q_pump - s.q1;
  } else {
    s.q1 = std::min(d1, s.q_pump);
    s.q2 = s.q_pump - s.q1;
  }
  s.q_rv = s.q_pump - s.q1 - s.q2;

  s.omega1 = s.q1 * 1000.0 / p.motor1_disp;
  s.omega2 = s.q2 * 1000.0 / p.motor2_disp;
  return s;
}

/// Squared speed errors, inflated by the fraction of pump flow lost over the
/// relief valve.
inline double circuit_objective(const CircuitState& s, const CircuitTargets& t) {
  const double e1 = s.omega1 - t.omega1_target;
  const double e2 = s.omega2 - t.omega2_target;
  return (e1 * e1 + e2 * e2) * (1.0 + s.q_rv / s.q_pump);
}

inline double circuit_objective(const CircuitParams& p, const CircuitTargets& t) {
  return circuit_objective(simulate_steady(p, t), t);
}

inline ParameterSpace circuit_space() {
  return ParameterSpace({1.0, 1.0, 1.0, 10.0, 10.0}, {1000.0, 1000.0, 1000.0, 100.0, 100.0},
                        {1e-3, 1e-3, 1e-3, 1e-3, 1e-3});
}

inline Objective make_circuit_objective(const CircuitTargets& targets = {}) {
  Objective o;
  o.space = circuit_space();
  o.sense = Sense::minimize;
  o.eval = [targets](std::span<const double> x) {
    return Evaluation{circuit_objective(CircuitParams::from_vector(x), targets), true};
  };
  return o;
}

}  // namespace mtts::hydraulic

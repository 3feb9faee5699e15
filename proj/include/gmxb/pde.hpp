#pragma once

#include <functional>

#include "gmxb/grid.hpp"
#include "gmxb/types.hpp"

namespace gmxb {

struct StepperConfig {
    int steps_per_year = 100;

    void validate() const {
        if (steps_per_year < 1)
            throw std::invalid_argument("stepper: steps_per_year must be >= 1");
    }
};

// Source term of the funding equation, evaluated as source(x1, t). The value
// guarantee uses hazard(t) * x1; the return-of-premium contract uses 0.
using SourceTerm = std::function<double(double x1, double t)>;

inline SourceTerm zero_source() {
    return [](double, double) { return 0.0; };
}

// Advance a surface backward in time from t_end to t_begin under
//
//   dV/dt + (1/2) sigma^2 x1^2 V_x1x1 + (r - alpha) x1 V_x1 - r V + source = 0,
//
// fully implicit in time. The operator only differentiates in x1, so the
// linear system decouples into one tridiagonal solve per x2 node per step.
// Central differences are used for the drift where the off-diagonals stay
// nonnegative, one-sided differences otherwise, so every step is an M-matrix
// solve. No boundary condition is imposed at x1 = 0 (the equation degenerates
// there); at x1 = x1_max the asymptotic linear-growth ansatz V = g(t) x1
// reduces the equation to dg/dt = alpha g - source/x1_max, discretized the
// same way as the interior.
ValueSurface step_interval(const ValueSurface& v_end, const MarketModel& market,
                           const SourceTerm& source, double t_begin, double t_end,
                           const StepperConfig& cfg, TimeTag out_tag);

// Reference implementation without threading; bitwise-identical results.
ValueSurface step_interval_serial(const ValueSurface& v_end, const MarketModel& market,
                                  const SourceTerm& source, double t_begin, double t_end,
                                  const StepperConfig& cfg, TimeTag out_tag);

// Boundary coefficient ODE dg/dt = alpha g - hazard(t), solved backward from
// g(t_end) = g_end by the same implicit stepping as the interior rows.
double step_boundary_row(double g_end, const MarketModel& market,
                         const std::function<double(double)>& hazard, double t_begin,
                         double t_end, const StepperConfig& cfg);

} // namespace gmxb

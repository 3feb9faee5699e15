#pragma once

#include <vector>

#include "gmxb/contracts.hpp"
#include "gmxb/diagnostics.hpp"
#include "gmxb/exercise.hpp"
#include "gmxb/pde.hpp"

namespace gmxb {

struct PricerOptions {
    StepperConfig stepper;
    SearchMode mode = SearchMode::dense();
    bool keep_anniversary_surfaces = true;
    bool keep_interior_surfaces = false; // every timestep, for interior slices
    bool run_cm_checks = false;
    double cm_tol_factor = 1e-8; // tolerance is cm_tol_factor * ||V||_inf
};

struct PricingResult {
    double value_at_origin = 0.0; // V at (w0, w0) immediately before time 0
    std::vector<ValueSurface> minus_surfaces; // index n: surface at n-
    std::vector<ValueSurface> plus_surfaces;  // index n: surface at n+
    std::vector<ValueSurface> interior_surfaces;
    std::vector<ControlMap> control_maps; // index n
    std::vector<CmReport> cm_reports;     // when requested: n+, n- pairs, latest first
};

// Backward dynamic program: start from the terminal payoff, then alternate an
// implicit diffusion step over each inter-anniversary interval with the
// exercise-time supremum, down to time 0. The reported value is the surface
// immediately before the first exercise, interpolated at (w0, w0).
PricingResult price(const Contract& contract, const MarketModel& market, const GridSpec& grid,
                    const PricerOptions& options);

} // namespace gmxb

#include "gmxb/pricer.hpp"

#include <cmath>

namespace gmxb {

PricingResult price(const Contract& contract, const MarketModel& market, const GridSpec& grid,
                    const PricerOptions& options) {
    contract.validate();
    market.validate();
    grid.validate();
    options.stepper.validate();
    options.mode.validate();

    const ExerciseSchedule schedule = contract.schedule();
    schedule.validate();
    const int n_ex = static_cast<int>(schedule.times.size());

    PricingResult result;
    if (options.keep_anniversary_surfaces) {
        result.minus_surfaces.resize(static_cast<std::size_t>(n_ex));
        result.plus_surfaces.resize(static_cast<std::size_t>(n_ex));
    }
    result.control_maps.resize(static_cast<std::size_t>(n_ex));

    const SourceTerm source = [&contract](double x1, double t) {
        return contract.source_rate(t) * x1;
    };

    // Terminal condition at expiry.
    ValueSurface v(grid, TimeTag::interior(schedule.expiry));
    for (std::size_t i = 0; i < grid.n1(); ++i)
        for (std::size_t j = 0; j < grid.n2(); ++j)
            v.at(i, j) = contract.payoff({grid.x1_nodes[i], grid.x2_nodes[j]});

    auto run_cm = [&](const ValueSurface& s) {
        if (!options.run_cm_checks) return;
        result.cm_reports.push_back(cm_check(s, options.cm_tol_factor * s.max_abs()));
    };
    run_cm(v);

    for (int n = n_ex - 1; n >= 0; --n) {
        const double t_begin = schedule.times[static_cast<std::size_t>(n)];
        const double t_end =
            (n + 1 < n_ex) ? schedule.times[static_cast<std::size_t>(n + 1)] : schedule.expiry;

        ValueSurface v_plus;
        if (options.keep_interior_surfaces) {
            // Single-step sub-calls expose every intermediate time level.
            const int steps = std::max(
                1, static_cast<int>(
                       std::ceil((t_end - t_begin) * options.stepper.steps_per_year - 1e-12)));
            const double dt = (t_end - t_begin) / steps;
            ValueSurface cur = std::move(v);
            for (int k = steps - 1; k >= 0; --k) {
                const double a = t_begin + k * dt;
                const double b = t_begin + (k + 1) * dt;
                const TimeTag tag = (k == 0) ? TimeTag::plus(n) : TimeTag::interior(a);
                cur = step_interval(cur, market, source, a, b, options.stepper, tag);
                if (k != 0) result.interior_surfaces.push_back(cur);
            }
            v_plus = std::move(cur);
        } else {
            v_plus = step_interval(v, market, source, t_begin, t_end, options.stepper,
                                   TimeTag::plus(n));
        }
        run_cm(v_plus);

        ExerciseResult ex = apply_exercise(v_plus, contract, n, options.mode);
        run_cm(ex.v_minus);

        if (options.keep_anniversary_surfaces) {
            result.plus_surfaces[static_cast<std::size_t>(n)] = std::move(v_plus);
            result.minus_surfaces[static_cast<std::size_t>(n)] = ex.v_minus;
        }
        result.control_maps[static_cast<std::size_t>(n)] = std::move(ex.map);
        v = std::move(ex.v_minus);
    }

    const double w0 = contract.initial_deposit();
    result.value_at_origin = interpolate(v, {w0, w0});
    return result;
}

} // namespace gmxb

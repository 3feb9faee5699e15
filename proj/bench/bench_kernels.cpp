// Compares the OpenMP kernels against their serial reference implementations:
// interval stepping, exercise optimization, and Monte Carlo policy evaluation.
//
//   gmxb_bench [paths]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gmxb/diagnostics.hpp"
#include "gmxb/presets.hpp"
#include "gmxb/pricer.hpp"

using namespace gmxb;

namespace {

template <typename F>
double time_seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(end - start).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-24s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel, serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
    const std::int64_t paths = argc > 1 ? std::atoll(argv[1]) : 200'000;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif
    std::printf("%-24s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    const GmwbSetup setup = preset_gmwb_table2();
    const GmwbContract contract(setup.spec, setup.market);
    const GridSpec grid = default_grid(100.0, 2);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 120.0);
    ValueSurface surface(grid, TimeTag::interior(1.0));
    for (double& v : surface.values) v = u(gen);

    // Interval stepping: independent tridiagonal solves per benefit level.
    {
        const SourceTerm source = [](double x1, double) { return 0.02 * x1; };
        ValueSurface out_s, out_p;
        const double ts = time_seconds([&] {
            out_s = step_interval_serial(surface, setup.market, source, 0.0, 1.0, {400},
                                         TimeTag::interior(0.0));
        });
        const double tp = time_seconds([&] {
            out_p = step_interval(surface, setup.market, source, 0.0, 1.0, {400},
                                  TimeTag::interior(0.0));
        });
        if (out_s.values != out_p.values) {
            std::fprintf(stderr, "step_interval: serial/parallel mismatch\n");
            return 1;
        }
        row("step_interval", ts, tp);
    }

    // Exercise optimization: independent per-node linear searches.
    {
        ValueSurface v_plus = surface;
        v_plus.tag = TimeTag::plus(7);
        ExerciseResult rs, rp;
        const double ts = time_seconds(
            [&] { rs = apply_exercise_serial(v_plus, contract, 7, SearchMode::dense(401)); });
        const double tp = time_seconds(
            [&] { rp = apply_exercise(v_plus, contract, 7, SearchMode::dense(401)); });
        if (rs.v_minus.values != rp.v_minus.values ||
            rs.map.lambda_star != rp.map.lambda_star) {
            std::fprintf(stderr, "apply_exercise: serial/parallel mismatch\n");
            return 1;
        }
        row("apply_exercise", ts, tp);
    }

    // Monte Carlo policy evaluation: independent per-path streams.
    {
        PricerOptions opt;
        opt.mode = SearchMode::dense(201);
        const PricingResult priced =
            price(contract, setup.market, default_grid(100.0, 0), opt);
        const McConfig cfg{paths, 99, 100};
        McResult ms, mp;
        const double ts = time_seconds(
            [&] { ms = mc_policy_value_serial(contract, setup.market, priced.control_maps, cfg); });
        const double tp = time_seconds(
            [&] { mp = mc_policy_value(contract, setup.market, priced.control_maps, cfg); });
        if (ms.estimate != mp.estimate || ms.std_error != mp.std_error) {
            std::fprintf(stderr, "mc_policy_value: serial/parallel mismatch\n");
            return 1;
        }
        row("mc_policy_value", ts, tp);
    }

    return 0;
}

#include "gmxb/runner.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gmxb/pricer.hpp"

namespace gmxb {

namespace {

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

std::vector<std::string> metadata_lines(const RunConfig& cfg, const GridSpec& grid) {
    std::vector<std::string> lines;
    lines.push_back("# gmxb output");
    lines.push_back(fmt("# config_hash: 0x%016llx",
                        static_cast<unsigned long long>(cfg.config_hash())));
    lines.push_back(fmt("# grid: %zux%zu (refinement %d)", grid.n1(), grid.n2(),
                        cfg.refinement));
    if (cfg.search_mode == "dense")
        lines.push_back(fmt("# mode: dense p=%d", cfg.partition));
    else
        lines.push_back("# mode: extreme");
    return lines;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

struct PricedRun {
    std::unique_ptr<Contract> contract;
    GridSpec grid;
    PricerOptions options;
    PricingResult result;
};

PricedRun run_pricer(const RunConfig& cfg, bool cm_checks, bool keep_interior) {
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    PricedRun run;
    run.contract = cfg.make_contract();
    run.grid = default_grid(cfg.w0, cfg.refinement);
    run.options.stepper = cfg.make_stepper();
    run.options.mode = cfg.make_search_mode();
    run.options.run_cm_checks = cm_checks;
    run.options.keep_interior_surfaces = keep_interior;
    run.result = price(*run.contract, cfg.market, run.grid, run.options);
    return run;
}

// Buckets a computed action against the candidate actions at its node. The
// middle bucket is withdrawal at the contract rate/amount.
enum class Bucket { Lo, Mid, Hi, Fractional };

Bucket classify(double lambda, const Contract& contract, ContractState x, int n, double cell) {
    const AdmissibleInterval iv = contract.admissible();
    const CandidateSet cs = contract.candidate_set(x, n);
    double best_dist = std::numeric_limits<double>::infinity();
    double best = iv.lo;
    for (double cand : cs.lambdas) {
        const double d = std::fabs(lambda - cand);
        if (d < best_dist) {
            best_dist = d;
            best = cand;
        }
    }
    if (best_dist > cell) return Bucket::Fractional;
    if (best == iv.lo) return Bucket::Lo;
    if (best == iv.hi) return Bucket::Hi;
    return Bucket::Mid;
}

void cmd_price(const RunConfig& cfg, const std::filesystem::path& dir) {
    PricedRun run = run_pricer(cfg, false, false);
    const auto meta = metadata_lines(cfg, run.grid);

    {
        auto out = open_output(dir / "price_summary.txt");
        for (const auto& l : meta) out << l << '\n';
        out << "contract: " << run.contract->kind() << '\n';
        out << fmt("value_at_origin: %.10f", run.result.value_at_origin) << '\n';
        out << "anniversaries: " << run.contract->expiry() << '\n';
        out << "steps_per_year: " << cfg.steps_per_year << '\n';
    }

    {
        auto out = open_output(dir / "lambda_histogram.csv");
        for (const auto& l : meta) out << l << '\n';
        out << "n,nonwithdrawal,contract_rate,surrender,fractional\n";
        const AdmissibleInterval iv = run.contract->admissible();
        const double cell = (cfg.search_mode == "dense")
                                ? (iv.hi - iv.lo) / (cfg.partition - 1)
                                : 1e-12;
        for (const auto& map : run.result.control_maps) {
            std::size_t counts[4] = {0, 0, 0, 0};
            for (std::size_t i = 0; i < map.grid.n1(); ++i)
                for (std::size_t j = 0; j < map.grid.n2(); ++j) {
                    const ContractState x{map.grid.x1_nodes[i], map.grid.x2_nodes[j]};
                    const Bucket b = classify(map.lambda_at(i, j), *run.contract, x,
                                              map.anniversary, cell);
                    ++counts[static_cast<int>(b)];
                }
            out << fmt("%d,%zu,%zu,%zu,%zu", map.anniversary, counts[0], counts[1], counts[2],
                       counts[3])
                << '\n';
        }
    }
}

void cmd_control_maps(const RunConfig& cfg, const std::filesystem::path& dir) {
    PricedRun run = run_pricer(cfg, false, false);
    const auto meta = metadata_lines(cfg, run.grid);
    for (const auto& map : run.result.control_maps) {
        auto out = open_output(dir / fmt("control_map_n%d.csv", map.anniversary));
        write_control_map_csv(out, map, *run.contract, meta);
    }
}

void cmd_slice(const RunConfig& cfg, const std::filesystem::path& dir) {
    PricedRun run = run_pricer(cfg, false, cfg.retain_interior);
    const auto meta = metadata_lines(cfg, run.grid);
    const int n = cfg.slice_anniversary;
    if (n < 0 || n >= run.contract->expiry())
        throw ConfigError("slice.anniversary outside the exercise schedule");

    const ValueSurface& vm = run.result.minus_surfaces[static_cast<std::size_t>(n)];
    const ValueSurface& vp = run.result.plus_surfaces[static_cast<std::size_t>(n)];
    {
        auto out = open_output(dir / fmt("slice_n%d.csv", n));
        for (const auto& l : meta) out << l << '\n';
        out << fmt("# x1: %.12g", cfg.slice_x1) << '\n';
        out << "x2,v_minus,v_plus\n";
        for (double x2 : run.grid.x2_nodes) {
            const double a = interpolate(vm, {cfg.slice_x1, x2});
            const double b = interpolate(vp, {cfg.slice_x1, x2});
            out << fmt("%.12g,%.12g,%.12g", x2, a, b) << '\n';
        }
    }
    if (cfg.retain_interior) {
        auto out = open_output(dir / fmt("slice_interior_n%d.csv", n));
        for (const auto& l : meta) out << l << '\n';
        out << fmt("# x1: %.12g", cfg.slice_x1) << '\n';
        out << "t,x2,value\n";
        for (const auto& s : run.result.interior_surfaces) {
            if (s.tag.kind != TimeTag::Kind::Interior) continue;
            if (!(s.tag.time > n && s.tag.time < n + 1)) continue;
            for (double x2 : run.grid.x2_nodes)
                out << fmt("%.12g,%.12g,%.12g", s.tag.time, x2,
                           interpolate(s, {cfg.slice_x1, x2}))
                    << '\n';
        }
    }
}

void cmd_verify(const RunConfig& cfg, const std::filesystem::path& dir) {
    PricedRun run = run_pricer(cfg, true, false);
    const Contract& contract = *run.contract;
    const auto meta = metadata_lines(cfg, run.grid);

    auto out = open_output(dir / "verify_report.txt");
    for (const auto& l : meta) out << l << '\n';
    out << "contract: " << contract.kind() << '\n';
    out << fmt("value_at_origin: %.10f", run.result.value_at_origin) << '\n';

    // Extreme-point search vs dense linear search, one exercise at a time.
    double worst_rel_gap = 0.0;
    for (int n = 0; n < contract.expiry(); ++n) {
        const bool certified = contract.bang_bang_certified(n);
        if (!certified && !cfg.allow_uncertified) {
            out << fmt("gap_max_rel[%d]: skipped (not certified)", n) << '\n';
            continue;
        }
        const ValueSurface& vp = run.result.plus_surfaces[static_cast<std::size_t>(n)];
        const std::vector<double> gap = bang_bang_gap(vp, contract, n, cfg.partition);
        const ValueSurface& vm = run.result.minus_surfaces[static_cast<std::size_t>(n)];
        double rel = 0.0;
        for (std::size_t k = 0; k < gap.size(); ++k)
            rel = std::max(rel, std::fabs(gap[k]) / (1.0 + std::fabs(vm.values[k])));
        if (certified) worst_rel_gap = std::max(worst_rel_gap, rel);
        out << fmt("gap_max_rel[%d]: %.6e%s", n, rel, certified ? "" : " (uncertified)")
            << '\n';
    }
    out << fmt("bang_bang_max_rel_gap_certified: %.6e", worst_rel_gap) << '\n';

    // Convexity/monotonicity reports collected by the pricer.
    std::size_t cm_failures = 0;
    for (const auto& rep : run.result.cm_reports) {
        if (!rep.passes()) ++cm_failures;
        out << fmt("cm[%s]: %s min2_x1=%.6e min2_x2=%.6e min2_diag=%.6e minfwd_x1=%.6e "
                   "minfwd_x2=%.6e",
                   rep.tag.label().c_str(), rep.passes() ? "pass" : "FAIL",
                   rep.min_second_diff_x1, rep.min_second_diff_x2, rep.min_second_diff_diag,
                   rep.min_forward_diff_x1, rep.min_forward_diff_x2)
            << '\n';
    }
    out << fmt("cm_failures: %zu", cm_failures) << '\n';

    {
        auto vout = open_output(dir / "cm_violations.csv");
        write_cm_violations_csv(vout, run.result.cm_reports, meta);
    }

    // Monte Carlo cross-check of the fixed numerical policy.
    const McConfig mc_cfg = cfg.make_mc();
    const McResult mc = mc_policy_value(contract, cfg.market, run.result.control_maps, mc_cfg);
    const double pde = run.result.value_at_origin;
    const double diff = std::fabs(mc.estimate - pde);
    const double bound = 3.0 * mc.std_error + 0.005 * std::fabs(pde);
    out << fmt("mc_paths: %lld", static_cast<long long>(mc_cfg.paths)) << '\n';
    out << fmt("mc_seed: %llu", static_cast<unsigned long long>(mc_cfg.seed)) << '\n';
    out << fmt("mc_estimate: %.10f", mc.estimate) << '\n';
    out << fmt("mc_std_error: %.10f", mc.std_error) << '\n';
    out << fmt("mc_abs_diff: %.10f", diff) << '\n';
    out << fmt("mc_bound_3se_plus_allowance: %.10f", bound) << '\n';
    out << fmt("mc_within_bound: %s", diff <= bound ? "true" : "false") << '\n';
    out << fmt("mc_policy_dominated: %s",
               mc.estimate <= pde + 3.0 * mc.std_error ? "true" : "false")
        << '\n';

    if (std::string(contract.kind()) == "glwb") {
        const double dev = homogeneity_check(run.result.minus_surfaces[0], 2.0);
        out << fmt("homogeneity_c2_max_rel_dev: %.6e", dev) << '\n';
    }
}

// Refinement study: each level halves the mesh by midpoint insertion, doubles
// the timesteps per year, and doubles the dense partition on nested points.
void cmd_converge(const RunConfig& cfg, const std::filesystem::path& dir) {
    std::string rows;
    double previous = 0.0, previous_change = 0.0;
    GridSpec grid0;
    for (int level = 0; level <= cfg.refinement; ++level) {
        RunConfig c = cfg;
        c.refinement = level;
        c.steps_per_year = cfg.steps_per_year << level;
        c.partition = ((cfg.partition - 1) << level) + 1;
        PricedRun run = run_pricer(c, false, false);
        if (level == 0) grid0 = run.grid;
        const double value = run.result.value_at_origin;
        const double change = value - previous;
        rows += fmt("%d,%zu,%zu,%d,%d,%.10f", level, run.grid.n1(), run.grid.n2(),
                    c.steps_per_year, c.partition, value);
        rows += (level >= 1) ? fmt(",%.10f", change) : ",";
        rows += (level >= 2) ? fmt(",%.6f", previous_change / change) : ",";
        rows += '\n';
        previous_change = change;
        previous = value;
    }
    auto out = open_output(dir / "convergence.csv");
    for (const auto& l : metadata_lines(cfg, grid0)) out << l << '\n';
    out << "level,n1,n2,steps_per_year,partition,value,change,ratio\n";
    out << rows;
}

} // namespace

void run_subcommand(const RunConfig& cfg, const std::string& subcommand) {
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    if (subcommand == "price")
        cmd_price(cfg, dir);
    else if (subcommand == "control-maps")
        cmd_control_maps(cfg, dir);
    else if (subcommand == "slice")
        cmd_slice(cfg, dir);
    else if (subcommand == "verify")
        cmd_verify(cfg, dir);
    else if (subcommand == "converge")
        cmd_converge(cfg, dir);
    else
        throw ConfigError("unknown subcommand \"" + subcommand + "\"");
}

} // namespace gmxb

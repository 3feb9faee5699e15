#include "gmxb/pde.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gmxb {

namespace {

// Factored tridiagonal system (I - dt*L). The matrix depends only on the x1
// axis and dt, so it is factored once per interval and reused for every step
// and every x2 line.
struct TridiagonalFactors {
    std::vector<double> sup;   // superdiagonal of the original matrix
    std::vector<double> mult;  // forward-elimination multipliers
    std::vector<double> pivot; // modified diagonal

    void solve(std::vector<double>& b) const {
        const std::size_t n = pivot.size();
        for (std::size_t i = 1; i < n; ++i) b[i] -= mult[i] * b[i - 1];
        b[n - 1] /= pivot[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - sup[i] * b[i + 1]) / pivot[i];
    }
};

TridiagonalFactors build_system(const std::vector<double>& x, const MarketModel& m, double dt) {
    const std::size_t n = x.size();
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0);

    // x1 = 0: the equation degenerates to dV/dt - r V + source = 0.
    diag[0] = 1.0 + dt * m.r;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double db = x[i] - x[i - 1];
        const double df = x[i + 1] - x[i];
        const double dc = db + df;

        const double diff = m.sigma * m.sigma * x[i] * x[i];
        const double drift = (m.r - m.alpha) * x[i];

        const double a_common = diff / (db * dc);
        const double b_common = diff / (df * dc);

        // Central differencing for the drift, falling back to one-sided
        // differences whenever an off-diagonal coefficient would go negative.
        double a = a_common - drift / dc;
        double b = b_common + drift / dc;
        if (a < 0.0) {
            a = a_common;
            b = b_common + drift / df;
        } else if (b < 0.0) {
            a = a_common - drift / db;
            b = b_common;
        }

        sub[i] = -dt * a;
        sup[i] = -dt * b;
        diag[i] = 1.0 + dt * (a + b + m.r);
    }

    // x1 = x1_max: implicit step of dg/dt = alpha g - source/x1_max, written in
    // terms of V = g * x1_max so the surface stays a plain matrix.
    diag[n - 1] = 1.0 + dt * m.alpha;

    TridiagonalFactors f;
    f.sup = std::move(sup);
    f.mult.assign(n, 0.0);
    f.pivot.assign(n, 0.0);
    f.pivot[0] = diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (f.pivot[i - 1] <= 0.0)
            throw std::runtime_error("pde: singular tridiagonal system");
        f.mult[i] = sub[i] / f.pivot[i - 1];
        f.pivot[i] = diag[i] - f.mult[i] * f.sup[i - 1];
    }
    if (f.pivot[n - 1] <= 0.0) throw std::runtime_error("pde: singular tridiagonal system");
    return f;
}

ValueSurface step_interval_impl(const ValueSurface& v_end, const MarketModel& market,
                                const SourceTerm& source, double t_begin, double t_end,
                                const StepperConfig& cfg, TimeTag out_tag, bool parallel) {
    market.validate();
    cfg.validate();
    if (!(t_end > t_begin)) throw std::invalid_argument("pde: interval must have positive length");
    for (double v : v_end.values)
        if (!std::isfinite(v)) throw std::invalid_argument("pde: non-finite input surface");

    const auto& x = v_end.grid.x1_nodes;
    const std::size_t n1 = v_end.grid.n1();
    const std::size_t n2 = v_end.grid.n2();

    const int steps = std::max(
        1, static_cast<int>(std::ceil((t_end - t_begin) * cfg.steps_per_year - 1e-12)));
    const double dt = (t_end - t_begin) / steps;

    const TridiagonalFactors sys = build_system(x, market, dt);

    // Source contributions dt * source(x1_i, t_k), evaluated at the implicit
    // (earlier) time level of each step.
    std::vector<double> src(static_cast<std::size_t>(steps) * n1, 0.0);
    for (int k = 0; k < steps; ++k) {
        const double t = t_begin + k * dt;
        for (std::size_t i = 0; i < n1; ++i)
            src[static_cast<std::size_t>(k) * n1 + i] = dt * source(x[i], t);
    }

    ValueSurface out(v_end.grid, out_tag);

    // Every x2 line evolves independently through the whole interval.
    const auto run_line = [&](std::size_t j) {
        std::vector<double> col(n1);
        for (std::size_t i = 0; i < n1; ++i) col[i] = v_end.at(i, j);
        for (int k = steps - 1; k >= 0; --k) {
            const double* s = &src[static_cast<std::size_t>(k) * n1];
            for (std::size_t i = 0; i < n1; ++i) col[i] += s[i];
            sys.solve(col);
        }
        for (std::size_t i = 0; i < n1; ++i) out.at(i, j) = col[i];
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long j = 0; j < static_cast<long long>(n2); ++j)
            run_line(static_cast<std::size_t>(j));
    } else {
        for (std::size_t j = 0; j < n2; ++j) run_line(j);
    }
    return out;
}

} // namespace

ValueSurface step_interval(const ValueSurface& v_end, const MarketModel& market,
                           const SourceTerm& source, double t_begin, double t_end,
                           const StepperConfig& cfg, TimeTag out_tag) {
    return step_interval_impl(v_end, market, source, t_begin, t_end, cfg, out_tag, true);
}

ValueSurface step_interval_serial(const ValueSurface& v_end, const MarketModel& market,
                                  const SourceTerm& source, double t_begin, double t_end,
                                  const StepperConfig& cfg, TimeTag out_tag) {
    return step_interval_impl(v_end, market, source, t_begin, t_end, cfg, out_tag, false);
}

double step_boundary_row(double g_end, const MarketModel& market,
                         const std::function<double(double)>& hazard, double t_begin,
                         double t_end, const StepperConfig& cfg) {
    market.validate();
    cfg.validate();
    if (!(t_end > t_begin)) throw std::invalid_argument("pde: interval must have positive length");
    const int steps = std::max(
        1, static_cast<int>(std::ceil((t_end - t_begin) * cfg.steps_per_year - 1e-12)));
    const double dt = (t_end - t_begin) / steps;
    double g = g_end;
    for (int k = steps - 1; k >= 0; --k) {
        const double t = t_begin + k * dt;
        g = (g + dt * hazard(t)) / (1.0 + dt * market.alpha);
    }
    return g;
}

} // namespace gmxb

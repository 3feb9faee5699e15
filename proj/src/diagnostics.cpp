#include "gmxb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gmxb/rng.hpp"

namespace gmxb {

CmReport cm_check(const ValueSurface& s, double tol) {
    const auto& x = s.grid.x1_nodes;
    const auto& y = s.grid.x2_nodes;
    const std::size_t n1 = s.grid.n1();
    const std::size_t n2 = s.grid.n2();

    auto track = [&](double v, double& minimum, CmViolation::Check check, std::size_t i,
                     std::size_t j, std::vector<CmViolation>& out) {
        minimum = std::min(minimum, v);
        if (v < -tol) out.push_back({check, i, j, x[i], y[j], v});
    };

    CmReport rep;
    rep.tag = s.tag;
    rep.tol = tol;
    rep.min_second_diff_x1 = rep.min_second_diff_x2 = rep.min_second_diff_diag = 0.0;
    rep.min_forward_diff_x1 = rep.min_forward_diff_x2 = 0.0;

    // Forward differences (monotonicity).
    for (std::size_t i = 0; i + 1 < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            track(s.at(i + 1, j) - s.at(i, j), rep.min_forward_diff_x1,
                  CmViolation::Check::MonotoneX1, i, j, rep.violations);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j + 1 < n2; ++j)
            track(s.at(i, j + 1) - s.at(i, j), rep.min_forward_diff_x2,
                  CmViolation::Check::MonotoneX2, i, j, rep.violations);

    // Divided second differences along each axis.
    for (std::size_t i = 1; i + 1 < n1; ++i) {
        const double hb = x[i] - x[i - 1];
        const double hf = x[i + 1] - x[i];
        for (std::size_t j = 0; j < n2; ++j) {
            const double d = 2.0 *
                             ((s.at(i + 1, j) - s.at(i, j)) / hf -
                              (s.at(i, j) - s.at(i - 1, j)) / hb) /
                             (hb + hf);
            track(d, rep.min_second_diff_x1, CmViolation::Check::ConvexX1, i, j,
                  rep.violations);
        }
    }
    for (std::size_t j = 1; j + 1 < n2; ++j) {
        const double hb = y[j] - y[j - 1];
        const double hf = y[j + 1] - y[j];
        for (std::size_t i = 0; i < n1; ++i) {
            const double d = 2.0 *
                             ((s.at(i, j + 1) - s.at(i, j)) / hf -
                              (s.at(i, j) - s.at(i, j - 1)) / hb) /
                             (hb + hf);
            track(d, rep.min_second_diff_x2, CmViolation::Check::ConvexX2, i, j,
                  rep.violations);
        }
    }

    // Diagonal direction: only triples of consecutive diagonal nodes that are
    // collinear in space give a one-dimensional convexity test.
    for (std::size_t i = 1; i + 1 < n1; ++i) {
        for (std::size_t j = 1; j + 1 < n2; ++j) {
            const double bx = x[i] - x[i - 1], by = y[j] - y[j - 1];
            const double fx = x[i + 1] - x[i], fy = y[j + 1] - y[j];
            const double cross = bx * fy - by * fx;
            if (std::fabs(cross) > 1e-12 * (bx * fy + by * fx)) continue;
            const double hb = std::hypot(bx, by);
            const double hf = std::hypot(fx, fy);
            const double d = 2.0 *
                             ((s.at(i + 1, j + 1) - s.at(i, j)) / hf -
                              (s.at(i, j) - s.at(i - 1, j - 1)) / hb) /
                             (hb + hf);
            track(d, rep.min_second_diff_diag, CmViolation::Check::ConvexDiag, i, j,
                  rep.violations);
        }
    }
    return rep;
}

const char* cm_check_name(CmViolation::Check c) {
    switch (c) {
    case CmViolation::Check::ConvexX1: return "convex_x1";
    case CmViolation::Check::ConvexX2: return "convex_x2";
    case CmViolation::Check::ConvexDiag: return "convex_diag";
    case CmViolation::Check::MonotoneX1: return "monotone_x1";
    case CmViolation::Check::MonotoneX2: return "monotone_x2";
    }
    return "?";
}

void write_cm_violations_csv(std::ostream& out, const std::vector<CmReport>& reports,
                             const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << line << '\n';
    out << "time,check,i,j,x1,x2,value\n";
    char buf[160];
    for (const auto& rep : reports) {
        for (const auto& v : rep.violations) {
            std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%zu,%.12g,%.12g,%.12g",
                          rep.tag.label().c_str(), cm_check_name(v.check), v.i, v.j, v.x1,
                          v.x2, v.value);
            out << buf << '\n';
        }
    }
}

double homogeneity_check(const ValueSurface& s, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("homogeneity: scale must be positive");
    const auto& x = s.grid.x1_nodes;
    const auto& y = s.grid.x2_nodes;
    double worst = 0.0;
    for (std::size_t i = 0; i < s.grid.n1(); ++i) {
        if (x[i] <= 0.0 || scale * x[i] > 0.5 * s.grid.x1_max()) continue;
        for (std::size_t j = 0; j < s.grid.n2(); ++j) {
            if (y[j] <= 0.0 || scale * y[j] > 0.5 * s.grid.x2_max()) continue;
            const double base = scale * interpolate(s, {x[i], y[j]});
            const double scaled = interpolate(s, {scale * x[i], scale * y[j]});
            worst = std::max(worst, std::fabs(scaled - base) / (1.0 + std::fabs(base)));
        }
    }
    return worst;
}

namespace {

std::size_t nearest_index(const std::vector<double>& nodes, double q) {
    if (q <= nodes.front()) return 0;
    if (q >= nodes.back()) return nodes.size() - 1;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), q);
    const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    // Prefer the lower node on exact midpoints.
    return (q - nodes[k - 1] <= nodes[k] - q) ? k - 1 : k;
}

// Deterministic (seed, path)-indexed simulation of one path's discounted cash.
double simulate_path(const Contract& contract, const MarketModel& market,
                     const std::vector<ControlMap>& policy, const McConfig& cfg,
                     std::int64_t path, bool with_source,
                     const std::vector<double>& source_weights) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(path));
    const int years = contract.expiry();
    const int sub = cfg.substeps_per_year;
    const double dt = 1.0 / sub;
    const double drift = (market.r - market.alpha - 0.5 * market.sigma * market.sigma);
    const double vol_sub = market.sigma * std::sqrt(dt);
    const double drift_sub = drift * dt;

    double account = contract.initial_deposit();
    double benefit = contract.initial_deposit();
    double cash = 0.0;

    for (int n = 0; n < years; ++n) {
        const ControlMap& map = policy[static_cast<std::size_t>(n)];
        const std::size_t i = nearest_index(map.grid.x1_nodes, account);
        const std::size_t j = nearest_index(map.grid.x2_nodes, benefit);
        const EventOutcome ev = contract.event({account, benefit}, n, map.lambda_at(i, j));
        cash += std::exp(-market.r * n) * ev.cash;
        account = ev.state.x1;
        benefit = ev.state.x2;
        if (account == 0.0 && benefit == 0.0) return cash; // nothing left to pay

        if (with_source) {
            const double* w = &source_weights[static_cast<std::size_t>(n) * sub];
            for (int k = 0; k < sub; ++k) {
                cash += w[k] * account; // left-endpoint quadrature
                account *= std::exp(drift_sub + vol_sub * rng.next_normal());
            }
        } else {
            account *= std::exp(drift + market.sigma * rng.next_normal());
        }
    }
    cash += std::exp(-market.r * years) * contract.payoff({account, benefit});
    return cash;
}

McResult mc_policy_value_impl(const Contract& contract, const MarketModel& market,
                              const std::vector<ControlMap>& policy, const McConfig& cfg,
                              bool parallel) {
    cfg.validate();
    market.validate();
    if (static_cast<int>(policy.size()) < contract.expiry())
        throw std::invalid_argument("mc: policy must cover every anniversary");

    // Discounted quadrature weights exp(-r t) * rate(t) * dt per substep. A
    // contract without a mortality source skips the quadrature entirely.
    const int sub = cfg.substeps_per_year;
    std::vector<double> weights(static_cast<std::size_t>(contract.expiry()) * sub, 0.0);
    bool with_source = false;
    for (int n = 0; n < contract.expiry(); ++n)
        for (int k = 0; k < sub; ++k) {
            const double t = n + static_cast<double>(k) / sub;
            const double w = std::exp(-market.r * t) * contract.source_rate(t) / sub;
            weights[static_cast<std::size_t>(n) * sub + k] = w;
            if (w != 0.0) with_source = true;
        }

    std::vector<double> per_path(static_cast<std::size_t>(cfg.paths));
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t p = 0; p < cfg.paths; ++p)
            per_path[static_cast<std::size_t>(p)] =
                simulate_path(contract, market, policy, cfg, p, with_source, weights);
    } else {
        for (std::int64_t p = 0; p < cfg.paths; ++p)
            per_path[static_cast<std::size_t>(p)] =
                simulate_path(contract, market, policy, cfg, p, with_source, weights);
    }

    // Fixed-order compensated reduction keeps the estimate scheduling-independent.
    double sum = 0.0, comp = 0.0;
    for (double v : per_path) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / static_cast<double>(cfg.paths);

    double ss = 0.0, comp2 = 0.0;
    for (double v : per_path) {
        const double d = (v - mean) * (v - mean) - comp2;
        const double t = ss + d;
        comp2 = (t - ss) - d;
        ss = t;
    }
    McResult res;
    res.estimate = mean;
    res.std_error = cfg.paths > 1
                        ? std::sqrt(ss / (static_cast<double>(cfg.paths) *
                                          static_cast<double>(cfg.paths - 1)))
                        : 0.0;
    return res;
}

} // namespace

McResult mc_policy_value(const Contract& contract, const MarketModel& market,
                         const std::vector<ControlMap>& policy, const McConfig& cfg) {
    return mc_policy_value_impl(contract, market, policy, cfg, true);
}

McResult mc_policy_value_serial(const Contract& contract, const MarketModel& market,
                                const std::vector<ControlMap>& policy, const McConfig& cfg) {
    return mc_policy_value_impl(contract, market, policy, cfg, false);
}

} // namespace gmxb

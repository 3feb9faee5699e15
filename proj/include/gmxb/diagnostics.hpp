#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gmxb/contracts.hpp"
#include "gmxb/exercise.hpp"
#include "gmxb/grid.hpp"

namespace gmxb {

// Discrete convexity/monotonicity report for one surface. Second differences
// are divided differences on the nonuniform grid, taken along each axis and
// along grid diagonals wherever three consecutive diagonal nodes are collinear.
// Monotonicity uses raw forward differences.
//
// The pass verdict uses the axis directions. The diagonal minimum is reported
// (and its violations listed) as a diagnostic only: interpolated action images
// leave a resolution-independent piecewise-quadratic ripple across cell
// diagonals, so a nodal diagonal test flags that ripple on any mesh even when
// both axis profiles are cleanly convex.
struct CmViolation {
    enum class Check { ConvexX1, ConvexX2, ConvexDiag, MonotoneX1, MonotoneX2 };
    Check check;
    std::size_t i = 0;
    std::size_t j = 0;
    double x1 = 0.0;
    double x2 = 0.0;
    double value = 0.0;
};

struct CmReport {
    TimeTag tag;
    double tol = 0.0;
    double min_second_diff_x1 = 0.0;
    double min_second_diff_x2 = 0.0;
    double min_second_diff_diag = 0.0;
    double min_forward_diff_x1 = 0.0;
    double min_forward_diff_x2 = 0.0;
    std::vector<CmViolation> violations;

    bool convex() const { return min_second_diff_x1 >= -tol && min_second_diff_x2 >= -tol; }
    bool monotone() const {
        return min_forward_diff_x1 >= -tol && min_forward_diff_x2 >= -tol;
    }
    bool passes() const { return convex() && monotone(); }
};

CmReport cm_check(const ValueSurface& surface, double tol);

const char* cm_check_name(CmViolation::Check c);
void write_cm_violations_csv(std::ostream& out, const std::vector<CmReport>& reports,
                             const std::vector<std::string>& metadata = {});

// Max relative deviation of s(c*x) from c*s(x) over an interior lattice: all
// grid nodes with positive coordinates whose scaled image stays within half
// the domain. Deviations are |s(cx) - c s(x)| / (1 + |c s(x)|).
double homogeneity_check(const ValueSurface& surface, double scale);

// Monte Carlo evaluation of the fixed numerical policy.
struct McConfig {
    std::int64_t paths = 1'000'000;
    std::uint64_t seed = 1;
    int substeps_per_year = 100; // death-benefit quadrature resolution

    void validate() const {
        if (paths < 1) throw std::invalid_argument("mc: paths must be >= 1");
        if (substeps_per_year < 1)
            throw std::invalid_argument("mc: substeps_per_year must be >= 1");
    }
};

struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Simulates exact lognormal account transitions between anniversaries, reads
// the action at each anniversary from the nearest grid node of the supplied
// policy, applies the contract event, and discounts all cash flows. Contracts
// with a mortality source accrue the death benefit by left-endpoint quadrature
// over the configured substeps. Per-path streams are derived from the path
// index and reduced in a fixed order, so the estimate is independent of
// scheduling.
McResult mc_policy_value(const Contract& contract, const MarketModel& market,
                         const std::vector<ControlMap>& policy, const McConfig& cfg);
McResult mc_policy_value_serial(const Contract& contract, const MarketModel& market,
                                const std::vector<ControlMap>& policy, const McConfig& cfg);

} // namespace gmxb

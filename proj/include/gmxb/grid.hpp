#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmxb/types.hpp"

namespace gmxb {

// Tensor grid on the truncated domain [0, x1_max] x [0, x2_max]. Nodes are
// strictly increasing and start at 0 on each axis.
struct GridSpec {
    std::vector<double> x1_nodes;
    std::vector<double> x2_nodes;

    std::size_t n1() const { return x1_nodes.size(); }
    std::size_t n2() const { return x2_nodes.size(); }
    std::size_t size() const { return n1() * n2(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n2() + j; }
    double x1_max() const { return x1_nodes.back(); }
    double x2_max() const { return x2_nodes.back(); }

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

// Nonuniform grid graded towards the initial deposit, spanning [0, 20*w0] on
// both axes with 65 nodes per axis at level 0. Each refinement level inserts
// cell midpoints, so coarser node sets are subsets of finer ones.
GridSpec default_grid(double w0, int refinement_level);

// Single refinement step by midpoint insertion.
std::vector<double> refine_axis(const std::vector<double>& nodes);

// Time a surface is attached to: immediately before/after an anniversary, or
// an interior time between exercises.
struct TimeTag {
    enum class Kind { Minus, Plus, Interior };
    Kind kind = Kind::Interior;
    int anniversary = -1;
    double time = 0.0;

    static TimeTag minus(int n) { return {Kind::Minus, n, static_cast<double>(n)}; }
    static TimeTag plus(int n) { return {Kind::Plus, n, static_cast<double>(n)}; }
    static TimeTag interior(double t) { return {Kind::Interior, -1, t}; }
    std::string label() const;
};

// Grid-sampled cost surface at one time tag. Values are stored x1-major:
// values[i * n2 + j] holds the node (x1_nodes[i], x2_nodes[j]).
struct ValueSurface {
    GridSpec grid;
    std::vector<double> values;
    TimeTag tag;

    ValueSurface() = default;
    ValueSurface(GridSpec g, TimeTag t)
        : grid(std::move(g)), values(grid.size(), 0.0), tag(t) {}

    double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
    double max_abs() const;
};

// Bilinear interpolation on the containing cell; exact at the nodes. Queries
// outside the truncated domain (beyond a relative slack of 1e-9) are domain
// errors; callers clamp post-event states before querying.
double interpolate(const ValueSurface& surface, ContractState x);

// CSV export, header "x1,x2,value", row-major over x1 then x2. Any metadata
// lines are written verbatim before the header.
void write_surface_csv(std::ostream& out, const ValueSurface& surface,
                       const std::vector<std::string>& metadata = {});

} // namespace gmxb

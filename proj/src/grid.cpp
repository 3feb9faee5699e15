#include "gmxb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace gmxb {

void GridSpec::validate() const {
    for (const auto* axis : {&x1_nodes, &x2_nodes}) {
        if (axis->size() < 2) throw std::invalid_argument("grid: axis needs >= 2 nodes");
        if ((*axis)[0] != 0.0) throw std::invalid_argument("grid: axis must start at 0");
        for (std::size_t k = 0; k + 1 < axis->size(); ++k)
            if (!((*axis)[k] < (*axis)[k + 1]))
                throw std::invalid_argument("grid: axis nodes must be strictly increasing");
    }
}

std::vector<double> refine_axis(const std::vector<double>& nodes) {
    std::vector<double> out;
    out.reserve(nodes.size() * 2 - 1);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        out.push_back(nodes[k]);
        out.push_back(0.5 * (nodes[k] + nodes[k + 1]));
    }
    out.push_back(nodes.back());
    return out;
}

GridSpec default_grid(double w0, int refinement_level) {
    if (!(w0 > 0.0)) throw std::invalid_argument("grid: w0 must be positive");
    if (refinement_level < 0) throw std::invalid_argument("grid: refinement level must be >= 0");

    // Hand-graded 65-node axis for w0 = 100, scaled by w0/100 for other
    // deposits. Densest around the deposit, with geometric cells towards the
    // origin (post-event states shrink along rays into it) and a slowly
    // growing tail out to 20*w0 so far cells stay angularly resolved.
    static const double base[] = {
        0,    1,    2,    3.5,  5,    7.5,  10,   15,   20,   25,   30,  35,  40,
        45,   50,   55,   60,   65,   70,   75,   80,   84,   88,   90,  92,  94,
        96,   98,   100,  102,  104,  106,  108,  110,  114,  118,  122, 126, 130,
        135,  140,  145,  150,  160,  170,  185,  200,  220,  240,  265, 290, 320,
        350,  390,  440,  500,  570,  660,  770,  900,  1060, 1250, 1500, 1750, 2000};

    std::vector<double> axis(std::begin(base), std::end(base));
    const double scale = w0 / 100.0;
    for (double& v : axis) v *= scale;
    for (int l = 0; l < refinement_level; ++l) axis = refine_axis(axis);

    GridSpec g{axis, axis};
    g.validate();
    return g;
}

std::string TimeTag::label() const {
    char buf[48];
    switch (kind) {
    case Kind::Minus:
        std::snprintf(buf, sizeof(buf), "%d-", anniversary);
        break;
    case Kind::Plus:
        std::snprintf(buf, sizeof(buf), "%d+", anniversary);
        break;
    case Kind::Interior:
        std::snprintf(buf, sizeof(buf), "t=%.6g", time);
        break;
    }
    return buf;
}

double ValueSurface::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

namespace {

// Index of the cell [nodes[k], nodes[k+1]] containing q, with a small relative
// slack at the domain edges.
std::size_t locate(const std::vector<double>& nodes, double q, const char* axis) {
    const double hi = nodes.back();
    const double slack = 1e-9 * (1.0 + std::fabs(hi));
    if (!(q >= -slack && q <= hi + slack))
        throw std::domain_error(std::string("interpolate: query outside domain on ") + axis);
    auto it = std::upper_bound(nodes.begin(), nodes.end(), q);
    std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    if (k == 0) return 0;
    if (k >= nodes.size()) return nodes.size() - 2;
    return k - 1;
}

} // namespace

double interpolate(const ValueSurface& s, ContractState x) {
    const auto& a1 = s.grid.x1_nodes;
    const auto& a2 = s.grid.x2_nodes;
    const std::size_t i = locate(a1, x.x1, "x1");
    const std::size_t j = locate(a2, x.x2, "x2");

    const double u = (x.x1 - a1[i]) / (a1[i + 1] - a1[i]);
    const double v = (x.x2 - a2[j]) / (a2[j + 1] - a2[j]);
    const double cu = std::clamp(u, 0.0, 1.0);
    const double cv = std::clamp(v, 0.0, 1.0);

    const double v00 = s.at(i, j);
    const double v10 = s.at(i + 1, j);
    const double v01 = s.at(i, j + 1);
    const double v11 = s.at(i + 1, j + 1);
    return (1.0 - cu) * ((1.0 - cv) * v00 + cv * v01) + cu * ((1.0 - cv) * v10 + cv * v11);
}

void write_surface_csv(std::ostream& out, const ValueSurface& s,
                       const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << line << '\n';
    out << "x1,x2,value\n";
    char buf[96];
    for (std::size_t i = 0; i < s.grid.n1(); ++i) {
        for (std::size_t j = 0; j < s.grid.n2(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g", s.grid.x1_nodes[i],
                          s.grid.x2_nodes[j], s.at(i, j));
            out << buf << '\n';
        }
    }
}

} // namespace gmxb

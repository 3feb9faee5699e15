#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gmxb/grid.hpp"

using namespace gmxb;

TEST_CASE("default grid shape and refinement nesting") {
    const GridSpec g0 = default_grid(100.0, 0);
    CHECK(g0.n1() == 65);
    CHECK(g0.n2() == 65);
    CHECK(g0.x1_nodes.front() == 0.0);
    CHECK(g0.x1_max() == 2000.0);
    CHECK(g0.x2_max() == 2000.0);
    CHECK(std::count(g0.x1_nodes.begin(), g0.x1_nodes.end(), 100.0) == 1);

    const GridSpec g1 = default_grid(100.0, 1);
    CHECK(g1.n1() == 129);
    CHECK(g1.x1_max() == 2000.0);
    for (double v : g0.x1_nodes)
        CHECK(std::count(g1.x1_nodes.begin(), g1.x1_nodes.end(), v) == 1);

    // Scaling by the deposit carries the deposit node along.
    const GridSpec gs = default_grid(50.0, 0);
    CHECK(gs.x1_max() == 1000.0);
    CHECK(std::count(gs.x1_nodes.begin(), gs.x1_nodes.end(), 50.0) == 1);
}

TEST_CASE("interpolation is exact at the nodes") {
    const GridSpec g = default_grid(100.0, 0);
    ValueSurface s(g, TimeTag::interior(0.0));
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (double& v : s.values) v = u(gen);
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            CHECK(interpolate(s, {g.x1_nodes[i], g.x2_nodes[j]}) == s.at(i, j));
}

TEST_CASE("interpolation reproduces constants and bilinear functions") {
    const GridSpec g = default_grid(100.0, 0);
    ValueSurface c(g, TimeTag::interior(0.0));
    for (double& v : c.values) v = 4.25;

    ValueSurface lin(g, TimeTag::interior(0.0));
    for (std::size_t i = 0; i < g.n1(); ++i)
        for (std::size_t j = 0; j < g.n2(); ++j)
            lin.at(i, j) = g.x1_nodes[i] + 2.0 * g.x2_nodes[j];

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 2000.0);
    for (int rep = 0; rep < 500; ++rep) {
        const ContractState x{u(gen), u(gen)};
        CHECK(interpolate(c, x) == doctest::Approx(4.25).epsilon(1e-14));
        CHECK(interpolate(lin, x) == doctest::Approx(x.x1 + 2.0 * x.x2).epsilon(1e-12));
    }
}

TEST_CASE("interpolation is monotone and never overshoots the cell corners") {
    const GridSpec g = default_grid(100.0, 0);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    ValueSurface a(g, TimeTag::interior(0.0));
    ValueSurface b(g, TimeTag::interior(0.0));
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        a.values[k] = 10.0 * u(gen);
        b.values[k] = a.values[k] + u(gen); // b >= a nodewise
    }

    std::uniform_real_distribution<double> q(0.0, 2000.0);
    for (int rep = 0; rep < 500; ++rep) {
        const ContractState x{q(gen), q(gen)};
        const double va = interpolate(a, x);
        CHECK(va <= interpolate(b, x));
        CHECK(va <= 10.0);
        CHECK(va >= 0.0);
    }
}

TEST_CASE("queries outside the truncated domain are rejected") {
    const GridSpec g = default_grid(100.0, 0);
    const ValueSurface s(g, TimeTag::interior(0.0));
    CHECK_THROWS_AS(interpolate(s, {-1.0, 50.0}), std::domain_error);
    CHECK_THROWS_AS(interpolate(s, {50.0, 2200.0}), std::domain_error);
    CHECK_NOTHROW(interpolate(s, {2000.0, 0.0}));
}

TEST_CASE("grid invariants are enforced") {
    GridSpec g = default_grid(100.0, 0);
    CHECK_NOTHROW(g.validate());
    g.x1_nodes[0] = 1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = default_grid(100.0, 0);
    g.x2_nodes[3] = g.x2_nodes[2];
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_THROWS_AS(default_grid(100.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(default_grid(0.0, 0), std::invalid_argument);
}

TEST_CASE("surface CSV export schema") {
    GridSpec g;
    g.x1_nodes = {0.0, 1.0};
    g.x2_nodes = {0.0, 2.0, 4.0};
    ValueSurface s(g, TimeTag::minus(3));
    for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] = static_cast<double>(k);

    std::ostringstream out;
    write_surface_csv(out, s, {"# meta"});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# meta");
    std::getline(in, line);
    CHECK(line == "x1,x2,value");
    std::getline(in, line);
    CHECK(line == "0,0,0"); // row-major over x1 then x2
    std::getline(in, line);
    CHECK(line == "0,2,1");
    int rows = 2;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
}

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmxb/contracts.hpp"
#include "gmxb/grid.hpp"

namespace gmxb {

// How the per-node supremum over actions is evaluated: a linear search over a
// uniform partition of the admissible interval (plus any certified candidate
// actions), or the finite candidate set alone.
struct SearchMode {
    enum class Kind { Dense, ExtremePoints };
    Kind kind = Kind::Dense;
    int partition = 201;           // dense partition size p >= 2
    bool allow_uncertified = false; // permit extreme points where not certified

    static SearchMode dense(int p = 201) { return {Kind::Dense, p, false}; }
    static SearchMode extreme_points(bool allow_uncertified = false) {
        return {Kind::ExtremePoints, 201, allow_uncertified};
    }
    void validate() const {
        if (kind == Kind::Dense && partition < 2)
            throw std::invalid_argument("search: partition must be >= 2");
    }
};

// Raised when the extreme-point search is requested at an anniversary where
// the finite-candidate reduction is not certified.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// Optimal action and achieved value at every grid node for one anniversary.
struct ControlMap {
    GridSpec grid;
    std::vector<double> lambda_star;
    std::vector<double> value;
    int anniversary = -1;

    double lambda_at(std::size_t i, std::size_t j) const { return lambda_star[grid.index(i, j)]; }
    double value_at(std::size_t i, std::size_t j) const { return value[grid.index(i, j)]; }
};

struct ExerciseResult {
    ValueSurface v_minus;
    ControlMap map;
};

// Apply the exercise-time supremum at anniversary n, producing the surface
// immediately before the exercise from the one immediately after it:
//
//   v_minus(x) = max over evaluated lambda of
//                interpolate(v_plus, clamp(post-state)) + cash.
//
// Post-event positions are clamped to the truncated domain before lookup.
// Ties are broken towards the smallest action within a relative tolerance of
// 1e-9. Per-node optimizations are independent and the parallel and serial
// variants return bitwise-identical results.
ExerciseResult apply_exercise(const ValueSurface& v_plus, const Contract& contract, int n,
                              const SearchMode& mode);
ExerciseResult apply_exercise_serial(const ValueSurface& v_plus, const Contract& contract, int n,
                                     const SearchMode& mode);

// Dense-search value minus extreme-point value at every node; nonnegative by
// construction wherever the dense partition contains the candidate actions.
// Evaluates the extreme points even where uncertified.
std::vector<double> bang_bang_gap(const ValueSurface& v_plus, const Contract& contract, int n,
                                  int p);

// CSV export "x1,x2,lambda_star,scaled_withdrawal,value". The fourth column is
// lambda*x2 for fraction-of-benefit contracts and a categorical label
// (nonwithdrawal / contract-rate / surrender / fractional) for the lifelong
// guarantee.
void write_control_map_csv(std::ostream& out, const ControlMap& map, const Contract& contract,
                           const std::vector<std::string>& metadata = {});

} // namespace gmxb

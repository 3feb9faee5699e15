#include "gmxb/exercise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace gmxb {

namespace {

ContractState clamp_to_domain(ContractState s, const GridSpec& g) {
    return {std::clamp(s.x1, 0.0, g.x1_max()), std::clamp(s.x2, 0.0, g.x2_max())};
}

// Evaluated actions at one node, ascending and deduplicated.
void build_actions(std::vector<double>& out, const Contract& contract, ContractState x, int n,
                   const SearchMode& mode) {
    out.clear();
    if (mode.kind == SearchMode::Kind::ExtremePoints) {
        CandidateSet cs = contract.candidate_set(x, n);
        out = std::move(cs.lambdas);
    } else {
        const AdmissibleInterval iv = contract.admissible();
        const int p = mode.partition;
        for (int k = 0; k < p; ++k)
            out.push_back(iv.lo + (iv.hi - iv.lo) * static_cast<double>(k) /
                                      static_cast<double>(p - 1));
        CandidateSet cs = contract.candidate_set(x, n);
        if (cs.certified)
            out.insert(out.end(), cs.lambdas.begin(), cs.lambdas.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

struct NodeResult {
    double value;
    double lambda;
};

NodeResult optimize_node(const ValueSurface& v_plus, const Contract& contract, ContractState x,
                         int n, const std::vector<double>& actions,
                         std::vector<double>& scratch) {
    scratch.clear();
    for (double lam : actions) {
        const EventOutcome ev = contract.event(x, n, lam);
        const ContractState post = clamp_to_domain(ev.state, v_plus.grid);
        scratch.push_back(interpolate(v_plus, post) + ev.cash);
    }
    double best = scratch[0];
    for (double v : scratch) best = std::max(best, v);
    const double tol = 1e-9 * (1.0 + std::fabs(best));
    for (std::size_t k = 0; k < scratch.size(); ++k)
        if (scratch[k] >= best - tol) return {best, actions[k]};
    return {best, actions.back()}; // unreachable
}

ExerciseResult apply_exercise_impl(const ValueSurface& v_plus, const Contract& contract, int n,
                                   const SearchMode& mode, bool parallel) {
    mode.validate();
    if (v_plus.tag.kind != TimeTag::Kind::Plus || v_plus.tag.anniversary != n)
        throw std::invalid_argument("exercise: surface is not tagged immediately after n");
    if (mode.kind == SearchMode::Kind::ExtremePoints && !mode.allow_uncertified &&
        !contract.bang_bang_certified(n))
        throw CertificationError(std::string("exercise: bang-bang not certified for ") +
                                 contract.kind() + " at anniversary " + std::to_string(n));

    const GridSpec& g = v_plus.grid;
    ExerciseResult res{ValueSurface(g, TimeTag::minus(n)),
                       ControlMap{g, std::vector<double>(g.size(), 0.0),
                                  std::vector<double>(g.size(), 0.0), n}};

    const auto run_node = [&](std::size_t i, std::size_t j, std::vector<double>& actions,
                              std::vector<double>& scratch) {
        const ContractState x{g.x1_nodes[i], g.x2_nodes[j]};
        build_actions(actions, contract, x, n, mode);
        const NodeResult r = optimize_node(v_plus, contract, x, n, actions, scratch);
        res.v_minus.at(i, j) = r.value;
        res.map.lambda_star[g.index(i, j)] = r.lambda;
        res.map.value[g.index(i, j)] = r.value;
    };

    const long long total = static_cast<long long>(g.size());
    if (parallel) {
#pragma omp parallel
        {
            std::vector<double> actions, scratch;
#pragma omp for schedule(static)
            for (long long k = 0; k < total; ++k)
                run_node(static_cast<std::size_t>(k) / g.n2(),
                         static_cast<std::size_t>(k) % g.n2(), actions, scratch);
        }
    } else {
        std::vector<double> actions, scratch;
        for (long long k = 0; k < total; ++k)
            run_node(static_cast<std::size_t>(k) / g.n2(), static_cast<std::size_t>(k) % g.n2(),
                     actions, scratch);
    }
    return res;
}

} // namespace

ExerciseResult apply_exercise(const ValueSurface& v_plus, const Contract& contract, int n,
                              const SearchMode& mode) {
    return apply_exercise_impl(v_plus, contract, n, mode, true);
}

ExerciseResult apply_exercise_serial(const ValueSurface& v_plus, const Contract& contract, int n,
                                     const SearchMode& mode) {
    return apply_exercise_impl(v_plus, contract, n, mode, false);
}

std::vector<double> bang_bang_gap(const ValueSurface& v_plus, const Contract& contract, int n,
                                  int p) {
    const ExerciseResult dense = apply_exercise(v_plus, contract, n, SearchMode::dense(p));
    const ExerciseResult extreme =
        apply_exercise(v_plus, contract, n, SearchMode::extreme_points(true));
    std::vector<double> gap(dense.v_minus.values.size());
    for (std::size_t k = 0; k < gap.size(); ++k)
        gap[k] = dense.v_minus.values[k] - extreme.v_minus.values[k];
    return gap;
}

void write_control_map_csv(std::ostream& out, const ControlMap& map, const Contract& contract,
                           const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << line << '\n';
    out << "x1,x2,lambda_star,scaled_withdrawal,value\n";
    const bool lifelong = std::string(contract.kind()) == "glwb";
    char buf[160];
    for (std::size_t i = 0; i < map.grid.n1(); ++i) {
        for (std::size_t j = 0; j < map.grid.n2(); ++j) {
            const double lam = map.lambda_at(i, j);
            if (lifelong) {
                const char* label = lam == 0.0   ? "nonwithdrawal"
                                    : lam == 1.0 ? "contract-rate"
                                    : lam == 2.0 ? "surrender"
                                                 : "fractional";
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%s,%.12g",
                              map.grid.x1_nodes[i], map.grid.x2_nodes[j], lam, label,
                              map.value_at(i, j));
            } else {
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g",
                              map.grid.x1_nodes[i], map.grid.x2_nodes[j], lam,
                              lam * map.grid.x2_nodes[j], map.value_at(i, j));
            }
            out << buf << '\n';
        }
    }
}

} // namespace gmxb

#include "gmxb/contracts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gmxb {

namespace {

void check_state(ContractState x) {
    if (!(x.x1 >= 0.0) || !(x.x2 >= 0.0))
        throw std::invalid_argument("contract: state components must be nonnegative");
}

} // namespace

void GlwbSpec::validate() const {
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("glwb: delta must be in [0,1]");
    if (beta < 0.0) throw std::invalid_argument("glwb: beta must be >= 0");
    if (expiry <= 0) throw std::invalid_argument("glwb: expiry must be positive");
    if (w0 < 0.0) throw std::invalid_argument("glwb: w0 must be >= 0");
    for (const auto& [n, k] : penalties)
        if (k < 0.0 || k > 1.0) throw std::invalid_argument("glwb: penalty must be in [0,1]");
}

void GmwbSpec::validate() const {
    if (G < 0.0) throw std::invalid_argument("gmwb: G must be >= 0");
    if (expiry <= 0) throw std::invalid_argument("gmwb: expiry must be positive");
    if (w0 < 0.0) throw std::invalid_argument("gmwb: w0 must be >= 0");
    for (const auto& [n, k] : penalties)
        if (k < 0.0 || k > 1.0) throw std::invalid_argument("gmwb: penalty must be in [0,1]");
}

EventOutcome glwb_event(const GlwbSpec& spec, const MortalityModel& mortality, ContractState x,
                        int n, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 2.0))
        throw std::domain_error("glwb_event: lambda must be in [0,2]");
    check_state(x);

    const double survivors = mortality.survival(static_cast<double>(n));
    const bool ratchet = spec.ratchet_at(n);

    if (lambda == 0.0) {
        // Nonwithdrawal: bonus on the benefit, stepped up to the account on
        // ratchet anniversaries.
        const double bonus = x.x2 * (1.0 + spec.beta);
        const double nx2 = ratchet ? std::max(bonus, x.x1) : bonus;
        return {{x.x1, nx2}, 0.0};
    }

    // Withdrawal at or below the contract rate.
    auto at_or_below = [&](double lam) -> EventOutcome {
        const double w = lam * spec.delta * x.x2;
        const double nx1 = std::max(x.x1 - w, 0.0);
        const double nx2 = ratchet ? std::max(x.x2, nx1) : x.x2;
        return {{nx1, nx2}, survivors * w};
    };

    if (lambda <= 1.0) return at_or_below(lambda);

    // Partial or full surrender: cash for the excess account at the penalty
    // rate, state scaled linearly down to (0, 0) at lambda = 2.
    const double kappa = spec.penalty(n);
    const double excess = std::max(x.x1 - spec.delta * x.x2, 0.0);
    const double cash =
        survivors * (spec.delta * x.x2 + (lambda - 1.0) * (1.0 - kappa) * excess);
    const EventOutcome full = at_or_below(1.0);
    const double scale = 2.0 - lambda;
    return {{scale * full.state.x1, scale * full.state.x2}, cash};
}

EventOutcome gmwb_event(const GmwbSpec& spec, ContractState x, int n, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::domain_error("gmwb_event: lambda must be in [0,1]");
    check_state(x);

    const double w = lambda * x.x2;
    const double free_cap = std::min(spec.G, x.x2);
    double cash;
    if (w <= free_cap) {
        cash = w;
    } else {
        cash = spec.G + (1.0 - spec.penalty(n)) * (w - spec.G);
    }
    return {{std::max(x.x1 - w, 0.0), (1.0 - lambda) * x.x2}, cash};
}

double glwb_payoff(ContractState x) {
    check_state(x);
    return 0.0; // nothing is owed once the whole cohort has died
}

double gmwb_payoff(const GmwbSpec& spec, ContractState x) {
    check_state(x);
    const double kappa_n = spec.penalty(spec.expiry);
    return std::max(x.x1, (1.0 - kappa_n) * x.x2);
}

CandidateSet glwb_candidate_set() {
    // Nonwithdrawal, withdrawal at exactly the contract rate, full surrender.
    return {{0.0, 1.0, 2.0}, true};
}

CandidateSet gmwb_candidate_set(const GmwbSpec& spec, ContractState x, int n) {
    check_state(x);
    if (x.x2 <= 0.0) return {{0.0}, true}; // all actions coincide
    CandidateSet cs;
    cs.lambdas.push_back(0.0);
    const double mid = std::min(spec.G / x.x2, 1.0);
    if (mid > 0.0 && mid < 1.0) cs.lambdas.push_back(mid);
    cs.lambdas.push_back(1.0);
    // The reduction to these points requires the cash flow to be linear in the
    // position, which holds only without a penalty (or with G = 0).
    cs.certified = (spec.penalty(n) == 0.0 || spec.G == 0.0);
    return cs;
}

GlwbContract::GlwbContract(GlwbSpec spec, MarketModel market, MortalityModel mortality)
    : spec_(std::move(spec)), market_(market), mortality_(std::move(mortality)) {
    validate();
}

void GlwbContract::validate() const {
    spec_.validate();
    market_.validate();
    // The zero payoff at expiry presumes the cohort has fully run off. Tables
    // that never reach zero survival (e.g. zero hazard) are accepted as-is.
    if (mortality_.has_cutoff() &&
        static_cast<double>(spec_.expiry) + 1e-9 < mortality_.t_star())
        throw std::invalid_argument("glwb: expiry must be at or after the mortality cutoff");
}

GmwbContract::GmwbContract(GmwbSpec spec, MarketModel market)
    : spec_(std::move(spec)), market_(market) {
    validate();
}

void GmwbContract::validate() const {
    spec_.validate();
    market_.validate();
}

} // namespace gmxb

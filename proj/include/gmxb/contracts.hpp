#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "gmxb/mortality.hpp"
#include "gmxb/types.hpp"

namespace gmxb {

// Post-event position and the cash paid writer -> holder.
struct EventOutcome {
    ContractState state;
    double cash = 0.0;
};

// Interval of allowed actions at an exercise time.
struct AdmissibleInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Finite action list on which the exercise-time supremum is attained when the
// surface entering the exercise is convex and monotone. `certified` records
// whether that reduction is justified at this anniversary and position.
struct CandidateSet {
    std::vector<double> lambdas;
    bool certified = false;
};

// Lifelong withdrawal guarantee. Actions lambda in [0, 2]: 0 = nonwithdrawal
// (bonus applies), (0, 1] = withdrawal up to the contract rate, (1, 2] =
// partial/full surrender of the remaining account at the penalty rate.
struct GlwbSpec {
    double delta = 0.0; // contract withdrawal rate (fraction of benefit per year)
    double beta = 0.0;  // bonus rate applied to the benefit on nonwithdrawal
    std::map<int, double> penalties; // anniversary -> kappa_n; absent entries are 0
    std::set<int> ratchets;          // anniversaries on which the benefit steps up
    int expiry = 0;                  // years; annual anniversaries 0 .. expiry-1
    double w0 = 0.0;                 // initial deposit (both accounts start here)

    double penalty(int n) const {
        auto it = penalties.find(n);
        return it == penalties.end() ? 0.0 : it->second;
    }
    bool ratchet_at(int n) const { return ratchets.count(n) != 0; }
    void validate() const;
};

// Return-of-premium withdrawal guarantee. Actions lambda in [0, 1]: the holder
// withdraws lambda*x2; amounts above min(G, x2) incur the penalty rate.
struct GmwbSpec {
    double G = 0.0;                  // penalty-free withdrawal amount per anniversary
    std::map<int, double> penalties; // anniversary -> kappa_n, including the expiry
    int expiry = 0;
    double w0 = 0.0;

    double penalty(int n) const {
        auto it = penalties.find(n);
        return it == penalties.end() ? 0.0 : it->second;
    }
    void validate() const;
};

EventOutcome glwb_event(const GlwbSpec& spec, const MortalityModel& mortality, ContractState x,
                        int n, double lambda);
EventOutcome gmwb_event(const GmwbSpec& spec, ContractState x, int n, double lambda);

double glwb_payoff(ContractState x);
double gmwb_payoff(const GmwbSpec& spec, ContractState x);

CandidateSet glwb_candidate_set();
CandidateSet gmwb_candidate_set(const GmwbSpec& spec, ContractState x, int n);

// Contract-agnostic view used by the exercise optimizer, pricer and the Monte
// Carlo policy evaluator: terminal payoff, per-anniversary event, candidate
// actions, and the rate multiplying x1 in the funding PDE's source term.
class Contract {
public:
    virtual ~Contract() = default;

    virtual const char* kind() const = 0;
    virtual int expiry() const = 0;
    virtual double initial_deposit() const = 0;
    virtual AdmissibleInterval admissible() const = 0;
    virtual EventOutcome event(ContractState x, int n, double lambda) const = 0;
    virtual double payoff(ContractState x) const = 0;
    virtual CandidateSet candidate_set(ContractState x, int n) const = 0;
    // True when the extreme-point search is provably equivalent to the dense
    // search at anniversary n (given a convex, monotone surface).
    virtual bool bang_bang_certified(int n) const = 0;
    virtual double source_rate(double t) const = 0; // source term is rate(t) * x1
    virtual double boundary_payoff_slope() const = 0; // payoff / x1 as x1 -> inf

    ExerciseSchedule schedule() const { return ExerciseSchedule::annual(expiry()); }
    virtual void validate() const = 0;
};

class GlwbContract final : public Contract {
public:
    GlwbContract(GlwbSpec spec, MarketModel market, MortalityModel mortality);

    const char* kind() const override { return "glwb"; }
    int expiry() const override { return spec_.expiry; }
    double initial_deposit() const override { return spec_.w0; }
    AdmissibleInterval admissible() const override { return {0.0, 2.0}; }
    EventOutcome event(ContractState x, int n, double lambda) const override {
        return glwb_event(spec_, mortality_, x, n, lambda);
    }
    double payoff(ContractState x) const override { return glwb_payoff(x); }
    CandidateSet candidate_set(ContractState, int) const override { return glwb_candidate_set(); }
    bool bang_bang_certified(int) const override { return true; }
    double source_rate(double t) const override { return mortality_.hazard_rate(t); }
    double boundary_payoff_slope() const override { return 0.0; }
    void validate() const override;

    const GlwbSpec& spec() const { return spec_; }
    const MortalityModel& mortality() const { return mortality_; }

private:
    GlwbSpec spec_;
    MarketModel market_;
    MortalityModel mortality_;
};

class GmwbContract final : public Contract {
public:
    GmwbContract(GmwbSpec spec, MarketModel market);

    const char* kind() const override { return "gmwb"; }
    int expiry() const override { return spec_.expiry; }
    double initial_deposit() const override { return spec_.w0; }
    AdmissibleInterval admissible() const override { return {0.0, 1.0}; }
    EventOutcome event(ContractState x, int n, double lambda) const override {
        return gmwb_event(spec_, x, n, lambda);
    }
    double payoff(ContractState x) const override { return gmwb_payoff(spec_, x); }
    CandidateSet candidate_set(ContractState x, int n) const override {
        return gmwb_candidate_set(spec_, x, n);
    }
    bool bang_bang_certified(int n) const override {
        return spec_.penalty(n) == 0.0 || spec_.G == 0.0;
    }
    double source_rate(double) const override { return 0.0; }
    double boundary_payoff_slope() const override { return 1.0; }
    void validate() const override;

    const GmwbSpec& spec() const { return spec_; }

private:
    GmwbSpec spec_;
    MarketModel market_;
};

} // namespace gmxb

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gmxb {

// Risk-neutral market parameters. Rates are per year, volatility per sqrt(year).
struct MarketModel {
    double sigma = 0.0; // volatility of the investment account
    double r = 0.0;     // risk-free rate
    double alpha = 0.0; // hedging fee continuously deducted from the account

    void validate() const {
        if (!(std::isfinite(sigma) && std::isfinite(r) && std::isfinite(alpha)))
            throw std::invalid_argument("market: parameters must be finite");
        if (sigma < 0.0) throw std::invalid_argument("market: sigma must be >= 0");
        if (alpha < 0.0) throw std::invalid_argument("market: alpha must be >= 0");
    }
};

// Contract position: investment account and withdrawal benefit, both >= 0.
struct ContractState {
    double x1 = 0.0; // investment account
    double x2 = 0.0; // withdrawal benefit
};

// Deterministic exercise dates t_0 < t_1 < ... < t_{N-1} < expiry.
struct ExerciseSchedule {
    std::vector<double> times;
    double expiry = 0.0;

    static ExerciseSchedule annual(int n_anniversaries) {
        ExerciseSchedule s;
        s.times.reserve(static_cast<std::size_t>(n_anniversaries));
        for (int n = 0; n < n_anniversaries; ++n) s.times.push_back(static_cast<double>(n));
        s.expiry = static_cast<double>(n_anniversaries);
        return s;
    }

    void validate() const {
        if (times.empty()) throw std::invalid_argument("schedule: no exercise times");
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            if (!(times[k] < times[k + 1]))
                throw std::invalid_argument("schedule: times must be strictly increasing");
        if (!(times.back() < expiry))
            throw std::invalid_argument("schedule: all exercise times must precede expiry");
    }
};

} // namespace gmxb

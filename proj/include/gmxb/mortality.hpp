#pragma once

#include <limits>
#include <string>
#include <vector>

namespace gmxb {

// Piecewise-constant mortality rate M(t) with exact survival
//
//   R(t) = 1 - integral_0^t M(s) ds,  clamped to [0, 1].
//
// M(t)*dt is the fraction of the original cohort dying in [t, t+dt], so R is
// piecewise linear and can be evaluated in closed form. The cutoff t* is the
// first time R reaches zero (+infinity if the table never kills everyone).
class MortalityModel {
public:
    struct Segment {
        double start; // years from inception; covers [start, next start)
        double rate;  // deaths per year as a fraction of the original cohort
    };

    // Zero hazard: R(t) = 1 for all t.
    MortalityModel() = default;

    // Segments must have strictly increasing starts and nonnegative rates.
    // Starts are shifted so the first segment begins at t = 0. The final
    // segment spans the same length as its predecessor (one year if alone).
    explicit MortalityModel(std::vector<Segment> segments);

    static MortalityModel constant(double rate, double t_end);

    // Plain-text table, header line "# annual_hazard", records "age_start rate".
    static MortalityModel from_file(const std::string& path);
    static MortalityModel parse(const std::string& text, const std::string& origin = "<string>");

    // Synthetic Gompertz-Makeham annual table for a holder aged 65, truncated
    // so that R reaches zero exactly 57 years out (age 122).
    static MortalityModel bundled_age65();

    double survival(double t) const;    // R(t); throws std::domain_error for t < 0
    double hazard_rate(double t) const; // M(t), right-continuous; 0 past the cutoff

    // First time R(t) = 0, or +infinity when the table never reaches zero.
    double t_star() const { return t_star_; }
    bool has_cutoff() const { return t_star_ < std::numeric_limits<double>::infinity(); }

    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<Segment> segments_;
    std::vector<double> cum_;   // integral of M at segment starts
    double coverage_end_ = 0.0; // hazard is 0 beyond this time
    double t_star_ = std::numeric_limits<double>::infinity();

    void finalize();
};

} // namespace gmxb

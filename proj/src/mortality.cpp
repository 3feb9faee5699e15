#include "gmxb/mortality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gmxb {

MortalityModel::MortalityModel(std::vector<Segment> segments) : segments_(std::move(segments)) {
    finalize();
}

void MortalityModel::finalize() {
    if (segments_.empty()) return;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (!std::isfinite(segments_[k].start) || !std::isfinite(segments_[k].rate))
            throw std::invalid_argument("mortality: non-finite table entry");
        if (segments_[k].rate < 0.0)
            throw std::invalid_argument("mortality: negative hazard rate");
        if (k > 0 && !(segments_[k - 1].start < segments_[k].start))
            throw std::invalid_argument("mortality: segment starts must be strictly increasing");
    }

    // Shift so the table starts at t = 0 (tables may be keyed by age).
    const double offset = segments_.front().start;
    for (auto& s : segments_) s.start -= offset;

    const std::size_t m = segments_.size();
    double last_len = 1.0;
    if (m > 1) last_len = segments_[m - 1].start - segments_[m - 2].start;
    coverage_end_ = segments_.back().start + last_len;

    cum_.assign(m, 0.0);
    for (std::size_t k = 1; k < m; ++k) {
        const double len = segments_[k].start - segments_[k - 1].start;
        cum_[k] = cum_[k - 1] + segments_[k - 1].rate * len;
    }
    const double total = cum_.back() + segments_.back().rate * last_len;

    if (total >= 1.0) {
        // Locate the segment where the cumulative integral crosses 1.
        for (std::size_t k = 0; k < m; ++k) {
            const double end = (k + 1 < m) ? segments_[k + 1].start : coverage_end_;
            const double at_end = (k + 1 < m) ? cum_[k + 1] : total;
            if (at_end >= 1.0) {
                t_star_ = (segments_[k].rate > 0.0)
                              ? segments_[k].start + (1.0 - cum_[k]) / segments_[k].rate
                              : end;
                break;
            }
        }
    }
}

MortalityModel MortalityModel::constant(double rate, double t_end) {
    std::vector<Segment> seg;
    if (t_end <= 0.0) throw std::invalid_argument("mortality: t_end must be positive");
    // Two segments so the trailing one inherits a unit length only when t_end > 1.
    if (t_end > 1.0) {
        seg.push_back({0.0, rate});
        seg.push_back({t_end - 1.0, rate});
    } else {
        seg.push_back({0.0, rate});
    }
    return MortalityModel(std::move(seg));
}

double MortalityModel::survival(double t) const {
    if (t < 0.0) throw std::domain_error("mortality: survival requires t >= 0");
    if (t >= t_star_) return 0.0;
    if (segments_.empty()) return 1.0;
    if (t >= coverage_end_) {
        const double total =
            cum_.back() + segments_.back().rate * (coverage_end_ - segments_.back().start);
        return std::clamp(1.0 - total, 0.0, 1.0);
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.start; });
    const std::size_t k = static_cast<std::size_t>(it - segments_.begin()) - 1;
    const double integral = cum_[k] + segments_[k].rate * (t - segments_[k].start);
    return std::clamp(1.0 - integral, 0.0, 1.0);
}

double MortalityModel::hazard_rate(double t) const {
    if (t < 0.0) throw std::domain_error("mortality: hazard_rate requires t >= 0");
    if (t >= t_star_) return 0.0; // no survivors left to die
    if (segments_.empty() || t >= coverage_end_) return 0.0;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.start; });
    const std::size_t k = static_cast<std::size_t>(it - segments_.begin()) - 1;
    return segments_[k].rate;
}

MortalityModel MortalityModel::parse(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<Segment> seg;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            if (line.find("annual_hazard") != std::string::npos) header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        double start = 0.0, rate = 0.0;
        if (!(ls >> start >> rate))
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected \"age_start rate\"");
        seg.push_back({start, rate});
    }
    if (!header_seen)
        throw std::invalid_argument(origin + ": missing \"# annual_hazard\" header");
    if (seg.empty()) throw std::invalid_argument(origin + ": empty mortality table");
    return MortalityModel(std::move(seg));
}

MortalityModel MortalityModel::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("mortality: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

MortalityModel MortalityModel::bundled_age65() {
    // Gompertz-Makeham force of mortality mu(age) = A + B*c^age evaluated for a
    // cohort aged 65. The annual rate for year k is the fraction of the original
    // cohort dying in [k, k+1), i.e. S(k) - S(k+1) with
    //   S(t) = exp(-A*t - B*c^65*(c^t - 1)/ln c).
    // The last year is truncated so everyone remaining dies by t = 57 (age 122).
    // Population-style rates: ~1.3%/year at 65, median death near 84.
    constexpr double A = 5.0e-4;
    constexpr double B = 2.55e-5;
    constexpr double c = 1.10;
    constexpr int years = 57;
    const double lc = std::log(c);
    const double scale = B * std::pow(c, 65.0) / lc;
    auto S = [&](double t) { return std::exp(-A * t - scale * (std::pow(c, t) - 1.0)); };

    std::vector<Segment> seg;
    seg.reserve(years);
    double consumed = 0.0;
    for (int k = 0; k < years - 1; ++k) {
        const double rate = S(k) - S(k + 1);
        seg.push_back({static_cast<double>(k), rate});
        consumed += rate;
    }
    // Exact terminal year: the remaining mass dies, so R(57) = 0 in floating point.
    seg.push_back({static_cast<double>(years - 1), 1.0 - consumed});
    return MortalityModel(std::move(seg));
}

} // namespace gmxb

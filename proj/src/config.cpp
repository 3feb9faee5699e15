#include "gmxb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "gmxb/presets.hpp"

namespace gmxb {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got \"" + v + "\"");
    }
}

long long parse_integer(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got \"" + v + "\"");
    }
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where + ": expected true/false, got \"" + v + "\"");
}

// "1:0.03, 2:0.02" -> {1: 0.03, 2: 0.02}
std::map<int, double> parse_penalties(const std::string& v, const std::string& where) {
    std::map<int, double> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError(where + ": expected anniversary:rate entries");
        const int n = static_cast<int>(parse_integer(trim(item.substr(0, colon)), where));
        out[n] = parse_number(trim(item.substr(colon + 1)), where);
    }
    return out;
}

std::set<int> parse_int_set(const std::string& v, const std::string& where) {
    std::set<int> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.insert(static_cast<int>(parse_integer(item, where)));
    }
    return out;
}

} // namespace

RunConfig RunConfig::from_preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "glwb-table1") {
        const GlwbSetup s = preset_glwb_table1();
        c.kind = "glwb";
        c.w0 = s.spec.w0;
        c.expiry = s.spec.expiry;
        c.delta = s.spec.delta;
        c.beta = s.spec.beta;
        c.penalties = s.spec.penalties;
        c.ratchets = s.spec.ratchets;
        c.market = s.market;
        c.mortality_table = "bundled";
    } else if (name == "gmwb-table2") {
        const GmwbSetup s = preset_gmwb_table2();
        c.kind = "gmwb";
        c.w0 = s.spec.w0;
        c.expiry = s.spec.expiry;
        c.G = s.spec.G;
        c.penalties = s.spec.penalties;
        c.market = s.market;
    } else {
        throw ConfigError("unknown preset \"" + name + "\"");
    }
    c.source_text = "preset = " + name + "\n";
    return c;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
    RunConfig c;
    bool preset_applied = false;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string field = where + ": " + (section.empty() ? key : section + "." + key);

        if (section.empty() && key == "preset") {
            RunConfig base = from_preset(value);
            base.source_text.clear();
            c = std::move(base);
            preset_applied = true;
        } else if (section == "contract" && key == "kind") {
            if (value != "glwb" && value != "gmwb")
                throw ConfigError(field + ": kind must be glwb or gmwb");
            c.kind = value;
        } else if (section == "contract" && key == "w0") {
            c.w0 = parse_number(value, field);
        } else if (section == "contract" && key == "expiry") {
            c.expiry = static_cast<int>(parse_integer(value, field));
        } else if (section == "contract" && key == "delta") {
            c.delta = parse_number(value, field);
        } else if (section == "contract" && key == "beta") {
            c.beta = parse_number(value, field);
        } else if (section == "contract" && key == "G") {
            c.G = parse_number(value, field);
        } else if (section == "contract" && key == "penalties") {
            c.penalties = parse_penalties(value, field);
        } else if (section == "contract" && key == "ratchets") {
            c.ratchets = parse_int_set(value, field);
        } else if (section == "market" && key == "sigma") {
            c.market.sigma = parse_number(value, field);
        } else if (section == "market" && key == "r") {
            c.market.r = parse_number(value, field);
        } else if (section == "market" && key == "alpha") {
            c.market.alpha = parse_number(value, field);
        } else if (section == "mortality" && key == "table") {
            c.mortality_table = value;
        } else if (section == "grid" && key == "refinement") {
            c.refinement = static_cast<int>(parse_integer(value, field));
        } else if (section == "stepper" && key == "steps_per_year") {
            c.steps_per_year = static_cast<int>(parse_integer(value, field));
        } else if (section == "search" && key == "mode") {
            if (value != "dense" && value != "extreme")
                throw ConfigError(field + ": mode must be dense or extreme");
            c.search_mode = value;
        } else if (section == "search" && key == "partition") {
            c.partition = static_cast<int>(parse_integer(value, field));
        } else if (section == "search" && key == "allow_uncertified") {
            c.allow_uncertified = parse_bool(value, field);
        } else if (section == "mc" && key == "paths") {
            c.mc_paths = parse_integer(value, field);
        } else if (section == "mc" && key == "seed") {
            c.mc_seed = static_cast<std::uint64_t>(parse_integer(value, field));
        } else if (section == "mc" && key == "substeps_per_year") {
            c.mc_substeps = static_cast<int>(parse_integer(value, field));
        } else if (section == "run" && key == "threads") {
            c.threads = static_cast<int>(parse_integer(value, field));
        } else if (section == "run" && key == "output_dir") {
            c.output_dir = value;
        } else if (section == "run" && key == "retain_interior") {
            c.retain_interior = parse_bool(value, field);
        } else if (section == "slice" && key == "x1") {
            c.slice_x1 = parse_number(value, field);
        } else if (section == "slice" && key == "anniversary") {
            c.slice_anniversary = static_cast<int>(parse_integer(value, field));
        } else {
            throw ConfigError(field + ": unknown key");
        }
    }
    if (c.kind.empty() && !preset_applied)
        throw ConfigError(origin + ": contract.kind (or a preset) is required");
    c.source_text = text;
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void RunConfig::validate() const {
    if (kind != "glwb" && kind != "gmwb") throw ConfigError("contract.kind must be glwb or gmwb");
    if (expiry <= 0) throw ConfigError("contract.expiry must be positive");
    if (!(w0 > 0.0)) throw ConfigError("contract.w0 must be positive");
    if (refinement < 0 || refinement > 8) throw ConfigError("grid.refinement must be in [0,8]");
    if (steps_per_year < 1) throw ConfigError("stepper.steps_per_year must be >= 1");
    if (partition < 2) throw ConfigError("search.partition must be >= 2");
    if (mc_paths < 1) throw ConfigError("mc.paths must be >= 1");
    if (mc_substeps < 1) throw ConfigError("mc.substeps_per_year must be >= 1");
    if (threads < 0) throw ConfigError("run.threads must be >= 0");
}

MortalityModel RunConfig::make_mortality() const {
    if (mortality_table == "bundled") return MortalityModel::bundled_age65();
    try {
        return MortalityModel::from_file(mortality_table);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::unique_ptr<Contract> RunConfig::make_contract() const {
    try {
        if (kind == "glwb") {
            GlwbSpec s;
            s.delta = delta;
            s.beta = beta;
            s.penalties = penalties;
            s.ratchets = ratchets;
            s.expiry = expiry;
            s.w0 = w0;
            return std::make_unique<GlwbContract>(std::move(s), market, make_mortality());
        }
        GmwbSpec s;
        s.G = G;
        s.penalties = penalties;
        s.expiry = expiry;
        s.w0 = w0;
        return std::make_unique<GmwbContract>(std::move(s), market);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SearchMode RunConfig::make_search_mode() const {
    SearchMode m;
    m.kind = (search_mode == "extreme") ? SearchMode::Kind::ExtremePoints
                                        : SearchMode::Kind::Dense;
    m.partition = partition;
    m.allow_uncertified = allow_uncertified;
    return m;
}

StepperConfig RunConfig::make_stepper() const { return {steps_per_year}; }

McConfig RunConfig::make_mc() const { return {mc_paths, mc_seed, mc_substeps}; }

std::uint64_t RunConfig::config_hash() const {
    // FNV-1a over the configuration text.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : source_text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace gmxb

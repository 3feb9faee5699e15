#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

#include "gmxb/contracts.hpp"
#include "gmxb/diagnostics.hpp"
#include "gmxb/exercise.hpp"
#include "gmxb/pde.hpp"

namespace gmxb {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key-value run configuration with section headers:
//
//   preset = glwb-table1        # optional; fills defaults first
//   [contract]
//   kind = glwb
//   w0 = 100
//   ...
//
// '#' starts a comment. Keys outside a preset's defaults must be set
// explicitly; parse errors carry line and field diagnostics.
struct RunConfig {
    std::string preset; // "", "glwb-table1", "gmwb-table2"

    // [contract]
    std::string kind; // "glwb" | "gmwb"
    double w0 = 100.0;
    int expiry = 0;
    double delta = 0.0;
    double beta = 0.0;
    double G = 0.0;
    std::map<int, double> penalties;
    std::set<int> ratchets;

    // [market]
    MarketModel market;

    // [mortality]
    std::string mortality_table = "bundled"; // or a file path

    // [grid]
    int refinement = 0;

    // [stepper]
    int steps_per_year = 100;

    // [search]
    std::string search_mode = "dense"; // "dense" | "extreme"
    int partition = 201;
    bool allow_uncertified = false;

    // [mc]
    std::int64_t mc_paths = 1'000'000;
    std::uint64_t mc_seed = 1;
    int mc_substeps = 100;

    // [run]
    int threads = 0; // 0 = library default
    std::string output_dir = "out";
    bool retain_interior = false;

    // [slice]
    double slice_x1 = 100.0;
    int slice_anniversary = 0;

    std::string source_text; // exact text the config hash is derived from

    static RunConfig from_preset(const std::string& name);
    static RunConfig parse(const std::string& text, const std::string& origin = "<config>");
    static RunConfig from_file(const std::string& path);

    std::unique_ptr<Contract> make_contract() const;
    MortalityModel make_mortality() const;
    SearchMode make_search_mode() const;
    StepperConfig make_stepper() const;
    McConfig make_mc() const;
    std::uint64_t config_hash() const;

    void validate() const;
};

} // namespace gmxb

#pragma once

#include "gmxb/contracts.hpp"
#include "gmxb/types.hpp"

namespace gmxb {

// Bundled example contracts. "glwb-table1": triennially ratcheted lifelong
// guarantee on a 57-year horizon with the age-65 mortality table.
// "gmwb-table2": 10-year return-of-premium guarantee with a decaying penalty
// schedule.
struct GlwbSetup {
    GlwbSpec spec;
    MarketModel market;
    MortalityModel mortality;
};

struct GmwbSetup {
    GmwbSpec spec;
    MarketModel market;
};

GlwbSetup preset_glwb_table1();
GmwbSetup preset_gmwb_table2();

} // namespace gmxb

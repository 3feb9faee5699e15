#include "gmxb/presets.hpp"

namespace gmxb {

GlwbSetup preset_glwb_table1() {
    GlwbSetup s;
    s.spec.delta = 0.05;
    s.spec.beta = 0.06;
    s.spec.expiry = 57;
    s.spec.w0 = 100.0;
    s.spec.penalties = {{1, 0.03}, {2, 0.02}, {3, 0.01}};
    for (int n = 3; n < s.spec.expiry; n += 3) s.spec.ratchets.insert(n);
    s.market = {0.20, 0.04, 0.015};
    s.mortality = MortalityModel::bundled_age65();
    return s;
}

GmwbSetup preset_gmwb_table2() {
    GmwbSetup s;
    s.spec.G = 10.0;
    s.spec.expiry = 10;
    s.spec.w0 = 100.0;
    s.spec.penalties = {{1, 0.08}, {2, 0.07}, {3, 0.06}, {4, 0.05}, {5, 0.04}, {6, 0.03}};
    s.market = {0.15, 0.05, 0.01};
    return s;
}

} // namespace gmxb

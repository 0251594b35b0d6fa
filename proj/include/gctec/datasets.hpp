#pragma once

#include <string_view>

#include "dielectrics.hpp"

namespace gctec {

// Bundled tissue tables. Single-pole Debye fits valid over 100 kHz - 1 MHz,
// anchored to the published per-tissue conductivity and low-band permittivity
// spot values; kappa calibrated against the reference channel measurements.
inline constexpr std::string_view HUMAN_FOREARM_TABLE = R"(# human forearm, outermost layer first
band_hz 50000 2000000
name eps_s eps_inf tau_s sigma_s_per_m thickness_mm f_w kappa
skin 2287.3572858 70.5116782486 1.67976132114e-06 0.00045 1 0.50431726011 5294564.05125
fat 94.3520662925 2.21143505965 2.08323649577e-07 0.024 7 0.994328772946 515.253952679
muscle 2793819.29293 2926.36725233 3.69696740402e-05 0.36 15 0.00371840903273 6.33124562308
cortical_bone 1215.99253941 20 8.45582582627e-08 0.015055636785 20 0.298203153015 16.6377565708
)";

inline constexpr std::string_view PORCINE_LOIN_TABLE = R"(# porcine loin, outermost layer first (no bone layer)
band_hz 50000 2000000
name eps_s eps_inf tau_s sigma_s_per_m thickness_mm f_w kappa
skin 1914.21912137 70.5116782486 1.63951741191e-06 0.00016 1 0.0398871354604 1743.35339465
fat 99.6411586048 2.21143505965 2.08323649577e-07 0.03 7 0.994328772946 515.253952679
muscle 9923.14616556 2926.36725233 9.16917207398e-08 0.25 15 0.00371840903273 6.33124562308
)";

// Loads a bundled dataset by name, or parses a table file from disk.
inline TissueTable load_tissue_table(const std::string& source) {
    auto from_sv = [&](std::string_view sv) {
        std::istringstream is{std::string(sv)};
        return parse_tissue_table(is, source);
    };
    if (source == "human_forearm") return from_sv(HUMAN_FOREARM_TABLE);
    if (source == "porcine_loin") return from_sv(PORCINE_LOIN_TABLE);
    std::ifstream in(source);
    if (!in) throw ParseError("cannot open tissue table '" + source + "'");
    return parse_tissue_table(in, source);
}

} // namespace gctec

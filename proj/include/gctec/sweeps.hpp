#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dielectrics.hpp"
#include "network.hpp"
#include "path_impedance.hpp"

namespace gctec {

struct ModelConfig {
    TissueTable table;
    std::vector<std::string> stack;
    ChannelGeometry geom;
    ElectrodeConfig elec;
};

enum class SweepParam { frequency, fat_thickness, muscle_thickness, d, e_s_both, delta_l, e_l };

inline std::string sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::frequency: return "frequency";
        case SweepParam::fat_thickness: return "fat_thickness";
        case SweepParam::muscle_thickness: return "muscle_thickness";
        case SweepParam::d: return "d";
        case SweepParam::e_s_both: return "e_s_both";
        case SweepParam::delta_l: return "delta_l";
        case SweepParam::e_l: return "e_l";
    }
    return "?";
}

struct PathPlacement {
    std::string tx;
    std::string rx;
};

struct SweepSpec {
    ModelConfig base;
    SweepParam param = SweepParam::frequency;
    std::vector<double> values;          // SI units (Hz or m), strictly increasing
    std::vector<PathPlacement> paths;    // evaluated per value
    double freq_hz = 100e3;              // fixed frequency for non-frequency sweeps

    void validate() const {
        for (size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw ConfigError("sweep values must be strictly increasing");
        const double lo = (param == SweepParam::delta_l) ? -1e-300 : 0.0;
        for (double v : values)
            if (!(v > lo) && !(param == SweepParam::delta_l && v == 0.0))
                throw ConfigError("sweep value out of domain for " + sweep_param_name(param));
        if (paths.empty()) throw ConfigError("sweep needs at least one path");
    }
};

struct SweepRecord {
    double value;     // swept parameter value (SI units)
    GainPoint point;
};

struct SweepResult {
    SweepParam param;
    std::vector<SweepRecord> records;
};

namespace detail {

inline ModelConfig perturbed(const ModelConfig& base, SweepParam param, double value) {
    ModelConfig c = base;
    auto set_thickness = [&](const std::string& name) {
        for (auto& l : c.table.layers)
            if (l.name == name) { l.thickness = value; return; }
        throw ConfigError("sweep: tissue '" + name + "' not in table");
    };
    switch (param) {
        case SweepParam::frequency: break;
        case SweepParam::fat_thickness: set_thickness("fat"); break;
        case SweepParam::muscle_thickness: set_thickness("muscle"); break;
        case SweepParam::d: c.geom.d = value; break;
        case SweepParam::e_s_both: c.geom.e_st = c.geom.e_sr = value; break;
        case SweepParam::delta_l: c.geom.delta_l = value; break;
        case SweepParam::e_l:
            c.elec.e_l = value;
            c.elec.a_e = value * value;
            break;
    }
    return c;
}

} // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult out;
    out.param = spec.param;
    for (double v : spec.values) {
        ModelConfig c = detail::perturbed(spec.base, spec.param, v);
        const double f = (spec.param == SweepParam::frequency) ? v : spec.freq_hz;
        for (const auto& p : spec.paths) {
            c.geom.tx_layer = p.tx;
            c.geom.rx_layer = p.rx;
            out.records.push_back({v, channel_gain(c.table, c.stack, c.geom, c.elec, f)});
        }
    }
    return out;
}

// Default grids mirroring the reference parameter studies.
inline std::vector<double> default_grid(SweepParam p) {
    auto logspace = [](double lo, double hi, int n) {
        std::vector<double> v(n);
        for (int k = 0; k < n; ++k)
            v[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
        return v;
    };
    auto linspace = [](double lo, double hi, int n) {
        std::vector<double> v(n);
        for (int k = 0; k < n; ++k) v[k] = lo + (hi - lo) * k / (n - 1);
        return v;
    };
    switch (p) {
        case SweepParam::frequency: return logspace(100e3, 1e6, 51);  // 50 pts/decade
        case SweepParam::fat_thickness: return logspace(0.5e-3, 60e-3, 25);
        case SweepParam::muscle_thickness: return linspace(15e-3, 55e-3, 21);
        case SweepParam::d: return linspace(20e-3, 100e-3, 17);
        case SweepParam::e_s_both: return linspace(20e-3, 100e-3, 17);
        case SweepParam::delta_l: return {0.0, 10e-3, 20e-3, 40e-3};
        case SweepParam::e_l: return linspace(5e-3, 20e-3, 16);
    }
    return {};
}

inline std::vector<PathPlacement> all_paths() {
    return {{"skin", "skin"}, {"skin", "muscle"}, {"muscle", "skin"}, {"muscle", "muscle"}};
}

inline SweepResult frequency_sweep(SweepSpec spec) {
    spec.param = SweepParam::frequency;
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

inline SweepResult thickness_sweep(SweepSpec spec) {
    if (spec.param != SweepParam::fat_thickness && spec.param != SweepParam::muscle_thickness)
        throw ConfigError("thickness_sweep: param must be fat_thickness or muscle_thickness");
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

inline SweepResult distance_sweep(SweepSpec spec) {
    spec.param = SweepParam::d;
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

inline SweepResult separation_sweep(SweepSpec spec) {
    spec.param = SweepParam::e_s_both;
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

inline SweepResult misalignment_sweep(SweepSpec spec) {
    spec.param = SweepParam::delta_l;
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

inline SweepResult electrode_size_sweep(SweepSpec spec) {
    spec.param = SweepParam::e_l;
    if (spec.values.empty()) spec.values = default_grid(spec.param);
    return run_sweep(spec);
}

// All four placements on the identical stack at each requested frequency.
inline std::vector<GainPoint> path_comparison(const ModelConfig& base,
                                              const std::vector<double>& freqs) {
    std::vector<GainPoint> out;
    for (double f : freqs) {
        for (const auto& p : all_paths()) {
            ModelConfig c = base;
            c.geom.tx_layer = p.tx;
            c.geom.rx_layer = p.rx;
            out.push_back(channel_gain(c.table, c.stack, c.geom, c.elec, f));
        }
    }
    return out;
}

} // namespace gctec

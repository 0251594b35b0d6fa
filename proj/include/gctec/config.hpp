#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "datasets.hpp"
#include "dielectrics.hpp"
#include "path_impedance.hpp"
#include "sweeps.hpp"

namespace gctec {

using json = nlohmann::ordered_json;

// Resolved run configuration. Length fields keep their declared units (mm)
// so that parse -> serialize -> parse round-trips exactly; SI conversion
// happens when the model config is built.
struct RunConfig {
    std::string tissue_table = "human_forearm";
    std::vector<std::string> stack;                 // default: table layer order
    std::map<std::string, double> thickness_mm;     // per-tissue overrides
    double d_mm = 100.0;
    double e_st_mm = 50.0;
    double e_sr_mm = 50.0;
    double delta_l_mm = 0.0;
    double e_l_mm = 10.0;
    std::optional<double> a_e_mm2;                  // default e_l^2
    double k1 = DEFAULT_K1;
    double k2 = DEFAULT_K2;
    double m = DEFAULT_M;
    double m_prime = DEFAULT_M_PRIME;
    std::optional<double> f_w;                      // global override
    std::string path = "all";                       // ss|sm|ms|mm|all
    double freq_hz = 100e3;
    // sweep (optional)
    bool has_sweep = false;
    std::string sweep_param;
    double sweep_start = 0.0;                       // declared units (hz or mm)
    double sweep_stop = 0.0;
    int sweep_count = 0;
    bool sweep_log = false;
    // safety
    double drive_ma = 1.0;
    double contact_limit_ma = 1.0;
    double density_limit_ma_per_m2 = 25.0;
    // output
    std::string out_dir = ".";
    bool plot = false;
    bool strict = false;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& known,
                           const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ValidationError("config: unknown field '" + ctx + it.key() + "'");
}

inline double require_number(const json& v, const std::string& field) {
    if (!v.is_number())
        throw ValidationError("config: field '" + field + "' must be a number");
    return v.get<double>();
}

inline double positive(double v, const std::string& field) {
    if (!(v > 0.0))
        throw ValidationError("config: field '" + field + "' must be > 0");
    return v;
}

} // namespace detail

inline std::vector<PathPlacement> resolve_paths(const std::string& sel) {
    if (sel == "all") return all_paths();
    if (sel == "ss") return {{"skin", "skin"}};
    if (sel == "sm") return {{"skin", "muscle"}};
    if (sel == "ms") return {{"muscle", "skin"}};
    if (sel == "mm") return {{"muscle", "muscle"}};
    throw ValidationError("config: field 'path' must be one of ss|sm|ms|mm|all");
}

inline SweepParam sweep_param_from_name(const std::string& name) {
    for (SweepParam p : {SweepParam::frequency, SweepParam::fat_thickness,
                         SweepParam::muscle_thickness, SweepParam::d, SweepParam::e_s_both,
                         SweepParam::delta_l, SweepParam::e_l})
        if (sweep_param_name(p) == name) return p;
    throw ValidationError("config: unknown sweep parameter '" + name + "'");
}

inline RunConfig parse_config_json(const json& j) {
    if (!j.is_object()) throw ParseError("config: top level must be an object");
    RunConfig c;
    detail::reject_unknown(j, {"tissue_table", "stack", "thickness_mm", "d_mm", "e_st_mm",
                               "e_sr_mm", "delta_l_mm", "e_l_mm", "a_e_mm2", "k1", "k2",
                               "m", "m_prime", "f_w", "path", "freq_hz", "sweep", "safety",
                               "output"},
                          "");
    if (j.contains("tissue_table")) c.tissue_table = j["tissue_table"].get<std::string>();
    if (j.contains("stack")) c.stack = j["stack"].get<std::vector<std::string>>();
    if (j.contains("thickness_mm")) {
        for (auto it = j["thickness_mm"].begin(); it != j["thickness_mm"].end(); ++it)
            c.thickness_mm[it.key()] = detail::positive(
                detail::require_number(it.value(), "thickness_mm." + it.key()),
                "thickness_mm." + it.key());
    }
    auto num = [&](const char* k, double& slot, bool pos = true) {
        if (j.contains(k)) {
            slot = detail::require_number(j[k], k);
            if (pos) detail::positive(slot, k);
        }
    };
    num("d_mm", c.d_mm);
    num("e_st_mm", c.e_st_mm);
    num("e_sr_mm", c.e_sr_mm);
    if (j.contains("delta_l_mm")) {
        c.delta_l_mm = detail::require_number(j["delta_l_mm"], "delta_l_mm");
        if (c.delta_l_mm < 0.0)
            throw ValidationError("config: field 'delta_l_mm' must be >= 0");
    }
    num("e_l_mm", c.e_l_mm);
    if (j.contains("a_e_mm2"))
        c.a_e_mm2 = detail::positive(detail::require_number(j["a_e_mm2"], "a_e_mm2"), "a_e_mm2");
    num("k1", c.k1);
    if (j.contains("k2")) {
        c.k2 = detail::require_number(j["k2"], "k2");
        if (!(c.k2 > 0.0 && c.k2 < 1.0))
            throw ValidationError("config: field 'k2' must be in (0,1)");
    }
    if (j.contains("m")) c.m = detail::require_number(j["m"], "m");
    if (j.contains("m_prime")) c.m_prime = detail::require_number(j["m_prime"], "m_prime");
    if (j.contains("f_w"))
        c.f_w = detail::positive(detail::require_number(j["f_w"], "f_w"), "f_w");
    if (j.contains("path")) {
        c.path = j["path"].get<std::string>();
        resolve_paths(c.path);  // validates
    }
    num("freq_hz", c.freq_hz);

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        detail::reject_unknown(s, {"param", "start_hz", "stop_hz", "start_mm", "stop_mm",
                                   "count", "log"},
                              "sweep.");
        c.has_sweep = true;
        if (!s.contains("param"))
            throw ValidationError("config: field 'sweep.param' is required");
        c.sweep_param = s["param"].get<std::string>();
        const SweepParam p = sweep_param_from_name(c.sweep_param);
        const bool is_freq = (p == SweepParam::frequency);
        const char* start_key = is_freq ? "start_hz" : "start_mm";
        const char* stop_key = is_freq ? "stop_hz" : "stop_mm";
        if (s.contains(is_freq ? "start_mm" : "start_hz") ||
            s.contains(is_freq ? "stop_mm" : "stop_hz"))
            throw ValidationError(std::string("config: sweep '") + c.sweep_param +
                                  "' wants " + start_key + "/" + stop_key);
        if (!s.contains(start_key) || !s.contains(stop_key) || !s.contains("count"))
            throw ValidationError(std::string("config: sweep needs ") + start_key + ", " +
                                  stop_key + " and count");
        c.sweep_start = detail::require_number(s[start_key], start_key);
        c.sweep_stop = detail::require_number(s[stop_key], stop_key);
        c.sweep_count = s["count"].get<int>();
        if (c.sweep_count < 1)
            throw ValidationError("config: field 'sweep.count' must be >= 1");
        c.sweep_log = s.contains("log") ? s["log"].get<bool>() : is_freq;
    }

    if (j.contains("safety")) {
        const json& s = j["safety"];
        detail::reject_unknown(s, {"drive_ma", "contact_limit_ma", "density_limit_ma_per_m2"},
                              "safety.");
        if (s.contains("drive_ma"))
            c.drive_ma = detail::positive(detail::require_number(s["drive_ma"], "drive_ma"),
                                          "safety.drive_ma");
        if (s.contains("contact_limit_ma"))
            c.contact_limit_ma = detail::positive(
                detail::require_number(s["contact_limit_ma"], "contact_limit_ma"),
                "safety.contact_limit_ma");
        if (s.contains("density_limit_ma_per_m2"))
            c.density_limit_ma_per_m2 = detail::positive(
                detail::require_number(s["density_limit_ma_per_m2"], "density_limit_ma_per_m2"),
                "safety.density_limit_ma_per_m2");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        detail::reject_unknown(o, {"dir", "plot", "strict"}, "output.");
        if (o.contains("dir")) c.out_dir = o["dir"].get<std::string>();
        if (o.contains("plot")) c.plot = o["plot"].get<bool>();
        if (o.contains("strict")) c.strict = o["strict"].get<bool>();
    }
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        return RunConfig{};  // empty file -> full baseline defaults
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return parse_config_json(j);
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

// Full echo of every resolved value (curve provenance).
inline json serialize_config(const RunConfig& c) {
    json j;
    j["tissue_table"] = c.tissue_table;
    if (!c.stack.empty()) j["stack"] = c.stack;
    if (!c.thickness_mm.empty()) {
        json t;
        for (const auto& [k, v] : c.thickness_mm) t[k] = v;
        j["thickness_mm"] = t;
    }
    j["d_mm"] = c.d_mm;
    j["e_st_mm"] = c.e_st_mm;
    j["e_sr_mm"] = c.e_sr_mm;
    j["delta_l_mm"] = c.delta_l_mm;
    j["e_l_mm"] = c.e_l_mm;
    if (c.a_e_mm2) j["a_e_mm2"] = *c.a_e_mm2;
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["m"] = c.m;
    j["m_prime"] = c.m_prime;
    if (c.f_w) j["f_w"] = *c.f_w;
    j["path"] = c.path;
    j["freq_hz"] = c.freq_hz;
    if (c.has_sweep) {
        json s;
        s["param"] = c.sweep_param;
        const bool is_freq = (c.sweep_param == "frequency");
        s[is_freq ? "start_hz" : "start_mm"] = c.sweep_start;
        s[is_freq ? "stop_hz" : "stop_mm"] = c.sweep_stop;
        s["count"] = c.sweep_count;
        s["log"] = c.sweep_log;
        j["sweep"] = s;
    }
    j["safety"] = {{"drive_ma", c.drive_ma},
                   {"contact_limit_ma", c.contact_limit_ma},
                   {"density_limit_ma_per_m2", c.density_limit_ma_per_m2}};
    j["output"] = {{"dir", c.out_dir}, {"plot", c.plot}, {"strict", c.strict}};
    return j;
}

// Builds the SI-unit model config (tissue table resolved, overrides applied).
inline ModelConfig build_model(const RunConfig& c) {
    ModelConfig m;
    m.table = load_tissue_table(c.tissue_table);
    for (const auto& [name, mm] : c.thickness_mm) {
        bool found = false;
        for (auto& l : m.table.layers)
            if (l.name == name) { l.thickness = mm * 1e-3; found = true; }
        if (!found)
            throw ValidationError("config: thickness override for unknown tissue '" + name + "'");
    }
    if (c.f_w)
        for (auto& l : m.table.layers) l.f_w = *c.f_w;
    m.table.validate();
    if (c.stack.empty()) {
        for (const auto& l : m.table.layers) m.stack.push_back(l.name);
    } else {
        m.stack = c.stack;
        for (const auto& s : m.stack)
            if (!m.table.has(s))
                throw ValidationError("config: stack layer '" + s + "' not in tissue table");
    }
    m.geom.d = c.d_mm * 1e-3;
    m.geom.e_st = c.e_st_mm * 1e-3;
    m.geom.e_sr = c.e_sr_mm * 1e-3;
    m.geom.delta_l = c.delta_l_mm * 1e-3;
    m.elec.e_l = c.e_l_mm * 1e-3;
    m.elec.a_e = c.a_e_mm2 ? *c.a_e_mm2 * 1e-6 : m.elec.e_l * m.elec.e_l;
    m.elec.k1 = c.k1;
    m.elec.k2 = c.k2;
    m.elec.m = c.m;
    m.elec.m_prime = c.m_prime;
    m.geom.validate();
    m.elec.validate();
    return m;
}

inline SweepSpec build_sweep(const RunConfig& c) {
    if (!c.has_sweep) throw ConfigError("config has no sweep section");
    SweepSpec spec;
    spec.base = build_model(c);
    spec.param = sweep_param_from_name(c.sweep_param);
    spec.freq_hz = c.freq_hz;
    spec.paths = resolve_paths(c.path);
    const bool is_freq = (spec.param == SweepParam::frequency);
    const double scale = is_freq ? 1.0 : 1e-3;
    const int n = c.sweep_count;
    for (int k = 0; k < n; ++k) {
        double v;
        if (n == 1) v = c.sweep_start;
        else if (c.sweep_log)
            v = c.sweep_start * std::pow(c.sweep_stop / c.sweep_start,
                                         static_cast<double>(k) / (n - 1));
        else
            v = c.sweep_start + (c.sweep_stop - c.sweep_start) * k / (n - 1);
        spec.values.push_back(v * scale);
    }
    return spec;
}

} // namespace gctec

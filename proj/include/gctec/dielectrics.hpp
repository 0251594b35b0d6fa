#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gctec {

inline constexpr double EPS0 = 8.8541878128e-12; // F/m
inline constexpr double PI = 3.141592653589793238462643383279502884;

// Single-pole Debye dispersion plus static conductivity.
struct DispersionParams {
    double eps_s = 0.0;    // dielectric constant, low-frequency limit
    double eps_inf = 0.0;  // dielectric constant, high-frequency limit
    double tau = 0.0;      // relaxation time, s
    double sigma_s = 0.0;  // static conductivity, S/m

    void validate(const std::string& ctx = "dispersion") const {
        if (!(eps_s > eps_inf))
            throw ValidationError(ctx + ": eps_s must exceed eps_inf");
        if (!(eps_inf >= 1.0))
            throw ValidationError(ctx + ": eps_inf must be >= 1");
        if (!(tau > 0.0))
            throw ValidationError(ctx + ": tau must be > 0");
        if (!(sigma_s >= 0.0))
            throw ValidationError(ctx + ": sigma_s must be >= 0");
    }

    bool operator==(const DispersionParams&) const = default;
};

inline double eps_prime(const DispersionParams& p, double omega) {
    if (omega < 0.0) throw DomainError("eps_prime: omega must be >= 0");
    const double wt = omega * p.tau;
    return p.eps_inf + (p.eps_s - p.eps_inf) / (1.0 + wt * wt);
}

inline double eps_double_prime(const DispersionParams& p, double omega) {
    if (omega < 0.0) throw DomainError("eps_double_prime: omega must be >= 0");
    const double wt = omega * p.tau;
    return (p.eps_s - p.eps_inf) * wt / (1.0 + wt * wt);
}

// Relative complex permittivity eps' - j(eps'' + sigma/(omega*eps0)).
inline std::complex<double> complex_permittivity(const DispersionParams& p, double omega) {
    if (!(omega > 0.0))
        throw DomainError("complex_permittivity: omega must be > 0 (conduction term diverges at DC)");
    return {eps_prime(p, omega),
            -(eps_double_prime(p, omega) + p.sigma_s / (omega * EPS0))};
}

// Effective conductivity entering the admittance model: the static value.
// In-band loss variation is carried by eps'' and the sigma/(omega*eps0) term.
inline double conductivity(const DispersionParams& p, double omega) {
    if (omega < 0.0) throw DomainError("conductivity: omega must be >= 0");
    return p.sigma_s;
}

struct TissueLayer {
    std::string name;             // skin, fat, muscle, cortical_bone, or custom
    double thickness = 0.0;       // m
    DispersionParams dispersion;
    double f_w = 0.7;             // hydration correction factor
    double kappa = 1.0;           // external/internal cell resistance ratio

    void validate() const {
        if (name.empty()) throw ValidationError("tissue layer: empty name");
        if (!(thickness > 0.0))
            throw ValidationError("tissue '" + name + "': thickness must be > 0");
        if (!(f_w > 0.0))
            throw ValidationError("tissue '" + name + "': f_w must be > 0");
        if (!(kappa > 0.0))
            throw ValidationError("tissue '" + name + "': kappa must be > 0");
        dispersion.validate("tissue '" + name + "'");
    }

    bool operator==(const TissueLayer&) const = default;
};

struct TissueTable {
    std::string id;                   // dataset label
    std::vector<TissueLayer> layers;  // outermost first
    double f_min_hz = 50e3;           // validity band
    double f_max_hz = 2e6;

    const TissueLayer& at(const std::string& name) const {
        for (const auto& l : layers)
            if (l.name == name) return l;
        throw ConfigError("tissue '" + name + "' not present in table '" + id + "'");
    }
    bool has(const std::string& name) const {
        return std::any_of(layers.begin(), layers.end(),
                           [&](const TissueLayer& l) { return l.name == name; });
    }

    void validate() const {
        if (layers.empty()) throw ValidationError("tissue table '" + id + "' is empty");
        if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz))
            throw ValidationError("tissue table '" + id + "': bad validity band");
        for (const auto& l : layers) l.validate();
        for (size_t i = 0; i < layers.size(); ++i)
            for (size_t j = i + 1; j < layers.size(); ++j)
                if (layers[i].name == layers[j].name)
                    throw ValidationError("tissue table '" + id + "': duplicate tissue '" +
                                          layers[i].name + "'");
    }

    bool operator==(const TissueTable&) const = default;
};

// ---- table file format ----------------------------------------------------
// Line-oriented text. '#' starts a comment. An optional directive
//   band_hz <f_min> <f_max>
// precedes a mandatory header line naming all eight columns (any order):
//   name eps_s eps_inf tau_s sigma_s_per_m thickness_mm f_w kappa
// followed by one row per tissue. Unknown column names are rejected.

namespace detail {

inline const std::vector<std::string>& table_columns() {
    static const std::vector<std::string> cols = {
        "name", "eps_s", "eps_inf", "tau_s", "sigma_s_per_m",
        "thickness_mm", "f_w", "kappa"};
    return cols;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline double parse_num(const std::string& tok, const std::string& ctx) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(ctx + ": not a number: '" + tok + "'");
    }
}

} // namespace detail

inline TissueTable parse_tissue_table(std::istream& in, const std::string& id) {
    TissueTable table;
    table.id = id;
    std::vector<std::string> header;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        const std::string ctx = id + ":" + std::to_string(lineno);
        if (header.empty() && toks[0] == "band_hz") {
            if (toks.size() != 3) throw ParseError(ctx + ": band_hz wants two values");
            table.f_min_hz = detail::parse_num(toks[1], ctx);
            table.f_max_hz = detail::parse_num(toks[2], ctx);
            continue;
        }
        if (header.empty()) {
            for (const auto& t : toks) {
                const auto& cols = detail::table_columns();
                if (std::find(cols.begin(), cols.end(), t) == cols.end())
                    throw ParseError(ctx + ": unknown field '" + t + "'");
                if (std::count(toks.begin(), toks.end(), t) > 1)
                    throw ParseError(ctx + ": duplicate field '" + t + "'");
            }
            if (toks.size() != detail::table_columns().size())
                throw ParseError(ctx + ": header must name all eight fields");
            header = toks;
            continue;
        }
        if (toks.size() != header.size())
            throw ParseError(ctx + ": expected " + std::to_string(header.size()) +
                             " values, got " + std::to_string(toks.size()));
        TissueLayer l;
        for (size_t c = 0; c < header.size(); ++c) {
            const std::string& f = header[c];
            const std::string& v = toks[c];
            if (f == "name") l.name = v;
            else if (f == "eps_s") l.dispersion.eps_s = detail::parse_num(v, ctx);
            else if (f == "eps_inf") l.dispersion.eps_inf = detail::parse_num(v, ctx);
            else if (f == "tau_s") l.dispersion.tau = detail::parse_num(v, ctx);
            else if (f == "sigma_s_per_m") l.dispersion.sigma_s = detail::parse_num(v, ctx);
            else if (f == "thickness_mm") l.thickness = detail::parse_num(v, ctx) * 1e-3;
            else if (f == "f_w") l.f_w = detail::parse_num(v, ctx);
            else if (f == "kappa") l.kappa = detail::parse_num(v, ctx);
        }
        table.layers.push_back(std::move(l));
    }
    if (header.empty()) throw ParseError(id + ": missing header line");
    table.validate();
    return table;
}

inline std::string serialize_tissue_table(const TissueTable& table) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "band_hz " << num(table.f_min_hz) << ' ' << num(table.f_max_hz) << '\n';
    os << "name eps_s eps_inf tau_s sigma_s_per_m thickness_mm f_w kappa\n";
    for (const auto& l : table.layers) {
        os << l.name << ' ' << num(l.dispersion.eps_s) << ' ' << num(l.dispersion.eps_inf)
           << ' ' << num(l.dispersion.tau) << ' ' << num(l.dispersion.sigma_s)
           << ' ' << num(l.thickness * 1e3) << ' ' << num(l.f_w) << ' ' << num(l.kappa)
           << '\n';
    }
    return os.str();
}

} // namespace gctec

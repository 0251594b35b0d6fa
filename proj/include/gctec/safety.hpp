#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dielectrics.hpp"
#include "network.hpp"
#include "path_impedance.hpp"

namespace gctec {

inline constexpr double ICNIRP_DENSITY_LIMIT = 25e-3;  // A/m^2
inline constexpr double CONTACT_CURRENT_LIMIT = 1e-3;  // A
inline constexpr double LOW_FREQ_FLAG_HZ = 50e3;
inline constexpr double DOMINANCE_FREQ_CAP_HZ = 2e6;
inline constexpr double OPERATING_FREQ_CAP_HZ = 1e6;

struct TissueRatio {
    std::string name;
    double ratio;  // sigma / (omega * eps0 * eps'')
};

struct SafetyReport {
    double frequency_hz = 0.0;
    double contact_current = 0.0;        // A
    double contact_current_limit = CONTACT_CURRENT_LIMIT;
    double contact_density = 0.0;        // A/m^2 (lumped: current / contact area)
    double density_limit = ICNIRP_DENSITY_LIMIT;
    double conduction_fraction = 0.0;    // of |J| in the placement tissue
    double displacement_fraction = 0.0;
    std::vector<TissueRatio> conduction_ratios;
    double max_dominant_freq_hz = 0.0;   // largest f with ratio > 1 in all tissues
    bool low_frequency_flag = false;     // f <= 50 kHz
    bool pass = true;
    std::vector<std::string> reasons;

    // Re-derives the verdict from the numeric fields alone. Limits carry a
    // 1e-9 relative slack so a drive sitting exactly on the limit passes.
    bool derive_verdict() const {
        return contact_current <= contact_current_limit * (1.0 + 1e-9) &&
               contact_density <= density_limit * (1.0 + 1e-9) && !low_frequency_flag;
    }
};

// Total current leaving the positive source terminal into tissue.
inline double contact_current(const TECNetwork& net, const Solution& sol) {
    double total = 0.0;
    for (const auto& br : net.branches) {
        cplx i{0.0, 0.0};
        if (br.a == net.source_node)
            i = (sol.node_voltage[br.a] - sol.node_voltage[br.b]) / br.z;
        else if (br.b == net.source_node)
            i = (sol.node_voltage[br.b] - sol.node_voltage[br.a]) / br.z;
        else
            continue;
        total += std::abs(i);
    }
    return total;
}

inline std::pair<double, bool> contact_check(const TECNetwork& net, const Solution& sol,
                                             double limit_current = CONTACT_CURRENT_LIMIT) {
    const double i = contact_current(net, sol);
    return {i, i <= limit_current};
}

struct CurrentDensity {
    double magnitude = 0.0;            // A/m^2
    double conduction_fraction = 0.0;  // sigma / (sigma + omega*eps0*eps'')
    double displacement_fraction = 0.0;
};

// Lumped-model density: contact current over contact area; the split between
// conduction and displacement follows the tissue admittivity ratio. The
// spatial field distribution is outside this model's scope.
inline CurrentDensity current_density(double drive_current, const TissueLayer& tissue,
                                      const ElectrodeConfig& elec, double omega) {
    if (!(elec.a_e > 0.0)) throw DomainError("current_density: zero contact area");
    if (!(omega > 0.0)) throw DomainError("current_density: omega must be > 0");
    CurrentDensity d;
    d.magnitude = std::abs(drive_current) / elec.a_e;
    const double cond = conductivity(tissue.dispersion, omega);
    const double disp = omega * EPS0 * eps_double_prime(tissue.dispersion, omega);
    const double total = cond + disp;
    d.conduction_fraction = total > 0.0 ? cond / total : 0.0;
    d.displacement_fraction = total > 0.0 ? disp / total : 0.0;
    return d;
}

inline double conduction_ratio(const TissueLayer& tissue, double freq_hz) {
    const double omega = 2.0 * PI * freq_hz;
    const double epp = eps_double_prime(tissue.dispersion, omega);
    if (epp <= 0.0) return std::numeric_limits<double>::infinity();
    return conductivity(tissue.dispersion, omega) / (omega * EPS0 * epp);
}

struct DominanceResult {
    std::vector<TissueRatio> ratios;
    double max_dominant_freq_hz = 0.0;
};

// Per-tissue sigma/(omega*eps0*eps'') at f, plus the largest frequency at
// which conduction dominates (> 1) in every tissue, scanned on a log grid.
inline DominanceResult conduction_dominance(const TissueTable& table, double freq_hz) {
    if (!(freq_hz > 0.0)) throw DomainError("conduction_dominance: f must be > 0");
    DominanceResult out;
    for (const auto& l : table.layers)
        out.ratios.push_back({l.name, conduction_ratio(l, freq_hz)});
    const double f_lo = 50e3, f_hi = 5e6;
    const int steps = 600;
    for (int k = 0; k <= steps; ++k) {
        const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(k) / steps);
        bool all = true;
        for (const auto& l : table.layers)
            if (!(conduction_ratio(l, f) > 1.0)) { all = false; break; }
        if (all) out.max_dominant_freq_hz = f;
        else break;
    }
    return out;
}

inline SafetyReport safety_report(const TissueTable& table,
                                  const std::vector<std::string>& stack,
                                  const ChannelGeometry& geom, const ElectrodeConfig& elec,
                                  double freq_hz, double drive_current,
                                  double limit_current = CONTACT_CURRENT_LIMIT,
                                  double density_limit = ICNIRP_DENSITY_LIMIT) {
    const double omega = 2.0 * PI * freq_hz;
    auto net = build_network(table, stack, geom, elec, omega);
    net.current = drive_current;
    const auto sol = solve(assemble(net));

    SafetyReport rep;
    rep.frequency_hz = freq_hz;
    rep.contact_current_limit = limit_current;
    rep.density_limit = density_limit;
    rep.contact_current = contact_current(net, sol);
    const auto dens = current_density(rep.contact_current, table.at(geom.tx_layer), elec, omega);
    rep.contact_density = dens.magnitude;
    rep.conduction_fraction = dens.conduction_fraction;
    rep.displacement_fraction = dens.displacement_fraction;
    const auto dom = conduction_dominance(table, freq_hz);
    rep.conduction_ratios = dom.ratios;
    rep.max_dominant_freq_hz = dom.max_dominant_freq_hz;
    rep.low_frequency_flag = freq_hz <= LOW_FREQ_FLAG_HZ;

    if (rep.contact_current > limit_current * (1.0 + 1e-9)) {
        rep.pass = false;
        rep.reasons.push_back("contact current exceeds limit");
    }
    if (rep.contact_density > density_limit * (1.0 + 1e-9)) {
        rep.pass = false;
        rep.reasons.push_back("contact current density exceeds limit");
    }
    if (rep.low_frequency_flag) {
        rep.pass = false;
        rep.reasons.push_back("frequency at or below 50 kHz");
    }
    return rep;
}

// Independent transmitters superimpose: densities add (documented helper for
// the multi-transmitter caution; no scheduling logic).
inline double combined_density(const std::vector<SafetyReport>& reports) {
    double total = 0.0;
    for (const auto& r : reports) total += r.contact_density;
    return total;
}

} // namespace gctec

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "dielectrics.hpp"
#include "errors.hpp"

namespace gctec {

using cplx = std::complex<double>;
inline constexpr cplx J{0.0, 1.0};

// Electrode/coupling defaults. K1 carries the contact-impedance magnitude
// (ohm * Hz^-m * m^2); K2 is the dimensionless reactive fraction.
// Values frozen by the channel calibration.
inline constexpr double DEFAULT_K1 = 0.0408260336697;
inline constexpr double DEFAULT_K2 = 0.081123812044;
inline constexpr double DEFAULT_M = -1.15;
inline constexpr double DEFAULT_M_PRIME = -0.81;

struct ElectrodeConfig {
    double e_l = 0.01;          // square electrode side, m
    double a_e = 1e-4;          // contact area, m^2 (default e_l^2)
    double k1 = DEFAULT_K1;
    double k2 = DEFAULT_K2;
    double m = DEFAULT_M;
    double m_prime = DEFAULT_M_PRIME;

    static ElectrodeConfig with_side(double e_l) {
        ElectrodeConfig e;
        e.e_l = e_l;
        e.a_e = e_l * e_l;
        return e;
    }

    void validate() const {
        if (!(e_l > 0.0)) throw ValidationError("electrode: e_l must be > 0");
        if (!(a_e > 0.0)) throw ValidationError("electrode: a_e must be > 0");
        if (!(k2 > 0.0 && k2 < 1.0)) throw ValidationError("electrode: k2 must be in (0,1)");
        if (!(k1 > 0.0)) throw ValidationError("electrode: k1 must be > 0");
    }

    bool operator==(const ElectrodeConfig&) const = default;
};

struct ChannelGeometry {
    double d = 0.1;        // transmitter-receiver separation, m
    double e_st = 0.05;    // transmitter electrode separation, m
    double e_sr = 0.05;    // receiver electrode separation, m
    double delta_l = 0.0;  // lateral misalignment, m
    std::string tx_layer = "skin";
    std::string rx_layer = "skin";

    void validate() const {
        if (!(d > 0.0)) throw ValidationError("geometry: d must be > 0");
        if (!(e_st > 0.0)) throw ValidationError("geometry: e_st must be > 0");
        if (!(e_sr > 0.0)) throw ValidationError("geometry: e_sr must be > 0");
        if (!(delta_l >= 0.0)) throw ValidationError("geometry: delta_l must be >= 0");
    }

    bool operator==(const ChannelGeometry&) const = default;
};

enum class Side { tx, rx };

// Tissue admittance of one lumped current path. M1 is the conduction-geometry
// factor (cross-section over path length, m); M2 the cell-membrane geometry
// factor. The external conduction term sits in parallel with the series
// combination of the intracellular conduction (sigma*kappa*M1) and membrane
// capacitance (j*omega*eps*M2) branches; F_W scales the whole admittance.
inline cplx tissue_admittance(const TissueLayer& layer, double m1, double m2, double omega) {
    if (!(m1 > 0.0) || !(m2 > 0.0))
        throw DomainError("tissue_admittance: geometry factors must be > 0");
    if (!(omega > 0.0)) throw DomainError("tissue_admittance: omega must be > 0");
    const cplx eps = EPS0 * complex_permittivity(layer.dispersion, omega);
    const double sigma = conductivity(layer.dispersion, omega);
    const cplx gi = sigma * layer.kappa * m1;
    const cplx gc = J * omega * eps * m2;
    return layer.f_w * (sigma * m1 + gi * gc / (gi + gc));
}

inline cplx tissue_impedance(const TissueLayer& layer, double m1, double m2, double omega) {
    return 1.0 / tissue_admittance(layer, m1, m2, omega);
}

// Path P1: direct impedance between one node's own electrode pair.
inline cplx direct_impedance(const TissueLayer& layer, const ChannelGeometry& geom,
                             const ElectrodeConfig& elec, double omega, Side side) {
    const double e_s = (side == Side::tx) ? geom.e_st : geom.e_sr;
    return tissue_impedance(layer, elec.e_l * layer.thickness / e_s, elec.e_l, omega);
}

// Path P2: longitudinal impedance along the tx->rx axis; misalignment extends
// the effective distance to sqrt(d^2 + delta_l^2).
inline cplx longitudinal_impedance(const TissueLayer& layer, const ChannelGeometry& geom,
                                   const ElectrodeConfig& elec, double omega) {
    const double deff = std::hypot(geom.d, geom.delta_l);
    return tissue_impedance(layer, elec.e_l * layer.thickness / deff, elec.e_l, omega);
}

// Path P3: cross (diagonal) impedance, length sqrt(2 (d^2 + e_st^2)).
inline cplx cross_impedance(const TissueLayer& layer, const ChannelGeometry& geom,
                            const ElectrodeConfig& elec, double omega) {
    const double dcross = std::sqrt(2.0) * std::hypot(geom.d, geom.e_st);
    return tissue_impedance(layer, elec.e_l * layer.thickness / dcross, elec.e_l, omega);
}

// Path P4: transverse impedance into the adjacent layer; each layer
// contributes the impedance of its own half-thickness column under the
// electrode footprint, composed in series.
inline cplx transverse_impedance(const TissueLayer& upper, const TissueLayer& lower,
                                 const ElectrodeConfig& elec, double omega) {
    auto half = [&](const TissueLayer& l) {
        const double g = elec.a_e / (0.5 * l.thickness);
        return tissue_impedance(l, g, g, omega);
    };
    return half(upper) + half(lower);
}

// Electrode-tissue contact: resistive branch in parallel with the capacitive
// branch, both area-normalized with power-law frequency dependence.
inline cplx coupling_impedance(const ElectrodeConfig& elec, double omega) {
    if (!(omega > 0.0)) throw DomainError("coupling_impedance: omega must be > 0");
    const double f = omega / (2.0 * PI);
    const double re = elec.k1 * std::pow(f, elec.m) / elec.a_e;
    const double xe = elec.k1 * elec.k2 * std::pow(f, elec.m_prime) / elec.a_e;
    const cplx zc = -J * xe;
    return re * zc / (re + zc);
}

// ---- closed-form trend expressions ----------------------------------------
// Resistivity-form relations used only for documented trend cross-checks;
// the solver path uses the lumped admittance forms above exclusively.

enum class ClosedFormKind { Z_T, Z_L, Z_C, Z_D };

struct ClosedFormParams {
    double rho = 0.0;      // resistivity, ohm*m
    double eps = 0.0;      // absolute permittivity, F/m
    double omega = 0.0;    // rad/s
    double t = 0.0;        // layer thickness, m
    double gamma = 0.0;    // thickness deviation, m (Z_T)
    double e_l = 0.0;      // electrode side, m
    double area = 0.0;     // electrode area, m^2 (Z_L)
    double d = 0.0;        // tx-rx separation, m
    double e_s = 0.0;      // electrode separation, m
    double delta_l = 0.0;  // misalignment, m (Z_L)
};

inline cplx closed_form_impedance(ClosedFormKind kind, const ClosedFormParams& p) {
    const cplx jwe = J * p.omega * p.eps;
    switch (kind) {
        case ClosedFormKind::Z_T: {
            const cplx den = p.rho * p.e_l * p.e_l * (p.rho + 2.0 * jwe);
            if (den == 0.0) throw DomainError("closed_form Z_T: zero denominator");
            return (p.t + p.gamma) * (p.rho + jwe) / den;
        }
        case ClosedFormKind::Z_L: {
            const double deff = std::hypot(p.d, p.delta_l);
            const cplx den = p.area * p.rho * (p.t * p.rho + 2.0 * jwe * deff);
            if (den == 0.0) throw DomainError("closed_form Z_L: zero denominator");
            return deff * (p.t * p.rho + jwe * deff) / den;
        }
        case ClosedFormKind::Z_C: {
            const double r2 = p.d * p.d + p.e_s * p.e_s;
            const cplx den = 2.0 * p.rho * p.e_l * p.t * (p.t * p.t * p.rho + 2.0 * jwe * r2);
            if (den == 0.0) throw DomainError("closed_form Z_C: zero denominator");
            return std::sqrt(2.0 * r2) * (p.t * p.t * p.rho + jwe * r2) / den;
        }
        case ClosedFormKind::Z_D: {
            const cplx den = p.rho * p.e_l * p.d *
                             (p.d * p.d * p.rho + 2.0 * jwe * p.e_s * p.e_s);
            if (den == 0.0) throw DomainError("closed_form Z_D: zero denominator");
            return p.e_s * (p.d * p.d * p.rho + jwe * p.e_s * p.e_s) / den;
        }
    }
    throw DomainError("closed_form_impedance: unknown kind");
}

} // namespace gctec

#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dielectrics.hpp"
#include "errors.hpp"
#include "path_impedance.hpp"

namespace gctec {

struct Node {
    enum class Role { tissue, terminal };
    Role role;
    int layer;    // -1 for terminals
    int pos;      // 0=txP(A), 1=txN(B), 2=rxP(C), 3=rxN(D)
    std::string label;
};

struct Branch {
    int a;
    int b;
    cplx z;
    std::string label;
};

struct TECNetwork {
    std::vector<Node> nodes;
    std::vector<Branch> branches;
    int source_node;     // current injection (+I)
    int reference_node;  // ground
    int probe_p;
    int probe_n;
    double current = 1e-3;  // A
    double omega = 0.0;
};

inline const char* POS_NAMES = "ABCD";

// Builds the layered circuit graph: per layer the six intra-layer branches
// (Z_D, Z_DR, two Z_L, two Z_C), four transverse branches per adjacent layer
// pair, and four coupling branches from the terminal nodes into the
// placement layers.
inline TECNetwork build_network(const TissueTable& table,
                                const std::vector<std::string>& stack,
                                const ChannelGeometry& geom, const ElectrodeConfig& elec,
                                double omega) {
    if (stack.size() < 2) throw ConfigError("build_network: stack needs at least 2 layers");
    geom.validate();
    elec.validate();
    auto layer_index = [&](const std::string& name) {
        for (size_t i = 0; i < stack.size(); ++i)
            if (stack[i] == name) return static_cast<int>(i);
        throw ConfigError("build_network: placement layer '" + name + "' not in stack");
    };
    const int tx_i = layer_index(geom.tx_layer);
    const int rx_i = layer_index(geom.rx_layer);

    TECNetwork net;
    net.omega = omega;
    const int nl = static_cast<int>(stack.size());
    for (int i = 0; i < nl; ++i)
        for (int p = 0; p < 4; ++p)
            net.nodes.push_back({Node::Role::tissue, i, p,
                                 stack[i] + "." + POS_NAMES[p]});
    for (int p = 0; p < 4; ++p)
        net.nodes.push_back({Node::Role::terminal, -1, p, std::string("T") + POS_NAMES[p]});
    auto tn = [&](int layer, int pos) { return layer * 4 + pos; };
    auto term = [&](int pos) { return nl * 4 + pos; };

    auto add = [&](int a, int b, cplx z, std::string label) {
        if (z == cplx{0.0, 0.0})
            throw SingularityError("build_network: zero branch impedance on " + label);
        net.branches.push_back({a, b, z, std::move(label)});
    };

    for (int i = 0; i < nl; ++i) {
        const TissueLayer& layer = table.at(stack[i]);
        const cplx zd = direct_impedance(layer, geom, elec, omega, Side::tx);
        const cplx zdr = direct_impedance(layer, geom, elec, omega, Side::rx);
        const cplx zl = longitudinal_impedance(layer, geom, elec, omega);
        const cplx zc = cross_impedance(layer, geom, elec, omega);
        add(tn(i, 0), tn(i, 1), zd, "Z_D^" + stack[i]);
        add(tn(i, 2), tn(i, 3), zdr, "Z_DR^" + stack[i]);
        add(tn(i, 0), tn(i, 2), zl, "Z_L^" + stack[i]);
        add(tn(i, 1), tn(i, 3), zl, "Z_L^" + stack[i]);
        add(tn(i, 0), tn(i, 3), zc, "Z_C^" + stack[i]);
        add(tn(i, 1), tn(i, 2), zc, "Z_C^" + stack[i]);
        if (i + 1 < nl) {
            const TissueLayer& below = table.at(stack[i + 1]);
            const cplx zt = transverse_impedance(layer, below, elec, omega);
            const std::string lbl = "Z_T^" + stack[i] + "-" + stack[i + 1];
            for (int p = 0; p < 4; ++p) add(tn(i, p), tn(i + 1, p), zt, lbl);
        }
    }

    const cplx zco = coupling_impedance(elec, omega);
    add(term(0), tn(tx_i, 0), zco, "Z_Co");
    add(term(1), tn(tx_i, 1), zco, "Z_Co");
    add(term(2), tn(rx_i, 2), zco, "Z_Co");
    add(term(3), tn(rx_i, 3), zco, "Z_Co");

    net.source_node = term(0);
    net.reference_node = term(1);
    net.probe_p = term(2);
    net.probe_n = term(3);
    return net;
}

// Full (pre-grounding) complex admittance matrix; graph Laplacian.
inline std::vector<cplx> laplacian(const TECNetwork& net) {
    const size_t n = net.nodes.size();
    std::vector<cplx> g(n * n, cplx{0.0, 0.0});
    for (const auto& br : net.branches) {
        const cplx y = 1.0 / br.z;
        g[br.a * n + br.a] += y;
        g[br.b * n + br.b] += y;
        g[br.a * n + br.b] -= y;
        g[br.b * n + br.a] -= y;
    }
    return g;
}

struct NodalSystem {
    std::vector<cplx> m_g;     // grounded matrix, row-major (n-1)x(n-1)
    std::vector<cplx> i_vec;   // length n-1
    std::vector<int> node_of;  // row -> original node index
    int n = 0;                 // grounded dimension
    int reference_node = -1;
};

inline NodalSystem assemble(const TECNetwork& net) {
    const int full = static_cast<int>(net.nodes.size());
    for (const auto& br : net.branches)
        if (br.z == cplx{0.0, 0.0})
            throw SingularityError("assemble: zero branch impedance on " + br.label);
    const auto g = laplacian(net);
    NodalSystem sys;
    sys.reference_node = net.reference_node;
    for (int k = 0; k < full; ++k)
        if (k != net.reference_node) sys.node_of.push_back(k);
    sys.n = full - 1;
    sys.m_g.resize(static_cast<size_t>(sys.n) * sys.n);
    sys.i_vec.assign(sys.n, cplx{0.0, 0.0});
    for (int r = 0; r < sys.n; ++r) {
        for (int c = 0; c < sys.n; ++c)
            sys.m_g[r * sys.n + c] = g[sys.node_of[r] * full + sys.node_of[c]];
        if (sys.node_of[r] == net.source_node) sys.i_vec[r] = net.current;
    }
    return sys;
}

namespace detail {

// Dense LU with partial pivoting, row-major in-place.
template <class C>
struct LU {
    std::vector<C> a;
    std::vector<int> piv;
    int n;
};

template <class C>
inline LU<C> lu_factor(std::vector<C> a, int n) {
    LU<C> lu{std::move(a), std::vector<int>(n), n};
    for (int k = 0; k < n; ++k) {
        int p = k;
        auto best = std::abs(lu.a[k * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const auto v = std::abs(lu.a[r * n + k]);
            if (v > best) { best = v; p = r; }
        }
        if (best == 0.0) throw SingularityError("lu_factor: singular matrix");
        lu.piv[k] = p;
        if (p != k)
            for (int c = 0; c < n; ++c) std::swap(lu.a[k * n + c], lu.a[p * n + c]);
        const C pivot = lu.a[k * n + k];
        for (int r = k + 1; r < n; ++r) {
            const C f = lu.a[r * n + k] / pivot;
            lu.a[r * n + k] = f;
            for (int c = k + 1; c < n; ++c) lu.a[r * n + c] -= f * lu.a[k * n + c];
        }
    }
    return lu;
}

template <class C>
inline std::vector<C> lu_solve(const LU<C>& lu, std::vector<C> b) {
    const int n = lu.n;
    for (int k = 0; k < n; ++k)
        if (lu.piv[k] != k) std::swap(b[k], b[lu.piv[k]]);
    for (int r = 1; r < n; ++r)
        for (int c = 0; c < r; ++c) b[r] -= lu.a[r * n + c] * b[c];
    for (int r = n - 1; r >= 0; --r) {
        for (int c = r + 1; c < n; ++c) b[r] -= lu.a[r * n + c] * b[c];
        b[r] /= lu.a[r * n + r];
    }
    return b;
}

template <class C>
inline std::vector<C> matvec(const std::vector<C>& a, const std::vector<C>& x, int n) {
    std::vector<C> y(n, C{});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) y[r] += a[r * n + c] * x[c];
    return y;
}

inline double norm1_cols(const std::vector<cplx>& a, int n) {
    double best = 0.0;
    for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += std::abs(a[r * n + c]);
        best = std::max(best, s);
    }
    return best;
}

} // namespace detail

inline constexpr double SOLVE_RESIDUAL_TOL = 1e-9;
inline constexpr double CONDITION_WARN_THRESHOLD = 1e12;

struct Solution {
    std::vector<cplx> node_voltage;  // indexed by original node id; reference = 0
    double residual = 0.0;           // ||M_G v - i|| / ||i||
    double condition = 0.0;          // 1-norm condition estimate
    bool condition_warning = false;
};

inline Solution solve(const NodalSystem& sys) {
    using lcplx = std::complex<long double>;
    const int n = sys.n;
    // Branch admittances span many orders of magnitude, so the factorization
    // runs on a symmetrically equilibrated copy in extended precision; the
    // residual is still judged against the original system.
    std::vector<long double> dscale(n, 1.0L);
    std::vector<lcplx> a_orig(static_cast<size_t>(n) * n);
    for (int k = 0; k < n * n; ++k) a_orig[k] = lcplx(sys.m_g[k]);
    for (int k = 0; k < n; ++k) {
        const long double m = std::abs(a_orig[k * n + k]);
        if (m > 0.0L) dscale[k] = 1.0L / std::sqrt(m);
    }
    std::vector<lcplx> scaled(a_orig);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) scaled[r * n + c] *= dscale[r] * dscale[c];
    auto lu = detail::lu_factor(std::move(scaled), n);
    auto solve_with = [&](std::vector<lcplx> b) {
        for (int k = 0; k < n; ++k) b[k] *= dscale[k];
        auto y = detail::lu_solve(lu, std::move(b));
        for (int k = 0; k < n; ++k) y[k] *= dscale[k];
        return y;
    };
    std::vector<lcplx> rhs(n);
    for (int k = 0; k < n; ++k) rhs[k] = lcplx(sys.i_vec[k]);
    auto v = solve_with(rhs);

    long double inorm = 0.0L;
    for (const auto& x : rhs) inorm += std::norm(x);
    inorm = std::sqrt(inorm);
    auto residual_of = [&](const std::vector<lcplx>& vv) {
        auto r = detail::matvec(a_orig, vv, n);
        long double s = 0.0L;
        for (int k = 0; k < n; ++k) s += std::norm(r[k] - rhs[k]);
        return static_cast<double>(std::sqrt(s) / (inorm > 0.0L ? inorm : 1.0L));
    };

    // A few rounds of iterative refinement if the direct solve is not tight.
    double res = residual_of(v);
    for (int it = 0; it < 3 && res > SOLVE_RESIDUAL_TOL; ++it) {
        auto r = detail::matvec(a_orig, v, n);
        for (int k = 0; k < n; ++k) r[k] = rhs[k] - r[k];
        auto dv = solve_with(std::move(r));
        for (int k = 0; k < n; ++k) v[k] += dv[k];
        res = residual_of(v);
    }
    if (!(res <= SOLVE_RESIDUAL_TOL))
        throw SingularityError("solve: residual " + std::to_string(res) +
                               " exceeds tolerance (ill-conditioned system)");

    // Exact 1-norm of the inverse via n unit-vector solves (n <= 19).
    double inv_norm = 0.0;
    for (int c = 0; c < n; ++c) {
        std::vector<lcplx> e(n, lcplx{});
        e[c] = 1.0L;
        auto col = solve_with(std::move(e));
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += static_cast<double>(std::abs(col[r]));
        inv_norm = std::max(inv_norm, s);
    }

    Solution sol;
    sol.residual = res;
    sol.condition = detail::norm1_cols(sys.m_g, n) * inv_norm;
    sol.condition_warning = sol.condition > CONDITION_WARN_THRESHOLD;
    sol.node_voltage.assign(n + 1, cplx{0.0, 0.0});
    for (int r = 0; r < n; ++r)
        sol.node_voltage[sys.node_of[r]] = cplx(static_cast<double>(v[r].real()),
                                                static_cast<double>(v[r].imag()));
    return sol;
}

struct GainPoint {
    double frequency = 0.0;  // Hz
    double gain_db = 0.0;
    double phase_deg = 0.0;  // in (-180, 180]
    std::string path;        // e.g. "S-S"
};

inline std::string path_label(const std::string& tx, const std::string& rx) {
    auto letter = [](const std::string& name) -> std::string {
        if (name == "skin") return "S";
        if (name == "muscle") return "M";
        return name;
    };
    return letter(tx) + "-" + letter(rx);
}

inline bool in_validity_band(double freq_hz) { return freq_hz >= 50e3 && freq_hz <= 2e6; }

inline GainPoint channel_gain(const TissueTable& table, const std::vector<std::string>& stack,
                              const ChannelGeometry& geom, const ElectrodeConfig& elec,
                              double freq_hz) {
    if (!(freq_hz > 0.0)) throw DomainError("channel_gain: frequency must be > 0");
    const double omega = 2.0 * PI * freq_hz;
    const auto net = build_network(table, stack, geom, elec, omega);
    const auto sol = solve(assemble(net));
    const cplx vo = sol.node_voltage[net.probe_p] - sol.node_voltage[net.probe_n];
    const cplx vi = sol.node_voltage[net.source_node] - sol.node_voltage[net.reference_node];
    GainPoint gp;
    gp.frequency = freq_hz;
    gp.gain_db = 20.0 * std::log10(std::abs(vo / vi));
    gp.phase_deg = std::atan2(vo.imag(), vo.real()) * 180.0 / PI;
    if (gp.phase_deg <= -180.0) gp.phase_deg = 180.0;
    gp.path = path_label(geom.tx_layer, geom.rx_layer);
    return gp;
}

struct BranchCurrent {
    size_t branch;  // index into network.branches
    cplx current;   // from node a to node b
};

inline std::vector<BranchCurrent> branch_currents(const TECNetwork& net, const Solution& sol) {
    std::vector<BranchCurrent> out;
    out.reserve(net.branches.size());
    for (size_t k = 0; k < net.branches.size(); ++k) {
        const auto& br = net.branches[k];
        out.push_back({k, (sol.node_voltage[br.a] - sol.node_voltage[br.b]) / br.z});
    }
    return out;
}

} // namespace gctec

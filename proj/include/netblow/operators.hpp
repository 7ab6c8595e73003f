#pragma once

#include <cmath>
#include <cstddef>

#include "netblow/network.hpp"

namespace netblow {

inline void require_sized(const Network& net, const NodeField& u, const char* who) {
    if (u.size() != net.size())
        throw Error(std::string(who) + ": field size " + std::to_string(u.size()) +
                    " does not match network size " + std::to_string(net.size()));
}

/// A field is admissible (class of the Rayleigh characterization) when it
/// vanishes on the boundary. Exact zeros are required.
inline bool is_admissible(const Network& net, const NodeField& u) {
    require_sized(net, u, "is_admissible");
    for (std::size_t z : net.boundary())
        if (u[z] != 0.0) return false;
    return true;
}

/// Constant v on S, zero on the boundary.
inline NodeField interior_constant(const Network& net, double v) {
    NodeField u(net.size(), 0.0);
    for (std::size_t x : net.interior()) u[x] = v;
    return u;
}

inline double sum_sq(const NodeField& u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return s;
}

/// Discrete Laplacian (Δ_ω u)(x) = Σ_y [u(y) − u(x)] ω(x,y), evaluated on
/// all of S̄; consumers enforcing Dirichlet data restrict to S themselves.
inline NodeField laplacian(const Network& net, const NodeField& u) {
    require_sized(net, u, "laplacian");
    const std::size_t n = net.size();
    NodeField out(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < n; ++y) acc += (u[y] - u[x]) * net.weight(x, y);
        out[x] = acc;
    }
    return out;
}

/// (1/2) Σ_{x,y∈S̄} [u(x) − u(y)]² ω(x,y); equals Σ_x u(x)(−Δ_ω u)(x).
inline double dirichlet_energy(const Network& net, const NodeField& u) {
    require_sized(net, u, "dirichlet_energy");
    const std::size_t n = net.size();
    double e = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const double w = net.weight(x, y);
            if (w > 0.0) {
                const double d = u[x] - u[y];
                e += d * d * w;
            }
        }
    return e;
}

/// |2 Σ_x g(x)(−Δ_ω f)(x) − Σ_{x,y} [f(y)−f(x)][g(y)−g(x)] ω(x,y)|.
/// Mathematically zero; kept as a self-test of the summation-by-parts
/// identity.
inline double pairing_identity_residual(const Network& net, const NodeField& f,
                                        const NodeField& g) {
    require_sized(net, f, "pairing_identity_residual");
    require_sized(net, g, "pairing_identity_residual");
    const std::size_t n = net.size();
    NodeField lap = laplacian(net, f);
    double lhs = 0.0;
    for (std::size_t x = 0; x < n; ++x) lhs += g[x] * (-lap[x]);
    lhs *= 2.0;
    double rhs = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const double w = net.weight(x, y);
            if (w > 0.0) rhs += (f[y] - f[x]) * (g[y] - g[x]) * w;
        }
    rhs *= 2.0;
    return std::abs(lhs - rhs);
}

/// Magnitude scale for the pairing identity: max(1, Σ|f||g| · maxω · n).
inline double pairing_identity_scale(const Network& net, const NodeField& f,
                                     const NodeField& g) {
    double s = 0.0;
    for (std::size_t x = 0; x < net.size(); ++x) s += std::abs(f[x]) * std::abs(g[x]);
    return std::max(1.0, s * net.max_weight() * static_cast<double>(net.size()));
}

}  // namespace netblow

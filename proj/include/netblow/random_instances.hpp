#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netblow/network.hpp"
#include "netblow/rng.hpp"

namespace netblow {

/// Random connected network for the property suites. The interior is built
/// first as a random tree plus extra edges (so S induces a connected
/// subgraph and the first eigenfunction is strictly positive on S); each
/// boundary vertex then attaches to at least one interior vertex, with
/// occasional extra interior and boundary-boundary edges. Weights are
/// uniform in [w_lo, w_hi].
inline Network random_connected_network(SplitMix64& rng, std::size_t n_min, std::size_t n_max,
                                        double w_lo, double w_hi) {
    const std::size_t n = n_min + rng.index(n_max - n_min + 1);
    // at least one interior and one boundary vertex
    const std::size_t n_int = 1 + rng.index(n - 1);
    const std::size_t n_bnd = n - n_int;

    std::vector<std::string> labels(n);
    std::vector<VertexRole> roles(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = "v" + std::to_string(i);
        roles[i] = i < n_int ? VertexRole::Interior : VertexRole::Boundary;
    }
    std::vector<double> w(n * n, 0.0);
    auto connect = [&](std::size_t a, std::size_t b) {
        if (a == b || w[a * n + b] > 0.0) return;
        const double wt = rng.uniform(w_lo, w_hi);
        w[a * n + b] = w[b * n + a] = wt;
    };

    for (std::size_t i = 1; i < n_int; ++i) connect(i, rng.index(i));
    const std::size_t extra_int = rng.index(n_int + 1);
    for (std::size_t e = 0; e < extra_int; ++e) connect(rng.index(n_int), rng.index(n_int));

    for (std::size_t b = n_int; b < n; ++b) {
        connect(b, rng.index(n_int));
        if (rng.uniform() < 0.3) connect(b, rng.index(n_int));
    }
    if (n_bnd >= 2) {
        const std::size_t extra_bnd = rng.index(n_bnd);
        for (std::size_t e = 0; e < extra_bnd; ++e)
            connect(n_int + rng.index(n_bnd), n_int + rng.index(n_bnd));
    }
    return Network(std::move(labels), std::move(w), std::move(roles));
}

/// Uniform values in [lo, hi] on every vertex of S̄.
inline NodeField random_field(SplitMix64& rng, const Network& net, double lo, double hi) {
    NodeField u(net.size());
    for (double& v : u) v = rng.uniform(lo, hi);
    return u;
}

/// Uniform values on S, exact zeros on the boundary. Redrawn until not
/// identically zero.
inline NodeField random_admissible_field(SplitMix64& rng, const Network& net, double lo,
                                         double hi) {
    NodeField u(net.size(), 0.0);
    for (;;) {
        bool nonzero = false;
        for (std::size_t x : net.interior()) {
            u[x] = rng.uniform(lo, hi);
            if (u[x] != 0.0) nonzero = true;
        }
        if (nonzero) return u;
    }
}

}  // namespace netblow

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "netblow/random_instances.hpp"
#include "netblow/rng.hpp"
#include "netblow/spectral.hpp"

using namespace netblow;

namespace {

// Independent oracle: characteristic polynomial det(A - lambda I) by
// Gaussian elimination, smallest root located by scan + bisection.
double det_shifted(std::vector<double> a, std::size_t n, double lambda) {
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= lambda;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (a[pivot * n + col] == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            det = -det;
        }
        det *= a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] / a[col * n + col];
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
        }
    }
    return det;
}

double smallest_eigenvalue_bruteforce(const std::vector<double>& a, std::size_t n,
                                      double upper) {
    const double p0 = det_shifted(a, n, 0.0);
    double lo = 0.0, hi = 0.0;
    const int scan = 20000;
    bool bracketed = false;
    double prev = p0;
    for (int i = 1; i <= scan; ++i) {
        const double lam = upper * 1.01 * static_cast<double>(i) / scan;
        const double p = det_shifted(a, n, lam);
        if ((prev > 0.0) != (p > 0.0) || p == 0.0) {
            lo = upper * 1.01 * static_cast<double>(i - 1) / scan;
            hi = lam;
            bracketed = true;
            break;
        }
        prev = p;
    }
    REQUIRE(bracketed);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p = det_shifted(a, n, mid);
        if ((p > 0.0) == (det_shifted(a, n, lo) > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("star(k): 1x1 Dirichlet problem is exact") {
    for (std::size_t k = 1; k <= 6; ++k) {
        Network st = Network::star(k, 1.0);
        auto pair = first_eigenpair(st);
        REQUIRE(pair.lambda0 == static_cast<double>(k));
        REQUIRE(pair.phi0[st.index_of("c")] == 1.0);
        for (std::size_t z : st.boundary()) REQUIRE(pair.phi0[z] == 0.0);
    }
}

TEST_CASE("P4: eigenvalues of [[2,-1],[-1,2]] are 1 and 3") {
    Network p4 = Network::path(4, 1.0);
    auto pair = first_eigenpair(p4);
    REQUIRE(std::abs(pair.lambda0 - 1.0) <= 1e-10);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t x : p4.interior()) REQUIRE(std::abs(pair.phi0[x] - inv_sqrt2) <= 1e-10);
}

TEST_CASE("eigenpair contract on random graphs") {
    SplitMix64 rng(1212ull);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = rng.split(trial);
        Network net = random_connected_network(g, 3, 30, 0.1, 10.0);
        auto pair = first_eigenpair(net);
        REQUIRE(pair.lambda0 > 0.0);
        REQUIRE(pair.lambda0 <= net.min_interior_degree() * (1.0 + 1e-12));

        NodeField lap = laplacian(net, pair.phi0);
        double norm = 0.0;
        for (std::size_t x : net.interior()) {
            REQUIRE(pair.phi0[x] > 0.0);
            REQUIRE(std::abs(-lap[x] - pair.lambda0 * pair.phi0[x]) <= 1e-10 * pair.lambda0);
            norm += pair.phi0[x] * pair.phi0[x];
        }
        REQUIRE(std::abs(norm - 1.0) <= 1e-12);
        for (std::size_t z : net.boundary()) REQUIRE(pair.phi0[z] == 0.0);
    }
}

TEST_CASE("agreement with the characteristic-polynomial oracle for |S| <= 4") {
    SplitMix64 rng(888ull);
    int done = 0;
    for (int trial = 0; done < 40 && trial < 4000; ++trial) {
        auto g = rng.split(trial);
        Network net = random_connected_network(g, 3, 9, 0.2, 5.0);
        if (net.interior().size() > 4) continue;
        ++done;
        auto a = interior_matrix(net);
        const double oracle = smallest_eigenvalue_bruteforce(a, net.interior().size(),
                                                             net.min_interior_degree());
        const double lambda0 = first_eigenpair(net).lambda0;
        REQUIRE(std::abs(lambda0 - oracle) <= 1e-9 * std::max(1.0, lambda0));
    }
    REQUIRE(done == 40);
}

TEST_CASE("rayleigh quotient: minimizer, indicator example, errors") {
    Network p3 = Network::star(2, 1.0);
    auto pair = first_eigenpair(p3);
    REQUIRE(std::abs(rayleigh_quotient(p3, pair.phi0) - pair.lambda0) <=
            1e-10 * pair.lambda0);

    NodeField indicator(p3.size(), 0.0);
    indicator[p3.index_of("c")] = 1.0;
    REQUIRE(rayleigh_quotient(p3, indicator) == 2.0);

    REQUIRE_THROWS_AS(rayleigh_quotient(p3, NodeField(p3.size(), 0.0)), Error);
    NodeField bad(p3.size(), 0.0);
    bad[p3.boundary()[0]] = 0.5;
    REQUIRE_THROWS_AS(rayleigh_quotient(p3, bad), Error);
}

TEST_CASE("rayleigh quotient: minimality and scale invariance") {
    SplitMix64 rng(4096ull);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = rng.split(trial);
        Network net = random_connected_network(g, 3, 20, 0.1, 10.0);
        const double lambda0 = first_eigenpair(net).lambda0;
        for (int j = 0; j < 25; ++j) {
            NodeField u = random_admissible_field(g, net, -1.0, 1.0);
            const double rq = rayleigh_quotient(net, u);
            REQUIRE(rq >= lambda0 - 1e-10);

            const double c = g.uniform(0.1, 10.0) * (g.uniform() < 0.5 ? -1.0 : 1.0);
            NodeField cu(u);
            for (double& v : cu) v *= c;
            REQUIRE(std::abs(rayleigh_quotient(net, cu) - rq) <= 1e-12 * std::max(1.0, rq));
        }
    }
}

TEST_CASE("cycle with pendant boundary: eigenpair contract holds") {
    Network cy = Network::cycle_with_pendant_boundary(5, 2.0);
    auto pair = first_eigenpair(cy);
    REQUIRE(pair.lambda0 > 0.0);
    REQUIRE(pair.lambda0 <= cy.min_interior_degree());
    for (std::size_t x : cy.interior()) REQUIRE(pair.phi0[x] > 0.0);
}

TEST_CASE("interior disconnected by the boundary is reported, not accepted") {
    // two interior vertices joined only through the boundary: the first
    // eigenvector vanishes on one interior component
    const char* text =
        "vertex a interior\nvertex b interior\nvertex z boundary\n"
        "edge a z 1\nedge b z 1\n";
    Network net = Network::parse(text);
    REQUIRE_THROWS_WITH(first_eigenpair(net),
                        Catch::Matchers::ContainsSubstring("not strictly positive"));
}

TEST_CASE("uniform weight scaling multiplies lambda0") {
    SplitMix64 rng(2025ull);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = rng.split(trial);
        Network net = random_connected_network(g, 3, 15, 0.1, 5.0);
        const double c = g.uniform(0.3, 4.0);
        std::vector<std::string> labels;
        std::vector<VertexRole> roles;
        std::vector<double> w(net.size() * net.size());
        for (std::size_t i = 0; i < net.size(); ++i) {
            labels.push_back(net.label(i));
            roles.push_back(net.is_interior(i) ? VertexRole::Interior : VertexRole::Boundary);
            for (std::size_t j = 0; j < net.size(); ++j)
                w[i * net.size() + j] = c * net.weight(i, j);
        }
        Network scaled(labels, w, roles);
        const double l0 = first_eigenpair(net).lambda0;
        const double l0c = first_eigenpair(scaled).lambda0;
        REQUIRE(std::abs(l0c - c * l0) <= 1e-10 * c * l0);
    }
}

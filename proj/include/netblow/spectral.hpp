#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "netblow/operators.hpp"

namespace netblow {

struct SymmetricEigenResult {
    std::size_t n = 0;
    std::vector<double> values;   // unordered eigenvalues
    std::vector<double> vectors;  // row-major n×n; column k is eigenvector k
    int sweeps = 0;
    bool converged = false;

    double vector_entry(std::size_t row, std::size_t k) const { return vectors[row * n + k]; }
};

/// Cyclic Jacobi rotations on a dense symmetric matrix (row-major n×n),
/// run to the full spectrum. Sweeps until the off-diagonal Frobenius norm
/// drops below 1e-14·‖A‖_F, with a budget of 100 sweeps. Simple and
/// accurate at the target sizes (n up to a few hundred).
inline SymmetricEigenResult jacobi_eigensolver(std::vector<double> a, std::size_t n) {
    SymmetricEigenResult res;
    res.n = n;
    res.vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) res.vectors[i * n + i] = 1.0;
    if (n == 0) {
        res.converged = true;
        return res;
    }

    double norm_f = 0.0;
    for (double v : a) norm_f += v * v;
    norm_f = std::sqrt(norm_f);
    const double threshold = 1e-14 * norm_f;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return std::sqrt(2.0 * s);
    };

    for (res.sweeps = 0; res.sweeps < 100; ++res.sweeps) {
        if (off_norm() <= threshold) {
            res.converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1.0e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r * n + p];
                    const double arq = a[r * n + q];
                    a[r * n + p] = a[p * n + r] = arp - s * (arq + tau * arp);
                    a[r * n + q] = a[q * n + r] = arq + s * (arp - tau * arq);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = res.vectors[r * n + p];
                    const double vrq = res.vectors[r * n + q];
                    res.vectors[r * n + p] = vrp - s * (vrq + tau * vrp);
                    res.vectors[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if (!res.converged && off_norm() <= threshold) res.converged = true;
    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = a[i * n + i];
    return res;
}

/// The |S|×|S| symmetric matrix A with A[x][x] = d_ω x and
/// A[x][y] = −ω(x,y) for x ≠ y in S, ordered as net.interior().
inline std::vector<double> interior_matrix(const Network& net) {
    const auto& S = net.interior();
    const std::size_t m = S.size();
    std::vector<double> a(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        a[i * m + i] = net.degree(S[i]);
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) a[i * m + j] = -net.weight(S[i], S[j]);
    }
    return a;
}

/// First Dirichlet eigenpair: λ₀ > 0 with eigenfunction φ₀ > 0 on S,
/// zero on ∂S, normalized Σ_{x∈S} φ₀² = 1.
struct EigenPair {
    double lambda0;
    NodeField phi0;
};

/// Computes the first eigenpair of −Δ_ω on S. Postconditions are checked:
/// eigen residual ≤ 1e-10·λ₀, strict positivity of φ₀ on S, normalization
/// over S within 1e-12, and λ₀ ≤ min interior degree. A non-positive
/// eigenfunction (an interior that the boundary disconnects) is reported
/// as an error rather than silently accepted.
inline EigenPair first_eigenpair(const Network& net) {
    const auto& S = net.interior();
    const std::size_t m = S.size();
    auto eig = jacobi_eigensolver(interior_matrix(net), m);
    if (!eig.converged)
        throw Error("first_eigenpair: Jacobi iteration did not converge within 100 sweeps");

    std::size_t k = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (eig.values[i] < eig.values[k]) k = i;
    const double lambda0 = eig.values[k];
    if (!(lambda0 > 0.0))
        throw Error("first_eigenpair: nonpositive first eigenvalue " + g17(lambda0));

    NodeField phi(net.size(), 0.0);
    std::size_t arg_max = 0;
    double max_abs = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double v = eig.vector_entry(i, k);
        phi[S[i]] = v;
        if (std::abs(v) > max_abs) {
            max_abs = std::abs(v);
            arg_max = i;
        }
    }
    if (phi[S[arg_max]] < 0.0)
        for (std::size_t i = 0; i < m; ++i) phi[S[i]] = -phi[S[i]];

    double norm_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm_sq += phi[S[i]] * phi[S[i]];
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < m; ++i) phi[S[i]] *= inv;

    for (std::size_t x : S)
        if (!(phi[x] > 0.0))
            throw Error("first_eigenpair: eigenfunction not strictly positive on S at vertex '" +
                        net.label(x) + "' (interior disconnected by the boundary?)");

    NodeField lap = laplacian(net, phi);
    double residual = 0.0;
    for (std::size_t x : S) residual = std::max(residual, std::abs(-lap[x] - lambda0 * phi[x]));
    if (residual > 1e-10 * lambda0)
        throw Error("first_eigenpair: eigen residual " + g17(residual) + " exceeds 1e-10*lambda0");

    if (lambda0 > net.min_interior_degree() * (1.0 + 1e-9))
        throw Error("first_eigenpair: lambda0 " + g17(lambda0) +
                    " exceeds the minimum interior degree bound");

    return {lambda0, std::move(phi)};
}

/// Rayleigh quotient dirichlet_energy(u) / Σ_{x∈S̄} u²(x) for admissible,
/// not identically zero u. λ₀ is its minimum over the admissible class.
inline double rayleigh_quotient(const Network& net, const NodeField& u) {
    require_sized(net, u, "rayleigh_quotient");
    for (std::size_t z : net.boundary())
        if (u[z] != 0.0)
            throw Error("rayleigh_quotient: field nonzero on boundary vertex '" + net.label(z) +
                        "'");
    const double mass = sum_sq(u);
    if (mass == 0.0) throw Error("rayleigh_quotient: field is identically zero");
    return dirichlet_energy(net, u) / mass;
}

}  // namespace netblow

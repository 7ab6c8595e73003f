#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "netblow/nonlinearity.hpp"
#include "netblow/operators.hpp"
#include "netblow/spectral.hpp"

namespace netblow {

/// J(u) = −(1/4) Σ_{x,y∈S̄} [u(x)−u(y)]² ω(x,y) + Σ_{x∈S̄} [F(u(x)) − γ]
///      = −(1/2)·dirichlet_energy(u) + Σ_{x∈S̄} (F(u(x)) − γ).
/// J(0) > 0 is the blow-up hypothesis of the concavity method.
inline double J(const Network& net, const Nonlinearity& f, double gamma, const NodeField& u) {
    require_sized(net, u, "J");
    if (!(gamma > 0.0)) throw Error("J: gamma must be positive");
    double sum_f = 0.0;
    for (double v : u) sum_f += f.F(v);
    return -0.5 * dirichlet_energy(net, u) + sum_f -
           gamma * static_cast<double>(net.size());
}

/// The concavity-method constants for a qualified run: ξ = √(α/2) − 1, the
/// explicit constant
///   M = [α/(α−2)]·(1+√(1+(α−2)/2))·(Σu₀²)² / (2α·J(0))
/// and the blow-up-time bound T* <= M/(ξ·Σu₀²). Any larger M also works;
/// the exact value is kept for reproducibility of the stated bound.
struct ConcavityReport {
    double J0;
    double xi;
    double M;
    double Tstar_bound;
    double sum_u0_sq;
};

inline ConcavityReport concavity_report(const Network& net, const Nonlinearity& f,
                                        const ConditionCParams& params, const NodeField& u0,
                                        double lambda0) {
    params.validate(Condition::C, lambda0);
    const double j0 = J(net, f, params.gamma, u0);
    if (!(j0 > 0.0))
        throw Error("concavity_report: J(0) = " + g17(j0) +
                    " is not positive; the blow-up hypothesis fails and no bound exists");
    const double alpha = params.alpha;
    const double xi = std::sqrt(alpha / 2.0) - 1.0;
    const double mass = sum_sq(u0);
    const double M = (alpha / (alpha - 2.0)) * (1.0 + std::sqrt(1.0 + (alpha - 2.0) / 2.0)) *
                     mass * mass / (2.0 * alpha * j0);
    return {j0, xi, M, M / (xi * mass), mass};
}

/// Convenience overload computing λ₀ from the network.
inline ConcavityReport concavity_report(const Network& net, const Nonlinearity& f,
                                        const ConditionCParams& params, const NodeField& u0) {
    return concavity_report(net, f, params, u0, first_eigenpair(net).lambda0);
}

struct TimedField {
    double t;
    NodeField u;
};

struct IdentityResiduals {
    double eq12;        // |d/dt Σu² − (−2·energy + 2Σ u f(u))|
    double eq13;        // |dJ/dt − Σ u_t²|
    double eq12_scale;  // max(1, |rhs|) at the center state
    double eq13_scale;
};

/// Residuals of the two energy identities on a uniform slice of three
/// consecutive accepted states. Time derivatives use centered differences
/// (second order in the slice spacing); the right sides are evaluated
/// exactly, with u_t = Δ_ω u + f(u) on S and zero on the boundary.
inline IdentityResiduals identity_residuals(const Network& net, const Nonlinearity& f,
                                            const TimedField& prev, const TimedField& mid,
                                            const TimedField& next) {
    require_sized(net, prev.u, "identity_residuals");
    require_sized(net, mid.u, "identity_residuals");
    require_sized(net, next.u, "identity_residuals");
    const double h1 = mid.t - prev.t;
    const double h2 = next.t - mid.t;
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw Error("identity_residuals: slice times must be strictly increasing");
    if (std::abs(h1 - h2) > 1e-9 * std::max(h1, h2))
        throw Error("identity_residuals: slice is not uniformly spaced");
    const double h = h1;

    const double d_sum_u2 = (sum_sq(next.u) - sum_sq(prev.u)) / (2.0 * h);
    double sum_uf = 0.0;
    for (double v : mid.u) sum_uf += v * f.f(v);
    const double rhs12 = -2.0 * dirichlet_energy(net, mid.u) + 2.0 * sum_uf;

    auto j_free = [&](const NodeField& u) {
        // gamma-free J; the constant cancels in the centered difference
        double sum_f = 0.0;
        for (double v : u) sum_f += f.F(v);
        return -0.5 * dirichlet_energy(net, u) + sum_f;
    };
    const double d_j = (j_free(next.u) - j_free(prev.u)) / (2.0 * h);
    NodeField lap = laplacian(net, mid.u);
    double sum_ut2 = 0.0;
    for (std::size_t x : net.interior()) {
        const double ut = lap[x] + f.f(mid.u[x]);
        sum_ut2 += ut * ut;
    }

    IdentityResiduals r;
    r.eq12 = std::abs(d_sum_u2 - rhs12);
    r.eq13 = std::abs(d_j - sum_ut2);
    r.eq12_scale = std::max(1.0, std::abs(rhs12));
    r.eq13_scale = std::max(1.0, sum_ut2);
    return r;
}

/// Worst margin min_t [I''(t)·I(t) − (1+ξ)·I'(t)²] over a series; the
/// concavity theorem predicts strictly positive values for a qualified run
/// with M chosen per the report.
inline double concavity_certificate(std::span<const double> I, std::span<const double> Iprime,
                                    std::span<const double> Ipp, double xi) {
    if (I.empty() || I.size() != Iprime.size() || I.size() != Ipp.size())
        throw Error("concavity_certificate: empty or mismatched series");
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < I.size(); ++k)
        worst = std::min(worst, Ipp[k] * I[k] - (1.0 + xi) * Iprime[k] * Iprime[k]);
    return worst;
}

}  // namespace netblow

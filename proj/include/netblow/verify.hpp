#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "netblow/functionals.hpp"
#include "netblow/random_instances.hpp"
#include "netblow/solver.hpp"
#include "netblow/spectral.hpp"

namespace netblow {

struct SuiteResult {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_margin = 0.0;

    bool passed() const { return failures == 0; }
};

namespace detail {

inline SplitMix64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial) {
    return SplitMix64(seed).split((suite << 32) | trial);
}

}  // namespace detail

/// Randomized suites behind `verify`: the summation-by-parts residual, the
/// eigenpair contract, Rayleigh minimality, comparison-principle trials,
/// and the energy-identity residuals. Deterministic per (seed, trial index).
inline std::vector<SuiteResult> run_verification_suites(std::uint64_t seed, std::size_t trials,
                                                        const Nonlinearity& f_compare) {
    std::vector<SuiteResult> out;

    {
        SuiteResult s{"pairing_identity", trials, 0, 0.0};
        for (std::size_t k = 0; k < trials; ++k) {
            auto rng = detail::trial_rng(seed, 1, k);
            Network net = random_connected_network(rng, 3, 50, 0.1, 10.0);
            NodeField a = random_field(rng, net, -3.0, 3.0);
            NodeField b = random_field(rng, net, -3.0, 3.0);
            const double res = pairing_identity_residual(net, a, b) /
                               pairing_identity_scale(net, a, b);
            s.worst_margin = std::max(s.worst_margin, res);
            if (res > 1e-12) ++s.failures;
        }
        out.push_back(std::move(s));
    }

    {
        const std::size_t n_graphs = std::min<std::size_t>(trials, 200);
        SuiteResult s{"eigenpair_contract", n_graphs, 0, 0.0};
        for (std::size_t k = 0; k < n_graphs; ++k) {
            auto rng = detail::trial_rng(seed, 2, k);
            Network net = random_connected_network(rng, 3, 30, 0.1, 10.0);
            try {
                auto pair = first_eigenpair(net);
                NodeField lap = laplacian(net, pair.phi0);
                double residual = 0.0, norm = 0.0;
                bool positive = true;
                for (std::size_t x : net.interior()) {
                    residual = std::max(residual,
                                        std::abs(-lap[x] - pair.lambda0 * pair.phi0[x]));
                    norm += pair.phi0[x] * pair.phi0[x];
                    positive = positive && pair.phi0[x] > 0.0;
                }
                const bool ok = residual <= 1e-10 * pair.lambda0 && positive &&
                                std::abs(norm - 1.0) <= 1e-12 &&
                                pair.lambda0 <= net.min_interior_degree() * (1.0 + 1e-12);
                s.worst_margin = std::max(s.worst_margin, residual / pair.lambda0);
                if (!ok) ++s.failures;
            } catch (const Error&) {
                ++s.failures;
            }
        }
        out.push_back(std::move(s));
    }

    {
        const std::size_t n_graphs = std::min<std::size_t>(trials, 200);
        SuiteResult s{"rayleigh_minimality", n_graphs, 0, 0.0};
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n_graphs; ++k) {
            auto rng = detail::trial_rng(seed, 3, k);
            Network net = random_connected_network(rng, 3, 30, 0.1, 10.0);
            const double lambda0 = first_eigenpair(net).lambda0;
            for (int j = 0; j < 10; ++j) {
                NodeField u = random_admissible_field(rng, net, -1.0, 1.0);
                const double gap = rayleigh_quotient(net, u) - lambda0;
                worst = std::min(worst, gap);
                if (gap < -1e-10) ++s.failures;
            }
        }
        s.worst_margin = worst;
        out.push_back(std::move(s));
    }

    {
        SuiteResult s{"comparison_ordered", trials, 0, 0.0};
        SolveConfig cfg;
        cfg.t_end = 0.2;
        cfg.record_every = 0.02;
        for (std::size_t k = 0; k < trials; ++k) {
            auto rng = detail::trial_rng(seed, 4, k);
            Network net = random_connected_network(rng, 3, 12, 0.1, 2.0);
            NodeField v0(net.size(), 0.0), u0(net.size(), 0.0);
            for (std::size_t x : net.interior()) {
                v0[x] = rng.uniform(0.0, 0.5);
                u0[x] = v0[x] + rng.uniform(0.01, 0.05);
            }
            u0[net.interior()[rng.index(net.interior().size())]] += rng.uniform(0.1, 0.4);
            auto report = compare_runs(net, f_compare, u0, v0, cfg);
            if (!report.ordered || !report.strict_on_S.value_or(false)) {
                ++s.failures;
                if (report.first_violation)
                    s.worst_margin = std::min(s.worst_margin, report.first_violation->gap);
            }
        }
        out.push_back(std::move(s));
    }

    {
        const std::size_t n_runs = std::min<std::size_t>(trials, 100);
        SuiteResult s{"identity_residuals", n_runs, 0, 0.0};
        SolveConfig cfg;
        cfg.t_end = 0.05;
        cfg.record_every = 1e-3;
        cfg.rel_tol = 1e-10;
        cfg.abs_tol = 1e-12;
        for (std::size_t k = 0; k < n_runs; ++k) {
            auto rng = detail::trial_rng(seed, 5, k);
            Network net = random_connected_network(rng, 3, 8, 0.1, 2.0);
            NodeField u0 = random_admissible_field(rng, net, 0.1, 1.0);
            auto traj = integrate(net, f_compare, u0, cfg);
            const std::size_t mid = traj.samples.size() / 2;
            if (mid == 0 || mid + 1 >= traj.samples.size()) {
                ++s.failures;
                continue;
            }
            auto tf = [&](std::size_t i) {
                return TimedField{traj.samples[i].t, traj.samples[i].state};
            };
            auto r = identity_residuals(net, f_compare, tf(mid - 1), tf(mid), tf(mid + 1));
            const double worst =
                std::max(r.eq12 / r.eq12_scale, r.eq13 / r.eq13_scale);
            s.worst_margin = std::max(s.worst_margin, worst);
            if (worst > 1e-3) ++s.failures;
        }
        out.push_back(std::move(s));
    }

    return out;
}

}  // namespace netblow

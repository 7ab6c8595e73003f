#pragma once

#include <fstream>
#include <ostream>
#include <string>

#include "netblow/config.hpp"
#include "netblow/functionals.hpp"
#include "netblow/nonlinearity.hpp"
#include "netblow/solver.hpp"
#include "netblow/spectral.hpp"
#include "netblow/verify.hpp"

namespace netblow {

namespace detail {

inline int fail(std::ostream& err, const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
}

/// Condition params for a config: beta defaults to the maximal admissible
/// (alpha-2)*lambda0/2 when the key is absent.
inline ConditionCParams bind_params(const RunConfig& cfg, double lambda0) {
    ConditionCParams p;
    p.alpha = cfg.alpha();
    p.gamma = cfg.gamma();
    p.beta = cfg.beta().value_or(ConditionCParams::beta_max(p.alpha, lambda0));
    return p;
}

}  // namespace detail

/// `spectrum <graph>`: λ₀, interior degree range, and φ₀ as labeled CSV.
inline int cmd_spectrum(const std::string& graph_path, std::ostream& out, std::ostream& err) {
    try {
        Network net = load_network(graph_path);
        EigenPair pair = first_eigenpair(net);
        out << "# lambda0=" << g17(pair.lambda0) << '\n'
            << "# min_interior_degree=" << g17(net.min_interior_degree()) << '\n'
            << "# max_interior_degree=" << g17(net.max_interior_degree()) << '\n'
            << "vertex,label,value\n";
        for (std::size_t x = 0; x < net.size(); ++x)
            out << x << ',' << net.label(x) << ',' << g17(pair.phi0[x]) << '\n';
        return 0;
    } catch (const Error& e) {
        return detail::fail(err, e);
    }
}

/// `check <config>`: growth-condition verdicts, the β-constraint status,
/// the superlinear minorant, the f >= λu hypothesis, and the Osgood probe.
/// Verdicts are data, not errors: exit 0 whenever the inputs parse.
inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Network net = load_network(cfg.network_path());
        Nonlinearity f = cfg.nonlinearity();
        const double lambda0 = first_eigenpair(net).lambda0;
        ConditionCParams params = detail::bind_params(cfg, lambda0);
        const double u_max = cfg.u_max();
        const std::size_t grid_n = cfg.grid_n();

        out << "item,verdict,value1,value2\n";
        out << "lambda0,," << g17(lambda0) << ",\n";
        for (Condition which : {Condition::A, Condition::B, Condition::C}) {
            auto cert = check_condition(f, which, params, lambda0, u_max, grid_n);
            out << "condition_" << condition_name(which) << ','
                << (cert.holds_on_grid ? "holds" : "fails") << ',' << g17(cert.worst_margin)
                << ',' << g17(cert.worst_u) << '\n';
            if (cert.analytic)
                out << "condition_" << condition_name(which) << "_analytic,"
                    << (*cert.analytic ? "holds" : "fails") << ",,\n";
        }
        const double beta_max = ConditionCParams::beta_max(params.alpha, lambda0);
        out << "beta_constraint," << (params.beta <= beta_max ? "ok" : "violated") << ','
            << g17(params.beta) << ',' << g17(beta_max) << '\n';

        if (auto minorant = superlinear_minorant(f, params.alpha, u_max, grid_n))
            out << "minorant,found," << g17(minorant->delta) << ',' << g17(minorant->m) << '\n';
        else
            out << "minorant,absent,,\n";

        auto bound = linear_lower_bound(f, lambda0, u_max, grid_n);
        out << "f_ge_lambda_u," << (bound.holds_on_grid ? "holds" : "fails") << ','
            << g17(bound.inf_ratio) << ',' << g17(bound.worst_u) << '\n';

        // the probe is undefined when f vanishes on the ray (pure diffusion);
        // that is a verdict, not a configuration error
        try {
            auto osgood = osgood_test(f, cfg.osgood_m(), cfg.osgood_horizon());
            out << "osgood," << (osgood.diverges ? "diverges" : "converges") << ','
                << g17(osgood.estimate) << ',' << osgood.windows << '\n';
        } catch (const Error& e) {
            out << "osgood,undefined,,\n# osgood_error=" << e.what() << '\n';
        }
        return 0;
    } catch (const Error& e) {
        return detail::fail(err, e);
    }
}

/// `find-initial <config>`: scan for constant-on-S initial data with
/// J(0) > 0. Absence is a valid answer (exit 0 either way).
inline int cmd_find_initial(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Network net = load_network(cfg.network_path());
        Nonlinearity f = cfg.nonlinearity();
        auto u0 = find_initial_data(net, f, cfg.gamma(), cfg.v_hi(), cfg.grid_n());
        if (!u0) {
            out << "# result=absent\n";
            return 0;
        }
        const double v0 = (*u0)[net.interior().front()];
        out << "# result=found\n"
            << "# v0=" << g17(v0) << '\n'
            << "# J0=" << g17(J(net, f, cfg.gamma(), *u0)) << '\n'
            << "vertex,label,value\n";
        for (std::size_t x = 0; x < net.size(); ++x)
            out << x << ',' << net.label(x) << ',' << g17((*u0)[x]) << '\n';
        return 0;
    } catch (const Error& e) {
        return detail::fail(err, e);
    }
}

/// `simulate <config>`: resolve initial data, bind the condition params,
/// compute J(0) and (when J(0) > 0) the concavity report, integrate, write
/// the trajectory CSV and a summary. Exit 0 on a completed horizon, 2 on
/// detected blow-up, 3 on step failure.
inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Network net = load_network(cfg.network_path());
        Nonlinearity f = cfg.nonlinearity();
        const double lambda0 = first_eigenpair(net).lambda0;
        ConditionCParams params = detail::bind_params(cfg, lambda0);
        const double gamma = params.gamma;

        NodeField u0;
        if (cfg.init_mode() == RunConfig::InitMode::Auto) {
            auto found = find_initial_data(net, f, gamma, cfg.v_hi(), cfg.grid_n());
            if (!found) {
                out << "# result=no qualifying initial data found\n";
                return 0;
            }
            u0 = std::move(*found);
        } else {
            u0 = cfg.explicit_initial_data(net);
        }

        auto certC = check_condition(f, Condition::C, params, lambda0, cfg.u_max(), cfg.grid_n());
        const double J0 = J(net, f, gamma, u0);

        FunctionalSpec fx;
        fx.gamma = gamma;
        std::optional<ConcavityReport> report;
        if (J0 > 0.0) {
            report = concavity_report(net, f, params, u0, lambda0);
            fx.M = report->M;
            fx.xi = report->xi;
        }

        Trajectory traj = integrate(net, f, u0, cfg.solve_config(), fx);

        const std::string csv_path = cfg.out_path();
        {
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw Error("cannot write trajectory CSV '" + csv_path + "'");
            write_trajectory_csv(csv, net, traj);
        }

        out << "# network=" << cfg.network_path() << '\n'
            << "# vertices=" << net.size() << " interior=" << net.interior().size() << '\n'
            << "# lambda0=" << g17(lambda0) << '\n'
            << "# f=" << f.describe() << '\n'
            << "# alpha=" << g17(params.alpha) << " beta=" << g17(params.beta)
            << " gamma=" << g17(gamma) << '\n'
            << "# condition_C_grid=" << (certC.holds_on_grid ? "holds" : "fails") << '\n';
        if (certC.analytic)
            out << "# condition_C_analytic=" << (*certC.analytic ? "holds" : "fails") << '\n';
        out << "# sum_u0_sq=" << g17(sum_sq(u0)) << '\n'
            << "# J0=" << g17(J0) << '\n';
        if (report)
            out << "# xi=" << g17(report->xi) << '\n'
                << "# M=" << g17(report->M) << '\n'
                << "# Tstar_bound=" << g17(report->Tstar_bound) << '\n';
        out << "# outcome=" << outcome_name(traj.outcome) << '\n';
        if (traj.outcome == Outcome::BlowupDetected) {
            out << "# T_num=" << g17(traj.T_num) << '\n';
            if (report)
                out << "# T_num_le_bound="
                    << (traj.T_num <= report->Tstar_bound ? "true" : "false") << '\n';
        }
        if (traj.outcome == Outcome::StepFailure) out << "# t_fail=" << g17(traj.t_fail) << '\n';
        out << "# integral_u2_at_end=" << g17(traj.integral_u2_at_end) << '\n'
            << "# trajectory_csv=" << csv_path << '\n';

        switch (traj.outcome) {
            case Outcome::CompletedHorizon: return 0;
            case Outcome::BlowupDetected: return 2;
            case Outcome::StepFailure: return 3;
        }
        return 0;
    } catch (const Error& e) {
        return detail::fail(err, e);
    }
}

/// `verify <config> [--trials N] [--seed K]`: the randomized suites with a
/// fixed seed; exit 0 iff every suite passes.
inline int cmd_verify(const RunConfig& cfg, std::size_t trials, std::uint64_t seed,
                      std::ostream& out, std::ostream& err) {
    try {
        Nonlinearity f = cfg.has("f") ? cfg.nonlinearity() : Nonlinearity::power(2.0);
        auto suites = run_verification_suites(seed, trials, f);
        out << "suite,trials,failures,worst_margin\n";
        bool all = true;
        for (const auto& s : suites) {
            out << s.name << ',' << s.trials << ',' << s.failures << ',' << g17(s.worst_margin)
                << '\n';
            all = all && s.passed();
        }
        out << "# seed=" << seed << '\n';
        out << "# overall=" << (all ? "pass" : "fail") << '\n';
        return all ? 0 : 1;
    } catch (const Error& e) {
        return detail::fail(err, e);
    }
}

}  // namespace netblow

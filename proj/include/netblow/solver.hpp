#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "netblow/functionals.hpp"
#include "netblow/nonlinearity.hpp"
#include "netblow/operators.hpp"

namespace netblow {

struct SolveConfig {
    double t_end = 1.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double blowup_sup_threshold = 1e12;
    double dt_min = 1e-14;
    double record_every = 0.01;

    void validate() const {
        if (!(t_end > 0.0) || !(rel_tol > 0.0) || !(abs_tol > 0.0) ||
            !(blowup_sup_threshold > 0.0) || !(dt_min > 0.0) || !(record_every > 0.0))
            throw Error("solve config: all fields must be positive");
        if (!(dt_min < t_end)) throw Error("solve config: dt_min must be below t_end");
    }
};

/// What to monitor along a run: γ enters J; M and ξ come from a concavity
/// report and switch on the Eq.-(17) certificate margin.
struct FunctionalSpec {
    double gamma = 0.0;
    std::optional<double> M;
    std::optional<double> xi;
};

enum class Outcome { CompletedHorizon, BlowupDetected, StepFailure };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::CompletedHorizon: return "completed_horizon";
        case Outcome::BlowupDetected: return "blowup_detected";
        case Outcome::StepFailure: return "step_failure";
    }
    return "?";
}

struct Sample {
    double t = 0.0;
    NodeField state;             // boundary entries exactly 0
    double sum_u2 = 0.0;
    double sum_ut2 = 0.0;
    double J = 0.0;
    double I = 0.0;              // ∫₀ᵗ Σu² ds + M
    double Iprime = 0.0;         // = Σu²
    double Ipp = 0.0;            // −2·energy + 2Σ u f(u), exact
    double integral_ut2 = 0.0;   // ∫₀ᵗ Σu_t² ds
    double certificate_margin = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<Sample> samples;
    Outcome outcome = Outcome::CompletedHorizon;
    double T_num = std::numeric_limits<double>::quiet_NaN();
    double t_fail = std::numeric_limits<double>::quiet_NaN();
    double integral_u2_at_end = 0.0;
    double integral_ut2_at_end = 0.0;
    double min_certificate_margin = std::numeric_limits<double>::quiet_NaN();
    double min_interior_value = std::numeric_limits<double>::infinity();
    double max_abs_value = 0.0;
    /// min over consecutive accepted steps of (J(t+h) − J(t)) / scale;
    /// the theory makes J nondecreasing along solutions.
    double worst_J_step = std::numeric_limits<double>::infinity();
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    double final_time() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// Stateful form of the blow-up detection rule: declare blow-up when the
/// sup norm of an accepted state reaches the threshold, or when the
/// controller step collapses below dt_min while the local error estimate
/// grew monotonically over the last 5 rejections. T_num is the last
/// accepted time.
class BlowupDetector {
public:
    BlowupDetector(double sup_threshold, double dt_min)
        : threshold_(sup_threshold), dt_min_(dt_min) {}

    void on_accepted(double t, double sup_abs) {
        last_t_ = t;
        last_sup_ = sup_abs;
        rejections_.clear();
    }

    void on_rejected(double err_estimate) { rejections_.push_back(err_estimate); }

    std::optional<double> detect(double sup_abs, double dt_current) const {
        if (sup_abs >= threshold_) return last_t_;
        if (dt_current < dt_min_ && rejections_.size() >= 5) {
            bool growing = true;
            const std::size_t n = rejections_.size();
            for (std::size_t i = n - 4; i < n; ++i)
                if (!(rejections_[i] > rejections_[i - 1])) growing = false;
            if (growing) return last_t_;
        }
        return std::nullopt;
    }

    double last_accepted_time() const { return last_t_; }

private:
    double threshold_;
    double dt_min_;
    double last_t_ = 0.0;
    double last_sup_ = 0.0;
    std::vector<double> rejections_;
};

namespace detail {

/// Dirichlet interior system for u_t = Δ_ω u + f(u), boundary rows pinned
/// to zero: for x ∈ S,  u_t(x) = Σ_{y∈S} ω(x,y) u(y) − d_ω(x) u(x) + f(u(x)).
struct InteriorSystem {
    explicit InteriorSystem(const Network& net) : vertices(net.interior()) {
        const std::size_t m = vertices.size();
        degree.resize(m);
        nbrs.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            degree[i] = net.degree(vertices[i]);
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                const double w = net.weight(vertices[i], vertices[j]);
                if (w > 0.0) nbrs[i].push_back({j, w});
            }
        }
    }

    void rhs(const Nonlinearity& f, std::span<const double> y, std::span<double> out) const {
        for (std::size_t i = 0; i < degree.size(); ++i) {
            double acc = -degree[i] * y[i] + f.f(y[i]);
            for (const auto& [j, w] : nbrs[i]) acc += w * y[j];
            out[i] = acc;
        }
    }

    std::vector<std::size_t> vertices;
    std::vector<double> degree;
    std::vector<std::vector<std::pair<std::size_t, double>>> nbrs;
};

/// Dormand–Prince 5(4) embedded pair with FSAL.
class Dopri5 {
public:
    explicit Dopri5(std::size_t dim)
        : k2_(dim), k3_(dim), k4_(dim), k5_(dim), k6_(dim), tmp_(dim) {}

    /// One trial step. Returns the weighted RMS error estimate (infinity on
    /// non-finite values); fills y_new and k7 = rhs(y_new).
    template <class RHS>
    double step(RHS&& rhs, const std::vector<double>& y, const std::vector<double>& k1,
                double dt, std::vector<double>& y_new, std::vector<double>& k7, double abs_tol,
                double rel_tol) {
        const std::size_t n = y.size();
        constexpr double a21 = 1.0 / 5.0;
        constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                         a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                         a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                         a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
        constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                         e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * a21 * k1[i];
        rhs(tmp_, k2_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + dt * (a31 * k1[i] + a32 * k2_[i]);
        rhs(tmp_, k3_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + dt * (a41 * k1[i] + a42 * k2_[i] + a43 * k3_[i]);
        rhs(tmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + dt * (a51 * k1[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs(tmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + dt * (a61 * k1[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                   a65 * k5_[i]);
        rhs(tmp_, k6_);
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + dt * (a71 * k1[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                    a76 * k6_[i]);
        rhs(y_new, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = dt * (e1 * k1[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                   e6 * k6_[i] + e7 * k7[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (e / sc) * (e / sc);
            if (!std::isfinite(y_new[i])) return std::numeric_limits<double>::infinity();
        }
        err = std::sqrt(err / static_cast<double>(n));
        return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
    }

private:
    std::vector<double> k2_, k3_, k4_, k5_, k6_, tmp_;
};

/// Standard PI step controller with safety 0.9 (dopri5 exponents).
struct StepController {
    double err_old = 1.0e-4;

    double accept(double dt, double err) {
        err = std::max(err, 1e-16);
        double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_old, 0.04);
        fac = std::clamp(fac, 0.2, 5.0);
        err_old = std::max(err, 1e-4);
        return dt * fac;
    }

    double reject(double dt, double err) const {
        if (!std::isfinite(err)) return dt * 0.1;
        return dt * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
};

inline double initial_step(const std::vector<double>& y, const std::vector<double>& k1,
                           const SolveConfig& cfg) {
    double d0 = 0.0, d1 = 0.0;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        d0 += (y[i] / sc) * (y[i] / sc);
        d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double dt = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    if (!std::isfinite(dt)) dt = 1e-6;
    return std::clamp(dt, cfg.dt_min, cfg.t_end);
}

struct LoopResult {
    Outcome outcome = Outcome::CompletedHorizon;
    double T_num = std::numeric_limits<double>::quiet_NaN();
    double t_fail = std::numeric_limits<double>::quiet_NaN();
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Shared adaptive time loop. Steps are clipped so that accepted times land
/// exactly on the recording cadence and on t_end; on_accept sees every
/// accepted state (record flag set on cadence boundaries and at t = 0).
template <class RHS, class OnAccept>
LoopResult adaptive_loop(RHS&& rhs, std::vector<double> y, const SolveConfig& cfg,
                         OnAccept&& on_accept) {
    LoopResult res;
    const std::size_t n = y.size();
    const double time_eps = 1e-12 * std::max(1.0, cfg.t_end);

    Dopri5 stepper(n);
    StepController controller;
    BlowupDetector detector(cfg.blowup_sup_threshold, cfg.dt_min);

    std::vector<double> k1(n), y_new(n), k7(n);
    rhs(y, k1);

    auto sup_abs = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };

    double t = 0.0;
    on_accept(0.0, y, k1, true);
    detector.on_accepted(0.0, sup_abs(y));
    if (auto T = detector.detect(sup_abs(y), cfg.t_end)) {
        res.outcome = Outcome::BlowupDetected;
        res.T_num = *T;
        return res;
    }

    std::size_t rec_idx = 1;
    double dt_ctrl = initial_step(y, k1, cfg);
    constexpr std::size_t step_budget = 100'000'000;

    for (std::size_t iter = 0; iter < step_budget; ++iter) {
        if (t >= cfg.t_end - time_eps) {
            res.outcome = Outcome::CompletedHorizon;
            return res;
        }
        const double t_rec = static_cast<double>(rec_idx) * cfg.record_every;
        const double t_target = std::min(t_rec, cfg.t_end);
        const double gap = t_target - t;
        double dt = dt_ctrl;
        const bool hits = dt >= gap;
        if (hits) dt = gap;

        const double err = stepper.step(rhs, y, k1, dt, y_new, k7, cfg.abs_tol, cfg.rel_tol);
        if (err <= 1.0) {
            t = hits ? t_target : t + dt;
            y.swap(y_new);
            k1.swap(k7);
            ++res.accepted;
            const double sup = sup_abs(y);
            detector.on_accepted(t, sup);
            bool record = false;
            while (static_cast<double>(rec_idx) * cfg.record_every <= t + time_eps) {
                record = true;
                ++rec_idx;
            }
            on_accept(t, y, k1, record);
            if (auto T = detector.detect(sup, dt_ctrl)) {
                res.outcome = Outcome::BlowupDetected;
                res.T_num = *T;
                return res;
            }
            dt_ctrl = controller.accept(dt, err);
        } else {
            ++res.rejected;
            detector.on_rejected(err);
            dt_ctrl = controller.reject(dt, err);
            if (dt_ctrl < cfg.dt_min) {
                if (auto T = detector.detect(0.0, dt_ctrl)) {
                    res.outcome = Outcome::BlowupDetected;
                    res.T_num = *T;
                    return res;
                }
                res.outcome = Outcome::StepFailure;
                res.t_fail = t;
                return res;
            }
        }
    }
    res.outcome = Outcome::StepFailure;
    res.t_fail = t;
    return res;
}

/// Evaluates Σu², J, I, I'', the certificate margin and the running
/// integrals at every accepted state; records rows at the cadence and
/// keeps the final accepted state for finalize().
class FunctionalMonitor {
public:
    FunctionalMonitor(const Network& net, const Nonlinearity& f, const FunctionalSpec& fx,
                      Trajectory& traj)
        : net_(net), f_(f), fx_(fx), traj_(traj), field_(net.size(), 0.0) {
        monitored_ = fx_.M.has_value() && fx_.xi.has_value();
        if (monitored_) traj_.min_certificate_margin = std::numeric_limits<double>::infinity();
    }

    void on_state(double t, std::span<const double> y, std::span<const double> ut, bool record) {
        const auto& S = net_.interior();
        for (std::size_t i = 0; i < S.size(); ++i) field_[S[i]] = y[i];

        double sum_u2 = 0.0, sum_ut2 = 0.0, sum_uf = 0.0, sum_F = 0.0;
        double min_val = std::numeric_limits<double>::infinity();
        double max_abs = 0.0;
        for (std::size_t i = 0; i < S.size(); ++i) {
            sum_u2 += y[i] * y[i];
            sum_ut2 += ut[i] * ut[i];
            sum_uf += y[i] * f_.f(y[i]);
            sum_F += f_.F(y[i]);
            min_val = std::min(min_val, y[i]);
            max_abs = std::max(max_abs, std::abs(y[i]));
        }
        const double energy = dirichlet_energy(net_, field_);

        if (have_prev_) {
            const double h = t - prev_.t;
            integral_u2_ += 0.5 * h * (prev_.sum_u2 + sum_u2);
            integral_ut2_ += 0.5 * h * (prev_.sum_ut2 + sum_ut2);
        }

        Sample row;
        row.t = t;
        row.state = field_;
        row.sum_u2 = sum_u2;
        row.sum_ut2 = sum_ut2;
        row.J = -0.5 * energy + sum_F - fx_.gamma * static_cast<double>(net_.size());
        row.I = integral_u2_ + fx_.M.value_or(0.0);
        row.Iprime = sum_u2;
        row.Ipp = -2.0 * energy + 2.0 * sum_uf;
        row.integral_ut2 = integral_ut2_;
        if (monitored_) {
            row.certificate_margin = row.Ipp * row.I - (1.0 + *fx_.xi) * sum_u2 * sum_u2;
            traj_.min_certificate_margin =
                std::min(traj_.min_certificate_margin, row.certificate_margin);
        }

        if (have_prev_) {
            const double scale = std::max({1.0, std::abs(prev_.J), std::abs(row.J)});
            traj_.worst_J_step = std::min(traj_.worst_J_step, (row.J - prev_.J) / scale);
        }
        traj_.min_interior_value = std::min(traj_.min_interior_value, min_val);
        traj_.max_abs_value = std::max(traj_.max_abs_value, max_abs);

        if (record) traj_.samples.push_back(row);
        prev_ = std::move(row);
        have_prev_ = true;
    }

    void finalize(const LoopResult& loop) {
        if (have_prev_ && (traj_.samples.empty() || traj_.samples.back().t != prev_.t))
            traj_.samples.push_back(prev_);
        traj_.outcome = loop.outcome;
        traj_.T_num = loop.T_num;
        traj_.t_fail = loop.t_fail;
        traj_.accepted_steps = loop.accepted;
        traj_.rejected_steps = loop.rejected;
        traj_.integral_u2_at_end = integral_u2_;
        traj_.integral_ut2_at_end = integral_ut2_;
    }

private:
    const Network& net_;
    const Nonlinearity& f_;
    FunctionalSpec fx_;
    Trajectory& traj_;
    NodeField field_;
    bool monitored_ = false;
    bool have_prev_ = false;
    Sample prev_;
    double integral_u2_ = 0.0;
    double integral_ut2_ = 0.0;
};

}  // namespace detail

/// Integrates u_t = Δ_ω u + f(u) on S with u = 0 on ∂S from nonnegative,
/// nontrivial initial data, with adaptive Dormand–Prince 5(4) stepping.
/// Accepted times land exactly on the recording cadence, so recorded states
/// are accepted states; boundary entries are exactly zero throughout.
inline Trajectory integrate(const Network& net, const Nonlinearity& f, const NodeField& u0,
                            const SolveConfig& cfg, const FunctionalSpec& fx = {}) {
    cfg.validate();
    require_sized(net, u0, "integrate");
    for (std::size_t z : net.boundary())
        if (u0[z] != 0.0)
            throw Error("integrate: initial data nonzero on boundary vertex '" + net.label(z) +
                        "'");
    bool nontrivial = false;
    for (std::size_t x : net.interior()) {
        if (u0[x] < 0.0)
            throw Error("integrate: initial data negative at vertex '" + net.label(x) + "'");
        if (u0[x] > 0.0) nontrivial = true;
    }
    if (!nontrivial) throw Error("integrate: initial data is identically zero");

    detail::InteriorSystem sys(net);
    const std::size_t ns = sys.vertices.size();
    std::vector<double> y(ns);
    for (std::size_t i = 0; i < ns; ++i) y[i] = u0[sys.vertices[i]];

    Trajectory traj;
    detail::FunctionalMonitor monitor(net, f, fx, traj);
    auto rhs = [&](const std::vector<double>& state, std::vector<double>& out) {
        sys.rhs(f, state, out);
    };
    auto on_accept = [&](double t, const std::vector<double>& state,
                         const std::vector<double>& deriv, bool record) {
        monitor.on_state(t, state, deriv, record);
    };
    auto loop = detail::adaptive_loop(rhs, std::move(y), cfg, on_accept);
    monitor.finalize(loop);
    return traj;
}

struct PicardResult {
    double t0;
    double t0_max;                  // contraction bound 1/C₁
    double contraction_constant;    // C₁ = 2|S̄|·maxω + L
    std::vector<double> times;      // uniform grid on [0, t0]
    std::vector<NodeField> states;  // fixed point sampled on the grid
    int iterations;
    double final_delta;             // sup-norm gap of the last update
};

/// Picard iteration of D[u](x,t) = u₀(x) + ∫₀ᵗ Δ_ω u ds + ∫₀ᵗ f(u) ds
/// on a uniform 1024-interval grid with composite trapezoid quadrature,
/// run to a sup-norm fixed point. This is the local-existence oracle: it is
/// independent of the Runge–Kutta path and is restricted to one contraction
/// window C₁·t0 < 1 with C₁ = 2|S̄|·maxω + lipschitz(3·max|u₀|).
inline PicardResult picard_local(const Network& net, const Nonlinearity& f, const NodeField& u0,
                                 double t0, double picard_tol) {
    require_sized(net, u0, "picard_local");
    for (std::size_t z : net.boundary())
        if (u0[z] != 0.0)
            throw Error("picard_local: initial data nonzero on boundary vertex '" +
                        net.label(z) + "'");
    if (!(picard_tol > 0.0)) throw Error("picard_local: tolerance must be positive");

    double max_u0 = 0.0;
    for (double v : u0) max_u0 = std::max(max_u0, std::abs(v));
    const double L = f.lipschitz_on(3.0 * max_u0);
    const double C1 = 2.0 * static_cast<double>(net.size()) * net.max_weight() + L;
    const double t0_max = 1.0 / C1;
    if (!(t0 > 0.0)) throw Error("picard_local: t0 must be positive");
    if (!(C1 * t0 < 1.0))
        throw Error("picard_local: t0 = " + g17(t0) + " is not inside the contraction window; "
                    "largest admissible t0 is " + g17(t0_max));

    constexpr std::size_t intervals = 1024;
    const double dt = t0 / static_cast<double>(intervals);
    const std::size_t nodes = intervals + 1;
    const std::size_t n = net.size();
    const auto& S = net.interior();

    PicardResult res;
    res.t0 = t0;
    res.t0_max = t0_max;
    res.contraction_constant = C1;
    res.times.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) res.times[j] = dt * static_cast<double>(j);

    std::vector<NodeField> cur(nodes, u0);
    std::vector<NodeField> next(nodes, u0);
    NodeField g_prev(n, 0.0), g_cur(n, 0.0);
    std::vector<double> acc(n, 0.0);

    auto integrand = [&](const NodeField& u, NodeField& g) {
        NodeField lap = laplacian(net, u);
        for (std::size_t x : S) g[x] = lap[x] + f.f(u[x]);
    };

    int iterations = 0;
    double delta = std::numeric_limits<double>::infinity();
    for (iterations = 1; iterations <= 200; ++iterations) {
        std::fill(acc.begin(), acc.end(), 0.0);
        integrand(cur[0], g_prev);
        delta = 0.0;
        for (std::size_t j = 1; j < nodes; ++j) {
            integrand(cur[j], g_cur);
            for (std::size_t x : S) {
                acc[x] += 0.5 * dt * (g_prev[x] + g_cur[x]);
                const double v = u0[x] + acc[x];
                delta = std::max(delta, std::abs(v - cur[j][x]));
                next[j][x] = v;
            }
            g_prev.swap(g_cur);
        }
        cur.swap(next);
        if (delta < picard_tol) break;
    }
    if (delta >= picard_tol)
        throw Error("picard_local: iteration cap (200) exceeded, last delta = " + g17(delta));

    res.states = std::move(cur);
    res.iterations = iterations;
    res.final_delta = delta;
    return res;
}

struct OrderViolation {
    std::size_t vertex;
    double t;
    double gap;
};

struct CompareReport {
    bool ordered = true;
    /// Present only when some interior x* has u₀(x*) > v₀(x*).
    std::optional<bool> strict_on_S;
    std::optional<OrderViolation> first_violation;
    Trajectory u, v;
};

/// Co-integrates the ordered pair as one doubled system so both solutions
/// share the accepted-step sequence, then checks u >= v − tol at every
/// accepted state (tol = 1e−9·(1 + sup|u|)) and, when the strong-comparison
/// hypothesis holds at t = 0, strictness on S for t > 0.
inline CompareReport compare_runs(const Network& net, const Nonlinearity& f,
                                  const NodeField& u0, const NodeField& v0,
                                  const SolveConfig& cfg, const FunctionalSpec& fx = {}) {
    cfg.validate();
    require_sized(net, u0, "compare_runs");
    require_sized(net, v0, "compare_runs");
    for (std::size_t z : net.boundary())
        if (u0[z] != 0.0 || v0[z] != 0.0)
            throw Error("compare_runs: initial data nonzero on boundary vertex '" +
                        net.label(z) + "'");
    bool strict_hypothesis = false;
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (u0[x] < v0[x])
            throw Error("compare_runs: initial ordering violated at vertex '" + net.label(x) +
                        "'");
        if (v0[x] < 0.0)
            throw Error("compare_runs: lower initial data negative at vertex '" + net.label(x) +
                        "'");
    }
    for (std::size_t x : net.interior())
        if (u0[x] > v0[x]) strict_hypothesis = true;

    detail::InteriorSystem sys(net);
    const std::size_t ns = sys.vertices.size();
    std::vector<double> y(2 * ns);
    for (std::size_t i = 0; i < ns; ++i) {
        y[i] = u0[sys.vertices[i]];
        y[ns + i] = v0[sys.vertices[i]];
    }

    CompareReport report;
    if (strict_hypothesis) report.strict_on_S = true;
    detail::FunctionalMonitor monitor_u(net, f, fx, report.u);
    detail::FunctionalMonitor monitor_v(net, f, fx, report.v);

    double running_sup_u = 0.0;
    auto rhs = [&](const std::vector<double>& state, std::vector<double>& out) {
        std::span<const double> s(state);
        std::span<double> o(out);
        sys.rhs(f, s.first(ns), o.first(ns));
        sys.rhs(f, s.subspan(ns), o.subspan(ns));
    };
    auto on_accept = [&](double t, const std::vector<double>& state,
                         const std::vector<double>& deriv, bool record) {
        std::span<const double> s(state);
        std::span<const double> d(deriv);
        monitor_u.on_state(t, s.first(ns), d.first(ns), record);
        monitor_v.on_state(t, s.subspan(ns), d.subspan(ns), record);

        for (std::size_t i = 0; i < ns; ++i)
            running_sup_u = std::max(running_sup_u, std::abs(state[i]));
        const double tol = 1e-9 * (1.0 + running_sup_u);
        for (std::size_t i = 0; i < ns; ++i) {
            const double gap = state[i] - state[ns + i];
            if (gap < -tol && !report.first_violation) {
                report.ordered = false;
                report.first_violation = OrderViolation{sys.vertices[i], t, gap};
            }
            if (t > 0.0 && report.strict_on_S.has_value() && gap <= tol)
                report.strict_on_S = false;
        }
    };
    auto loop = detail::adaptive_loop(rhs, std::move(y), cfg, on_accept);
    monitor_u.finalize(loop);
    monitor_v.finalize(loop);
    return report;
}

/// Trajectory CSV: one row per recorded sample, trailing outcome comments.
inline void write_trajectory_csv(std::ostream& out, const Network& net, const Trajectory& traj) {
    out << "t";
    for (std::size_t x = 0; x < net.size(); ++x) out << ',' << net.label(x);
    out << ",sum_u2,J,I,Iprime,Iprimeprime,certificate_margin\n";
    for (const auto& s : traj.samples) {
        out << g17(s.t);
        for (double v : s.state) out << ',' << g17(v);
        out << ',' << g17(s.sum_u2) << ',' << g17(s.J) << ',' << g17(s.I) << ','
            << g17(s.Iprime) << ',' << g17(s.Ipp) << ',' << g17(s.certificate_margin) << '\n';
    }
    out << "# outcome=" << outcome_name(traj.outcome) << '\n';
    if (traj.outcome == Outcome::BlowupDetected) out << "# T_num=" << g17(traj.T_num) << '\n';
    if (traj.outcome == Outcome::StepFailure) out << "# t_fail=" << g17(traj.t_fail) << '\n';
    out << "# integral_u2_at_end=" << g17(traj.integral_u2_at_end) << '\n';
    if (std::isfinite(traj.min_certificate_margin))
        out << "# min_certificate_margin=" << g17(traj.min_certificate_margin) << '\n';
}

}  // namespace netblow

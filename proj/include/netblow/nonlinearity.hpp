#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netblow/network.hpp"
#include "netblow/operators.hpp"
#include "netblow/quadrature.hpp"
#include "netblow/util.hpp"

namespace netblow {

enum class Family { Power, Linear, Polynomial, Custom };

/// The reaction term f with its antiderivative F = ∫₀ᵘ f and a local
/// Lipschitz bound. Arguments below zero (integration transients) are
/// evaluated as f(max(u,0)); true solutions stay nonnegative by comparison
/// with the zero solution, so the clamp never changes the problem.
///
/// linear(0) is admitted for pure-diffusion runs; strict positivity of f
/// on u > 0 is enforced by the operations whose theory needs it.
class Nonlinearity {
public:
    /// f(u) = u^q. q >= 1 so that f stays locally Lipschitz at 0.
    static Nonlinearity power(double q) {
        if (!std::isfinite(q) || q < 1.0)
            throw Error("nonlinearity: power exponent must be finite and >= 1");
        Nonlinearity f;
        f.family_ = Family::Power;
        f.q_ = q;
        return f;
    }

    /// f(u) = a·u with a >= 0.
    static Nonlinearity linear(double a) {
        if (!std::isfinite(a) || a < 0.0)
            throw Error("nonlinearity: linear slope must be finite and >= 0");
        Nonlinearity f;
        f.family_ = Family::Linear;
        f.a_ = a;
        return f;
    }

    /// f(u) = Σ c_k u^k for k >= 1; coeffs[k-1] multiplies u^k. All
    /// coefficients nonnegative and at least one positive, so f(0) = 0 and
    /// f > 0 on u > 0 hold structurally.
    static Nonlinearity polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw Error("nonlinearity: polynomial needs coefficients");
        bool any = false;
        for (double c : coeffs) {
            if (!std::isfinite(c) || c < 0.0)
                throw Error("nonlinearity: polynomial coefficients must be finite and >= 0");
            if (c > 0.0) any = true;
        }
        if (!any) throw Error("nonlinearity: polynomial must have a positive coefficient");
        Nonlinearity f;
        f.family_ = Family::Polynomial;
        f.coeffs_ = std::move(coeffs);
        return f;
    }

    /// Arbitrary effect-free evaluator with f(0) = 0. F falls back to
    /// adaptive quadrature and the Lipschitz bound to a sampled
    /// difference-quotient estimate with a 1.25 safety factor.
    static Nonlinearity custom(std::function<double(double)> eval) {
        if (!eval) throw Error("nonlinearity: custom evaluator is empty");
        if (std::abs(eval(0.0)) > 1e-12) throw Error("nonlinearity: custom f(0) must be 0");
        Nonlinearity f;
        f.family_ = Family::Custom;
        f.custom_ = std::move(eval);
        return f;
    }

    /// "power:q" | "linear:a" | "poly:c1,c2,..."
    static Nonlinearity parse(std::string_view spec) {
        auto colon = spec.find(':');
        if (colon == std::string_view::npos)
            throw Error("nonlinearity: spec '" + std::string(spec) +
                        "' missing ':' (expected power:q, linear:a or poly:c1,c2,...)");
        std::string_view kind = spec.substr(0, colon);
        std::string_view rest = spec.substr(colon + 1);
        auto num = [&](std::string_view tok) {
            std::string s(tok);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                throw Error("nonlinearity: bad number '" + s + "' in spec");
            }
            if (used != s.size()) throw Error("nonlinearity: bad number '" + s + "' in spec");
            return v;
        };
        if (kind == "power") return power(num(rest));
        if (kind == "linear") return linear(num(rest));
        if (kind == "poly") {
            std::vector<double> cs;
            std::size_t start = 0;
            while (start <= rest.size()) {
                std::size_t comma = rest.find(',', start);
                if (comma == std::string_view::npos) comma = rest.size();
                cs.push_back(num(rest.substr(start, comma - start)));
                start = comma + 1;
                if (comma == rest.size()) break;
            }
            return polynomial(std::move(cs));
        }
        throw Error("nonlinearity: unknown family '" + std::string(kind) + "'");
    }

    double f(double u) const {
        u = std::max(u, 0.0);
        switch (family_) {
            case Family::Power: return std::pow(u, q_);
            case Family::Linear: return a_ * u;
            case Family::Polynomial: {
                double acc = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 0;) acc = coeffs_[k] + u * acc;
                return u * acc;
            }
            case Family::Custom: return custom_(u);
        }
        return 0.0;
    }

    double F(double u) const {
        if (u <= 0.0) return 0.0;
        switch (family_) {
            case Family::Power: return std::pow(u, q_ + 1.0) / (q_ + 1.0);
            case Family::Linear: return 0.5 * a_ * u * u;
            case Family::Polynomial: {
                double acc = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 0;)
                    acc = coeffs_[k] / static_cast<double>(k + 2) + u * acc;
                return u * u * acc;
            }
            case Family::Custom:
                return adaptive_simpson([this](double s) { return f(s); }, 0.0, u);
        }
        return 0.0;
    }

    /// L with |f(a)−f(b)| <= L|a−b| on [−m, m]. Closed form for the named
    /// families (with the negative-side clamp the sup of f' over [0, m]).
    double lipschitz_on(double m) const {
        m = std::max(m, 0.0);
        switch (family_) {
            case Family::Power: return q_ * std::pow(m, q_ - 1.0);
            case Family::Linear: return a_;
            case Family::Polynomial: {
                double acc = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 0;)
                    acc = coeffs_[k] * static_cast<double>(k + 1) + m * acc;
                return acc;
            }
            case Family::Custom: {
                if (m == 0.0) return 0.0;
                const std::size_t steps = 4096;
                const double h = m / static_cast<double>(steps);
                double worst = 0.0;
                double prev = f(0.0);
                for (std::size_t i = 1; i <= steps; ++i) {
                    const double cur = f(static_cast<double>(i) * h);
                    worst = std::max(worst, std::abs(cur - prev) / h);
                    prev = cur;
                }
                return worst * 1.25;
            }
        }
        return 0.0;
    }

    Family family() const { return family_; }

    double power_exponent() const {
        if (family_ != Family::Power) throw Error("nonlinearity: not a power family");
        return q_;
    }

    double linear_slope() const {
        if (family_ != Family::Linear) throw Error("nonlinearity: not a linear family");
        return a_;
    }

    const std::vector<double>& coefficients() const {
        if (family_ != Family::Polynomial) throw Error("nonlinearity: not a polynomial family");
        return coeffs_;
    }

    std::string describe() const {
        switch (family_) {
            case Family::Power: return "power:" + g17(q_);
            case Family::Linear: return "linear:" + g17(a_);
            case Family::Polynomial: {
                std::string s = "poly:";
                for (std::size_t k = 0; k < coeffs_.size(); ++k) {
                    if (k) s += ',';
                    s += g17(coeffs_[k]);
                }
                return s;
            }
            case Family::Custom: return "custom";
        }
        return "custom";
    }

private:
    Nonlinearity() = default;

    Family family_ = Family::Custom;
    double q_ = 0.0;
    double a_ = 0.0;
    std::vector<double> coeffs_;
    std::function<double(double)> custom_;
};

enum class Condition { A, B, C };

inline const char* condition_name(Condition c) {
    switch (c) {
        case Condition::A: return "A";
        case Condition::B: return "B";
        case Condition::C: return "C";
    }
    return "?";
}

/// The triple (α, β, γ) of the growth condition
///   (C)  α F(u) <= u f(u) + β u² + γ,  u > 0,
/// with 0 < β <= (α−2)λ₀/2. Conditions (A) and (B) drop (β, γ) and β.
struct ConditionCParams {
    double alpha = 3.0;
    double beta = 0.0;
    double gamma = 0.0;

    double epsilon() const { return alpha - 2.0; }

    static double beta_max(double alpha, double lambda0) {
        return 0.5 * (alpha - 2.0) * lambda0;
    }

    void validate(Condition which, double lambda0) const {
        if (!(alpha > 2.0)) throw Error("condition params: alpha must exceed 2");
        if (which != Condition::A && !(gamma > 0.0))
            throw Error("condition params: gamma must be positive");
        if (which == Condition::C) {
            const double bmax = beta_max(alpha, lambda0);
            if (!(beta > 0.0) || !(beta <= bmax * (1.0 + 1e-12)))
                throw Error("condition params: beta " + g17(beta) +
                            " outside (0, (alpha-2)*lambda0/2] = (0, " + g17(bmax) + "]");
        }
    }
};

namespace detail {

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * static_cast<double>(i));
    g.back() = hi;
    return g;
}

}  // namespace detail

struct ConditionCertificate {
    bool holds_on_grid = false;
    double worst_margin = 0.0;  // margin at the worst grid point (raw units)
    double worst_u = 0.0;
    double worst_scale = 1.0;   // magnitude scale at the worst point
    double max_abs_normalized = 0.0;
    /// Exact family verdict. power(q): holds iff α <= q+1 (all three
    /// conditions). linear(a), (A)/(B): holds iff a = 0. linear(a), (C):
    /// holds iff a <= λ₀, i.e. satisfiability over admissible β; the grid
    /// verdict uses the β that was actually passed.
    std::optional<bool> analytic;
};

/// Certifies or refutes condition (A)/(B)/(C) on a geometric grid over
/// (1e−6, u_max]. The conditions quantify over all u > 0; a grid check is
/// a desk-scale certificate, so the named families also carry the exact
/// analytic verdict.
inline ConditionCertificate check_condition(const Nonlinearity& f, Condition which,
                                            const ConditionCParams& params, double lambda0,
                                            double u_max, std::size_t grid_n = 10000) {
    if (!(u_max > 1e-6))
        throw Error("check_condition: u_max must exceed 1e-6 (grid spans (1e-6, u_max])");
    if (grid_n < 100) throw Error("check_condition: grid_n must be at least 100");
    params.validate(which, lambda0);

    const bool use_beta = which == Condition::C;
    const bool use_gamma = which != Condition::A;
    const double beta = use_beta ? params.beta : 0.0;
    const double gamma = use_gamma ? params.gamma : 0.0;

    ConditionCertificate cert;
    double worst_norm = std::numeric_limits<double>::infinity();
    for (double u : detail::geometric_grid(1e-6, u_max, grid_n)) {
        const double ufu = u * f.f(u);
        const double bu2 = beta * u * u;
        const double aF = params.alpha * f.F(u);
        const double margin = ufu + bu2 + gamma - aF;
        const double scale = std::max(1.0, ufu + bu2 + gamma + std::abs(aF));
        const double norm = margin / scale;
        cert.max_abs_normalized = std::max(cert.max_abs_normalized, std::abs(norm));
        if (norm < worst_norm) {
            worst_norm = norm;
            cert.worst_margin = margin;
            cert.worst_u = u;
            cert.worst_scale = scale;
        }
    }
    cert.holds_on_grid = worst_norm >= -1e-12;

    if (f.family() == Family::Power) {
        cert.analytic = params.alpha <= f.power_exponent() + 1.0;
    } else if (f.family() == Family::Linear) {
        cert.analytic = which == Condition::C ? f.linear_slope() <= lambda0
                                              : f.linear_slope() == 0.0;
    }
    return cert;
}

/// Monotone-h form of the conditions: (C) holds iff
/// F(u) = u^{2+ε} h(u) + a u² + b with h nondecreasing, 0 < a <= λ₀/2 and
/// b > 0 (a = 0 for (B), a = b = 0 for (A)). Evaluates
/// h(u) = (F(u) − a u² − b)/u^{2+ε} on a geometric grid over [u_lo, u_hi]
/// and reports whether consecutive differences stay >= −1e−12·scale.
inline bool h_decomposition_monotone(const Nonlinearity& f, Condition which, double alpha,
                                     double a, double b, double lambda0, double u_lo,
                                     double u_hi, std::size_t grid_n = 10000) {
    if (!(alpha > 2.0)) throw Error("h_decomposition: alpha must exceed 2");
    if (!(u_lo > 0.0) || !(u_hi > u_lo))
        throw Error("h_decomposition: need 0 < u_lo < u_hi");
    if (grid_n < 2) throw Error("h_decomposition: grid_n must be at least 2");
    switch (which) {
        case Condition::A:
            if (a != 0.0 || b != 0.0)
                throw Error("h_decomposition: condition (A) requires a = b = 0");
            break;
        case Condition::B:
            if (a != 0.0) throw Error("h_decomposition: condition (B) requires a = 0");
            if (!(b > 0.0)) throw Error("h_decomposition: condition (B) requires b > 0");
            break;
        case Condition::C:
            if (!(a > 0.0) || !(a <= 0.5 * lambda0 * (1.0 + 1e-12)))
                throw Error("h_decomposition: condition (C) requires 0 < a <= lambda0/2");
            if (!(b > 0.0)) throw Error("h_decomposition: condition (C) requires b > 0");
            break;
    }
    auto grid = detail::geometric_grid(u_lo, u_hi, grid_n);
    double prev_h = 0.0;
    bool have_prev = false;
    for (double u : grid) {
        const double h = (f.F(u) - a * u * u - b) / std::pow(u, alpha);
        if (have_prev) {
            const double scale = std::max({1.0, std::abs(prev_h), std::abs(h)});
            if (h - prev_h < -1e-12 * scale) return false;
        }
        prev_h = h;
        have_prev = true;
    }
    return true;
}

struct Minorant {
    double delta;
    double m;
};

/// Searches for δ > 0 and 1 < m < u_hi with f(u) >= δ·u^{1+ε} on the grid
/// tail [m, u_hi], ε = α−2. The certificate is accepted only when the tail
/// spans at least half of the log range (m <= √u_hi) and the infimum of
/// f(u)/u^{1+ε} over it stays above half its value at m; genuinely
/// superlinear growth passes while ratios that decay toward zero (linear f)
/// are rejected once u_hi is large. Returns the maximal δ at the smallest
/// such m, or absent.
inline std::optional<Minorant> superlinear_minorant(const Nonlinearity& f, double alpha,
                                                    double u_hi, std::size_t grid_n = 10000) {
    if (!(alpha > 2.0)) throw Error("superlinear_minorant: alpha must exceed 2");
    if (!(u_hi > 1.0)) throw Error("superlinear_minorant: u_hi must exceed 1");
    if (grid_n < 2) throw Error("superlinear_minorant: grid_n must be at least 2");
    const double expo = alpha - 1.0;  // 1 + ε
    auto grid = detail::geometric_grid(1.0 + 1e-6, u_hi, grid_n);
    std::vector<double> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        ratio[i] = f.f(grid[i]) / std::pow(grid[i], expo);
    std::vector<double> suffix_min(grid.size());
    double cur = std::numeric_limits<double>::infinity();
    for (std::size_t i = grid.size(); i-- > 0;) {
        cur = std::min(cur, ratio[i]);
        suffix_min[i] = cur;
    }
    const double m_cap = std::sqrt(u_hi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > m_cap) break;
        if (suffix_min[i] > 0.0 && suffix_min[i] >= 0.5 * ratio[i])
            return Minorant{suffix_min[i], grid[i]};
    }
    return std::nullopt;
}

struct OsgoodVerdict {
    bool diverges = false;
    double estimate = 0.0;  // meaningful only when !diverges
    std::size_t windows = 0;
};

/// Numerically probes ∫_m^∞ ds/f(s) over doubling windows [2ᵏm, 2ᵏ⁺¹m] up
/// to `horizon`. Declares divergence when the window integrals fail to
/// decay geometrically (ratio >= 0.95 across 5 consecutive windows), which
/// separates log-type divergence from convergent tails at desk scale;
/// otherwise returns the window sum plus a geometric tail extrapolation.
/// A heuristic, not a proof.
inline OsgoodVerdict osgood_test(const Nonlinearity& f, double m, double horizon) {
    if (!(m > 0.0)) throw Error("osgood_test: m must be positive");
    if (!(horizon >= 2.0 * m))
        throw Error("osgood_test: horizon must admit at least one doubling window");
    auto inv = [&](double s) {
        const double fs = f.f(s);
        if (!(fs > 0.0)) throw Error("osgood_test: f vanishes at u = " + g17(s));
        return 1.0 / fs;
    };
    std::vector<double> w;
    for (double lo = m; 2.0 * lo <= horizon; lo *= 2.0)
        w.push_back(adaptive_simpson(inv, lo, 2.0 * lo));

    OsgoodVerdict v;
    v.windows = w.size();
    int run = 0;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (w[k + 1] >= 0.95 * w[k]) {
            if (++run >= 5) {
                v.diverges = true;
                v.estimate = std::numeric_limits<double>::infinity();
                return v;
            }
        } else {
            run = 0;
        }
    }
    double total = 0.0;
    for (double x : w) total += x;
    double tail = 0.0;
    if (w.size() >= 2 && w.back() > 0.0) {
        const double r = std::clamp(w.back() / w[w.size() - 2], 0.0, 0.94);
        tail = w.back() * r / (1.0 - r);
    }
    v.estimate = total + tail;
    return v;
}

/// Scans v in (1e−6, v_hi] for F(v) > ω₀v² + γ₁ with ω₀ = max_{x∈S} d_ω x
/// and γ₁ = γ|S̄|/|S| (the weakest sufficient threshold). On success the
/// initial data v·1_S has J > 0 by the chain
///   J(u₀) >= Σ_x [F(u₀(x)) − ω₀u₀²(x) − γ] > γ₁|S| − γ|S̄| = 0.
/// Returns the smallest qualifying grid point, or absent.
inline std::optional<NodeField> find_initial_data(const Network& net, const Nonlinearity& f,
                                                  double gamma, double v_hi,
                                                  std::size_t grid_n = 10000) {
    if (!(gamma > 0.0)) throw Error("find_initial_data: gamma must be positive");
    if (!(v_hi > 1e-6)) throw Error("find_initial_data: v_hi must exceed 1e-6");
    const double omega0 = net.max_interior_degree();
    const double gamma1 = gamma * static_cast<double>(net.size()) /
                          static_cast<double>(net.interior().size());
    for (double v : detail::geometric_grid(1e-6, v_hi, grid_n))
        if (f.F(v) > omega0 * v * v + gamma1) return interior_constant(net, v);
    return std::nullopt;
}

/// max((ω₀/δ)^{1/ε}, m): the initial-max threshold beyond which blow-up is
/// classically guaranteed for f >= δ u^{1+ε} on u >= m.
inline double large_data_threshold(double delta, double epsilon, double m, double omega0) {
    if (!(delta > 0.0) || !(epsilon > 0.0) || !(m > 0.0) || !(omega0 > 0.0))
        throw Error("large_data_threshold: all inputs must be positive");
    return std::max(std::pow(omega0 / delta, 1.0 / epsilon), m);
}

struct LinearLowerBound {
    bool holds_on_grid = false;
    double inf_ratio = 0.0;
    double worst_u = 0.0;
};

/// Grid check of the hypothesis f(u) >= λu for some λ > λ₀: holds iff the
/// infimum of f(u)/u over (1e−6, u_max] stays strictly above λ₀.
inline LinearLowerBound linear_lower_bound(const Nonlinearity& f, double lambda0, double u_max,
                                           std::size_t grid_n = 10000) {
    if (!(u_max > 1e-6)) throw Error("linear_lower_bound: u_max must exceed 1e-6");
    if (grid_n < 2) throw Error("linear_lower_bound: grid_n must be at least 2");
    LinearLowerBound out;
    out.inf_ratio = std::numeric_limits<double>::infinity();
    for (double u : detail::geometric_grid(1e-6, u_max, grid_n)) {
        const double r = f.f(u) / u;
        if (r < out.inf_ratio) {
            out.inf_ratio = r;
            out.worst_u = u;
        }
    }
    out.holds_on_grid = out.inf_ratio > lambda0;
    return out;
}

}  // namespace netblow

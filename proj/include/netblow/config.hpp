#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netblow/network.hpp"
#include "netblow/nonlinearity.hpp"
#include "netblow/solver.hpp"

namespace netblow {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Network load_network(const std::string& path) {
    try {
        return Network::parse(read_file(path));
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

/// Flat key=value run configuration; '#' starts a comment. Keys:
///   network            edge-list graph file (required where a graph is used)
///   f                  power:q | linear:a | poly:c1,c2,...
///   alpha, beta, gamma condition parameters; beta defaults to the maximal
///                      admissible (alpha-2)*lambda0/2 at binding time
///   u0                 auto | const:<v> | list:<label>=<v>,...
///   t_end, rel_tol, abs_tol, blowup_sup_threshold, dt_min, record_every
///   out                trajectory CSV path (NETBLOW_OUT overrides the dir)
///   u_max, grid_n      condition-check grid
///   v_hi               find-initial scan bound
///   osgood_m, osgood_horizon
/// Unknown keys are rejected.
class RunConfig {
public:
    static RunConfig parse(std::string_view text, std::string origin) {
        static const std::set<std::string, std::less<>> known = {
            "network", "f", "alpha", "beta", "gamma", "u0",
            "t_end", "rel_tol", "abs_tol", "blowup_sup_threshold", "dt_min", "record_every",
            "out", "u_max", "grid_n", "v_hi", "osgood_m", "osgood_horizon"};
        RunConfig cfg;
        cfg.origin_ = std::move(origin);
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string_view::npos) eol = text.size();
            std::string_view line = text.substr(pos, eol - pos);
            const bool at_end = eol == text.size();
            pos = eol + 1;
            ++line_no;
            if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            auto trim = [](std::string_view s) {
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                    s.remove_prefix(1);
                while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                    s.remove_suffix(1);
                return s;
            };
            line = trim(line);
            if (!line.empty()) {
                std::size_t eq = line.find('=');
                if (eq == std::string_view::npos)
                    throw Error(cfg.origin_ + ": expected key = value (line " +
                                std::to_string(line_no) + ")");
                std::string key(trim(line.substr(0, eq)));
                std::string value(trim(line.substr(eq + 1)));
                if (known.find(key) == known.end())
                    throw Error(cfg.origin_ + ": unknown key '" + key + "' (line " +
                                std::to_string(line_no) + ")");
                if (!cfg.kv_.emplace(key, value).second)
                    throw Error(cfg.origin_ + ": duplicate key '" + key + "' (line " +
                                std::to_string(line_no) + ")");
            }
            if (at_end) break;
        }
        return cfg;
    }

    static RunConfig load(const std::string& path) { return parse(read_file(path), path); }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string get(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw Error(origin_ + ": missing key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const { return to_number(key, get(key)); }

    double number_or(const std::string& key, double fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : to_number(key, it->second);
    }

    std::string network_path() const { return get("network"); }

    Nonlinearity nonlinearity() const { return Nonlinearity::parse(get("f")); }

    double alpha() const { return number("alpha"); }
    std::optional<double> beta() const {
        return has("beta") ? std::optional<double>(number("beta")) : std::nullopt;
    }
    double gamma() const { return number("gamma"); }

    double u_max() const { return number_or("u_max", 100.0); }
    std::size_t grid_n() const {
        const double v = number_or("grid_n", 10000.0);
        if (!(v >= 2.0) || v != std::floor(v))
            throw Error(origin_ + ": grid_n must be an integer >= 2");
        return static_cast<std::size_t>(v);
    }
    double v_hi() const { return number_or("v_hi", 1000.0); }
    double osgood_m() const { return number_or("osgood_m", 1.0); }
    double osgood_horizon() const { return number_or("osgood_horizon", 1e9); }

    SolveConfig solve_config() const {
        SolveConfig sc;
        sc.t_end = number_or("t_end", 10.0);
        sc.rel_tol = number_or("rel_tol", 1e-8);
        sc.abs_tol = number_or("abs_tol", 1e-10);
        sc.blowup_sup_threshold = number_or("blowup_sup_threshold", 1e12);
        sc.dt_min = number_or("dt_min", 1e-14);
        sc.record_every = number_or("record_every", 0.01);
        sc.validate();
        return sc;
    }

    enum class InitMode { Auto, Const, List };

    InitMode init_mode() const {
        const std::string spec = get("u0");
        if (spec == "auto") return InitMode::Auto;
        if (spec.rfind("const:", 0) == 0) return InitMode::Const;
        if (spec.rfind("list:", 0) == 0) return InitMode::List;
        throw Error(origin_ + ": u0 must be auto, const:<v> or list:<label>=<v>,...");
    }

    double init_const() const {
        const std::string spec = get("u0");
        return to_number("u0", spec.substr(6));
    }

    std::vector<std::pair<std::string, double>> init_list() const {
        const std::string spec = get("u0").substr(5);
        std::vector<std::pair<std::string, double>> entries;
        std::size_t start = 0;
        while (start <= spec.size()) {
            std::size_t comma = spec.find(',', start);
            if (comma == std::string::npos) comma = spec.size();
            const std::string item = spec.substr(start, comma - start);
            std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw Error(origin_ + ": u0 list entry '" + item + "' must be <label>=<value>");
            entries.emplace_back(item.substr(0, eq), to_number("u0", item.substr(eq + 1)));
            start = comma + 1;
            if (comma == spec.size()) break;
        }
        if (entries.empty()) throw Error(origin_ + ": u0 list is empty");
        return entries;
    }

    /// Resolves const/list modes against a network (auto is resolved by the
    /// caller via find_initial_data, which needs gamma and v_hi).
    NodeField explicit_initial_data(const Network& net) const {
        switch (init_mode()) {
            case InitMode::Const:
                return interior_constant(net, init_const());
            case InitMode::List: {
                NodeField u(net.size(), 0.0);
                for (const auto& [label, value] : init_list()) {
                    const std::size_t x = net.index_of(label);
                    if (!net.is_interior(x) && value != 0.0)
                        throw Error(origin_ + ": u0 assigns nonzero value to boundary vertex '" +
                                    label + "'");
                    u[x] = value;
                }
                return u;
            }
            case InitMode::Auto:
                throw Error(origin_ + ": u0=auto has no explicit field");
        }
        throw Error(origin_ + ": bad u0 mode");
    }

    /// Output path; a relative `out` lands inside $NETBLOW_OUT when set.
    std::string out_path() const {
        std::filesystem::path p(has("out") ? get("out") : std::string("trajectory.csv"));
        if (const char* base = std::getenv("NETBLOW_OUT"); base && *base && p.is_relative())
            p = std::filesystem::path(base) / p;
        return p.string();
    }

    const std::string& origin() const { return origin_; }

private:
    double to_number(const std::string& key, const std::string& value) const {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw Error(origin_ + ": key '" + key + "' has non-numeric value '" + value + "'");
        }
        if (used != value.size())
            throw Error(origin_ + ": key '" + key + "' has non-numeric value '" + value + "'");
        return v;
    }

    std::map<std::string, std::string> kv_;
    std::string origin_;
};

}  // namespace netblow

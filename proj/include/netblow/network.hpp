#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "netblow/util.hpp"

namespace netblow {

/// One real value per vertex of the closed network S̄ = S ∪ ∂S, indexed
/// consistently with the owning Network.
using NodeField = std::vector<double>;

enum class VertexRole { Interior, Boundary };

/// A finite simple connected weighted graph whose vertex set is partitioned
/// into an interior S and a boundary ∂S. Weights are stored as a dense
/// symmetric matrix; the graphs of interest are small (dozens to low
/// hundreds of vertices), so density keeps the Laplacian and the
/// eigensolver simple.
///
/// Immutable after construction; the constructor runs the full invariant
/// audit:
///   - zero diagonal (no loops), exact symmetry, finite nonnegative weights
///   - positive weight iff edge (structural with dense storage)
///   - S nonempty, ∂S nonempty, S̄ connected
///   - every boundary vertex adjacent to at least one interior vertex
///
/// Safe to share read-only across concurrent simulations.
class Network {
public:
    Network(std::vector<std::string> labels, std::vector<double> weights,
            std::vector<VertexRole> roles)
        : labels_(std::move(labels)), w_(std::move(weights)), roles_(std::move(roles)) {
        const std::size_t n = labels_.size();
        if (roles_.size() != n || w_.size() != n * n)
            throw Error("network: labels, roles and weight matrix sizes disagree");
        for (std::size_t i = 0; i < n; ++i) {
            if (!index_.emplace(labels_[i], i).second)
                throw Error("network: duplicate vertex label '" + labels_[i] + "'");
            if (roles_[i] == VertexRole::Interior)
                interior_.push_back(i);
            else
                boundary_.push_back(i);
        }
        audit();
    }

    std::size_t size() const { return labels_.size(); }

    double weight(std::size_t x, std::size_t y) const { return w_[x * size() + y]; }

    bool is_interior(std::size_t x) const { return roles_[x] == VertexRole::Interior; }

    const std::vector<std::size_t>& interior() const { return interior_; }
    const std::vector<std::size_t>& boundary() const { return boundary_; }

    const std::string& label(std::size_t x) const { return labels_[x]; }

    std::size_t index_of(std::string_view label) const {
        auto it = index_.find(label);
        if (it == index_.end())
            throw Error("network: unknown vertex '" + std::string(label) + "'");
        return it->second;
    }

    bool has_vertex(std::string_view label) const { return index_.count(label) != 0; }

    /// d_ω x: sum of the weights of all edges at x.
    double degree(std::size_t x) const {
        if (x >= size()) throw Error("degree: vertex index out of range");
        double d = 0.0;
        for (std::size_t y = 0; y < size(); ++y) d += weight(x, y);
        return d;
    }

    double max_weight() const {
        double m = 0.0;
        for (double v : w_) m = std::max(m, v);
        return m;
    }

    double min_interior_degree() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t x : interior_) m = std::min(m, degree(x));
        return m;
    }

    /// ω₀ = max_{x∈S} d_ω x.
    double max_interior_degree() const {
        double m = 0.0;
        for (std::size_t x : interior_) m = std::max(m, degree(x));
        return m;
    }

    static Network parse(std::string_view text);
    std::string serialize() const;

    // Canonical test graphs. Endpoints of `path`, border cells of `grid`,
    // and the leaves of `star` form the boundary; the pendant vertex of
    // `cycle_with_pendant_boundary` is its boundary.
    static Network path(std::size_t n, double w);
    static Network star(std::size_t leaves, double w);
    static Network cycle_with_pendant_boundary(std::size_t cycle_len, double w);
    static Network grid(std::size_t rows, std::size_t cols, double w);

private:
    void audit() const;

    std::vector<std::string> labels_;
    std::vector<double> w_;
    std::vector<VertexRole> roles_;
    std::vector<std::size_t> interior_, boundary_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

inline void Network::audit() const {
    const std::size_t n = size();
    if (interior_.empty()) throw Error("network: empty interior");
    if (boundary_.empty()) throw Error("network: empty boundary");
    for (std::size_t i = 0; i < n; ++i) {
        if (w_[i * n + i] != 0.0)
            throw Error("network: loop weight at vertex '" + labels_[i] + "'");
        for (std::size_t j = 0; j < n; ++j) {
            const double wij = w_[i * n + j];
            if (!std::isfinite(wij) || wij < 0.0)
                throw Error("network: weight(" + labels_[i] + "," + labels_[j] +
                            ") is not a finite nonnegative number");
            if (wij != w_[j * n + i])
                throw Error("network: weight asymmetry between '" + labels_[i] + "' and '" +
                            labels_[j] + "'");
        }
    }
    // Connectivity of S̄ over positive-weight edges.
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y = 0; y < n; ++y)
            if (!seen[y] && w_[x * n + y] > 0.0) {
                seen[y] = 1;
                stack.push_back(y);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i])
            throw Error("network: graph is disconnected (vertex '" + labels_[i] +
                        "' unreachable)");
    for (std::size_t z : boundary_) {
        bool ok = false;
        for (std::size_t y : interior_)
            if (w_[z * n + y] > 0.0) {
                ok = true;
                break;
            }
        if (!ok)
            throw Error("network: boundary vertex '" + labels_[z] + "' has no interior neighbor");
    }
}

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) toks.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

inline double parse_weight(const std::string& tok, std::size_t line_no) {
    double w = 0.0;
    std::size_t used = 0;
    try {
        w = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw Error("parse: bad weight '" + tok + "' (line " + std::to_string(line_no) + ")");
    }
    if (used != tok.size())
        throw Error("parse: bad weight '" + tok + "' (line " + std::to_string(line_no) + ")");
    if (!std::isfinite(w) || w <= 0.0)
        throw Error("parse: weight must be finite and positive, got '" + tok + "' (line " +
                    std::to_string(line_no) + ")");
    return w;
}

}  // namespace detail

/// Edge-list format, one record per line:
///   vertex <label> interior|boundary     (all vertex lines first)
///   edge <label1> <label2> <weight>
/// '#' starts a comment; fields are whitespace-separated.
inline Network Network::parse(std::string_view text) {
    std::vector<std::string> labels;
    std::vector<VertexRole> roles;
    std::map<std::string, std::size_t, std::less<>> index;
    struct EdgeDecl {
        std::size_t a, b;
        double w;
        std::size_t line;
    };
    std::vector<EdgeDecl> edges;
    bool edges_started = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        auto toks = detail::tokenize(line);
        if (toks.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        if (toks[0] == "vertex") {
            if (toks.size() != 3)
                throw Error("parse: expected 'vertex <label> interior|boundary' (line " +
                            std::to_string(line_no) + ")");
            if (edges_started)
                throw Error("parse: vertex declaration after edges (line " +
                            std::to_string(line_no) + ")");
            VertexRole role;
            if (toks[2] == "interior")
                role = VertexRole::Interior;
            else if (toks[2] == "boundary")
                role = VertexRole::Boundary;
            else
                throw Error("parse: vertex role must be 'interior' or 'boundary', got '" +
                            toks[2] + "' (line " + std::to_string(line_no) + ")");
            if (!index.emplace(toks[1], labels.size()).second)
                throw Error("parse: duplicate vertex '" + toks[1] + "' (line " +
                            std::to_string(line_no) + ")");
            labels.push_back(toks[1]);
            roles.push_back(role);
        } else if (toks[0] == "edge") {
            if (toks.size() != 4)
                throw Error("parse: expected 'edge <label1> <label2> <weight>' (line " +
                            std::to_string(line_no) + ")");
            edges_started = true;
            auto ia = index.find(toks[1]);
            auto ib = index.find(toks[2]);
            if (ia == index.end())
                throw Error("parse: edge references undeclared vertex '" + toks[1] +
                            "' (line " + std::to_string(line_no) + ")");
            if (ib == index.end())
                throw Error("parse: edge references undeclared vertex '" + toks[2] +
                            "' (line " + std::to_string(line_no) + ")");
            if (ia->second == ib->second)
                throw Error("parse: loop edge at vertex '" + toks[1] + "' (line " +
                            std::to_string(line_no) + ")");
            edges.push_back({ia->second, ib->second, detail::parse_weight(toks[3], line_no),
                             line_no});
        } else {
            throw Error("parse: unknown directive '" + toks[0] + "' (line " +
                        std::to_string(line_no) + ")");
        }
        if (pos > text.size()) break;
    }

    const std::size_t n = labels.size();
    std::vector<double> w(n * n, 0.0);
    for (const auto& e : edges) {
        double& slot = w[e.a * n + e.b];
        if (slot > 0.0 && slot != e.w)
            throw Error("parse: duplicate edge '" + labels[e.a] + " " + labels[e.b] +
                        "' with conflicting weight (line " + std::to_string(e.line) + ")");
        slot = e.w;
        w[e.b * n + e.a] = e.w;
    }
    return Network(std::move(labels), std::move(w), std::move(roles));
}

/// Emits vertices sorted lexicographically, then edges sorted by
/// (min,max) label, weights with 17 significant digits so that
/// parse(serialize(net)) round-trips weights exactly.
inline std::string Network::serialize() const {
    const std::size_t n = size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return labels_[a] < labels_[b]; });
    std::ostringstream out;
    for (std::size_t i : order)
        out << "vertex " << labels_[i] << ' '
            << (roles_[i] == VertexRole::Interior ? "interior" : "boundary") << '\n';
    struct E {
        std::string a, b;
        double w;
    };
    std::vector<E> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (weight(i, j) > 0.0) {
                std::string a = labels_[i], b = labels_[j];
                if (b < a) std::swap(a, b);
                edges.push_back({std::move(a), std::move(b), weight(i, j)});
            }
    std::sort(edges.begin(), edges.end(),
              [](const E& x, const E& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    for (const auto& e : edges) out << "edge " << e.a << ' ' << e.b << ' ' << g17(e.w) << '\n';
    return out.str();
}

inline Network Network::path(std::size_t n, double w) {
    if (n < 3) throw Error("path: need at least 3 vertices for a nonempty interior");
    std::vector<std::string> labels(n);
    std::vector<VertexRole> roles(n, VertexRole::Interior);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "v" + std::to_string(i);
    roles.front() = roles.back() = VertexRole::Boundary;
    std::vector<double> weights(n * n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        weights[i * n + (i + 1)] = weights[(i + 1) * n + i] = w;
    return Network(std::move(labels), std::move(weights), std::move(roles));
}

inline Network Network::star(std::size_t leaves, double w) {
    if (leaves < 1) throw Error("star: need at least one boundary leaf");
    const std::size_t n = leaves + 1;
    std::vector<std::string> labels{"c"};
    std::vector<VertexRole> roles{VertexRole::Interior};
    for (std::size_t i = 1; i <= leaves; ++i) {
        labels.push_back("l" + std::to_string(i));
        roles.push_back(VertexRole::Boundary);
    }
    std::vector<double> weights(n * n, 0.0);
    for (std::size_t i = 1; i < n; ++i) weights[i] = weights[i * n] = w;
    return Network(std::move(labels), std::move(weights), std::move(roles));
}

inline Network Network::cycle_with_pendant_boundary(std::size_t cycle_len, double w) {
    if (cycle_len < 3) throw Error("cycle_with_pendant_boundary: cycle needs >= 3 vertices");
    const std::size_t n = cycle_len + 1;
    std::vector<std::string> labels;
    std::vector<VertexRole> roles;
    for (std::size_t i = 0; i < cycle_len; ++i) {
        labels.push_back("c" + std::to_string(i));
        roles.push_back(VertexRole::Interior);
    }
    labels.emplace_back("z");
    roles.push_back(VertexRole::Boundary);
    std::vector<double> weights(n * n, 0.0);
    for (std::size_t i = 0; i < cycle_len; ++i) {
        std::size_t j = (i + 1) % cycle_len;
        weights[i * n + j] = weights[j * n + i] = w;
    }
    weights[0 * n + cycle_len] = weights[cycle_len * n + 0] = w;
    return Network(std::move(labels), std::move(weights), std::move(roles));
}

inline Network Network::grid(std::size_t rows, std::size_t cols, double w) {
    if (rows < 3 || cols < 3)
        throw Error("grid: need at least 3x3 for a nonempty interior");
    const std::size_t n = rows * cols;
    std::vector<std::string> labels(n);
    std::vector<VertexRole> roles(n);
    auto id = [&](std::size_t r, std::size_t c) { return r * cols + c; };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            labels[id(r, c)] = "g" + std::to_string(r) + "_" + std::to_string(c);
            bool border = (r == 0 || c == 0 || r + 1 == rows || c + 1 == cols);
            roles[id(r, c)] = border ? VertexRole::Boundary : VertexRole::Interior;
        }
    // 8-neighbor lattice: the diagonal edges keep every border cell
    // adjacent to the interior, so the full geometric border is an
    // admissible boundary.
    std::vector<double> weights(n * n, 0.0);
    auto connect = [&](std::size_t a, std::size_t b) {
        weights[a * n + b] = weights[b * n + a] = w;
    };
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (r + 1 < rows) connect(id(r, c), id(r + 1, c));
            if (c + 1 < cols) connect(id(r, c), id(r, c + 1));
            if (r + 1 < rows && c + 1 < cols) {
                connect(id(r, c), id(r + 1, c + 1));
                connect(id(r + 1, c), id(r, c + 1));
            }
        }
    return Network(std::move(labels), std::move(weights), std::move(roles));
}

}  // namespace netblow

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "packing.hpp"
#include "steiner.hpp"

namespace capregion {

/// Packing polytope over all minimal Steiner trees. Keeps its own copy of the
/// network so approximate oracles can run shortest-path searches on it.
struct RoutingPolytopeSpec {
    Network network;
    std::vector<SteinerTree> trees;        // grouped by message, each group lexicographic
    std::vector<std::size_t> tree_count;   // per message
    PackingPolytope polytope;

    std::size_t dimension() const { return polytope.dimension; }
};

inline RoutingPolytopeSpec build_routing_polytope(const Network& net) {
    RoutingPolytopeSpec spec;
    spec.network = net;
    spec.polytope.dimension = net.num_messages();
    spec.polytope.capacities = capacities_of(net);
    for (std::size_t i = 0; i < net.num_messages(); ++i) {
        auto trees = enumerate_minimal_steiner_trees(net, i);
        spec.tree_count.push_back(trees.size());
        for (auto& t : trees) {
            PackingColumn col{t.edges, std::vector<std::uint8_t>(net.num_messages(), 0)};
            col.weight[i] = 1;
            spec.polytope.columns.push_back(std::move(col));
            spec.trees.push_back(std::move(t));
        }
    }
    return spec;
}

inline RayAnswer ray_oracle_exact(const RoutingPolytopeSpec& spec, const RayQuery& q) {
    return packing_ray_exact(spec.polytope, q);
}

enum class SteinerOracle { Exact, ShortestPaths };

struct GKConfig {
    Rational omega{1, 10};
    SteinerOracle steiner_oracle = SteinerOracle::Exact;
    /// Multiplicative step. Defaults to 1 - (1+omega)^(-1/3), which makes the
    /// classical (1-eps)^3 loss of the concurrent-flow analysis equal 1/(1+omega).
    std::optional<double> epsilon;
    std::size_t phase_cap = 200000;

    double step() const {
        if (omega <= 0) throw std::invalid_argument("omega must be positive");
        double eps = epsilon ? *epsilon : 1.0 - std::pow(1.0 + to_double(omega), -1.0 / 3.0);
        if (!(eps > 0 && eps < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
        return eps;
    }
};

namespace detail {

/// Multiplicative-weights state shared by the two approximate oracles.
/// Lengths start at delta / c(e) with the standard concurrent-flow choice
/// delta = (1+eps) / ((1+eps) m)^(1/eps), m the number of edges in play.
struct LengthState {
    std::vector<double> length;     // per edge; 0 for edges no column touches
    std::vector<double> capacity;
    double weighted = 0;            // D(l) = sum_e l(e) c(e)
    double eps = 0;

    LengthState(const PackingPolytope& poly, double step) : eps(step) {
        std::vector<bool> used(poly.num_edges(), false);
        for (const auto& col : poly.columns)
            for (EdgeId e : col.edges) used[e] = true;
        const double m = static_cast<double>(std::count(used.begin(), used.end(), true));
        // Clamped away from underflow; the dual bound used for stopping stays valid for any lengths.
        const double log_delta = std::log1p(eps) - std::log((1 + eps) * std::max(m, 1.0)) / eps;
        const double delta = std::exp(std::max(log_delta, -600.0));
        length.assign(poly.num_edges(), 0);
        for (EdgeId e = 0; e < poly.num_edges(); ++e) {
            capacity.push_back(static_cast<double>(poly.capacities[e]));
            if (used[e]) {
                length[e] = delta / capacity[e];
                weighted += delta;
            }
        }
    }

    /// Routes `amount` along `edges`.
    void push(const std::vector<EdgeId>& edges, double amount) {
        for (EdgeId e : edges) {
            double grow = length[e] * eps * amount / capacity[e];
            length[e] += grow;
            weighted += grow * capacity[e];
        }
    }

    double bottleneck(const std::vector<EdgeId>& edges) const {
        double b = std::numeric_limits<double>::infinity();
        for (EdgeId e : edges) b = std::min(b, capacity[e]);
        return b;
    }

    /// Lengths as positive exact rationals; edges with zero length get the
    /// smallest positive length present (any positive lengths give a valid dual bound).
    RationalVector exact_lengths() const {
        double floor = std::numeric_limits<double>::infinity();
        for (double l : length)
            if (l > 0) floor = std::min(floor, l);
        if (!std::isfinite(floor)) floor = 1;
        RationalVector out;
        for (double l : length) out.push_back(from_double(l > 0 ? l : floor));
        return out;
    }
};

/// Exact rescaling of an accumulated packing to feasibility, then its value
/// along q (minimum over demanded messages of delivered / q_i).
inline std::pair<RationalVector, Rational> scale_to_feasible(const PackingPolytope& poly, const std::vector<double>& x,
                                                             const RayQuery& q) {
    RationalVector xr;
    for (double v : x) xr.push_back(from_double(v));
    RationalVector load(poly.num_edges(), Rational(0));
    for (std::size_t c = 0; c < xr.size(); ++c)
        for (EdgeId e : poly.columns[c].edges) load[e] += xr[c];
    Rational congestion = 0;
    for (EdgeId e = 0; e < poly.num_edges(); ++e) congestion = std::max(congestion, load[e] / poly.capacities[e]);
    if (congestion == 0) return {RationalVector(xr.size(), Rational(0)), Rational(0)};
    for (auto& v : xr) v /= congestion;
    Point r = poly.rates(xr);
    std::optional<Rational> lambda;
    for (std::size_t i = 0; i < q.direction.size(); ++i)
        if (q.direction[i] > 0) {
            Rational v = r[i] / q.direction[i];
            if (!lambda || v < *lambda) lambda = v;
        }
    return {xr, *lambda};
}

/// Value along q of the (double) packing x after scaling by its congestion.
inline double scaled_value(const PackingPolytope& poly, const std::vector<double>& x, const std::vector<double>& q) {
    std::vector<double> load(poly.num_edges(), 0);
    std::vector<double> rate(poly.dimension, 0);
    for (std::size_t c = 0; c < x.size(); ++c) {
        for (EdgeId e : poly.columns[c].edges) load[e] += x[c];
        for (std::size_t i = 0; i < poly.dimension; ++i)
            if (poly.columns[c].weight[i]) rate[i] += x[c];
    }
    double congestion = 0;
    for (EdgeId e = 0; e < poly.num_edges(); ++e) congestion = std::max(congestion, load[e] / static_cast<double>(poly.capacities[e]));
    if (congestion == 0) return 0;
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0) v = std::min(v, rate[i] / congestion / q[i]);
    return v;
}

}  // namespace detail

/// Garg-Konemann concurrent packing of Steiner trees along q.
///
/// Each phase routes q'_i units of every demanded message along successive
/// cheapest trees (per the configured oracle) in increments limited by the
/// tree's bottleneck capacity, growing each used edge's length by the factor
/// (1 + eps * increment / c(e)). Demands are pre-scaled so the optimum lies in
/// [1, m]. The run stops when D(l) >= 1, or earlier once the duality bound
/// D(l) / alpha(l) (alpha = sum_i q_i * cheapest tree cost) falls within
/// 1 + omega of the current scaled packing. The final packing is rescaled
/// exactly by its congestion.
///
/// Bracket: [lambda, (1+omega) A lambda] with A = 1 for the exact oracle and A
/// = the largest receiver count for the shortest-path oracle.
inline RayAnswer ray_oracle_gk(const RoutingPolytopeSpec& spec, const RayQuery& q, const GKConfig& cfg) {
    const Network& net = spec.network;
    const PackingPolytope& poly = spec.polytope;
    if (q.direction.size() != poly.dimension) throw std::invalid_argument("ray dimension mismatch");
    const double eps = cfg.step();

    std::vector<std::size_t> first(net.num_messages() + 1, 0);
    for (std::size_t i = 0; i < net.num_messages(); ++i) first[i + 1] = first[i] + spec.tree_count[i];

    std::vector<std::size_t> demanded;
    for (std::size_t i = 0; i < poly.dimension; ++i)
        if (q.direction[i] > 0) demanded.push_back(i);

    RayAnswer ans;
    for (std::size_t i : demanded)
        if (spec.tree_count[i] == 0) {
            ans.lambda = 0;
            ans.packing.assign(poly.columns.size(), Rational(0));
            ans.bracket = {Rational(0), Rational(0)};
            ans.certified_upper = Rational(0);
            return ans;
        }

    Rational approx = 1;
    if (cfg.steiner_oracle == SteinerOracle::ShortestPaths)
        for (std::size_t i : demanded) approx = std::max(approx, Rational(net.messages[i].receivers.size()));

    // Messages may share an edge set, so columns are keyed by message too.
    std::map<std::pair<std::size_t, std::vector<EdgeId>>, std::size_t> column_of;
    for (std::size_t c = 0; c < spec.trees.size(); ++c) column_of[{spec.trees[c].message, spec.trees[c].edges}] = c;

    // Cheapest column for message i under lengths l (doubles).
    auto cheapest = [&](std::size_t i, const std::vector<double>& l) -> std::pair<std::size_t, double> {
        if (cfg.steiner_oracle == SteinerOracle::Exact) {
            std::size_t best = first[i];
            double best_cost = tree_cost(spec.trees[best].edges, l);
            for (std::size_t c = first[i] + 1; c < first[i + 1]; ++c) {
                double cost = tree_cost(spec.trees[c].edges, l);
                if (cost < best_cost) {
                    best = c;
                    best_cost = cost;
                }
            }
            return {best, best_cost};
        }
        std::vector<double> positive = l;
        for (auto& v : positive) v = std::max(v, std::numeric_limits<double>::min());
        auto [edges, cost] = min_cost_steiner_shortest_paths(net, i, positive);
        auto it = column_of.find({i, edges});
        if (it == column_of.end()) throw std::logic_error("shortest-path tree is not an enumerated minimal tree");
        return {it->second, cost};
    };

    std::vector<double> qd;
    for (const auto& v : q.direction) qd.push_back(to_double(v));

    detail::LengthState st(poly, eps);
    // Pre-scale demands by alpha at l = 1/c so the optimum is at least 1.
    {
        std::vector<double> inv_cap(poly.num_edges());
        for (EdgeId e = 0; e < poly.num_edges(); ++e) inv_cap[e] = 1.0 / st.capacity[e];
        double alpha0 = 0;
        for (std::size_t i : demanded) alpha0 += qd[i] * cheapest(i, inv_cap).second;
        for (auto& v : qd) v /= alpha0;
    }

    std::vector<double> x(poly.columns.size(), 0);
    std::vector<double> best_lengths = st.length;
    double best_bound = std::numeric_limits<double>::infinity();
    const double target = 1 + to_double(cfg.omega);

    auto dual_bound = [&]() {
        double alpha = 0;
        for (std::size_t i : demanded) alpha += qd[i] * cheapest(i, st.length).second;
        return st.weighted / alpha;
    };

    bool done = false;
    for (std::size_t phase = 0; !done; ++phase) {
        if (phase >= cfg.phase_cap) throw std::runtime_error("phase cap exceeded; epsilon is too small for this instance");
        for (std::size_t i : demanded) {
            double remaining = qd[i];
            while (remaining > 0 && !done) {
                if (st.weighted >= 1) {
                    done = true;
                    break;
                }
                auto [c, cost] = cheapest(i, st.length);
                (void)cost;
                double amount = std::min(remaining, st.bottleneck(poly.columns[c].edges));
                x[c] += amount;
                st.push(poly.columns[c].edges, amount);
                remaining -= amount;
            }
            if (done) break;
        }
        double bound = dual_bound();
        if (bound < best_bound) {
            best_bound = bound;
            best_lengths = st.length;
        }
        if (best_bound <= target * (1 - 1e-6) * detail::scaled_value(poly, x, qd)) done = true;
        if (st.weighted >= 1) done = true;
    }

    auto [packing, lambda] = detail::scale_to_feasible(poly, x, q);
    ans.lambda = lambda;
    ans.packing = std::move(packing);
    ans.bracket = {lambda, (1 + cfg.omega) * approx * lambda};

    // Exact duality bound at the best lengths seen, in the caller's units.
    detail::LengthState best = st;
    best.length = best_lengths;
    RationalVector l = best.exact_lengths();
    Rational weighted = 0, alpha = 0;
    for (EdgeId e = 0; e < poly.num_edges(); ++e)
        if (best_lengths[e] > 0) weighted += l[e] * poly.capacities[e];
    for (std::size_t i : demanded) {
        Rational cost;
        if (cfg.steiner_oracle == SteinerOracle::Exact) {
            std::size_t c = cheapest_tree(std::vector<SteinerTree>(spec.trees.begin() + first[i], spec.trees.begin() + first[i + 1]), l);
            cost = tree_cost(spec.trees[first[i] + c].edges, l);
        } else {
            cost = min_cost_steiner_shortest_paths(net, i, l).second;
        }
        alpha += q.direction[i] * cost;
    }
    ans.certified_upper = approx * weighted / alpha;
    return ans;
}

inline SupportAnswer support_query(const RoutingPolytopeSpec& spec, const RationalVector& direction) {
    return packing_support(spec.polytope, direction);
}

/// Exact planar region from support queries.
inline RegionDescription exact_region_2d(const RoutingPolytopeSpec& spec) { return packing_region_2d(spec.polytope); }

/// Exact region as the hull of the images of all packing-polytope vertices.
inline RegionDescription exact_region_via_vertices(const RoutingPolytopeSpec& spec, std::size_t max_bases = 200000) {
    return packing_region_via_vertices(spec.polytope, max_bases);
}

/// Exact region in any dimension: a segment in 1-D, support refinement in 2-D,
/// vertex images beyond.
inline RegionDescription exact_region(const PackingPolytope& poly) {
    if (poly.dimension == 1) {
        Rational top = packing_support(poly, {1}).value;
        return convex_hull_1d({{0}, {top}});
    }
    if (poly.dimension == 2) return packing_region_2d(poly);
    return packing_region_via_vertices(poly);
}

/// lambda_max along the all-ones ray.
inline Rational routing_capacity_scalar(const RoutingPolytopeSpec& spec) {
    return ray_oracle_exact(spec, RayQuery(RationalVector(spec.dimension(), Rational(1)))).lambda;
}

}  // namespace capregion

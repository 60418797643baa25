#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lincode.hpp"
#include "routing.hpp"

namespace capregion {

/// Packing polytope over minimal partial scalar-linear solutions, one column
/// per (nonzero solvable weight vector, minimal active set), weights in
/// lexicographic order and solutions ordered by active set within a weight.
struct SemiPolytopeSpec {
    Network network;
    std::uint32_t field_order = 2;
    std::vector<WeightVector> weights;                  // nonzero solvable weights, in order
    std::vector<PartialScalarLinearSolution> solutions; // aligned with polytope.columns
    std::vector<std::size_t> weight_of;                 // column -> index into weights
    PackingPolytope polytope;

    std::size_t dimension() const { return polytope.dimension; }
};

inline SemiPolytopeSpec build_semi_polytope(const Network& net, const PrimeField& field) {
    SemiPolytopeSpec spec;
    spec.network = net;
    spec.field_order = field.order();
    spec.polytope.dimension = net.num_messages();
    spec.polytope.capacities = capacities_of(net);
    LinearCodeCatalog catalog(net, field);
    for (const auto& w : catalog.weight_vectors()) {
        if (w.is_zero()) continue;
        spec.weights.push_back(w);
        for (const auto& sol : catalog.minimal_solutions(w)) {
            spec.polytope.columns.push_back({sol.active_edges, w.bits});
            spec.solutions.push_back(sol);
            spec.weight_of.push_back(spec.weights.size() - 1);
        }
    }
    return spec;
}

inline RayAnswer semi_ray_oracle_exact(const SemiPolytopeSpec& spec, const RayQuery& q) {
    return packing_ray_exact(spec.polytope, q);
}

inline SupportAnswer semi_support_query(const SemiPolytopeSpec& spec, const RationalVector& direction) {
    return packing_support(spec.polytope, direction);
}

inline RegionDescription semi_exact_region_2d(const SemiPolytopeSpec& spec) { return packing_region_2d(spec.polytope); }

/// Both oracles are exact here (covering by exact LP, scalar-linear costs by
/// scanning all minimal solutions), so the guarantee factor B is 1.
struct SemiGKConfig {
    Rational omega{1, 10};
    std::optional<double> epsilon;
    std::size_t phase_cap = 200000;

    double step() const { return GKConfig{omega, SteinerOracle::Exact, epsilon, phase_cap}.step(); }
};

namespace detail {

/// Rational costs rounded to 24 significant bits relative to the largest, so
/// the covering LPs stay small; every entry stays positive.
inline RationalVector coarse_costs(const std::vector<double>& cost) {
    double top = *std::max_element(cost.begin(), cost.end());
    double unit = std::ldexp(top, -24);
    RationalVector out;
    for (double c : cost) out.push_back(from_double(std::max(std::round(c / unit), 1.0) * unit));
    return out;
}

}  // namespace detail

/// Multiplicative-weights concurrent packing of partial solutions along q.
///
/// Demands are normalized to q' = q / max(q) * theta with theta = min(1, 1 / alpha0),
/// alpha0 the covering optimum at l = 1/c, so q' <= 1 and the optimum is at least 1.
/// A phase repeats steps until its demand q' is met: price each weight vector
/// by its cheapest minimal solution under the current lengths, solve the
/// covering LP  min cost.y  s.t.  sum_{w contains i} y_w >= remaining_i,
/// 0 <= y_w <= 1, and push sigma * y along the priced solutions, where sigma <= 1
/// keeps every edge's increment within its capacity. Lengths grow by
/// (1 + eps * increment / c(e)). Stopping and final exact rescaling follow the
/// routing oracle; the duality bound uses the unboxed covering value as alpha.
inline RayAnswer semi_ray_oracle_gk(const SemiPolytopeSpec& spec, const RayQuery& q, const SemiGKConfig& cfg) {
    const PackingPolytope& poly = spec.polytope;
    if (q.direction.size() != poly.dimension) throw std::invalid_argument("ray dimension mismatch");
    const double eps = cfg.step();
    const std::size_t k = poly.dimension, nw = spec.weights.size();

    RayAnswer ans;
    auto zero_answer = [&] {
        ans.lambda = 0;
        ans.packing.assign(poly.columns.size(), Rational(0));
        ans.bracket = {Rational(0), Rational(0)};
        ans.certified_upper = Rational(0);
        return ans;
    };
    for (std::size_t i = 0; i < k; ++i) {
        if (q.direction[i] == 0) continue;
        bool covered = std::any_of(spec.weights.begin(), spec.weights.end(), [&](const WeightVector& w) { return w[i]; });
        if (!covered) return zero_answer();
    }

    // Covering matrix: rows are messages, columns weight vectors.
    std::vector<std::vector<std::int64_t>> cover(k, std::vector<std::int64_t>(nw, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t w = 0; w < nw; ++w) cover[i][w] = spec.weights[w][i];

    std::vector<std::size_t> first_col(nw + 1, 0);
    for (std::size_t c = 0; c < poly.columns.size(); ++c) first_col[spec.weight_of[c] + 1] = c + 1;
    for (std::size_t w = 1; w <= nw; ++w) first_col[w] = std::max(first_col[w], first_col[w - 1]);

    // Cheapest column of weight w under lengths l.
    auto cheapest = [&](std::size_t w, const auto& l) {
        using L = std::decay_t<decltype(l[0])>;
        std::size_t best = first_col[w];
        L best_cost = tree_cost(poly.columns[best].edges, l);
        for (std::size_t c = first_col[w] + 1; c < first_col[w + 1]; ++c) {
            L cost = tree_cost(poly.columns[c].edges, l);
            if (cost < best_cost) {
                best = c;
                best_cost = cost;
            }
        }
        return std::pair<std::size_t, L>(best, best_cost);
    };

    auto covering_value = [&](const RationalVector& costs, const RationalVector& demand) {
        CoveringInstance inst{cover, demand, costs, std::vector<std::int64_t>(nw, 1)};
        return solve_covering_box(inst);
    };

    Rational qmax = *std::max_element(q.direction.begin(), q.direction.end());
    RationalVector qn = q.direction;
    for (auto& v : qn) v /= qmax;

    detail::LengthState st(poly, eps);
    std::vector<double> qd;
    {
        std::vector<double> inv_cap(poly.num_edges());
        for (EdgeId e = 0; e < poly.num_edges(); ++e) inv_cap[e] = 1.0 / st.capacity[e];
        std::vector<double> c0;
        for (std::size_t w = 0; w < nw; ++w) c0.push_back(cheapest(w, inv_cap).second);
        auto sol = covering_value(detail::coarse_costs(c0), qn);
        double theta = std::min(1.0, 1.0 / to_double(sol.value));
        for (const auto& v : qn) qd.push_back(to_double(v) * theta);
    }

    std::vector<double> x(poly.columns.size(), 0);
    std::vector<double> best_lengths = st.length;
    double best_bound = std::numeric_limits<double>::infinity();
    const double target = 1 + to_double(cfg.omega);
    const double tiny = 1e-12;

    auto priced = [&](std::vector<std::size_t>& chosen) {
        std::vector<double> costs;
        chosen.clear();
        for (std::size_t w = 0; w < nw; ++w) {
            auto [c, cost] = cheapest(w, st.length);
            chosen.push_back(c);
            costs.push_back(cost);
        }
        return detail::coarse_costs(costs);
    };

    bool done = false;
    std::vector<std::size_t> chosen;
    for (std::size_t phase = 0; !done; ++phase) {
        if (phase >= cfg.phase_cap) throw std::runtime_error("phase cap exceeded; epsilon is too small for this instance");
        std::vector<double> remaining = qd;
        while (!done) {
            bool open = false;
            for (std::size_t i = 0; i < k; ++i)
                if (remaining[i] > tiny) open = true;
            if (!open) break;
            if (st.weighted >= 1) {
                done = true;
                break;
            }
            RationalVector costs = priced(chosen);
            RationalVector demand;
            for (double r : remaining) demand.push_back(from_double(std::max(r, 0.0)));
            auto sol = covering_value(costs, demand);
            if (!sol.optimal()) throw std::logic_error("phase covering LP is infeasible");

            std::vector<double> y;
            for (const auto& v : sol.primal) y.push_back(to_double(v));
            std::vector<double> load(poly.num_edges(), 0);
            for (std::size_t w = 0; w < nw; ++w)
                for (EdgeId e : poly.columns[chosen[w]].edges) load[e] += y[w];
            double sigma = 1;
            for (EdgeId e = 0; e < poly.num_edges(); ++e)
                if (load[e] > 0) sigma = std::min(sigma, st.capacity[e] / load[e]);

            for (std::size_t w = 0; w < nw; ++w) {
                if (y[w] <= 0) continue;
                x[chosen[w]] += sigma * y[w];
                for (std::size_t i = 0; i < k; ++i)
                    if (spec.weights[w][i]) remaining[i] -= sigma * y[w];
            }
            for (EdgeId e = 0; e < poly.num_edges(); ++e) {
                if (load[e] <= 0) continue;
                double grow = st.length[e] * eps * sigma * load[e] / st.capacity[e];
                st.length[e] += grow;
                st.weighted += grow * st.capacity[e];
            }
        }
        if (done) break;

        RationalVector costs = priced(chosen);
        RationalVector demand;
        for (double v : qd) demand.push_back(from_double(v));
        double bound = st.weighted / to_double(covering_value(costs, demand).value);
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
    ans.bracket = {lambda, (1 + cfg.omega) * lambda};

    detail::LengthState best = st;
    best.length = best_lengths;
    RationalVector l = best.exact_lengths();
    Rational weighted = 0;
    for (EdgeId e = 0; e < poly.num_edges(); ++e)
        if (best_lengths[e] > 0) weighted += l[e] * poly.capacities[e];
    RationalVector costs;
    for (std::size_t w = 0; w < nw; ++w) costs.push_back(cheapest(w, l).second);
    ans.certified_upper = weighted / covering_value(costs, qn).value / qmax;
    return ans;
}

}  // namespace capregion

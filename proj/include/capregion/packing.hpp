#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lp.hpp"
#include "network.hpp"
#include "polytope.hpp"

namespace capregion {

/// A packable object (Steiner tree or partial scalar-linear solution): the
/// edges it occupies with one unit each, and the messages it delivers.
struct PackingColumn {
    std::vector<EdgeId> edges;          // sorted
    std::vector<std::uint8_t> weight;   // 1 where the column delivers message i
};

/// { x >= 0 : sum_col [e in col] x(col) <= c(e) for all e }, mapped to rate
/// space by rate_i(x) = sum of x(col) over columns delivering message i.
struct PackingPolytope {
    std::size_t dimension = 0;
    std::vector<std::int64_t> capacities;
    std::vector<PackingColumn> columns;

    std::size_t num_edges() const { return capacities.size(); }

    Point rates(const RationalVector& x) const {
        Point r(dimension, Rational(0));
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (std::size_t i = 0; i < dimension; ++i)
                if (columns[c].weight[i]) r[i] += x[c];
        return r;
    }

    /// Edge rows of the packing constraints, one per edge.
    std::vector<RationalVector> edge_rows() const {
        std::vector<RationalVector> rows(num_edges(), RationalVector(columns.size(), Rational(0)));
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (EdgeId e : columns[c].edges) rows[e][c] = 1;
        return rows;
    }

    bool feasible(const RationalVector& x) const {
        if (x.size() != columns.size()) return false;
        for (const auto& v : x)
            if (v < 0) return false;
        RationalVector load(num_edges(), Rational(0));
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (EdgeId e : columns[c].edges) load[e] += x[c];
        for (EdgeId e = 0; e < num_edges(); ++e)
            if (load[e] > capacities[e]) return false;
        return true;
    }
};

inline std::vector<std::int64_t> capacities_of(const Network& net) {
    std::vector<std::int64_t> c;
    for (const auto& e : net.edges) c.push_back(e.capacity);
    return c;
}

/// Direction of a ray from the origin; nonnegative and not identically zero.
struct RayQuery {
    RationalVector direction;

    explicit RayQuery(RationalVector d) : direction(std::move(d)) {
        bool nonzero = false;
        for (const auto& x : direction) {
            if (x < 0) throw std::invalid_argument("ray direction must be nonnegative");
            if (x != 0) nonzero = true;
        }
        if (!nonzero) throw std::invalid_argument("ray direction is zero");
    }
};

struct RayAnswer {
    Rational lambda;
    RationalVector packing;
    /// Approximate answers: lower <= lambda_max <= upper.
    std::optional<std::pair<Rational, Rational>> bracket;
    /// Approximate answers: an upper bound on lambda_max proven by LP duality.
    std::optional<Rational> certified_upper;

    Point point(const RayQuery& q) const {
        Point p = q.direction;
        for (auto& c : p) c *= lambda;
        return p;
    }
};

/// Largest lambda with lambda * q achievable:
///   max lambda  s.t.  edge rows <= c,  sum_{col delivers i} x(col) >= lambda q_i,  x, lambda >= 0.
/// Messages with q_i = 0 impose no demand row.
inline LPInstance ray_lp(const PackingPolytope& poly, const RayQuery& q) {
    if (q.direction.size() != poly.dimension) throw std::invalid_argument("ray dimension mismatch");
    const std::size_t n = poly.columns.size();
    LPInstance lp;
    lp.objective.assign(n + 1, Rational(0));
    lp.objective[n] = 1;
    auto rows = poly.edge_rows();
    for (EdgeId e = 0; e < poly.num_edges(); ++e) {
        rows[e].push_back(0);
        lp.add_row(std::move(rows[e]), Relation::LessEqual, Rational(poly.capacities[e]));
    }
    for (std::size_t i = 0; i < poly.dimension; ++i) {
        if (q.direction[i] == 0) continue;
        RationalVector row(n + 1, Rational(0));
        for (std::size_t c = 0; c < n; ++c)
            if (poly.columns[c].weight[i]) row[c] = 1;
        row[n] = -q.direction[i];
        lp.add_row(std::move(row), Relation::GreaterEqual, Rational(0));
    }
    return lp;
}

inline RayAnswer packing_ray_exact(const PackingPolytope& poly, const RayQuery& q) {
    auto lp = ray_lp(poly, q);
    auto sol = solve_lp(lp);
    if (!sol.optimal()) throw std::logic_error(std::string("ray LP ended ") + to_string(sol.status));
    RayAnswer ans;
    ans.lambda = sol.value;
    ans.packing.assign(sol.primal.begin(), sol.primal.end() - 1);
    return ans;
}

struct SupportAnswer {
    Rational value;
    Point argmax;
    RationalVector packing;
};

/// max direction . rates(x) over the packing polytope.
inline SupportAnswer packing_support(const PackingPolytope& poly, const RationalVector& direction) {
    if (direction.size() != poly.dimension) throw std::invalid_argument("support direction dimension mismatch");
    const std::size_t n = poly.columns.size();
    SupportAnswer ans;
    if (n == 0) {
        ans.value = 0;
        ans.argmax.assign(poly.dimension, Rational(0));
        return ans;
    }
    LPInstance lp;
    lp.objective.assign(n, Rational(0));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < poly.dimension; ++i)
            if (poly.columns[c].weight[i]) lp.objective[c] += direction[i];
    auto rows = poly.edge_rows();
    for (EdgeId e = 0; e < poly.num_edges(); ++e) lp.add_row(std::move(rows[e]), Relation::LessEqual, Rational(poly.capacities[e]));
    auto sol = solve_lp(lp);
    if (!sol.optimal()) throw std::logic_error(std::string("support LP ended ") + to_string(sol.status));
    ans.value = sol.value;
    ans.packing = sol.primal;
    ans.argmax = poly.rates(sol.primal);
    return ans;
}

/// Planar region from support queries. Starting from the two axis hits, each
/// chord between adjacent boundary points is probed along its outward normal;
/// the chord is certified when the support value equals its own level,
/// otherwise the maximizer splits it.
inline RegionDescription packing_region_2d(const PackingPolytope& poly) {
    if (poly.dimension != 2) throw std::invalid_argument("planar reconstruction needs exactly two messages");
    Rational a = packing_support(poly, {1, 0}).value;
    Rational b = packing_support(poly, {0, 1}).value;
    std::vector<Point> pts{{0, 0}, {a, 0}, {0, b}};

    std::vector<std::pair<Point, Point>> work{{{0, b}, {a, 0}}};
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        RationalVector normal{p[1] - q[1], q[0] - p[0]};
        if (normal[0] == 0 && normal[1] == 0) continue;
        auto s = packing_support(poly, normal);
        if (s.value == dot(normal, p)) continue;
        pts.push_back(s.argmax);
        work.push_back({s.argmax, q});
        work.push_back({p, s.argmax});
    }
    return convex_hull_2d(pts);
}

/// Thrown when brute-force enumeration exceeds its declared budget.
class InstanceTooLarge : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Tableau of { M x + s = c } for one feasible basis.
struct BasisTableau {
    std::vector<RationalVector> rows;   // m x (n + m + 1); last column is the basic solution
    std::vector<std::size_t> basis;     // column index per row

    void pivot(std::size_t r, std::size_t col) {
        const std::size_t width = rows[r].size();
        Rational inv = 1 / rows[r][col];
        for (auto& v : rows[r])
            if (v != 0) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            Rational f = rows[i][col];
            for (std::size_t k = 0; k < width; ++k)
                if (rows[r][k] != 0) rows[i][k] -= f * rows[r][k];
        }
        basis[r] = col;
    }
};

}  // namespace detail

/// Every vertex of the packing polytope, by breadth-first search over feasible
/// simplex bases connected by ratio-test pivots (all tied leaving rows are
/// followed, so degenerate vertices are handled). Throws InstanceTooLarge
/// once more than `max_bases` bases have been visited.
inline std::vector<RationalVector> packing_vertices(const PackingPolytope& poly, std::size_t max_bases = 200000) {
    const std::size_t n = poly.columns.size();
    std::vector<EdgeId> used;
    {
        std::vector<bool> seen(poly.num_edges(), false);
        for (const auto& col : poly.columns)
            for (EdgeId e : col.edges) seen[e] = true;
        for (EdgeId e = 0; e < poly.num_edges(); ++e)
            if (seen[e]) used.push_back(e);
    }
    const std::size_t m = used.size();
    const std::size_t width = n + m + 1;

    detail::BasisTableau start;
    start.rows.assign(m, RationalVector(width, Rational(0)));
    start.basis.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (std::binary_search(poly.columns[c].edges.begin(), poly.columns[c].edges.end(), used[r])) start.rows[r][c] = 1;
        start.rows[r][n + r] = 1;
        start.rows[r][width - 1] = poly.capacities[used[r]];
        start.basis[r] = n + r;
    }

    auto key_of = [](const std::vector<std::size_t>& basis) {
        auto k = basis;
        std::sort(k.begin(), k.end());
        return k;
    };

    std::set<std::vector<std::size_t>> visited{key_of(start.basis)};
    std::set<RationalVector> vertices;
    std::deque<detail::BasisTableau> queue{start};
    while (!queue.empty()) {
        detail::BasisTableau t = std::move(queue.front());
        queue.pop_front();

        RationalVector x(n, Rational(0));
        for (std::size_t r = 0; r < m; ++r)
            if (t.basis[r] < n) x[t.basis[r]] = t.rows[r][width - 1];
        vertices.insert(std::move(x));

        std::vector<bool> basic(n + m, false);
        for (auto b : t.basis) basic[b] = true;
        for (std::size_t col = 0; col < n + m; ++col) {
            if (basic[col]) continue;
            std::optional<Rational> best;
            std::vector<std::size_t> ties;
            for (std::size_t r = 0; r < m; ++r) {
                if (t.rows[r][col] <= 0) continue;
                Rational ratio = t.rows[r][width - 1] / t.rows[r][col];
                if (!best || ratio < *best) {
                    best = ratio;
                    ties = {r};
                } else if (ratio == *best) {
                    ties.push_back(r);
                }
            }
            for (std::size_t r : ties) {
                auto next_basis = t.basis;
                next_basis[r] = col;
                if (!visited.insert(key_of(next_basis)).second) continue;
                if (visited.size() > max_bases)
                    throw InstanceTooLarge("vertex enumeration exceeded " + std::to_string(max_bases) + " bases");
                detail::BasisTableau next = t;
                next.pivot(r, col);
                queue.push_back(std::move(next));
            }
        }
    }
    return {vertices.begin(), vertices.end()};
}

/// Region as the hull of the images of all polytope vertices.
inline RegionDescription packing_region_via_vertices(const PackingPolytope& poly, std::size_t max_bases = 200000) {
    std::vector<Point> images;
    for (const auto& v : packing_vertices(poly, max_bases)) images.push_back(poly.rates(v));
    return convex_hull(images, poly.dimension);
}

/// One probe of a ray-based reconstruction.
struct RayProbe {
    RationalVector direction;
    Rational lambda;
    std::optional<Rational> upper;  // set for approximate oracles
    Point point;
};

struct RayReconstructionConfig {
    bool exact_oracle = true;
    std::size_t max_rays = 5000;    // guard for the exact driver
    std::size_t cloud_rays = 64;    // evenly spread rays for approximate oracles
};

/// Exact mode: `region` is certified. Approximate mode: `region` is only the
/// hull of the probe cloud, a sketch with no containment guarantee.
struct RayReconstruction {
    RegionDescription region;
    std::vector<RayProbe> cloud;
    bool certified = false;
};

using RayOracle = std::function<RayAnswer(const RayQuery&)>;

/// Directions (n-1-k, k)/(n-1), k = 0..n-1, spread evenly from (1,0) to (0,1).
inline std::vector<RationalVector> spread_directions(std::size_t n) {
    if (n < 2) throw std::invalid_argument("need at least two rays");
    std::vector<RationalVector> dirs;
    for (std::size_t k = 0; k < n; ++k)
        dirs.push_back({Rational(n - 1 - k, n - 1), Rational(k, n - 1)});
    return dirs;
}

namespace detail {

struct Line {
    RationalVector normal;
    Rational offset;
};

inline std::optional<Point> intersect(const Line& a, const Line& b) {
    Rational det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
    if (det == 0) return std::nullopt;
    return Point{(a.offset * b.normal[1] - a.normal[1] * b.offset) / det,
                 (a.normal[0] * b.offset - a.offset * b.normal[0]) / det};
}

inline Line line_through(const Point& p, const Point& q) {
    Line l{{q[1] - p[1], p[0] - q[0]}, 0};
    l.offset = dot(l.normal, p);
    return l;
}

// z-component of p x q.
inline Rational cross2(const Point& p, const Point& q) { return p[0] * q[1] - p[1] * q[0]; }

}  // namespace detail

/// Planar reconstruction driven by a ray oracle.
///
/// Exact oracle: boundary hits are kept in angular order from the r2 axis to
/// the r1 axis. A gap between neighbouring hits P, Q is closed when the ray
/// through the chord midpoint returns the midpoint itself (P, midpoint and Q
/// are collinear boundary points). When both neighbouring chords are already
/// certified, the intersection of their lines is probed first; a hit exactly
/// there is a vertex and closes the gap. Otherwise the new hit splits the gap;
/// a hit lying on a neighbouring certified line extends that chord at once.
///
/// Approximate oracle: probes `cloud_rays` evenly spread rays and returns the
/// point cloud together with its hull.
inline RayReconstruction reconstruct_region_rays_2d(const RayOracle& oracle, const RayReconstructionConfig& cfg) {
    RayReconstruction out;
    auto probe = [&](const RationalVector& d) {
        if (out.cloud.size() >= cfg.max_rays) throw std::runtime_error("ray reconstruction exceeded the ray budget");
        RayQuery q(d);
        RayAnswer a = oracle(q);
        RayProbe p{d, a.lambda, std::nullopt, a.point(q)};
        if (a.bracket) p.upper = a.bracket->second;
        out.cloud.push_back(p);
        return p.point;
    };

    if (!cfg.exact_oracle) {
        std::vector<Point> pts{{0, 0}};
        for (const auto& d : spread_directions(cfg.cloud_rays)) pts.push_back(probe(d));
        out.region = convex_hull_2d(pts);
        out.certified = false;
        return out;
    }

    std::vector<Point> hits{probe({0, 1}), probe({1, 0})};
    // A zero axis hit means the down-closed region lies on the other axis.
    if (hits[0][1] == 0 || hits[1][0] == 0) {
        hits.push_back({0, 0});
        out.region = convex_hull_2d(hits);
        out.certified = true;
        return out;
    }

    // lines[k]: certified supporting line of the chord hits[k] -> hits[k+1].
    std::vector<std::optional<detail::Line>> lines{std::nullopt};
    auto on = [](const std::optional<detail::Line>& l, const Point& x) { return l && dot(l->normal, x) == l->offset; };
    auto split = [&](std::size_t k, const Point& hit) {
        const auto left = k > 0 ? lines[k - 1] : std::nullopt;
        const auto right = k + 1 < lines.size() ? lines[k + 1] : std::nullopt;
        hits.insert(hits.begin() + static_cast<std::ptrdiff_t>(k + 1), hit);
        lines[k] = on(left, hit) ? left : std::nullopt;
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(k + 1), on(right, hit) ? right : std::nullopt);
    };

    // Rounds sweep the open gaps right to left, so an insertion never shifts
    // a gap still to be visited in the same round.
    for (bool open = true; open;) {
        open = false;
        for (std::size_t k = hits.size() - 1; k-- > 0;) {
            if (lines[k]) continue;
            open = true;
            const Point p = hits[k], q = hits[k + 1];

            if (k > 0 && lines[k - 1] && k + 1 < lines.size() && lines[k + 1]) {
                auto x = detail::intersect(*lines[k - 1], *lines[k + 1]);
                // Strictly between the two rays and in the orthant.
                if (x && (*x)[0] >= 0 && (*x)[1] >= 0 && detail::cross2(*x, p) > 0 && detail::cross2(q, *x) > 0) {
                    split(k, probe(*x));
                    continue;
                }
            }

            Point mid{(p[0] + q[0]) / 2, (p[1] + q[1]) / 2};
            Point hit = probe(mid);
            if (hit == mid) lines[k] = detail::line_through(p, q);
            else split(k, hit);
        }
    }

    hits.push_back({0, 0});
    out.region = convex_hull_2d(hits);
    out.certified = true;
    return out;
}

}  // namespace capregion

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lp.hpp"
#include "rational.hpp"

namespace capregion {

using Point = RationalVector;

/// normal . x <= offset, with an integer normal whose entries have gcd 1.
struct Halfspace {
    RationalVector normal;
    Rational offset;

    bool contains(const Point& p) const { return dot(normal, p) <= offset; }
    bool operator==(const Halfspace&) const = default;
};

/// Scales (normal, offset) by a positive factor so the normal is a primitive
/// integer vector. The inequality itself is unchanged.
inline Halfspace normalize(Halfspace h) {
    Integer den = 1;
    for (const auto& a : h.normal) den = boost::multiprecision::lcm(den, Integer(boost::multiprecision::denominator(a)));
    Integer g = 0;
    for (const auto& a : h.normal) g = boost::multiprecision::gcd(g, Integer(boost::multiprecision::numerator(a * den)));
    if (g == 0) throw std::invalid_argument("halfspace normal is zero");
    Rational scale(den, g);
    for (auto& a : h.normal) a *= scale;
    h.offset *= scale;
    return h;
}

/// Exact region in rate space. Facets are present for dimension <= 2; higher
/// dimensions carry vertices only.
struct RegionDescription {
    std::size_t dimension = 0;
    std::vector<Point> vertices;
    std::vector<Halfspace> facets;

    bool has_facets() const { return !facets.empty(); }
};

inline std::vector<Point> sorted_points(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

inline bool same_vertex_set(const RegionDescription& a, const RegionDescription& b) {
    return a.dimension == b.dimension && sorted_points(a.vertices) == sorted_points(b.vertices);
}

inline bool same_facet_set(const RegionDescription& a, const RegionDescription& b) {
    auto key = [](const Halfspace& h) { return std::pair(h.normal, h.offset); };
    std::vector<std::pair<RationalVector, Rational>> fa, fb;
    for (const auto& h : a.facets) fa.push_back(key(h));
    for (const auto& h : b.facets) fb.push_back(key(h));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    return fa == fb;
}

namespace detail {

inline Rational cross(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline Halfspace make_halfspace(RationalVector normal, const Point& through) {
    Halfspace h{std::move(normal), 0};
    h.offset = dot(h.normal, through);
    return normalize(std::move(h));
}

}  // namespace detail

/// Segment hull of 1-D points: vertices {min, max}.
inline RegionDescription convex_hull_1d(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("convex hull of no points");
    RegionDescription r;
    r.dimension = 1;
    Rational lo = points[0].at(0), hi = points[0].at(0);
    for (const auto& p : points) {
        if (p.size() != 1) throw std::invalid_argument("convex_hull_1d: dimension mismatch");
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    r.vertices.push_back({lo});
    if (hi != lo) r.vertices.push_back({hi});
    r.facets.push_back(normalize({{Rational(-1)}, -lo}));
    r.facets.push_back(normalize({{Rational(1)}, hi}));
    return r;
}

/// Exact planar hull (monotone chain). Vertices are counter-clockwise starting
/// at the lowest-x, then lowest-y point; collinear points are dropped. Facet k
/// supports the edge from vertex k to vertex k+1.
inline RegionDescription convex_hull_2d(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("convex hull of no points");
    for (const auto& p : points)
        if (p.size() != 2) throw std::invalid_argument("convex_hull_2d: points must be 2-dimensional");
    auto pts = sorted_points(points);

    RegionDescription r;
    r.dimension = 2;
    if (pts.size() == 1) {
        const Point& p = pts[0];
        r.vertices = pts;
        r.facets.push_back(detail::make_halfspace({1, 0}, p));
        r.facets.push_back(detail::make_halfspace({0, 1}, p));
        r.facets.push_back(detail::make_halfspace({-1, 0}, p));
        r.facets.push_back(detail::make_halfspace({0, -1}, p));
        return r;
    }

    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && detail::cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);

    if (hull.size() == 2) {  // all points collinear
        const Point &p = hull[0], &q = hull[1];
        RationalVector d{q[0] - p[0], q[1] - p[1]};
        r.vertices = hull;
        r.facets.push_back(detail::make_halfspace({d[1], -d[0]}, p));
        r.facets.push_back(detail::make_halfspace({-d[1], d[0]}, p));
        r.facets.push_back(detail::make_halfspace({d[0], d[1]}, q));
        r.facets.push_back(detail::make_halfspace({-d[0], -d[1]}, p));
        return r;
    }

    r.vertices = hull;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point &p = hull[i], &q = hull[(i + 1) % hull.size()];
        r.facets.push_back(detail::make_halfspace({q[1] - p[1], p[0] - q[0]}, p));
    }
    return r;
}

/// True iff p is not a convex combination of the other points.
inline bool is_extreme_point(const std::vector<Point>& points, std::size_t index) {
    const Point& p = points[index];
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < points.size(); ++j)
        if (j != index && points[j] != p) others.push_back(j);
    if (others.empty()) return true;
    LPInstance lp;
    lp.objective.assign(others.size(), Rational(0));
    for (std::size_t c = 0; c < p.size(); ++c) {
        RationalVector row;
        for (auto j : others) row.push_back(points[j][c]);
        lp.add_row(std::move(row), Relation::Equal, p[c]);
    }
    lp.add_row(RationalVector(others.size(), Rational(1)), Relation::Equal, Rational(1));
    return solve_lp(lp).status == LPStatus::Infeasible;
}

/// Hull in any dimension; facets only for dimension <= 2.
inline RegionDescription convex_hull(const std::vector<Point>& points, std::size_t dimension) {
    if (dimension == 1) return convex_hull_1d(points);
    if (dimension == 2) return convex_hull_2d(points);
    if (points.empty()) throw std::invalid_argument("convex hull of no points");
    auto pts = sorted_points(points);
    RegionDescription r;
    r.dimension = dimension;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (is_extreme_point(pts, i)) r.vertices.push_back(pts[i]);
    return r;
}

/// Closed-region membership against the H-description.
inline bool membership(const RegionDescription& region, const Point& r) {
    if (r.size() != region.dimension) throw std::invalid_argument("membership: dimension mismatch");
    if (!region.has_facets()) throw std::logic_error("membership needs an H-description");
    return std::all_of(region.facets.begin(), region.facets.end(), [&](const Halfspace& h) { return h.contains(r); });
}

/// True iff every vertex of `inner` satisfies every facet of `outer`.
inline bool region_containment(const RegionDescription& inner, const RegionDescription& outer) {
    if (inner.dimension != outer.dimension) throw std::invalid_argument("region_containment: dimension mismatch");
    if (!outer.has_facets()) throw std::logic_error("region_containment needs an H-description of the outer region");
    for (const auto& v : inner.vertices)
        if (!membership(outer, v)) return false;
    return true;
}

/// Hull of the points, every coordinate projection of them, and the origin.
inline RegionDescription down_closure(const std::vector<Point>& points, std::size_t dimension) {
    if (dimension == 0 || dimension > 3) throw std::invalid_argument("down_closure supports dimensions 1 to 3");
    std::vector<Point> all{Point(dimension, Rational(0))};
    for (const auto& p : points) {
        if (p.size() != dimension) throw std::invalid_argument("down_closure: dimension mismatch");
        for (const auto& c : p)
            if (c < 0) throw std::invalid_argument("down_closure: negative coordinate");
        for (unsigned mask = 0; mask < (1u << dimension); ++mask) {
            Point q = p;
            for (std::size_t c = 0; c < dimension; ++c)
                if (mask & (1u << c)) q[c] = 0;
            all.push_back(std::move(q));
        }
    }
    return convex_hull(all, dimension);
}

/// Boundary intersection of a ray through the origin.
struct RayHit {
    Rational lambda;
    Point point;
};

/// Answers lambda_max for directions in the nonnegative orthant.
using OrthantRayOracle = std::function<Rational(const RationalVector&)>;

/// Extends an orthant oracle to arbitrary directions on the region mirrored
/// through every coordinate hyperplane: a direction is answered through its
/// coordinatewise absolute value and the hit is mirrored back.
inline std::function<RayHit(const RationalVector&)> reflect_symmetrize(OrthantRayOracle oracle) {
    return [oracle = std::move(oracle)](const RationalVector& direction) {
        if (std::all_of(direction.begin(), direction.end(), [](const Rational& x) { return x == 0; }))
            throw std::invalid_argument("ray direction is zero");
        RationalVector positive(direction.size());
        for (std::size_t i = 0; i < direction.size(); ++i) positive[i] = abs(direction[i]);
        RayHit hit;
        hit.lambda = oracle(positive);
        hit.point.resize(direction.size());
        for (std::size_t i = 0; i < direction.size(); ++i) hit.point[i] = hit.lambda * direction[i];
        return hit;
    };
}

inline std::string serialize_region(const RegionDescription& r) {
    std::ostringstream out;
    for (const auto& v : r.vertices) {
        out << "vertex";
        for (const auto& c : v) out << ' ' << c.str();
        out << '\n';
    }
    for (const auto& h : r.facets) {
        out << "facet";
        for (const auto& a : h.normal) out << ' ' << a.str();
        out << " <= " << h.offset.str() << '\n';
    }
    return out.str();
}

/// Reads the block written by serialize_region; other lines are ignored.
inline RegionDescription parse_region(const std::string& text, std::size_t dimension) {
    RegionDescription r;
    r.dimension = dimension;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "vertex") {
            Point p;
            for (std::string tok; ls >> tok;) p.push_back(parse_rational(tok));
            if (p.size() != dimension) throw std::invalid_argument("vertex has wrong dimension");
            r.vertices.push_back(std::move(p));
        } else if (kind == "facet") {
            std::vector<std::string> toks;
            for (std::string tok; ls >> tok;) toks.push_back(tok);
            if (toks.size() != dimension + 2 || toks[dimension] != "<=") throw std::invalid_argument("malformed facet line");
            Halfspace h;
            for (std::size_t c = 0; c < dimension; ++c) h.normal.push_back(parse_rational(toks[c]));
            h.offset = parse_rational(toks.back());
            r.facets.push_back(std::move(h));
        }
    }
    return r;
}

}  // namespace capregion

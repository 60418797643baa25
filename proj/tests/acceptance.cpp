// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capregion.hpp"
#include "oracles.hpp"

using namespace capregion;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o, double secs) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  (" << buf << ")";
    if (!o.detail.empty()) std::cout << "  " << o.detail;
    std::cout << std::endl;
    if (!o.pass) ++failures;
}

void criterion(int id, const std::string& title, double limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    if (limit > 0 && secs >= limit) o.fail("time limit " + std::to_string(limit) + "s exceeded");
    report(id, title, o, secs);
}

std::string str(const RationalVector& v) { return "(" + to_string(v) + ")"; }

Halfspace hs(std::vector<int> a, int b) {
    Halfspace h;
    for (int x : a) h.normal.push_back(x);
    h.offset = b;
    return h;
}

RegionDescription expected(std::vector<Point> vertices, std::vector<Halfspace> facets) {
    RegionDescription r;
    r.dimension = vertices.at(0).size();
    r.vertices = std::move(vertices);
    r.facets = std::move(facets);
    return r;
}

const std::vector<RationalVector> kRays{{1, 1}, {1, 2}, {2, 1}, {1, 0}, {0, 1}};

std::vector<Network> corpus() {
    CorpusSpec spec;
    spec.nodes = {4, 8};
    spec.edges = {4, 12};
    spec.messages = 2;
    spec.capacity = {1, 3};
    spec.seed = 20240611;
    return gen_corpus(spec, 30);
}

/// Convex, down-closed, bounded by the per-message out-capacity bound.
void check_region_properties(const Network& net, const RegionDescription& r, const std::string& tag, Outcome& o) {
    if (!same_vertex_set(convex_hull_2d(r.vertices), r)) o.fail(tag + ": hull of vertices differs from the region");
    if (!same_vertex_set(down_closure(r.vertices, 2), r)) o.fail(tag + ": region is not down-closed");
    auto gamma = rate_upper_bounds(net);
    for (const auto& v : r.vertices)
        for (std::size_t i = 0; i < 2; ++i)
            if (v[i] < 0 || v[i] > gamma[i]) o.fail(tag + ": vertex " + str(v) + " outside [0, gamma]");
}

void check_membership(const RegionDescription& r, const std::string& tag, Outcome& o) {
    const Rational step(1, 1000);
    for (const auto& v : r.vertices) {
        if (!membership(r, v)) o.fail(tag + ": vertex " + str(v) + " is not a member");
        for (const auto& h : r.facets) {
            if (dot(h.normal, v) != h.offset) continue;
            Point out = v;
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += step * h.normal[i];
            if (membership(r, out)) o.fail(tag + ": perturbed vertex " + str(out) + " is a member");
        }
    }
}

}  // namespace

int main() {
    const Network butterfly = oracle::fixture("butterfly.net");
    const Network diamond = oracle::fixture("diamond.net");
    const auto nets = corpus();

    const RegionDescription triangle =
        expected({{0, 0}, {1, 0}, {0, 1}}, {hs({-1, 0}, 0), hs({0, -1}, 0), hs({1, 1}, 1)});
    const RegionDescription square = expected({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                              {hs({-1, 0}, 0), hs({0, -1}, 0), hs({1, 0}, 1), hs({0, 1}, 1)});

    criterion(1, "butterfly routing region is the triangle (three exact methods)", 1.0, [&](Outcome& o) {
        auto spec = build_routing_polytope(butterfly);
        auto exact = [&](const RayQuery& q) { return ray_oracle_exact(spec, q); };
        std::vector<std::pair<std::string, RegionDescription>> got{
            {"support", exact_region_2d(spec)},
            {"vertices", exact_region_via_vertices(spec)},
            {"rays", reconstruct_region_rays_2d(exact, {}).region},
        };
        for (const auto& [name, r] : got) {
            if (!same_vertex_set(r, triangle)) o.fail(name + ": wrong vertices");
            if (!same_facet_set(r, triangle)) o.fail(name + ": wrong facets");
        }
    });

    criterion(2, "butterfly semilinear region over GF(2) is the unit square, strictly above routing", 5.0,
              [&](Outcome& o) {
                  auto semi = semi_exact_region_2d(build_semi_polytope(butterfly, PrimeField(2)));
                  if (!same_vertex_set(semi, square)) o.fail("wrong vertices");
                  if (!same_facet_set(semi, square)) o.fail("wrong facets");
                  auto routing = exact_region_2d(build_routing_polytope(butterfly));
                  if (!region_containment(routing, semi)) o.fail("routing region not inside semilinear region");
                  if (region_containment(semi, routing)) o.fail("semilinear region inside routing region");
              });

    criterion(3, "routing capacity along the all-ones ray: butterfly 1/2, diamond 2", 0, [&](Outcome& o) {
        Rational b = routing_capacity_scalar(build_routing_polytope(butterfly));
        Rational d = routing_capacity_scalar(build_routing_polytope(diamond));
        if (b != Rational(1, 2)) o.fail("butterfly gave " + b.str());
        if (d != 2) o.fail("diamond gave " + d.str());
    });

    criterion(4, "routing GK (exact Steiner oracle, omega 1/10) brackets the exact ray answer on the corpus", 60.0,
              [&](Outcome& o) {
                  if (nets.size() < 25) o.fail("corpus too small");
                  GKConfig cfg;
                  for (std::size_t n = 0; n < nets.size(); ++n) {
                      auto spec = build_routing_polytope(nets[n]);
                      for (const auto& d : kRays) {
                          RayQuery q(d);
                          Rational exact = ray_oracle_exact(spec, q).lambda;
                          Rational gk = ray_oracle_gk(spec, q, cfg).lambda;
                          if (!(gk <= exact && exact <= Rational(11, 10) * gk))
                              o.fail("net " + std::to_string(n) + " ray " + str(d) + ": exact " + exact.str() + ", gk " +
                                     gk.str());
                      }
                  }
              });

    criterion(5, "semilinear GK over GF(2) brackets the exact ray answer on the corpus", 120.0, [&](Outcome& o) {
        SemiGKConfig cfg;
        for (std::size_t n = 0; n < nets.size(); ++n) {
            auto spec = build_semi_polytope(nets[n], PrimeField(2));
            for (const auto& d : kRays) {
                RayQuery q(d);
                Rational exact = semi_ray_oracle_exact(spec, q).lambda;
                auto gk = semi_ray_oracle_gk(spec, q, cfg);
                if (!(gk.bracket->first <= exact && exact <= gk.bracket->second))
                    o.fail("net " + std::to_string(n) + " ray " + str(d) + ": exact " + exact.str() + ", bracket [" +
                           gk.bracket->first.str() + ", " + gk.bracket->second.str() + "]");
            }
        }
    });

    std::vector<RegionDescription> routing_regions, semi_regions;
    criterion(6, "support, vertex-enumeration and ray reconstructions agree on every corpus instance", 0,
              [&](Outcome& o) {
                  for (std::size_t n = 0; n < nets.size(); ++n) {
                      auto spec = build_routing_polytope(nets[n]);
                      auto a = exact_region_2d(spec);
                      auto b = exact_region_via_vertices(spec);
                      auto c = reconstruct_region_rays_2d([&](const RayQuery& q) { return ray_oracle_exact(spec, q); }, {})
                                   .region;
                      if (!same_vertex_set(a, b) || !same_vertex_set(a, c))
                          o.fail("net " + std::to_string(n) + " methods disagree");
                      routing_regions.push_back(a);
                  }
              });

    criterion(7, "regions are convex, down-closed and bounded by source out-capacity", 0, [&](Outcome& o) {
        for (std::size_t n = 0; n < nets.size(); ++n) {
            semi_regions.push_back(semi_exact_region_2d(build_semi_polytope(nets[n], PrimeField(2))));
            check_region_properties(nets[n], routing_regions.at(n), "routing net " + std::to_string(n), o);
            check_region_properties(nets[n], semi_regions.back(), "semilinear net " + std::to_string(n), o);
            if (!region_containment(routing_regions[n], semi_regions[n]))
                o.fail("net " + std::to_string(n) + ": routing region not inside semilinear region");
        }
    });

    criterion(8, "every LP solve is certified; 50 random LPs match brute-force basis enumeration", 0, [&](Outcome& o) {
        std::mt19937_64 rng(8);
        std::uniform_int_distribution<int> coef(-3, 5), rhs(1, 9), dims(1, 4);
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = dims(rng), m = dims(rng);
            LPInstance lp;
            for (std::size_t j = 0; j < n; ++j) lp.objective.push_back(coef(rng));
            std::vector<RationalVector> A;
            RationalVector b;
            for (std::size_t i = 0; i < m; ++i) {
                RationalVector row;
                for (std::size_t j = 0; j < n; ++j) row.push_back(coef(rng));
                A.push_back(row);
                b.push_back(rhs(rng));
                lp.add_row(row, Relation::LessEqual, b.back());
            }
            // Box rows keep the feasible set bounded.
            for (std::size_t j = 0; j < n; ++j) {
                RationalVector row(n, Rational(0));
                row[j] = 1;
                A.push_back(row);
                b.push_back(10);
                lp.add_row(row, Relation::LessEqual, Rational(10));
            }
            auto sol = solve_lp(lp);
            auto brute = oracle::lp_max_by_bases(A, b, lp.objective);
            if (!brute || !sol.optimal() || sol.value != *brute)
                o.fail("random LP " + std::to_string(t) + " disagrees with brute force");
        }
        if (LPAudit::optimal != LPAudit::certified)
            o.fail(std::to_string(LPAudit::optimal - LPAudit::certified) + " optimal solves lacked a valid certificate");
        if (o.pass) o.detail = std::to_string(LPAudit::solves.load()) + " solves, " + std::to_string(LPAudit::certified.load()) +
                   " certified";
    });

    criterion(9, "vertices are members, outward-perturbed vertices are not", 0, [&](Outcome& o) {
        for (std::size_t n = 0; n < nets.size(); ++n) {
            check_membership(routing_regions.at(n), "routing net " + std::to_string(n), o);
            check_membership(semi_regions.at(n), "semilinear net " + std::to_string(n), o);
        }
    });

    criterion(10, "scalar-linear witnesses verify; butterfly (1,1) solvable, unsolvable without u->v", 0,
              [&](Outcome& o) {
                  PrimeField f2(2);
                  auto check_all = [&](const Network& net, const std::string& tag) {
                      for (unsigned bits = 1; bits < 4; ++bits) {
                          WeightVector w(std::vector<std::uint8_t>{std::uint8_t(bits >> 1 & 1), std::uint8_t(bits & 1)});
                          auto sol = is_scalar_linear_solvable(net, w, f2);
                          if (sol && !verify_partial_solution(net, f2, *sol)) o.fail(tag + " weight " + w.str());
                      }
                  };
                  check_all(butterfly, "butterfly");
                  for (std::size_t n = 0; n < nets.size(); ++n) check_all(nets[n], "net " + std::to_string(n));

                  WeightVector both(std::vector<std::uint8_t>{1, 1});
                  if (!is_scalar_linear_solvable(butterfly, both, f2)) o.fail("butterfly (1,1) reported unsolvable");
                  Network cut = butterfly;
                  cut.edges.erase(cut.edges.begin() + 2);
                  if (is_scalar_linear_solvable(cut, both, f2)) o.fail("butterfly without u->v reported solvable");
              });

    std::cout << (failures ? "acceptance: FAILED " + std::to_string(failures) + " criteria" : "acceptance: all criteria pass")
              << std::endl;
    return failures ? 1 : 0;
}

#include <gtest/gtest.h>

#include "capregion/corpus.hpp"
#include "capregion/routing.hpp"
#include "oracles.hpp"

using namespace capregion;

namespace {

const std::vector<RationalVector> kRays = {{1, 1}, {1, 2}, {2, 1}, {1, 0}, {0, 1}, {Rational(1, 3), Rational(5, 7)}};

// lambda_max from the ray program rewritten as A x <= b and solved by
// enumerating every basic solution.
Rational ray_by_enumeration(const PackingPolytope& poly, const RationalVector& q) {
    const std::size_t n = poly.columns.size();
    std::vector<RationalVector> A;
    RationalVector b;
    for (const auto& row : poly.edge_rows()) {
        RationalVector r = row;
        r.push_back(0);
        A.push_back(r);
    }
    for (EdgeId e = 0; e < poly.num_edges(); ++e) b.push_back(poly.capacities[e]);
    for (std::size_t i = 0; i < poly.dimension; ++i) {
        if (q[i] == 0) continue;
        RationalVector r(n + 1, Rational(0));
        for (std::size_t c = 0; c < n; ++c)
            if (poly.columns[c].weight[i]) r[c] = -1;
        r[n] = q[i];
        A.push_back(r);
        b.push_back(0);
    }
    RationalVector obj(n + 1, Rational(0));
    obj[n] = 1;
    return *oracle::lp_max_by_bases(A, b, obj);
}

std::vector<Network> small_corpus(std::uint64_t seed, std::size_t count) {
    CorpusSpec spec;
    spec.seed = seed;
    spec.nodes = {4, 6};
    spec.edges = {4, 8};
    return gen_corpus(spec, count);
}

}  // namespace

TEST(RoutingSpec, ColumnCounts) {
    auto b = build_routing_polytope(oracle::fixture("butterfly.net"));
    EXPECT_EQ(b.polytope.columns.size(), 4u);
    EXPECT_EQ(b.polytope.num_edges(), 7u);
    EXPECT_EQ(b.tree_count, (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(b.dimension(), 2u);

    auto d = build_routing_polytope(oracle::fixture("diamond.net"));
    EXPECT_EQ(d.polytope.columns.size(), 2u);
    EXPECT_EQ(d.polytope.num_edges(), 4u);

    auto s = build_routing_polytope(oracle::fixture("single_edge.net"));
    EXPECT_EQ(s.polytope.columns.size(), 1u);
    EXPECT_EQ(s.dimension(), 1u);
}

TEST(RoutingRay, ButterflyValues) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    auto diag = ray_oracle_exact(spec, RayQuery({1, 1}));
    EXPECT_EQ(diag.lambda, Rational(1, 2));
    EXPECT_EQ(diag.point(RayQuery({1, 1})), (Point{Rational(1, 2), Rational(1, 2)}));
    EXPECT_TRUE(spec.polytope.feasible(diag.packing));
    EXPECT_EQ(ray_oracle_exact(spec, RayQuery({1, 0})).lambda, 1);
    EXPECT_EQ(ray_oracle_exact(spec, RayQuery({2, 1})).lambda, Rational(1, 3));
    EXPECT_EQ(routing_capacity_scalar(spec), Rational(1, 2));
}

TEST(RoutingRay, FixtureScalars) {
    EXPECT_EQ(routing_capacity_scalar(build_routing_polytope(oracle::fixture("diamond.net"))), 2);
    EXPECT_EQ(routing_capacity_scalar(build_routing_polytope(oracle::fixture("single_edge.net"))), 5);
    EXPECT_EQ(routing_capacity_scalar(build_routing_polytope(oracle::fixture("parallel.net"))), 1);
}

TEST(RoutingRay, RejectsBadDirections) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    EXPECT_THROW(RayQuery({0, 0}), std::invalid_argument);
    EXPECT_THROW(RayQuery({-1, 1}), std::invalid_argument);
    EXPECT_THROW(ray_oracle_exact(spec, RayQuery({1})), std::invalid_argument);
}

TEST(RoutingRay, Homogeneous) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    for (const auto& q : kRays) {
        RationalVector scaled = q;
        for (auto& c : scaled) c *= Rational(7, 3);
        EXPECT_EQ(ray_oracle_exact(spec, RayQuery(scaled)).lambda * Rational(7, 3),
                  ray_oracle_exact(spec, RayQuery(q)).lambda);
    }
}

TEST(RoutingRay, MatchesBasisEnumerationOnCorpus) {
    int compared = 0;
    for (const auto& net : small_corpus(101, 30)) {
        auto spec = build_routing_polytope(net);
        if (spec.polytope.columns.size() > 5) continue;
        for (const auto& q : kRays) {
            auto ans = ray_oracle_exact(spec, RayQuery(q));
            EXPECT_EQ(ans.lambda, ray_by_enumeration(spec.polytope, q));
            EXPECT_TRUE(spec.polytope.feasible(ans.packing));
            ++compared;
        }
    }
    EXPECT_GT(compared, 60);
}

TEST(RoutingRegion, ButterflyTriangle) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    auto r = exact_region_2d(spec);
    EXPECT_EQ(sorted_points(r.vertices), (std::vector<Point>{{0, 0}, {0, 1}, {1, 0}}));
    EXPECT_TRUE(same_vertex_set(r, exact_region_via_vertices(spec)));
    EXPECT_TRUE(membership(r, {Rational(1, 2), Rational(1, 2)}));
    EXPECT_FALSE(membership(r, {Rational(1, 2), Rational(3, 5)}));
}

TEST(RoutingRegion, VertexEnumerationHonoursBasisCap) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    EXPECT_THROW(exact_region_via_vertices(spec, 2), InstanceTooLarge);
}

TEST(RoutingRegion, ParallelIsUnitSquare) {
    auto r = exact_region(build_routing_polytope(oracle::fixture("parallel.net")).polytope);
    EXPECT_EQ(sorted_points(r.vertices), (std::vector<Point>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(RoutingRegion, OneDimensionalSegment) {
    auto r = exact_region(build_routing_polytope(oracle::fixture("diamond.net")).polytope);
    EXPECT_EQ(r.dimension, 1u);
    EXPECT_EQ(sorted_points(r.vertices), (std::vector<Point>{{0}, {2}}));
}

TEST(RoutingRegion, MethodsAgreeAndRaysHitBoundary) {
    for (const auto& net : small_corpus(202, 20)) {
        auto spec = build_routing_polytope(net);
        auto by_support = exact_region_2d(spec);
        // Basis enumeration is exponential; compare it where it is cheap.
        if (spec.polytope.columns.size() <= 10) {
            EXPECT_TRUE(same_vertex_set(by_support, exact_region_via_vertices(spec)));
        }

        RayReconstructionConfig cfg;
        auto rays = reconstruct_region_rays_2d([&](const RayQuery& q) { return ray_oracle_exact(spec, q); }, cfg);
        EXPECT_TRUE(rays.certified);
        EXPECT_TRUE(same_vertex_set(rays.region, by_support));

        for (const auto& q : kRays) {
            auto p = ray_oracle_exact(spec, RayQuery(q)).point(RayQuery(q));
            EXPECT_TRUE(membership(by_support, p));
            Point beyond = p;
            for (std::size_t i = 0; i < 2; ++i) beyond[i] += q[i] / 1000;
            EXPECT_FALSE(membership(by_support, beyond));
        }
    }
}

TEST(RoutingSupport, ValuesAndArgmax) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    auto s = support_query(spec, {2, 1});
    EXPECT_EQ(s.value, 2);
    EXPECT_EQ(dot(RationalVector{2, 1}, s.argmax), 2);
    EXPECT_TRUE(spec.polytope.feasible(s.packing));
    EXPECT_EQ(spec.polytope.rates(s.packing), s.argmax);
    EXPECT_EQ(support_query(spec, {1, 1}).value, 1);
}

TEST(RoutingGK, ButterflyBracket) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    auto ans = ray_oracle_gk(spec, RayQuery({1, 1}), GKConfig{});
    ASSERT_TRUE(ans.bracket);
    EXPECT_EQ(ans.bracket->first, ans.lambda);
    EXPECT_LE(ans.lambda, Rational(1, 2));
    EXPECT_GE(ans.bracket->second, Rational(1, 2));
    EXPECT_EQ(ans.bracket->second, Rational(11, 10) * ans.lambda);
    ASSERT_TRUE(ans.certified_upper);
    EXPECT_GE(*ans.certified_upper, Rational(1, 2));
    EXPECT_TRUE(spec.polytope.feasible(ans.packing));
}

TEST(RoutingGK, BracketsHoldAcrossOraclesAndOmegas) {
    auto corpus = small_corpus(303, 15);
    corpus.push_back(oracle::fixture("butterfly.net"));
    corpus.push_back(oracle::fixture("parallel.net"));
    for (const auto& net : corpus) {
        auto spec = build_routing_polytope(net);
        for (auto oracle_kind : {SteinerOracle::Exact, SteinerOracle::ShortestPaths})
            for (Rational omega : {Rational(1, 2), Rational(1, 10), Rational(1, 50)}) {
                GKConfig cfg;
                cfg.omega = omega;
                cfg.steiner_oracle = oracle_kind;
                for (const auto& q : kRays) {
                    Rational exact = ray_oracle_exact(spec, RayQuery(q)).lambda;
                    auto ans = ray_oracle_gk(spec, RayQuery(q), cfg);
                    ASSERT_TRUE(ans.bracket && ans.certified_upper);
                    EXPECT_LE(ans.lambda, exact);
                    EXPECT_GE(ans.bracket->second, exact);
                    EXPECT_GE(*ans.certified_upper, exact);
                    EXPECT_TRUE(spec.polytope.feasible(ans.packing));
                    EXPECT_GE(spec.polytope.rates(ans.packing)[0], ans.lambda * q[0]);
                    EXPECT_GE(spec.polytope.rates(ans.packing)[1], ans.lambda * q[1]);
                }
            }
    }
}

TEST(RoutingGK, ZeroWhenDemandedMessageHasNoTree) {
    auto net = oracle::fixture("parallel.net");
    auto spec = build_routing_polytope(net);
    spec.tree_count[1] = 0;  // pretend message 2 cannot be routed
    spec.polytope.columns.pop_back();
    spec.trees.pop_back();
    auto ans = ray_oracle_gk(spec, RayQuery({1, 1}), GKConfig{});
    EXPECT_EQ(ans.lambda, 0);
    EXPECT_EQ(*ans.certified_upper, 0);
}

TEST(RoutingGK, PhaseCapThrows) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    GKConfig cfg;
    cfg.phase_cap = 0;
    EXPECT_THROW(ray_oracle_gk(spec, RayQuery({1, 1}), cfg), std::runtime_error);
}

TEST(RoutingGK, SketchCloudStaysInsideBracket) {
    auto spec = build_routing_polytope(oracle::fixture("butterfly.net"));
    RayReconstructionConfig cfg;
    cfg.exact_oracle = false;
    auto sketch = reconstruct_region_rays_2d([&](const RayQuery& q) { return ray_oracle_gk(spec, q, GKConfig{}); }, cfg);
    EXPECT_FALSE(sketch.certified);
    ASSERT_EQ(sketch.cloud.size(), 64u);
    for (const auto& p : sketch.cloud) {
        Rational exact = ray_oracle_exact(spec, RayQuery(p.direction)).lambda;
        EXPECT_LE(p.lambda, exact);
        ASSERT_TRUE(p.upper);
        EXPECT_GE(*p.upper, exact);
    }
}

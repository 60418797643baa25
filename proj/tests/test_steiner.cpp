#include <gtest/gtest.h>

#include <random>

#include "capregion/corpus.hpp"
#include "capregion/steiner.hpp"
#include "oracles.hpp"

using namespace capregion;

namespace {

std::set<std::vector<EdgeId>> as_set(const std::vector<SteinerTree>& trees) {
    std::set<std::vector<EdgeId>> s;
    for (const auto& t : trees) s.insert(t.edges);
    return s;
}

void expect_matches_oracle(const Network& net, const std::string& label) {
    for (std::size_t i = 0; i < net.num_messages(); ++i) {
        auto trees = enumerate_minimal_steiner_trees(net, i);
        EXPECT_EQ(as_set(trees), oracle::steiner_trees_by_subsets(net, i)) << label << " message " << i;
        EXPECT_TRUE(std::is_sorted(trees.begin(), trees.end(),
                                   [](const auto& a, const auto& b) { return a.edges < b.edges; }));
        for (const auto& t : trees) EXPECT_EQ(t.message, i);
    }
}

}  // namespace

TEST(SteinerTrees, ButterflyHasTwoTreesPerMessage) {
    auto net = oracle::fixture("butterfly.net");
    auto t1 = enumerate_minimal_steiner_trees(net, 0);
    ASSERT_EQ(t1.size(), 2u);
    // Direct edge to t1 plus the bottleneck path to t2, or the bottleneck to both.
    EXPECT_EQ(t1[0].edges, (std::vector<EdgeId>{0, 2, 3, 6}));
    EXPECT_EQ(t1[1].edges, (std::vector<EdgeId>{0, 2, 5, 6}));
    EXPECT_EQ(enumerate_minimal_steiner_trees(net, 1).size(), 2u);
}

TEST(SteinerTrees, DiamondHasTwoPaths) {
    auto net = oracle::fixture("diamond.net");
    EXPECT_EQ(enumerate_minimal_steiner_trees(net, 0).size(), 2u);
}

TEST(SteinerTrees, FixturesMatchSubsetScan) {
    for (auto name : {"butterfly.net", "diamond.net", "parallel.net", "single_edge.net"})
        expect_matches_oracle(oracle::fixture(name), name);
}

TEST(SteinerTrees, CorpusMatchesSubsetScan) {
    CorpusSpec spec;
    spec.seed = 77;
    spec.edges = {4, 11};
    auto corpus = gen_corpus(spec, 40);
    for (std::size_t k = 0; k < corpus.size(); ++k) expect_matches_oracle(corpus[k], "corpus " + std::to_string(k));
}

TEST(SteinerTrees, RejectsBadMessageIndex) {
    auto net = oracle::fixture("diamond.net");
    EXPECT_THROW(enumerate_minimal_steiner_trees(net, 3), std::out_of_range);
}

TEST(SteinerCost, ExactPicksCheapestTree) {
    auto net = oracle::fixture("butterfly.net");
    RationalVector len(net.num_edges(), Rational(1));
    len[3] = 5;  // make the direct s1->t1 edge expensive
    auto [tree, cost] = min_cost_steiner_exact(net, 0, len);
    EXPECT_EQ(tree.edges, (std::vector<EdgeId>{0, 2, 5, 6}));
    EXPECT_EQ(cost, 4);
}

TEST(SteinerCost, RejectsNonPositiveLengths) {
    auto net = oracle::fixture("diamond.net");
    RationalVector len(net.num_edges(), Rational(1));
    len[0] = 0;
    EXPECT_THROW(min_cost_steiner_exact(net, 0, len), std::invalid_argument);
    len.pop_back();
    EXPECT_THROW(min_cost_steiner_exact(net, 0, len), std::invalid_argument);
}

TEST(SteinerCost, ShortestPathHeuristicWithinReceiverFactor) {
    CorpusSpec spec;
    spec.seed = 5;
    auto corpus = gen_corpus(spec, 30);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> num(1, 9);
    for (const auto& net : corpus)
        for (std::size_t i = 0; i < net.num_messages(); ++i) {
            RationalVector len;
            for (std::size_t e = 0; e < net.num_edges(); ++e) len.push_back(Rational(num(rng), num(rng)));
            auto [opt_tree, opt] = min_cost_steiner_exact(net, i, len);
            auto [edges, cost] = min_cost_steiner_shortest_paths(net, i, len);
            EXPECT_TRUE(connects_all(net, i, edges));
            EXPECT_EQ(prune_to_minimal(net, i, edges), edges);
            EXPECT_GE(cost, opt);
            EXPECT_LE(cost, Rational(static_cast<long>(net.messages[i].receivers.size())) * opt);
            // The result is itself a minimal tree.
            auto all = as_set(enumerate_minimal_steiner_trees(net, i));
            EXPECT_TRUE(all.count(edges));
        }
}

TEST(SteinerCost, ShortestPathsWorksWithDoubles) {
    auto net = oracle::fixture("diamond.net");
    std::vector<double> len(net.num_edges(), 1.0);
    len[0] = 3.0;
    auto [edges, cost] = min_cost_steiner_shortest_paths(net, 0, len);
    EXPECT_DOUBLE_EQ(cost, 2.0);
    EXPECT_FALSE(std::count(edges.begin(), edges.end(), EdgeId{0}));
}

TEST(SteinerPrune, DropsRedundantEdges) {
    auto net = oracle::fixture("butterfly.net");
    auto pruned = prune_to_minimal(net, 0, {6, 5, 3, 2, 0, 0});
    EXPECT_EQ(pruned, (std::vector<EdgeId>{0, 2, 3, 6}));
    EXPECT_TRUE(connects_all(net, 0, pruned));
}

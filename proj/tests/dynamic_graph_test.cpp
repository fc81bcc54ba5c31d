#include <sstream>

#include <gtest/gtest.h>

#include "test_oracles.hpp"

using namespace gchmm;

namespace {

DynamicGraph parse(const std::string& text, std::size_t N, std::size_t T)
{
    std::istringstream in(text);
    return read_proximity(in, N, T);
}

} // namespace

TEST(LoadProximity, EmptyFileGivesEmptySteps)
{
    auto g = parse("t,u,v\n", 3, 2);
    EXPECT_EQ(g.num_nodes(), 3u);
    EXPECT_EQ(g.num_steps(), 2u);
    EXPECT_TRUE(g.edges(0).empty());
    EXPECT_TRUE(g.edges(1).empty());
}

TEST(LoadProximity, CanonicalizesAndDeduplicates)
{
    auto g = parse("t,u,v\n0,1,2\n0,2,1\n1,0,2\n0,0,2\n", 3, 2);
    std::vector<Edge> step0(g.edges(0).begin(), g.edges(0).end());
    std::vector<Edge> step1(g.edges(1).begin(), g.edges(1).end());
    EXPECT_EQ(step0, (std::vector<Edge>{{0, 2}, {1, 2}}));
    EXPECT_EQ(step1, (std::vector<Edge>{{0, 2}}));
}

TEST(LoadProximity, RejectsOutOfRangeNode)
{
    try {
        parse("t,u,v\n0,3,1\n", 3, 2);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(LoadProximity, RejectsSelfLoopBadTimestepAndGarbage)
{
    EXPECT_THROW(parse("t,u,v\n0,1,1\n", 3, 2), ParseError);
    EXPECT_THROW(parse("t,u,v\n2,0,1\n", 3, 2), ParseError);
    EXPECT_THROW(parse("t,u,v\n0,x,1\n", 3, 2), ParseError);
    EXPECT_THROW(parse("t,u,v\n0,1\n", 3, 2), ParseError);
    EXPECT_THROW(parse("a,b,c\n", 3, 2), ParseError);
}

TEST(LoadProximity, MissingFileIsAnError)
{
    EXPECT_THROW(load_proximity("/nonexistent/proximity.csv", 3, 2), Error);
}

TEST(Neighbors, IsolatedAndStar)
{
    DynamicGraph g(5, 2, {{{0, 1}, {0, 2}, {3, 0}}, {}});
    auto nb = g.neighbors(0, 0);
    EXPECT_EQ(std::vector<NodeId>(nb.begin(), nb.end()), (std::vector<NodeId>{1, 2, 3}));
    EXPECT_TRUE(g.neighbors(4, 0).empty());
    EXPECT_TRUE(g.neighbors(0, 1).empty());
    EXPECT_THROW(g.neighbors(5, 0), std::out_of_range);
    EXPECT_THROW(g.neighbors(0, 2), std::out_of_range);
}

TEST(Neighbors, MatchesLinearScanAndIsSymmetric)
{
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracle::random_graph(12, 6, 0.2, rng);
        for (Step t = 0; t < g.num_steps(); ++t)
            for (NodeId n = 0; n < g.num_nodes(); ++n) {
                auto nb = g.neighbors(n, t);
                std::set<NodeId> got(nb.begin(), nb.end());
                EXPECT_EQ(got, oracle::neighbors_by_scan(g, n, t));
                EXPECT_EQ(got.count(n), 0u);
                for (NodeId m : nb) {
                    auto back = g.neighbors(m, t);
                    EXPECT_NE(std::find(back.begin(), back.end(), n), back.end());
                }
            }
    }
}

TEST(Proximity, DumpLoadRoundTrip)
{
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracle::random_graph(9, 5, 0.3, rng);
        std::stringstream buf;
        write_proximity(buf, g);
        auto again = read_proximity(buf, 9, 5);
        EXPECT_EQ(g, again);
    }
}

TEST(DynamicGraph, ConstructorValidates)
{
    EXPECT_THROW(DynamicGraph(0, 1, {}), Error);
    EXPECT_THROW(DynamicGraph(2, 1, {{{0, 2}}}), Error);
    EXPECT_THROW(DynamicGraph(2, 1, {{{1, 1}}}), Error);
}

TEST(DynamicGraph, MeanAndMaxDegree)
{
    DynamicGraph g(4, 2, {{{0, 1}, {0, 2}, {0, 3}}, {{1, 2}}});
    EXPECT_EQ(g.max_degree(), 3u);
    EXPECT_DOUBLE_EQ(g.mean_degree(), 2.0 * 4 / 8.0);
}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_oracles.hpp"

using namespace gchmm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BenchmarkConfig small_config(std::uint64_t seed)
{
    BenchmarkConfig cfg;
    cfg.id = "small";
    cfg.num_series = 4;
    cfg.series_length = 40;
    cfg.training_length = 200;
    cfg.contact.num_nodes = 30;
    cfg.params = {0.02, 0.04, 0.3, {}};
    cfg.holdout_fraction = 0.2;
    cfg.seed = seed;
    return cfg;
}

BenchmarkOptions small_options()
{
    BenchmarkOptions opt;
    opt.chain.iterations = 150;
    opt.chain.burn_in = 50;
    opt.bootstrap = 50;
    return opt;
}

} // namespace

TEST(Roc, PerfectAndReversed)
{
    std::vector<int> labels{0, 1, 1, 0, 1, 0, 0};
    std::vector<double> scores(labels.begin(), labels.end());
    auto c = roc(scores, labels);
    EXPECT_DOUBLE_EQ(c.auc, 1.0);
    EXPECT_EQ(c.points.front().fpr, 0.0);
    EXPECT_EQ(c.points.back().tpr, 1.0);

    Rng rng(1);
    std::vector<double> s2;
    for (std::size_t i = 0; i < labels.size(); ++i)
        s2.push_back(uniform01(rng));
    std::vector<double> rev;
    for (double v : s2)
        rev.push_back(-v);
    EXPECT_NEAR(roc(rev, labels).auc, 1.0 - roc(s2, labels).auc, 1e-12);
}

TEST(Roc, IndependentScoresNearHalf)
{
    Rng rng(2);
    std::vector<double> s;
    std::vector<int> l;
    for (int i = 0; i < 10000; ++i) {
        s.push_back(uniform01(rng));
        l.push_back(uniform01(rng) < 0.3);
    }
    EXPECT_NEAR(roc(s, l).auc, 0.5, 0.02);
}

TEST(Roc, MatchesMannWhitneyWithTies)
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s;
        std::vector<int> l;
        for (int i = 0; i < 200; ++i) {
            s.push_back(std::floor(uniform01(rng) * 10) / 10);
            l.push_back(uniform01(rng) < 0.4);
        }
        l[0] = 0;
        l[1] = 1;
        auto c = roc(s, l);
        EXPECT_NEAR(c.auc, auc_mann_whitney(s, l), 1e-10);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
            EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
        }
        EXPECT_EQ(c.points.back().fpr, 1.0);
        EXPECT_EQ(c.points.back().tpr, 1.0);
    }
}

TEST(Roc, SingleClassIsUndefined)
{
    EXPECT_THROW(roc({0.1, 0.2}, {1, 1}), Error);
    EXPECT_THROW(auc_mann_whitney({0.1, 0.2}, {0, 0}), Error);
}

TEST(Synthesize, NoiselessObservationsAreExact)
{
    auto cfg = small_config(5);
    cfg.observation_error = 0.0;
    for (const auto& s : synthesize(cfg)) {
        ASSERT_EQ(s.holdout.size(), 6u);
        for (NodeId n = 0; n < s.graph->num_nodes(); ++n) {
            const bool masked = std::binary_search(s.holdout.begin(), s.holdout.end(), n);
            for (Step t = 0; t < s.truth.num_steps(); ++t)
                EXPECT_EQ(s.obs(n, t), masked ? kUnobserved : static_cast<std::int8_t>(s.truth(n, t)));
        }
    }
}

TEST(Synthesize, FullHoldoutMasksEverything)
{
    auto cfg = small_config(6);
    cfg.holdout_fraction = 1.0;
    for (const auto& s : synthesize(cfg))
        for (auto v : s.observed)
            EXPECT_EQ(v, kUnobserved);
    cfg.holdout_fraction = 1.5;
    EXPECT_THROW(synthesize(cfg), Error);
    EXPECT_THROW(choose_holdout(3, 4, *std::make_unique<Rng>(1)), Error);
}

TEST(Synthesize, FlipRate)
{
    auto cfg = small_config(7);
    cfg.num_series = 120;
    cfg.observation_error = 0.05;
    std::size_t sites = 0, flips = 0;
    for (const auto& s : synthesize(cfg))
        for (NodeId n = 0; n < s.graph->num_nodes(); ++n)
            for (Step t = 0; t < s.truth.num_steps(); ++t)
                if (auto v = s.obs(n, t); v != kUnobserved) {
                    ++sites;
                    flips += v != s.truth(n, t);
                }
    ASSERT_GE(sites, 100000u);
    const double e = 0.05;
    EXPECT_NEAR(flips / double(sites), e, 3 * std::sqrt(e * (1 - e) / sites));
}

TEST(Synthesize, DeterministicAndDefaults)
{
    auto cfg = small_config(8);
    auto a = synthesize(cfg), b = synthesize(cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].truth, b[i].truth);
        EXPECT_EQ(a[i].observed, b[i].observed);
        EXPECT_EQ(a[i].holdout, b[i].holdout);
        for (NodeId n = 0; n < 30; ++n)
            EXPECT_EQ(a[i].truth(n, 0), 0);
    }
    auto d = default_benchmark_configs();
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].params, (SISParams{0.01, 0.02, 0.3, {}}));
    EXPECT_EQ(d[0].observation_error, 0.01);
    EXPECT_EQ(d[1].params, (SISParams{0.01, 0.02, 0.3, {}}));
    EXPECT_EQ(d[1].observation_error, 0.001);
    EXPECT_EQ(d[2].params, (SISParams{0.005, 0.045, 0.3, {}}));
    EXPECT_EQ(d[2].observation_error, 0.01);
    for (const auto& c : d) {
        EXPECT_EQ(c.num_series, 200u);
        EXPECT_EQ(c.series_length, 128u);
        EXPECT_EQ(c.holdout_fraction, 0.1);
    }
}

TEST(Synthesize, ContactPatternHitsTargetDegree)
{
    ContactPatternConfig cp;
    auto g = generate_contact_pattern(cp, 14);
    EXPECT_EQ(g.num_nodes(), 84u);
    // Period-7 repetition.
    for (Step t = 0; t < 7; ++t)
        EXPECT_EQ(std::vector<Edge>(g.edges(t).begin(), g.edges(t).end()), std::vector<Edge>(g.edges(t + 7).begin(), g.edges(t + 7).end()));
    EXPECT_NEAR(g.mean_degree(), cp.mean_degree, 0.05 * cp.mean_degree);
}

TEST(ScoreGchmm, ScoresAreProbabilities)
{
    auto cfg = small_config(9);
    auto series = synthesize(cfg);
    ChainConfig chain;
    chain.iterations = 100;
    chain.burn_in = 20;
    for (const auto& s : series) {
        auto sc = score_gchmm(s, cfg.observation_error, {}, chain);
        EXPECT_EQ(sc.size(), heldout_sites(s).size());
        for (double v : sc) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        for (double v : score_ode(s, cfg.params)) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        for (double v : score_jump(s, cfg.params, 3, 20)) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(ScoreGchmm, IsolatedHeldOutNodeScoresBelowBaseRate)
{
    // Node 0 never has contacts; everyone else sits on a dense ring.
    const std::size_t N = 30, T = 60;
    std::vector<Edge> ring;
    for (NodeId n = 1; n < N; ++n)
        for (NodeId d = 1; d <= 3; ++d)
            ring.push_back({n, static_cast<NodeId>(1 + (n - 1 + d) % (N - 1))});
    auto g = std::make_shared<const DynamicGraph>(N, T, std::vector<std::vector<Edge>>(T, ring));
    SISParams p{0.002, 0.08, 0.2, {}};
    Rng rng(10);
    double score_sum = 0, base_sum = 0;
    std::size_t sites = 0, cells = 0;
    ChainConfig chain;
    chain.iterations = 400;
    chain.burn_in = 100;
    for (int rep = 0; rep < 5; ++rep) {
        Series s;
        s.graph = g;
        s.truth = simulate_sis_states(*g, {0.05, 0.08, 0.2, {}}, {}, rng);
        s.holdout = {0};
        s.observed = observe_states(s.truth, s.holdout, 0.01, rng);
        for (double v : score_gchmm(s, 0.01, {}, chain, p)) {
            score_sum += v;
            ++sites;
        }
        for (Step t = 1; t < T; ++t)
            for (NodeId n = 0; n < N; ++n) {
                base_sum += s.truth(n, t);
                ++cells;
            }
    }
    EXPECT_LT(score_sum / sites, base_sum / cells);
}

TEST(ScoreGchmm, TinySeriesMatchesEnumeration)
{
    const std::size_t N = 3, T = 5;
    auto g = std::make_shared<const DynamicGraph>(N, T, std::vector<std::vector<Edge>>(T, {{0, 1}, {1, 2}}));
    SISParams p{0.1, 0.25, 0.3, {}};
    Series s;
    s.graph = g;
    s.truth = StateMatrix(N, T);
    s.holdout = {1};
    const int obs[3][5] = {{0, 1, 1, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 1, 1, 1}};
    s.observed.assign(N * T, kUnobserved);
    for (NodeId n : {0u, 2u})
        for (Step t = 0; t < T; ++t)
            s.observed[t * N + n] = static_cast<std::int8_t>(obs[n][t]);
    const double e = 0.05;

    TinyInstance inst{*g, p, flip_emission(e), observations_from_series(s)};
    auto exact = enumerate_posterior(inst);
    ChainConfig chain;
    chain.iterations = 60000;
    chain.burn_in = 1000;
    chain.seed = 11;
    auto sc = score_gchmm(s, e, {}, chain, p);
    auto sites = heldout_sites(s);
    ASSERT_EQ(sc.size(), sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i)
        EXPECT_NEAR(sc[i], exact.marginal(sites[i].node, sites[i].t, N), 0.02) << i;
}

TEST(Benchmark, NoHeldOutSitesIsSkipped)
{
    auto cfg = small_config(12);
    cfg.holdout_fraction = 0.0;
    cfg.observation_error = 0.0;
    auto opt = small_options();
    opt.methods = {"ode-sis", "neighbor-count"};
    auto rows = run_config(cfg, opt);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows)
        EXPECT_TRUE(r.skipped);
    auto dir = fs::temp_directory_path() / "gchmm_bench_skip";
    fs::remove_all(dir);
    write_benchmark_report(dir, rows);
    EXPECT_EQ(slurp(dir / "report.csv"), "config_id,method,auc,auc_ci_lo,auc_ci_hi,n_series,wall_seconds\n"
                                         "small,ode-sis,NA,NA,NA,4,0\nsmall,neighbor-count,NA,NA,NA,4,0\n");
    EXPECT_FALSE(fs::exists(dir / "roc_small_ode-sis.csv"));
    fs::remove_all(dir);
}

TEST(Benchmark, UnknownMethodRejected)
{
    auto opt = small_options();
    opt.methods = {"svm"};
    EXPECT_THROW(run_config(small_config(1), opt), Error);
}

TEST(Benchmark, ReportIsByteIdenticalAcrossRunsAndThreads)
{
    auto cfg = small_config(13);
    auto opt = small_options();
    auto a = fs::temp_directory_path() / "gchmm_bench_a";
    auto b = fs::temp_directory_path() / "gchmm_bench_b";
    fs::remove_all(a);
    fs::remove_all(b);
    write_benchmark_report(a, run_benchmark({cfg}, opt));
    opt.threads = 3;
    write_benchmark_report(b, run_benchmark({cfg}, opt));
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
    EXPECT_EQ(files, 5u);
    auto rows = run_benchmark({cfg}, opt);
    for (const auto& r : rows) {
        EXPECT_FALSE(r.skipped);
        EXPECT_GE(r.auc, 0.0);
        EXPECT_LE(r.auc, 1.0);
        EXPECT_LE(r.auc_ci_lo, r.auc_ci_hi);
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Heatmap, AllMissing)
{
    ObservationMatrix y(2, 6, 3);
    std::vector<double> m(12, 0.25);
    for (const auto& r : heatmap_rows(m, y, 3)) {
        EXPECT_EQ(r.symptom_count, 0u);
        EXPECT_TRUE(r.missing);
        EXPECT_DOUBLE_EQ(r.p_infectious, 0.25);
    }
    EXPECT_EQ(heatmap_rows(m, y, 3).size(), 4u);
}

TEST(Heatmap, ConsecutiveInfectiousDays)
{
    ObservationMatrix y(1, 6, 2);
    std::vector<double> m{0, 1, 1, 1, 1, 0};
    y.set(0, 2, 0, 1);
    y.set(0, 2, 1, 1);
    y.set(0, 3, 1, 0);
    auto rows = heatmap_rows(m, y);
    ASSERT_EQ(rows.size(), 6u);
    int ones = 0;
    for (const auto& r : rows)
        ones += r.p_infectious == 1.0;
    EXPECT_EQ(ones, 4);
    EXPECT_EQ(rows[2].symptom_count, 2u);
    EXPECT_FALSE(rows[3].missing);
    EXPECT_EQ(rows[3].symptom_count, 0u);
    EXPECT_TRUE(rows[4].missing);
    std::ostringstream out;
    export_heatmap(out, m, y);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "node,day,p_infectious,symptom_count,missing");
}

TEST(Heatmap, HourlyConstantAggregatesToConstant)
{
    ObservationMatrix y(3, 48, 1);
    std::vector<double> m(3 * 48, 0.37);
    auto rows = heatmap_rows(m, y, 24);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows)
        EXPECT_NEAR(r.p_infectious, 0.37, 1e-15);
    EXPECT_THROW(heatmap_rows(std::vector<double>(5), y, 24), Error);
}

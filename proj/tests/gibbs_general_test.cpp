#include <cmath>

#include <gtest/gtest.h>

#include "test_oracles.hpp"

using namespace gchmm;

namespace {

double general_joint(const StateMatrix& x, const ObservationMatrix& y, const DynamicGraph& g, const std::vector<EventSpec>& ev,
                     const EmissionParams& th)
{
    double p = oracle::emission_prob(y, x, th);
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            p *= transition_prob_general(n, t, x(n, t + 1), x, g, ev);
    return p;
}

EventCounter constant(std::size_t c)
{
    return [c](NodeId, Step, const StateMatrix&, const DynamicGraph&) { return c; };
}

// S -> I by contact, I -> R, R -> S.
std::vector<EventSpec> sirs_events()
{
    auto contacts = [](NodeId n, Step t, const StateMatrix& x, const DynamicGraph& g) {
        std::size_t k = 0;
        for (NodeId m : g.neighbors(n, t))
            k += x(m, t) == 1;
        return k;
    };
    return {{"seed", 0.1, 0, 1, constant(1), {}},
            {"contact", 0.3, 0, 1, contacts, {}},
            {"recover", 0.4, 1, 2, constant(1), {}},
            {"wane", 0.25, 2, 0, constant(1), {}}};
}

} // namespace

TEST(GeneralKernel, SisReductionConditional)
{
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = oracle::random_graph(5, 6, 0.4, rng);
        auto x = oracle::random_states(5, 6, 0.4, rng);
        auto y = oracle::random_observations(5, 6, 2, 0.3, rng);
        auto th = oracle::random_theta(2, rng);
        SISParams p{0.02 + 0.05 * uniform01(rng), 0.05 + 0.1 * uniform01(rng), 0.1 + 0.6 * uniform01(rng), {}};
        auto ev = sis_events(p);
        for (Step t = 1; t < 6; ++t)
            for (NodeId n = 0; n < 5; ++n) {
                auto probs = state_conditional_general(n, t, x, y, g, ev, th);
                ASSERT_EQ(probs.size(), 2u);
                EXPECT_NEAR(probs[1], state_conditional(n, t, x, y, g, p, th), 1e-10);
            }
    }
}

TEST(GeneralKernel, SisReductionAttributionAndRates)
{
    Rng rng(22);
    auto g = oracle::random_graph(6, 8, 0.4, rng);
    auto x = oracle::random_states(6, 8, 0.4, rng);
    SISParams p{0.03, 0.08, 0.3, {{1, 2}, {2, 1}, {1.5, 1.5}}};
    auto ev = sis_events(p);
    // Weight sums match the linear infection probability.
    for (Step t = 0; t + 1 < 8; ++t)
        for (NodeId n = 0; n < 6; ++n) {
            if (x(n, t) != 0)
                continue;
            auto w = event_weights(n, t, 1, x, g, ev);
            EXPECT_NEAR(w[0] + w[1], infection_prob_linear(p, oracle::infectious_by_scan(x, g, n, t)).value, 1e-12);
            EXPECT_EQ(w[2], 0.0);
        }
    Rng a(5);
    auto attr = sample_event_general(x, g, ev, a);
    SourceMatrix r;
    for (const auto& e : attr)
        if (e.event != 2)
            r.push({e.node, e.t, e.event == 0 ? 1u : 2u});
    auto shapes = rate_posterior_general(x, g, ev, attr);
    EXPECT_EQ(shapes[0], alpha_posterior(x, r, p.priors));
    EXPECT_EQ(shapes[1], beta_posterior(x, r, g, p.priors));
    EXPECT_EQ(shapes[2], gamma_posterior(x, p.priors));
}

TEST(GeneralKernel, AttributionFrequencies)
{
    DynamicGraph g(3, 2, {{{0, 1}, {0, 2}}, {}});
    StateMatrix x(3, 2);
    x.put(1, 0, 1);
    x.put(2, 0, 1);
    x.put(0, 1, 1);
    x.put(1, 1, 1);
    x.put(2, 1, 1);
    auto ev = sis_events({0.1, 0.2, 0.3, {}});
    Rng rng(9);
    const int draws = 100000;
    int outside = 0;
    for (int i = 0; i < draws; ++i)
        outside += sample_event_general(x, g, ev, rng).at(0).event == 0;
    const double p = 0.1 / 0.5;
    EXPECT_NEAR(outside / double(draws), p, 3 * std::sqrt(p * (1 - p) / draws));
}

TEST(GeneralKernel, ZeroCountKeepsPrior)
{
    Rng rng(23);
    auto g = oracle::random_graph(4, 6, 0.5, rng);
    auto x = oracle::random_states(4, 6, 0.5, rng);
    std::vector<EventSpec> ev{{"never", 0.3, 0, 1, constant(0), {2.5, 4.0}}, {"recover", 0.3, 1, 0, constant(1), {}}};
    auto shapes = rate_posterior_general(x, g, ev, {});
    EXPECT_EQ(shapes[0], (BetaShape{2.5, 4.0}));
}

TEST(GeneralKernel, ImpossibleTransitionIsReported)
{
    DynamicGraph g(1, 2, {});
    StateMatrix x(1, 2);
    x.put(0, 1, 1);
    std::vector<EventSpec> ev{{"never", 0.3, 0, 1, constant(0), {}}};
    Rng rng(1);
    EXPECT_THROW(sample_event_general(x, g, ev, rng), ImpossibleEvent);
}

TEST(GeneralKernel, SznajdConditionalOnFourCycle)
{
    std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    DynamicGraph g(4, 4, {cycle, cycle, cycle, cycle});
    ObservationMatrix y(4, 4, 1);
    y.set(0, 2, 0, 1);
    y.set(2, 3, 0, 0);
    EmissionParams th(2, 1, std::vector<double>{0.3, 0.7}, 1.0);
    auto ev = sznajd_events(0.2);
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = oracle::random_states(4, 4, 0.5, rng);
        for (NodeId n = 0; n < 4; ++n)
            x.put(n, 0, uniform01(rng) < 0.5);
        for (Step t = 1; t < 4; ++t)
            for (NodeId n = 0; n < 4; ++n) {
                StateMatrix x0 = x, x1 = x;
                x0.put(n, t, 0);
                x1.put(n, t, 1);
                const double w0 = general_joint(x0, y, g, ev, th), w1 = general_joint(x1, y, g, ev, th);
                if (w0 + w1 == 0.0)
                    continue;
                auto probs = state_conditional_general(n, t, x, y, g, ev, th);
                EXPECT_NEAR(probs[1], w1 / (w0 + w1), 1e-10);
            }
    }
}

TEST(GeneralKernel, ThreeStateSamplerMatchesEnumeration)
{
    DynamicGraph g(2, 3, {{{0, 1}}, {{0, 1}}, {}});
    StateMatrix x(2, 3, 3);
    ObservationMatrix y(2, 3, 1);
    y.set(0, 1, 0, 1);
    y.set(1, 2, 0, 1);
    EmissionParams th(3, 1, std::vector<double>{0.2, 0.8, 0.4}, 1.0);
    auto ev = sirs_events();

    // Exact marginals over the 3^4 completions.
    std::vector<double> exact(2 * 3 * 3, 0.0);
    double z = 0.0;
    for (int code = 0; code < 81; ++code) {
        StateMatrix c(2, 3, 3);
        int rest = code;
        for (Step t = 1; t < 3; ++t)
            for (NodeId n = 0; n < 2; ++n) {
                c.put(n, t, static_cast<State>(rest % 3));
                rest /= 3;
            }
        const double w = general_joint(c, y, g, ev, th);
        z += w;
        for (Step t = 0; t < 3; ++t)
            for (NodeId n = 0; n < 2; ++n)
                exact[(t * 2 + n) * 3 + c(n, t)] += w;
    }
    for (auto& v : exact)
        v /= z;

    Rng rng(77);
    std::vector<double> freq(exact.size(), 0.0);
    const int burn = 1000, sweeps = 100000;
    for (int i = 0; i < burn + sweeps; ++i) {
        general_sweep(x, y, g, ev, th, rng, false);
        if (i < burn)
            continue;
        for (Step t = 0; t < 3; ++t)
            for (NodeId n = 0; n < 2; ++n)
                freq[(t * 2 + n) * 3 + x(n, t)] += 1.0;
    }
    for (std::size_t i = 0; i < freq.size(); ++i)
        EXPECT_NEAR(freq[i] / sweeps, exact[i], 0.02) << i;
}

TEST(GeneralKernel, RateUpdatesWriteBack)
{
    Rng rng(3);
    auto g = oracle::random_graph(5, 10, 0.4, rng);
    auto x = oracle::random_states(5, 10, 0.4, rng);
    auto ev = sis_events({0.05, 0.1, 0.3, {}});
    auto attr = sample_event_general(x, g, ev, rng);
    auto rates = sample_rate_general(x, g, ev, attr, rng);
    ASSERT_EQ(rates.size(), 3u);
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_EQ(ev[m].rate, rates[m]);
        EXPECT_GT(rates[m], 0.0);
        EXPECT_LT(rates[m], 1.0);
    }
}

TEST(GeneralKernel, SznajdAttributionOnFourCycle)
{
    std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    DynamicGraph g(4, 2, {cycle, cycle});
    StateMatrix x(4, 2);
    x.put(1, 0, 1);
    x.put(3, 0, 1);
    x.put(0, 1, 1);
    x.put(1, 1, 1);
    x.put(3, 1, 1);
    auto ev = sznajd_events(0.2);
    ev.push_back({"spontaneous", 0.1, 0, 1, constant(1), {}});
    // Node 0 disagrees with both neighbors: weights 0.2 * C(2,2) and 0.1.
    auto w = event_weights(0, 0, 1, x, g, ev);
    EXPECT_DOUBLE_EQ(w[0], 0.2);
    EXPECT_EQ(w[1], 0.0);
    EXPECT_DOUBLE_EQ(w[2], 0.1);
    Rng rng(4);
    const int draws = 90000;
    int by_pair = 0;
    for (int i = 0; i < draws; ++i) {
        auto attr = sample_event_general(x, g, ev, rng);
        ASSERT_EQ(attr.size(), 1u);
        by_pair += attr[0].event == 0;
    }
    const double p = 2.0 / 3.0;
    EXPECT_NEAR(by_pair / double(draws), p, 3 * std::sqrt(p * (1 - p) / draws));
}

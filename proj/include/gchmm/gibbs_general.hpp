#ifndef GCHMM_GIBBS_GENERAL_HPP
#define GCHMM_GIBBS_GENERAL_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "events.hpp"
#include "gibbs.hpp"

namespace gchmm {

// Event type m that produced the observed transition X[n,t] -> X[n,t+1].
struct EventAttribution {
    NodeId node;
    Step t;
    std::size_t event;
    friend bool operator==(const EventAttribution&, const EventAttribution&) = default;
};

// Full conditional of X[n,t] over all M states under the general event
// kernel (clamped), t >= 1. x is restored before returning.
inline std::vector<double> state_conditional_general(NodeId n, Step t, StateMatrix& x, const ObservationMatrix& y,
                                                     const DynamicGraph& g, const std::vector<EventSpec>& events,
                                                     const EmissionParams& theta)
{
    if (t == 0 || t >= x.num_steps())
        throw std::out_of_range("only timesteps 1..T-1 are resampled");
    const State saved = x(n, t);
    const std::size_t M = x.num_states();
    const bool has_next = t + 1 < x.num_steps();
    std::vector<double> lw(M, 0.0);
    const auto incoming = transition_row(n, t - 1, x, g, events, true);
    for (State v = 0; v < M; ++v) {
        x.put(n, t, v);
        double w = std::log(incoming[v]);
        if (has_next) {
            w += std::log(transition_row(n, t, x, g, events, true)[x(n, t + 1)]);
            for (NodeId m : g.neighbors(n, t))
                w += std::log(transition_row(m, t, x, g, events, true)[x(m, t + 1)]);
        }
        auto site = y.site(n, t);
        for (std::size_t s = 0; s < site.size(); ++s)
            if (site[s] != ObservationMatrix::kMissing)
                w += std::log(site[s] == ObservationMatrix::kPresent ? theta(v, s) : 1.0 - theta(v, s));
        lw[v] = w;
    }
    x.put(n, t, saved);
    const double top = *std::max_element(lw.begin(), lw.end());
    if (top == kNegInf)
        throw NumericalDegeneracy("all states have zero weight at node " + std::to_string(n) + ", step " + std::to_string(t));
    double z = 0.0;
    for (auto& w : lw) {
        w = std::exp(w - top);
        z += w;
    }
    for (auto& w : lw)
        w /= z;
    return lw;
}

inline State sample_state_general(NodeId n, Step t, StateMatrix& x, const ObservationMatrix& y, const DynamicGraph& g,
                                  const std::vector<EventSpec>& events, const EmissionParams& theta, Rng& rng)
{
    auto probs = state_conditional_general(n, t, x, y, g, events, theta);
    double u = uniform01(rng), acc = 0.0;
    State v = static_cast<State>(probs.size() - 1);
    for (State s = 0; s < probs.size(); ++s) {
        acc += probs[s];
        if (u < acc) {
            v = s;
            break;
        }
    }
    x.put(n, t, v);
    return v;
}

// Attribution weights rate_m * g_m over the events matching from -> to at
// (n, t); zero for non-matching events.
inline std::vector<double> event_weights(NodeId n, Step t, State to, const StateMatrix& x, const DynamicGraph& g,
                                         const std::vector<EventSpec>& events)
{
    std::vector<double> w(events.size(), 0.0);
    const State from = x(n, t);
    for (std::size_t m = 0; m < events.size(); ++m)
        if (events[m].from == from && events[m].to == to)
            w[m] = events[m].rate * static_cast<double>(events[m].counter(n, t, x, g));
    return w;
}

// Draws an event type for every observed state change, in (t, node) order.
inline std::vector<EventAttribution> sample_event_general(const StateMatrix& x, const DynamicGraph& g,
                                                          const std::vector<EventSpec>& events, Rng& rng)
{
    std::vector<EventAttribution> out;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n) {
            const State to = x(n, t + 1);
            if (to == x(n, t))
                continue;
            auto w = event_weights(n, t, to, x, g, events);
            double total = 0.0;
            for (double v : w)
                total += v;
            if (!(total > 0.0))
                throw ImpossibleEvent("transition " + std::to_string(x(n, t)) + "->" + std::to_string(to) + " of node " +
                                      std::to_string(n) + " at step " + std::to_string(t) + " has zero event mass");
            double u = uniform01(rng) * total, acc = 0.0;
            std::size_t pick = events.size();
            for (std::size_t m = 0; m < w.size(); ++m) {
                if (w[m] == 0.0)
                    continue;
                acc += w[m];
                pick = m;
                if (u < acc)
                    break;
            }
            out.push_back({n, t, pick});
        }
    return out;
}

// Beta(a_m + attributed, b_m + exposure - attributed), where exposure sums
// g_m over node-steps spent in the event's from-state.
inline std::vector<BetaShape> rate_posterior_general(const StateMatrix& x, const DynamicGraph& g, const std::vector<EventSpec>& events,
                                                     const std::vector<EventAttribution>& attributions)
{
    std::vector<double> exposure(events.size(), 0.0), hits(events.size(), 0.0);
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            for (std::size_t m = 0; m < events.size(); ++m)
                if (events[m].from == x(n, t))
                    exposure[m] += static_cast<double>(events[m].counter(n, t, x, g));
    for (const auto& a : attributions)
        hits.at(a.event) += 1.0;
    std::vector<BetaShape> shapes;
    for (std::size_t m = 0; m < events.size(); ++m)
        shapes.push_back(detail::checked_shape(events[m].prior.a + hits[m], events[m].prior.b + (exposure[m] - hits[m]),
                                               events[m].name.c_str()));
    return shapes;
}

// Draws new rates and writes them into `events`.
inline std::vector<double> sample_rate_general(const StateMatrix& x, const DynamicGraph& g, std::vector<EventSpec>& events,
                                               const std::vector<EventAttribution>& attributions, Rng& rng)
{
    auto shapes = rate_posterior_general(x, g, events, attributions);
    std::vector<double> rates;
    for (std::size_t m = 0; m < events.size(); ++m) {
        events[m].rate = beta_draw(rng, shapes[m].a, shapes[m].b);
        rates.push_back(events[m].rate);
    }
    return rates;
}

// One sweep of the general sampler: single-site states (t-major,
// node-ascending), event attributions, then event rates.
inline void general_sweep(StateMatrix& x, const ObservationMatrix& y, const DynamicGraph& g, std::vector<EventSpec>& events,
                          const EmissionParams& theta, Rng& rng, bool update_rates = true)
{
    for (Step t = 1; t < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            sample_state_general(n, t, x, y, g, events, theta, rng);
    if (update_rates) {
        auto attributions = sample_event_general(x, g, events, rng);
        sample_rate_general(x, g, events, attributions, rng);
    }
}

} // namespace gchmm

#endif

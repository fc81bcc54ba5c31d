#ifndef GCHMM_SIMULATE_HPP
#define GCHMM_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "events.hpp"
#include "matrices.hpp"
#include "random.hpp"
#include "sis_model.hpp"

namespace gchmm {

struct Simulation {
    StateMatrix states;
    ObservationMatrix observations;
};

namespace detail {

inline StateMatrix initial_states(const DynamicGraph& g, const std::vector<State>& init, std::size_t num_states)
{
    StateMatrix x(g.num_nodes(), g.num_steps(), num_states);
    if (!init.empty()) {
        if (init.size() != g.num_nodes())
            throw Error("initial state vector has wrong length");
        for (NodeId n = 0; n < g.num_nodes(); ++n)
            x.set(n, 0, init[n]);
    }
    return x;
}

// One Bernoulli draw per symptom per node-step; never emits missing values.
inline ObservationMatrix emit(const StateMatrix& x, const EmissionParams& emission, Rng& rng)
{
    if (emission.num_states() < x.num_states())
        throw Error("emission table has fewer rows than the state space");
    ObservationMatrix y(x.num_nodes(), x.num_steps(), emission.num_symptoms());
    for (Step t = 0; t < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            for (std::size_t s = 0; s < emission.num_symptoms(); ++s)
                y.set(n, t, s, bernoulli(rng, emission(x(n, t), s)) ? ObservationMatrix::kPresent : ObservationMatrix::kAbsent);
    return y;
}

} // namespace detail

// Forward simulation under the general event kernel. An empty `init` means
// all nodes start in state 0.
inline Simulation simulate(const DynamicGraph& g, const std::vector<EventSpec>& events, const EmissionParams& emission,
                           const std::vector<State>& init, Rng& rng, std::size_t num_states = 2)
{
    validate_events(events, num_states);
    StateMatrix x = detail::initial_states(g, init, num_states);
    for (Step t = 0; t + 1 < g.num_steps(); ++t)
        for (NodeId n = 0; n < g.num_nodes(); ++n) {
            auto row = transition_row(n, t, x, g, events, false);
            double u = uniform01(rng);
            State next = x(n, t);
            double acc = 0.0;
            for (State s = 0; s < row.size(); ++s) {
                if (s == x(n, t))
                    continue;
                acc += row[s];
                if (u < acc) {
                    next = s;
                    break;
                }
            }
            x.put(n, t + 1, next);
        }
    return {x, detail::emit(x, emission, rng)};
}

// SIS state trajectory only. The exact form uses 1 - (1-alpha)(1-beta)^k;
// the linear form raises ProbabilityOverflow when alpha + k*beta exceeds one.
inline StateMatrix simulate_sis_states(const DynamicGraph& g, const SISParams& p, const std::vector<State>& init, Rng& rng,
                                       TransitionForm form = TransitionForm::exact)
{
    p.validate();
    StateMatrix x = detail::initial_states(g, init, 2);
    for (Step t = 0; t + 1 < g.num_steps(); ++t)
        for (NodeId n = 0; n < g.num_nodes(); ++n) {
            double p_one;
            if (x(n, t) == kInfectious)
                p_one = 1.0 - p.gamma;
            else {
                std::size_t k = infectious_neighbors(x, g, n, t);
                if (form == TransitionForm::exact)
                    p_one = infection_prob_exact(p, k);
                else {
                    p_one = p.alpha + static_cast<double>(k) * p.beta;
                    if (p_one > 1.0)
                        throw ProbabilityOverflow("alpha + k*beta exceeds 1 at node " + std::to_string(n) +
                                                  ", step " + std::to_string(t));
                }
            }
            x.put(n, t + 1, bernoulli(rng, p_one) ? kInfectious : kSusceptible);
        }
    return x;
}

inline Simulation simulate_sis(const DynamicGraph& g, const SISParams& p, const EmissionParams& emission,
                               const std::vector<State>& init, Rng& rng, TransitionForm form = TransitionForm::exact)
{
    StateMatrix x = simulate_sis_states(g, p, init, rng, form);
    return {x, detail::emit(x, emission, rng)};
}

struct EpidemicSummary {
    double attack_rate = 0.0;            // fraction of node-steps infectious
    double ever_infected = 0.0;          // fraction of nodes infectious at least once
    double mean_infectious_duration = 0.0; // over completed infectious runs, in steps
    double duration_std_error = 0.0;
    std::size_t completed_runs = 0;
};

// Runs still infectious at the last step are censored and excluded from
// the duration statistics.
inline EpidemicSummary summarize_epidemic(const StateMatrix& x)
{
    EpidemicSummary s;
    const std::size_t N = x.num_nodes(), T = x.num_steps();
    std::size_t infectious = 0, ever = 0;
    double sum = 0.0, sum2 = 0.0;
    for (NodeId n = 0; n < N; ++n) {
        bool any = false;
        std::size_t run = 0;
        for (Step t = 0; t < T; ++t) {
            if (x(n, t) == kInfectious) {
                ++infectious;
                any = true;
                ++run;
            } else if (run > 0) {
                sum += static_cast<double>(run);
                sum2 += static_cast<double>(run) * static_cast<double>(run);
                ++s.completed_runs;
                run = 0;
            }
        }
        ever += any;
    }
    s.attack_rate = static_cast<double>(infectious) / static_cast<double>(N * T);
    s.ever_infected = static_cast<double>(ever) / static_cast<double>(N);
    if (s.completed_runs > 0) {
        const double c = static_cast<double>(s.completed_runs);
        s.mean_infectious_duration = sum / c;
        const double var = c > 1 ? (sum2 - sum * sum / c) / (c - 1.0) : 0.0;
        s.duration_std_error = std::sqrt(std::max(0.0, var) / c);
    }
    return s;
}

} // namespace gchmm

#endif

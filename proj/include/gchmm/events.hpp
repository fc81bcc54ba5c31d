#ifndef GCHMM_EVENTS_HPP
#define GCHMM_EVENTS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "matrices.hpp"
#include "sis_model.hpp"

namespace gchmm {

// g_m(n, t, X, G): the number of ways an event can fire on node n at step t.
// Must only read X(n, t) and the states of neighbors(n, t) at step t.
using EventCounter = std::function<std::size_t(NodeId, Step, const StateMatrix&, const DynamicGraph&)>;

// One event type of the general transition kernel: while a node is in state
// `from`, each of the g_m ways fires with probability `rate` and moves it to `to`.
struct EventSpec {
    std::string name;
    double rate = 0.0;
    State from = 0;
    State to = 1;
    EventCounter counter;
    BetaPrior prior;
};

inline void validate_events(const std::vector<EventSpec>& events, std::size_t num_states)
{
    for (const auto& e : events) {
        if (e.from == e.to)
            throw Error("event '" + e.name + "' has identical from- and to-states");
        if (e.from >= num_states || e.to >= num_states)
            throw Error("event '" + e.name + "' references a state outside the state space");
        if (!(e.rate >= 0.0 && e.rate <= 1.0))
            throw Error("event '" + e.name + "' rate must lie in [0,1]");
        if (!e.counter)
            throw Error("event '" + e.name + "' has no counter");
    }
}

inline double departure_mass(NodeId n, Step t, const StateMatrix& x, const DynamicGraph& g,
                             const std::vector<EventSpec>& events)
{
    const State current = x(n, t);
    double mass = 0.0;
    for (const auto& e : events)
        if (e.from == current && e.rate > 0.0)
            mass += e.rate * static_cast<double>(e.counter(n, t, x, g));
    return mass;
}

// P(X[n,t+1] = target | column t). For target != X[n,t] this is the sum of
// rate * count over the events that move X[n,t] to target; for target ==
// X[n,t] it is one minus the total departure mass.
inline double transition_prob_general(NodeId n, Step t, State target, const StateMatrix& x, const DynamicGraph& g,
                                      const std::vector<EventSpec>& events)
{
    const State current = x.at(n, t);
    const double total = departure_mass(n, t, x, g, events);
    if (total > 1.0 + 1e-12)
        throw ProbabilityOverflow("departure mass " + std::to_string(total) + " exceeds 1 at node " +
                                  std::to_string(n) + ", step " + std::to_string(t));
    if (target == current)
        return std::max(0.0, 1.0 - total);
    double p = 0.0;
    for (const auto& e : events)
        if (e.from == current && e.to == target && e.rate > 0.0)
            p += e.rate * static_cast<double>(e.counter(n, t, x, g));
    return p;
}

// Full transition row out of X[n,t]. With clamp set, departures are scaled
// down to a total of kLinearClamp instead of raising on overflow.
inline std::vector<double> transition_row(NodeId n, Step t, const StateMatrix& x, const DynamicGraph& g,
                                          const std::vector<EventSpec>& events, bool clamp)
{
    const State current = x(n, t);
    std::vector<double> row(x.num_states(), 0.0);
    double total = 0.0;
    for (const auto& e : events) {
        if (e.from != current || e.rate == 0.0)
            continue;
        double m = e.rate * static_cast<double>(e.counter(n, t, x, g));
        row[e.to] += m;
        total += m;
    }
    if (total > 1.0 + 1e-12 || (clamp && total > kLinearClamp)) {
        if (!clamp)
            throw ProbabilityOverflow("departure mass " + std::to_string(total) + " exceeds 1 at node " +
                                      std::to_string(n) + ", step " + std::to_string(t));
        for (auto& v : row)
            v *= kLinearClamp / total;
        total = kLinearClamp;
    }
    row[current] = std::max(0.0, 1.0 - total);
    return row;
}

inline std::size_t binomial2(std::size_t d) { return d < 2 ? 0 : d * (d - 1) / 2; }

// Number of pairs of neighbors whose state differs from X[n,t].
inline std::size_t sznajd_count(NodeId n, Step t, const StateMatrix& x, const DynamicGraph& g)
{
    std::size_t d = 0;
    const State own = x(n, t);
    for (NodeId m : g.neighbors(n, t))
        d += x(m, t) != own;
    return binomial2(d);
}

// SIS as an event family: outside infection (count 1), contact infection
// (count = infectious neighbors), recovery (count 1). Its linear kernel is
// alpha + k * beta and gamma.
inline std::vector<EventSpec> sis_events(const SISParams& p)
{
    auto one = [](NodeId, Step, const StateMatrix&, const DynamicGraph&) -> std::size_t { return 1; };
    auto contacts = [](NodeId n, Step t, const StateMatrix& x, const DynamicGraph& g) {
        return infectious_neighbors(x, g, n, t);
    };
    return {
        {"outside", p.alpha, kSusceptible, kInfectious, one, p.priors.alpha},
        {"contact", p.beta, kSusceptible, kInfectious, contacts, p.priors.beta},
        {"recovery", p.gamma, kInfectious, kSusceptible, one, p.priors.gamma},
    };
}

// Binary Sznajd opinion dynamics: a node flips when convinced by a pair of
// disagreeing neighbors.
inline std::vector<EventSpec> sznajd_events(double rate, BetaPrior prior = {})
{
    return {
        {"sznajd_up", rate, 0, 1, sznajd_count, prior},
        {"sznajd_down", rate, 1, 0, sznajd_count, prior},
    };
}

} // namespace gchmm

#endif

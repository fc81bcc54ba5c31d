#ifndef GCHMM_EXACT_ORACLE_HPP
#define GCHMM_EXACT_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "matrices.hpp"
#include "sis_model.hpp"

namespace gchmm {

inline constexpr std::size_t kMaxEnumerationBits = 20;

struct TinyInstance {
    DynamicGraph graph;
    SISParams params;
    EmissionParams theta;
    ObservationMatrix observations;
};

struct ExactPosterior {
    std::vector<double> marginals; // P(X[n,t] = 1 | Y), indexed t * N + n
    double log_evidence = 0.0;     // log P(Y)
    double marginal(NodeId n, Step t, std::size_t num_nodes) const { return marginals[static_cast<std::size_t>(t) * num_nodes + n]; }
};

inline void check_tractable(std::size_t num_nodes, std::size_t num_steps)
{
    if (num_steps == 0 || num_nodes * (num_steps - 1) > kMaxEnumerationBits)
        throw Intractable("enumeration over " + std::to_string(num_nodes) + " nodes x " + std::to_string(num_steps) +
                          " steps exceeds 2^" + std::to_string(kMaxEnumerationBits) + " completions");
}

// Sums exp(log_joint_states + log_emission) over every binary completion of
// columns 1..T-1, in lexicographic order of the completion index.
inline ExactPosterior enumerate_posterior(const TinyInstance& inst, TransitionForm form = TransitionForm::linear)
{
    const auto& g = inst.graph;
    const std::size_t N = g.num_nodes(), T = g.num_steps();
    check_tractable(N, T);
    const std::size_t bits = N * (T - 1);
    const std::uint64_t total = std::uint64_t{1} << bits;
    std::vector<double> logp(total);
    StateMatrix x(N, T, 2);
    for (std::uint64_t code = 0; code < total; ++code) {
        for (std::size_t b = 0; b < bits; ++b)
            x.put(static_cast<NodeId>(b % N), static_cast<Step>(1 + b / N), (code >> b) & 1U ? kInfectious : kSusceptible);
        double lj = log_joint_states(x, g, inst.params, form);
        logp[code] = lj == kNegInf ? kNegInf : lj + log_emission(inst.observations, x, inst.theta);
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    if (top == kNegInf)
        throw NumericalDegeneracy("every completion has zero probability");
    double z = 0.0;
    std::vector<double> site(bits, 0.0);
    for (std::uint64_t code = 0; code < total; ++code) {
        if (logp[code] == kNegInf)
            continue;
        const double w = std::exp(logp[code] - top);
        z += w;
        for (std::size_t b = 0; b < bits; ++b)
            if ((code >> b) & 1U)
                site[b] += w;
    }
    ExactPosterior out;
    out.marginals.assign(N * T, 0.0);
    for (std::size_t b = 0; b < bits; ++b)
        out.marginals[N + b] = site[b] / z;
    out.log_evidence = top + std::log(z);
    return out;
}

// log P(Y) by a forward recursion over the 2^N joint configurations of one
// column. Transition and emission factors are evaluated directly from the
// parameters, independently of log_joint_states.
inline double forward_log_evidence(const TinyInstance& inst, TransitionForm form = TransitionForm::linear)
{
    const auto& g = inst.graph;
    const std::size_t N = g.num_nodes(), T = g.num_steps();
    if (N > 16)
        throw Intractable("forward recursion over more than 2^16 joint states");
    const std::size_t C = std::size_t{1} << N;
    const auto& p = inst.params;

    auto emission = [&](std::size_t config, Step t) {
        double prob = 1.0;
        for (NodeId n = 0; n < N; ++n) {
            const std::size_t state = (config >> n) & 1U;
            for (std::size_t s = 0; s < inst.observations.num_symptoms(); ++s) {
                auto v = inst.observations(n, t, s);
                if (v == ObservationMatrix::kPresent)
                    prob *= inst.theta(state, s);
                else if (v == ObservationMatrix::kAbsent)
                    prob *= 1.0 - inst.theta(state, s);
            }
        }
        return prob;
    };

    // Scaled forward messages; log_scale accumulates the normalizers.
    std::vector<double> msg(C, 0.0), next(C);
    msg[0] = emission(0, 0);
    double log_scale = 0.0;
    for (Step t = 0; t + 1 < T; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t from = 0; from < C; ++from) {
            if (msg[from] == 0.0)
                continue;
            std::vector<double> p_one(N);
            for (NodeId n = 0; n < N; ++n) {
                if ((from >> n) & 1U) {
                    p_one[n] = 1.0 - p.gamma;
                    continue;
                }
                std::size_t k = 0;
                for (const auto& e : g.edges(t)) {
                    if (e.u == n)
                        k += (from >> e.v) & 1U;
                    else if (e.v == n)
                        k += (from >> e.u) & 1U;
                }
                const double kk = static_cast<double>(k);
                p_one[n] = form == TransitionForm::linear ? std::min(p.alpha + kk * p.beta, kLinearClamp)
                                                          : 1.0 - (1.0 - p.alpha) * std::pow(1.0 - p.beta, kk);
            }
            for (std::size_t to = 0; to < C; ++to) {
                double tp = 1.0;
                for (NodeId n = 0; n < N; ++n)
                    tp *= ((to >> n) & 1U) ? p_one[n] : 1.0 - p_one[n];
                next[to] += msg[from] * tp;
            }
        }
        double z = 0.0;
        for (std::size_t to = 0; to < C; ++to) {
            next[to] *= emission(to, t + 1);
            z += next[to];
        }
        if (!(z > 0.0))
            throw NumericalDegeneracy("forward message vanished at step " + std::to_string(t + 1));
        for (auto& v : next)
            v /= z;
        log_scale += std::log(z);
        msg.swap(next);
    }
    double z = 0.0;
    for (double v : msg)
        z += v;
    return log_scale + std::log(z);
}

// Fixture JSON: {num_nodes, num_steps, edges: [[t,u,v],...], params: {...},
// observations: [[node, t, [s0, s1, ...]], ...] with null for missing}.
inline TinyInstance instance_from_json(const nlohmann::json& j)
{
    const std::size_t N = j.at("num_nodes").get<std::size_t>();
    const std::size_t T = j.at("num_steps").get<std::size_t>();
    std::vector<std::vector<Edge>> edges(T);
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
        auto t = e.at(0).get<std::size_t>();
        if (t >= T)
            throw Error("fixture edge timestep out of range");
        edges[t].push_back({e.at(1).get<NodeId>(), e.at(2).get<NodeId>()});
    }
    TinyInstance inst;
    inst.graph = DynamicGraph(N, T, std::move(edges));
    inst.params = sis_params_from_json(j.at("params"));
    inst.theta = emission_from_json(j.at("params"), 1);
    inst.theta.validate();
    inst.observations = ObservationMatrix(N, T, inst.theta.num_symptoms());
    for (const auto& o : j.value("observations", nlohmann::json::array())) {
        auto n = o.at(0).get<NodeId>();
        auto t = o.at(1).get<Step>();
        const auto& vals = o.at(2);
        if (vals.size() != inst.theta.num_symptoms())
            throw Error("fixture observation has the wrong number of symptoms");
        for (std::size_t s = 0; s < vals.size(); ++s)
            inst.observations.set(n, t, s, vals[s].is_null() ? ObservationMatrix::kMissing : static_cast<std::int8_t>(vals[s].get<int>()));
    }
    return inst;
}

inline nlohmann::json instance_to_json(const TinyInstance& inst)
{
    nlohmann::json j;
    j["num_nodes"] = inst.graph.num_nodes();
    j["num_steps"] = inst.graph.num_steps();
    j["edges"] = nlohmann::json::array();
    for (Step t = 0; t < inst.graph.num_steps(); ++t)
        for (const auto& e : inst.graph.edges(t))
            j["edges"].push_back({t, e.u, e.v});
    j["params"] = params_to_json(inst.params, inst.theta);
    j["observations"] = nlohmann::json::array();
    for (NodeId n = 0; n < inst.graph.num_nodes(); ++n)
        for (Step t = 0; t < inst.graph.num_steps(); ++t) {
            auto site = inst.observations.site(n, t);
            if (std::all_of(site.begin(), site.end(), [](auto v) { return v == ObservationMatrix::kMissing; }))
                continue;
            nlohmann::json vals = nlohmann::json::array();
            for (auto v : site)
                vals.push_back(v == ObservationMatrix::kMissing ? nlohmann::json(nullptr) : nlohmann::json(static_cast<int>(v)));
            j["observations"].push_back({n, t, vals});
        }
    return j;
}

} // namespace gchmm

#endif

#ifndef GCHMM_SIS_MODEL_HPP
#define GCHMM_SIS_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "matrices.hpp"

namespace gchmm {

inline constexpr State kSusceptible = 0;
inline constexpr State kInfectious = 1;

// Upper bound applied to the linear infection probability inside likelihoods.
inline constexpr double kLinearClamp = 1.0 - 1e-9;
// Emission probabilities are kept in [kThetaFloor, 1 - kThetaFloor].
inline constexpr double kThetaFloor = 1e-6;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class TransitionForm { exact, linear };

inline TransitionForm parse_transition_form(const std::string& s)
{
    if (s == "exact")
        return TransitionForm::exact;
    if (s == "linear")
        return TransitionForm::linear;
    throw Error("transition_form must be 'exact' or 'linear', got '" + s + "'");
}

inline const char* to_string(TransitionForm f) { return f == TransitionForm::exact ? "exact" : "linear"; }

struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
    friend bool operator==(const BetaPrior&, const BetaPrior&) = default;
};

struct SISPriors {
    BetaPrior alpha;
    BetaPrior beta;
    BetaPrior gamma;
    friend bool operator==(const SISPriors&, const SISPriors&) = default;
};

// alpha: outside-network infection per susceptible per step.
// beta:  infection per infectious neighbor per step.
// gamma: recovery per infectious per step.
struct SISParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    SISPriors priors;

    void validate() const
    {
        for (double p : {alpha, beta, gamma})
            if (!(p >= 0.0 && p <= 1.0))
                throw Error("SIS rates must lie in [0,1]");
        for (const auto* bp : {&priors.alpha, &priors.beta, &priors.gamma})
            if (!(bp->a > 0.0 && bp->b > 0.0))
                throw Error("Beta hyperparameters must be positive");
    }
    friend bool operator==(const SISParams&, const SISParams&) = default;
};

// theta(x, s) = P(symptom s present | latent state x).
class EmissionParams {
public:
    EmissionParams() = default;
    EmissionParams(std::size_t num_states, std::size_t num_symptoms, double fill = 0.5, double h = 1.0)
        : num_states_(num_states), num_symptoms_(num_symptoms), theta_(num_states * num_symptoms, fill), h_(h)
    {
    }
    EmissionParams(std::size_t num_states, std::size_t num_symptoms, std::vector<double> theta, double h)
        : num_states_(num_states), num_symptoms_(num_symptoms), theta_(std::move(theta)), h_(h)
    {
        if (theta_.size() != num_states_ * num_symptoms_)
            throw Error("theta has " + std::to_string(theta_.size()) + " entries, expected " +
                        std::to_string(num_states_ * num_symptoms_));
    }

    std::size_t num_states() const { return num_states_; }
    std::size_t num_symptoms() const { return num_symptoms_; }
    double h() const { return h_; }
    void set_h(double h) { h_ = h; }

    double operator()(std::size_t x, std::size_t s) const { return theta_[x * num_symptoms_ + s]; }
    double& operator()(std::size_t x, std::size_t s) { return theta_[x * num_symptoms_ + s]; }

    const std::vector<double>& row_major() const { return theta_; }

    void validate() const
    {
        for (double v : theta_)
            if (!(v > 0.0 && v < 1.0))
                throw Error("emission probabilities must lie in (0,1)");
        if (!(h_ > 0.0))
            throw Error("emission prior h must be positive");
    }

    friend bool operator==(const EmissionParams&, const EmissionParams&) = default;

private:
    std::size_t num_states_ = 2;
    std::size_t num_symptoms_ = 0;
    std::vector<double> theta_;
    double h_ = 1.0;
};

inline double infection_prob_exact(const SISParams& p, std::size_t k)
{
    return 1.0 - (1.0 - p.alpha) * std::pow(1.0 - p.beta, static_cast<double>(k));
}

struct ClampedProb {
    double value;
    bool clamped;
};

inline ClampedProb infection_prob_linear(const SISParams& p, std::size_t k)
{
    double raw = p.alpha + static_cast<double>(k) * p.beta;
    if (raw > kLinearClamp)
        return {kLinearClamp, true};
    return {raw, false};
}

inline std::size_t infectious_neighbors(const StateMatrix& x, const DynamicGraph& g, NodeId n, Step t)
{
    std::size_t k = 0;
    for (NodeId m : g.neighbors(n, t))
        k += x(m, t) == kInfectious;
    return k;
}

// Log probability of the transition X[n,t] -> X[n,t+1] given k infectious
// neighbors at t.
inline double log_transition(const SISParams& p, State from, State to, std::size_t k, TransitionForm form)
{
    if (from == kInfectious)
        return std::log(to == kSusceptible ? p.gamma : 1.0 - p.gamma);
    if (form == TransitionForm::linear) {
        double inf = infection_prob_linear(p, k).value;
        return std::log(to == kInfectious ? inf : 1.0 - inf);
    }
    double stay = (1.0 - p.alpha) * std::pow(1.0 - p.beta, static_cast<double>(k));
    return std::log(to == kInfectious ? 1.0 - stay : stay);
}

// Sum of log transition terms over all (n, t -> t+1). Priors on the rates
// and the deterministic all-susceptible first column contribute nothing.
// Returns -inf when some transition has probability zero.
inline double log_joint_states(const StateMatrix& x, const DynamicGraph& g, const SISParams& p,
                               TransitionForm form = TransitionForm::linear)
{
    if (!x.matches(g))
        throw Error("state matrix dimensions do not match the graph");
    for (NodeId n = 0; n < x.num_nodes(); ++n)
        if (x(n, 0) != kSusceptible)
            throw Error("first column of the state matrix must be all susceptible");
    double total = 0.0;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n) {
            std::size_t k = x(n, t) == kSusceptible ? infectious_neighbors(x, g, n, t) : 0;
            double term = log_transition(p, x(n, t), x(n, t + 1), k, form);
            if (term == kNegInf)
                return kNegInf;
            total += term;
        }
    return total;
}

inline double log_emission(const ObservationMatrix& y, const StateMatrix& x, const EmissionParams& theta)
{
    if (!y.matches(x))
        throw Error("observation matrix dimensions do not match the state matrix");
    if (theta.num_symptoms() != y.num_symptoms())
        throw Error("emission table and observations disagree on the symptom count");
    double total = 0.0;
    for (Step t = 0; t < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n) {
            auto site = y.site(n, t);
            State state = x(n, t);
            for (std::size_t s = 0; s < site.size(); ++s) {
                if (site[s] == ObservationMatrix::kMissing)
                    continue;
                total += std::log(site[s] == ObservationMatrix::kPresent ? theta(state, s) : 1.0 - theta(state, s));
            }
        }
    return total;
}

// Flat JSON: alpha, beta, gamma, priors.{a,b,a1,b1,a2,b2}, theta (row-major), h.
inline nlohmann::json params_to_json(const SISParams& p, const EmissionParams& e)
{
    nlohmann::json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["priors"] = {{"a", p.priors.alpha.a},  {"b", p.priors.alpha.b},  {"a1", p.priors.beta.a},
                   {"b1", p.priors.beta.b}, {"a2", p.priors.gamma.a}, {"b2", p.priors.gamma.b}};
    j["theta"] = e.row_major();
    j["num_symptoms"] = e.num_symptoms();
    j["h"] = e.h();
    return j;
}

inline SISPriors priors_from_json(const nlohmann::json& j)
{
    SISPriors pr;
    pr.alpha = {j.value("a", 1.0), j.value("b", 1.0)};
    pr.beta = {j.value("a1", 1.0), j.value("b1", 1.0)};
    pr.gamma = {j.value("a2", 1.0), j.value("b2", 1.0)};
    return pr;
}

inline SISParams sis_params_from_json(const nlohmann::json& j)
{
    SISParams p;
    p.alpha = j.value("alpha", 0.0);
    p.beta = j.value("beta", 0.0);
    p.gamma = j.value("gamma", 0.0);
    if (j.contains("priors"))
        p.priors = priors_from_json(j.at("priors"));
    p.validate();
    return p;
}

// theta may be a flat row-major list (with num_symptoms, or S inferred for
// two states) or a list of rows.
inline EmissionParams emission_from_json(const nlohmann::json& j, std::size_t default_symptoms = 6)
{
    double h = j.value("h", 1.0);
    if (!j.contains("theta"))
        return EmissionParams(2, default_symptoms, 0.5, h);
    const auto& th = j.at("theta");
    std::vector<double> flat;
    std::size_t symptoms = 0;
    if (!th.empty() && th.front().is_array()) {
        symptoms = th.front().size();
        for (const auto& row : th) {
            if (row.size() != symptoms)
                throw Error("theta rows have unequal length");
            for (const auto& v : row)
                flat.push_back(v.get<double>());
        }
    } else {
        flat = th.get<std::vector<double>>();
        symptoms = j.value("num_symptoms", flat.size() / 2);
    }
    if (symptoms == 0)
        throw Error("theta is empty");
    const std::size_t states = flat.size() / symptoms;
    EmissionParams e(states, symptoms, std::move(flat), h);
    e.validate();
    return e;
}

} // namespace gchmm

#endif

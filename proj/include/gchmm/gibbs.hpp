#ifndef GCHMM_GIBBS_HPP
#define GCHMM_GIBBS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "matrices.hpp"
#include "random.hpp"
#include "sis_model.hpp"

namespace gchmm {

// Source of one infection event X[n,t] = 0 -> X[n,t+1] = 1. source == 1 is
// outside the network; source == j > 1 is the (j-1)-th infectious neighbor
// of n at t, in ascending node id.
struct SourceEntry {
    NodeId node;
    Step t;
    std::uint32_t source;
    friend bool operator==(const SourceEntry&, const SourceEntry&) = default;
};

// Sparse (n,t) -> source map, defined exactly at infection events. Entries
// are kept in (t, node) order.
class SourceMatrix {
public:
    void clear() { entries_.clear(); }
    void push(SourceEntry e) { entries_.push_back(e); }

    const std::vector<SourceEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    std::optional<std::uint32_t> find(NodeId n, Step t) const
    {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), SourceEntry{n, t, 0},
                                   [](const SourceEntry& a, const SourceEntry& b) {
                                       return a.t != b.t ? a.t < b.t : a.node < b.node;
                                   });
        if (it != entries_.end() && it->node == n && it->t == t)
            return it->source;
        return std::nullopt;
    }

    std::size_t outside_count() const
    {
        return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const SourceEntry& e) { return e.source == 1; }));
    }
    std::size_t inside_count() const { return entries_.size() - outside_count(); }

    friend bool operator==(const SourceMatrix&, const SourceMatrix&) = default;

private:
    std::vector<SourceEntry> entries_;
};

struct BetaShape {
    double a;
    double b;
    double mean() const { return a / (a + b); }
    friend bool operator==(const BetaShape&, const BetaShape&) = default;
};

// Sufficient statistics of a fully specified state matrix, over the
// transitions t -> t+1 for t < T-1.
struct TransitionCounts {
    std::size_t susceptible_steps = 0;
    std::size_t exposure_pairs = 0;
    std::size_t infections = 0;
    std::size_t infectious_steps = 0;
    std::size_t recoveries = 0;
};

inline TransitionCounts count_transitions(const StateMatrix& x, const DynamicGraph& g)
{
    TransitionCounts c;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n) {
            if (x(n, t) == kSusceptible) {
                ++c.susceptible_steps;
                c.exposure_pairs += infectious_neighbors(x, g, n, t);
                c.infections += x(n, t + 1) == kInfectious;
            } else {
                ++c.infectious_steps;
                c.recoveries += x(n, t + 1) == kSusceptible;
            }
        }
    return c;
}

namespace detail {

inline BetaShape checked_shape(double a, double b, const char* what)
{
    if (!(a > 0.0 && b > 0.0))
        throw ConsistencyError(std::string("nonpositive Beta shape for ") + what + ": (" + std::to_string(a) + ", " +
                               std::to_string(b) + ")");
    return {a, b};
}

// Draws the source of one infection event with k infectious neighbors.
inline std::uint32_t draw_source(const SISParams& p, std::size_t k, Rng& rng, NodeId n, Step t)
{
    const double total = p.alpha + static_cast<double>(k) * p.beta;
    if (!(total > 0.0))
        throw ImpossibleEvent("infection of node " + std::to_string(n) + " at step " + std::to_string(t) +
                              " has zero probability (alpha + k*beta = 0)");
    const double u = uniform01(rng) * total;
    if (u < p.alpha)
        return 1;
    auto j = static_cast<std::size_t>((u - p.alpha) / p.beta);
    return static_cast<std::uint32_t>(2 + std::min(j, k - 1));
}

} // namespace detail

inline BetaShape alpha_posterior(const StateMatrix& x, const SourceMatrix& r, const SISPriors& priors)
{
    std::size_t susceptible = 0;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            susceptible += x(n, t) == kSusceptible;
    const std::size_t outside = r.outside_count();
    if (outside > susceptible)
        throw ConsistencyError("more outside infections than susceptible node-steps");
    return detail::checked_shape(priors.alpha.a + static_cast<double>(outside), priors.alpha.b + static_cast<double>(susceptible - outside),
                                 "alpha");
}

inline BetaShape beta_posterior(const StateMatrix& x, const SourceMatrix& r, const DynamicGraph& g, const SISPriors& priors)
{
    std::size_t exposure = 0;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            if (x(n, t) == kSusceptible)
                exposure += infectious_neighbors(x, g, n, t);
    const std::size_t inside = r.inside_count();
    if (inside > exposure)
        throw ConsistencyError("more contact infections than infectious exposures");
    return detail::checked_shape(priors.beta.a + static_cast<double>(inside), priors.beta.b + static_cast<double>(exposure - inside), "beta");
}

inline BetaShape gamma_posterior(const StateMatrix& x, const SISPriors& priors)
{
    std::size_t infectious = 0, recoveries = 0;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            if (x(n, t) == kInfectious) {
                ++infectious;
                recoveries += x(n, t + 1) == kSusceptible;
            }
    return detail::checked_shape(priors.gamma.a + static_cast<double>(recoveries),
                                 priors.gamma.b + static_cast<double>(infectious - recoveries), "gamma");
}

inline double sample_alpha(const StateMatrix& x, const SourceMatrix& r, const SISPriors& priors, Rng& rng)
{
    auto s = alpha_posterior(x, r, priors);
    return beta_draw(rng, s.a, s.b);
}

inline double sample_beta(const StateMatrix& x, const SourceMatrix& r, const DynamicGraph& g, const SISPriors& priors, Rng& rng)
{
    auto s = beta_posterior(x, r, g, priors);
    return beta_draw(rng, s.a, s.b);
}

inline double sample_gamma(const StateMatrix& x, const SISPriors& priors, Rng& rng)
{
    auto s = gamma_posterior(x, priors);
    return beta_draw(rng, s.a, s.b);
}

// Draws a source for every infection event of x, in (t, node) order.
inline SourceMatrix sample_sources(const StateMatrix& x, const DynamicGraph& g, const SISParams& p, Rng& rng)
{
    SourceMatrix r;
    for (Step t = 0; t + 1 < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n)
            if (x(n, t) == kSusceptible && x(n, t + 1) == kInfectious)
                r.push({n, t, detail::draw_source(p, infectious_neighbors(x, g, n, t), rng, n, t)});
    return r;
}

// Present/absent counts per (state, symptom) over non-missing reports.
struct EmissionCounts {
    std::size_t num_symptoms = 0;
    std::vector<std::size_t> present;
    std::vector<std::size_t> absent;
};

inline EmissionCounts count_emissions(const StateMatrix& x, const ObservationMatrix& y, std::size_t num_states = 2)
{
    if (!y.matches(x))
        throw Error("observation matrix dimensions do not match the state matrix");
    const std::size_t S = y.num_symptoms();
    EmissionCounts c{S, std::vector<std::size_t>(num_states * S, 0), std::vector<std::size_t>(num_states * S, 0)};
    for (Step t = 0; t < x.num_steps(); ++t)
        for (NodeId n = 0; n < x.num_nodes(); ++n) {
            auto site = y.site(n, t);
            const std::size_t row = static_cast<std::size_t>(x(n, t)) * S;
            for (std::size_t s = 0; s < S; ++s) {
                if (site[s] == ObservationMatrix::kPresent)
                    ++c.present[row + s];
                else if (site[s] == ObservationMatrix::kAbsent)
                    ++c.absent[row + s];
            }
        }
    return c;
}

inline double clamp_theta(double v) { return std::clamp(v, kThetaFloor, 1.0 - kThetaFloor); }

// Conjugate update: cell (x,s) ~ Beta(h + present, h + absent), clamped.
inline EmissionParams sample_theta(const StateMatrix& x, const ObservationMatrix& y, double h, Rng& rng,
                                   std::size_t num_states = 2)
{
    auto c = count_emissions(x, y, num_states);
    EmissionParams theta(num_states, y.num_symptoms(), 0.5, h);
    for (std::size_t xs = 0; xs < num_states; ++xs)
        for (std::size_t s = 0; s < y.num_symptoms(); ++s) {
            const std::size_t i = xs * y.num_symptoms() + s;
            theta(xs, s) = clamp_theta(beta_draw(rng, h + static_cast<double>(c.present[i]), h + static_cast<double>(c.absent[i])));
        }
    return theta;
}

// Prior draw sorted per symptom so higher states are at least as
// symptomatic. Starting from the ordered region keeps a chain out of the
// label-swapped mode where "infectious" means healthy.
inline EmissionParams theta_from_prior(std::size_t num_states, std::size_t num_symptoms, double h, Rng& rng)
{
    EmissionParams theta(num_states, num_symptoms, 0.5, h);
    for (std::size_t xs = 0; xs < num_states; ++xs)
        for (std::size_t s = 0; s < num_symptoms; ++s)
            theta(xs, s) = clamp_theta(beta_draw(rng, h, h));
    std::vector<double> col(num_states);
    for (std::size_t s = 0; s < num_symptoms; ++s) {
        for (std::size_t xs = 0; xs < num_states; ++xs)
            col[xs] = theta(xs, s);
        std::sort(col.begin(), col.end());
        for (std::size_t xs = 0; xs < num_states; ++xs)
            theta(xs, s) = col[xs];
    }
    return theta;
}

// Full conditional P(X[n,t] = 1 | everything else), t >= 1. Multiplies the
// incoming transition, the outgoing transition, the outgoing transitions of
// susceptible neighbors at t whose infection pressure counts n, and the
// emission factor. Uses the linear likelihood.
inline double state_conditional(NodeId n, Step t, const StateMatrix& x, const ObservationMatrix& y, const DynamicGraph& g,
                                const SISParams& p, const EmissionParams& theta)
{
    if (t == 0 || t >= x.num_steps())
        throw std::out_of_range("only timesteps 1..T-1 are resampled");
    double lw[2] = {0.0, 0.0};
    const State prev = x(n, t - 1);
    const std::size_t k_prev = prev == kSusceptible ? infectious_neighbors(x, g, n, t - 1) : 0;
    const bool has_next = t + 1 < x.num_steps();
    for (State v : {kSusceptible, kInfectious}) {
        double& w = lw[v];
        w += log_transition(p, prev, v, k_prev, TransitionForm::linear);
        if (has_next) {
            const std::size_t k_here = infectious_neighbors(x, g, n, t);
            w += log_transition(p, v, x(n, t + 1), v == kSusceptible ? k_here : 0, TransitionForm::linear);
            for (NodeId m : g.neighbors(n, t)) {
                if (x(m, t) != kSusceptible)
                    continue;
                std::size_t k_m = infectious_neighbors(x, g, m, t) - (x(n, t) == kInfectious) + v;
                w += log_transition(p, kSusceptible, x(m, t + 1), k_m, TransitionForm::linear);
            }
        }
        auto site = y.site(n, t);
        for (std::size_t s = 0; s < site.size(); ++s)
            if (site[s] != ObservationMatrix::kMissing)
                w += std::log(site[s] == ObservationMatrix::kPresent ? theta(v, s) : 1.0 - theta(v, s));
    }
    if (lw[0] == kNegInf && lw[1] == kNegInf)
        throw NumericalDegeneracy("both states have zero weight at node " + std::to_string(n) + ", step " + std::to_string(t));
    if (lw[1] == kNegInf)
        return 0.0;
    if (lw[0] == kNegInf)
        return 1.0;
    return 1.0 / (1.0 + std::exp(lw[0] - lw[1]));
}

// Single-site update of X[n,t]; writes and returns the new value.
inline State sample_state(NodeId n, Step t, StateMatrix& x, const ObservationMatrix& y, const DynamicGraph& g,
                          const SISParams& p, const EmissionParams& theta, Rng& rng)
{
    const State v = bernoulli(rng, state_conditional(n, t, x, y, g, p, theta)) ? kInfectious : kSusceptible;
    x.put(n, t, v);
    return v;
}

struct ChainConfig {
    std::size_t iterations = 10000;
    std::size_t burn_in = 1000;
    std::size_t state_thin = 10;
    std::size_t scalar_thin = 1;
    std::uint64_t seed = 1;
    bool update_states = true;
    bool update_params = true;
    bool update_theta = true;
    bool record_states = true;

    void validate() const
    {
        if (burn_in > iterations)
            throw Error("burn-in exceeds the number of iterations");
        if (state_thin == 0 || scalar_thin == 0)
            throw Error("thinning strides must be at least 1");
    }
};

// Starting point of a chain. Unset fields are initialized as: all
// susceptible states, rates drawn from their priors, theta from Beta(h, h).
struct ChainInit {
    std::optional<StateMatrix> states;
    std::optional<SISParams> params;
    std::optional<EmissionParams> theta;
};

struct SampleRecord {
    std::size_t iteration = 0;
    SISParams params;
    EmissionParams theta;
    std::optional<StateMatrix> states;
    double log_joint = 0.0;
};

// Gibbs sampler for the SIS model. Keeps a per-(n,t) count of infectious
// neighbors and per-sweep log-probability tables so one site update costs
// O(degree + symptoms).
class SisGibbsChain {
public:
    SisGibbsChain(const DynamicGraph& g, const ObservationMatrix& y, const SISPriors& priors, double h, const ChainConfig& config,
                  ChainInit init = {})
        : g_(g), y_(y), priors_(priors), h_(h), config_(config), rng_(config.seed)
    {
        config_.validate();
        if (y.num_nodes() != g.num_nodes() || y.num_steps() != g.num_steps())
            throw Error("observation matrix dimensions do not match the graph");
        if (g.num_steps() < 2)
            throw Error("inference needs at least two timesteps");
        const std::size_t N = g.num_nodes(), T = g.num_steps();
        if (init.states) {
            if (!init.states->matches(g))
                throw Error("initial state matrix dimensions do not match the graph");
            x_ = *init.states;
            for (NodeId n = 0; n < N; ++n)
                if (x_(n, 0) != kSusceptible)
                    throw Error("first column of the initial state matrix must be all susceptible");
        } else
            x_ = StateMatrix(N, T, 2);
        if (init.params) {
            params_ = *init.params;
            params_.priors = priors_;
        } else {
            params_.priors = priors_;
            params_.alpha = beta_draw(rng_, priors_.alpha.a, priors_.alpha.b);
            params_.beta = beta_draw(rng_, priors_.beta.a, priors_.beta.b);
            params_.gamma = beta_draw(rng_, priors_.gamma.a, priors_.gamma.b);
        }
        params_.validate();
        theta_ = init.theta ? *init.theta : theta_from_prior(2, y.num_symptoms(), h_, rng_);
        if (theta_.num_symptoms() != y.num_symptoms() || theta_.num_states() != 2)
            throw Error("emission table does not match the observations");
        theta_.set_h(h_);
        rebuild_neighbor_counts();
        rebuild_emission_cache();
        rebuild_tables();
        marginal_sums_.assign(N * T, 0.0);
    }

    // One sweep: states (t-major, node-ascending), sources, rates, theta.
    void sweep()
    {
        if (config_.update_states) {
            rebuild_tables();
            sweep_states();
        }
        collect_and_sample_sources();
        if (config_.update_params) {
            params_.alpha = beta_draw(rng_, alpha_shape_.a, alpha_shape_.b);
            params_.beta = beta_draw(rng_, beta_shape_.a, beta_shape_.b);
            params_.gamma = beta_draw(rng_, gamma_shape_.a, gamma_shape_.b);
        }
        if (config_.update_theta) {
            theta_ = sample_theta(x_, y_, h_, rng_);
            rebuild_emission_cache();
        }
        if (iteration_ >= config_.burn_in) {
            for (std::size_t i = 0; i < marginal_sums_.size(); ++i)
                marginal_sums_[i] += x_.raw()[i];
            ++marginal_count_;
        }
        ++iteration_;
    }

    // Runs the configured number of sweeps, handing every retained record
    // to `sink`.
    void run(const std::function<void(const SampleRecord&)>& sink = {})
    {
        while (iteration_ < config_.iterations) {
            sweep();
            const std::size_t done = iteration_ - 1;
            if (done < config_.burn_in || !sink)
                continue;
            const std::size_t kept = done - config_.burn_in;
            if (kept % config_.scalar_thin != 0)
                continue;
            SampleRecord rec;
            rec.iteration = done;
            rec.params = params_;
            rec.theta = theta_;
            if (config_.record_states && kept % config_.state_thin == 0)
                rec.states = x_;
            rec.log_joint = log_joint();
            sink(rec);
        }
    }

    // log P(X | rates) + log P(Y | X, theta) for the current draw.
    double log_joint()
    {
        rebuild_tables();
        const std::size_t N = g_.num_nodes(), T = g_.num_steps();
        double total = 0.0;
        for (Step t = 0; t + 1 < T; ++t)
            for (NodeId n = 0; n < N; ++n) {
                const State from = x_(n, t), to = x_(n, t + 1);
                if (from == kSusceptible)
                    total += to == kInfectious ? log_inf_[count(n, t)] : log_noinf_[count(n, t)];
                else
                    total += to == kSusceptible ? log_gamma_ : log_1m_gamma_;
            }
        return total + log_emission(y_, x_, theta_);
    }

    const StateMatrix& states() const { return x_; }
    const SISParams& params() const { return params_; }
    const EmissionParams& theta() const { return theta_; }
    const SourceMatrix& sources() const { return sources_; }
    std::size_t iteration() const { return iteration_; }
    const ChainConfig& config() const { return config_; }

    BetaShape alpha_shape() const { return alpha_shape_; }
    BetaShape beta_shape() const { return beta_shape_; }
    BetaShape gamma_shape() const { return gamma_shape_; }

    // Realized susceptible node-steps whose linear infection probability was
    // clamped, summed over sweeps.
    std::size_t clamp_events() const { return clamp_events_; }

    // Per-site frequency of the infectious state over post-burn-in sweeps,
    // indexed t * N + n.
    std::vector<double> marginals() const
    {
        std::vector<double> m(marginal_sums_.size(), 0.0);
        if (marginal_count_ == 0)
            return m;
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = marginal_sums_[i] / static_cast<double>(marginal_count_);
        return m;
    }
    std::size_t marginal_count() const { return marginal_count_; }

private:
    std::uint16_t& count(NodeId n, Step t) { return k_[static_cast<std::size_t>(t) * g_.num_nodes() + n]; }

    void rebuild_neighbor_counts()
    {
        const std::size_t N = g_.num_nodes(), T = g_.num_steps();
        k_.assign(N * T, 0);
        for (Step t = 0; t < T; ++t)
            for (NodeId n = 0; n < N; ++n) {
                std::size_t k = 0;
                for (NodeId m : g_.neighbors_unchecked(n, t))
                    k += x_(m, t) == kInfectious;
                k_[static_cast<std::size_t>(t) * N + n] = static_cast<std::uint16_t>(k);
            }
    }

    // Log-ratio of the emission factor, log P(Y|1) - log P(Y|0), per site.
    void rebuild_emission_cache()
    {
        const std::size_t N = g_.num_nodes(), T = g_.num_steps(), S = y_.num_symptoms();
        std::vector<double> lp0(S), la0(S), lp1(S), la1(S);
        for (std::size_t s = 0; s < S; ++s) {
            lp0[s] = std::log(theta_(0, s));
            la0[s] = std::log(1.0 - theta_(0, s));
            lp1[s] = std::log(theta_(1, s));
            la1[s] = std::log(1.0 - theta_(1, s));
        }
        emission_diff_.assign(N * T, 0.0);
        for (Step t = 0; t < T; ++t)
            for (NodeId n = 0; n < N; ++n) {
                auto site = y_.site(n, t);
                double d = 0.0;
                for (std::size_t s = 0; s < S; ++s) {
                    if (site[s] == ObservationMatrix::kPresent)
                        d += lp1[s] - lp0[s];
                    else if (site[s] == ObservationMatrix::kAbsent)
                        d += la1[s] - la0[s];
                }
                emission_diff_[static_cast<std::size_t>(t) * N + n] = d;
            }
    }

    void rebuild_tables()
    {
        const std::size_t K = g_.max_degree() + 2;
        log_inf_.resize(K);
        log_noinf_.resize(K);
        clamp_from_ = K;
        for (std::size_t k = 0; k < K; ++k) {
            auto inf = infection_prob_linear(params_, k);
            if (inf.clamped && clamp_from_ == K)
                clamp_from_ = k;
            log_inf_[k] = std::log(inf.value);
            log_noinf_[k] = std::log(1.0 - inf.value);
        }
        log_gamma_ = std::log(params_.gamma);
        log_1m_gamma_ = std::log(1.0 - params_.gamma);
    }

    void sweep_states()
    {
        const std::size_t N = g_.num_nodes(), T = g_.num_steps();
        for (Step t = 1; t < T; ++t) {
            const bool has_next = t + 1 < T;
            for (NodeId n = 0; n < N; ++n) {
                double w0 = 0.0, w1 = 0.0;
                if (x_(n, t - 1) == kSusceptible) {
                    const std::size_t kp = count(n, t - 1);
                    w0 += log_noinf_[kp];
                    w1 += log_inf_[kp];
                } else {
                    w0 += log_gamma_;
                    w1 += log_1m_gamma_;
                }
                const State cur = x_(n, t);
                auto nbrs = g_.neighbors_unchecked(n, t);
                if (has_next) {
                    const State next = x_(n, t + 1);
                    const std::size_t kh = count(n, t);
                    w0 += next == kInfectious ? log_inf_[kh] : log_noinf_[kh];
                    w1 += next == kSusceptible ? log_gamma_ : log_1m_gamma_;
                    for (NodeId m : nbrs) {
                        if (x_(m, t) != kSusceptible)
                            continue;
                        const std::size_t km = count(m, t) - cur;
                        if (x_(m, t + 1) == kInfectious) {
                            w0 += log_inf_[km];
                            w1 += log_inf_[km + 1];
                        } else {
                            w0 += log_noinf_[km];
                            w1 += log_noinf_[km + 1];
                        }
                    }
                }
                w1 += emission_diff_[static_cast<std::size_t>(t) * N + n];
                double p1;
                if (w1 == kNegInf) {
                    if (w0 == kNegInf)
                        throw NumericalDegeneracy("both states have zero weight at node " + std::to_string(n) + ", step " +
                                                  std::to_string(t) + " in sweep " + std::to_string(iteration_));
                    p1 = 0.0;
                } else if (w0 == kNegInf)
                    p1 = 1.0;
                else
                    p1 = 1.0 / (1.0 + std::exp(w0 - w1));
                const State v = uniform01(rng_) < p1 ? kInfectious : kSusceptible;
                if (v != cur) {
                    x_.put(n, t, v);
                    for (NodeId m : nbrs) {
                        if (v == kInfectious)
                            ++count(m, t);
                        else
                            --count(m, t);
                    }
                }
            }
        }
    }

    // Draws R and gathers the conjugate shape parameters in one pass.
    void collect_and_sample_sources()
    {
        const std::size_t N = g_.num_nodes(), T = g_.num_steps();
        sources_.clear();
        std::size_t susceptible = 0, exposure = 0, outside = 0, inside = 0, infectious = 0, recoveries = 0;
        for (Step t = 0; t + 1 < T; ++t)
            for (NodeId n = 0; n < N; ++n) {
                if (x_(n, t) == kSusceptible) {
                    const std::size_t k = count(n, t);
                    ++susceptible;
                    exposure += k;
                    if (k >= clamp_from_)
                        ++clamp_events_;
                    if (x_(n, t + 1) == kInfectious) {
                        std::uint32_t src;
                        try {
                            src = detail::draw_source(params_, k, rng_, n, t);
                        } catch (const ImpossibleEvent& e) {
                            throw ImpossibleEvent(std::string(e.what()) + " in sweep " + std::to_string(iteration_));
                        }
                        (src == 1 ? outside : inside) += 1;
                        sources_.push({n, t, src});
                    }
                } else {
                    ++infectious;
                    recoveries += x_(n, t + 1) == kSusceptible;
                }
            }
        alpha_shape_ = detail::checked_shape(priors_.alpha.a + static_cast<double>(outside),
                                             priors_.alpha.b + static_cast<double>(susceptible - outside), "alpha");
        beta_shape_ = detail::checked_shape(priors_.beta.a + static_cast<double>(inside),
                                            priors_.beta.b + static_cast<double>(exposure - inside), "beta");
        gamma_shape_ = detail::checked_shape(priors_.gamma.a + static_cast<double>(recoveries),
                                             priors_.gamma.b + static_cast<double>(infectious - recoveries), "gamma");
    }

    const DynamicGraph& g_;
    const ObservationMatrix& y_;
    SISPriors priors_;
    double h_;
    ChainConfig config_;
    Rng rng_;

    StateMatrix x_;
    SISParams params_;
    EmissionParams theta_;
    SourceMatrix sources_;
    BetaShape alpha_shape_{1, 1}, beta_shape_{1, 1}, gamma_shape_{1, 1};

    std::vector<std::uint16_t> k_;
    std::vector<double> emission_diff_;
    std::vector<double> log_inf_, log_noinf_;
    double log_gamma_ = 0.0, log_1m_gamma_ = 0.0;
    std::size_t clamp_from_ = 0;
    std::size_t clamp_events_ = 0;

    std::size_t iteration_ = 0;
    std::vector<double> marginal_sums_;
    std::size_t marginal_count_ = 0;
};

struct ChainResult {
    std::vector<double> marginals;
    std::size_t num_samples = 0;
    SISParams final_params;
    EmissionParams final_theta;
    std::size_t clamp_events = 0;
};

inline ChainResult run_chain(const DynamicGraph& g, const ObservationMatrix& y, const ChainConfig& config, const SISPriors& priors,
                             double h = 1.0, ChainInit init = {}, const std::function<void(const SampleRecord&)>& sink = {})
{
    SisGibbsChain chain(g, y, priors, h, config, std::move(init));
    chain.run(sink);
    return {chain.marginals(), chain.marginal_count(), chain.params(), chain.theta(), chain.clamp_events()};
}

} // namespace gchmm

#endif

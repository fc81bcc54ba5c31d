#ifndef GCHMM_BENCH_HPP
#define GCHMM_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "contact_pattern.hpp"
#include "dynamic_graph.hpp"
#include "error.hpp"
#include "format.hpp"
#include "gibbs.hpp"
#include "matrices.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "roc.hpp"
#include "simulate.hpp"
#include "sis_model.hpp"

namespace gchmm {

inline constexpr std::int8_t kUnobserved = -1;

struct BenchmarkConfig {
    std::string id = "config1";
    std::size_t num_series = 200;
    std::size_t series_length = 128;
    double holdout_fraction = 0.10;
    double observation_error = 0.01;
    SISParams params{0.01, 0.02, 0.3, {}};
    ContactPatternConfig contact;
    // Replaces the generated pattern when set; repeated cyclically if
    // shorter than a series.
    std::shared_ptr<const DynamicGraph> contact_graph;
    std::size_t training_length = 1000;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (!(holdout_fraction >= 0.0 && holdout_fraction <= 1.0))
            throw Error("holdout fraction must lie in [0,1]");
        if (!(observation_error >= 0.0 && observation_error <= 1.0))
            throw Error("observation error must lie in [0,1]");
        if (num_series == 0 || series_length < 2 || training_length < 2)
            throw Error("series counts and lengths must be positive");
        params.validate();
    }
};

// The three calibration parameterizations.
inline std::vector<BenchmarkConfig> default_benchmark_configs()
{
    std::vector<BenchmarkConfig> out(3);
    out[0].id = "config1";
    out[0].params = {0.01, 0.02, 0.3, {}};
    out[0].observation_error = 0.01;
    out[1].id = "config2";
    out[1].params = {0.01, 0.02, 0.3, {}};
    out[1].observation_error = 0.001;
    out[2].id = "config3";
    out[2].params = {0.005, 0.045, 0.3, {}};
    out[2].observation_error = 0.01;
    return out;
}

struct Series {
    std::shared_ptr<const DynamicGraph> graph;
    StateMatrix truth;
    std::vector<std::int8_t> observed; // t * N + n; kUnobserved for held-out nodes
    std::vector<NodeId> holdout;       // ascending

    std::int8_t obs(NodeId n, Step t) const { return observed[static_cast<std::size_t>(t) * graph->num_nodes() + n]; }
};

inline DynamicGraph contact_graph_for(const BenchmarkConfig& cfg, std::size_t num_steps)
{
    if (!cfg.contact_graph)
        return generate_contact_pattern(cfg.contact, num_steps);
    const auto& src = *cfg.contact_graph;
    std::vector<std::vector<Edge>> edges(num_steps);
    for (std::size_t t = 0; t < num_steps; ++t) {
        auto es = src.edges(static_cast<Step>(t % src.num_steps()));
        edges[t].assign(es.begin(), es.end());
    }
    return DynamicGraph(src.num_nodes(), num_steps, std::move(edges));
}

inline std::size_t holdout_size(double fraction, std::size_t num_nodes)
{
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(num_nodes) - 1e-9));
}

// Flips every observed state independently with probability `error`;
// held-out nodes receive no observation.
inline std::vector<std::int8_t> observe_states(const StateMatrix& x, const std::vector<NodeId>& holdout, double error, Rng& rng)
{
    const std::size_t N = x.num_nodes();
    std::vector<bool> masked(N, false);
    for (NodeId n : holdout)
        masked[n] = true;
    std::vector<std::int8_t> out(N * x.num_steps(), kUnobserved);
    for (Step t = 0; t < x.num_steps(); ++t)
        for (NodeId n = 0; n < N; ++n) {
            if (masked[n])
                continue;
            const bool flip = error > 0.0 && bernoulli(rng, error);
            out[static_cast<std::size_t>(t) * N + n] = static_cast<std::int8_t>(x(n, t) ^ static_cast<State>(flip));
        }
    return out;
}

inline std::vector<NodeId> choose_holdout(std::size_t num_nodes, std::size_t count, Rng& rng)
{
    if (count > num_nodes)
        throw Error("holdout larger than population");
    std::vector<NodeId> ids(num_nodes);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(num_nodes - i));
        std::swap(ids[i], ids[std::min(j, num_nodes - 1)]);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline Series synthesize_series(const BenchmarkConfig& cfg, std::shared_ptr<const DynamicGraph> graph, std::size_t index)
{
    Rng rng(derive_seed(cfg.seed, index));
    Series s;
    s.graph = std::move(graph);
    s.truth = simulate_sis_states(*s.graph, cfg.params, {}, rng, TransitionForm::exact);
    s.holdout = choose_holdout(s.graph->num_nodes(), holdout_size(cfg.holdout_fraction, s.graph->num_nodes()), rng);
    s.observed = observe_states(s.truth, s.holdout, cfg.observation_error, rng);
    return s;
}

inline std::vector<Series> synthesize(const BenchmarkConfig& cfg)
{
    cfg.validate();
    auto graph = std::make_shared<const DynamicGraph>(contact_graph_for(cfg, cfg.series_length));
    if (holdout_size(cfg.holdout_fraction, graph->num_nodes()) > graph->num_nodes())
        throw Error("holdout larger than population");
    std::vector<Series> out;
    for (std::size_t i = 0; i < cfg.num_series; ++i)
        out.push_back(synthesize_series(cfg, graph, i));
    return out;
}

// Held-out sites scored by every method: held-out nodes in ascending order,
// timesteps 1..T-1 (column 0 is known susceptible).
struct Site {
    NodeId node;
    Step t;
};

inline std::vector<Site> heldout_sites(const Series& s)
{
    std::vector<Site> out;
    for (NodeId n : s.holdout)
        for (Step t = 1; t < s.truth.num_steps(); ++t)
            out.push_back({n, t});
    return out;
}

inline std::vector<int> heldout_labels(const Series& s)
{
    std::vector<int> out;
    for (const auto& site : heldout_sites(s))
        out.push_back(s.truth(site.node, site.t));
    return out;
}

// Noisy state observations as a single binary symptom.
inline ObservationMatrix observations_from_series(const Series& s)
{
    const std::size_t N = s.graph->num_nodes(), T = s.graph->num_steps();
    ObservationMatrix y(N, T, 1);
    for (Step t = 0; t < T; ++t)
        for (NodeId n = 0; n < N; ++n)
            if (auto v = s.obs(n, t); v != kUnobserved)
                y.set(n, t, 0, v);
    return y;
}

// The flip model: symptom present with probability e in state 0 and 1 - e
// in state 1.
inline EmissionParams flip_emission(double error)
{
    const double e = clamp_theta(error);
    return EmissionParams(2, 1, std::vector<double>{e, 1.0 - e}, 1.0);
}

// With `fixed_params` set the rates are held there instead of sampled.
inline std::vector<double> score_gchmm(const Series& s, double observation_error, const SISPriors& priors, ChainConfig chain,
                                       std::optional<SISParams> fixed_params = std::nullopt)
{
    chain.update_theta = false;
    chain.record_states = false;
    const auto y = observations_from_series(s);
    ChainInit init;
    init.theta = flip_emission(observation_error);
    if (fixed_params) {
        init.params = fixed_params;
        chain.update_params = false;
    }
    auto result = run_chain(*s.graph, y, chain, priors, 1.0, init);
    const std::size_t N = s.graph->num_nodes();
    std::vector<double> scores;
    for (const auto& site : heldout_sites(s))
        scores.push_back(result.marginals[static_cast<std::size_t>(site.t) * N + site.node]);
    return scores;
}

// Population rates from individual rates: gamma' = gamma and
// beta' = beta * mean_degree / N.
inline PopulationRates population_rates(const SISParams& p, const DynamicGraph& g)
{
    return {p.beta * g.mean_degree() / static_cast<double>(g.num_nodes()), p.gamma};
}

// Observed prevalence at t = 0 scaled to the population, at least one.
inline double population_initial_infectious(const Series& s)
{
    std::size_t seen = 0, infectious = 0;
    for (NodeId n = 0; n < s.graph->num_nodes(); ++n)
        if (auto v = s.obs(n, 0); v != kUnobserved) {
            ++seen;
            infectious += v == 1;
        }
    const double N = static_cast<double>(s.graph->num_nodes());
    const double scaled = seen ? N * static_cast<double>(infectious) / static_cast<double>(seen) : 0.0;
    return std::clamp(std::round(scaled), 1.0, N);
}

inline std::vector<double> score_ode(const Series& s, const SISParams& p)
{
    const double N = static_cast<double>(s.graph->num_nodes());
    const auto T = static_cast<double>(s.truth.num_steps());
    auto traj = integrate_ode(population_rates(p, *s.graph), N, population_initial_infectious(s), T - 1.0, 1e-2);
    std::vector<double> scores;
    for (const auto& site : heldout_sites(s))
        scores.push_back(ode_infectious_at(traj, static_cast<double>(site.t)) / N);
    return scores;
}

inline std::vector<double> score_jump(const Series& s, const SISParams& p, std::uint64_t seed, std::size_t replicates = 200)
{
    const auto N = static_cast<std::int64_t>(s.graph->num_nodes());
    const std::size_t T = s.truth.num_steps();
    const auto i0 = static_cast<std::int64_t>(population_initial_infectious(s));
    const auto rates = population_rates(p, *s.graph);
    std::vector<double> mean(T, 0.0);
    Rng rng(seed);
    for (std::size_t r = 0; r < replicates; ++r) {
        auto traj = simulate_jump(rates, N - i0, i0, static_cast<double>(T - 1), rng);
        for (std::size_t t = 0; t < T; ++t)
            mean[t] += static_cast<double>(traj.infectious_at(static_cast<double>(t))) / static_cast<double>(replicates);
    }
    std::vector<double> scores;
    for (const auto& site : heldout_sites(s))
        scores.push_back(mean[site.t] / static_cast<double>(N));
    return scores;
}

// Observed-infectious contacts of n at t-1, t and t+1 (zero off the ends).
inline ContactFeatures contact_features(const DynamicGraph& g, const std::vector<std::int8_t>& observed, NodeId n, Step t)
{
    const std::size_t N = g.num_nodes(), T = g.num_steps();
    auto count_at = [&](std::int64_t step) {
        if (step < 0 || static_cast<std::size_t>(step) >= T)
            return 0.0;
        const auto st = static_cast<Step>(step);
        double c = 0.0;
        for (NodeId m : g.neighbors_unchecked(n, st))
            c += observed[static_cast<std::size_t>(st) * N + m] == 1;
        return c;
    };
    return {count_at(static_cast<std::int64_t>(t) - 1), count_at(t), count_at(static_cast<std::int64_t>(t) + 1)};
}

struct TrainingSet {
    std::vector<ContactFeatures> features;
    std::vector<int> labels;
};

// A long fully labeled series under the true parameters; features come
// from noisy observations of every node, labels from the true states.
inline TrainingSet classifier_training_set(const BenchmarkConfig& cfg)
{
    Rng rng(derive_seed(cfg.seed, 0xC1A55ULL));
    const DynamicGraph g = contact_graph_for(cfg, cfg.training_length);
    const StateMatrix x = simulate_sis_states(g, cfg.params, {}, rng, TransitionForm::exact);
    const auto observed = observe_states(x, {}, cfg.observation_error, rng);
    TrainingSet ts;
    for (Step t = 1; t < g.num_steps(); ++t)
        for (NodeId n = 0; n < g.num_nodes(); ++n) {
            ts.features.push_back(contact_features(g, observed, n, t));
            ts.labels.push_back(x(n, t));
        }
    return ts;
}

struct MethodResult {
    std::string config_id;
    std::string method;
    bool skipped = false;
    RocCurve pooled;
    double auc = 0.0;
    double auc_ci_lo = 0.0;
    double auc_ci_hi = 0.0;
    std::vector<double> per_series_auc;
    std::size_t n_series = 0;
    double wall_seconds = 0.0;
    double mean_degree = 0.0;
};

struct BenchmarkOptions {
    ChainConfig chain;
    SISPriors priors;
    std::vector<std::string> methods{"gchmm", "ode-sis", "jump-sis", "neighbor-count"};
    std::size_t threads = 1;
    std::size_t bootstrap = 200;
    bool record_wall_time = false;
};

inline ChainConfig desk_chain_config()
{
    ChainConfig c;
    c.iterations = 2000;
    c.burn_in = 500;
    return c;
}

inline bool is_known_method(const std::string& m)
{
    return m == "gchmm" || m == "ode-sis" || m == "jump-sis" || m == "neighbor-count";
}

namespace detail {

struct PerSeries {
    std::vector<int> labels;
    std::map<std::string, std::vector<double>> scores;
    std::map<std::string, double> seconds;
};

inline bool has_both_classes(const std::vector<int>& labels)
{
    bool pos = false, neg = false;
    for (int l : labels)
        (l ? pos : neg) = true;
    return pos && neg;
}

} // namespace detail

// Scores every method on every series of one config and pools the ROC.
inline std::vector<MethodResult> run_config(const BenchmarkConfig& cfg, const BenchmarkOptions& opt)
{
    for (const auto& m : opt.methods)
        if (!is_known_method(m))
            throw Error("unknown method '" + m + "'");
    const auto series = synthesize(cfg);
    const auto want = [&](const char* m) { return std::find(opt.methods.begin(), opt.methods.end(), m) != opt.methods.end(); };

    std::optional<LogisticModel> classifier;
    double classifier_seconds = 0.0;
    if (want("neighbor-count")) {
        auto start = std::chrono::steady_clock::now();
        auto ts = classifier_training_set(cfg);
        classifier = fit_logistic(ts.features, ts.labels).model;
        classifier_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    std::vector<detail::PerSeries> per(series.size());
    parallel_for(series.size(), opt.threads, [&](std::size_t i) {
        const auto& s = series[i];
        auto& out = per[i];
        out.labels = heldout_labels(s);
        auto timed = [&](const std::string& name, auto&& fn) {
            auto start = std::chrono::steady_clock::now();
            out.scores[name] = fn();
            out.seconds[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        };
        if (want("gchmm"))
            timed("gchmm", [&] {
                ChainConfig chain = opt.chain;
                chain.seed = derive_seed(cfg.seed ^ chain.seed, 1000 + i);
                return score_gchmm(s, cfg.observation_error, opt.priors, chain);
            });
        if (want("ode-sis"))
            timed("ode-sis", [&] { return score_ode(s, cfg.params); });
        if (want("jump-sis"))
            timed("jump-sis", [&] { return score_jump(s, cfg.params, derive_seed(cfg.seed, 5000 + i)); });
        if (want("neighbor-count"))
            timed("neighbor-count", [&] {
                std::vector<double> scores;
                for (const auto& site : heldout_sites(s))
                    scores.push_back(classifier->score(contact_features(*s.graph, s.observed, site.node, site.t)));
                return scores;
            });
    });

    std::vector<MethodResult> results;
    for (const auto& method : opt.methods) {
        MethodResult r;
        r.config_id = cfg.id;
        r.method = method;
        r.n_series = series.size();
        if (!series.empty())
            r.mean_degree = series.front().graph->mean_degree();
        std::vector<double> scores;
        std::vector<int> labels;
        for (const auto& p : per) {
            const auto& sc = p.scores.at(method);
            scores.insert(scores.end(), sc.begin(), sc.end());
            labels.insert(labels.end(), p.labels.begin(), p.labels.end());
            if (opt.record_wall_time)
                r.wall_seconds += p.seconds.at(method);
            if (detail::has_both_classes(p.labels))
                r.per_series_auc.push_back(auc_mann_whitney(sc, p.labels));
        }
        if (opt.record_wall_time && method == "neighbor-count")
            r.wall_seconds += classifier_seconds;
        if (!detail::has_both_classes(labels)) {
            r.skipped = true;
            results.push_back(std::move(r));
            continue;
        }
        r.pooled = roc(scores, labels);
        r.auc = r.pooled.auc;

        // Percentile bootstrap over series of the pooled AUC.
        Rng rng(derive_seed(cfg.seed, 0xB007ULL));
        std::vector<double> boot;
        for (std::size_t b = 0; b < opt.bootstrap; ++b) {
            std::vector<double> bs;
            std::vector<int> bl;
            for (std::size_t k = 0; k < per.size(); ++k) {
                const auto j = std::min(per.size() - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(per.size())));
                const auto& sc = per[j].scores.at(method);
                bs.insert(bs.end(), sc.begin(), sc.end());
                bl.insert(bl.end(), per[j].labels.begin(), per[j].labels.end());
            }
            if (detail::has_both_classes(bl))
                boot.push_back(auc_mann_whitney(bs, bl));
        }
        if (!boot.empty()) {
            std::sort(boot.begin(), boot.end());
            auto q = [&](double f) { return boot[std::min(boot.size() - 1, static_cast<std::size_t>(f * static_cast<double>(boot.size())))]; };
            r.auc_ci_lo = q(0.025);
            r.auc_ci_hi = q(0.975);
        } else
            r.auc_ci_lo = r.auc_ci_hi = r.auc;
        results.push_back(std::move(r));
    }
    return results;
}

inline std::vector<MethodResult> run_benchmark(const std::vector<BenchmarkConfig>& configs, const BenchmarkOptions& opt)
{
    std::vector<MethodResult> all;
    for (const auto& cfg : configs) {
        auto rows = run_config(cfg, opt);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    return all;
}

inline const MethodResult& find_result(const std::vector<MethodResult>& rows, const std::string& config_id, const std::string& method)
{
    for (const auto& r : rows)
        if (r.config_id == config_id && r.method == method)
            return r;
    throw Error("no benchmark result for " + config_id + "/" + method);
}

// report.csv plus roc_<config>_<method>.csv per non-skipped row.
inline void write_benchmark_report(const std::filesystem::path& dir, const std::vector<MethodResult>& rows)
{
    std::filesystem::create_directories(dir);
    std::ofstream report(dir / "report.csv");
    if (!report)
        throw Error("cannot write " + (dir / "report.csv").string());
    report << "config_id,method,auc,auc_ci_lo,auc_ci_hi,n_series,wall_seconds\n";
    for (const auto& r : rows) {
        report << r.config_id << ',' << r.method << ',';
        if (r.skipped)
            report << "NA,NA,NA,";
        else
            report << fmt_double(r.auc) << ',' << fmt_double(r.auc_ci_lo) << ',' << fmt_double(r.auc_ci_hi) << ',';
        report << r.n_series << ',' << fmt_double(r.wall_seconds) << '\n';
        if (r.skipped)
            continue;
        std::ofstream rf(dir / ("roc_" + r.config_id + "_" + r.method + ".csv"));
        write_roc(rf, r.pooled);
    }
}

} // namespace gchmm

#endif

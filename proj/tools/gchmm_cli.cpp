// gchmm command-line driver. Every run is described by one JSON config;
// flags override individual keys and the effective config is written next
// to the outputs.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gchmm/gchmm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gchmm;

namespace {

struct Context {
    json config = json::object();
    fs::path config_path; // empty when no --config was given
    fs::path out;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

// Input paths inside a config file are relative to that file; the output
// directory is relative to the working directory.
fs::path resolve(const Context& ctx, const std::string& p)
{
    fs::path path(p);
    if (path.is_absolute() || ctx.config_path.empty())
        return path;
    return ctx.config_path.parent_path() / path;
}

json& section(json& j, const char* name)
{
    if (!j.contains(name))
        j[name] = json::object();
    return j[name];
}

std::ofstream open_out(const fs::path& p)
{
    std::ofstream out(p);
    if (!out)
        throw Error("cannot write " + p.string());
    return out;
}

void prepare_output(const Context& ctx)
{
    fs::create_directories(ctx.out);
    if (!ctx.config_path.empty())
        fs::copy_file(ctx.config_path, ctx.out / "config.json", fs::copy_options::overwrite_existing);
    // The output location is not part of the run description.
    json effective = ctx.config;
    effective.erase("out");
    open_out(ctx.out / "effective_config.json") << effective.dump(2) << '\n';
}

ContactPatternConfig contact_from_json(const json& j)
{
    ContactPatternConfig c;
    c.num_nodes = j.value("num_nodes", c.num_nodes);
    c.period = j.value("period", c.period);
    c.mean_degree = j.value("mean_degree", c.mean_degree);
    c.activity = j.value("activity", c.activity);
    c.seed = j.value("seed", c.seed);
    return c;
}

DynamicGraph graph_from_config(const Context& ctx)
{
    const json g = ctx.config.value("graph", json::object());
    if (g.contains("proximity")) {
        if (!g.contains("num_nodes") || !g.contains("num_steps"))
            throw Error("graph.proximity requires graph.num_nodes and graph.num_steps");
        return load_proximity(resolve(ctx, g.at("proximity").get<std::string>()).string(), g.at("num_nodes").get<std::size_t>(),
                              g.at("num_steps").get<std::size_t>());
    }
    auto cp = contact_from_json(g.value("contact_pattern", json::object()));
    if (g.contains("num_nodes"))
        cp.num_nodes = g.at("num_nodes").get<std::size_t>();
    return generate_contact_pattern(cp, g.value("num_steps", std::size_t{128}));
}

void print_summary(const char* label, double v) { std::printf("%-24s %s\n", label, fmt_double(v).c_str()); }

// Linear-interpolated sample quantile of sorted values.
double quantile(const std::vector<double>& sorted, double q)
{
    if (sorted.empty())
        return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(Context& ctx)
{
    const auto g = graph_from_config(ctx);
    const json pj = ctx.config.value("params", json::object());
    const json sj = ctx.config.value("simulate", json::object());
    const SISParams p = sis_params_from_json(pj);
    p.validate();
    const EmissionParams emission =
        pj.contains("theta") ? emission_from_json(pj) : flip_emission(sj.value("observation_error", 0.01));
    emission.validate();
    std::vector<State> init;
    if (sj.contains("initial_infectious")) {
        init.assign(g.num_nodes(), kSusceptible);
        for (auto n : sj.at("initial_infectious").get<std::vector<NodeId>>())
            init.at(n) = kInfectious;
    }
    const auto form = parse_transition_form(sj.value("transition_form", std::string("exact")));

    Rng rng(ctx.seed);
    auto sim = simulate_sis(g, p, emission, init, rng, form);
    prepare_output(ctx);
    {
        auto file = open_out(ctx.out / "states.csv");
        write_states(file, sim.states);
    }
    {
        auto file = open_out(ctx.out / "observations.csv");
        write_observations(file, sim.observations);
    }
    dump_proximity((ctx.out / "proximity.csv").string(), g);

    const auto s = summarize_epidemic(sim.states);
    print_summary("attack_rate", s.attack_rate);
    print_summary("ever_infected", s.ever_infected);
    print_summary("mean_duration", s.mean_infectious_duration);
    print_summary("duration_std_error", s.duration_std_error);
    std::printf("%-24s %zu\n", "completed_runs", s.completed_runs);
    return 0;
}

// ------------------------------------------------------------------- infer

struct ChainOutput {
    std::vector<SampleRecord> records;
    ChainResult result;
};

void write_sample_line(std::ostream& out, std::size_t chain, const SampleRecord& r, const std::string& states_ref)
{
    out << "{\"chain\":" << chain << ",\"iteration\":" << r.iteration << ",\"alpha\":" << fmt_double(r.params.alpha)
        << ",\"beta\":" << fmt_double(r.params.beta) << ",\"gamma\":" << fmt_double(r.params.gamma) << ",\"theta\":[";
    const auto th = r.theta.row_major();
    for (std::size_t i = 0; i < th.size(); ++i)
        out << (i ? "," : "") << fmt_double(th[i]);
    out << "],\"log_joint\":" << fmt_double(r.log_joint);
    if (!states_ref.empty())
        out << ",\"states\":\"" << states_ref << '"';
    out << "}\n";
}

int cmd_infer(Context& ctx)
{
    const auto g = graph_from_config(ctx);
    const json ij = ctx.config.value("infer", json::object());
    if (!ij.contains("symptoms"))
        throw Error("infer.symptoms is required");
    const std::string granularity = ij.value("symptom_granularity", std::string("hourly"));
    if (granularity != "daily" && granularity != "hourly")
        throw Error("symptom_granularity must be 'daily' or 'hourly'");
    const std::size_t steps_per_day = ij.value("steps_per_day", std::size_t{24});
    const std::size_t steps_per_row = granularity == "daily" ? steps_per_day : 1;
    const auto y = read_file(resolve(ctx, ij.at("symptoms").get<std::string>()).string(), [&](std::istream& in) {
        return read_observations(in, g.num_nodes(), g.num_steps(), steps_per_row);
    });

    ChainConfig cc;
    cc.iterations = ij.value("iterations", cc.iterations);
    cc.burn_in = ij.value("burn_in", cc.burn_in);
    cc.state_thin = ij.value("state_thin", cc.state_thin);
    cc.scalar_thin = ij.value("scalar_thin", cc.scalar_thin);
    cc.record_states = ij.value("record_states", false);
    cc.update_theta = ij.value("update_theta", true);
    cc.validate();
    const SISPriors priors = priors_from_json(ij.value("priors", json::object()));
    const double h = ij.value("h", 1.0);
    const std::size_t chains = ij.value("chains", std::size_t{1});
    if (chains == 0)
        throw Error("infer.chains must be at least 1");

    std::vector<ChainOutput> outs(chains);
    parallel_for(chains, ctx.threads, [&](std::size_t c) {
        ChainConfig mine = cc;
        mine.seed = derive_seed(ctx.seed, c);
        auto& o = outs[c];
        o.result = run_chain(g, y, mine, priors, h, {}, [&](const SampleRecord& r) { o.records.push_back(r); });
    });

    prepare_output(ctx);
    {
        auto samples = open_out(ctx.out / "samples.jsonl");
        if (cc.record_states)
            fs::create_directories(ctx.out / "states");
        for (std::size_t c = 0; c < chains; ++c)
            for (const auto& r : outs[c].records) {
                std::string ref;
                if (r.states) {
                    ref = "states/chain" + std::to_string(c) + "_iter" + std::to_string(r.iteration) + ".csv";
                    auto file = open_out(ctx.out / ref);
                    write_states(file, *r.states);
                }
                write_sample_line(samples, c, r, ref);
            }
    }
    std::vector<double> marginals(g.num_nodes() * g.num_steps(), 0.0);
    for (const auto& o : outs)
        for (std::size_t i = 0; i < marginals.size(); ++i)
            marginals[i] += o.result.marginals[i] / static_cast<double>(chains);
    {
        auto file = open_out(ctx.out / "marginals.csv");
        write_marginals(file, marginals, g.num_nodes(), g.num_steps());
    }
    const std::size_t heat_steps = granularity == "daily" ? steps_per_day : ij.value("heatmap_steps_per_day", std::size_t{1});
    {
        auto file = open_out(ctx.out / "heatmap.csv");
        export_heatmap(file, marginals, y, heat_steps);
    }

    std::printf("%-8s %-24s %-24s %-24s\n", "param", "mean", "ci_lo", "ci_hi");
    for (const char* name : {"alpha", "beta", "gamma"}) {
        std::vector<double> v;
        for (const auto& o : outs)
            for (const auto& r : o.records)
                v.push_back(name[0] == 'a' ? r.params.alpha : name[0] == 'b' ? r.params.beta : r.params.gamma);
        std::sort(v.begin(), v.end());
        double mean = 0.0;
        for (double x : v)
            mean += x / static_cast<double>(v.size());
        std::printf("%-8s %-24s %-24s %-24s\n", name, fmt_double(mean).c_str(), fmt_double(quantile(v, 0.025)).c_str(),
                    fmt_double(quantile(v, 0.975)).c_str());
    }
    if (chains > 1)
        for (std::size_t c = 0; c < chains; ++c) {
            double mean = 0.0;
            for (const auto& r : outs[c].records)
                mean += r.params.gamma / static_cast<double>(outs[c].records.size());
            std::printf("chain %zu gamma mean %s\n", c, fmt_double(mean).c_str());
        }
    return 0;
}

// ----------------------------------------------------------- oracle-check

TinyInstance random_tiny_instance(std::size_t N, std::size_t T, Rng& rng)
{
    std::vector<std::vector<Edge>> edges(T);
    for (std::size_t t = 0; t < T; ++t)
        for (NodeId u = 0; u < N; ++u)
            for (NodeId v = u + 1; v < N; ++v)
                if (uniform01(rng) < 0.5)
                    edges[t].push_back({u, v});
    TinyInstance inst;
    inst.graph = DynamicGraph(N, T, std::move(edges));
    inst.params = {0.005 + 0.01 * uniform01(rng), 0.02 + 0.03 * uniform01(rng), 0.2 + 0.2 * uniform01(rng), {}};
    inst.theta = flip_emission(0.1);
    inst.observations = ObservationMatrix(N, T, 1);
    for (NodeId n = 0; n < N; ++n)
        for (Step t = 0; t < T; ++t)
            if (uniform01(rng) < 0.6)
                inst.observations.set(n, t, 0, uniform01(rng) < 0.3 ? 1 : 0);
    return inst;
}

int cmd_oracle_check(Context& ctx)
{
    const json oj = ctx.config.value("oracle_check", json::object());
    TinyInstance inst;
    Rng rng(ctx.seed);
    if (oj.contains("random")) {
        const auto& r = oj.at("random");
        const std::size_t N = r.value("num_nodes", std::size_t{2}), T = r.value("num_steps", std::size_t{3});
        check_tractable(N, T);
        inst = random_tiny_instance(N, T, rng);
    } else {
        const auto path = resolve(ctx, oj.value("fixture", std::string("oracle_fixture.json")));
        inst = read_file(path.string(), [](std::istream& in) { return instance_from_json(json::parse(in)); });
    }
    check_tractable(inst.graph.num_nodes(), inst.graph.num_steps());
    const double tolerance = oj.value("tolerance", 0.02);

    auto exact = enumerate_posterior(inst);
    ChainConfig cc;
    cc.burn_in = oj.value("burn_in", std::size_t{1000});
    cc.iterations = cc.burn_in + oj.value("sweeps", std::size_t{100000});
    cc.seed = derive_seed(ctx.seed, 1);
    cc.update_params = false;
    cc.update_theta = false;
    cc.record_states = false;
    auto res = run_chain(inst.graph, inst.observations, cc, {}, inst.theta.h(), {std::nullopt, inst.params, inst.theta});

    prepare_output(ctx);
    const std::size_t N = inst.graph.num_nodes();
    double worst = 0.0;
    auto table = open_out(ctx.out / "oracle.csv");
    table << "node,t,exact,gibbs\n";
    for (NodeId n = 0; n < N; ++n)
        for (Step t = 0; t < inst.graph.num_steps(); ++t) {
            const std::size_t i = static_cast<std::size_t>(t) * N + n;
            worst = std::max(worst, std::abs(exact.marginals[i] - res.marginals[i]));
            table << n << ',' << t << ',' << fmt_double(exact.marginals[i]) << ',' << fmt_double(res.marginals[i]) << '\n';
        }
    const bool pass = worst <= tolerance;
    print_summary("log_evidence", exact.log_evidence);
    print_summary("max_abs_discrepancy", worst);
    print_summary("tolerance", tolerance);
    std::printf("%s\n", pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

// -------------------------------------------------------------- benchmark

int cmd_benchmark(Context& ctx)
{
    const json bj = ctx.config.value("benchmark", json::object());
    const std::string profile = bj.value("profile", std::string("desk"));
    if (profile != "desk" && profile != "paper")
        throw Error("benchmark.profile must be 'desk' or 'paper'");
    const bool desk = profile == "desk";

    BenchmarkOptions opt;
    opt.chain = desk ? desk_chain_config() : ChainConfig{};
    opt.chain.iterations = bj.value("iterations", opt.chain.iterations);
    opt.chain.burn_in = bj.value("burn_in", opt.chain.burn_in);
    opt.chain.seed = ctx.seed;
    opt.chain.validate();
    opt.priors = priors_from_json(bj.value("priors", json::object()));
    if (bj.contains("methods"))
        opt.methods = bj.at("methods").get<std::vector<std::string>>();
    opt.threads = ctx.threads;
    opt.bootstrap = bj.value("bootstrap", opt.bootstrap);
    opt.record_wall_time = bj.value("record_wall_time", false);

    auto configs = default_benchmark_configs();
    if (bj.contains("configs")) {
        auto wanted = bj.at("configs").get<std::vector<std::string>>();
        std::vector<BenchmarkConfig> kept;
        for (const auto& id : wanted) {
            auto it = std::find_if(configs.begin(), configs.end(), [&](const auto& c) { return c.id == id; });
            if (it == configs.end())
                throw Error("unknown benchmark config '" + id + "'");
            kept.push_back(*it);
        }
        configs = kept;
    }
    std::shared_ptr<const DynamicGraph> proximity;
    if (bj.contains("proximity"))
        proximity = std::make_shared<const DynamicGraph>(load_proximity(resolve(ctx, bj.at("proximity").get<std::string>()).string(),
                                                                        bj.at("num_nodes").get<std::size_t>(),
                                                                        bj.at("num_steps").get<std::size_t>()));
    for (std::size_t i = 0; i < configs.size(); ++i) {
        auto& c = configs[i];
        c.num_series = bj.value("num_series", desk ? std::size_t{20} : c.num_series);
        c.series_length = bj.value("series_length", c.series_length);
        c.holdout_fraction = bj.value("holdout_fraction", c.holdout_fraction);
        c.training_length = bj.value("training_length", c.training_length);
        c.contact = contact_from_json(bj.value("contact_pattern", json::object()));
        c.contact_graph = proximity;
        c.seed = derive_seed(ctx.seed, 0);
    }

    auto rows = run_benchmark(configs, opt);
    fs::create_directories(ctx.out);
    prepare_output(ctx);
    write_benchmark_report(ctx.out, rows);

    json meta;
    meta["profile"] = profile;
    meta["iterations"] = opt.chain.iterations;
    meta["burn_in"] = opt.chain.burn_in;
    meta["rate_scaling"] = "population beta' = beta * mean_degree / N, gamma' = gamma (approximation)";
    for (const auto& r : rows)
        meta["mean_degree"][r.config_id] = r.mean_degree;
    open_out(ctx.out / "benchmark_meta.json") << meta.dump(2) << '\n';

    std::printf("%-10s %-16s %-10s %-21s\n", "config", "method", "auc", "95% band");
    for (const auto& r : rows) {
        if (r.skipped)
            std::printf("%-10s %-16s %-10s\n", r.config_id.c_str(), r.method.c_str(), "skipped");
        else
            std::printf("%-10s %-16s %-10.4f [%.4f, %.4f]\n", r.config_id.c_str(), r.method.c_str(), r.auc, r.auc_ci_lo, r.auc_ci_hi);
    }
    return 0;
}

// -------------------------------------------------------------- baselines

struct BaselineSetup {
    PopulationRates rates;
    double population;
    double i0;
    double horizon;
};

BaselineSetup baseline_from_config(const Context& ctx)
{
    const json b = ctx.config.value("baseline", json::object());
    BaselineSetup s{{b.value("beta", 0.0), b.value("gamma", 0.0)}, b.value("population", 84.0), b.value("initial_infectious", 1.0),
                    b.value("horizon", 128.0)};
    if (s.rates.beta < 0 || s.rates.gamma < 0)
        throw Error("baseline rates must be nonnegative");
    return s;
}

int cmd_baseline_ode(Context& ctx)
{
    const auto s = baseline_from_config(ctx);
    const double step = ctx.config.value("baseline", json::object()).value("step", 1e-2);
    auto traj = integrate_ode(s.rates, s.population, s.i0, s.horizon, step);
    prepare_output(ctx);
    {
        auto file = open_out(ctx.out / "ode.csv");
        write_ode_trajectory(file, traj);
    }
    print_summary("final_infectious", traj.back().infectious);
    if (s.rates.beta > 0 && s.rates.beta * s.population > s.rates.gamma)
        print_summary("endemic_level", s.population - s.rates.gamma / s.rates.beta);
    return 0;
}

int cmd_baseline_jump(Context& ctx)
{
    const auto s = baseline_from_config(ctx);
    const std::size_t reps = ctx.config.value("baseline", json::object()).value("replicates", std::size_t{1});
    if (reps == 0)
        throw Error("baseline.replicates must be at least 1");
    const auto N = static_cast<std::int64_t>(s.population);
    const auto i0 = static_cast<std::int64_t>(s.i0);
    Rng rng(ctx.seed);
    prepare_output(ctx);
    const auto grid = static_cast<std::size_t>(std::floor(s.horizon));
    std::vector<double> mean(grid + 1, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        auto traj = simulate_jump(s.rates, N - i0, i0, s.horizon, rng);
        if (r == 0) {
            auto file = open_out(ctx.out / "jump.csv");
            write_jump_trajectory(file, traj);
        }
        for (std::size_t t = 0; t <= grid; ++t)
            mean[t] += static_cast<double>(traj.infectious_at(static_cast<double>(t))) / static_cast<double>(reps);
    }
    auto out = open_out(ctx.out / "jump_mean.csv");
    out << "t,S,I\n";
    for (std::size_t t = 0; t <= grid; ++t)
        out << t << ',' << fmt_double(s.population - mean[t]) << ',' << fmt_double(mean[t]) << '\n';
    print_summary("mean_final_infectious", mean.back());
    return 0;
}

// Sets j[section][key] only when the flag was given.
template <class T>
void override_key(json& j, const char* sec, const char* key, const std::optional<T>& v)
{
    if (v)
        (sec ? section(j, sec) : j)[key] = *v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Graph-coupled HMM epidemics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "base random seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--threads", threads, "maximum worker threads");

    // Flag overrides, grouped per subcommand.
    std::optional<double> alpha, beta, gamma, tolerance, population, i0, horizon, step, pop_beta, pop_gamma;
    std::optional<std::size_t> num_steps, num_nodes, iterations, burn_in, chains, sweeps, num_series, replicates;
    std::optional<std::string> proximity, symptoms, granularity, fixture, profile, form;
    std::optional<std::vector<std::string>> methods;

    auto* sim = app.add_subcommand("simulate", "forward-simulate states and symptoms");
    auto* inf = app.add_subcommand("infer", "run the Gibbs sampler on proximity + symptom data");
    auto* orc = app.add_subcommand("oracle-check", "compare Gibbs marginals with exact enumeration");
    auto* ben = app.add_subcommand("benchmark", "synthetic calibration benchmark");
    auto* ode = app.add_subcommand("baseline-ode", "population SIS ODE trajectory");
    auto* jmp = app.add_subcommand("baseline-jump", "population SIS jump-process trajectory");
    for (auto* sc : {sim, inf}) {
        sc->add_option("--proximity", proximity, "proximity CSV (t,u,v)");
        sc->add_option("--num-nodes", num_nodes, "population size");
        sc->add_option("--num-steps", num_steps, "number of timesteps");
    }
    sim->add_option("--alpha", alpha);
    sim->add_option("--beta", beta);
    sim->add_option("--gamma", gamma);
    sim->add_option("--transition-form", form, "exact|linear");
    inf->add_option("--symptoms", symptoms, "symptom CSV (node,t,s0,...)");
    inf->add_option("--symptom-granularity", granularity, "daily|hourly");
    inf->add_option("--iterations", iterations);
    inf->add_option("--burn-in", burn_in);
    inf->add_option("--chains", chains);
    orc->add_option("--fixture", fixture, "tiny-instance JSON");
    orc->add_option("--tolerance", tolerance);
    orc->add_option("--sweeps", sweeps);
    orc->add_option("--num-nodes", num_nodes, "random instance size");
    orc->add_option("--num-steps", num_steps, "random instance length");
    ben->add_option("--methods", methods, "subset of gchmm, ode-sis, jump-sis, neighbor-count")->delimiter(',');
    ben->add_option("--profile", profile, "desk|paper");
    ben->add_option("--num-series", num_series);
    ben->add_option("--iterations", iterations);
    ben->add_option("--burn-in", burn_in);
    for (auto* sc : {ode, jmp}) {
        sc->add_option("--population", population);
        sc->add_option("--initial-infectious", i0);
        sc->add_option("--beta", pop_beta);
        sc->add_option("--gamma", pop_gamma);
        sc->add_option("--horizon", horizon);
    }
    ode->add_option("--step", step);
    jmp->add_option("--replicates", replicates);

    CLI11_PARSE(app, argc, argv);

    try {
        Context ctx;
        if (!config_path.empty()) {
            ctx.config_path = config_path;
            ctx.config = read_file(config_path, [](std::istream& in) { return json::parse(in); });
            if (!ctx.config.is_object())
                throw Error("config must be a JSON object");
        }
        json& j = ctx.config;
        override_key(j, nullptr, "seed", seed);
        override_key(j, nullptr, "out", out);
        override_key(j, nullptr, "threads", threads);
        if (*sim || *inf) {
            override_key(j, "graph", "num_nodes", num_nodes);
            override_key(j, "graph", "num_steps", num_steps);
            if (proximity)
                section(j, "graph")["proximity"] = fs::absolute(*proximity).string();
        }
        override_key(j, "params", "alpha", alpha);
        override_key(j, "params", "beta", beta);
        override_key(j, "params", "gamma", gamma);
        override_key(j, "simulate", "transition_form", form);
        if (symptoms)
            section(j, "infer")["symptoms"] = fs::absolute(*symptoms).string();
        override_key(j, "infer", "symptom_granularity", granularity);
        override_key(j, "infer", "chains", chains);
        if (fixture)
            section(j, "oracle_check")["fixture"] = fs::absolute(*fixture).string();
        override_key(j, "oracle_check", "tolerance", tolerance);
        override_key(j, "oracle_check", "sweeps", sweeps);
        if (*orc && (num_nodes || num_steps)) {
            auto& r = section(section(j, "oracle_check"), "random");
            override_key(r, nullptr, "num_nodes", num_nodes);
            override_key(r, nullptr, "num_steps", num_steps);
        }
        const char* chain_section = *ben ? "benchmark" : "infer";
        override_key(j, chain_section, "iterations", iterations);
        override_key(j, chain_section, "burn_in", burn_in);
        override_key(j, "benchmark", "methods", methods);
        override_key(j, "benchmark", "profile", profile);
        override_key(j, "benchmark", "num_series", num_series);
        override_key(j, "baseline", "population", population);
        override_key(j, "baseline", "initial_infectious", i0);
        override_key(j, "baseline", "beta", pop_beta);
        override_key(j, "baseline", "gamma", pop_gamma);
        override_key(j, "baseline", "horizon", horizon);
        override_key(j, "baseline", "step", step);
        override_key(j, "baseline", "replicates", replicates);

        ctx.seed = j.value("seed", std::uint64_t{1});
        ctx.threads = j.value("threads", std::size_t{1});
        if (ctx.threads == 0)
            ctx.threads = default_threads();
        ctx.out = j.value("out", std::string("out"));

        if (*sim)
            return cmd_simulate(ctx);
        if (*inf)
            return cmd_infer(ctx);
        if (*orc)
            return cmd_oracle_check(ctx);
        if (*ben)
            return cmd_benchmark(ctx);
        if (*ode)
            return cmd_baseline_ode(ctx);
        return cmd_baseline_jump(ctx);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

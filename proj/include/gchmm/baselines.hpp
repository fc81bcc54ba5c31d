#ifndef GCHMM_BASELINES_HPP
#define GCHMM_BASELINES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "error.hpp"
#include "format.hpp"
#include "random.hpp"

namespace gchmm {

// Population-level rates: infection S + I -> 2I at beta * S * I and
// recovery I -> S at gamma * I, in counts per unit time.
struct PopulationRates {
    double beta = 0.0;
    double gamma = 0.0;
};

struct PopulationState {
    double t = 0.0;
    double susceptible = 0.0;
    double infectious = 0.0;
};

inline double ode_rhs(const PopulationRates& r, double population, double infectious)
{
    return r.beta * (population - infectious) * infectious - r.gamma * infectious;
}

// Fixed-step RK4 on dI/dt = beta*S*I - gamma*I with S = N - I, emitting
// one point per step starting at t = 0. The last step is shortened to land
// on the horizon.
inline std::vector<PopulationState> integrate_ode(const PopulationRates& r, double population, double i0, double horizon,
                                                  double step = 1e-2)
{
    if (!(step > 0.0))
        throw Error("ODE step must be positive");
    if (i0 < 0.0 || i0 > population || horizon < 0.0)
        throw Error("ODE initial state must satisfy 0 <= I0 <= N and horizon >= 0");
    std::vector<PopulationState> out;
    out.reserve(static_cast<std::size_t>(horizon / step) + 2);
    double i = i0;
    out.push_back({0.0, population - i, i});
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) {
        const double t0 = static_cast<double>(k) * step;
        const double h = std::min(step, horizon - t0);
        const double k1 = ode_rhs(r, population, i);
        const double k2 = ode_rhs(r, population, i + 0.5 * h * k1);
        const double k3 = ode_rhs(r, population, i + 0.5 * h * k2);
        const double k4 = ode_rhs(r, population, i + h * k3);
        i += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        i = std::clamp(i, 0.0, population);
        out.push_back({t0 + h, population - i, i});
    }
    return out;
}

// Linear interpolation of an ODE trajectory at time t.
inline double ode_infectious_at(const std::vector<PopulationState>& traj, double t)
{
    if (traj.empty())
        throw Error("empty trajectory");
    if (t <= traj.front().t)
        return traj.front().infectious;
    if (t >= traj.back().t)
        return traj.back().infectious;
    auto it = std::lower_bound(traj.begin(), traj.end(), t, [](const PopulationState& s, double v) { return s.t < v; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.infectious + w * (hi.infectious - lo.infectious);
}

struct JumpEvent {
    double t;
    std::int64_t susceptible;
    std::int64_t infectious;
};

struct JumpTrajectory {
    std::int64_t s0 = 0;
    std::int64_t i0 = 0;
    std::vector<JumpEvent> events; // state after each event

    std::int64_t infectious_at(double t) const
    {
        auto it = std::upper_bound(events.begin(), events.end(), t, [](double v, const JumpEvent& e) { return v < e.t; });
        return it == events.begin() ? i0 : (it - 1)->infectious;
    }
};

inline double jump_total_rate(const PopulationRates& r, std::int64_t s, std::int64_t i)
{
    return r.beta * static_cast<double>(s) * static_cast<double>(i) + r.gamma * static_cast<double>(i);
}

// Next-event simulation of the stochastic SIS jump process up to the
// horizon. I = 0 is absorbing.
inline JumpTrajectory simulate_jump(const PopulationRates& r, std::int64_t s0, std::int64_t i0, double horizon, Rng& rng)
{
    if (s0 < 0 || i0 < 0)
        throw Error("jump process counts must be nonnegative");
    JumpTrajectory traj{s0, i0, {}};
    std::int64_t s = s0, i = i0;
    double t = 0.0;
    std::exponential_distribution<double> wait(1.0);
    while (i > 0) {
        const double infect = r.beta * static_cast<double>(s) * static_cast<double>(i);
        const double total = infect + r.gamma * static_cast<double>(i);
        if (!(total > 0.0))
            break;
        t += wait(rng) / total;
        if (t > horizon)
            break;
        if (uniform01(rng) * total < infect) {
            --s;
            ++i;
        } else {
            ++s;
            --i;
        }
        traj.events.push_back({t, s, i});
    }
    return traj;
}

inline void write_ode_trajectory(std::ostream& out, const std::vector<PopulationState>& traj)
{
    out << "t,S,I\n";
    for (const auto& p : traj)
        out << fmt_double(p.t) << ',' << fmt_double(p.susceptible) << ',' << fmt_double(p.infectious) << '\n';
}

inline void write_jump_trajectory(std::ostream& out, const JumpTrajectory& traj)
{
    out << "t,S,I\n";
    out << "0," << traj.s0 << ',' << traj.i0 << '\n';
    for (const auto& e : traj.events)
        out << fmt_double(e.t) << ',' << e.susceptible << ',' << e.infectious << '\n';
}

// Infectious-contact counts yesterday, today and tomorrow.
using ContactFeatures = std::array<double, 3>;

struct LogisticModel {
    // bias, then one weight per feature, on the raw feature scale.
    std::array<double, 4> weights{0.0, 0.0, 0.0, 0.0};

    double score(const ContactFeatures& f) const
    {
        const double z = weights[0] + weights[1] * f[0] + weights[2] * f[1] + weights[3] * f[2];
        return 1.0 / (1.0 + std::exp(-z));
    }
};

struct LogisticFit {
    LogisticModel model;
    bool degenerate = false; // single-class training set
};

struct LogisticOptions {
    std::size_t iterations = 3000;
    double learning_rate = 1.0;
    double l2 = 1e-4;
};

// Full-batch gradient ascent on the mean log-likelihood. Features are
// standardized internally; weights are reported on the raw scale.
inline LogisticFit fit_logistic(const std::vector<ContactFeatures>& x, const std::vector<int>& y, const LogisticOptions& opt = {})
{
    if (x.size() != y.size() || x.empty())
        throw Error("logistic fit needs equally many (nonzero) features and labels");
    const double n = static_cast<double>(x.size());
    std::size_t positives = 0;
    for (int v : y)
        positives += v == 1;
    LogisticFit fit;
    if (positives == 0 || positives == x.size()) {
        fit.degenerate = true;
        const double rate = static_cast<double>(positives) / n;
        fit.model.weights[0] = rate == 0.0 ? -30.0 : 30.0;
        return fit;
    }
    std::array<double, 3> mean{}, sd{};
    for (const auto& f : x)
        for (int j = 0; j < 3; ++j)
            mean[j] += f[j] / n;
    for (const auto& f : x)
        for (int j = 0; j < 3; ++j)
            sd[j] += (f[j] - mean[j]) * (f[j] - mean[j]) / n;
    for (auto& v : sd)
        v = v > 0.0 ? std::sqrt(v) : 1.0;

    std::array<double, 4> w{};
    std::array<double, 4> grad{};
    for (std::size_t it = 0; it < opt.iterations; ++it) {
        grad.fill(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            double z = w[0];
            std::array<double, 3> zs;
            for (int j = 0; j < 3; ++j) {
                zs[j] = (x[i][j] - mean[j]) / sd[j];
                z += w[j + 1] * zs[j];
            }
            const double resid = static_cast<double>(y[i]) - 1.0 / (1.0 + std::exp(-z));
            grad[0] += resid;
            for (int j = 0; j < 3; ++j)
                grad[j + 1] += resid * zs[j];
        }
        for (int j = 0; j < 4; ++j)
            w[j] += opt.learning_rate * (grad[j] / n - (j > 0 ? opt.l2 * w[j] : 0.0));
    }
    fit.model.weights[0] = w[0];
    for (int j = 0; j < 3; ++j) {
        fit.model.weights[j + 1] = w[j + 1] / sd[j];
        fit.model.weights[0] -= w[j + 1] * mean[j] / sd[j];
    }
    return fit;
}

struct ClassifierScores {
    std::vector<double> scores;
    bool degenerate = false;
};

// Fits on the fully labeled training rows and scores the test rows; higher
// means more likely infectious. A single-class training set yields constant
// scores and sets `degenerate`.
inline ClassifierScores neighbor_count_classifier(const std::vector<ContactFeatures>& train_x, const std::vector<int>& train_y,
                                                  const std::vector<ContactFeatures>& test_x, const LogisticOptions& opt = {})
{
    auto fit = fit_logistic(train_x, train_y, opt);
    ClassifierScores out;
    out.degenerate = fit.degenerate;
    out.scores.reserve(test_x.size());
    for (const auto& f : test_x)
        out.scores.push_back(fit.model.score(f));
    return out;
}

} // namespace gchmm

#endif

#ifndef GCHMM_MATRICES_HPP
#define GCHMM_MATRICES_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dynamic_graph.hpp"
#include "error.hpp"
#include "format.hpp"

namespace gchmm {

using State = std::uint8_t;

// N x T matrix of latent state labels in {0, ..., M-1}. Stored column-major
// in time (all nodes of step t are contiguous) to match the sampler's
// t-major sweep order.
class StateMatrix {
public:
    StateMatrix() = default;
    StateMatrix(std::size_t num_nodes, std::size_t num_steps, std::size_t num_states = 2)
        : num_nodes_(num_nodes), num_steps_(num_steps), num_states_(num_states), values_(num_nodes * num_steps, 0)
    {
        if (num_states_ < 2 || num_states_ > 255)
            throw Error("state space must have between 2 and 255 states");
    }

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_steps() const { return num_steps_; }
    std::size_t num_states() const { return num_states_; }

    State operator()(NodeId n, Step t) const { return values_[index(n, t)]; }

    State at(NodeId n, Step t) const
    {
        check(n, t);
        return values_[index(n, t)];
    }

    void set(NodeId n, Step t, State x)
    {
        check(n, t);
        if (x >= num_states_)
            throw Error("state " + std::to_string(x) + " outside state space of size " + std::to_string(num_states_));
        values_[index(n, t)] = x;
    }

    // Unchecked write for inner loops.
    void put(NodeId n, Step t, State x) { values_[index(n, t)] = x; }

    std::span<const State> column(Step t) const { return {values_.data() + static_cast<std::size_t>(t) * num_nodes_, num_nodes_}; }
    std::span<State> column(Step t) { return {values_.data() + static_cast<std::size_t>(t) * num_nodes_, num_nodes_}; }

    const std::vector<State>& raw() const { return values_; }

    bool matches(const DynamicGraph& g) const { return g.num_nodes() == num_nodes_ && g.num_steps() == num_steps_; }

    friend bool operator==(const StateMatrix&, const StateMatrix&) = default;

private:
    std::size_t index(NodeId n, Step t) const { return static_cast<std::size_t>(t) * num_nodes_ + n; }
    void check(NodeId n, Step t) const
    {
        if (n >= num_nodes_ || t >= num_steps_)
            throw std::out_of_range("state index (" + std::to_string(n) + "," + std::to_string(t) + ") out of range");
    }

    std::size_t num_nodes_ = 0;
    std::size_t num_steps_ = 0;
    std::size_t num_states_ = 2;
    std::vector<State> values_;
};

// N x T x S ternary symptom reports.
class ObservationMatrix {
public:
    static constexpr std::int8_t kAbsent = 0;
    static constexpr std::int8_t kPresent = 1;
    static constexpr std::int8_t kMissing = -1;

    ObservationMatrix() = default;
    ObservationMatrix(std::size_t num_nodes, std::size_t num_steps, std::size_t num_symptoms)
        : num_nodes_(num_nodes), num_steps_(num_steps), num_symptoms_(num_symptoms),
          values_(num_nodes * num_steps * num_symptoms, kMissing)
    {
        if (num_symptoms_ == 0)
            throw Error("observation matrix needs at least one symptom");
    }

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_steps() const { return num_steps_; }
    std::size_t num_symptoms() const { return num_symptoms_; }

    std::int8_t operator()(NodeId n, Step t, std::size_t s) const { return values_[index(n, t) + s]; }

    std::int8_t at(NodeId n, Step t, std::size_t s) const
    {
        check(n, t, s);
        return values_[index(n, t) + s];
    }

    void set(NodeId n, Step t, std::size_t s, std::int8_t v)
    {
        check(n, t, s);
        if (v != kAbsent && v != kPresent && v != kMissing)
            throw Error("observation value must be 0, 1 or missing");
        values_[index(n, t) + s] = v;
    }

    // All S reports of one node-step.
    std::span<const std::int8_t> site(NodeId n, Step t) const { return {values_.data() + index(n, t), num_symptoms_}; }

    bool missing(NodeId n, Step t, std::size_t s) const { return (*this)(n, t, s) == kMissing; }

    bool matches(const StateMatrix& x) const { return x.num_nodes() == num_nodes_ && x.num_steps() == num_steps_; }

    friend bool operator==(const ObservationMatrix&, const ObservationMatrix&) = default;

private:
    std::size_t index(NodeId n, Step t) const
    {
        return (static_cast<std::size_t>(t) * num_nodes_ + n) * num_symptoms_;
    }
    void check(NodeId n, Step t, std::size_t s) const
    {
        if (n >= num_nodes_ || t >= num_steps_ || s >= num_symptoms_)
            throw std::out_of_range("observation index out of range");
    }

    std::size_t num_nodes_ = 0;
    std::size_t num_steps_ = 0;
    std::size_t num_symptoms_ = 0;
    std::vector<std::int8_t> values_;
};

// States CSV: `node,t,value`, node-major.
inline void write_states(std::ostream& out, const StateMatrix& x)
{
    out << "node,t,value\n";
    for (NodeId n = 0; n < x.num_nodes(); ++n)
        for (Step t = 0; t < x.num_steps(); ++t)
            out << n << ',' << t << ',' << static_cast<int>(x(n, t)) << '\n';
}

// Entries not listed in the file stay 0.
inline StateMatrix read_states(std::istream& in, std::size_t num_nodes, std::size_t num_steps, std::size_t num_states = 2)
{
    StateMatrix x(num_nodes, num_steps, num_states);
    std::vector<bool> seen(num_nodes * num_steps, false);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = strip_line(raw);
        if (line.empty())
            continue;
        auto f = split_csv_line(line);
        if (line_no == 1) {
            if (f.size() == 3 && f[0] == "node" && f[1] == "t" && f[2] == "value")
                continue;
            throw ParseError("expected header 'node,t,value'", line_no);
        }
        if (f.size() != 3)
            throw ParseError("expected 3 fields", line_no);
        auto n = parse_int(f[0], line_no);
        auto t = parse_int(f[1], line_no);
        auto v = parse_int(f[2], line_no);
        if (n < 0 || t < 0 || static_cast<std::size_t>(n) >= num_nodes || static_cast<std::size_t>(t) >= num_steps)
            throw ParseError("state index out of range", line_no);
        if (v < 0 || static_cast<std::size_t>(v) >= num_states)
            throw ParseError("state value out of range", line_no);
        auto idx = static_cast<std::size_t>(t) * num_nodes + static_cast<std::size_t>(n);
        if (seen[idx])
            throw ParseError("duplicate state entry", line_no);
        seen[idx] = true;
        x.put(static_cast<NodeId>(n), static_cast<Step>(t), static_cast<State>(v));
    }
    return x;
}

// Observations CSV: `node,t,s0,...,s{S-1}` with `NA` for a missing report.
inline void write_observations(std::ostream& out, const ObservationMatrix& y)
{
    out << "node,t";
    for (std::size_t s = 0; s < y.num_symptoms(); ++s)
        out << ",s" << s;
    out << '\n';
    for (NodeId n = 0; n < y.num_nodes(); ++n)
        for (Step t = 0; t < y.num_steps(); ++t) {
            out << n << ',' << t;
            for (std::size_t s = 0; s < y.num_symptoms(); ++s) {
                auto v = y(n, t, s);
                out << ',';
                if (v == ObservationMatrix::kMissing)
                    out << "NA";
                else
                    out << static_cast<int>(v);
            }
            out << '\n';
        }
}

// Reads observations whose `t` column is in units of `steps_per_row`
// timesteps: with steps_per_row = 24 a daily report is replicated across
// that day's 24 hourly slots. Node-steps without a row are missing.
inline ObservationMatrix read_observations(std::istream& in, std::size_t num_nodes, std::size_t num_steps,
                                           std::size_t steps_per_row = 1)
{
    if (steps_per_row == 0)
        throw Error("steps_per_row must be positive");
    std::string raw;
    std::size_t line_no = 0;
    std::size_t num_symptoms = 0;
    ObservationMatrix y;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = strip_line(raw);
        if (line.empty())
            continue;
        auto f = split_csv_line(line);
        if (num_symptoms == 0) {
            if (f.size() < 3 || f[0] != "node" || f[1] != "t")
                throw ParseError("expected header 'node,t,s0,...'", line_no);
            num_symptoms = f.size() - 2;
            y = ObservationMatrix(num_nodes, num_steps, num_symptoms);
            continue;
        }
        if (f.size() != num_symptoms + 2)
            throw ParseError("expected " + std::to_string(num_symptoms + 2) + " fields", line_no);
        auto n = parse_int(f[0], line_no);
        auto t = parse_int(f[1], line_no);
        if (n < 0 || static_cast<std::size_t>(n) >= num_nodes)
            throw ParseError("node id out of range", line_no);
        if (t < 0 || static_cast<std::size_t>(t) * steps_per_row >= num_steps)
            throw ParseError("timestep out of range", line_no);
        std::vector<std::int8_t> vals(num_symptoms);
        for (std::size_t s = 0; s < num_symptoms; ++s) {
            auto field = f[s + 2];
            if (field == "NA")
                vals[s] = ObservationMatrix::kMissing;
            else {
                auto v = parse_int(field, line_no);
                if (v != 0 && v != 1)
                    throw ParseError("symptom value must be 0, 1 or NA", line_no);
                vals[s] = static_cast<std::int8_t>(v);
            }
        }
        const std::size_t first = static_cast<std::size_t>(t) * steps_per_row;
        for (std::size_t step = first; step < std::min(num_steps, first + steps_per_row); ++step)
            for (std::size_t s = 0; s < num_symptoms; ++s)
                y.set(static_cast<NodeId>(n), static_cast<Step>(step), s, vals[s]);
    }
    if (num_symptoms == 0)
        throw ParseError("observation file has no header", 0);
    return y;
}

template <class Reader>
auto read_file(const std::string& path, Reader&& reader)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    return reader(in);
}

} // namespace gchmm

#endif

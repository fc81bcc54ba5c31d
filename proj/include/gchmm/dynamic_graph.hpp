#ifndef GCHMM_DYNAMIC_GRAPH_HPP
#define GCHMM_DYNAMIC_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "format.hpp"

namespace gchmm {

using NodeId = std::uint32_t;
using Step = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A fixed node set with one undirected, unweighted edge set per timestep.
// Immutable after construction. Neighbor lists are stored per step in CSR
// form, sorted by ascending node id.
class DynamicGraph {
public:
    DynamicGraph() = default;

    // Edges may be given in any orientation and may repeat; they are
    // canonicalized to u < v and deduplicated per step.
    DynamicGraph(std::size_t num_nodes, std::size_t num_steps, std::vector<std::vector<Edge>> edges)
        : num_nodes_(num_nodes), num_steps_(num_steps), edges_(std::move(edges))
    {
        if (num_nodes_ == 0 || num_steps_ == 0)
            throw Error("dynamic graph needs at least one node and one timestep");
        if (edges_.size() > num_steps_)
            throw Error("edge list has more timesteps than the graph");
        edges_.resize(num_steps_);
        for (std::size_t t = 0; t < num_steps_; ++t) {
            auto& es = edges_[t];
            for (auto& e : es) {
                if (e.u >= num_nodes_ || e.v >= num_nodes_)
                    throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") at step " +
                                std::to_string(t) + " references a node >= " + std::to_string(num_nodes_));
                if (e.u == e.v)
                    throw Error("self-loop on node " + std::to_string(e.u) + " at step " + std::to_string(t));
                if (e.u > e.v)
                    std::swap(e.u, e.v);
            }
            std::sort(es.begin(), es.end());
            es.erase(std::unique(es.begin(), es.end()), es.end());
        }
        build_adjacency();
    }

    std::size_t num_nodes() const { return num_nodes_; }
    std::size_t num_steps() const { return num_steps_; }

    std::span<const Edge> edges(Step t) const
    {
        check_step(t);
        return edges_[t];
    }

    std::span<const NodeId> neighbors(NodeId n, Step t) const
    {
        check_node(n);
        check_step(t);
        return neighbors_unchecked(n, t);
    }

    // No bounds checks; for sampler inner loops.
    std::span<const NodeId> neighbors_unchecked(NodeId n, Step t) const
    {
        const std::size_t base = static_cast<std::size_t>(t) * (num_nodes_ + 1) + n;
        return {adjacency_.data() + offsets_[base], adjacency_.data() + offsets_[base + 1]};
    }

    std::size_t degree(NodeId n, Step t) const { return neighbors(n, t).size(); }

    std::size_t max_degree() const { return max_degree_; }

    std::size_t num_edges() const
    {
        std::size_t total = 0;
        for (const auto& es : edges_)
            total += es.size();
        return total;
    }

    // Mean number of neighbors per node-step.
    double mean_degree() const
    {
        return 2.0 * static_cast<double>(num_edges()) / static_cast<double>(num_nodes_ * num_steps_);
    }

    friend bool operator==(const DynamicGraph& a, const DynamicGraph& b)
    {
        return a.num_nodes_ == b.num_nodes_ && a.num_steps_ == b.num_steps_ && a.edges_ == b.edges_;
    }

private:
    void check_node(NodeId n) const
    {
        if (n >= num_nodes_)
            throw std::out_of_range("node " + std::to_string(n) + " out of range");
    }
    void check_step(Step t) const
    {
        if (t >= num_steps_)
            throw std::out_of_range("timestep " + std::to_string(t) + " out of range");
    }

    void build_adjacency()
    {
        offsets_.assign(num_steps_ * (num_nodes_ + 1), 0);
        adjacency_.clear();
        adjacency_.reserve(2 * num_edges());
        std::vector<std::vector<NodeId>> lists(num_nodes_);
        max_degree_ = 0;
        for (std::size_t t = 0; t < num_steps_; ++t) {
            for (auto& l : lists)
                l.clear();
            for (const auto& e : edges_[t]) {
                lists[e.u].push_back(e.v);
                lists[e.v].push_back(e.u);
            }
            const std::size_t base = t * (num_nodes_ + 1);
            for (std::size_t n = 0; n < num_nodes_; ++n) {
                offsets_[base + n] = static_cast<std::uint32_t>(adjacency_.size());
                std::sort(lists[n].begin(), lists[n].end());
                adjacency_.insert(adjacency_.end(), lists[n].begin(), lists[n].end());
                max_degree_ = std::max(max_degree_, lists[n].size());
            }
            offsets_[base + num_nodes_] = static_cast<std::uint32_t>(adjacency_.size());
        }
    }

    std::size_t num_nodes_ = 0;
    std::size_t num_steps_ = 0;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::uint32_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::size_t max_degree_ = 0;
};

// Proximity CSV: header `t,u,v`, one contact per row.
inline DynamicGraph read_proximity(std::istream& in, std::size_t num_nodes, std::size_t num_steps)
{
    std::vector<std::vector<Edge>> edges(num_steps);
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = strip_line(raw);
        if (line.empty())
            continue;
        if (!header_seen) {
            header_seen = true;
            auto h = split_csv_line(line);
            if (h.size() == 3 && h[0] == "t" && h[1] == "u" && h[2] == "v")
                continue;
            throw ParseError("expected header 't,u,v'", line_no);
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line_no);
        auto t = parse_int(fields[0], line_no);
        auto u = parse_int(fields[1], line_no);
        auto v = parse_int(fields[2], line_no);
        if (t < 0 || static_cast<std::size_t>(t) >= num_steps)
            throw ParseError("timestep " + std::to_string(t) + " out of range [0," + std::to_string(num_steps) + ")", line_no);
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= num_nodes || static_cast<std::size_t>(v) >= num_nodes)
            throw ParseError("node id out of range [0," + std::to_string(num_nodes) + ")", line_no);
        if (u == v)
            throw ParseError("self-loop on node " + std::to_string(u), line_no);
        edges[static_cast<std::size_t>(t)].push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    return DynamicGraph(num_nodes, num_steps, std::move(edges));
}

inline DynamicGraph load_proximity(const std::string& path, std::size_t num_nodes, std::size_t num_steps)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open proximity file " + path);
    return read_proximity(in, num_nodes, num_steps);
}

// Canonical order: t, then u, then v.
inline void write_proximity(std::ostream& out, const DynamicGraph& g)
{
    out << "t,u,v\n";
    for (Step t = 0; t < g.num_steps(); ++t)
        for (const auto& e : g.edges(t))
            out << t << ',' << e.u << ',' << e.v << '\n';
}

inline void dump_proximity(const std::string& path, const DynamicGraph& g)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write proximity file " + path);
    write_proximity(out, g);
}

} // namespace gchmm

#endif

#ifndef GCHMM_HEATMAP_HPP
#define GCHMM_HEATMAP_HPP

#include <algorithm>
#include <ostream>
#include <vector>

#include "error.hpp"
#include "format.hpp"
#include "matrices.hpp"

namespace gchmm {

struct HeatmapRow {
    NodeId node;
    std::size_t day;
    double p_infectious;       // mean of the day's per-step marginals
    std::size_t symptom_count; // symptoms reported present in any slot of the day
    bool missing;              // no report at all that day
};

// Aggregates per-step marginals (indexed t * N + n) to days of
// `steps_per_day` steps; a trailing partial day is averaged over the steps
// it has.
inline std::vector<HeatmapRow> heatmap_rows(const std::vector<double>& marginals, const ObservationMatrix& y, std::size_t steps_per_day = 1)
{
    const std::size_t N = y.num_nodes(), T = y.num_steps(), S = y.num_symptoms();
    if (marginals.size() != N * T)
        throw Error("marginals do not match the observation matrix");
    if (steps_per_day == 0)
        throw Error("steps_per_day must be positive");
    const std::size_t days = (T + steps_per_day - 1) / steps_per_day;
    std::vector<HeatmapRow> rows;
    rows.reserve(N * days);
    for (NodeId n = 0; n < N; ++n)
        for (std::size_t d = 0; d < days; ++d) {
            const std::size_t first = d * steps_per_day, last = std::min(T, first + steps_per_day);
            double sum = 0.0;
            bool any_report = false;
            std::vector<bool> present(S, false);
            for (std::size_t t = first; t < last; ++t) {
                sum += marginals[t * N + n];
                auto site = y.site(n, static_cast<Step>(t));
                for (std::size_t s = 0; s < S; ++s) {
                    if (site[s] != ObservationMatrix::kMissing)
                        any_report = true;
                    if (site[s] == ObservationMatrix::kPresent)
                        present[s] = true;
                }
            }
            std::size_t count = 0;
            for (bool b : present)
                count += b;
            rows.push_back({n, d, sum / static_cast<double>(last - first), count, !any_report});
        }
    return rows;
}

inline void export_heatmap(std::ostream& out, const std::vector<double>& marginals, const ObservationMatrix& y, std::size_t steps_per_day = 1)
{
    out << "node,day,p_infectious,symptom_count,missing\n";
    for (const auto& r : heatmap_rows(marginals, y, steps_per_day))
        out << r.node << ',' << r.day << ',' << fmt_double(r.p_infectious) << ',' << r.symptom_count << ',' << (r.missing ? 1 : 0) << '\n';
}

inline void write_marginals(std::ostream& out, const std::vector<double>& marginals, std::size_t num_nodes, std::size_t num_steps)
{
    out << "node,t,p_infectious\n";
    for (NodeId n = 0; n < num_nodes; ++n)
        for (Step t = 0; t < num_steps; ++t)
            out << n << ',' << t << ',' << fmt_double(marginals[static_cast<std::size_t>(t) * num_nodes + n]) << '\n';
}

} // namespace gchmm

#endif

#ifndef GCHMM_ROC_HPP
#define GCHMM_ROC_HPP

#include <algorithm>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

#include "error.hpp"
#include "format.hpp"

namespace gchmm {

struct RocPoint {
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points; // (0,0) ... (1,1)
    double auc = 0.0;
};

inline void count_classes(const std::vector<int>& labels, std::size_t& pos, std::size_t& neg)
{
    pos = neg = 0;
    for (int l : labels)
        (l ? pos : neg) += 1;
    if (pos == 0 || neg == 0)
        throw Error("ROC needs at least one positive and one negative label");
}

// Threshold sweep over distinct scores from high to low; equal scores move
// together in one step. AUC by the trapezoidal rule.
inline RocCurve roc(const std::vector<double>& scores, const std::vector<int>& labels)
{
    if (scores.size() != labels.size())
        throw Error("scores and labels differ in length");
    std::size_t pos, neg;
    count_classes(labels, pos, neg);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    RocCurve c;
    c.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] ? tp : fp) += 1;
            ++i;
        }
        RocPoint p{static_cast<double>(fp) / static_cast<double>(neg), static_cast<double>(tp) / static_cast<double>(pos)};
        const auto& prev = c.points.back();
        c.auc += (p.fpr - prev.fpr) * (p.tpr + prev.tpr) / 2.0;
        c.points.push_back(p);
    }
    return c;
}

// Mann-Whitney formulation: P(score of a positive > score of a negative),
// ties counted as one half, via midranks.
inline double auc_mann_whitney(const std::vector<double>& scores, const std::vector<int>& labels)
{
    std::size_t pos, neg;
    count_classes(labels, pos, neg);
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]])
            ++j;
        const double midrank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]])
                rank_sum += midrank;
        i = j;
    }
    const double p = static_cast<double>(pos), n = static_cast<double>(neg);
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

inline void write_roc(std::ostream& out, const RocCurve& c)
{
    out << "fpr,tpr\n";
    for (const auto& p : c.points)
        out << fmt_double(p.fpr) << ',' << fmt_double(p.tpr) << '\n';
}

} // namespace gchmm

#endif

#include "synthbench/classification_metrics.hpp"

#include <algorithm>
#include <numeric>

#include "synthbench/error.hpp"

namespace synthbench {

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
    if (scores.empty()) throw DataError("auc undefined on empty input");
    const std::size_t n = scores.size();
    const std::size_t n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("auc undefined with a single class");

    // Rank-sum with average ranks for ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // ranks are 1-based
        for (std::size_t t = i; t <= j; ++t) {
            if (labels[order[t]] == 1) rank_sum_pos += avg_rank;
        }
        i = j + 1;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double accuracy(const std::vector<double>& scores, const std::vector<int>& labels, double threshold) {
    if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
    if (scores.empty()) throw DataError("accuracy undefined on empty input");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int pred = scores[i] > threshold ? 1 : 0;
        if (pred == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double f1_score(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size()) throw DataError("prediction and truth differ in length");
    if (predicted.empty()) throw DataError("f1 undefined on empty input");
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == 1 && truth[i] == 1) ++tp;
        else if (predicted[i] == 1 && truth[i] == 0) ++fp;
        else if (predicted[i] == 0 && truth[i] == 1) ++fn;
    }
    const std::uint64_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace synthbench

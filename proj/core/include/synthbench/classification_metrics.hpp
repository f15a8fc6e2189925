#pragma once

#include <vector>

namespace synthbench {

// Mann-Whitney AUC: probability a random positive outscores a random
// negative, ties counted 1/2. Requires both classes present.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Fraction of correct predictions at the threshold; scores exactly at the
// threshold classify as 0.
double accuracy(const std::vector<double>& scores, const std::vector<int>& labels, double threshold = 0.5);

// 2PR/(P+R); defined as 0 when there are no predicted and no true positives.
double f1_score(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace synthbench

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mminet/dataset.hpp"
#include "mminet/svm.hpp"
#include "mminet/types.hpp"

namespace mminet {

// A total order over the original feature indices, best first. scores stay
// aligned to original indices; for score-based methods the order follows
// descending scores with ties broken toward the lower index.
struct FeatureRanking {
    std::vector<Index> order;
    Vector scores;
    std::string method;

    std::vector<Index> top(Index k) const {
        return {order.begin(), order.begin() + k};
    }
};

// score_j = sum_c n_c (mu_cj - mu_j)^2 / sum_c n_c var_cj with population
// within-class variances. Zero within-class spread with nonzero separation
// scores +inf and ranks first; a globally constant feature scores 0.
FeatureRanking fisher_score(const Dataset& train);

// Greedy minimum-redundancy maximum-relevance ranking on equal-frequency
// binned features (difference form). Plug-in mutual information from joint
// histogram counts, natural log. A feature with fewer distinct values than
// bins keeps one bin per distinct value.
FeatureRanking mrmr_rank(const Dataset& train, int bins = 10);

// Recursive feature elimination around a linear SVM: repeatedly drop the
// ceil(chunk_fraction * surviving) features with the smallest sum of squared
// one-vs-rest weights (at least one, never crossing target_k). Ranking is
// the reverse elimination order with survivors ordered by final criterion.
FeatureRanking svm_rfe(const Dataset& train, Index target_k,
                       double chunk_fraction = 0.1, const SvmParams& params = {},
                       std::uint64_t seed = 0);

// Column subset of a feature matrix in ranking order (helper for selection).
Matrix select_columns(const Eigen::Ref<const Matrix>& X,
                      const std::vector<Index>& columns);

}  // namespace mminet

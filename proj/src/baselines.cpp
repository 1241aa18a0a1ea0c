#include "mminet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "mminet/errors.hpp"

namespace mminet {

namespace {

// Descending by score, ties toward the lower index.
std::vector<Index> order_by_score(const Vector& scores) {
    std::vector<Index> order(static_cast<size_t>(scores.size()));
    for (Index j = 0; j < scores.size(); ++j) order[static_cast<size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

}  // namespace

Matrix select_columns(const Eigen::Ref<const Matrix>& X,
                      const std::vector<Index>& columns) {
    Matrix out(X.rows(), static_cast<Index>(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j)
        out.col(static_cast<Index>(j)) = X.col(columns[j]);
    return out;
}

FeatureRanking fisher_score(const Dataset& train) {
    if (train.class_count < 2)
        throw DataError("fisher_score: need at least 2 classes");
    const auto by_class = train.class_indices();
    for (int c = 0; c < train.class_count; ++c)
        if (by_class[static_cast<size_t>(c)].size() < 2)
            throw DataError("fisher_score: class " + std::to_string(c) +
                            " has fewer than 2 samples");

    const Index d = train.dim();
    FeatureRanking ranking;
    ranking.method = "fisher";
    ranking.scores.resize(d);

    const Vector overall_mean = train.features.colwise().mean();
    for (Index j = 0; j < d; ++j) {
        double between = 0.0;
        double within = 0.0;
        for (int c = 0; c < train.class_count; ++c) {
            const auto& idx = by_class[static_cast<size_t>(c)];
            const double n_c = static_cast<double>(idx.size());
            double mu = 0.0;
            for (Index i : idx) mu += train.features(i, j);
            mu /= n_c;
            double var = 0.0;
            for (Index i : idx) {
                const double dev = train.features(i, j) - mu;
                var += dev * dev;
            }
            between += n_c * (mu - overall_mean[j]) * (mu - overall_mean[j]);
            within += var;  // n_c * population variance
        }
        if (within == 0.0)
            ranking.scores[j] = between > 0.0
                                    ? std::numeric_limits<double>::infinity()
                                    : 0.0;
        else
            ranking.scores[j] = between / within;
    }
    ranking.order = order_by_score(ranking.scores);
    return ranking;
}

namespace {

// Equal-frequency binning; features with fewer distinct values than bins get
// one bin per distinct value.
std::vector<int> discretize(const Eigen::Ref<const Vector>& values, int bins) {
    const Index n = values.size();
    std::vector<double> sorted(values.data(), values.data() + n);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> out(static_cast<size_t>(n));
    if (static_cast<int>(distinct.size()) < bins) {
        for (Index i = 0; i < n; ++i) {
            const auto it = std::lower_bound(distinct.begin(), distinct.end(), values[i]);
            out[static_cast<size_t>(i)] = static_cast<int>(it - distinct.begin());
        }
        return out;
    }

    std::vector<double> edges;
    for (int b = 1; b < bins; ++b)
        edges.push_back(sorted[static_cast<size_t>(
            static_cast<Index>(b) * n / bins)]);
    for (Index i = 0; i < n; ++i) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), values[i]);
        out[static_cast<size_t>(i)] = static_cast<int>(it - edges.begin());
    }
    return out;
}

// Plug-in mutual information over joint histogram counts, natural log.
double plugin_mi(const std::vector<int>& a, int a_card, const std::vector<int>& b,
                 int b_card) {
    const size_t n = a.size();
    std::vector<double> joint(static_cast<size_t>(a_card) * static_cast<size_t>(b_card), 0.0);
    std::vector<double> pa(static_cast<size_t>(a_card), 0.0);
    std::vector<double> pb(static_cast<size_t>(b_card), 0.0);
    for (size_t i = 0; i < n; ++i) {
        joint[static_cast<size_t>(a[i]) * static_cast<size_t>(b_card) + static_cast<size_t>(b[i])] += 1.0;
        pa[static_cast<size_t>(a[i])] += 1.0;
        pb[static_cast<size_t>(b[i])] += 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double mi = 0.0;
    for (int i = 0; i < a_card; ++i) {
        if (pa[static_cast<size_t>(i)] == 0.0) continue;
        for (int j = 0; j < b_card; ++j) {
            const double c = joint[static_cast<size_t>(i) * static_cast<size_t>(b_card) + static_cast<size_t>(j)];
            if (c == 0.0) continue;
            mi += c * inv_n *
                  std::log(c * static_cast<double>(n) /
                           (pa[static_cast<size_t>(i)] * pb[static_cast<size_t>(j)]));
        }
    }
    return std::max(0.0, mi);
}

}  // namespace

FeatureRanking mrmr_rank(const Dataset& train, int bins) {
    if (bins < 2) throw DataError("mrmr_rank: bins must be >= 2");
    const Index d = train.dim();
    const Index n = train.size();

    std::vector<std::vector<int>> binned(static_cast<size_t>(d));
    std::vector<int> cards(static_cast<size_t>(d));
    for (Index j = 0; j < d; ++j) {
        binned[static_cast<size_t>(j)] = discretize(train.features.col(j), bins);
        const auto mx = std::max_element(binned[static_cast<size_t>(j)].begin(),
                                         binned[static_cast<size_t>(j)].end());
        cards[static_cast<size_t>(j)] = *mx + 1;
    }
    std::vector<int> label_vals(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) label_vals[static_cast<size_t>(i)] = train.labels[i];

    Vector relevance(d);
    for (Index j = 0; j < d; ++j)
        relevance[j] = plugin_mi(binned[static_cast<size_t>(j)], cards[static_cast<size_t>(j)],
                                 label_vals, train.class_count);

    FeatureRanking ranking;
    ranking.method = "mrmr";
    ranking.scores.resize(d);
    std::vector<bool> picked(static_cast<size_t>(d), false);
    Vector redundancy_sum = Vector::Zero(d);
    Index last_picked = -1;

    for (Index step = 0; step < d; ++step) {
        Index best = -1;
        double best_obj = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < d; ++j) {
            if (picked[static_cast<size_t>(j)]) continue;
            if (last_picked >= 0)
                redundancy_sum[j] += plugin_mi(
                    binned[static_cast<size_t>(j)], cards[static_cast<size_t>(j)],
                    binned[static_cast<size_t>(last_picked)], cards[static_cast<size_t>(last_picked)]);
            const double obj =
                step == 0 ? relevance[j]
                          : relevance[j] - redundancy_sum[j] / static_cast<double>(step);
            if (obj > best_obj) {
                best_obj = obj;
                best = j;
            }
        }
        picked[static_cast<size_t>(best)] = true;
        ranking.order.push_back(best);
        ranking.scores[best] = best_obj;
        last_picked = best;
    }
    return ranking;
}

FeatureRanking svm_rfe(const Dataset& train, Index target_k, double chunk_fraction,
                       const SvmParams& params, std::uint64_t seed) {
    const Index d = train.dim();
    if (target_k < 1 || target_k > d)
        throw DataError("svm_rfe: target_k must be in [1, d_x]");
    if (!(chunk_fraction > 0.0 && chunk_fraction <= 1.0))
        throw DataError("svm_rfe: chunk_fraction must be in (0,1]");

    std::vector<Index> surviving(static_cast<size_t>(d));
    for (Index j = 0; j < d; ++j) surviving[static_cast<size_t>(j)] = j;
    std::vector<Index> eliminated;           // in elimination order
    Vector scores = Vector::Zero(d);         // criterion at elimination / final fit

    auto fit_criterion = [&](const std::vector<Index>& cols, std::uint64_t round_seed) {
        const Matrix X = select_columns(train.features, cols);
        const LinearSvmModel model =
            train_linear_svm(X, train.labels, train.class_count, params, round_seed);
        Vector crit = Vector::Zero(static_cast<Index>(cols.size()));
        for (const auto& m : model.models) crit += m.weight.array().square().matrix();
        return crit;
    };

    std::uint64_t round = 0;
    while (static_cast<Index>(surviving.size()) > target_k) {
        Vector crit = fit_criterion(surviving, derive_seed(seed, round++));
        if (crit.maxCoeff() == 0.0)
            std::cerr << "warning: svm_rfe got an all-zero weight model; "
                         "eliminating lowest-index features\n";

        Index n_cut = static_cast<Index>(std::ceil(
            chunk_fraction * static_cast<double>(surviving.size())));
        n_cut = std::max<Index>(Index{1}, n_cut);
        n_cut = std::min(n_cut, static_cast<Index>(surviving.size()) - target_k);

        // ascending criterion; ties eliminate the lower original index first
        std::vector<Index> pos(surviving.size());
        for (size_t p = 0; p < surviving.size(); ++p) pos[p] = static_cast<Index>(p);
        std::stable_sort(pos.begin(), pos.end(), [&](Index a, Index b) {
            if (crit[a] != crit[b]) return crit[a] < crit[b];
            return surviving[static_cast<size_t>(a)] < surviving[static_cast<size_t>(b)];
        });

        std::vector<bool> cut(surviving.size(), false);
        for (Index k = 0; k < n_cut; ++k) {
            const Index p = pos[static_cast<size_t>(k)];
            cut[static_cast<size_t>(p)] = true;
            eliminated.push_back(surviving[static_cast<size_t>(p)]);
            scores[surviving[static_cast<size_t>(p)]] = crit[p];
        }
        std::vector<Index> next;
        for (size_t p = 0; p < surviving.size(); ++p)
            if (!cut[p]) next.push_back(surviving[p]);
        surviving = std::move(next);
    }

    // Final fit orders the survivors.
    Vector final_crit = fit_criterion(surviving, derive_seed(seed, round));
    std::vector<Index> pos(surviving.size());
    for (size_t p = 0; p < surviving.size(); ++p) pos[p] = static_cast<Index>(p);
    std::stable_sort(pos.begin(), pos.end(), [&](Index a, Index b) {
        if (final_crit[a] != final_crit[b]) return final_crit[a] > final_crit[b];
        return surviving[static_cast<size_t>(a)] < surviving[static_cast<size_t>(b)];
    });

    FeatureRanking ranking;
    ranking.method = "svmrfe";
    for (Index p : pos) {
        ranking.order.push_back(surviving[static_cast<size_t>(p)]);
        scores[surviving[static_cast<size_t>(p)]] = final_crit[p];
    }
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it)
        ranking.order.push_back(*it);
    ranking.scores = std::move(scores);
    return ranking;
}

}  // namespace mminet

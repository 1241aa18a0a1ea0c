#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mminet/types.hpp"

namespace mminet {

// A labeled sample matrix: rows are samples, columns are features. Labels are
// contiguous class indices in {0..class_count-1}.
struct Dataset {
    Matrix features;                          // n x d_x
    IntVector labels;                         // length n
    int class_count = 0;                      // L
    std::vector<std::string> feature_names;   // optional, d_x entries when present
    std::vector<std::string> label_names;     // original label text per class index

    Index size() const { return features.rows(); }
    Index dim() const { return features.cols(); }

    // Throws DataError when any structural invariant is broken.
    void validate() const;

    // Row indices belonging to each class, in sample order.
    std::vector<std::vector<Index>> class_indices() const;

    // Per-class sample counts.
    std::vector<Index> class_counts() const;
};

// Per-feature mean/std fitted on a training split. Constant features carry
// std 0 and are flagged; applying the stats maps them to 0.
struct StandardizationStats {
    Vector means;
    Vector stds;                 // population std; 0 marks a constant feature
    std::vector<bool> constant;  // d_x flags

    bool any_constant() const;
};

// Stratified fold labels: fold_index[i] in {0..k-1}.
struct FoldAssignment {
    IntVector fold_index;
    int k = 0;

    std::vector<Index> test_indices(int fold) const;
    std::vector<Index> train_indices(int fold) const;
};

// CSV ingestion. The label column may be given by header name or 0-based
// column index (as decimal text). Labels are re-indexed to {0..L-1} in order
// of first appearance; the original text is kept in label_names.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header);

// Writes a dataset back to CSV with a header row; the label column comes last.
void write_csv(const Dataset& data, const std::string& path);

// Full 432-point MONK attribute grid with the Monk3 target rule, then exactly
// round(0.05 * 432) = 22 label flips drawn without replacement by seed.
Dataset gen_monk3(std::uint64_t seed);

// Two Gaussian classes in 2-D with means +-1.25*(1,-1) and shared covariance
// R * diag(9, 0.25) * R^T, R the 45 degree rotation. Each axis alone overlaps
// heavily; the (1,-1) direction separates the classes almost perfectly.
Dataset gen_toy2d(Index n_per_class, std::uint64_t seed);

// n=200, d_x=3000, L=5 smoke-scale generator: the first five coordinates get
// class-dependent Gaussian means, the rest are pure noise.
Dataset gen_highdim_smoke(std::uint64_t seed);

StandardizationStats fit_standardizer(const Dataset& train);
Dataset apply_standardizer(const StandardizationStats& stats, const Dataset& data);

// Deterministic stratified k-fold split. Every class needs at least k samples.
FoldAssignment stratified_kfold(const Dataset& data, int k, std::uint64_t seed);

// Row subset as a new dataset (class_count and names are preserved).
Dataset subset(const Dataset& data, const std::vector<Index>& rows);

}  // namespace mminet

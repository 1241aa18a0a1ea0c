#include "mminet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "mminet/errors.hpp"

namespace mminet {

void Dataset::validate() const {
    if (features.rows() < 1) throw DataError("dataset is empty");
    if (features.cols() < 1) throw DataError("dataset has no feature columns");
    if (labels.size() != features.rows())
        throw DataError("label count does not match sample count");
    if (class_count < 1) throw DataError("class_count must be >= 1");
    std::vector<Index> counts(static_cast<size_t>(class_count), 0);
    for (Index i = 0; i < labels.size(); ++i) {
        const int c = labels[i];
        if (c < 0 || c >= class_count)
            throw DataError("label out of range at row " + std::to_string(i));
        ++counts[static_cast<size_t>(c)];
    }
    if (class_count > 1) {
        for (int c = 0; c < class_count; ++c)
            if (counts[static_cast<size_t>(c)] == 0)
                throw DataError("class " + std::to_string(c) + " has no samples");
    }
    if (!features.allFinite()) throw DataError("dataset contains non-finite values");
    if (!feature_names.empty() &&
        static_cast<Index>(feature_names.size()) != features.cols())
        throw DataError("feature_names length does not match feature count");
}

std::vector<std::vector<Index>> Dataset::class_indices() const {
    std::vector<std::vector<Index>> idx(static_cast<size_t>(class_count));
    for (Index i = 0; i < labels.size(); ++i)
        idx[static_cast<size_t>(labels[i])].push_back(i);
    return idx;
}

std::vector<Index> Dataset::class_counts() const {
    std::vector<Index> counts(static_cast<size_t>(class_count), 0);
    for (Index i = 0; i < labels.size(); ++i) ++counts[static_cast<size_t>(labels[i])];
    return counts;
}

bool StandardizationStats::any_constant() const {
    return std::find(constant.begin(), constant.end(), true) != constant.end();
}

std::vector<Index> FoldAssignment::test_indices(int fold) const {
    std::vector<Index> out;
    for (Index i = 0; i < fold_index.size(); ++i)
        if (fold_index[i] == fold) out.push_back(i);
    return out;
}

std::vector<Index> FoldAssignment::train_indices(int fold) const {
    std::vector<Index> out;
    for (Index i = 0; i < fold_index.size(); ++i)
        if (fold_index[i] != fold) out.push_back(i);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_int(const std::string& text, int& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw DataError("empty file: " + path);

    std::vector<std::string> header;
    size_t first_data_row = 0;
    if (has_header) {
        header = split_csv_line(lines[0]);
        for (auto& h : header) h = trim(h);
        first_data_row = 1;
    }
    if (first_data_row >= lines.size()) throw DataError("no data rows in " + path);

    const size_t n_cols = split_csv_line(lines[first_data_row]).size();
    if (n_cols < 2) throw DataError("need at least one feature column and a label column");

    // Resolve the label column: header name first, then 0-based index text.
    Index label_col = -1;
    if (has_header) {
        for (size_t j = 0; j < header.size(); ++j)
            if (header[j] == label_column) label_col = static_cast<Index>(j);
    }
    if (label_col < 0) {
        int idx = -1;
        if (parse_int(label_column, idx) && idx >= 0 && idx < static_cast<int>(n_cols))
            label_col = idx;
    }
    if (label_col < 0)
        throw DataError("label column '" + label_column + "' not found in " + path);

    const Index n = static_cast<Index>(lines.size() - first_data_row);
    const Index d = static_cast<Index>(n_cols) - 1;

    Dataset data;
    data.features.resize(n, d);
    data.labels.resize(n);

    std::map<std::string, int> label_index;
    for (Index i = 0; i < n; ++i) {
        const auto cells = split_csv_line(lines[first_data_row + static_cast<size_t>(i)]);
        if (cells.size() != n_cols)
            throw DataError("row " + std::to_string(i + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(n_cols));
        Index jj = 0;
        for (size_t j = 0; j < cells.size(); ++j) {
            if (static_cast<Index>(j) == label_col) continue;
            double v = 0.0;
            if (!parse_double(cells[j], v))
                throw DataError("non-numeric feature cell '" + trim(cells[j]) +
                                "' at row " + std::to_string(i + 1) + ", column " +
                                std::to_string(j + 1));
            if (!std::isfinite(v))
                throw DataError("non-finite feature value at row " + std::to_string(i + 1) +
                                ", column " + std::to_string(j + 1));
            data.features(i, jj++) = v;
        }
        const std::string lab = trim(cells[static_cast<size_t>(label_col)]);
        auto it = label_index.find(lab);
        if (it == label_index.end()) {
            // first-appearance re-indexing
            const int next = static_cast<int>(label_index.size());
            it = label_index.emplace(lab, next).first;
            data.label_names.push_back(lab);
        }
        data.labels[i] = it->second;
    }
    data.class_count = static_cast<int>(label_index.size());

    if (has_header) {
        for (size_t j = 0; j < header.size(); ++j)
            if (static_cast<Index>(j) != label_col) data.feature_names.push_back(header[j]);
    }
    data.validate();
    return data;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out.precision(17);
    for (Index j = 0; j < data.dim(); ++j) {
        const std::string name = data.feature_names.empty()
                                     ? "x" + std::to_string(j + 1)
                                     : data.feature_names[static_cast<size_t>(j)];
        out << name << ",";
    }
    out << "label\n";
    for (Index i = 0; i < data.size(); ++i) {
        for (Index j = 0; j < data.dim(); ++j) out << data.features(i, j) << ",";
        const int c = data.labels[i];
        if (static_cast<size_t>(c) < data.label_names.size())
            out << data.label_names[static_cast<size_t>(c)];
        else
            out << c;
        out << "\n";
    }
}

Dataset gen_monk3(std::uint64_t seed) {
    // MONK attribute cardinalities; values run 1..k as in the original domain.
    constexpr int kCard[6] = {3, 3, 2, 3, 4, 2};
    Index total = 1;
    for (int k : kCard) total *= k;  // 432

    Dataset data;
    data.features.resize(total, 6);
    data.labels.resize(total);
    data.class_count = 2;
    data.feature_names = {"x1", "x2", "x3", "x4", "x5", "x6"};
    data.label_names = {"0", "1"};

    Index row = 0;
    int x[6];
    for (x[0] = 1; x[0] <= kCard[0]; ++x[0])
        for (x[1] = 1; x[1] <= kCard[1]; ++x[1])
            for (x[2] = 1; x[2] <= kCard[2]; ++x[2])
                for (x[3] = 1; x[3] <= kCard[3]; ++x[3])
                    for (x[4] = 1; x[4] <= kCard[4]; ++x[4])
                        for (x[5] = 1; x[5] <= kCard[5]; ++x[5]) {
                            for (int j = 0; j < 6; ++j)
                                data.features(row, j) = static_cast<double>(x[j]);
                            const bool target = (x[4] == 3 && x[3] == 1) ||
                                                (x[4] != 4 && x[1] != 3);
                            data.labels[row] = target ? 1 : 0;
                            ++row;
                        }

    // Exactly round(0.05 * 432) = 22 flips, drawn without replacement.
    const Index n_flips = static_cast<Index>(std::llround(0.05 * static_cast<double>(total)));
    std::vector<Index> idx(static_cast<size_t>(total));
    for (Index i = 0; i < total; ++i) idx[static_cast<size_t>(i)] = i;
    std::mt19937_64 rng(seed);
    for (Index i = 0; i < n_flips; ++i) {
        std::uniform_int_distribution<Index> pick(i, total - 1);
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
        const Index flip = idx[static_cast<size_t>(i)];
        data.labels[flip] = 1 - data.labels[flip];
    }
    data.validate();
    return data;
}

Dataset gen_toy2d(Index n_per_class, std::uint64_t seed) {
    if (n_per_class < 2) throw DataError("gen_toy2d requires n_per_class >= 2");

    // Shared covariance R * diag(9, 0.25) * R^T with R the 45 degree rotation;
    // sampling uses the factor A = R * diag(3, 0.5).
    const double c = std::sqrt(0.5);
    Eigen::Matrix2d rot;
    rot << c, -c, c, c;
    Eigen::Matrix2d factor = rot * Eigen::Vector2d(3.0, 0.5).asDiagonal();

    Dataset data;
    const Index n = 2 * n_per_class;
    data.features.resize(n, 2);
    data.labels.resize(n);
    data.class_count = 2;
    data.feature_names = {"x1", "x2"};
    data.label_names = {"0", "1"};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index i = 0; i < n; ++i) {
        const int cls = i < n_per_class ? 0 : 1;
        const double s = cls == 0 ? -1.25 : 1.25;
        const Eigen::Vector2d mu(s, -s);
        Eigen::Vector2d z(gauss(rng), gauss(rng));
        const Eigen::Vector2d v = mu + factor * z;
        data.features(i, 0) = v[0];
        data.features(i, 1) = v[1];
        data.labels[i] = cls;
    }
    data.validate();
    return data;
}

Dataset gen_highdim_smoke(std::uint64_t seed) {
    constexpr Index kPerClass = 40;
    constexpr int kClasses = 5;
    constexpr Index kDim = 3000;
    constexpr Index kBlock = 40;    // coordinates per informative direction
    constexpr double kShift = 2.5;  // class mean on its own block

    Dataset data;
    const Index n = kPerClass * kClasses;
    data.features.resize(n, kDim);
    data.labels.resize(n);
    data.class_count = kClasses;

    // One informative direction per class: the indicator of a coordinate
    // block. Dense blocks keep the class structure visible in pairwise
    // distances after standardization while every single block coordinate
    // still separates its class for the selection baselines.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i / kPerClass);
        for (Index j = 0; j < kDim; ++j) {
            double v = gauss(rng);
            if (j / kBlock == cls) v += kShift;
            data.features(i, j) = v;
        }
        data.labels[i] = cls;
    }
    data.validate();
    return data;
}

StandardizationStats fit_standardizer(const Dataset& train) {
    if (train.size() < 1) throw DataError("cannot fit standardizer on empty dataset");
    const Index d = train.dim();
    StandardizationStats stats;
    stats.means = train.features.colwise().mean();
    stats.stds.resize(d);
    stats.constant.assign(static_cast<size_t>(d), false);
    const double n = static_cast<double>(train.size());
    for (Index j = 0; j < d; ++j) {
        const double var =
            (train.features.col(j).array() - stats.means[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            stats.constant[static_cast<size_t>(j)] = true;
            stats.stds[j] = 0.0;
            std::cerr << "warning: feature " << j
                      << " is constant on the training split; it will map to 0\n";
        } else {
            stats.stds[j] = sd;
        }
    }
    return stats;
}

Dataset apply_standardizer(const StandardizationStats& stats, const Dataset& data) {
    if (data.dim() != stats.means.size())
        throw DataError("standardizer dimensionality does not match dataset");
    Dataset out = data;
    for (Index j = 0; j < data.dim(); ++j) {
        if (stats.constant[static_cast<size_t>(j)])
            out.features.col(j).setZero();
        else
            out.features.col(j) =
                (data.features.col(j).array() - stats.means[j]) / stats.stds[j];
    }
    return out;
}

FoldAssignment stratified_kfold(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw DataError("stratified_kfold requires k >= 2");
    const auto by_class = data.class_indices();
    for (int c = 0; c < data.class_count; ++c) {
        if (static_cast<int>(by_class[static_cast<size_t>(c)].size()) < k)
            throw DataError("class " + std::to_string(c) + " has " +
                            std::to_string(by_class[static_cast<size_t>(c)].size()) +
                            " samples, fewer than k=" + std::to_string(k));
    }

    FoldAssignment folds;
    folds.k = k;
    folds.fold_index.resize(data.size());

    std::mt19937_64 rng(seed);
    // Rotating start offset spreads the per-class remainders over different
    // folds so total fold sizes differ by at most one.
    int offset = 0;
    for (int c = 0; c < data.class_count; ++c) {
        auto idx = by_class[static_cast<size_t>(c)];
        std::shuffle(idx.begin(), idx.end(), rng);
        for (size_t j = 0; j < idx.size(); ++j)
            folds.fold_index[idx[j]] = static_cast<int>((j + static_cast<size_t>(offset)) % static_cast<size_t>(k));
        offset = (offset + static_cast<int>(idx.size() % static_cast<size_t>(k))) % k;
    }
    return folds;
}

Dataset subset(const Dataset& data, const std::vector<Index>& rows) {
    Dataset out;
    out.features.resize(static_cast<Index>(rows.size()), data.dim());
    out.labels.resize(static_cast<Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Index>(i)) = data.features.row(rows[i]);
        out.labels[static_cast<Index>(i)] = data.labels[rows[i]];
    }
    out.class_count = data.class_count;
    out.feature_names = data.feature_names;
    out.label_names = data.label_names;
    return out;
}

}  // namespace mminet

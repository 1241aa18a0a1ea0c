#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mminet/dataset.hpp"
#include "mminet/svm.hpp"
#include "mminet/trainer.hpp"
#include "mminet/types.hpp"

namespace mminet {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Method { MmiNet, Fisher, Mrmr, SvmRfe };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
std::vector<Method> all_methods();

// Where the experiment data comes from: a CSV file or a named generator.
struct DatasetSource {
    std::string kind = "csv";  // csv | monk3 | toy2d | highdim_smoke
    std::string path;
    std::string label_column = "label";
    bool has_header = true;
    std::uint64_t seed = 0;      // generator seed
    Index n_per_class = 200;     // toy2d only

    std::string name() const;
};

Dataset resolve_dataset(const DatasetSource& source);

struct ExperimentSpec {
    DatasetSource source;
    Method method = Method::MmiNet;
    Index d_y = 2;
    int folds = 5;
    std::uint64_t master_seed = 0;
    TrainConfig train;               // d_y/seed are overridden per run and fold
    int mrmr_bins = 10;
    double rfe_chunk_fraction = 0.1;
    SvmParams svm;
    bool parallel_folds = false;
};

struct CvReport {
    ExperimentSpec spec;
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;            // sample std over folds
    std::vector<double> fold_wall_times;  // seconds
    std::string artifact_version = kArtifactVersion;
};

// Per fold: standardize on the training split, reduce to d_y (projection or
// top-ranked columns), train the linear SVM, score the held-out split. Fold
// seeds are hashed from the master seed so execution order cannot matter.
CvReport run_experiment(const ExperimentSpec& spec);

// One report per (method, d_y) pair.
std::vector<CvReport> run_sweep(const ExperimentSpec& base,
                                const std::vector<Index>& dy_list,
                                const std::vector<Method>& methods);

// Tidy results table: dataset,method,dy,fold,accuracy.
void write_tidy_csv(const std::vector<CvReport>& reports, const std::string& path);

nlohmann::json to_json(const CvReport& report);
nlohmann::json to_json(const TrainReport& report);
CvReport report_from_json(const nlohmann::json& j);

void save_report(const CvReport& report, const std::string& path);
CvReport load_report(const std::string& path);

}  // namespace mminet

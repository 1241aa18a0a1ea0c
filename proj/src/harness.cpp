#include "mminet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mminet/baselines.hpp"
#include "mminet/errors.hpp"

namespace mminet {

using nlohmann::json;

std::string method_name(Method m) {
    switch (m) {
        case Method::MmiNet: return "mminet";
        case Method::Fisher: return "fisher";
        case Method::Mrmr: return "mrmr";
        case Method::SvmRfe: return "svmrfe";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "mminet") return Method::MmiNet;
    if (name == "fisher") return Method::Fisher;
    if (name == "mrmr") return Method::Mrmr;
    if (name == "svmrfe") return Method::SvmRfe;
    throw DataError("unknown method: " + name);
}

std::vector<Method> all_methods() {
    return {Method::MmiNet, Method::Fisher, Method::Mrmr, Method::SvmRfe};
}

std::string DatasetSource::name() const {
    if (kind != "csv") return kind;
    const auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return base.empty() ? "csv" : base;
}

Dataset resolve_dataset(const DatasetSource& source) {
    if (source.kind == "csv") return load_csv(source.path, source.label_column, source.has_header);
    if (source.kind == "monk3") return gen_monk3(source.seed);
    if (source.kind == "toy2d") return gen_toy2d(source.n_per_class, source.seed);
    if (source.kind == "highdim_smoke") return gen_highdim_smoke(source.seed);
    throw DataError("unknown dataset source kind: " + source.kind);
}

namespace {

// Salts for per-fold substreams; fold seeds must not depend on run order.
constexpr std::uint64_t kFoldSalt = 0x10;
constexpr std::uint64_t kReduceSalt = 0x20;
constexpr std::uint64_t kSvmSalt = 0x30;

struct FoldOutcome {
    double accuracy = 0.0;
    double wall_time = 0.0;
};

FoldOutcome run_fold(const ExperimentSpec& spec, const Dataset& data,
                     const FoldAssignment& folds, int fold) {
    const auto t_start = std::chrono::steady_clock::now();

    const Dataset train_split = subset(data, folds.train_indices(fold));
    const Dataset test_split = subset(data, folds.test_indices(fold));
    const StandardizationStats stats = fit_standardizer(train_split);
    const Dataset train_z = apply_standardizer(stats, train_split);
    const Dataset test_z = apply_standardizer(stats, test_split);

    Matrix reduced_train, reduced_test;
    if (spec.method == Method::MmiNet) {
        TrainConfig config = spec.train;
        config.d_y = spec.d_y;
        config.seed = derive_seed(spec.master_seed, kReduceSalt,
                                  static_cast<std::uint64_t>(fold));
        const TrainResult trained = train_mminet(train_z, config);
        reduced_train = transform(trained.network, train_z);
        reduced_test = transform(trained.network, test_z);
    } else {
        FeatureRanking ranking;
        if (spec.method == Method::Fisher) {
            ranking = fisher_score(train_z);
        } else if (spec.method == Method::Mrmr) {
            ranking = mrmr_rank(train_z, spec.mrmr_bins);
        } else {
            ranking = svm_rfe(train_z, spec.d_y, spec.rfe_chunk_fraction, spec.svm,
                              derive_seed(spec.master_seed, kReduceSalt,
                                          static_cast<std::uint64_t>(fold)));
        }
        const auto cols = ranking.top(spec.d_y);
        reduced_train = select_columns(train_z.features, cols);
        reduced_test = select_columns(test_z.features, cols);
    }

    const LinearSvmModel svm = train_linear_svm(
        reduced_train, train_z.labels, data.class_count, spec.svm,
        derive_seed(spec.master_seed, kSvmSalt, static_cast<std::uint64_t>(fold)));

    FoldOutcome outcome;
    outcome.accuracy = accuracy(svm, reduced_test, test_z.labels);
    outcome.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return outcome;
}

}  // namespace

CvReport run_experiment(const ExperimentSpec& spec) {
    if (spec.folds < 2) throw DataError("run_experiment: folds must be >= 2");
    const Dataset data = resolve_dataset(spec.source);
    if (spec.d_y < 1 || spec.d_y > data.dim())
        throw DataError("run_experiment: d_y must be in [1, d_x]");

    const FoldAssignment folds =
        stratified_kfold(data, spec.folds, derive_seed(spec.master_seed, kFoldSalt));

    std::vector<FoldOutcome> outcomes(static_cast<size_t>(spec.folds));
    auto fold_task = [&](int f) {
        try {
            return run_fold(spec, data, folds, f);
        } catch (const DataError& e) {
            throw DataError("fold " + std::to_string(f) + ": " + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError("fold " + std::to_string(f) + ": " + e.what());
        }
    };

    if (spec.parallel_folds) {
        std::vector<std::future<FoldOutcome>> futures;
        for (int f = 0; f < spec.folds; ++f)
            futures.push_back(std::async(std::launch::async, fold_task, f));
        for (int f = 0; f < spec.folds; ++f)
            outcomes[static_cast<size_t>(f)] = futures[static_cast<size_t>(f)].get();
    } else {
        for (int f = 0; f < spec.folds; ++f)
            outcomes[static_cast<size_t>(f)] = fold_task(f);
    }

    CvReport report;
    report.spec = spec;
    for (const auto& o : outcomes) {
        report.fold_accuracies.push_back(o.accuracy);
        report.fold_wall_times.push_back(o.wall_time);
    }
    const double k = static_cast<double>(spec.folds);
    report.mean_accuracy =
        std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) / k;
    double ss = 0.0;
    for (double a : report.fold_accuracies) {
        const double dev = a - report.mean_accuracy;
        ss += dev * dev;
    }
    report.std_accuracy = spec.folds > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
    return report;
}

std::vector<CvReport> run_sweep(const ExperimentSpec& base, const std::vector<Index>& dy_list,
                                const std::vector<Method>& methods) {
    std::vector<CvReport> reports;
    for (Method m : methods) {
        for (Index dy : dy_list) {
            ExperimentSpec spec = base;
            spec.method = m;
            spec.d_y = dy;
            reports.push_back(run_experiment(spec));
        }
    }
    return reports;
}

void write_tidy_csv(const std::vector<CvReport>& reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write csv: " + path);
    out << "dataset,method,dy,fold,accuracy\n";
    out.precision(17);
    for (const auto& r : reports)
        for (size_t f = 0; f < r.fold_accuracies.size(); ++f)
            out << r.spec.source.name() << "," << method_name(r.spec.method) << ","
                << r.spec.d_y << "," << f << "," << r.fold_accuracies[f] << "\n";
}

json to_json(const CvReport& report) {
    const auto& s = report.spec;
    json j;
    j["artifact_version"] = report.artifact_version;
    j["spec"] = {
        {"source",
         {{"kind", s.source.kind},
          {"path", s.source.path},
          {"label_column", s.source.label_column},
          {"has_header", s.source.has_header},
          {"seed", s.source.seed},
          {"n_per_class", s.source.n_per_class}}},
        {"method", method_name(s.method)},
        {"d_y", s.d_y},
        {"folds", s.folds},
        {"master_seed", s.master_seed},
        {"train",
         {{"arch", arch_name(s.train.arch)},
          {"epochs", s.train.epochs},
          {"learning_rate", s.train.learning_rate},
          {"momentum", s.train.momentum},
          {"refresh_every", s.train.refresh_every},
          {"shuffle", s.train.shuffle}}},
        {"mrmr_bins", s.mrmr_bins},
        {"rfe_chunk_fraction", s.rfe_chunk_fraction},
        {"svm", {{"lambda", s.svm.lambda}, {"epochs", s.svm.epochs}}},
        {"parallel_folds", s.parallel_folds}};
    j["fold_accuracies"] = report.fold_accuracies;
    j["mean_accuracy"] = report.mean_accuracy;
    j["std_accuracy"] = report.std_accuracy;
    j["fold_wall_times"] = report.fold_wall_times;
    return j;
}

CvReport report_from_json(const json& j) {
    CvReport report;
    report.artifact_version = j.at("artifact_version").get<std::string>();
    const auto& js = j.at("spec");
    const auto& jsrc = js.at("source");
    report.spec.source.kind = jsrc.at("kind").get<std::string>();
    report.spec.source.path = jsrc.at("path").get<std::string>();
    report.spec.source.label_column = jsrc.at("label_column").get<std::string>();
    report.spec.source.has_header = jsrc.at("has_header").get<bool>();
    report.spec.source.seed = jsrc.at("seed").get<std::uint64_t>();
    report.spec.source.n_per_class = jsrc.at("n_per_class").get<Index>();
    report.spec.method = method_from_name(js.at("method").get<std::string>());
    report.spec.d_y = js.at("d_y").get<Index>();
    report.spec.folds = js.at("folds").get<int>();
    report.spec.master_seed = js.at("master_seed").get<std::uint64_t>();
    const auto& jt = js.at("train");
    report.spec.train.arch = arch_from_name(jt.at("arch").get<std::string>());
    report.spec.train.epochs = jt.at("epochs").get<int>();
    report.spec.train.learning_rate = jt.at("learning_rate").get<double>();
    report.spec.train.momentum = jt.at("momentum").get<double>();
    report.spec.train.refresh_every = jt.at("refresh_every").get<int>();
    report.spec.train.shuffle = jt.at("shuffle").get<bool>();
    report.spec.train.d_y = report.spec.d_y;
    report.spec.mrmr_bins = js.at("mrmr_bins").get<int>();
    report.spec.rfe_chunk_fraction = js.at("rfe_chunk_fraction").get<double>();
    report.spec.svm.lambda = js.at("svm").at("lambda").get<double>();
    report.spec.svm.epochs = js.at("svm").at("epochs").get<int>();
    report.spec.parallel_folds = js.at("parallel_folds").get<bool>();
    report.fold_accuracies = j.at("fold_accuracies").get<std::vector<double>>();
    report.mean_accuracy = j.at("mean_accuracy").get<double>();
    report.std_accuracy = j.at("std_accuracy").get<double>();
    report.fold_wall_times = j.at("fold_wall_times").get<std::vector<double>>();
    return report;
}

json to_json(const TrainReport& report) {
    json j;
    j["loss_trace"] = report.loss_trace;
    j["skipped_samples"] = report.skipped_samples;
    j["final_weight_norm"] = report.final_weight_norm;
    j["final_bias_norm"] = report.final_bias_norm;
    j["wall_time_seconds"] = report.wall_time_seconds;
    j["config"] = {{"d_y", report.config.d_y},
                   {"arch", arch_name(report.config.arch)},
                   {"epochs", report.config.epochs},
                   {"learning_rate", report.config.learning_rate},
                   {"momentum", report.config.momentum},
                   {"seed", report.config.seed},
                   {"refresh_every", report.config.refresh_every},
                   {"shuffle", report.config.shuffle}};
    return j;
}

void save_report(const CvReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report: " + path);
    out << to_json(report).dump(2) << "\n";
}

CvReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open report: " + path);
    json j;
    in >> j;
    return report_from_json(j);
}

}  // namespace mminet

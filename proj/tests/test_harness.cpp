#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mminet/errors.hpp"
#include "mminet/harness.hpp"

using namespace mminet;

namespace {

ExperimentSpec toy_spec(Method method, Index d_y = 1) {
    ExperimentSpec spec;
    spec.source.kind = "toy2d";
    spec.source.seed = 4;
    spec.source.n_per_class = 30;
    spec.method = method;
    spec.d_y = d_y;
    spec.folds = 3;
    spec.master_seed = 99;
    spec.train.arch = Arch::SingleLinear;
    return spec;
}

}  // namespace

TEST_CASE("same spec and master seed reproduce fold accuracies bitwise") {
    const auto spec = toy_spec(Method::MmiNet);
    const CvReport a = run_experiment(spec);
    const CvReport b = run_experiment(spec);
    CHECK(a.fold_accuracies == b.fold_accuracies);
    CHECK(a.mean_accuracy == b.mean_accuracy);
}

TEST_CASE("parallel and serial fold execution agree bitwise") {
    auto spec = toy_spec(Method::MmiNet);
    const CvReport serial = run_experiment(spec);
    spec.parallel_folds = true;
    const CvReport parallel = run_experiment(spec);
    CHECK(serial.fold_accuracies == parallel.fold_accuracies);
}

TEST_CASE("method execution order does not leak state") {
    const CvReport fisher_first = run_experiment(toy_spec(Method::Fisher));
    const CvReport mminet_between = run_experiment(toy_spec(Method::MmiNet));
    const CvReport fisher_second = run_experiment(toy_spec(Method::Fisher));
    CHECK(fisher_first.fold_accuracies == fisher_second.fold_accuracies);
    (void)mminet_between;
}

TEST_CASE("mean matches the arithmetic mean of fold accuracies") {
    const CvReport r = run_experiment(toy_spec(Method::Fisher));
    double sum = 0.0;
    for (double a : r.fold_accuracies) sum += a;
    CHECK(r.mean_accuracy == doctest::Approx(sum / r.fold_accuracies.size()).epsilon(1e-12));
    CHECK(r.fold_accuracies.size() == 3);
    CHECK(r.fold_wall_times.size() == 3);
}

TEST_CASE("report JSON round-trips") {
    const CvReport r = run_experiment(toy_spec(Method::Mrmr, 2));
    const auto j = to_json(r);
    const CvReport back = report_from_json(j);
    CHECK(to_json(back) == j);

    // file round-trip as well
    const auto path = std::filesystem::temp_directory_path() / "mminet_report.json";
    save_report(r, path.string());
    const CvReport loaded = load_report(path.string());
    CHECK(to_json(loaded) == j);
    std::remove(path.string().c_str());
}

TEST_CASE("spec echo carries every applied default") {
    const CvReport r = run_experiment(toy_spec(Method::SvmRfe));
    const auto j = to_json(r);
    const auto& spec = j.at("spec");
    for (const char* key :
         {"source", "method", "d_y", "folds", "master_seed", "train", "mrmr_bins",
          "rfe_chunk_fraction", "svm", "parallel_folds"})
        CHECK(spec.contains(key));
    for (const char* key :
         {"arch", "epochs", "learning_rate", "momentum", "refresh_every", "shuffle"})
        CHECK(spec.at("train").contains(key));
    for (const char* key : {"lambda", "epochs"}) CHECK(spec.at("svm").contains(key));
    CHECK(j.at("artifact_version").get<std::string>() == kArtifactVersion);
}

TEST_CASE("sweep produces one report per method and dimension") {
    ExperimentSpec base = toy_spec(Method::MmiNet);
    const auto reports = run_sweep(base, {1, 2}, all_methods());
    CHECK(reports.size() == 8);  // 4 methods x 2 dims

    const auto path = std::filesystem::temp_directory_path() / "mminet_sweep.csv";
    write_tidy_csv(reports, path.string());
    std::ifstream in(path.string());
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "dataset,method,dy,fold,accuracy");
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8 * 3);  // methods x dims x folds
    std::remove(path.string().c_str());
}

TEST_CASE("experiment errors carry the fold index") {
    auto spec = toy_spec(Method::MmiNet);
    spec.d_y = 7;  // exceeds d_x = 2
    CHECK_THROWS_AS(run_experiment(spec), DataError);

    // a class smaller than the fold count fails inside the splitter
    ExperimentSpec tiny = toy_spec(Method::Fisher);
    tiny.source.n_per_class = 2;
    tiny.folds = 5;
    CHECK_THROWS_AS(run_experiment(tiny), DataError);
}

TEST_CASE("dataset sources resolve") {
    DatasetSource monk;
    monk.kind = "monk3";
    monk.seed = 3;
    CHECK(resolve_dataset(monk).size() == 432);
    CHECK(monk.name() == "monk3");

    DatasetSource csv;
    csv.kind = "csv";
    csv.path = MMINET_SOURCE_DIR "/data/wdbc.csv";
    csv.label_column = "diagnosis";
    CHECK(resolve_dataset(csv).size() == 569);
    CHECK(csv.name() == "wdbc");

    DatasetSource bogus;
    bogus.kind = "nope";
    CHECK_THROWS_AS(resolve_dataset(bogus), DataError);
}

TEST_CASE("unknown method names are rejected") {
    CHECK_THROWS_AS(method_from_name("pca"), DataError);
    CHECK(method_name(method_from_name("svmrfe")) == "svmrfe");
}

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mminet/baselines.hpp"
#include "mminet/errors.hpp"
#include "mminet/gradcheck.hpp"
#include "mminet/harness.hpp"
#include "mminet/model_io.hpp"
#include "mminet/trainer.hpp"

namespace {

using namespace mminet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::vector<Index> parse_dy_list(const std::string& text) {
    std::vector<Index> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(static_cast<Index>(std::stol(token)));
    }
    if (out.empty()) throw CLI::ValidationError("--dy-list", "needs at least one value");
    return out;
}

std::vector<Method> parse_methods(const std::string& text) {
    if (text == "all") return all_methods();
    std::vector<Method> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        out.push_back(method_from_name(token));
    }
    if (out.empty()) throw CLI::ValidationError("--methods", "needs at least one method");
    return out;
}

struct DataFlags {
    std::string data_path;
    std::string gen_name;
    std::string label_col = "label";
    bool no_header = false;
    std::uint64_t data_seed = 0;
    Index n_per_class = 200;

    void attach(CLI::App* cmd) {
        auto* data = cmd->add_option("--data", data_path, "CSV dataset path");
        auto* gen = cmd->add_option("--gen", gen_name,
                                    "generated dataset: monk3|toy2d|highdim_smoke");
        data->excludes(gen);
        gen->excludes(data);
        cmd->add_option("--label-col", label_col, "label column name or 0-based index")
            ->capture_default_str();
        cmd->add_flag("--no-header", no_header, "CSV has no header row");
        cmd->add_option("--data-seed", data_seed, "generator seed")->capture_default_str();
        cmd->add_option("--n-per-class", n_per_class, "samples per class (toy2d)")
            ->capture_default_str();
    }

    DatasetSource source() const {
        DatasetSource src;
        if (!data_path.empty()) {
            src.kind = "csv";
            src.path = data_path;
            src.label_column = label_col;
            src.has_header = !no_header;
        } else if (!gen_name.empty()) {
            src.kind = gen_name;
            src.seed = data_seed;
            src.n_per_class = n_per_class;
        } else {
            throw CLI::RequiredError("--data or --gen");
        }
        return src;
    }
};

void print_report_line(const CvReport& r) {
    std::cout << r.spec.source.name() << " method=" << method_name(r.spec.method)
              << " d_y=" << r.spec.d_y << " folds=" << r.spec.folds
              << " mean_accuracy=" << r.mean_accuracy << " std=" << r.std_accuracy
              << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"MMINet supervised dimensionality reduction benchmark"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset CSV");
    std::string gen_which;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    Index gen_n_per_class = 200;
    gen_cmd->add_option("generator", gen_which, "monk3|toy2d")
        ->required()
        ->check(CLI::IsMember({"monk3", "toy2d"}));
    gen_cmd->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "output CSV path")->required();
    gen_cmd->add_option("--n-per-class", gen_n_per_class, "samples per class (toy2d)")
        ->capture_default_str();

    // shared experiment flags
    auto add_experiment_flags = [](CLI::App* cmd, ExperimentSpec& spec,
                                   std::string& arch) {
        cmd->add_option("--folds", spec.folds, "cross-validation folds")
            ->capture_default_str();
        cmd->add_option("--seed", spec.master_seed, "master seed")->capture_default_str();
        cmd->add_option("--arch", arch, "mminet architecture")
            ->check(CLI::IsMember({"paper_default", "single_linear"}))
            ->capture_default_str();
        cmd->add_option("--epochs", spec.train.epochs, "mminet training epochs")
            ->capture_default_str();
        cmd->add_option("--lr", spec.train.learning_rate, "mminet learning rate")
            ->capture_default_str();
        cmd->add_option("--momentum", spec.train.momentum, "mminet momentum")
            ->capture_default_str();
        cmd->add_option("--refresh-every", spec.train.refresh_every,
                        "iterations between projection refreshes")
            ->capture_default_str();
        cmd->add_flag("--no-shuffle", [&spec](std::int64_t) { spec.train.shuffle = false; },
                      "visit samples in dataset order");
        cmd->add_option("--bins", spec.mrmr_bins, "mRMR bins")->capture_default_str();
        cmd->add_option("--chunk-fraction", spec.rfe_chunk_fraction,
                        "SVM-RFE elimination fraction per round")
            ->capture_default_str();
        cmd->add_option("--svm-lambda", spec.svm.lambda, "SVM regularization")
            ->capture_default_str();
        cmd->add_option("--svm-epochs", spec.svm.epochs, "SVM training epochs")
            ->capture_default_str();
        cmd->add_flag("--parallel", spec.parallel_folds, "run folds in parallel");
    };

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "cross-validated experiment for one method");
    DataFlags eval_data;
    eval_data.attach(eval_cmd);
    ExperimentSpec eval_spec;
    std::string eval_arch = "paper_default";
    std::string eval_method = "mminet";
    std::string eval_report_path;
    std::string eval_model_path;
    eval_cmd->add_option("--method", eval_method, "mminet|fisher|mrmr|svmrfe")
        ->check(CLI::IsMember({"mminet", "fisher", "mrmr", "svmrfe"}))
        ->capture_default_str();
    eval_cmd->add_option("--dy", eval_spec.d_y, "output dimensionality")
        ->capture_default_str();
    add_experiment_flags(eval_cmd, eval_spec, eval_arch);
    eval_cmd->add_option("--report", eval_report_path, "write the CV report JSON here");
    eval_cmd->add_option("--save-model", eval_model_path,
                         "after CV, train on the full standardized dataset and save "
                         "the model (mminet only)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a d_y sweep over methods");
    DataFlags sweep_data;
    sweep_data.attach(sweep_cmd);
    ExperimentSpec sweep_spec;
    std::string sweep_arch = "paper_default";
    std::string sweep_dy_list = "1,2,3";
    std::string sweep_methods = "all";
    std::string sweep_csv;
    sweep_cmd->add_option("--dy-list", sweep_dy_list, "comma-separated output dims")
        ->capture_default_str();
    sweep_cmd->add_option("--methods", sweep_methods, "comma list or 'all'")
        ->capture_default_str();
    add_experiment_flags(sweep_cmd, sweep_spec, sweep_arch);
    sweep_cmd->add_option("--csv", sweep_csv, "tidy results CSV path")->required();

    // gradcheck
    auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference gradient suites");
    std::uint64_t grad_seed = 0;
    grad_cmd->add_option("--seed", grad_seed, "suite seed")->capture_default_str();

    // transform
    auto* trans_cmd = app.add_subcommand("transform", "project a dataset through a model");
    std::string trans_model, trans_data, trans_out;
    std::string trans_label_col = "label";
    bool trans_no_header = false;
    trans_cmd->add_option("--model", trans_model, "model file")->required();
    trans_cmd->add_option("--data", trans_data, "input CSV")->required();
    trans_cmd->add_option("--out", trans_out, "output CSV")->required();
    trans_cmd->add_option("--label-col", trans_label_col, "label column name or index")
        ->capture_default_str();
    trans_cmd->add_flag("--no-header", trans_no_header, "CSV has no header row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // prints help text for --help, an error plus hint otherwise
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    if (gen_cmd->parsed()) {
        const Dataset data = gen_which == "monk3" ? gen_monk3(gen_seed)
                                                  : gen_toy2d(gen_n_per_class, gen_seed);
        write_csv(data, gen_out);
        std::cout << "wrote " << data.size() << " samples, " << data.dim()
                  << " features to " << gen_out << "\n";
        return kExitOk;
    }

    if (eval_cmd->parsed()) {
        eval_spec.source = eval_data.source();
        eval_spec.method = method_from_name(eval_method);
        eval_spec.train.arch = arch_from_name(eval_arch);
        const CvReport report = run_experiment(eval_spec);
        print_report_line(report);
        if (!eval_report_path.empty()) save_report(report, eval_report_path);
        if (!eval_model_path.empty()) {
            if (eval_spec.method != Method::MmiNet)
                throw CLI::ValidationError("--save-model", "only valid with --method mminet");
            const Dataset data = resolve_dataset(eval_spec.source);
            const StandardizationStats stats = fit_standardizer(data);
            TrainConfig config = eval_spec.train;
            config.d_y = eval_spec.d_y;
            config.seed = derive_seed(eval_spec.master_seed, 0x40);
            const TrainResult trained = train_mminet(apply_standardizer(stats, data), config);
            save_model(ModelFile{trained.network, stats}, eval_model_path);
            std::cout << "saved model to " << eval_model_path << "\n";
        }
        return kExitOk;
    }

    if (sweep_cmd->parsed()) {
        sweep_spec.source = sweep_data.source();
        sweep_spec.train.arch = arch_from_name(sweep_arch);
        const auto reports =
            run_sweep(sweep_spec, parse_dy_list(sweep_dy_list), parse_methods(sweep_methods));
        for (const auto& r : reports) print_report_line(r);
        write_tidy_csv(reports, sweep_csv);
        std::cout << "wrote " << reports.size() << " reports to " << sweep_csv << "\n";
        return kExitOk;
    }

    if (grad_cmd->parsed()) {
        bool all_ok = true;
        for (const auto& r : run_all_gradchecks(grad_seed)) {
            std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.instances
                      << " instances, worst tolerance ratio " << r.max_rel_error << ")\n";
            all_ok = all_ok && r.passed;
        }
        return all_ok ? kExitOk : kExitNumerical;
    }

    if (trans_cmd->parsed()) {
        const ModelFile model = load_model(trans_model);
        const Dataset data = load_csv(trans_data, trans_label_col, !trans_no_header);
        const Dataset input =
            model.standardizer ? apply_standardizer(*model.standardizer, data) : data;
        const Matrix projected = batch_forward(model.network, input.features);
        Dataset out;
        out.features = projected;
        out.labels = data.labels;
        out.class_count = data.class_count;
        out.label_names = data.label_names;
        for (Index j = 0; j < projected.cols(); ++j)
            out.feature_names.push_back("y" + std::to_string(j + 1));
        write_csv(out, trans_out);
        std::cout << "wrote " << out.size() << " projected samples to " << trans_out << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n"
                  << "run with --help for usage\n";
        return kExitUsage;
    } catch (const mminet::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const mminet::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

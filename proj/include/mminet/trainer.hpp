#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mminet/dataset.hpp"
#include "mminet/density.hpp"
#include "mminet/network.hpp"
#include "mminet/types.hpp"

namespace mminet {

struct TrainConfig {
    Index d_y = 2;
    Arch arch = Arch::PaperDefault;
    int epochs = 1;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    int refresh_every = 1;  // iterations between reference-projection refreshes
    bool shuffle = true;

    void validate(Index d_x) const;
};

struct TrainReport {
    std::vector<double> loss_trace;   // one entry per executed iteration
    Index skipped_samples = 0;
    double final_weight_norm = 0.0;
    double final_bias_norm = 0.0;
    double wall_time_seconds = 0.0;
    TrainConfig config;               // echo of every applied setting
};

struct TrainResult {
    ProjectionNetwork network;
    TrainReport report;
};

// The stochastic training loop: per-sample leave-one-out KDE context in the
// projected space, instantaneous mutual-information loss, momentum update.
// Expects standardized features; every class needs at least 3 samples.
TrainResult train_mminet(const Dataset& train, const TrainConfig& config);

// Context for one iteration: the held-out sample is dropped from its own
// class's reference set; bandwidths come from the remaining points. When
// ref_rows is given it receives the projection-row index of every reference.
KdeContext build_loo_context(const Matrix& projections,
                             const std::vector<std::vector<Index>>& by_class,
                             const Vector& priors, Index held_out, int held_out_class,
                             std::vector<std::vector<Index>>* ref_rows = nullptr);

// Projects every row through the network; labels are untouched by design.
Matrix transform(const ProjectionNetwork& net, const Dataset& data);

std::string arch_name(Arch arch);
Arch arch_from_name(const std::string& name);

}  // namespace mminet

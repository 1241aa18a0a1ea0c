#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mminet/dataset.hpp"
#include "mminet/network.hpp"

namespace mminet {

// Versioned textual model format. Parameters are written as C99 hex floats
// in row-major order, so save/load round-trips are bit-exact. An optional
// standardizer block stores the preprocessing fitted at training time.
struct ModelFile {
    ProjectionNetwork network;
    std::optional<StandardizationStats> standardizer;
};

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

void write_model(const ModelFile& model, std::ostream& out);
ModelFile read_model(std::istream& in);

}  // namespace mminet

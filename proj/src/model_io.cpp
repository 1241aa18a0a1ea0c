#include "mminet/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mminet/errors.hpp"

namespace mminet {

namespace {

constexpr const char* kMagic = "mminet-model";
constexpr int kVersion = 1;

std::string hex_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hex_double(const std::string& token) {
    const char* s = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw DataError("model file: bad numeric token '" + token + "'");
    return v;
}

std::string activation_tag(Activation act) {
    return act == Activation::Elu ? "elu" : "identity";
}

Activation activation_from_tag(const std::string& tag) {
    if (tag == "elu") return Activation::Elu;
    if (tag == "identity") return Activation::Identity;
    throw DataError("model file: unknown activation '" + tag + "'");
}

std::string next_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return line;
    }
    throw DataError("model file: unexpected end of file");
}

}  // namespace

void write_model(const ModelFile& model, std::ostream& out) {
    out << kMagic << " v" << kVersion << "\n";
    if (model.standardizer) {
        const auto& s = *model.standardizer;
        out << "standardizer " << s.means.size() << "\n";
        for (Index j = 0; j < s.means.size(); ++j)
            out << hex_double(s.means[j]) << " " << hex_double(s.stds[j]) << "\n";
    }
    out << "layers " << model.network.layers.size() << "\n";
    for (const auto& layer : model.network.layers) {
        out << "layer " << layer.weight.rows() << " " << layer.weight.cols() << " "
            << activation_tag(layer.activation) << " "
            << (layer.has_bias ? "bias" : "nobias") << "\n";
        for (Index i = 0; i < layer.weight.rows(); ++i) {
            for (Index j = 0; j < layer.weight.cols(); ++j) {
                if (j) out << " ";
                out << hex_double(layer.weight(i, j));
            }
            out << "\n";
        }
        if (layer.has_bias) {
            for (Index i = 0; i < layer.bias.size(); ++i) {
                if (i) out << " ";
                out << hex_double(layer.bias[i]);
            }
            out << "\n";
        }
    }
}

ModelFile read_model(std::istream& in) {
    std::string line = next_line(in);
    {
        std::istringstream head(line);
        std::string magic, version;
        head >> magic >> version;
        if (magic != kMagic) throw DataError("model file: bad magic '" + magic + "'");
        if (version != "v1") throw DataError("model file: unsupported version " + version);
    }

    ModelFile model;
    line = next_line(in);
    std::istringstream sec(line);
    std::string tag;
    sec >> tag;

    if (tag == "standardizer") {
        Index d = 0;
        sec >> d;
        StandardizationStats stats;
        stats.means.resize(d);
        stats.stds.resize(d);
        stats.constant.assign(static_cast<size_t>(d), false);
        for (Index j = 0; j < d; ++j) {
            std::istringstream row(next_line(in));
            std::string m, s;
            row >> m >> s;
            stats.means[j] = parse_hex_double(m);
            stats.stds[j] = parse_hex_double(s);
            stats.constant[static_cast<size_t>(j)] = stats.stds[j] == 0.0;
        }
        model.standardizer = std::move(stats);
        line = next_line(in);
        sec = std::istringstream(line);
        sec >> tag;
    }

    if (tag != "layers") throw DataError("model file: expected 'layers' section");
    size_t n_layers = 0;
    sec >> n_layers;
    for (size_t li = 0; li < n_layers; ++li) {
        std::istringstream head(next_line(in));
        std::string kw, act, biaskw;
        Index rows = 0, cols = 0;
        head >> kw >> rows >> cols >> act >> biaskw;
        if (kw != "layer" || rows < 1 || cols < 1)
            throw DataError("model file: malformed layer header");
        DenseLayer layer;
        layer.activation = activation_from_tag(act);
        layer.has_bias = biaskw == "bias";
        layer.weight.resize(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            std::istringstream row(next_line(in));
            for (Index j = 0; j < cols; ++j) {
                std::string tok;
                if (!(row >> tok))
                    throw DataError("model file: truncated weight row");
                layer.weight(i, j) = parse_hex_double(tok);
            }
        }
        layer.bias = Vector::Zero(rows);
        if (layer.has_bias) {
            std::istringstream row(next_line(in));
            for (Index i = 0; i < rows; ++i) {
                std::string tok;
                if (!(row >> tok)) throw DataError("model file: truncated bias row");
                layer.bias[i] = parse_hex_double(tok);
            }
        }
        model.network.layers.push_back(std::move(layer));
    }
    if (model.network.layers.empty()) throw DataError("model file: no layers");
    return model;
}

void save_model(const ModelFile& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    write_model(model, out);
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    return read_model(in);
}

}  // namespace mminet

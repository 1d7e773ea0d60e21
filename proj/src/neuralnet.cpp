#include "geosteer/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "geosteer/errors.hpp"
#include "geosteer/rng.hpp"

namespace geosteer {

void LayerSpec::validate() const {
    if (sizes.size() < 2) throw config_error("layer spec needs at least input and output");
    for (int w : sizes)
        if (w < 1) throw config_error("layer widths must be >= 1");
}

QNetwork nn_init(const LayerSpec& spec, std::uint64_t seed) {
    spec.validate();
    QNetwork net;
    net.spec = spec;
    const std::size_t n_layers = spec.sizes.size() - 1;
    net.weights.resize(n_layers);
    net.biases.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int fan_in = spec.sizes[l];
        const int fan_out = spec.sizes[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        SplitMix64 rng(derive_seed(seed, "nn_layer", l));
        net.weights[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& w : net.weights[l]) w = rng.uniform(-bound, bound);
        net.biases[l].assign(static_cast<std::size_t>(fan_out), 0.0);
    }
    return net;
}

static void affine(const std::vector<double>& w, const std::vector<double>& b, int in_dim,
                   int out_dim, const std::vector<double>& x, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(out_dim));
    for (int r = 0; r < out_dim; ++r) {
        double acc = b[static_cast<std::size_t>(r)];
        const double* row = w.data() + static_cast<std::size_t>(r) * in_dim;
        for (int c = 0; c < in_dim; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

std::vector<double> nn_forward(const QNetwork& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw usage_error("nn_forward: input dimension mismatch");
    std::vector<double> act = input, next;
    const std::size_t n_layers = net.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        affine(net.weights[l], net.biases[l], net.spec.sizes[l], net.spec.sizes[l + 1], act, next);
        if (l + 1 < n_layers)
            for (double& v : next) v = std::max(0.0, v); // ReLU on hidden layers
        act.swap(next);
    }
    return act;
}

double nn_backward_sgd(QNetwork& net, const std::vector<double>& input, int action_index,
                       double target, double lr) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw usage_error("nn_backward_sgd: input dimension mismatch");
    if (action_index < 0 || action_index >= net.output_dim())
        throw usage_error("nn_backward_sgd: action index out of range");
    if (!std::isfinite(target)) throw usage_error("nn_backward_sgd: non-finite target");

    const std::size_t n_layers = net.weights.size();

    // Forward pass keeping post-activation values per layer (activations[0] = input).
    std::vector<std::vector<double>> activations(n_layers + 1);
    activations[0] = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        affine(net.weights[l], net.biases[l], net.spec.sizes[l], net.spec.sizes[l + 1],
               activations[l], activations[l + 1]);
        if (l + 1 < n_layers)
            for (double& v : activations[l + 1]) v = std::max(0.0, v);
    }

    const double q = activations[n_layers][static_cast<std::size_t>(action_index)];
    const double loss = (target - q) * (target - q);

    // Backward pass: deltas are d(loss)/d(pre-activation). The output head is
    // masked to the taken action, so the top delta has one nonzero entry.
    std::vector<std::vector<double>> deltas(n_layers);
    deltas[n_layers - 1].assign(static_cast<std::size_t>(net.output_dim()), 0.0);
    deltas[n_layers - 1][static_cast<std::size_t>(action_index)] = 2.0 * (q - target);
    for (std::size_t l = n_layers - 1; l > 0; --l) {
        const int in_dim = net.spec.sizes[l];
        const int out_dim = net.spec.sizes[l + 1];
        std::vector<double>& below = deltas[l - 1];
        below.assign(static_cast<std::size_t>(in_dim), 0.0);
        for (int r = 0; r < out_dim; ++r) {
            const double d = deltas[l][static_cast<std::size_t>(r)];
            if (d == 0.0) continue;
            const double* row = net.weights[l].data() + static_cast<std::size_t>(r) * in_dim;
            for (int c = 0; c < in_dim; ++c) below[static_cast<std::size_t>(c)] += row[c] * d;
        }
        // ReLU derivative: pass-through where the stored activation is positive.
        for (int c = 0; c < in_dim; ++c)
            if (activations[l][static_cast<std::size_t>(c)] <= 0.0)
                below[static_cast<std::size_t>(c)] = 0.0;
    }

    // Apply the SGD step after all deltas are computed from the old weights.
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int in_dim = net.spec.sizes[l];
        const int out_dim = net.spec.sizes[l + 1];
        for (int r = 0; r < out_dim; ++r) {
            const double d = deltas[l][static_cast<std::size_t>(r)];
            if (d == 0.0) continue;
            double* row = net.weights[l].data() + static_cast<std::size_t>(r) * in_dim;
            const std::vector<double>& a = activations[l];
            for (int c = 0; c < in_dim; ++c) row[c] -= lr * d * a[static_cast<std::size_t>(c)];
            net.biases[l][static_cast<std::size_t>(r)] -= lr * d;
        }
    }
    return loss;
}

// Checkpoint layout: "GSQN", u32 version, u32 layer-count, u32 widths...,
// then per layer the row-major weight matrix and the bias vector as f64.
static constexpr char kMagic[4] = {'G', 'S', 'Q', 'N'};
static constexpr std::uint32_t kVersion = 1;

template <class T>
static void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
static T read_pod(std::ifstream& in, const std::string& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw validation_error("truncated checkpoint: " + path);
    return v;
}

void nn_save(const QNetwork& net, const std::string& path, const nlohmann::json& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write checkpoint: " + path);
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(net.spec.sizes.size()));
    for (int s : net.spec.sizes) write_pod(out, static_cast<std::uint32_t>(s));
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        out.write(reinterpret_cast<const char*>(net.weights[l].data()),
                  static_cast<std::streamsize>(net.weights[l].size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(net.biases[l].data()),
                  static_cast<std::streamsize>(net.biases[l].size() * sizeof(double)));
    }
    if (!out) throw io_error("checkpoint write failed: " + path);
    out.close();

    std::ofstream side(path + ".json", std::ios::binary);
    if (!side) throw io_error("cannot write checkpoint sidecar: " + path + ".json");
    side << metadata.dump(2) << '\n';
}

QNetwork nn_load(const std::string& path, nlohmann::json* metadata) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw validation_error("not a checkpoint file: " + path);
    const auto version = read_pod<std::uint32_t>(in, path);
    if (version != kVersion)
        throw validation_error("unsupported checkpoint version in " + path);
    const auto n_sizes = read_pod<std::uint32_t>(in, path);
    if (n_sizes < 2 || n_sizes > 64) throw validation_error("bad layer count in " + path);

    QNetwork net;
    for (std::uint32_t i = 0; i < n_sizes; ++i)
        net.spec.sizes.push_back(static_cast<int>(read_pod<std::uint32_t>(in, path)));
    net.spec.validate();
    for (std::size_t l = 0; l + 1 < net.spec.sizes.size(); ++l) {
        const std::size_t wn = static_cast<std::size_t>(net.spec.sizes[l]) *
                               static_cast<std::size_t>(net.spec.sizes[l + 1]);
        const std::size_t bn = static_cast<std::size_t>(net.spec.sizes[l + 1]);
        std::vector<double> w(wn), b(bn);
        in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(wn * sizeof(double)));
        in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(bn * sizeof(double)));
        if (!in) throw validation_error("truncated checkpoint: " + path);
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
    }

    if (metadata) {
        std::ifstream side(path + ".json");
        if (side) {
            try {
                side >> *metadata;
            } catch (const nlohmann::json::exception&) {
                throw validation_error("malformed checkpoint sidecar: " + path + ".json");
            }
        } else {
            *metadata = nlohmann::json::object();
        }
    }
    return net;
}

} // namespace geosteer

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace geosteer {

struct LayerSpec {
    std::vector<int> sizes; // input, hidden..., output
    void validate() const;  // >= 2 entries, all widths >= 1
    bool operator==(const LayerSpec&) const = default;
};

// Fully-connected ReLU network, double precision throughout. Layer l maps
// sizes[l] -> sizes[l+1]; weights[l] is row-major (sizes[l+1] x sizes[l]).
struct QNetwork {
    LayerSpec spec;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return spec.sizes.front(); }
    int output_dim() const { return spec.sizes.back(); }
};

// Uniform Glorot-style init: W ~ U(+-sqrt(6/(fan_in+fan_out))), biases 0.
QNetwork nn_init(const LayerSpec& spec, std::uint64_t seed);

// Affine + ReLU per hidden layer, affine output (the 11 Q-values).
std::vector<double> nn_forward(const QNetwork& net, const std::vector<double>& input);

// Squared error on the chosen action's head only; one plain SGD step.
// Returns the pre-update loss (y - Q[a])^2.
double nn_backward_sgd(QNetwork& net, const std::vector<double>& input, int action_index,
                       double target, double lr);

// Binary checkpoint (versioned header + row-major little-endian doubles) with
// a JSON metadata sidecar at path + ".json".
void nn_save(const QNetwork& net, const std::string& path, const nlohmann::json& metadata);
QNetwork nn_load(const std::string& path, nlohmann::json* metadata = nullptr);

} // namespace geosteer

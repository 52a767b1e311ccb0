#include "fundval/feature_distance.hpp"

#include <cmath>

#include "fundval/error.hpp"

namespace fundval::metrics {

double embedding_l1_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ArgumentError("embedding_l1_distance: dimension mismatch");
    if (a.empty()) throw ArgumentError("embedding_l1_distance: empty vectors");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

void ActivationStack::validate() const {
    if (layers.empty()) throw ArgumentError("ActivationStack: no layers");
    if (layer_ids.size() != layers.size()) {
        throw ArgumentError("ActivationStack: layer_ids and layers differ in length");
    }
    for (const auto& t : layers) {
        if (t.channels < 1 || t.height < 1 || t.width < 1 || t.data.size() != t.element_count()) {
            throw ArgumentError("ActivationStack: tensor data does not match its shape");
        }
    }
}

double perceptual_stack_distance(const ActivationStack& a, const ActivationStack& b) {
    a.validate();
    b.validate();
    if (a.layer_ids != b.layer_ids) throw ArgumentError("perceptual distance: layer ids differ");
    double total = 0.0;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        const FeatureTensor& ta = a.layers[l];
        const FeatureTensor& tb = b.layers[l];
        if (ta.channels != tb.channels || ta.height != tb.height || ta.width != tb.width) {
            throw ArgumentError("perceptual distance: layer " + std::to_string(a.layer_ids[l]) +
                                " shapes differ");
        }
        double s = 0.0;
        for (std::size_t i = 0; i < ta.data.size(); ++i) {
            const double d = ta.data[i] - tb.data[i];
            s += d * d;
        }
        total += std::sqrt(s / static_cast<double>(ta.data.size()));
    }
    return total;
}

}  // namespace fundval::metrics

#include "dgmorl/types.hpp"

#include <cmath>

#include "dgmorl/text.hpp"

namespace dgmorl {

ValueVector::ValueVector(std::vector<double> components) : c_(std::move(components)) {
    if (c_.size() < 2) fail(Errc::dimension_too_small, "value vector needs at least 2 objectives");
    for (double x : c_)
        if (!std::isfinite(x)) fail(Errc::non_finite, "value vector component is not finite");
}

ValueVector ValueVector::zeros(std::size_t dim) {
    return ValueVector(std::vector<double>(dim, 0.0));
}

std::string ValueVector::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) out += ',';
        out += format_double(c_[i]);
    }
    return out;
}

std::string WeightVector::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) out += ',';
        out += format_double(c_[i]);
    }
    return out;
}

WeightVector make_weight(std::vector<double> components) {
    if (components.size() < 2) fail(Errc::dimension_too_small, "weight needs at least 2 components");
    double sum = 0.0;
    for (double x : components) {
        if (!std::isfinite(x)) fail(Errc::non_finite, "weight component is not finite");
        if (x < 0.0) fail(Errc::negative_component, "weight component below zero");
        sum += x;
    }
    if (std::abs(sum - 1.0) >= 1e-9) fail(Errc::sum_not_one, "weight components sum to " + format_double(sum));
    if (sum != 1.0)
        for (double& x : components) x /= sum;
    return WeightVector(std::move(components));
}

double utility(const ValueVector& v, const WeightVector& w) {
    return utility(v.components(), w);
}

double utility(std::span<const double> v, const WeightVector& w) {
    if (v.size() != w.dim()) fail(Errc::dimension_mismatch, "utility: value/weight dimension mismatch");
    double u = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) u += v[i] * w[i];
    return u;
}

} // namespace dgmorl

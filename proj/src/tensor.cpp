#include "analogator/tensor.hpp"

#include <stdexcept>

namespace analogator {

Tensor2 bind(std::span<const double> role, std::span<const double> filler) {
    if (role.empty() || filler.empty()) throw std::invalid_argument("bind: role and filler must be nonempty");
    Tensor2 t(role.size(), filler.size());
    for (std::size_t i = 0; i < role.size(); ++i)
        for (std::size_t j = 0; j < filler.size(); ++j) t(i, j) = role[i] * filler[j];
    return t;
}

Tensor2 compose(std::span<const Tensor2> bindings, std::size_t rows, std::size_t cols) {
    Tensor2 sum(rows, cols);
    for (const auto& b : bindings) {
        if (b.rows != rows || b.cols != cols) throw std::invalid_argument("compose: shape mismatch");
        for (std::size_t k = 0; k < sum.data.size(); ++k) sum.data[k] += b.data[k];
    }
    return sum;
}

std::vector<double> unbind(const Tensor2& tensor, std::span<const double> role) {
    if (role.size() != tensor.rows) throw std::invalid_argument("unbind: role length mismatch");
    std::vector<double> filler(tensor.cols, 0.0);
    for (std::size_t i = 0; i < tensor.rows; ++i)
        for (std::size_t j = 0; j < tensor.cols; ++j) filler[j] += role[i] * tensor(i, j);
    return filler;
}

}  // namespace analogator

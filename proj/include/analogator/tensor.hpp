#pragma once

// Tensor-product role/filler binding.

#include <cstddef>
#include <span>
#include <vector>

namespace analogator {

/// Dense rank-2 tensor, row-major.
struct Tensor2 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Tensor2() = default;
    Tensor2(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool operator==(const Tensor2&) const = default;
};

/// Outer product: T[i][j] = role[i] * filler[j].
Tensor2 bind(std::span<const double> role, std::span<const double> filler);

/// Elementwise sum of equally shaped bindings; an empty list yields a zero
/// tensor of the given shape.
Tensor2 compose(std::span<const Tensor2> bindings, std::size_t rows, std::size_t cols);

/// Inner product of the tensor with a role vector: sum_i role[i] * T[i][.].
std::vector<double> unbind(const Tensor2& tensor, std::span<const double> role);

}  // namespace analogator

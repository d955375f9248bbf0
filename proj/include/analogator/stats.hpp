#pragma once

#include <cstddef>
#include <span>

namespace analogator {

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1); 0 when n < 2
};

Summary summarize(std::span<const double> values);

/// Two-sided Welch two-sample t-test. For two groups a one-way ANOVA gives
/// F = t^2 under pooled variances; the unequal-variance form is used here.
struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    double meanA = 0.0;
    double meanB = 0.0;

    double f() const { return t * t; }
};

/// Needs at least two values per arm. When both variances are zero, p is 1
/// for equal means and 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace analogator

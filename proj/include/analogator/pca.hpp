#pragma once

// Principal component analysis of hidden-layer activations.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace analogator {

using Matrix = std::vector<std::vector<double>>;

/// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
/// descending order with matching unit eigenvectors (one per row of
/// `vectors`).
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
    int sweeps = 0;
};
EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tolerance = 1e-15, int maxSweeps = 100);

struct PcaResult {
    std::vector<double> mean;
    Matrix components;          // orthonormal rows, largest-magnitude entry positive
    std::vector<double> eigenvalues;  // non-increasing, covariance uses 1/(n-1)
    Matrix projections;         // one row per point
    bool degenerate = false;    // every eigenvalue is zero
};

/// Throws std::invalid_argument for fewer than two points or ragged input.
PcaResult pca(const Matrix& points);

struct Separation {
    double threshold = 0.0;
    double accuracy = 0.0;
    bool positiveAbove = true;  // label 1 predicted for values above the threshold
};

/// Best single-threshold classifier of binary labels on one component
/// (1-based).
Separation separation_check(const Matrix& projections, std::span<const int> labels, std::size_t component = 1);

/// Labeled hidden vectors.
struct HiddenTrace {
    std::vector<std::string> labels;
    Matrix points;
};

/// `TRACE <count> <dim>`, optional `#` line, then `<label> <v1> ... <vd>` rows.
void write_trace(std::ostream& os, const HiddenTrace& trace, const std::string& comment = {});
HiddenTrace read_trace(std::istream& is);

/// `label,pc1,pc2,...` rows after a `#` provenance line and a header row.
void write_projections(std::ostream& os, const HiddenTrace& trace, const PcaResult& result, std::size_t components,
                       const std::string& comment = {});

}  // namespace analogator

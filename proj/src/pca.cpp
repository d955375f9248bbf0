#include "analogator/pca.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "analogator/util.hpp"

namespace analogator {

EigenDecomposition jacobi_eigen(const Matrix& symmetric, double tolerance, int maxSweeps) {
    const std::size_t n = symmetric.size();
    for (const auto& row : symmetric)
        if (row.size() != n) throw std::invalid_argument("jacobi_eigen: matrix is not square");
    Matrix a = symmetric;
    Matrix v(n, std::vector<double>(n, 0.0));  // columns are eigenvectors
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    double total = 0.0;
    for (const auto& row : a)
        for (double x : row) total += x * x;
    EigenDecomposition out;
    for (; out.sweeps < maxSweeps; ++out.sweeps) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off <= tolerance * tolerance * total || off == 0.0) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
    for (auto i : order) {
        out.values.push_back(a[i][i]);
        std::vector<double> vec(n);
        for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][i];
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

PcaResult pca(const Matrix& points) {
    if (points.size() < 2) throw std::invalid_argument("pca: need at least two points");
    const std::size_t d = points[0].size();
    if (d == 0) throw std::invalid_argument("pca: zero-dimensional points");
    for (const auto& p : points)
        if (p.size() != d) throw std::invalid_argument("pca: points differ in dimension");
    const double n = static_cast<double>(points.size());

    PcaResult r;
    r.mean.assign(d, 0.0);
    for (const auto& p : points)
        for (std::size_t j = 0; j < d; ++j) r.mean[j] += p[j];
    for (auto& m : r.mean) m /= n;

    Matrix centered = points;
    for (auto& p : centered)
        for (std::size_t j = 0; j < d; ++j) p[j] -= r.mean[j];

    Matrix cov(d, std::vector<double>(d, 0.0));
    for (const auto& p : centered)
        for (std::size_t i = 0; i < d; ++i) {
            if (p[i] == 0.0) continue;
            for (std::size_t j = i; j < d; ++j) cov[i][j] += p[i] * p[j];
        }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov[i][j] /= (n - 1.0);
            cov[j][i] = cov[i][j];
        }

    auto eig = jacobi_eigen(cov);
    r.eigenvalues = eig.values;
    for (auto& ev : r.eigenvalues)
        if (ev < 0.0 && ev > -1e-12) ev = 0.0;
    r.degenerate = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [](double x) { return x == 0.0; });
    for (auto& vec : eig.vectors) {
        std::size_t big = 0;
        for (std::size_t k = 1; k < d; ++k)
            if (std::fabs(vec[k]) > std::fabs(vec[big])) big = k;
        if (vec[big] < 0.0)
            for (auto& x : vec) x = -x;
    }
    r.components = std::move(eig.vectors);

    r.projections.reserve(centered.size());
    for (const auto& p : centered) {
        std::vector<double> proj(d, 0.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) proj[k] += p[j] * r.components[k][j];
        r.projections.push_back(std::move(proj));
    }
    return r;
}

Separation separation_check(const Matrix& projections, std::span<const int> labels, std::size_t component) {
    if (projections.size() != labels.size() || projections.empty()) {
        throw std::invalid_argument("separation_check: need one label per projection");
    }
    if (component == 0) throw std::invalid_argument("separation_check: components are numbered from 1");
    std::vector<std::pair<double, int>> pts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("separation_check: labels must be 0 or 1");
        if (projections[i].size() < component) throw std::invalid_argument("separation_check: component out of range");
        pts.emplace_back(projections[i][component - 1], labels[i]);
    }
    std::sort(pts.begin(), pts.end());
    const double n = static_cast<double>(pts.size());
    const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

    // Threshold below point k: points [0, k) predicted one side, [k, n) the other.
    Separation best;
    best.accuracy = -1.0;
    std::size_t onesBelow = 0;
    for (std::size_t k = 0; k <= pts.size(); ++k) {
        if (k > 0) onesBelow += static_cast<std::size_t>(pts[k - 1].second);
        if (k > 0 && k < pts.size() && pts[k].first == pts[k - 1].first) continue;
        const double threshold = k == 0 ? pts.front().first - 1.0
                                 : k == pts.size() ? pts.back().first + 1.0
                                                   : 0.5 * (pts[k - 1].first + pts[k].first);
        const std::size_t zerosBelow = k - onesBelow;
        const std::size_t onesAbove = ones - onesBelow;
        const double above = static_cast<double>(zerosBelow + onesAbove) / n;  // ones above
        const double below = 1.0 - above;
        if (above > best.accuracy) best = {threshold, above, true};
        if (below > best.accuracy) best = {threshold, below, false};
    }
    return best;
}

void write_trace(std::ostream& os, const HiddenTrace& t, const std::string& comment) {
    const std::size_t dim = t.points.empty() ? 0 : t.points[0].size();
    os << "TRACE " << t.points.size() << ' ' << dim << '\n';
    if (!comment.empty()) os << "# " << comment << '\n';
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        os << t.labels.at(i);
        for (double x : t.points[i]) os << ' ' << format_real17(x);
        os << '\n';
    }
}

HiddenTrace read_trace(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace: empty input");
    const auto head = split_ws(line);
    if (head.size() != 3 || head[0] != "TRACE") throw std::runtime_error("trace: bad header '" + line + "'");
    const auto count = static_cast<std::size_t>(parse_integer(head[1]));
    const auto dim = static_cast<std::size_t>(parse_integer(head[2]));
    HiddenTrace t;
    while (t.points.size() < count) {
        if (!std::getline(is, line)) throw std::runtime_error("trace: truncated input");
        if (line.empty() || line[0] == '#') continue;
        auto tok = split_ws(line);
        if (tok.size() != dim + 1) throw std::runtime_error("trace: row has wrong width");
        t.labels.push_back(tok[0]);
        std::vector<double> p;
        for (std::size_t k = 1; k < tok.size(); ++k) p.push_back(parse_real(tok[k]));
        t.points.push_back(std::move(p));
    }
    return t;
}

void write_projections(std::ostream& os, const HiddenTrace& t, const PcaResult& r, std::size_t components,
                       const std::string& comment) {
    if (!comment.empty()) os << "# " << comment << '\n';
    components = std::min(components, r.components.size());
    os << "label";
    for (std::size_t k = 0; k < components; ++k) os << ",pc" << (k + 1);
    os << '\n';
    for (std::size_t i = 0; i < r.projections.size(); ++i) {
        os << t.labels.at(i);
        for (std::size_t k = 0; k < components; ++k) os << ',' << format_real17(r.projections[i][k]);
        os << '\n';
    }
}

}  // namespace analogator

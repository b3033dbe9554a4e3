#include "ltccp/nn/matrix.hpp"

#include <cassert>

namespace ltccp::nn {

void matvec(const Matrix& m, std::span<const double> v, std::span<double> out) {
    assert(v.size() == m.cols() && out.size() == m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
}

void matvec_transposed_add(const Matrix& m, std::span<const double> v, std::span<double> out) {
    assert(v.size() == m.rows() && out.size() == m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        const double s = v[r];
        for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * s;
    }
}

void outer_add(Matrix& m, std::span<const double> a, std::span<const double> b) {
    assert(a.size() == m.rows() && b.size() == m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double s = a[r];
        if (s == 0.0) continue;
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) += s * b[c];
    }
}

}  // namespace ltccp::nn

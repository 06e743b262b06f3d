#pragma once

// Dense exact linear algebra over Rational: rank, row reduction, kernel
// bases, and dimension of intersections via rank arithmetic.

#include <vector>

#include "rational.hpp"

namespace kdr {

using QRow = std::vector<Rational>;
using QMatrix = std::vector<QRow>;

// Row-reduce in place; returns pivot column per reduced row.
inline std::vector<int> rref(QMatrix& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && m[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[r]);
        Rational inv = m[r][c].inv();
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

inline size_t rank(QMatrix m) { return rref(m).size(); }

// Kernel of the linear map given by columns of m (m: rows x cols), i.e.
// vectors v with m v = 0. Returns a basis as rows of length cols.
inline QMatrix kernel_basis(const QMatrix& m, size_t cols) {
    QMatrix a = m;
    for (auto& row : a) row.resize(cols);
    std::vector<int> piv = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : piv) is_pivot[c] = true;
    QMatrix out;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        QRow v(cols);
        v[c] = Rational(1);
        for (size_t r = 0; r < piv.size(); ++r) {
            if (static_cast<size_t>(piv[r]) < c && r < a.size()) v[piv[r]] = -a[r][c];
        }
        out.push_back(std::move(v));
    }
    return out;
}

// dim(span(A) ∩ span(B)) = rank A + rank B - rank [A; B].
inline size_t intersection_dim(const QMatrix& a, const QMatrix& b) {
    QMatrix all = a;
    all.insert(all.end(), b.begin(), b.end());
    return rank(a) + rank(b) - rank(all);
}

} // namespace kdr

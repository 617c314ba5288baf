#ifndef WEIL_LINALG_HPP
#define WEIL_LINALG_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace weil {

// Dense exact-rational matrix.  Small sizes only (algebra dimensions and
// diagram node counts), so simple Gauss-Jordan is plenty.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::logic_error("matrix dimension mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& v = at(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) += v * o.at(k, j);
            }
        return r;
    }

    std::vector<Rat> apply(const std::vector<Rat>& x) const {
        if (cols_ != x.size()) throw std::logic_error("matrix dimension mismatch");
        std::vector<Rat> y(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0) y[i] += at(i, j) * x[j];
        return y;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

// In-place reduced row echelon form.  Returns the rank; if `pivot_cols` is
// given it receives the pivot column indices in row order.
inline std::size_t rref(Mat& m, std::vector<std::size_t>* pivot_cols = nullptr) {
    if (pivot_cols) pivot_cols->clear();
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(row, j));
        const Rat inv = Rat(1) / m.at(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            const Rat f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++row;
    }
    return row;
}

inline std::size_t rank(Mat m) { return rref(m); }

// Basis of the right nullspace {x : Mx = 0}, one vector per free column,
// ordered by free column index.  Deterministic, so tests can freeze results.
inline std::vector<std::vector<Rat>> nullspace(Mat m) {
    std::vector<std::size_t> pivots;
    rref(m, &pivots);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(m.cols(), Rat(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// One exact solution of Ax = b (free variables set to zero), or nullopt if
// the system is inconsistent.
inline std::optional<std::vector<Rat>> solve(const Mat& a, const std::vector<Rat>& b) {
    if (a.rows() != b.size()) throw std::logic_error("matrix dimension mismatch");
    Mat aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    std::vector<std::size_t> pivots;
    rref(aug, &pivots);
    for (std::size_t c : pivots)
        if (c == a.cols()) return std::nullopt;  // pivot in the constant column
    std::vector<Rat> x(a.cols(), Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

// copies-by-copies block-diagonal repetition of m.
inline Mat block_diag(const Mat& m, std::size_t copies) {
    Mat out(m.rows() * copies, m.cols() * copies);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                out.at(c * m.rows() + i, c * m.cols() + j) = m.at(i, j);
    return out;
}

// Stack the columns of `vectors` into a matrix (each vector one column).
inline Mat columns(const std::vector<std::vector<Rat>>& vectors, std::size_t height) {
    Mat m(height, vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != height) throw std::logic_error("matrix dimension mismatch");
        for (std::size_t i = 0; i < height; ++i) m.at(i, j) = vectors[j][i];
    }
    return m;
}

} // namespace weil

#endif

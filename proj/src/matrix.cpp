#include "multarr/matrix.hpp"

#include <algorithm>

namespace multarr {

Matrix Matrix::identity(const Field& f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
}

Matrix Matrix::from_rows(const Field& f, const std::vector<std::vector<Scalar>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    Matrix m(f, r, c);
    for (int i = 0; i < r; ++i) {
        require_internal(static_cast<int>(rows[i].size()) == c, "ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

int Matrix::rank() const {
    // Bareiss fraction-free elimination; exact division by the previous pivot.
    Matrix m = *this;
    Scalar prev = field_->one();
    int rank = 0;
    for (int col = 0; col < cols_ && rank < rows_; ++col) {
        int piv = -1;
        for (int i = rank; i < rows_; ++i)
            if (!m.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(rank, j));
        for (int i = rank + 1; i < rows_; ++i) {
            for (int j = col + 1; j < cols_; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(rank, col) - m.at(i, col) * m.at(rank, j)) / prev;
            m.at(i, col) = field_->zero();
        }
        prev = m.at(rank, col);
        ++rank;
    }
    return rank;
}

Scalar Matrix::det() const {
    require_input(rows_ == cols_, "determinant requires a square matrix");
    if (rows_ == 0) return field_->one();
    Matrix m = *this;
    Scalar prev = field_->one();
    bool negate = false;
    for (int k = 0; k < rows_ - 1; ++k) {
        int piv = -1;
        for (int i = k; i < rows_; ++i)
            if (!m.at(i, k).is_zero()) { piv = i; break; }
        if (piv < 0) return field_->zero();
        if (piv != k) {
            negate = !negate;
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(k, j));
        }
        for (int i = k + 1; i < rows_; ++i) {
            for (int j = k + 1; j < cols_; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
            m.at(i, k) = field_->zero();
        }
        prev = m.at(k, k);
    }
    Scalar d = m.at(rows_ - 1, rows_ - 1);
    return negate ? -d : d;
}

Matrix Matrix::rref(std::vector<int>* pivot_cols) const {
    Matrix m = *this;
    if (pivot_cols) pivot_cols->clear();
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
        int piv = -1;
        for (int i = r; i < rows_; ++i)
            if (!m.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(r, j));
        Scalar inv = m.at(r, col).inverse();
        for (int j = col; j < cols_; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r || m.at(i, col).is_zero()) continue;
            Scalar factor = m.at(i, col);
            for (int j = col; j < cols_; ++j) m.at(i, j) -= factor * m.at(r, j);
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++r;
    }
    return m;
}

std::vector<std::vector<Scalar>> Matrix::kernel_basis() const {
    std::vector<int> pivots;
    Matrix r = rref(&pivots);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Scalar>> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Scalar> v(cols_, field_->zero());
        v[f] = field_->one();
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = -r.at(static_cast<int>(pr), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

Matrix Matrix::inverse() const {
    require_input(rows_ == cols_, "inverse requires a square matrix");
    Matrix aug(*field_, rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = field_->one();
    }
    std::vector<int> pivots;
    Matrix r = aug.rref(&pivots);
    require_input(static_cast<int>(pivots.size()) == rows_ &&
                      (rows_ == 0 || pivots[rows_ - 1] < cols_),
                  "matrix is singular");
    Matrix inv(*field_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv.at(i, j) = r.at(i, cols_ + j);
    return inv;
}

std::vector<Scalar> Matrix::mul_vec(const std::vector<Scalar>& v) const {
    require_internal(static_cast<int>(v.size()) == cols_, "dimension mismatch");
    std::vector<Scalar> out(rows_, field_->zero());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
}

int Matrix::cmp(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_ ? -1 : 1;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_ ? -1 : 1;
    for (size_t i = 0; i < a.a_.size(); ++i) {
        int c = Scalar::cmp(a.a_[i], b.a_[i]);
        if (c != 0) return c;
    }
    return 0;
}

Matrix row_space_basis(const Field& f, const std::vector<std::vector<Scalar>>& rows) {
    Matrix m = Matrix::from_rows(f, rows);
    std::vector<int> pivots;
    Matrix r = m.rref(&pivots);
    Matrix out(f, static_cast<int>(pivots.size()), m.cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = r.at(i, j);
    return out;
}

bool in_row_span(const Matrix& basis, const std::vector<Scalar>& v) {
    // v in span iff appending v does not raise the rank.
    std::vector<std::vector<Scalar>> rows;
    for (int i = 0; i < basis.rows(); ++i) {
        std::vector<Scalar> row;
        for (int j = 0; j < basis.cols(); ++j) row.push_back(basis.at(i, j));
        rows.push_back(std::move(row));
    }
    rows.push_back(v);
    return Matrix::from_rows(basis.field(), rows).rank() == basis.rows();
}

} // namespace multarr

#ifndef MULTARR_MATRIX_HPP
#define MULTARR_MATRIX_HPP

#include <vector>

#include "multarr/field.hpp"

namespace multarr {

/// Dense row-major matrix of exact scalars over a single field.
class Matrix {
  public:
    Matrix() : Matrix(Field::rationals(), 0, 0) {}
    Matrix(const Field& f, int rows, int cols)
        : field_(&f), rows_(rows), cols_(cols),
          a_(static_cast<size_t>(rows) * cols, f.zero()) {}

    static Matrix identity(const Field& f, int n);
    static Matrix from_rows(const Field& f, const std::vector<std::vector<Scalar>>& rows);

    const Field& field() const { return *field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const Matrix& o) const;

    /// Rank by fraction-free (Bareiss) elimination; pivot = first nonzero
    /// entry in the column, lowest row index.
    int rank() const;

    /// Exact determinant (square), fraction-free.
    Scalar det() const;

    /// Reduced row echelon form; records pivot columns if requested.
    Matrix rref(std::vector<int>* pivot_cols = nullptr) const;

    /// Basis of the right null space (empty for full column rank). Vectors
    /// come from the RREF free columns, in increasing free-column order.
    std::vector<std::vector<Scalar>> kernel_basis() const;

    Matrix inverse() const; // square, invertible

    std::vector<Scalar> mul_vec(const std::vector<Scalar>& v) const;

    /// Lexicographic comparison on shape then entries (canonical flat keys).
    static int cmp(const Matrix& a, const Matrix& b);
    bool operator<(const Matrix& o) const { return cmp(*this, o) < 0; }

  private:
    const Field* field_;
    int rows_, cols_;
    std::vector<Scalar> a_;
};

/// RREF basis matrix of the row span of the given vectors (zero rows dropped).
/// Canonical for the subspace: two spans are equal iff the results are equal.
Matrix row_space_basis(const Field& f, const std::vector<std::vector<Scalar>>& rows);

/// True iff v lies in the row span of `basis` (basis in RREF).
bool in_row_span(const Matrix& basis, const std::vector<Scalar>& v);

} // namespace multarr

#endif

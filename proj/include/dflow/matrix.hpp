#ifndef DFLOW_MATRIX_HPP
#define DFLOW_MATRIX_HPP

// Dense exact-rational matrices and the elimination routines the rest of the
// library is built on: rank, kernel bases, and linear solves, all over
// dflow::Rational with no rounding anywhere.
//
// Pivoting rule: within the current column, the candidate with the largest
// numerator magnitude is chosen (ties broken by the smallest row index). The
// choice never affects results -- everything here is exact -- but it is fixed
// so that eliminations, and therefore emitted certificates, are reproducible.

#include <cstddef>
#include <optional>
#include <vector>

#include "dflow/rational.hpp"

namespace dflow {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n);
    /// Builds a matrix from equally sized rows; throws ValidationError otherwise.
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows,
                            std::size_t cols_if_empty = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<Rational> row(std::size_t r) const;
    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    /// Matrix-vector product.
    std::vector<Rational> apply(const std::vector<Rational>& x) const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::size_t rank() const;

    /// Basis of the right kernel {x : Mx = 0}; empty when the kernel is {0}.
    /// One vector per non-pivot column, the canonical reduced-echelon basis.
    std::vector<std::vector<Rational>> kernel_basis() const;

    /// One solution of Mx = rhs, or nullopt when the system is inconsistent.
    /// Non-pivot variables are set to zero.
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& rhs) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

/// Eliminates a full-row-rank matrix once so that many right-hand sides can be
/// solved cheaply afterwards. Construction throws PreconditionError when the
/// matrix does not have full row rank.
class PreparedSolver {
public:
    explicit PreparedSolver(const Matrix& m);

    /// The solution of Mx = rhs with all non-pivot variables set to zero.
    std::vector<Rational> solve(const std::vector<Rational>& rhs) const;

private:
    std::size_t cols_ = 0;
    std::vector<std::size_t> pivot_cols_;  // one per row of the input
    Matrix transform_;                     // T with T*M in reduced echelon form
};

/// Incremental independence test over row vectors: rows are accepted only when
/// they enlarge the span of the rows accepted before. Cheap to copy, which is
/// how branching searches snapshot their state.
class RankAccumulator {
public:
    explicit RankAccumulator(std::size_t cols) : cols_(cols) {}

    /// True iff the row is independent of the accepted rows; accepted rows
    /// are folded into the internal reduced basis.
    bool try_add(const std::vector<Rational>& row);

    /// Independence test without accepting.
    bool would_grow(const std::vector<Rational>& row) const;

    std::size_t rank() const { return basis_.size(); }
    std::size_t cols() const { return cols_; }

private:
    // Reduces the row against the basis; returns the remainder's first nonzero
    // column, or cols_ when the row is dependent.
    std::size_t reduce(std::vector<Rational>& v) const;

    std::size_t cols_;
    std::vector<std::vector<Rational>> basis_;  // mutually reduced, pivots normalized to 1
    std::vector<std::size_t> pivots_;
};

/// True iff x and y are parallel (x = c*y for a nonzero rational c).
/// The zero vector is parallel only to the zero vector.
bool parallel(const std::vector<Rational>& x, const std::vector<Rational>& y);

}  // namespace dflow

#endif  // DFLOW_MATRIX_HPP

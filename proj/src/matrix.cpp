#include "dflow/matrix.hpp"

#include <utility>

#include "dflow/error.hpp"

namespace dflow {

namespace {

struct Echelon {
    std::vector<std::vector<Rational>> rows;
    // pivots[i] is the pivot column of row i; pivot rows occupy the prefix.
    std::vector<std::size_t> pivots;
};

// Reduced row echelon form over the first pivot_limit columns. Any further
// columns (an augmented right-hand side or identity block) ride along in the
// row operations but are never chosen as pivots.
Echelon reduced_echelon(std::vector<std::vector<Rational>> rows, std::size_t pivot_limit) {
    Echelon e;
    e.rows = std::move(rows);
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < pivot_limit && next_row < e.rows.size(); ++col) {
        // Largest numerator magnitude wins; ties go to the smallest row index.
        std::size_t best = e.rows.size();
        Int best_key;
        for (std::size_t i = next_row; i < e.rows.size(); ++i) {
            if (e.rows[i][col].is_zero()) continue;
            Int key = boost::multiprecision::abs(e.rows[i][col].numerator());
            if (best == e.rows.size() || key > best_key) {
                best = i;
                best_key = key;
            }
        }
        if (best == e.rows.size()) continue;
        std::swap(e.rows[next_row], e.rows[best]);

        auto& pivot_row = e.rows[next_row];
        const Rational pivot = pivot_row[col];
        for (std::size_t j = col; j < pivot_row.size(); ++j) {
            if (!pivot_row[j].is_zero()) pivot_row[j] /= pivot;
        }
        for (std::size_t i = 0; i < e.rows.size(); ++i) {
            if (i == next_row || e.rows[i][col].is_zero()) continue;
            const Rational factor = e.rows[i][col];
            auto& target = e.rows[i];
            for (std::size_t j = col; j < target.size(); ++j) {
                if (!pivot_row[j].is_zero()) target[j] -= factor * pivot_row[j];
            }
        }
        e.pivots.push_back(col);
        ++next_row;
    }
    return e;
}

std::vector<std::vector<Rational>> to_rows(const Matrix& m, std::size_t extra_cols = 0) {
    std::vector<std::vector<Rational>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows[i].resize(m.cols() + extra_cols);
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m.at(i, j);
    }
    return rows;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows,
                         std::size_t cols_if_empty) {
    if (rows.empty()) return Matrix(0, cols_if_empty);
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw ValidationError("matrix rows of unequal length");
        }
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Rational> Matrix::row(std::size_t r) const {
    std::vector<Rational> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = at(r, j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    }
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) {
        throw ValidationError("matrix product dimension mismatch");
    }
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                if (!o.at(k, j).is_zero()) p.at(i, j) += at(i, k) * o.at(k, j);
            }
        }
    }
    return p;
}

std::vector<Rational> Matrix::apply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) {
        throw ValidationError("matrix-vector dimension mismatch");
    }
    std::vector<Rational> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!at(i, j).is_zero() && !x[j].is_zero()) y[i] += at(i, j) * x[j];
        }
    }
    return y;
}

std::size_t Matrix::rank() const { return reduced_echelon(to_rows(*this), cols_).pivots.size(); }

std::vector<std::vector<Rational>> Matrix::kernel_basis() const {
    const Echelon e = reduced_echelon(to_rows(*this), cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t col : e.pivots) is_pivot[col] = true;

    std::vector<std::vector<Rational>> basis;
    for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(cols_);
        v[free_col] = Rational(1);
        for (std::size_t i = 0; i < e.pivots.size(); ++i) {
            v[e.pivots[i]] = -e.rows[i][free_col];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> Matrix::solve(const std::vector<Rational>& rhs) const {
    if (rhs.size() != rows_) {
        throw ValidationError("solve right-hand side dimension mismatch");
    }
    auto rows = to_rows(*this, 1);
    for (std::size_t i = 0; i < rows_; ++i) rows[i][cols_] = rhs[i];
    const Echelon e = reduced_echelon(std::move(rows), cols_);
    for (std::size_t i = e.pivots.size(); i < rows_; ++i) {
        if (!e.rows[i][cols_].is_zero()) return std::nullopt;
    }
    std::vector<Rational> x(cols_);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.rows[i][cols_];
    return x;
}

PreparedSolver::PreparedSolver(const Matrix& m) : cols_(m.cols()) {
    auto rows = to_rows(m, m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i][m.cols() + i] = Rational(1);
    Echelon e = reduced_echelon(std::move(rows), m.cols());
    if (e.pivots.size() != m.rows()) {
        throw PreconditionError("PreparedSolver requires a matrix of full row rank");
    }
    pivot_cols_ = e.pivots;
    transform_ = Matrix(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.rows(); ++j) {
            transform_.at(i, j) = e.rows[i][m.cols() + j];
        }
    }
}

std::vector<Rational> PreparedSolver::solve(const std::vector<Rational>& rhs) const {
    const std::vector<Rational> y = transform_.apply(rhs);
    std::vector<Rational> x(cols_);
    for (std::size_t i = 0; i < pivot_cols_.size(); ++i) x[pivot_cols_[i]] = y[i];
    return x;
}

std::size_t RankAccumulator::reduce(std::vector<Rational>& v) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const Rational c = v[pivots_[i]];
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!basis_[i][j].is_zero()) v[j] -= c * basis_[i][j];
        }
    }
    for (std::size_t j = 0; j < cols_; ++j) {
        if (!v[j].is_zero()) return j;
    }
    return cols_;
}

bool RankAccumulator::would_grow(const std::vector<Rational>& row) const {
    if (row.size() != cols_) {
        throw ValidationError("rank accumulator row dimension mismatch");
    }
    std::vector<Rational> v = row;
    return reduce(v) != cols_;
}

bool RankAccumulator::try_add(const std::vector<Rational>& row) {
    if (row.size() != cols_) {
        throw ValidationError("rank accumulator row dimension mismatch");
    }
    std::vector<Rational> v = row;
    const std::size_t pivot = reduce(v);
    if (pivot == cols_) return false;
    const Rational p = v[pivot];
    for (std::size_t j = 0; j < cols_; ++j) {
        if (!v[j].is_zero()) v[j] /= p;
    }
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const Rational c = basis_[i][pivot];
        if (c.is_zero()) continue;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!v[j].is_zero()) basis_[i][j] -= c * v[j];
        }
    }
    basis_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
}

bool parallel(const std::vector<Rational>& x, const std::vector<Rational>& y) {
    if (x.size() != y.size()) return false;
    std::size_t first = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i].is_zero()) {
            first = i;
            break;
        }
    }
    if (first == x.size()) {
        for (const auto& v : y) {
            if (!v.is_zero()) return false;
        }
        return true;
    }
    if (y[first].is_zero()) return false;
    const Rational c = x[first] / y[first];
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != c * y[i]) return false;
    }
    return true;
}

}  // namespace dflow

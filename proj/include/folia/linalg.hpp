#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace folia {

// Dense matrices over a coefficient field, sized for nerve-scale problems.
// Elimination uses the first nonzero entry as pivot on exact fields and the
// entry of largest magnitude on the inexact backend; both rules are
// deterministic, and solutions pin every free variable to zero.
template <class K>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, K(0)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    K& at(int i, int j) { return a_[i * cols_ + j]; }
    const K& at(int i, int j) const { return a_[i * cols_ + j]; }

    static Matrix from_columns(const std::vector<std::vector<K>>& cols) {
        if (cols.empty()) return Matrix(0, 0);
        Matrix m((int)cols[0].size(), (int)cols.size());
        for (int j = 0; j < m.cols_; ++j)
            for (int i = 0; i < m.rows_; ++i) m.at(i, j) = cols[j][i];
        return m;
    }

    Matrix augmented(const Matrix& right) const {
        if (rows_ != right.rows_) throw std::invalid_argument("augment: row mismatch");
        Matrix m(rows_, cols_ + right.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
            for (int j = 0; j < right.cols_; ++j) m.at(i, cols_ + j) = right.at(i, j);
        }
        return m;
    }

    std::vector<K> apply(const std::vector<K>& x) const {
        if ((int)x.size() != cols_) throw std::invalid_argument("apply: size mismatch");
        std::vector<K> y(rows_, K(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !x[j].is_zero()) y[i] += at(i, j) * x[j];
        return y;
    }

  private:
    int rows_, cols_;
    std::vector<K> a_;
};

// Row echelon factorization of [M | rhs-space]: records the reduced rows and
// pivot structure so that ranks, kernels and multiple solves share one
// elimination.
template <class K>
class Echelon {
  public:
    explicit Echelon(Matrix<K> m) : r_(std::move(m)) {
        pivot_col_.assign(r_.rows(), -1);
        int row = 0;
        for (int col = 0; col < r_.cols() && row < r_.rows(); ++col) {
            int p = pick_pivot(row, col);
            if (p < 0) continue;
            swap_rows(row, p);
            K inv = r_.at(row, col).inverse();
            for (int j = col; j < r_.cols(); ++j) r_.at(row, j) = inv * r_.at(row, j);
            for (int i = 0; i < r_.rows(); ++i) {
                if (i == row || r_.at(i, col).is_zero()) continue;
                K f = r_.at(i, col);
                for (int j = col; j < r_.cols(); ++j) r_.at(i, j) -= f * r_.at(row, j);
            }
            pivot_col_[row] = col;
            col_of_pivot_.push_back(col);
            ++row;
        }
        rank_ = row;
    }

    int rank() const { return rank_; }
    const std::vector<int>& pivot_columns() const { return col_of_pivot_; }
    bool is_pivot_column(int col) const {
        for (int c : col_of_pivot_)
            if (c == col) return true;
        return false;
    }

    // Kernel basis with free variables swept one at a time.
    std::vector<std::vector<K>> kernel_basis() const {
        std::vector<std::vector<K>> basis;
        std::vector<int> pivot_row_of_col(r_.cols(), -1);
        for (int i = 0; i < rank_; ++i) pivot_row_of_col[col_of_pivot_[i]] = i;
        for (int free = 0; free < r_.cols(); ++free) {
            if (pivot_row_of_col[free] >= 0) continue;
            std::vector<K> v(r_.cols(), K(0));
            v[free] = K(1);
            for (int i = 0; i < rank_; ++i)
                v[col_of_pivot_[i]] = -r_.at(i, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    int pick_pivot(int from_row, int col) const {
        if constexpr (K::is_exact) {
            for (int i = from_row; i < r_.rows(); ++i)
                if (!r_.at(i, col).is_zero()) return i;
            return -1;
        } else {
            int best = -1;
            auto mag = r_.at(from_row, col).abs2();
            for (int i = from_row; i < r_.rows(); ++i) {
                auto m = r_.at(i, col).abs2();
                if (best < 0 ? !r_.at(i, col).is_zero() : m > mag) {
                    if (!r_.at(i, col).is_zero()) { best = i; mag = m; }
                }
            }
            return best;
        }
    }
    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < r_.cols(); ++j) std::swap(r_.at(a, j), r_.at(b, j));
    }

    Matrix<K> r_;
    std::vector<int> pivot_col_;
    std::vector<int> col_of_pivot_;
    int rank_;
};

// Solve M x = b with free variables pinned to zero; nullopt when inconsistent.
template <class K>
std::optional<std::vector<K>> solve_pinned(const Matrix<K>& m, const std::vector<K>& b) {
    Matrix<K> rhs((int)b.size(), 1);
    for (int i = 0; i < (int)b.size(); ++i) rhs.at(i, 0) = b[i];
    Echelon<K> e(m.augmented(rhs));
    // consistent iff the rhs column is not a pivot column
    if (e.is_pivot_column(m.cols())) return std::nullopt;
    // read the particular solution off the kernel vector of the augmented
    // system whose rhs coordinate is -1
    for (const auto& v : e.kernel_basis()) {
        if (v[m.cols()].is_zero()) continue;
        std::vector<K> x(m.cols());
        K scale = -(v[m.cols()].inverse());
        for (int j = 0; j < m.cols(); ++j) x[j] = scale * v[j];
        // zero out contributions of other free columns: kernel_basis sweeps
        // one free variable at a time, so v already has all other free
        // coordinates zero
        return x;
    }
    return std::nullopt;
}

template <class K>
int rank_of(const Matrix<K>& m) {
    return Echelon<K>(m).rank();
}

}  // namespace folia

#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "torusmin/numbers.hpp"

namespace torusmin {

// Dense exact matrix, row-major. Used with T = Int and T = Rat.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dims");
    }
    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw std::invalid_argument("Mat: ragged initializer");
            for (const auto& v : row) a_.push_back(v);
        }
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(int i, int j) { return a_[i * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Mat operator+(const Mat& o) const {
        check_same_shape(o);
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        check_same_shape(o);
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Mat: shape mismatch in mul");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }
    Mat operator*(const T& s) const {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw std::invalid_argument("Mat: shape mismatch in matvec");
        std::vector<T> r(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    Mat pow(const Int& e) const {
        if (!square()) throw std::invalid_argument("Mat: pow of non-square");
        if (e < 0) throw std::invalid_argument("Mat: negative power");
        Mat result = identity(rows_), b = *this;
        Int k = e;
        while (k > 0) {
            if ((k & 1) != 0) result = result * b;
            k >>= 1;
            if (k > 0) b = b * b;
        }
        return result;
    }

    template <typename U>
    Mat<U> cast() const {
        Mat<U> r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = U(a_[i * cols_ + j]);
        return r;
    }

    // Block [r0, r0+h) x [c0, c0+w)
    Mat block(int r0, int c0, int h, int w) const {
        Mat r(h, w);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

  private:
    void check_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Mat: shape mismatch");
    }

    int rows_, cols_;
    std::vector<T> a_;
};

using IntMatrix = Mat<Int>;
using RatMatrix = Mat<Rat>;

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m) {
    if (!m.square()) throw std::invalid_argument("det: non-square");
    int n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix& m) {
    if (!m.square()) return false;
    Int d = det(m);
    return d == 1 || d == -1;
}

// Gaussian elimination over Q; returns the inverse.
inline RatMatrix inverse(const RatMatrix& m) {
    if (!m.square()) throw std::invalid_argument("inverse: non-square");
    int n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        int p = -1;
        for (int i = k; i < n; ++i)
            if (a(i, k) != 0) { p = i; break; }
        if (p < 0) throw std::domain_error("inverse: singular matrix");
        if (p != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        Rat piv = a(k, k);
        for (int j = 0; j < n; ++j) { a(k, j) /= piv; inv(k, j) /= piv; }
        for (int i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat f = a(i, k);
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

// Integer inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    RatMatrix inv = inverse(m.template cast<Rat>());
    IntMatrix r(inv.rows(), inv.cols());
    for (int i = 0; i < inv.rows(); ++i)
        for (int j = 0; j < inv.cols(); ++j) {
            if (den(inv(i, j)) != 1)
                throw std::domain_error("unimodular_inverse: matrix is not unimodular");
            r(i, j) = num(inv(i, j));
        }
    return r;
}

// Basis of the (right) kernel over Q, as columns of the returned matrix.
inline RatMatrix kernel_basis(const RatMatrix& m) {
    int rows = m.rows(), cols = m.cols();
    RatMatrix a = m;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols; ++j) std::swap(a(r, j), a(p, j));
        Rat piv = a(r, c);
        for (int j = 0; j < cols; ++j) a(r, j) /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rat f = a(i, c);
            for (int j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<int> free_cols;
    {
        size_t pi = 0;
        for (int c = 0; c < cols; ++c) {
            if (pi < pivot_col.size() && pivot_col[pi] == c) { ++pi; continue; }
            free_cols.push_back(c);
        }
    }
    RatMatrix basis(cols, static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int fc = free_cols[k];
        basis(fc, static_cast<int>(k)) = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i)
            basis(pivot_col[i], static_cast<int>(k)) = -a(static_cast<int>(i), fc);
    }
    return basis;
}

}  // namespace torusmin

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

// Dense square matrix over an exact coefficient type.  T needs default
// construction (zero), construction from Rational (units), the ring
// operators, and Rational * T for the characteristic polynomial recursion.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {
        if (n < 1) throw domain_error("matrix dimension must be positive");
    }
    Matrix(int n, std::vector<T> entries) : n_(n), a_(std::move(entries)) {
        if (n < 1) throw domain_error("matrix dimension must be positive");
        if (a_.size() != static_cast<std::size_t>(n) * n)
            throw shape_mismatch_error("matrix of dimension " + std::to_string(n) + " needs " +
                                       std::to_string(n * n) + " entries");
    }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(Rational(1));
        return m;
    }

    int dim() const { return n_; }
    T& at(int i, int j) { return a_[idx(i, j)]; }
    const T& at(int i, int j) const { return a_[idx(i, j)]; }

    bool is_zero() const {
        for (const T& x : a_)
            if (!(x == T())) return false;
        return true;
    }

    T trace() const {
        T s{};
        for (int i = 0; i < n_; ++i) s = s + at(i, i);
        return s;
    }

    Matrix pow(int e) const {
        if (e < 0) throw domain_error("negative matrix power");
        Matrix r = identity(n_), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + b.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - b.a_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        a.check(b);
        Matrix r(a.n_);
        for (int i = 0; i < a.n_; ++i)
            for (int k = 0; k < a.n_; ++k) {
                const T& f = a.at(i, k);
                if (f == T()) continue;
                for (int j = 0; j < a.n_; ++j) r.at(i, j) = r.at(i, j) + f * b.at(k, j);
            }
        return r;
    }
    friend Matrix operator*(const T& c, const Matrix& a) {
        Matrix r = a;
        for (T& x : r.a_) x = c * x;
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.n_ == b.n_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    std::size_t idx(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_) throw domain_error("matrix index out of range");
        return static_cast<std::size_t>(i) * n_ + j;
    }
    void check(const Matrix& o) const {
        if (n_ != o.n_) throw shape_mismatch_error("matrix dimensions differ");
    }

    int n_ = 0;
    std::vector<T> a_;
};

template <typename U, typename T, typename F>
Matrix<U> map_entries(const Matrix<T>& m, F f) {
    Matrix<U> r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) r.at(i, j) = f(m.at(i, j));
    return r;
}

// Leading-first characteristic polynomial coefficients by the
// Faddeev-LeVerrier recursion.
template <typename T>
std::vector<T> charpoly_matrix(const Matrix<T>& a) {
    int n = a.dim();
    std::vector<T> c(n + 1);
    c[0] = T(Rational(1));
    Matrix<T> m(n);
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        for (int i = 0; i < n; ++i) m.at(i, i) = m.at(i, i) + c[k - 1];
        c[k] = Rational(-1, k) * (a * m).trace();
    }
    return c;
}

template <typename T>
T determinant(const Matrix<T>& a) {
    T c = charpoly_matrix(a).back();
    return a.dim() % 2 == 0 ? c : Rational(-1) * c;
}

// Inverse by Gauss-Jordan elimination; T must be a field type with
// inverse().
template <typename T>
Matrix<T> gauss_inverse(const Matrix<T>& a) {
    int n = a.dim();
    Matrix<T> m = a, r = Matrix<T>::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n && piv < 0; ++i)
            if (!(m.at(i, col) == T())) piv = i;
        if (piv < 0) throw domain_error("matrix is not invertible");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(r.at(piv, j), r.at(col, j));
            }
        T inv = m.at(col, col).inverse();
        for (int j = 0; j < n; ++j) {
            m.at(col, j) = inv * m.at(col, j);
            r.at(col, j) = inv * r.at(col, j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || m.at(i, col) == T()) continue;
            T f = m.at(i, col);
            for (int j = 0; j < n; ++j) {
                m.at(i, j) = m.at(i, j) - f * m.at(col, j);
                r.at(i, j) = r.at(i, j) - f * r.at(col, j);
            }
        }
    }
    return r;
}

}  // namespace modl

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orthosolve/errors.hpp"

namespace orthosolve {

// Dense real matrix, row-major storage. Values are plain; all mutation is
// local to the owning object, so sharing const references across threads is
// safe.
class Matrix {
  public:
    Matrix() = default;

    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_check(rows, cols), 0.0) {}

    Matrix(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (static_cast<std::size_t>(size_check(rows, cols)) != data_.size())
            throw ShapeMismatch("Matrix: entry count does not match rows*cols");
    }

    // Row-of-rows initializer, mostly for tests: Matrix({{1,2},{3,4}}).
    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw ShapeMismatch("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix constant(int rows, int cols, double v) {
        Matrix m(rows, cols);
        std::fill(m.data_.begin(), m.data_.end(), v);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const { return rows_ * cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool is_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    void require_same_shape(const Matrix& o, const char* what) const {
        if (!same_shape(o)) throw ShapeMismatch(std::string(what) + ": shape mismatch");
    }

  private:
    static int size_check(int rows, int cols) {
        if (rows < 0 || cols < 0) throw ShapeMismatch("Matrix: negative dimension");
        return rows * cols;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// C = A * B
inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeMismatch("multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    const int m = a.rows(), k = a.cols(), n = b.cols();
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < k; ++p) {
            const double aip = a(i, p);
            if (aip == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aip * b(p, j);
        }
    }
    return c;
}

// C = A^T * B  (no explicit transpose)
inline Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw ShapeMismatch("multiply_at_b: row counts differ");
    Matrix c(a.cols(), b.cols());
    const int m = a.rows(), k = a.cols(), n = b.cols();
    for (int p = 0; p < m; ++p) {
        for (int i = 0; i < k; ++i) {
            const double api = a(p, i);
            if (api == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += api * b(p, j);
        }
    }
    return c;
}

// C = A * B^T
inline Matrix multiply_a_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw ShapeMismatch("multiply_a_bt: column counts differ");
    Matrix c(a.rows(), b.rows());
    const int m = a.rows(), k = a.cols(), n = b.rows();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int p = 0; p < k; ++p) s += a(i, p) * b(j, p);
            c(i, j) = s;
        }
    }
    return c;
}

inline double frobenius_dot(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b, "frobenius_dot");
    double s = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
    return s;
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

// Symmetric matrix with exact entry-wise symmetry. Always built by
// symmetrization, never by trusting the input.
class SymMatrix {
  public:
    SymMatrix() = default;

    explicit SymMatrix(int dim) : m_(dim, dim) {}

    static SymMatrix identity(int n) { return SymMatrix(Matrix::identity(n), from_symmetric_tag{}); }

    static SymMatrix zero(int n) { return SymMatrix(n); }

    // (A + A^T)/2 of a square matrix.
    static SymMatrix symmetrize(const Matrix& a) {
        if (a.rows() != a.cols()) throw ShapeMismatch("SymMatrix: input not square");
        Matrix s(a.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i) {
            s(i, i) = a(i, i);
            for (int j = i + 1; j < a.cols(); ++j) {
                const double v = 0.5 * (a(i, j) + a(j, i));
                s(i, j) = v;
                s(j, i) = v;
            }
        }
        return SymMatrix(std::move(s), from_symmetric_tag{});
    }

    int dim() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    SymMatrix& operator+=(const SymMatrix& o) {
        m_ += o.m_;
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        m_ -= o.m_;
        return *this;
    }
    SymMatrix& operator*=(double s) {
        m_ *= s;
        return *this;
    }

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  private:
    struct from_symmetric_tag {};
    SymMatrix(Matrix m, from_symmetric_tag) : m_(std::move(m)) {}

    Matrix m_;
};

inline double frobenius_norm(const SymMatrix& a) { return frobenius_norm(a.matrix()); }

// sym(A) = (A + A^T)/2
inline SymMatrix sym(const Matrix& a) { return SymMatrix::symmetrize(a); }

// ---------------------------------------------------------------------------
// Plain-text matrix format: first line "rows cols", then one line per row of
// space-separated decimals printed with 17 significant digits, LF endings.
// ---------------------------------------------------------------------------

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_matrix(std::ostream& os, const Matrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_real(m(i, j));
        }
        os << '\n';
    }
}

inline void write_matrix(const std::string& path, const Matrix& m) {
    std::ofstream f(path, std::ios::binary);  // binary: keep LF on every platform
    if (!f) throw IoError("cannot open for writing: " + path);
    write_matrix(f, m);
    if (!f) throw IoError("write failed: " + path);
}

inline Matrix read_matrix(std::istream& is, const std::string& what = "<stream>") {
    int rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows <= 0 || cols <= 0)
        throw IoError("bad matrix header in " + what);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (!(is >> m(i, j))) throw IoError("truncated matrix data in " + what);
    return m;
}

inline Matrix read_matrix(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    return read_matrix(f, path);
}

}  // namespace orthosolve

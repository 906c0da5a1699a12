#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nullctl/error.hpp"

namespace nullctl {

using Vector = std::vector<double>;

// Dense row-major matrix sized for small state dimensions.
template <typename T>
class BasicMatrix {
  public:
    using value_type = T;

    BasicMatrix() = default;

    BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw InvalidArgument("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    [[nodiscard]] static BasicMatrix identity(std::size_t n) {
        BasicMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] static BasicMatrix diagonal(std::span<const T> d) {
        BasicMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] std::span<T> data() noexcept { return data_; }

    [[nodiscard]] std::span<const T> row(std::size_t i) const {
        return std::span<const T>(data_).subspan(i * cols_, cols_);
    }

    [[nodiscard]] BasicMatrix transpose() const {
        BasicMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    BasicMatrix& operator+=(const BasicMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] += o.data_[k];
        return *this;
    }

    BasicMatrix& operator-=(const BasicMatrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k)
            data_[k] -= o.data_[k];
        return *this;
    }

    BasicMatrix& operator*=(T s) {
        for (auto& v : data_)
            v *= s;
        return *this;
    }

    friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
    friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
    friend BasicMatrix operator*(BasicMatrix a, T s) { return a *= s; }
    friend BasicMatrix operator*(T s, BasicMatrix a) { return a *= s; }

    friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
        if (a.cols_ != b.rows_)
            throw InvalidArgument("matrix product dimension mismatch");
        BasicMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{})
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

  private:
    void require_same_shape(const BasicMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InvalidArgument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = BasicMatrix<double>;
using ComplexMatrix = BasicMatrix<std::complex<double>>;

[[nodiscard]] inline Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size())
        throw InvalidArgument("matrix-vector dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            y[i] += a(i, j) * x[j];
    return y;
}

[[nodiscard]] inline double norm2(std::span<const double> x) {
    double scale = 0.0;
    for (double v : x)
        scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale))
        return scale;
    double sum = 0.0;
    for (double v : x)
        sum += (v / scale) * (v / scale);
    return scale * std::sqrt(sum);
}

[[nodiscard]] inline bool all_finite(const Matrix& a) {
    for (double v : a.data())
        if (!std::isfinite(v))
            return false;
    return true;
}

[[nodiscard]] inline ComplexMatrix to_complex(const Matrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j);
    return c;
}

} // namespace nullctl

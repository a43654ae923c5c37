#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hyperact/rng.hpp"

namespace hyperact {

enum class Activation { LeakyRelu, Relu, Sigmoid };

inline constexpr double kLeakyReluSlope = 0.01;

/// Dense row-major matrix of doubles. The whole engine runs in double
/// precision; sizes are desk-scale, so simplicity beats blocking tricks.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Build from nested braces, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);
    static Matrix filled(std::size_t rows, std::size_t cols, double value);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    void fill(double value);
    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    /// "RxC" string for error messages.
    std::string shape_str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// a * b^T without materializing the transpose.
Matrix matmul_transb(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);
/// Adds a 1 x C row vector to every row of a.
Matrix add_row_broadcast(const Matrix& a, const Matrix& row);

double apply_activation_scalar(double x, Activation kind);
/// Derivative of the activation at input x (for Sigmoid, y is the output).
double activation_grad_scalar(double x, double y, Activation kind);
Matrix apply_activation(const Matrix& x, Activation kind);

/// Inverted dropout mask: each entry is 0 with probability p, else 1/(1-p).
/// Entries are drawn row-major. Requires 0 <= p < 1.
Matrix dropout_mask(std::size_t rows, std::size_t cols, double p, Rng& rng);
/// Training mode applies a fresh mask; eval mode is the identity.
/// p == 0 consumes no draws.
Matrix dropout(const Matrix& x, double p, Rng& rng, bool training);

double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& m);

const char* to_string(Activation kind);
Activation activation_from_string(const std::string& name);

}  // namespace hyperact

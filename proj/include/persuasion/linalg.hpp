#pragma once
#include <cstddef>
#include <vector>

namespace persuasion {

// Row-major dense matrix. Everything in this project is small (at most a few
// dozen rows), so no effort is spent on blocking or views.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    static Matrix identity(int n);
};

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& x);
// y = m^T x (used for mapping schemes over predicted states to likelihoods over true states)
std::vector<double> mat_t_vec(const Matrix& m, const std::vector<double>& x);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix kronecker(const Matrix& a, const Matrix& b);

// Max absolute row sum.
double inf_norm(const Matrix& m);
double inf_norm(const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);

// Gauss-Jordan with partial pivoting. Returns false when a pivot falls below
// the relative singularity threshold.
bool invert(const Matrix& m, Matrix& out);

}  // namespace persuasion

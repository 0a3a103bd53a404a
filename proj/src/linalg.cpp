#include "persuasion/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "persuasion/errors.hpp"

namespace persuasion {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> mat_vec(const Matrix& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.cols) throw DimensionError("mat_vec: size mismatch");
    std::vector<double> y(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> mat_t_vec(const Matrix& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.rows) throw DimensionError("mat_t_vec: size mismatch");
    std::vector<double> y(m.cols, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) y[j] += m(i, j) * x[i];
    return y;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("mat_mul: size mismatch");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            double aij = a(i, j);
            for (int p = 0; p < b.rows; ++p)
                for (int q = 0; q < b.cols; ++q) k(i * b.rows + p, j * b.cols + q) = aij * b(p, q);
        }
    return k;
}

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
        if (s > best) best = s;
    }
    return best;
}

double inf_norm(const std::vector<double>& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool invert(const Matrix& m, Matrix& out) {
    if (m.rows != m.cols) throw DimensionError("invert: matrix not square");
    const int n = m.rows;
    Matrix a = m;
    out = Matrix::identity(n);

    double scale = inf_norm(m);
    if (scale == 0.0) return false;
    const double tiny = 1e-13 * scale;

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= tiny) return false;
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a.data[static_cast<size_t>(piv) * n + j], a.data[static_cast<size_t>(col) * n + j]);
                std::swap(out.data[static_cast<size_t>(piv) * n + j], out.data[static_cast<size_t>(col) * n + j]);
            }
        }
        const double inv_p = 1.0 / a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) *= inv_p;
            out(col, j) *= inv_p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                out(r, j) -= f * out(col, j);
            }
        }
    }
    return true;
}

}  // namespace persuasion

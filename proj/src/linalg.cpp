// linalg.cpp — Small dense helpers

#include "fdd/linalg.hpp"

#include <iostream>

namespace fdd {

void log_warning(std::string_view message) {
    std::clog << "warning: " << message << '\n';
}

namespace linalg {

Eigen::Matrix2cd sigma_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Eigen::Matrix2cd sigma_y() {
    Eigen::Matrix2cd m;
    m << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
    return m;
}

Eigen::Matrix2cd sigma_z() {
    Eigen::Matrix2cd m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

Eigen::Matrix2cd sigma_minus() {
    Eigen::Matrix2cd m;
    m << 0.0, 0.0, 1.0, 0.0;
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix embed(const Matrix& op, int site, int n_sites) {
    Matrix out = Matrix::Identity(1, 1);
    const Matrix id = Matrix::Identity(op.rows(), op.cols());
    for (int k = 0; k < n_sites; ++k)
        out = kron(out, k == site ? op : id);
    return out;
}

Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) {
    return 0.5 * (m + m.adjoint());
}

Matrix swap_operator() {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 3) = 1.0;
    return s;
}

} // namespace linalg
} // namespace fdd

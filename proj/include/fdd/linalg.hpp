// linalg.hpp — Small dense helpers: Pauli matrices, Kronecker products, vectorization

#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace fdd {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Logs a warning line to std::clog.
void log_warning(std::string_view message);

namespace linalg {

// Two-level operators in the bare basis ordering {|e>, |g>}.
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_y();
Eigen::Matrix2cd sigma_z();
Eigen::Matrix2cd sigma_plus();  // |e><g|
Eigen::Matrix2cd sigma_minus(); // |g><e|

Matrix kron(const Matrix& a, const Matrix& b);

// Embeds a single-site operator at `site` of an `n_sites` register of qubits.
// Site 0 is the most significant factor.
Matrix embed(const Matrix& op, int site, int n_sites);

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index dim);

double operator_norm(const Matrix& m);
double max_abs(const Matrix& m);

// Returns (m + m^dagger) / 2.
Matrix hermitian_part(const Matrix& m);

// Exchange of two qubits in a two-site register.
Matrix swap_operator();

} // namespace linalg
} // namespace fdd

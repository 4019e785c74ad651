#pragma once

// Independent oracles for the tests: dense matrices built from Kronecker
// products of explicit 2x2 Pauli matrices, qubit 0 as the least significant
// index bit.

#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli2(char c) {
    Mat m(2, 2);
    const cplx i{0, 1};
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad Pauli");
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Label qubit 0 leftmost; qubit 0 is the least significant index bit, so it is
/// the rightmost Kronecker factor.
inline Mat pauli_matrix(const std::string& label) {
    Mat m = Mat::Identity(1, 1);
    for (char c : label) m = kron(pauli2(c), m);
    return m;
}

inline std::string random_label(std::mt19937_64& rng, int n) {
    static const char ops[] = "IXYZ";
    std::string s;
    for (int q = 0; q < n; ++q) s += ops[rng() % 4];
    return s;
}

/// exp(-i theta/2 P) for a Pauli P (P^2 = I).
inline Mat pauli_rotation(const std::string& label, double theta) {
    const Mat p = pauli_matrix(label);
    return std::cos(theta / 2) * Mat::Identity(p.rows(), p.cols()) - cplx{0, 1} * std::sin(theta / 2) * p;
}

inline std::filesystem::path fixtures() { return FSVQE_TEST_FIXTURES; }

}  // namespace oracle

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace fsvqe {

using cplx = std::complex<double>;

/// Pure state of n qubits. Amplitude index bit q holds the value of qubit q.
class Statevector {
public:
    explicit Statevector(int n_qubits, std::uint64_t basis_state = 0);
    Statevector(int n_qubits, std::vector<cplx> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    void apply_x(int q);
    void apply_h(int q);
    void apply_rx(int q, double angle);
    void apply_rz(int q, double angle);
    void apply_cnot(int control, int target);
    /// General single-qubit unitary given row-major as {u00, u01, u10, u11}.
    void apply_1q(int q, const std::array<cplx, 4>& u);

    double norm() const;
    std::vector<double> probabilities() const;

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

/// Mixed state of n qubits stored densely, row-major.
class DensityMatrix {
public:
    explicit DensityMatrix(int n_qubits, std::uint64_t basis_state = 0);
    explicit DensityMatrix(const Statevector& psi);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return dim_; }
    cplx operator()(std::size_t i, std::size_t j) const { return rho_[i * dim_ + j]; }
    cplx& operator()(std::size_t i, std::size_t j) { return rho_[i * dim_ + j]; }
    const std::vector<cplx>& data() const { return rho_; }

    void apply_1q(int q, const std::array<cplx, 4>& u);
    void apply_cnot(int control, int target);
    /// rho -> sum_k K rho K^dagger for single-qubit Kraus operators on q.
    void apply_kraus_1q(int q, std::span<const std::array<cplx, 4>> kraus);
    /// rho -> P rho P for the Pauli string (x, z) (P Hermitian).
    void conjugate_pauli(std::uint64_t x, std::uint64_t z);
    /// Depolarizing channel of strength p on the listed qubits:
    /// rho -> (1-p) rho + p * (I/2^k tensor Tr_k rho).
    void depolarize(std::span<const int> qubits, double p);
    /// Scales the off-diagonal coherences of qubit q by `factor`.
    void dephase(int q, double factor);

    double trace() const;
    double purity() const;
    std::vector<double> probabilities() const;
    /// Largest |rho_ij - conj(rho_ji)|.
    double hermiticity_defect() const;
    double min_eigenvalue() const;

private:
    int n_qubits_;
    std::size_t dim_;
    std::vector<cplx> rho_;
};

/// Either a statevector or a density matrix.
class QuantumState {
public:
    enum class Kind { Pure, Mixed };

    QuantumState(Statevector psi) : data_(std::move(psi)) {}
    QuantumState(DensityMatrix rho) : data_(std::move(rho)) {}

    Kind kind() const { return std::holds_alternative<Statevector>(data_) ? Kind::Pure : Kind::Mixed; }
    int n_qubits() const;
    std::size_t dim() const { return std::size_t{1} << n_qubits(); }
    std::vector<double> probabilities() const;

    const Statevector& pure() const { return std::get<Statevector>(data_); }
    const DensityMatrix& mixed() const { return std::get<DensityMatrix>(data_); }
    Statevector& pure() { return std::get<Statevector>(data_); }
    DensityMatrix& mixed() { return std::get<DensityMatrix>(data_); }

private:
    std::variant<Statevector, DensityMatrix> data_;
};

}  // namespace fsvqe

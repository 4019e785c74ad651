#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "fsvqe/pauli.hpp"

namespace fsvqe {

/// Eigen-decomposition of a dense Hermitian operator, ascending eigenvalues.
struct Spectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;                ///< columns; empty unless requested
    std::vector<std::uint64_t> basis;        ///< basis states spanned (all, or one particle sector)

    /// Lifts column k of `vectors` to a full 2^n amplitude vector.
    std::vector<cplx> full_vector(Eigen::Index k, int n_qubits) const;
};

/// Full diagonalisation of dense(h). When `particle_number` is set, only basis
/// states with that many set bits are included (a JW Hamiltonian conserves it).
Spectrum exact_spectrum(const PauliSum& h, bool with_vectors = false, std::optional<int> particle_number = std::nullopt);

/// (H - omega)^2 in reduced Pauli form. H^2 is computed once and shared by
/// every omega derived through `at`.
class FoldedOperator {
public:
    explicit FoldedOperator(PauliSum h, double omega = 0.0, double tol = kDropTolerance);

    /// Same Hamiltonian folded around a new target; reuses the cached square.
    FoldedOperator at(double omega) const;

    const PauliSum& base() const { return *base_; }
    const PauliSum& squared() const { return *squared_; }
    const PauliSum& folded() const { return folded_; }
    double omega() const { return omega_; }

private:
    FoldedOperator(std::shared_ptr<const PauliSum> base, std::shared_ptr<const PauliSum> squared, double omega, double tol);

    std::shared_ptr<const PauliSum> base_;
    std::shared_ptr<const PauliSum> squared_;
    double omega_;
    double tol_;
    PauliSum folded_;
};

/// Builds the folded operator; throws HermiticityError for non-Hermitian h.
FoldedOperator fold(const PauliSum& h, double omega, double tol = kDropTolerance);

}  // namespace fsvqe

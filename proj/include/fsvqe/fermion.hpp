#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fsvqe/pauli.hpp"

namespace fsvqe {

/// Spin-orbital layout: all alpha orbitals first, then all beta orbitals.
/// Spatial orbital p maps to qubit p (alpha) and p + n_spatial (beta).
enum class Spin { Alpha = 0, Beta = 1 };

inline int spin_orbital(int spatial, Spin spin, int n_spatial) {
    return spatial + (spin == Spin::Beta ? n_spatial : 0);
}

struct LadderOp {
    int orbital = 0;
    bool creation = false;
    friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

struct FermionTerm {
    cplx coeff{1.0, 0.0};
    std::vector<LadderOp> ops;  ///< applied right to left, as written
};

/// Second-quantized operator: a list of weighted ladder-operator products.
class FermionOperator {
public:
    explicit FermionOperator(int n_spin_orbitals);

    int n_spin_orbitals() const { return n_; }
    const std::vector<FermionTerm>& terms() const { return terms_; }

    /// Appends a term; identical ladder sequences are merged.
    void add(cplx coeff, std::vector<LadderOp> ops);
    FermionOperator& operator+=(const FermionOperator& other);

private:
    int n_;
    std::vector<FermionTerm> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// One- and two-body integrals in the MO basis (Hartree). `eri` uses
/// chemists' notation (pq|rs) and is stored dense with all 8 symmetries filled.
struct IntegralData {
    int n_orbitals = 0;
    int n_electrons = 0;
    int ms2 = 0;
    double nuclear_repulsion = 0.0;
    Eigen::MatrixXd h1;
    std::vector<double> eri;

    double two_body(int p, int q, int r, int s) const {
        const auto n = static_cast<std::size_t>(n_orbitals);
        return eri[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    }
    int n_spin_orbitals() const { return 2 * n_orbitals; }
};

/// Reads a Knowles-Handy FCIDUMP. Records with all indices zero carry the
/// core energy; (i j 0 0) one-body; (i j k l) two-body. Orbital-energy records
/// (i 0 0 0) are ignored. Throws ParseError (with line) or DataError.
IntegralData parse_fcidump(std::istream& in, const std::string& source = "<fcidump>");
IntegralData read_fcidump(const std::filesystem::path& path);

/// Electronic Hamiltonian in spin-orbital form, including the nuclear
/// repulsion as an identity term.
FermionOperator build_hamiltonian(const IntegralData& data);

/// Jordan-Wigner image of a single ladder operator on n qubits:
/// a+_j -> Z_0..Z_{j-1} (X - iY)/2,  a_j -> Z_0..Z_{j-1} (X + iY)/2.
PauliSum jordan_wigner_ladder(int orbital, bool creation, int n_qubits);

/// Jordan-Wigner transform; result is simplified and in canonical term order.
PauliSum jordan_wigner(const FermionOperator& op, double tol = kDropTolerance);

/// Convenience: jordan_wigner(build_hamiltonian(data)).
PauliSum qubit_hamiltonian(const IntegralData& data);

/// Number operator sum_j a+_j a_j.
FermionOperator number_operator(int n_spin_orbitals);

/// Molecular-orbital frame at one geometry: coefficients (AO x MO) and AO overlap.
struct MOFrame {
    Eigen::MatrixXd coeffs;
    Eigen::MatrixXd overlap;
};

struct PhaseAlignment {
    Eigen::MatrixXd coeffs;         ///< next coefficients with flipped columns
    std::vector<int> signs;         ///< +1 or -1 per MO
    Eigen::VectorXd diagonal;       ///< diag(C_prev^T S_prev C_next) before flipping
    bool ambiguous = false;         ///< some |diagonal| < 0.5
};

/// Flips the sign of every MO of `next_coeffs` whose overlap with the previous
/// frame's MO is negative.
PhaseAlignment mo_phase_align(const MOFrame& prev, const Eigen::MatrixXd& next_coeffs);

/// Integrals expressed in MOs whose signs are flipped by `signs`.
IntegralData apply_orbital_signs(const IntegralData& data, std::span<const int> signs);

}  // namespace fsvqe

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace fsvqe {

using cplx = std::complex<double>;

class QuantumState;

/// Coefficients at or below this magnitude are dropped by simplification (Hartree).
inline constexpr double kDropTolerance = 1e-12;

/// Largest register for which dense matrices are built.
inline constexpr int kMaxDenseQubits = 14;

/// Symplectic encoding of a Pauli string. Bit q of `x`/`z` describes qubit q:
/// (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y. The string denotes the Hermitian
/// operator  i^{|x&z|} X^x Z^z, so Y carries no hidden phase.
struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    bool is_identity() const { return (x | z) == 0; }
    bool is_diagonal() const { return x == 0; }
    std::uint64_t support() const { return x | z; }
    int weight() const;
    char op(int qubit) const;

    friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct PauliStringHash {
    std::size_t operator()(const PauliString& p) const noexcept {
        return std::hash<std::uint64_t>{}(p.x * 0x9e3779b97f4a7c15ULL ^ (p.z + 0x632be59bd9b4e019ULL));
    }
};

/// Product of two strings: returns the resulting string and the phase exponent k
/// such that a*b = i^k * result.
std::pair<PauliString, int> multiply_strings(const PauliString& a, const PauliString& b);

/// True when the two strings commute as operators.
bool strings_commute(const PauliString& a, const PauliString& b);

/// Orders strings by their X bits then Z bits, qubit 0 most significant.
bool canonical_less(const PauliString& a, const PauliString& b);

/// Text label over IXYZ, qubit 0 leftmost.
std::string to_label(const PauliString& p, int n_qubits);
PauliString parse_label(std::string_view label);

/// A complex-weighted Pauli string on a fixed register.
struct PauliTerm {
    int n_qubits = 0;
    PauliString ops;
    cplx coeff{1.0, 0.0};

    static PauliTerm from_label(std::string_view label, cplx coeff = 1.0);
    std::string label() const { return to_label(ops, n_qubits); }
};

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b);

/// A linear combination of Pauli strings with like terms merged on insertion.
/// Terms keep first-insertion order; several algorithms (grouping tie-breaks)
/// depend on that order being deterministic.
class PauliSum {
public:
    explicit PauliSum(int n_qubits = 1);
    PauliSum(int n_qubits, std::initializer_list<std::pair<std::string_view, cplx>> terms);

    static PauliSum identity(int n_qubits, cplx coeff = 1.0);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    void add(const PauliString& ops, cplx coeff);
    void add(const PauliTerm& term);

    std::optional<cplx> coeff(const PauliString& ops) const;
    std::optional<cplx> coeff(std::string_view label) const { return coeff(parse_label(label)); }
    cplx identity_coeff() const { return coeff(PauliString{}).value_or(0.0); }

    PauliSum& operator+=(const PauliSum& other);
    PauliSum& operator*=(cplx factor);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator*(cplx f, PauliSum a) { return a *= f; }

    /// Largest |Im c| over all terms; zero for a Hermitian sum.
    double max_imag() const;
    bool is_hermitian(double tol = 1e-10) const { return max_imag() <= tol; }

    /// Canonical text form: "<re> <im> <label>" per line, in storage order.
    void write(std::ostream& out) const;
    static PauliSum read(std::istream& in);

private:
    int n_qubits_;
    std::vector<PauliTerm> terms_;
    std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
};

/// Merges like terms and drops those with |coeff| <= tol. Order of survivors is preserved.
PauliSum sum_simplify(const PauliSum& s, double tol = kDropTolerance);

/// Fully reduced expansion of a*b. Terms appear in order of first occurrence
/// when enumerating a's terms (outer) against b's terms (inner).
PauliSum sum_product(const PauliSum& a, const PauliSum& b, double tol = kDropTolerance);

/// Hermitian adjoint (conjugated coefficients).
PauliSum adjoint(const PauliSum& s);

/// Returns a copy with terms sorted by canonical_less.
PauliSum canonical_order(const PauliSum& s);

Eigen::MatrixXcd to_dense(const PauliSum& s);

/// <psi|P|psi> for a single string, computed without building matrices.
cplx string_expectation(const PauliString& p, const QuantumState& state);

/// Real expectation value of a Hermitian sum; throws HermiticityError when the
/// imaginary part exceeds 1e-9.
double expectation_dense(const PauliSum& s, const QuantumState& state);

}  // namespace fsvqe

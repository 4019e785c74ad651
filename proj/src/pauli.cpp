#include "fsvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "fsvqe/errors.hpp"
#include "fsvqe/state.hpp"

namespace fsvqe {

namespace {

// i^k for k mod 4
cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Phase picked up by P|i> = phase * |i ^ x>.
cplx column_phase(const PauliString& p, std::uint64_t i) {
    int k = std::popcount(p.x & p.z) + 2 * std::popcount(p.z & i);
    return i_pow(k);
}

void check_qubits(int n) {
    if (n < 1 || n > 64) throw InvalidArgument("qubit count must be in [1, 64], got " + std::to_string(n));
}

}  // namespace

int PauliString::weight() const { return std::popcount(x | z); }

char PauliString::op(int q) const {
    const bool bx = (x >> q) & 1U;
    const bool bz = (z >> q) & 1U;
    if (bx && bz) return 'Y';
    if (bx) return 'X';
    if (bz) return 'Z';
    return 'I';
}

std::pair<PauliString, int> multiply_strings(const PauliString& a, const PauliString& b) {
    PauliString r{a.x ^ b.x, a.z ^ b.z};
    int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) - std::popcount(r.x & r.z) +
            2 * std::popcount(a.z & b.x);
    return {r, ((k % 4) + 4) % 4};
}

bool strings_commute(const PauliString& a, const PauliString& b) {
    return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) % 2 == 0;
}

bool canonical_less(const PauliString& a, const PauliString& b) {
    if (std::uint64_t d = a.x ^ b.x) return ((a.x >> std::countr_zero(d)) & 1U) == 0;
    if (std::uint64_t d = a.z ^ b.z) return ((a.z >> std::countr_zero(d)) & 1U) == 0;
    return false;
}

std::string to_label(const PauliString& p, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (int q = 0; q < n_qubits; ++q) s[static_cast<std::size_t>(q)] = p.op(q);
    return s;
}

PauliString parse_label(std::string_view label) {
    if (label.empty() || label.size() > 64) throw ParseError("invalid Pauli label length: '" + std::string(label) + "'");
    PauliString p;
    for (std::size_t q = 0; q < label.size(); ++q) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        switch (label[q]) {
            case 'I': break;
            case 'X': p.x |= bit; break;
            case 'Y': p.x |= bit; p.z |= bit; break;
            case 'Z': p.z |= bit; break;
            default: throw ParseError("invalid Pauli symbol '" + std::string(1, label[q]) + "' in '" + std::string(label) + "'");
        }
    }
    return p;
}

PauliTerm PauliTerm::from_label(std::string_view label, cplx coeff) {
    return {static_cast<int>(label.size()), parse_label(label), coeff};
}

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits != b.n_qubits)
        throw DimensionError("pauli_mul: " + std::to_string(a.n_qubits) + " vs " + std::to_string(b.n_qubits) + " qubits");
    auto [ops, k] = multiply_strings(a.ops, b.ops);
    return {a.n_qubits, ops, a.coeff * b.coeff * i_pow(k)};
}

// ---------------------------------------------------------------------------

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliSum::PauliSum(int n_qubits, std::initializer_list<std::pair<std::string_view, cplx>> terms)
    : PauliSum(n_qubits) {
    for (const auto& [label, c] : terms) {
        if (static_cast<int>(label.size()) != n_qubits) throw DimensionError("label '" + std::string(label) + "' has wrong length");
        add(parse_label(label), c);
    }
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
    PauliSum s(n_qubits);
    s.add(PauliString{}, coeff);
    return s;
}

void PauliSum::add(const PauliString& ops, cplx coeff) {
    if (n_qubits_ < 64 && (ops.support() >> n_qubits_) != 0) throw DimensionError("Pauli string acts outside the register");
    auto [it, inserted] = index_.try_emplace(ops, terms_.size());
    if (inserted) {
        terms_.push_back({n_qubits_, ops, coeff});
    } else {
        terms_[it->second].coeff += coeff;
    }
}

void PauliSum::add(const PauliTerm& term) {
    if (term.n_qubits != n_qubits_) throw DimensionError("PauliSum::add: qubit count mismatch");
    add(term.ops, term.coeff);
}

std::optional<cplx> PauliSum::coeff(const PauliString& ops) const {
    auto it = index_.find(ops);
    if (it == index_.end()) return std::nullopt;
    return terms_[it->second].coeff;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.n_qubits_ != n_qubits_) throw DimensionError("PauliSum addition: qubit count mismatch");
    for (const auto& t : other.terms_) add(t.ops, t.coeff);
    return *this;
}

PauliSum& PauliSum::operator*=(cplx factor) {
    for (auto& t : terms_) t.coeff *= factor;
    return *this;
}

double PauliSum::max_imag() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff.imag()));
    return m;
}

void PauliSum::write(std::ostream& out) const {
    std::ostringstream line;
    for (const auto& t : terms_) {
        line.str("");
        line << std::setprecision(17) << t.coeff.real() << ' ' << t.coeff.imag() << ' ' << t.label() << '\n';
        out << line.str();
    }
}

PauliSum PauliSum::read(std::istream& in) {
    std::string text;
    int line_no = 0;
    std::optional<PauliSum> sum;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos || text[0] == '#') continue;
        std::istringstream ls(text);
        double re = 0, im = 0;
        std::string label;
        if (!(ls >> re >> im >> label)) throw ParseError("<operator>", line_no, "expected '<re> <im> <label>'");
        if (!sum) sum.emplace(static_cast<int>(label.size()));
        if (static_cast<int>(label.size()) != sum->n_qubits()) throw ParseError("<operator>", line_no, "inconsistent label length");
        sum->add(parse_label(label), {re, im});
    }
    if (!sum) throw ParseError("empty operator text");
    return *std::move(sum);
}

// ---------------------------------------------------------------------------

PauliSum sum_simplify(const PauliSum& s, double tol) {
    if (tol < 0) throw InvalidArgument("sum_simplify: negative tolerance");
    PauliSum out(s.n_qubits());
    for (const auto& t : s)
        if (std::abs(t.coeff) > tol) out.add(t.ops, t.coeff);
    return out;
}

PauliSum sum_product(const PauliSum& a, const PauliSum& b, double tol) {
    if (a.n_qubits() != b.n_qubits())
        throw DimensionError("sum_product: " + std::to_string(a.n_qubits()) + " vs " + std::to_string(b.n_qubits()) + " qubits");
    PauliSum raw(a.n_qubits());
    for (const auto& ta : a) {
        for (const auto& tb : b) {
            auto [ops, k] = multiply_strings(ta.ops, tb.ops);
            raw.add(ops, ta.coeff * tb.coeff * i_pow(k));
        }
    }
    return sum_simplify(raw, tol);
}

PauliSum adjoint(const PauliSum& s) {
    PauliSum out(s.n_qubits());
    for (const auto& t : s) out.add(t.ops, std::conj(t.coeff));
    return out;
}

PauliSum canonical_order(const PauliSum& s) {
    std::vector<PauliTerm> terms = s.terms();
    std::stable_sort(terms.begin(), terms.end(),
                     [](const PauliTerm& l, const PauliTerm& r) { return canonical_less(l.ops, r.ops); });
    PauliSum out(s.n_qubits());
    for (const auto& t : terms) out.add(t);
    return out;
}

Eigen::MatrixXcd to_dense(const PauliSum& s) {
    const int n = s.n_qubits();
    if (n > kMaxDenseQubits)
        throw CapacityError("to_dense: " + std::to_string(n) + " qubits exceeds limit of " + std::to_string(kMaxDenseQubits));
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : s) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            m(static_cast<Eigen::Index>(i ^ t.ops.x), static_cast<Eigen::Index>(i)) += t.coeff * column_phase(t.ops, i);
        }
    }
    return m;
}

cplx string_expectation(const PauliString& p, const QuantumState& state) {
    const std::uint64_t dim = state.dim();
    cplx acc{0.0, 0.0};
    if (state.kind() == QuantumState::Kind::Pure) {
        const auto& psi = state.pure().amplitudes();
        for (std::uint64_t i = 0; i < dim; ++i) acc += std::conj(psi[i ^ p.x]) * column_phase(p, i) * psi[i];
    } else {
        // P = sum_i phase(i) |i^x><i|, so Tr(rho P) = sum_i phase(i) rho[i][i^x]
        const auto& rho = state.mixed();
        for (std::uint64_t i = 0; i < dim; ++i) acc += rho(i, i ^ p.x) * column_phase(p, i);
    }
    return acc;
}

double expectation_dense(const PauliSum& s, const QuantumState& state) {
    if (state.n_qubits() != s.n_qubits())
        throw DimensionError("expectation_dense: operator on " + std::to_string(s.n_qubits()) + " qubits, state on " +
                             std::to_string(state.n_qubits()));
    if (s.max_imag() > 1e-9)
        throw HermiticityError("expectation_dense: operator has complex coefficients (max |Im| = " + std::to_string(s.max_imag()) + ")");
    cplx total{0.0, 0.0};
    for (const auto& t : s) total += t.coeff * string_expectation(t.ops, state);
    if (std::abs(total.imag()) > 1e-9)
        throw HermiticityError("expectation has imaginary part " + std::to_string(total.imag()));
    return total.real();
}

}  // namespace fsvqe

#include "fsvqe/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "fsvqe/errors.hpp"

namespace fsvqe {

namespace {

constexpr int kMaxStatevectorQubits = 20;
constexpr int kMaxDensityQubits = 10;

std::array<cplx, 4> rx_matrix(double angle) {
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
}

void check_qubit(int q, int n) {
    if (q < 0 || q >= n) throw DimensionError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n) + " qubits");
}

}  // namespace

// ---------------------------------------------------------------------------
// Statevector

Statevector::Statevector(int n_qubits, std::uint64_t basis_state) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxStatevectorQubits)
        throw CapacityError("statevector supports 1.." + std::to_string(kMaxStatevectorQubits) + " qubits");
    amps_.assign(std::size_t{1} << n_qubits, cplx{0, 0});
    if (basis_state >= amps_.size()) throw DimensionError("basis state out of range");
    amps_[basis_state] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > kMaxStatevectorQubits) throw CapacityError("statevector qubit count out of range");
    if (amps_.size() != (std::size_t{1} << n_qubits)) throw DimensionError("amplitude vector has wrong length");
}

void Statevector::apply_1q(int q, const std::array<cplx, 4>& u) {
    check_qubit(q, n_qubits_);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = amps_[i], a1 = amps_[i | bit];
        amps_[i] = u[0] * a0 + u[1] * a1;
        amps_[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

void Statevector::apply_x(int q) {
    check_qubit(q, n_qubits_);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
}

void Statevector::apply_h(int q) {
    const double r = 1.0 / std::sqrt(2.0);
    apply_1q(q, {cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}});
}

void Statevector::apply_rx(int q, double angle) { apply_1q(q, rx_matrix(angle)); }

void Statevector::apply_rz(int q, double angle) {
    check_qubit(q, n_qubits_);
    const std::size_t bit = std::size_t{1} << q;
    const cplx p0 = std::polar(1.0, -angle / 2), p1 = std::polar(1.0, angle / 2);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? p1 : p0;
}

void Statevector::apply_cnot(int control, int target) {
    check_qubit(control, n_qubits_);
    check_qubit(target, n_qubits_);
    if (control == target) throw InvalidArgument("CNOT control equals target");
    const std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(amps_[i], amps_[i | tb]);
}

double Statevector::norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](cplx a) { return std::norm(a); });
    return p;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, std::uint64_t basis_state) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxDensityQubits)
        throw CapacityError("density matrix supports 1.." + std::to_string(kMaxDensityQubits) + " qubits");
    dim_ = std::size_t{1} << n_qubits;
    if (basis_state >= dim_) throw DimensionError("basis state out of range");
    rho_.assign(dim_ * dim_, cplx{0, 0});
    rho_[basis_state * dim_ + basis_state] = 1.0;
}

DensityMatrix::DensityMatrix(const Statevector& psi) : DensityMatrix(psi.n_qubits()) {
    const auto& a = psi.amplitudes();
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) rho_[i * dim_ + j] = a[i] * std::conj(a[j]);
}

void DensityMatrix::apply_1q(int q, const std::array<cplx, 4>& u) {
    const std::array<cplx, 4> k[1] = {u};
    apply_kraus_1q(q, k);
}

void DensityMatrix::apply_kraus_1q(int q, std::span<const std::array<cplx, 4>> kraus) {
    check_qubit(q, n_qubits_);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (i & bit) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (j & bit) continue;
            // 2x2 block over the bit of q in row and column
            const cplx b00 = rho_[i * dim_ + j], b01 = rho_[i * dim_ + (j | bit)];
            const cplx b10 = rho_[(i | bit) * dim_ + j], b11 = rho_[(i | bit) * dim_ + (j | bit)];
            cplx r00{0, 0}, r01{0, 0}, r10{0, 0}, r11{0, 0};
            for (const auto& k : kraus) {
                // T = K B
                const cplx t00 = k[0] * b00 + k[1] * b10, t01 = k[0] * b01 + k[1] * b11;
                const cplx t10 = k[2] * b00 + k[3] * b10, t11 = k[2] * b01 + k[3] * b11;
                // T K^dagger
                r00 += t00 * std::conj(k[0]) + t01 * std::conj(k[1]);
                r01 += t00 * std::conj(k[2]) + t01 * std::conj(k[3]);
                r10 += t10 * std::conj(k[0]) + t11 * std::conj(k[1]);
                r11 += t10 * std::conj(k[2]) + t11 * std::conj(k[3]);
            }
            rho_[i * dim_ + j] = r00;
            rho_[i * dim_ + (j | bit)] = r01;
            rho_[(i | bit) * dim_ + j] = r10;
            rho_[(i | bit) * dim_ + (j | bit)] = r11;
        }
    }
}

void DensityMatrix::apply_cnot(int control, int target) {
    check_qubit(control, n_qubits_);
    check_qubit(target, n_qubits_);
    if (control == target) throw InvalidArgument("CNOT control equals target");
    const std::size_t cb = std::size_t{1} << control, tb = std::size_t{1} << target;
    auto perm = [&](std::size_t i) { return (i & cb) ? (i ^ tb) : i; };
    std::vector<cplx> out(rho_.size());
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out[perm(i) * dim_ + perm(j)] = rho_[i * dim_ + j];
    rho_ = std::move(out);
}

void DensityMatrix::conjugate_pauli(std::uint64_t x, std::uint64_t z) {
    // P|i> = ph(i)|i^x>,  (P rho P)[i^x][j^x] = ph(i) rho[i][j] conj(ph(j))
    auto phase = [&](std::size_t i) {
        const int k = (std::popcount(x & z) + 2 * std::popcount(z & i)) % 4;
        static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[k];
    };
    std::vector<cplx> out(rho_.size());
    for (std::size_t i = 0; i < dim_; ++i) {
        const cplx pi = phase(i);
        for (std::size_t j = 0; j < dim_; ++j)
            out[(i ^ x) * dim_ + (j ^ x)] = pi * rho_[i * dim_ + j] * std::conj(phase(j));
    }
    rho_ = std::move(out);
}

void DensityMatrix::depolarize(std::span<const int> qubits, double p) {
    if (p == 0.0 || qubits.empty()) return;
    if (p < 0.0 || p > 1.0) throw InvalidArgument("depolarizing probability outside [0, 1]");
    // (1-p) rho + p/4^k sum_P P rho P  equals  (1-p) rho + p I/2^k (x) Tr_k rho
    std::size_t mask = 0;
    for (int q : qubits) {
        check_qubit(q, n_qubits_);
        if (mask & (std::size_t{1} << q)) throw InvalidArgument("depolarize: repeated qubit");
        mask |= std::size_t{1} << q;
    }
    std::vector<std::size_t> subsets{0};  // every assignment of the depolarized qubits
    for (int q : qubits) {
        const std::size_t n = subsets.size();
        for (std::size_t m = 0; m < n; ++m) subsets.push_back(subsets[m] | (std::size_t{1} << q));
    }
    const double w = p / static_cast<double>(subsets.size());
    for (std::size_t i = 0; i < dim_; ++i) {
        if (i & mask) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (j & mask) continue;
            cplx t{0, 0};
            for (std::size_t s : subsets) t += rho_[(i | s) * dim_ + (j | s)];
            for (std::size_t a : subsets)
                for (std::size_t b : subsets) {
                    cplx& e = rho_[(i | a) * dim_ + (j | b)];
                    e = (1.0 - p) * e + (a == b ? w * t : cplx{0, 0});
                }
        }
    }
}

void DensityMatrix::dephase(int q, double factor) {
    check_qubit(q, n_qubits_);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if ((i ^ j) & bit) rho_[i * dim_ + j] *= factor;
}

double DensityMatrix::trace() const {
    double t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += rho_[i * dim_ + i].real();
    return t;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
    double s = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) s += (rho_[i * dim_ + j] * rho_[j * dim_ + i]).real();
    return s;
}

std::vector<double> DensityMatrix::probabilities() const {
    std::vector<double> p(dim_);
    for (std::size_t i = 0; i < dim_; ++i) p[i] = std::max(0.0, rho_[i * dim_ + i].real());
    return p;
}

double DensityMatrix::hermiticity_defect() const {
    double m = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m = std::max(m, std::abs(rho_[i * dim_ + j] - std::conj(rho_[j * dim_ + i])));
    return m;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = 0.5 * (rho_[i * dim_ + j] + std::conj(rho_[j * dim_ + i]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

int QuantumState::n_qubits() const {
    return std::visit([](const auto& s) { return s.n_qubits(); }, data_);
}

std::vector<double> QuantumState::probabilities() const {
    return std::visit([](const auto& s) { return s.probabilities(); }, data_);
}

}  // namespace fsvqe

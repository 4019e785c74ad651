#include "fsvqe/folded.hpp"

#include <bit>

#include "fsvqe/errors.hpp"

namespace fsvqe {

namespace {

cplx column_phase(const PauliString& p, std::uint64_t i) {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[(std::popcount(p.x & p.z) + 2 * std::popcount(p.z & i)) % 4];
}

PauliSum fold_from_square(const PauliSum& h, const PauliSum& h2, double omega, double tol) {
    PauliSum f = h2;
    f += cplx(-2.0 * omega) * PauliSum(h);
    f.add(PauliString{}, omega * omega);
    return sum_simplify(f, tol);
}

}  // namespace

std::vector<cplx> Spectrum::full_vector(Eigen::Index k, int n_qubits) const {
    std::vector<cplx> v(std::size_t{1} << n_qubits, cplx{0, 0});
    for (std::size_t r = 0; r < basis.size(); ++r) v[basis[r]] = vectors(static_cast<Eigen::Index>(r), k);
    return v;
}

Spectrum exact_spectrum(const PauliSum& h, bool with_vectors, std::optional<int> particle_number) {
    const int n = h.n_qubits();
    if (n > kMaxDenseQubits) throw CapacityError("exact_spectrum: " + std::to_string(n) + " qubits exceeds dense limit");
    Spectrum out;
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<std::int64_t> position(dim, -1);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (particle_number && std::popcount(i) != *particle_number) continue;
        position[i] = static_cast<std::int64_t>(out.basis.size());
        out.basis.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(out.basis.size());
    if (m == 0) throw InvalidArgument("exact_spectrum: empty particle-number sector");
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& t : h) {
        for (Eigen::Index c = 0; c < m; ++c) {
            const std::uint64_t i = out.basis[static_cast<std::size_t>(c)];
            const std::int64_t r = position[i ^ t.ops.x];
            if (r < 0) continue;
            dense(r, c) += t.coeff * column_phase(t.ops, i);
        }
    }
    if ((dense - dense.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw HermiticityError("exact_spectrum: operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    out.values = es.eigenvalues();
    if (with_vectors) out.vectors = es.eigenvectors();
    return out;
}

FoldedOperator::FoldedOperator(PauliSum h, double omega, double tol) : omega_(omega), tol_(tol), folded_(h.n_qubits()) {
    if (!h.is_hermitian()) throw HermiticityError("fold: Hamiltonian has complex coefficients");
    auto squared = std::make_shared<const PauliSum>(sum_product(h, h, tol));
    base_ = std::make_shared<const PauliSum>(std::move(h));
    squared_ = std::move(squared);
    folded_ = fold_from_square(*base_, *squared_, omega, tol);
}

FoldedOperator::FoldedOperator(std::shared_ptr<const PauliSum> base, std::shared_ptr<const PauliSum> squared, double omega,
                               double tol)
    : base_(std::move(base)), squared_(std::move(squared)), omega_(omega), tol_(tol), folded_(base_->n_qubits()) {
    folded_ = fold_from_square(*base_, *squared_, omega, tol);
}

FoldedOperator FoldedOperator::at(double omega) const { return FoldedOperator(base_, squared_, omega, tol_); }

FoldedOperator fold(const PauliSum& h, double omega, double tol) { return FoldedOperator(h, omega, tol); }

}  // namespace fsvqe

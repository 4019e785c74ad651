#include <doctest.h>

#include <numbers>
#include <random>

#include "fsvqe/circuit.hpp"
#include "fsvqe/errors.hpp"
#include "fsvqe/simulator.hpp"
#include "support.hpp"

using namespace fsvqe;

namespace {

// Dense unitary of a bound circuit, column k = circuit applied to |k>.
oracle::Mat circuit_unitary(const Circuit& c, std::span<const double> theta = {}) {
    const int n = c.n_qubits();
    const Eigen::Index dim = Eigen::Index{1} << n;
    oracle::Mat u(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Statevector psi = run_pure(c, theta, static_cast<std::uint64_t>(k));
        for (Eigen::Index i = 0; i < dim; ++i) u(i, k) = psi[static_cast<std::size_t>(i)];
    }
    return u;
}

double phase_free_distance(const oracle::Mat& a, const oracle::Mat& b) {
    // align global phase on the largest entry
    Eigen::Index r, c;
    b.cwiseAbs().maxCoeff(&r, &c);
    const oracle::cplx ph = a(r, c) / b(r, c);
    return (a - (ph / std::abs(ph)) * b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("circuit") {

TEST_CASE("pauli gadget equals the closed-form rotation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::string label = oracle::random_label(rng, n);
        if (label.find_first_not_of('I') == std::string::npos) label[0] = 'Y';
        const double theta = u(rng);
        const Circuit g = pauli_gadget(PauliTerm::from_label(label));
        const double th[] = {theta};
        // exact equality, including the global phase
        CHECK((circuit_unitary(g, th) - oracle::pauli_rotation(label, theta)).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(pauli_gadget(PauliTerm::from_label("II")), InvalidArgument);
}

TEST_CASE("gadget gate structure") {
    const Circuit g = pauli_gadget(PauliTerm::from_label("XIYZ"));
    CHECK(g.count(GateKind::CNOT) == 4);
    CHECK(g.count(GateKind::RZ) == 1);
    CHECK(g.count(GateKind::H) == 2);
    CHECK(g.count(GateKind::RX) == 2);
    CHECK(g.gates()[0].kind == GateKind::H);
    CHECK(g.gates()[1].kind == GateKind::RX);
    CHECK(g.gates()[1].angle == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("excitation lists follow the occupied-index ordering") {
    const auto h2 = ucc_excitations(2, 4);
    REQUIRE(h2.size() == 3);
    CHECK(h2[0].name == "s_0_1");
    CHECK(h2[1].name == "d_0_2_1_3");
    CHECK(h2[2].name == "s_2_3");
    const auto lih = ucc_excitations(4, 6);
    CHECK(lih.size() == 8);
    int singles = 0;
    for (const auto& e : lih) singles += e.rank == 1;
    CHECK(singles == 4);
    CHECK(ucc_excitations(2, 4, 1).size() == 2);
    CHECK_THROWS_AS(ucc_excitations(5, 4), InvalidArgument);
}

TEST_CASE("generators are anti-Hermitian with 2 or 8 strings") {
    for (const auto& e : ucc_excitations(2, 4)) {
        const PauliSum g = excitation_generator(e, 4);
        CHECK(g.size() == (e.rank == 1 ? 2u : 8u));
        const auto d = to_dense(g);
        CHECK((d + d.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("UCC ansatz on H2 has 12 gadgets and starts at the reference") {
    const Circuit ref = reference_circuit(ReferenceSpec::parse("1010"), 4);
    const Circuit a = build_ucc_ansatz(ucc_excitations(2, 4), ref);
    CHECK(a.n_params() == 3);
    CHECK(a.count(GateKind::RZ) == 12);
    CHECK(a.scale() == 2.0);
    a.validate();
    const std::vector<double> zero(3, 0.0);
    const Statevector psi = run_pure(a, zero);
    CHECK(std::norm(psi[parse_bitstring("1010")]) == doctest::Approx(1.0));
    const Circuit none = build_ucc_ansatz({}, ref);
    CHECK(none.size() == ref.size());
    CHECK_THROWS_AS(run_pure(a, std::vector<double>{0.1}), InvalidArgument);
}

TEST_CASE("ansatz parameter acts as exp(theta (T - T^dagger))") {
    const Circuit ref = reference_circuit(ReferenceSpec::parse("1010"), 4);
    const auto ex = ucc_excitations(2, 4);
    const Circuit a = build_ucc_ansatz({ex[1]}, ref, 1.0);
    const double theta = 0.37;
    const double th[] = {theta};
    const Statevector psi = run_pure(a, th);
    // exp(theta G)|1010> = cos(theta)|1010> +- sin(theta)|0101>
    CHECK(std::abs(psi[parse_bitstring("1010")]) == doctest::Approx(std::cos(theta)));
    CHECK(std::abs(psi[parse_bitstring("0101")]) == doctest::Approx(std::sin(theta)));
    // compare with the dense exponential of the generator
    const oracle::Mat g = to_dense(excitation_generator(ex[1], 4));
    Eigen::ComplexEigenSolver<oracle::Mat> es(g);
    const oracle::Mat expg = es.eigenvectors() * (theta * es.eigenvalues()).array().exp().matrix().asDiagonal() * es.eigenvectors().inverse();
    const auto col = expg.col(static_cast<Eigen::Index>(parse_bitstring("1010")));
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(psi[i] - col(static_cast<Eigen::Index>(i))) < 1e-10);
}

TEST_CASE("two-determinant references carry the requested sign") {
    for (const char* spec : {"1001+0110", "1001-0110", "0110+1001", "100110+011010", "110100-011001"}) {
        const ReferenceSpec r = ReferenceSpec::parse(spec);
        const int n = static_cast<int>(std::string(spec).find_first_of("+-"));
        const Statevector psi = run_pure(reference_circuit(r, n));
        const auto a = psi[r.determinants[0]], b = psi[r.determinants[1]];
        CHECK(std::abs(a) == doctest::Approx(1 / std::numbers::sqrt2));
        CHECK(std::abs(b - static_cast<double>(r.relative_sign) * a) < 1e-12);
        CHECK(r.to_string(n) == spec);
    }
    CHECK_THROWS_AS(ReferenceSpec::parse("10x1"), ParseError);
    CHECK_THROWS_AS(reference_circuit(ReferenceSpec::parse("1100+1110"), 4), InvalidArgument);
}

TEST_CASE("folding multiplies the gate count and keeps the unitary") {
    const Circuit ref = reference_circuit(ReferenceSpec::parse("1010"), 4);
    const Circuit a = build_ucc_ansatz(ucc_excitations(2, 4), ref);
    const std::vector<double> th{0.1, -0.2, 0.3};
    const Circuit bound = a.bind(th);
    const oracle::Mat u = circuit_unitary(bound);
    for (int gamma : {1, 3, 5, 7}) {
        const Circuit f = fold_circuit(bound, gamma);
        CHECK(f.size() == static_cast<std::size_t>(gamma) * bound.size());
        CHECK((circuit_unitary(f) - u).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(fold_circuit(bound, 2), InvalidArgument);
    CHECK_THROWS_AS(fold_circuit(bound, 0), InvalidArgument);
    const oracle::Mat id = circuit_unitary(bound.inverse()) * u;
    CHECK(phase_free_distance(id, oracle::Mat::Identity(16, 16)) < 1e-10);
}

TEST_CASE("validation catches bad gates and unused slots") {
    Circuit c(2);
    CHECK_THROWS_AS(c.cnot(0, 0), InvalidArgument);
    CHECK_THROWS_AS(c.x(2), DimensionError);
    c.add_slot("unused");
    CHECK_THROWS_AS(c.validate(), DataError);
}

}

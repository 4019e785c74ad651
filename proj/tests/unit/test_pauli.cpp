#include <doctest.h>

#include <random>
#include <sstream>

#include "fsvqe/errors.hpp"
#include "fsvqe/pauli.hpp"
#include "fsvqe/state.hpp"
#include "support.hpp"

using namespace fsvqe;

TEST_SUITE("pauli_core") {

TEST_CASE("single-qubit products carry the expected phase") {
    const auto xy = pauli_mul(PauliTerm::from_label("X"), PauliTerm::from_label("Y"));
    CHECK(xy.label() == "Z");
    CHECK(std::abs(xy.coeff - cplx{0, 1}) < 1e-15);
    const auto yx = pauli_mul(PauliTerm::from_label("Y"), PauliTerm::from_label("X"));
    CHECK(std::abs(yx.coeff - cplx{0, -1}) < 1e-15);
    const auto zz = pauli_mul(PauliTerm::from_label("ZZ"), PauliTerm::from_label("ZZ"));
    CHECK(zz.label() == "II");
    CHECK(std::abs(zz.coeff - 1.0) < 1e-15);
}

TEST_CASE("mismatched registers are rejected") {
    CHECK_THROWS_AS(pauli_mul(PauliTerm::from_label("XI"), PauliTerm::from_label("XII")), DimensionError);
}

TEST_CASE("labels round-trip and reject junk") {
    for (const char* l : {"I", "XYZI", "ZZZZZZ", "IIIY"}) CHECK(to_label(parse_label(l), static_cast<int>(std::string(l).size())) == l);
    CHECK_THROWS_AS(parse_label("XQ"), ParseError);
    CHECK(parse_label("YI").op(0) == 'Y');
}

TEST_CASE("term products agree with dense matrices on random strings") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const std::string la = oracle::random_label(rng, n), lb = oracle::random_label(rng, n);
        const cplx ca{u(rng), u(rng)}, cb{u(rng), u(rng)};
        const PauliTerm p = pauli_mul(PauliTerm::from_label(la, ca), PauliTerm::from_label(lb, cb));
        const oracle::Mat expect = ca * cb * oracle::pauli_matrix(la) * oracle::pauli_matrix(lb);
        const oracle::Mat got = p.coeff * oracle::pauli_matrix(p.label());
        REQUIRE((got - expect).cwiseAbs().maxCoeff() < 1e-10);
        // a.b = +/- b.a with the sign set by the anticommuting positions
        const bool commute = (oracle::pauli_matrix(la) * oracle::pauli_matrix(lb) - oracle::pauli_matrix(lb) * oracle::pauli_matrix(la))
                                 .cwiseAbs()
                                 .maxCoeff() < 1e-12;
        CHECK(strings_commute(parse_label(la), parse_label(lb)) == commute);
    }
}

TEST_CASE("sum products and squares agree with dense matrices") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        PauliSum a(n), b(n);
        oracle::Mat da = oracle::Mat::Zero(1 << n, 1 << n), db = da;
        for (int k = 0; k < 4; ++k) {
            const std::string la = oracle::random_label(rng, n), lb = oracle::random_label(rng, n);
            const cplx ca{u(rng), 0.3 * u(rng)}, cb{u(rng), 0.0};
            a.add(PauliTerm::from_label(la, ca));
            b.add(PauliTerm::from_label(lb, cb));
            da += ca * oracle::pauli_matrix(la);
            db += cb * oracle::pauli_matrix(lb);
        }
        REQUIRE((to_dense(a) - da).cwiseAbs().maxCoeff() < 1e-10);
        REQUIRE((to_dense(sum_product(a, b)) - da * db).cwiseAbs().maxCoeff() < 1e-10);
        REQUIRE((to_dense(sum_product(a, a)) - da * da).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("like terms merge and small terms are dropped") {
    PauliSum s(2, {{"XZ", 0.5}, {"XZ", 0.25}, {"ZZ", 1e-14}, {"II", 1.0}});
    CHECK(s.size() == 3);
    CHECK(s.coeff("XZ")->real() == doctest::Approx(0.75));
    const PauliSum t = sum_simplify(s);
    CHECK(t.size() == 2);
    CHECK_FALSE(t.coeff("ZZ").has_value());
    CHECK(t.identity_coeff().real() == 1.0);
}

TEST_CASE("product of a Hermitian sum with itself keeps first-occurrence order") {
    PauliSum h(2, {{"ZI", 1.0}, {"XX", 0.5}});
    const PauliSum sq = sum_product(h, h);
    // ZI*ZI = II, ZI*XX = -iYX ... merged; II first
    CHECK(sq.terms().front().label() == "II");
    CHECK(sq.identity_coeff().real() == doctest::Approx(1.25));
    CHECK(sq.is_hermitian());
}

TEST_CASE("canonical order sorts by x bits then z bits, qubit 0 most significant") {
    PauliSum s(2, {{"XI", 1.0}, {"ZI", 1.0}, {"IZ", 1.0}, {"II", 1.0}, {"IX", 1.0}});
    const PauliSum c = canonical_order(s);
    std::vector<std::string> got;
    for (const auto& t : c) got.push_back(t.label());
    CHECK(got == std::vector<std::string>{"II", "IZ", "ZI", "IX", "XI"});
}

TEST_CASE("text form round-trips exactly") {
    PauliSum s(3, {{"XYZ", cplx{0.1, -0.2}}, {"III", 1.0 / 3.0}});
    std::stringstream io;
    s.write(io);
    const PauliSum r = PauliSum::read(io);
    REQUIRE(r.size() == 2);
    CHECK(*r.coeff("XYZ") == *s.coeff("XYZ"));
    CHECK(*r.coeff("III") == *s.coeff("III"));
}

TEST_CASE("expectation values match dense contraction") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        std::vector<cplx> amps(std::size_t{1} << n);
        double norm = 0;
        for (auto& a : amps) {
            a = {g(rng), g(rng)};
            norm += std::norm(a);
        }
        for (auto& a : amps) a /= std::sqrt(norm);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
        const Statevector psi(n, amps);
        const QuantumState st(psi);
        const QuantumState mixed{DensityMatrix(psi)};
        for (int k = 0; k < 5; ++k) {
            const std::string l = oracle::random_label(rng, n);
            const cplx expect = v.adjoint() * oracle::pauli_matrix(l) * v;
            CHECK(std::abs(string_expectation(parse_label(l), st) - expect) < 1e-10);
            CHECK(std::abs(string_expectation(parse_label(l), mixed) - expect) < 1e-10);
        }
    }
}

TEST_CASE("non-Hermitian sums are refused by expectation_dense") {
    PauliSum s(1, {{"X", cplx{0, 1}}});
    const QuantumState st(Statevector(1));
    CHECK_THROWS_AS(expectation_dense(s, st), HermiticityError);
    PauliSum t(2, {{"ZZ", 1.0}});
    CHECK_THROWS_AS(expectation_dense(t, st), DimensionError);
}

}

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fsvqe/errors.hpp"
#include "fsvqe/fermion.hpp"
#include "fsvqe/folded.hpp"
#include "fsvqe/json_io.hpp"
#include "support.hpp"

using namespace fsvqe;

namespace {

// Independent JW oracle: a_j = Z_0 ... Z_{j-1} (|0><1|)_j as explicit matrices.
oracle::Mat annihilator(int j, int n) {
    oracle::Mat lower(2, 2);
    lower << 0, 1, 0, 0;  // |0><1|
    oracle::Mat m = oracle::Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
        const oracle::Mat f = q < j ? oracle::pauli2('Z') : (q == j ? lower : oracle::pauli2('I'));
        m = oracle::kron(f, m);
    }
    return m;
}

}  // namespace

TEST_SUITE("fermion") {

TEST_CASE("ladder images match the explicit Jordan-Wigner matrices") {
    for (int n = 1; n <= 5; ++n)
        for (int j = 0; j < n; ++j) {
            CHECK((to_dense(jordan_wigner_ladder(j, false, n)) - annihilator(j, n)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((to_dense(jordan_wigner_ladder(j, true, n)) - annihilator(j, n).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("canonical anticommutators hold for every pair on six modes") {
    const int n = 6;
    std::vector<PauliSum> a, ad;
    for (int j = 0; j < n; ++j) {
        a.push_back(jordan_wigner_ladder(j, false, n));
        ad.push_back(jordan_wigner_ladder(j, true, n));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const PauliSum ac = sum_simplify(sum_product(a[i], ad[j]) + sum_product(ad[j], a[i]));
            if (i == j) {
                REQUIRE(ac.size() == 1);
                CHECK(ac.identity_coeff() == cplx{1.0, 0.0});
            } else {
                CHECK(ac.empty());
            }
            CHECK(sum_simplify(sum_product(a[i], a[j]) + sum_product(a[j], a[i])).empty());
            CHECK(sum_simplify(sum_product(ad[i], ad[j]) + sum_product(ad[j], ad[i])).empty());
        }
}

TEST_CASE("number operator counts set bits") {
    const PauliSum n = jordan_wigner(number_operator(4));
    const auto d = to_dense(n);
    for (int i = 0; i < 16; ++i) CHECK(d(i, i).real() == doctest::Approx(__builtin_popcount(static_cast<unsigned>(i))));
}

TEST_CASE("FCIDUMP parser fills all integral symmetries") {
    std::istringstream in(R"( &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
  0.5  1 1 1 1
  0.1D0  2 1 1 1
  0.25  2 1 2 1
  -1.0  1 1 0 0
  -0.5  2 2 0 0
  0.02  2 1 0 0
  0.7  0 0 0 0
)");
    const IntegralData d = parse_fcidump(in);
    CHECK(d.n_orbitals == 2);
    CHECK(d.n_electrons == 2);
    CHECK(d.nuclear_repulsion == 0.7);
    CHECK(d.h1(0, 1) == 0.02);
    CHECK(d.h1(1, 0) == 0.02);
    CHECK(d.two_body(0, 0, 0, 1) == doctest::Approx(0.1));
    CHECK(d.two_body(1, 0, 0, 0) == doctest::Approx(0.1));
    CHECK(d.two_body(0, 1, 0, 1) == 0.25);
    CHECK(d.two_body(1, 0, 1, 0) == 0.25);
    CHECK(d.two_body(0, 1, 1, 0) == 0.25);
}

TEST_CASE("FCIDUMP errors carry line numbers") {
    std::istringstream bad(" &FCI NORB=2,NELEC=2,\n &END\n 0.5 1 1 1\n");
    try {
        parse_fcidump(bad, "bad.fcidump");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("bad.fcidump") != std::string::npos);
    }
    std::istringstream range(" &FCI NORB=2,NELEC=2,\n &END\n 0.5 3 1 1 1\n");
    CHECK_THROWS_AS(parse_fcidump(range), Error);
    std::istringstream clash(" &FCI NORB=2,NELEC=2,\n &END\n 0.5 2 1 1 1\n 0.6 1 2 1 1\n");
    CHECK_THROWS_AS(parse_fcidump(clash), DataError);
    CHECK_THROWS(read_fcidump("/nonexistent/file.fcidump"));
}

TEST_CASE("H2 Hamiltonian has 15 strings and reproduces the FCI spectrum") {
    const Fixture f = load_fixture(oracle::fixtures() / "groups" / "h2_sto3g.fcidump");
    const PauliSum h = qubit_hamiltonian(f.integrals);
    CHECK(h.size() == 15);
    CHECK(h.n_qubits() == 4);
    CHECK(h.is_hermitian(1e-12));
    const Spectrum sp = exact_spectrum(h, false, 2);
    REQUIRE(static_cast<std::size_t>(sp.values.size()) == f.fci_spectrum.size());
    for (std::size_t k = 0; k < f.fci_spectrum.size(); ++k) CHECK(sp.values(static_cast<Eigen::Index>(k)) == doctest::Approx(f.fci_spectrum[k]).epsilon(1e-9));
}

TEST_CASE("Hartree-Fock determinant energy matches the fixture") {
    for (const char* name : {"h2/h2_0.74", "lih_s/lih_s_1.530"}) {
        const Fixture f = load_fixture(oracle::fixtures() / (std::string(name) + ".fcidump"));
        const PauliSum h = qubit_hamiltonian(f.integrals);
        const int n = f.integrals.n_orbitals;
        std::uint64_t hf = 0;
        for (int p = 0; p < f.integrals.n_electrons / 2; ++p) hf |= (1ULL << p) | (1ULL << (p + n));
        const auto d = to_dense(h);
        CHECK(d(static_cast<Eigen::Index>(hf), static_cast<Eigen::Index>(hf)).real() == doctest::Approx(f.meta["hf_energy"].get<double>()).epsilon(1e-9));
    }
}

TEST_CASE("phase alignment flips negative-overlap orbitals and preserves the spectrum") {
    const Fixture a = load_fixture(oracle::fixtures() / "lih_s" / "lih_s_1.530.fcidump");
    const Fixture b = load_fixture(oracle::fixtures() / "lih_s" / "lih_s_1.635.fcidump");
    REQUIRE(a.frame);
    REQUIRE(b.frame);
    // Flip one column by hand; alignment must undo it.
    Eigen::MatrixXd flipped = b.frame->coeffs;
    flipped.col(1) *= -1.0;
    const PhaseAlignment ref = mo_phase_align(*a.frame, b.frame->coeffs);
    const PhaseAlignment pa = mo_phase_align(*a.frame, flipped);
    CHECK((pa.coeffs - ref.coeffs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(pa.signs[1] == -ref.signs[1]);
    for (Eigen::Index k = 0; k < pa.diagonal.size(); ++k) CHECK((pa.coeffs.transpose() * a.frame->overlap * a.frame->coeffs)(k, k) > 0.0);

    std::vector<int> signs(static_cast<std::size_t>(b.integrals.n_orbitals), 1);
    signs[1] = -1;
    signs[2] = -1;
    const IntegralData flipped_ints = apply_orbital_signs(b.integrals, signs);
    CHECK(flipped_ints.h1(0, 1) == doctest::Approx(-b.integrals.h1(0, 1)));
    const auto e0 = exact_spectrum(qubit_hamiltonian(b.integrals), false, 4).values;
    const auto e1 = exact_spectrum(qubit_hamiltonian(flipped_ints), false, 4).values;
    CHECK((e0 - e1).cwiseAbs().maxCoeff() < 1e-9);
}

}

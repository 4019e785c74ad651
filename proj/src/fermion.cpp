#include "fsvqe/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <regex>
#include <sstream>

#include "fsvqe/errors.hpp"

namespace fsvqe {

FermionOperator::FermionOperator(int n_spin_orbitals) : n_(n_spin_orbitals) {
    if (n_spin_orbitals < 1 || n_spin_orbitals > 64) throw InvalidArgument("spin-orbital count must be in [1, 64]");
}

void FermionOperator::add(cplx coeff, std::vector<LadderOp> ops) {
    for (const auto& op : ops)
        if (op.orbital < 0 || op.orbital >= n_) throw DimensionError("ladder operator index " + std::to_string(op.orbital) + " out of range");
    std::string key;
    key.reserve(ops.size());
    for (const auto& op : ops) key.push_back(static_cast<char>(op.orbital * 2 + (op.creation ? 1 : 0)));
    auto [it, inserted] = index_.try_emplace(std::move(key), terms_.size());
    if (inserted) {
        terms_.push_back({coeff, std::move(ops)});
    } else {
        terms_[it->second].coeff += coeff;
    }
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
    if (other.n_ != n_) throw DimensionError("FermionOperator addition: size mismatch");
    for (const auto& t : other.terms_) add(t.coeff, t.ops);
    return *this;
}

// ---------------------------------------------------------------------------
// FCIDUMP

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

int header_int(const std::string& header, const std::string& key, const std::string& source, int line, bool required,
               int fallback = 0) {
    const std::regex re("\\b" + key + "\\s*=\\s*(-?[0-9]+)");
    std::smatch m;
    if (std::regex_search(header, m, re)) return std::stoi(m[1].str());
    if (required) throw ParseError(source, line, "FCIDUMP header lacks " + key);
    return fallback;
}

void set_checked(double& slot, bool& filled, double value, const std::string& source, int line) {
    if (filled && std::abs(slot - value) > 1e-8)
        throw DataError(source + ":" + std::to_string(line) + ": integral conflicts with a symmetry-equivalent record (" +
                        std::to_string(slot) + " vs " + std::to_string(value) + ")");
    slot = value;
    filled = true;
}

}  // namespace

IntegralData parse_fcidump(std::istream& in, const std::string& source) {
    std::string line;
    std::string header;
    int line_no = 0;
    bool header_done = false;
    bool header_started = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string u = upper(line);
        if (!header_started) {
            if (u.find("&FCI") == std::string::npos) {
                if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw ParseError(source, line_no, "expected '&FCI' header");
            }
            header_started = true;
        }
        header += u + " ";
        if (u.find("&END") != std::string::npos || u.find('/') != std::string::npos) {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw ParseError(source, line_no, "unterminated FCIDUMP header");

    IntegralData d;
    d.n_orbitals = header_int(header, "NORB", source, line_no, true);
    d.n_electrons = header_int(header, "NELEC", source, line_no, true);
    d.ms2 = header_int(header, "MS2", source, line_no, false, 0);
    if (d.n_orbitals < 1 || d.n_orbitals > 32) throw ParseError(source, line_no, "NORB out of range");
    if (d.n_electrons < 0 || d.n_electrons > 2 * d.n_orbitals) throw ParseError(source, line_no, "NELEC out of range");

    const int n = d.n_orbitals;
    const auto nn = static_cast<std::size_t>(n);
    d.h1 = Eigen::MatrixXd::Zero(n, n);
    d.eri.assign(nn * nn * nn * nn, 0.0);
    std::vector<char> h1_set(nn * nn, 0), eri_set(d.eri.size(), 0);
    auto eri_index = [nn](int p, int q, int r, int s) {
        return ((static_cast<std::size_t>(p) * nn + q) * nn + r) * nn + s;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), 'D', 'E');
        std::replace(line.begin(), line.end(), 'd', 'e');
        std::istringstream ls(line);
        double value = 0;
        int i = 0, j = 0, k = 0, l = 0;
        if (!(ls >> value >> i >> j >> k >> l)) throw ParseError(source, line_no, "expected '<value> i j k l'");
        std::string extra;
        if (ls >> extra) throw ParseError(source, line_no, "trailing data in integral record");
        if (i < 0 || j < 0 || k < 0 || l < 0 || i > n || j > n || k > n || l > n)
            throw ParseError(source, line_no, "orbital index out of range");
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            d.nuclear_repulsion = value;
        } else if (k == 0 && l == 0) {
            if (j == 0) continue;  // orbital energy
            const int p = i - 1, q = j - 1;
            bool f1 = h1_set[p * nn + q], f2 = h1_set[q * nn + p];
            set_checked(d.h1(p, q), f1, value, source, line_no);
            set_checked(d.h1(q, p), f2, value, source, line_no);
            h1_set[p * nn + q] = h1_set[q * nn + p] = 1;
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0) throw ParseError(source, line_no, "malformed two-body record");
            const int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
            const int perms[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                                     {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
            for (const auto& pm : perms) {
                const std::size_t idx = eri_index(pm[0], pm[1], pm[2], pm[3]);
                bool filled = eri_set[idx];
                set_checked(d.eri[idx], filled, value, source, line_no);
                eri_set[idx] = 1;
            }
        }
    }
    return d;
}

IntegralData read_fcidump(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    return parse_fcidump(in, path.string());
}

// ---------------------------------------------------------------------------

FermionOperator build_hamiltonian(const IntegralData& data) {
    const int n = data.n_orbitals;
    if (data.h1.rows() != n || data.h1.cols() != n) throw DataError("h1 has wrong shape");
    if (data.eri.size() != static_cast<std::size_t>(n) * n * n * n) throw DataError("eri has wrong size");

    FermionOperator h(2 * n);
    if (data.nuclear_repulsion != 0.0) h.add(data.nuclear_repulsion, {});
    const Spin spins[2] = {Spin::Alpha, Spin::Beta};
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            const double v = data.h1(p, q);
            if (v == 0.0) continue;
            for (Spin s : spins) h.add(v, {{spin_orbital(p, s, n), true}, {spin_orbital(q, s, n), false}});
        }
    // 1/2 sum (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    const double v = data.two_body(p, q, r, s);
                    if (v == 0.0) continue;
                    for (Spin s1 : spins)
                        for (Spin s2 : spins) {
                            const int a = spin_orbital(p, s1, n), b = spin_orbital(r, s2, n);
                            const int c = spin_orbital(s, s2, n), e = spin_orbital(q, s1, n);
                            if (a == b || c == e) continue;
                            h.add(0.5 * v, {{a, true}, {b, true}, {c, false}, {e, false}});
                        }
                }
    return h;
}

PauliSum jordan_wigner_ladder(int orbital, bool creation, int n_qubits) {
    if (orbital < 0 || orbital >= n_qubits) throw DimensionError("ladder index out of range");
    const std::uint64_t bit = std::uint64_t{1} << orbital;
    const std::uint64_t chain = bit - 1;
    PauliSum s(n_qubits);
    s.add(PauliString{bit, chain}, 0.5);                                            // X_j
    s.add(PauliString{bit, chain | bit}, cplx{0.0, creation ? -0.5 : 0.5});         // Y_j
    return s;
}

PauliSum jordan_wigner(const FermionOperator& op, double tol) {
    const int n = op.n_spin_orbitals();
    std::vector<PauliSum> ladders;
    ladders.reserve(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        ladders.push_back(jordan_wigner_ladder(j, false, n));
        ladders.push_back(jordan_wigner_ladder(j, true, n));
    }
    PauliSum total(n);
    for (const auto& term : op.terms()) {
        PauliSum product = PauliSum::identity(n, term.coeff);
        for (const auto& l : term.ops) product = sum_product(product, ladders[2 * l.orbital + (l.creation ? 1 : 0)], 0.0);
        total += product;
    }
    return canonical_order(sum_simplify(total, tol));
}

PauliSum qubit_hamiltonian(const IntegralData& data) { return jordan_wigner(build_hamiltonian(data)); }

FermionOperator number_operator(int n_spin_orbitals) {
    FermionOperator op(n_spin_orbitals);
    for (int j = 0; j < n_spin_orbitals; ++j) op.add(1.0, {{j, true}, {j, false}});
    return op;
}

// ---------------------------------------------------------------------------

PhaseAlignment mo_phase_align(const MOFrame& prev, const Eigen::MatrixXd& next_coeffs) {
    if (prev.coeffs.rows() != prev.overlap.rows() || prev.overlap.rows() != prev.overlap.cols() ||
        next_coeffs.rows() != prev.coeffs.rows() || next_coeffs.cols() != prev.coeffs.cols())
        throw DimensionError("mo_phase_align: non-conformable coefficient/overlap matrices");
    const Eigen::MatrixXd p = prev.coeffs.transpose() * prev.overlap * next_coeffs;
    PhaseAlignment out;
    out.coeffs = next_coeffs;
    out.diagonal = p.diagonal();
    out.signs.assign(static_cast<std::size_t>(p.cols()), 1);
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
        if (std::abs(p(k, k)) < 0.5) out.ambiguous = true;
        if (p(k, k) < 0) {
            out.signs[static_cast<std::size_t>(k)] = -1;
            out.coeffs.col(k) *= -1.0;
        }
    }
    return out;
}

IntegralData apply_orbital_signs(const IntegralData& data, std::span<const int> signs) {
    if (static_cast<int>(signs.size()) != data.n_orbitals) throw DimensionError("apply_orbital_signs: wrong sign count");
    IntegralData out = data;
    const int n = data.n_orbitals;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) out.h1(p, q) *= signs[p] * signs[q];
    const auto nn = static_cast<std::size_t>(n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    out.eri[((p * nn + q) * nn + r) * nn + s] *= signs[p] * signs[q] * signs[r] * signs[s];
    return out;
}

}  // namespace fsvqe

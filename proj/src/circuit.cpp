#include "fsvqe/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "fsvqe/errors.hpp"
#include "fsvqe/fermion.hpp"

namespace fsvqe {

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::X: return "X";
        case GateKind::H: return "H";
        case GateKind::RX: return "RX";
        case GateKind::RZ: return "RZ";
        case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 64) throw InvalidArgument("circuit qubit count must be in [1, 64]");
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

int Circuit::add_slot(std::string name) {
    slots_.push_back(std::move(name));
    return static_cast<int>(slots_.size()) - 1;
}

Circuit& Circuit::add(const Gate& g) {
    if (g.q0 < 0 || g.q0 >= n_qubits_) throw DimensionError("gate qubit out of range");
    if (g.is_two_qubit()) {
        if (g.q1 < 0 || g.q1 >= n_qubits_) throw DimensionError("gate target out of range");
        if (g.q1 == g.q0) throw InvalidArgument("CNOT needs distinct control and target");
    }
    if (g.slot >= n_params()) throw InvalidArgument("gate references unknown slot");
    if (g.slot >= 0 && !g.is_rotation()) throw InvalidArgument("only rotations take parameters");
    gates_.push_back(g);
    return *this;
}

Circuit& Circuit::x(int q) { return add({GateKind::X, q}); }
Circuit& Circuit::h(int q) { return add({GateKind::H, q}); }
Circuit& Circuit::rx(int q, double angle) { return add({GateKind::RX, q, -1, angle}); }
Circuit& Circuit::rz(int q, double angle) { return add({GateKind::RZ, q, -1, angle}); }
Circuit& Circuit::rz(int q, int slot, double weight) { return add({GateKind::RZ, q, -1, 0.0, slot, weight}); }
Circuit& Circuit::cnot(int control, int target) { return add({GateKind::CNOT, control, target}); }

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_qubits_ != n_qubits_) throw DimensionError("append: qubit count mismatch");
    const int offset = n_params();
    for (const auto& s : other.slots_) slots_.push_back(s);
    for (Gate g : other.gates_) {
        if (g.slot >= 0) g.slot += offset;
        gates_.push_back(g);
    }
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit inv(n_qubits_);
    inv.scale_ = scale_;
    inv.slots_ = slots_;
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
        Gate g = *it;
        if (g.is_rotation()) {
            g.angle = -g.angle;
            g.weight = -g.weight;
        }
        inv.gates_.push_back(g);
    }
    return inv;
}

double Circuit::angle_of(const Gate& g, std::span<const double> theta) const {
    if (g.slot < 0) return g.angle;
    if (static_cast<std::size_t>(g.slot) >= theta.size())
        throw InvalidArgument("unbound parameter slot '" + slots_[static_cast<std::size_t>(g.slot)] + "'");
    return g.angle + g.weight * scale_ * theta[static_cast<std::size_t>(g.slot)];
}

Circuit Circuit::bind(std::span<const double> theta) const {
    if (theta.size() < slots_.size())
        throw InvalidArgument("bind: " + std::to_string(theta.size()) + " values for " + std::to_string(slots_.size()) + " slots");
    Circuit out(n_qubits_);
    for (Gate g : gates_) {
        if (g.slot >= 0) {
            g.angle = angle_of(g, theta);
            g.slot = -1;
            g.weight = 0.0;
        }
        out.gates_.push_back(g);
    }
    return out;
}

void Circuit::validate() const {
    std::vector<char> used(slots_.size(), 0);
    for (const auto& g : gates_) {
        if (g.q0 < 0 || g.q0 >= n_qubits_ || (g.is_two_qubit() && (g.q1 < 0 || g.q1 >= n_qubits_ || g.q1 == g.q0)))
            throw DataError("circuit has a gate with invalid qubits");
        if (g.slot >= 0) used[static_cast<std::size_t>(g.slot)] = 1;
    }
    for (std::size_t s = 0; s < used.size(); ++s)
        if (!used[s]) throw DataError("slot '" + slots_[s] + "' is not referenced by any gate");
}

// ---------------------------------------------------------------------------

void append_pauli_gadget(Circuit& c, const PauliString& p, int slot, double weight, double angle) {
    if (p.is_identity()) throw InvalidArgument("pauli gadget of the identity is a global phase");
    if (c.n_qubits() < 64 && (p.support() >> c.n_qubits()) != 0) throw DimensionError("Pauli string exceeds circuit register");
    std::vector<int> active;
    for (int q = 0; q < c.n_qubits(); ++q)
        if ((p.support() >> q) & 1U) active.push_back(q);
    const double half_pi = std::numbers::pi / 2;
    // X = H Z H,  Y = Rx(pi/2)^dagger Z Rx(pi/2)
    for (int q : active) {
        const char o = p.op(q);
        if (o == 'X') c.h(q);
        if (o == 'Y') c.rx(q, half_pi);
    }
    for (std::size_t k = 0; k + 1 < active.size(); ++k) c.cnot(active[k], active[k + 1]);
    if (slot >= 0) {
        c.add({GateKind::RZ, active.back(), -1, angle, slot, weight});
    } else {
        c.rz(active.back(), angle);
    }
    for (std::size_t k = active.size() - 1; k > 0; --k) c.cnot(active[k - 1], active[k]);
    for (int q : active) {
        const char o = p.op(q);
        if (o == 'X') c.h(q);
        if (o == 'Y') c.rx(q, -half_pi);
    }
}

Circuit pauli_gadget(const PauliTerm& p) {
    Circuit c(p.n_qubits);
    const int slot = c.add_slot("theta");
    append_pauli_gadget(c, p.ops, slot, 1.0);
    return c;
}

std::uint64_t hartree_fock_state(int n_electrons, int n_spin_orbitals) {
    if (n_spin_orbitals % 2 != 0) throw InvalidArgument("spin-orbital count must be even");
    if (n_electrons < 0 || n_electrons > n_spin_orbitals) throw InvalidArgument("electron count out of range");
    const int n_spatial = n_spin_orbitals / 2;
    const int n_alpha = (n_electrons + 1) / 2, n_beta = n_electrons / 2;
    std::uint64_t s = 0;
    for (int p = 0; p < n_alpha; ++p) s |= std::uint64_t{1} << spin_orbital(p, Spin::Alpha, n_spatial);
    for (int p = 0; p < n_beta; ++p) s |= std::uint64_t{1} << spin_orbital(p, Spin::Beta, n_spatial);
    return s;
}

std::vector<Excitation> ucc_excitations(int n_electrons, int n_spin_orbitals, int rank_max) {
    if (n_electrons > n_spin_orbitals) throw InvalidArgument("more electrons than spin orbitals");
    if (n_spin_orbitals % 2 != 0) throw InvalidArgument("spin-orbital count must be even");
    const int n_spatial = n_spin_orbitals / 2;
    const std::uint64_t hf = hartree_fock_state(n_electrons, n_spin_orbitals);
    std::vector<int> occ, virt;
    for (int j = 0; j < n_spin_orbitals; ++j) ((hf >> j) & 1U ? occ : virt).push_back(j);
    auto spin_of = [n_spatial](int so) { return so >= n_spatial ? 1 : 0; };

    std::vector<Excitation> out;
    for (int j : occ) {
        for (int a : virt) {
            if (spin_of(a) != spin_of(j)) continue;
            out.push_back({1, {j}, {a}, "s_" + std::to_string(j) + "_" + std::to_string(a)});
        }
        if (rank_max < 2) continue;
        for (int i : occ) {
            if (i <= j) continue;
            for (std::size_t ai = 0; ai < virt.size(); ++ai)
                for (std::size_t bi = ai + 1; bi < virt.size(); ++bi) {
                    const int a = virt[ai], b = virt[bi];
                    if (spin_of(a) + spin_of(b) != spin_of(i) + spin_of(j)) continue;
                    out.push_back({2, {j, i}, {a, b},
                                   "d_" + std::to_string(j) + "_" + std::to_string(i) + "_" + std::to_string(a) + "_" +
                                       std::to_string(b)});
                }
        }
    }
    return out;
}

PauliSum excitation_generator(const Excitation& e, int n_qubits) {
    FermionOperator t(n_qubits);
    if (e.rank == 1) {
        t.add(1.0, {{e.virtuals[0], true}, {e.occupied[0], false}});
        t.add(-1.0, {{e.occupied[0], true}, {e.virtuals[0], false}});
    } else if (e.rank == 2) {
        // a+_a a+_b a_i a_j  minus its adjoint a+_j a+_i a_b a_a
        const int i = e.occupied[0], j = e.occupied[1], a = e.virtuals[0], b = e.virtuals[1];
        t.add(1.0, {{a, true}, {b, true}, {i, false}, {j, false}});
        t.add(-1.0, {{j, true}, {i, true}, {b, false}, {a, false}});
    } else {
        throw InvalidArgument("only single and double excitations are supported");
    }
    return jordan_wigner(t);
}

Circuit build_ucc_ansatz(const std::vector<Excitation>& excitations, const Circuit& reference, double scale) {
    Circuit c = reference;
    c.set_scale(scale);
    for (const auto& e : excitations) {
        const PauliSum g = excitation_generator(e, c.n_qubits());
        const int slot = c.add_slot(e.name);
        // exp(theta * sum_k i c_k P_k) = prod_k exp(-i (phi_k / 2) P_k),  phi_k = -2 c_k theta
        for (const auto& t : g) {
            if (std::abs(t.coeff.real()) > 1e-12) throw DataError("excitation generator is not anti-Hermitian");
            append_pauli_gadget(c, t.ops, slot, -2.0 * t.coeff.imag());
        }
    }
    return c;
}

// ---------------------------------------------------------------------------

std::uint64_t parse_bitstring(std::string_view bits) {
    if (bits.empty() || bits.size() > 64) throw ParseError("invalid bitstring '" + std::string(bits) + "'");
    std::uint64_t v = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') {
            v |= std::uint64_t{1} << q;
        } else if (bits[q] != '0') {
            throw ParseError("invalid bitstring '" + std::string(bits) + "'");
        }
    }
    return v;
}

std::string format_bitstring(std::uint64_t value, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if ((value >> q) & 1U) s[static_cast<std::size_t>(q)] = '1';
    return s;
}

ReferenceSpec ReferenceSpec::parse(std::string_view text) {
    ReferenceSpec r;
    const auto pos = text.find_first_of("+-");
    if (pos == std::string_view::npos) {
        r.determinants.push_back(parse_bitstring(text));
        return r;
    }
    const auto a = text.substr(0, pos), b = text.substr(pos + 1);
    if (a.size() != b.size()) throw ParseError("reference determinants differ in length");
    r.determinants = {parse_bitstring(a), parse_bitstring(b)};
    r.relative_sign = text[pos] == '+' ? 1 : -1;
    return r;
}

std::string ReferenceSpec::to_string(int n_qubits) const {
    std::string s = format_bitstring(determinants.at(0), n_qubits);
    if (determinants.size() == 2) s += (relative_sign > 0 ? "+" : "-") + format_bitstring(determinants[1], n_qubits);
    return s;
}

Circuit reference_circuit(const ReferenceSpec& ref, int n_qubits) {
    Circuit c(n_qubits);
    if (ref.determinants.empty() || ref.determinants.size() > 2) throw InvalidArgument("reference needs one or two determinants");
    for (auto d : ref.determinants)
        if (n_qubits < 64 && (d >> n_qubits) != 0) throw DimensionError("determinant exceeds register");
    if (ref.determinants.size() == 1) {
        for (int q = 0; q < n_qubits; ++q)
            if ((ref.determinants[0] >> q) & 1U) c.x(q);
        return c;
    }
    const std::uint64_t d1 = ref.determinants[0], d2 = ref.determinants[1];
    if (std::popcount(d1) != std::popcount(d2)) throw InvalidArgument("reference determinants have different particle numbers");
    const std::uint64_t diff = d1 ^ d2;
    if (std::popcount(diff) < 2) throw InvalidArgument("reference determinants must differ on at least two qubits");
    for (int q = 0; q < n_qubits; ++q)
        if ((d1 & d2) >> q & 1U) c.x(q);
    // Pivot: first differing qubit. Branch pivot=1 carries the determinant that occupies it.
    const int pivot = std::countr_zero(diff);
    const std::uint64_t on = (d1 >> pivot) & 1U ? d1 : d2;
    // |d2> + s|d1> is s(|d1> + s|d2>), so the branch order does not matter.
    if (ref.relative_sign < 0) c.x(pivot);  // H|1> = (|0> - |1>)/sqrt2
    c.h(pivot);
    for (int q = pivot + 1; q < n_qubits; ++q) {
        if (!((diff >> q) & 1U)) continue;
        c.cnot(pivot, q);
        if (!((on >> q) & 1U)) c.x(q);
    }
    return c;
}

Circuit fold_circuit(const Circuit& c, int gamma) {
    if (gamma < 1 || gamma % 2 == 0) throw InvalidArgument("fold_circuit: gamma must be an odd integer >= 1, got " + std::to_string(gamma));
    Circuit out = c;
    const Circuit inv = c.inverse();
    for (int k = 0; k < (gamma - 1) / 2; ++k) {
        for (const auto& g : inv.gates()) out.add(g);
        for (const auto& g : c.gates()) out.add(g);
    }
    return out;
}

}  // namespace fsvqe

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsvqe/pauli.hpp"

namespace fsvqe {

enum class GateKind { X, H, RX, RZ, CNOT };

const char* gate_name(GateKind kind);

/// One gate. Rotation angles are `angle + weight * scale * theta[slot]` when a
/// slot is attached, otherwise just `angle` (radians).
struct Gate {
    GateKind kind = GateKind::X;
    int q0 = 0;
    int q1 = -1;  ///< CNOT target
    double angle = 0.0;
    int slot = -1;
    double weight = 0.0;

    bool is_rotation() const { return kind == GateKind::RX || kind == GateKind::RZ; }
    bool is_two_qubit() const { return kind == GateKind::CNOT; }
};

/// Ordered gate list over a fixed register with named parameter slots.
/// The optimizer's raw parameters are multiplied by `scale()` before use.
class Circuit {
public:
    explicit Circuit(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    std::size_t count(GateKind kind) const;

    int add_slot(std::string name);
    const std::vector<std::string>& slot_names() const { return slots_; }
    int n_params() const { return static_cast<int>(slots_.size()); }
    double scale() const { return scale_; }
    void set_scale(double c) { scale_ = c; }

    Circuit& x(int q);
    Circuit& h(int q);
    Circuit& rx(int q, double angle);
    Circuit& rz(int q, double angle);
    Circuit& rz(int q, int slot, double weight);
    Circuit& cnot(int control, int target);
    Circuit& add(const Gate& g);

    /// Appends `other`'s gates; other's slots are appended after this circuit's.
    Circuit& append(const Circuit& other);

    /// Adjoint: reversed order with rotation angles negated. Slots are kept.
    Circuit inverse() const;

    /// Resolves every rotation to a fixed angle. Throws InvalidArgument when
    /// fewer values than slots are given.
    Circuit bind(std::span<const double> theta) const;
    double angle_of(const Gate& g, std::span<const double> theta) const;

    /// Every slot referenced by at least one gate and every index in range.
    void validate() const;


private:
    int n_qubits_;
    double scale_ = 1.0;
    std::vector<Gate> gates_;
    std::vector<std::string> slots_;
};

/// Basis change, CNOT ladder, Rz, and the mirrored uncompute implementing
/// exp(-i (phi/2) P) with phi = weight * scale * theta[slot] (or the fixed
/// `angle` when slot < 0). Appended to `c`.
void append_pauli_gadget(Circuit& c, const PauliString& p, int slot, double weight, double angle = 0.0);

/// Standalone gadget for exp(-i (theta/2) P) with one slot named "theta".
Circuit pauli_gadget(const PauliTerm& p);

struct Excitation {
    int rank = 1;
    std::vector<int> occupied;
    std::vector<int> virtuals;
    std::string name;
};

/// Spin-conserving singles and doubles over the Hartree-Fock determinant of
/// the blocked spin-orbital layout, in the universal order: for each occupied
/// index j ascending, the singles out of j, then the doubles whose lowest
/// occupied index is j.
std::vector<Excitation> ucc_excitations(int n_electrons, int n_spin_orbitals, int rank_max = 2);

/// Jordan-Wigner image of T - T^dagger for one excitation (anti-Hermitian).
PauliSum excitation_generator(const Excitation& e, int n_qubits);

/// Reference gates followed by one parameter per excitation, each realised as
/// the Pauli gadgets of its generator (first-order Trotter).
Circuit build_ucc_ansatz(const std::vector<Excitation>& excitations, const Circuit& reference, double scale = 2.0);

/// Occupation bitstring helpers; qubit 0 is the leftmost character.
std::uint64_t parse_bitstring(std::string_view bits);
std::string format_bitstring(std::uint64_t value, int n_qubits);

/// Hartree-Fock occupation in the blocked layout.
std::uint64_t hartree_fock_state(int n_electrons, int n_spin_orbitals);

/// A reference made of one determinant, or two determinants combined as
/// (|d1> + sign |d2>)/sqrt(2).
struct ReferenceSpec {
    std::vector<std::uint64_t> determinants;
    int relative_sign = +1;

    /// Parses "1010", "1001+0110" or "1001-0110".
    static ReferenceSpec parse(std::string_view text);
    std::string to_string(int n_qubits) const;
};

Circuit reference_circuit(const ReferenceSpec& ref, int n_qubits);

/// G followed by (gamma-1)/2 repetitions of (G^dagger G). gamma must be odd.
Circuit fold_circuit(const Circuit& c, int gamma);

}  // namespace fsvqe

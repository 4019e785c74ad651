#pragma once

#include <string>
#include <vector>

#include "fsvqe/circuit.hpp"
#include "fsvqe/pauli.hpp"

namespace fsvqe {

enum class Commutativity { QubitWise, General };

Commutativity parse_commutativity(std::string_view text);
const char* commutativity_name(Commutativity mode);

/// On every qubit where both act non-trivially they apply the same Pauli.
inline bool qwc_commute(const PauliString& a, const PauliString& b) {
    const std::uint64_t both = a.support() & b.support();
    return (((a.x ^ b.x) | (a.z ^ b.z)) & both) == 0;
}

inline bool gc_commute(const PauliString& a, const PauliString& b) { return strings_commute(a, b); }

bool qwc_commute(const PauliTerm& a, const PauliTerm& b);
bool gc_commute(const PauliTerm& a, const PauliTerm& b);

struct MeasurementGroup {
    Commutativity mode = Commutativity::QubitWise;
    std::vector<PauliTerm> terms;
    /// Index of each member in the source operator's storage order.
    std::vector<std::size_t> source_index;
    /// For qubit-wise groups the single-qubit basis per qubit (union of members).
    PauliString basis;
};

struct PartitionOptions {
    /// The identity needs no measurement and is carried as a constant by default.
    bool include_identity = false;
};

/// Colours the non-commutation graph greedily, largest degree first, ties
/// broken by storage order. Every non-identity term lands in exactly one group.
std::vector<MeasurementGroup> partition(const PauliSum& s, Commutativity mode, PartitionOptions opts = {});

/// Group count only; same algorithm.
std::size_t group_count(const PauliSum& s, Commutativity mode);

/// Single-qubit rotations mapping a qubit-wise group onto the Z basis:
/// H for X, Rx(pi/2) for Y. Throws InvalidArgument for general-commuting groups.
Circuit measurement_circuit(const MeasurementGroup& g, int n_qubits);

/// Basis label over IXYZ for a qubit-wise group.
std::string basis_label(const MeasurementGroup& g, int n_qubits);

}  // namespace fsvqe

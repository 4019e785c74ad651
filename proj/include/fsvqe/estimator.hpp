#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsvqe/circuit.hpp"
#include "fsvqe/grouping.hpp"
#include "fsvqe/pauli.hpp"
#include "fsvqe/rng.hpp"
#include "fsvqe/simulator.hpp"

namespace fsvqe {

/// A Hermitian operator split into qubit-wise measurement groups plus the
/// identity coefficient, with the post-rotation for each group.
struct GroupedObservable {
    int n_qubits = 0;
    double constant = 0.0;
    std::vector<MeasurementGroup> groups;
    std::vector<Circuit> rotations;

    /// Throws HermiticityError when some coefficient has |Im| > 1e-9.
    static GroupedObservable build(const PauliSum& s);
    PauliSum reconstruct() const;
    std::size_t n_terms() const;
};

/// Per-outcome eigenvalue of the group's weighted sum: sum_t c_t (-1)^{|outcome & supp_t|}.
double group_outcome_value(const MeasurementGroup& g, std::uint64_t outcome);

struct GroupValue {
    double value = 0.0;
    double variance_of_mean = 0.0;
};

/// Group expectation from counts taken after the group's post-rotation.
double expectation_from_counts(const Counts& counts, const MeasurementGroup& g);
GroupValue group_value(const Counts& counts, const MeasurementGroup& g);
/// Same from a (possibly mitigated) distribution; variance assumes `shots` samples (0 = exact).
GroupValue group_value(std::span<const double> probs, const MeasurementGroup& g, std::uint64_t shots);

enum class Backend { Exact, Shots, Noisy };
Backend parse_backend(std::string_view text);
const char* backend_name(Backend b);

struct EstimatorConfig {
    Backend backend = Backend::Exact;
    /// Shots per measured circuit (one circuit per group); 0 means the exact
    /// distribution is used instead of sampling.
    std::uint64_t shots = 0;
    NoiseModel noise;
};

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    std::uint64_t shots_used = 0;
    std::vector<double> group_values;
};

/// constant + sum over groups of the group expectation measured on
/// circuit(theta) followed by the group's post-rotation.
Estimate estimate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                  const EstimatorConfig& cfg, Rng& rng);

struct PooledEstimate {
    std::vector<Estimate> estimates;  ///< one per observable, same order
    std::uint64_t shots_used = 0;     ///< shots over all distinct circuits
};

/// True when measuring in `basis` diagonalises every term of `g`.
bool basis_covers(const PauliString& basis, const MeasurementGroup& g);

/// Estimates several observables on one state from a shared set of circuits,
/// one per group of each observable. Each group is evaluated from every
/// circuit whose basis covers it, pooling their shots; the standard error
/// accounts for groups sharing circuits.
PooledEstimate estimate_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                               std::span<const double> theta, const EstimatorConfig& cfg, Rng& rng);

/// Noise-free expectation by direct Pauli action on the statevector.
double exact_expectation(const PauliSum& s, const Statevector& psi);

/// round(s_max - (s_max - s_min) exp(-k iteration)).
std::uint64_t shots_schedule(int iteration, std::uint64_t s_min, std::uint64_t s_max, double k = 0.05);

}  // namespace fsvqe

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>

#include "fsvqe/circuit.hpp"
#include "fsvqe/rng.hpp"
#include "fsvqe/state.hpp"

namespace fsvqe {

/// Gate-level noise. Times: T1/T2 in microseconds, gate lengths in nanoseconds.
struct NoiseModel {
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
    double t_gate1 = 0.0;
    double t_gate2 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p_spam = 0.0;

    /// Typical superconducting-device values (the lambda = 1 row).
    static NoiseModel device_reference();

    /// Throws InvalidArgument when T2 > 2 T1 or a probability is outside [0, 1].
    void validate() const;
    bool has_gate_noise() const;

};

/// Ideal relaxation times used as the lambda = 0 limit (microseconds).
inline constexpr double kT1Ideal = 2000.0;
inline constexpr double kT2Ideal = 1000.0;

/// Exponential interpolation for T1/T2 towards the ideal values, linear for the rest.
NoiseModel scale_noise(const NoiseModel& base, double lambda);

/// 2x2 unitary of a single-qubit gate, row-major.
std::array<cplx, 4> gate_matrix(GateKind kind, double angle);

void apply_circuit(Statevector& psi, const Circuit& c, std::span<const double> theta = {});
void apply_circuit(DensityMatrix& rho, const Circuit& c, std::span<const double> theta, const NoiseModel& noise);

Statevector run_pure(const Circuit& c, std::span<const double> theta = {}, std::uint64_t init = 0);
DensityMatrix run_noisy(const Circuit& c, std::span<const double> theta, const NoiseModel& noise, std::uint64_t init = 0);

/// Amplitude damping for a duration t (ns) followed by the extra dephasing
/// that brings coherence decay to exp(-t/T2).
void relax(DensityMatrix& rho, int q, double t_ns, const NoiseModel& noise);

/// Outcome histogram. Keys are outcome integers (bit q = qubit q).
struct Counts {
    int n_qubits = 0;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;

    std::uint64_t operator[](std::string_view bits) const;
    std::map<std::string, std::uint64_t> labelled() const;
};

/// Applies independent per-qubit readout flips with probability p to a distribution.
void apply_readout_flips(std::vector<double>& probs, int n_qubits, double p);

/// Multinomial draw from a probability vector.
Counts sample_distribution(std::span<const double> probs, int n_qubits, std::uint64_t shots, Rng& rng);

/// Born-rule sampling; readout flips with noise->p_spam when a model is given.
Counts sample(const QuantumState& state, std::uint64_t shots, const NoiseModel* noise, Rng& rng);

}  // namespace fsvqe

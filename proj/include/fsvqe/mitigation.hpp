#pragma once

#include <array>
#include <span>
#include <vector>

#include "fsvqe/estimator.hpp"

namespace fsvqe {

/// Per-qubit column-stochastic readout matrices: A[q](r, p) = P(read r | prepared p).
struct ConfusionModel {
    std::vector<std::array<double, 4>> a;  // row-major 2x2 per qubit

    int n_qubits() const { return static_cast<int>(a.size()); }
    void validate() const;
    /// Tensor-product action of A (forward) or A^-1 on a distribution over 2^n outcomes.
    void apply(std::vector<double>& dist) const;
    void apply_inverse(std::vector<double>& dist) const;
};

/// A_q = [[1-p, p], [p, 1-p]] from the model's p_spam. Throws for p_spam >= 0.5.
ConfusionModel build_confusion(const NoiseModel& noise, int n_qubits);

/// Estimates A_q by preparing |0...0> and |1...1> under the noise model and
/// counting per-qubit flips.
ConfusionModel calibrate_confusion(const NoiseModel& noise, int n_qubits, std::uint64_t shots, Rng& rng);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

/// Inverts the confusion model on the empirical distribution, then returns the nearest distribution.
std::vector<double> spam_mitigate(const Counts& counts, const ConfusionModel& cm);
std::vector<double> spam_mitigate(std::vector<double> dist, const ConfusionModel& cm);

struct ZNEPoint {
    int gamma = 1;
    double value = 0.0;
    double std_err = 0.0;
};

struct ZNEFit {
    double intercept = 0.0;
    double std_err = 0.0;
    double a = 0.0;  ///< gamma^2 coefficient
    double b = 0.0;  ///< gamma coefficient
    std::vector<double> weights;  ///< intercept = sum_i weights[i] * points[i].value
};

/// Least-squares fit of E = a g^2 + b g + c, weighted by 1/std_err^2 when every
/// point carries an error. Returns the intercept at gamma = 0.
ZNEFit zne_fit(std::span<const ZNEPoint> points);
inline double zne_extrapolate(std::span<const ZNEPoint> points) { return zne_fit(points).intercept; }

struct MitigationConfig {
    bool spam = false;
    bool zne = false;
    std::vector<int> gammas{1, 3, 5, 7};
    /// Confusion matrices from calibration circuits instead of the model's p_spam.
    bool calibrate = false;
    std::uint64_t calibration_shots = 100000;

    bool enabled() const { return spam || zne; }
};

/// Per group: SPAM-corrected values at each folding factor, extrapolated to
/// zero noise, then summed with the constant. Only the state preparation is
/// folded; post-rotations are appended after folding.
Estimate mitigated_estimate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                            const EstimatorConfig& cfg, const MitigationConfig& mit, Rng& rng);

/// Dispatches to mitigated_estimate for the noisy backend with mitigation enabled, else estimate.
Estimate evaluate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                  const EstimatorConfig& cfg, const MitigationConfig& mit, Rng& rng);

/// Pooled counterpart of mitigated_estimate: at every folding factor each group
/// is read from all SPAM-corrected circuits whose basis covers it, then
/// extrapolated. The standard error follows the extrapolation weights through
/// the shared circuits.
PooledEstimate mitigated_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                                std::span<const double> theta, const EstimatorConfig& cfg, const MitigationConfig& mit,
                                Rng& rng);

/// Dispatches to mitigated_pooled or estimate_pooled like evaluate.
PooledEstimate evaluate_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                               std::span<const double> theta, const EstimatorConfig& cfg, const MitigationConfig& mit,
                               Rng& rng);

}  // namespace fsvqe

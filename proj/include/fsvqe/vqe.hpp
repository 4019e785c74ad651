#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsvqe/circuit.hpp"
#include "fsvqe/estimator.hpp"
#include "fsvqe/fermion.hpp"
#include "fsvqe/folded.hpp"
#include "fsvqe/mitigation.hpp"

namespace fsvqe {

struct SPSAConfig {
    int max_iter = 300;
    double a = 0.0;  ///< <= 0: calibrated from gradient probes at theta0
    double c = 0.1;
    double A = -1.0;  ///< < 0: 0.1 * max_iter
    double alpha = 0.602;
    double gamma_exp = 0.101;
    double grad_tol = 1e-9;
    int grad_window = 25;
    /// Size of the first step when calibrating a.
    double target_step = 0.2;
    int calibration_probes = 10;
    /// Average the last N iterates for the returned parameters (0: last iterate).
    int average_last = 0;
    std::uint64_t seed = 0;

    void validate() const;
    double stability() const { return A < 0.0 ? 0.1 * max_iter : A; }
};

/// Cost callback: parameters and iteration index (-1 for calibration probes).
using CostFunction = std::function<double(std::span<const double>, int)>;

struct SPSAResult {
    std::vector<double> theta;
    int iterations = 0;
    /// Cost evaluations made by the iterations (two per iteration); probes excluded.
    int evaluations = 0;
    int calibration_evaluations = 0;
    bool gradient_converged = false;
    double a = 0.0;
    std::vector<double> history;  ///< mean of the two evaluations per iteration
};

SPSAResult spsa_minimize(const CostFunction& cost, std::vector<double> theta0, const SPSAConfig& cfg);

/// Coordinate-wise parabola through theta_i - delta, theta_i, theta_i + delta;
/// moves to the best of the probes and the vertex. Never accepts a worse value;
/// stops before `sweeps` once a full sweep brings no improvement.
std::vector<double> quadratic_refine(std::vector<double> theta, const CostFunction& cost, double delta, int sweeps = 1);

/// Snaps parameters within `threshold` of {0, +-pi/2, +-pi} when the cost does not
/// increase beyond round-off (1e-12 relative).
std::vector<double> round_params(std::vector<double> theta, const CostFunction& cost, double threshold = 0.05);

/// L1 continuity penalty eta * sum |theta_i - prev_i|.
double tracking_penalty(std::span<const double> theta, std::span<const double> prev, double eta);

struct VQEConfig {
    SPSAConfig spsa;
    EstimatorConfig estimator;
    MitigationConfig mitigation;
    /// Inverse-exponential shot schedule during optimisation (sampling backends).
    bool schedule = true;
    std::uint64_t s_min = 1000;
    std::uint64_t s_max = 10000;
    double schedule_k = 0.05;
    /// Shots per circuit for the final energy and cost.
    std::uint64_t final_shots = 30000;
    /// Gradient threshold used instead of spsa.grad_tol on sampling backends.
    double grad_tol_sampling = 1e-3;
    /// Iterate averaging used instead of spsa.average_last on sampling backends.
    int average_last_sampling = 50;
    bool refine = true;
    double refine_delta = 0.05;
    int refine_sweeps = 2;
    /// Sweep cap on the exact backend, where refinement stops once a sweep stalls.
    int refine_sweeps_exact = 200;
    /// Keep the continuity penalty during refinement and rounding.
    bool penalize_polish = false;
    bool round = true;
    double round_threshold = 0.05;
    /// Energy-variance bound for the converged flag (Hartree^2).
    double variance_tol = 1e-4;
};

/// Problem pieces that stay fixed during one optimisation.
struct VQEProblem {
    FoldedOperator folded;  ///< H and its cached square
    Circuit ansatz;
    GroupedObservable energy_obs;

    VQEProblem(PauliSum h, Circuit ansatz);
    const PauliSum& hamiltonian() const { return folded.base(); }
};

struct VQEResult {
    std::vector<double> theta;
    std::optional<double> omega;
    double energy = 0.0;
    double energy_se = 0.0;
    double cost = 0.0;
    double cost_se = 0.0;
    double variance = 0.0;
    int iterations = 0;
    int evaluations = 0;
    std::uint64_t shots = 0;
    double spsa_a = 0.0;
    bool converged = false;
};

/// Folded-spectrum cost <(H - omega)^2> on the ansatz state.
Estimate cost_fs(std::span<const double> theta, const Circuit& ansatz, const GroupedObservable& folded,
                 const EstimatorConfig& est, const MitigationConfig& mit, Rng& rng);

/// cost_fs plus the continuity penalty.
double cost_tracked(std::span<const double> theta, std::span<const double> prev, double eta, const Circuit& ansatz,
                    const GroupedObservable& folded, const EstimatorConfig& est, const MitigationConfig& mit, Rng& rng);

/// Minimises <H> (omega unset) or <(H - omega)^2>, then refines, rounds and
/// measures energy and cost with the final shot budget. With `prev` and eta > 0
/// the continuity penalty is added to the optimised cost.
VQEResult run_vqe(const VQEProblem& problem, std::vector<double> theta0, std::optional<double> omega, const VQEConfig& cfg,
                  std::uint64_t seed, std::span<const double> prev = {}, double eta = 0.0);

struct PESGeometry {
    std::string id;
    IntegralData integrals;
    std::optional<MOFrame> frame;
};

struct PESConfig {
    VQEConfig vqe;
    /// First-point target; when unset the reference state's <H> is used.
    std::optional<double> omega0;
    bool warm_start = true;
    bool track_omega = true;
    bool phase_align = true;
    double jump_window = 0.05;
    double eta = 0.1;
    bool retry_on_jump = true;
    /// Plain VQE (ground state) instead of the folded spectrum.
    bool ground_state = false;
};

struct PESPoint {
    std::string geometry;
    double omega = 0.0;
    std::vector<double> theta;
    double energy = 0.0;
    double std_err = 0.0;
    double cost = 0.0;
    double cost_se = 0.0;
    double variance = 0.0;
    int iterations = 0;
    std::uint64_t shots = 0;
    bool converged = false;
    bool jump = false;
    bool retried = false;
    std::vector<int> orbital_signs;
};

/// Scans the geometries in order: warm-started parameters, omega from the
/// previous energy, MO signs aligned to the previous frame, and a tracked
/// retry when the energy leaves the jump window. The first point is checked
/// against omega0 when given.
std::vector<PESPoint> pes_scan(const std::vector<PESGeometry>& geometries, const ReferenceSpec& reference, const PESConfig& cfg,
                               std::uint64_t seed);

}  // namespace fsvqe

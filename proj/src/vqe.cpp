#include "fsvqe/vqe.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fsvqe/errors.hpp"

namespace fsvqe {

void SPSAConfig::validate() const {
    if (max_iter < 0) throw InvalidArgument("spsa: max_iter must be non-negative");
    if (!(c > 0.0)) throw InvalidArgument("spsa: c must be positive");
    if (a < 0.0) throw InvalidArgument("spsa: a must be positive (or 0 to calibrate)");
    if (!(alpha > 0.0 && alpha <= 1.0) || !(gamma_exp > 0.0 && gamma_exp <= 1.0))
        throw InvalidArgument("spsa: alpha and gamma_exp must lie in (0, 1]");
    if (grad_window < 1) throw InvalidArgument("spsa: grad_window must be at least 1");
    if (a == 0.0 && (calibration_probes < 1 || !(target_step > 0.0))) throw InvalidArgument("spsa: calibration needs probes and a positive target step");
}

namespace {

double checked(double v, std::span<const double> theta, int iteration) {
    if (std::isfinite(v)) return v;
    std::ostringstream msg;
    msg << "cost is not finite at iteration " << iteration << ", theta = [";
    for (std::size_t i = 0; i < theta.size(); ++i) msg << (i ? ", " : "") << theta[i];
    msg << "]";
    throw Error(msg.str());
}

}  // namespace

SPSAResult spsa_minimize(const CostFunction& cost, std::vector<double> theta, const SPSAConfig& cfg) {
    cfg.validate();
    if (theta.empty()) throw InvalidArgument("spsa: parameter vector is empty");
    const std::size_t dim = theta.size();
    Rng rng = make_rng(cfg.seed, {0x5b5aULL});
    std::bernoulli_distribution coin(0.5);
    std::vector<double> delta(dim), plus(dim), minus(dim);
    auto perturb = [&](double ck) {
        for (std::size_t i = 0; i < dim; ++i) {
            delta[i] = coin(rng) ? 1.0 : -1.0;
            plus[i] = theta[i] + ck * delta[i];
            minus[i] = theta[i] - ck * delta[i];
        }
    };

    SPSAResult res;
    const double A = cfg.stability();
    res.a = cfg.a;
    if (res.a == 0.0) {
        const double f0 = checked(cost(theta, -1), theta, -1);
        res.calibration_evaluations += 1;
        double mag = 0.0, curvature = 0.0;
        for (int p = 0; p < cfg.calibration_probes; ++p) {
            perturb(cfg.c);
            const double fp = checked(cost(plus, -1), plus, -1);
            const double fm = checked(cost(minus, -1), minus, -1);
            mag += std::abs(fp - fm) / (2.0 * cfg.c);
            curvature = std::max(curvature, std::abs(fp + fm - 2.0 * f0) / (cfg.c * cfg.c));
            res.calibration_evaluations += 2;
        }
        mag /= cfg.calibration_probes;
        // Flat start (e.g. already at an eigenstate): fall back to a unit-gradient scale.
        if (mag < 1e-3) mag = 1.0;
        const double scale = std::pow(A + 1.0, cfg.alpha);
        res.a = cfg.target_step * scale / mag;
        // Near a stationary point the gradient probe says little; the curvature
        // along the probe directions bounds the first step instead.
        if (curvature > 0.0) res.a = std::min(res.a, scale / curvature);
    }

    std::deque<double> window;
    double window_sum = 0.0;
    std::deque<std::vector<double>> tail;
    std::vector<double> g(dim);
    for (int k = 0; k < cfg.max_iter; ++k) {
        const double ak = res.a / std::pow(A + k + 1.0, cfg.alpha);
        const double ck = cfg.c / std::pow(k + 1.0, cfg.gamma_exp);
        perturb(ck);
        const double fp = checked(cost(plus, k), plus, k);
        const double fm = checked(cost(minus, k), minus, k);
        res.evaluations += 2;
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            g[i] = (fp - fm) / (2.0 * ck * delta[i]);
            theta[i] -= ak * g[i];
            norm2 += g[i] * g[i];
        }
        res.iterations = k + 1;
        res.history.push_back(0.5 * (fp + fm));
        if (cfg.average_last > 0) {
            tail.push_back(theta);
            if (static_cast<int>(tail.size()) > cfg.average_last) tail.pop_front();
        }
        window.push_back(std::sqrt(norm2));
        window_sum += window.back();
        if (static_cast<int>(window.size()) > cfg.grad_window) {
            window_sum -= window.front();
            window.pop_front();
        }
        if (static_cast<int>(window.size()) == cfg.grad_window && window_sum / cfg.grad_window < cfg.grad_tol) {
            res.gradient_converged = true;
            break;
        }
    }
    if (cfg.average_last > 0 && !tail.empty()) {
        std::fill(theta.begin(), theta.end(), 0.0);
        for (const auto& t : tail)
            for (std::size_t i = 0; i < dim; ++i) theta[i] += t[i] / static_cast<double>(tail.size());
    }
    res.theta = std::move(theta);
    return res;
}

std::vector<double> quadratic_refine(std::vector<double> theta, const CostFunction& cost, double delta, int sweeps) {
    if (!(delta > 0.0)) throw InvalidArgument("quadratic_refine: delta must be positive");
    double best = cost(theta, -1);
    for (int s = 0; s < sweeps; ++s) {
        const double start = best;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double x0 = theta[i];
            theta[i] = x0 + delta;
            const double fp = cost(theta, -1);
            theta[i] = x0 - delta;
            const double fm = cost(theta, -1);
            double best_x = x0, best_f = best;
            if (fp < best_f) best_x = x0 + delta, best_f = fp;
            if (fm < best_f) best_x = x0 - delta, best_f = fm;
            const double curvature = fp + fm - 2.0 * best;
            if (curvature > 0.0) {
                const double xv = x0 + delta * (fm - fp) / (2.0 * curvature);
                theta[i] = xv;
                const double fv = cost(theta, -1);
                if (fv < best_f) best_x = xv, best_f = fv;
            }
            theta[i] = best_x;
            best = best_f;
        }
        if (!(best < start)) break;
    }
    return theta;
}

std::vector<double> round_params(std::vector<double> theta, const CostFunction& cost, double threshold) {
    if (!(threshold > 0.0)) throw InvalidArgument("round_params: threshold must be positive");
    static constexpr double pi = std::numbers::pi;
    static constexpr double grid[] = {0.0, pi / 2, -pi / 2, pi, -pi};
    double current = cost(theta, -1);
    for (auto& t : theta) {
        for (double g : grid) {
            if (t == g || std::abs(t - g) >= threshold) continue;
            const double saved = t;
            t = g;
            const double f = cost(theta, -1);
            if (f <= current + 1e-12 * (1.0 + std::abs(current))) {  // round-off slack
                current = f;
            } else {
                t = saved;
            }
            break;
        }
    }
    return theta;
}

double tracking_penalty(std::span<const double> theta, std::span<const double> prev, double eta) {
    if (eta < 0.0) throw InvalidArgument("tracking penalty: eta must be non-negative");
    if (eta == 0.0 || prev.empty()) return 0.0;
    if (prev.size() != theta.size()) throw DimensionError("tracking penalty: parameter vectors differ in length");
    double l1 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) l1 += std::abs(theta[i] - prev[i]);
    return eta * l1;
}

VQEProblem::VQEProblem(PauliSum h, Circuit c)
    : folded(std::move(h)), ansatz(std::move(c)), energy_obs(GroupedObservable::build(folded.base())) {
    if (ansatz.n_qubits() != folded.base().n_qubits()) throw DimensionError("ansatz and Hamiltonian sizes differ");
}

Estimate cost_fs(std::span<const double> theta, const Circuit& ansatz, const GroupedObservable& folded,
                 const EstimatorConfig& est, const MitigationConfig& mit, Rng& rng) {
    return evaluate(folded, ansatz, theta, est, mit, rng);
}

double cost_tracked(std::span<const double> theta, std::span<const double> prev, double eta, const Circuit& ansatz,
                    const GroupedObservable& folded, const EstimatorConfig& est, const MitigationConfig& mit, Rng& rng) {
    return cost_fs(theta, ansatz, folded, est, mit, rng).value + tracking_penalty(theta, prev, eta);
}

VQEResult run_vqe(const VQEProblem& problem, std::vector<double> theta0, std::optional<double> omega, const VQEConfig& cfg,
                  std::uint64_t seed, std::span<const double> prev, double eta) {
    if (static_cast<int>(theta0.size()) != problem.ansatz.n_params())
        throw DimensionError("initial parameters do not match the ansatz");
    const bool sampling = cfg.estimator.backend != Backend::Exact;
    const GroupedObservable target =
        omega ? GroupedObservable::build(problem.folded.at(*omega).folded()) : problem.energy_obs;

    VQEResult out;
    out.omega = omega;
    Rng eval_rng = make_rng(seed, {1});
    auto make_cost = [&](bool final_budget, double penalty) {
        return [&, final_budget, penalty](std::span<const double> theta, int iteration) {
            EstimatorConfig e = cfg.estimator;
            if (sampling) {
                if (final_budget) {
                    e.shots = cfg.final_shots;
                } else if (cfg.schedule) {
                    e.shots = shots_schedule(std::max(iteration, 0), cfg.s_min, cfg.s_max, cfg.schedule_k);
                }
            }
            const Estimate r = evaluate(target, problem.ansatz, theta, e, cfg.mitigation, eval_rng);
            out.shots += r.shots_used;
            return r.value + tracking_penalty(theta, prev, penalty);
        };
    };

    std::vector<double> theta = std::move(theta0);
    if (!theta.empty()) {
        SPSAConfig sc = cfg.spsa;
        sc.seed = seed;
        if (sampling) {
            sc.grad_tol = cfg.grad_tol_sampling;
            sc.average_last = cfg.average_last_sampling;
        }
        const SPSAResult sr = spsa_minimize(make_cost(false, eta), theta, sc);
        theta = sr.theta;
        out.iterations = sr.iterations;
        out.evaluations = sr.evaluations + sr.calibration_evaluations;
        out.spsa_a = sr.a;
        const CostFunction polish = make_cost(true, cfg.penalize_polish ? eta : 0.0);
        if (cfg.refine)
            theta = quadratic_refine(theta, polish, cfg.refine_delta, sampling ? cfg.refine_sweeps : cfg.refine_sweeps_exact);
        if (cfg.round) theta = round_params(theta, polish, cfg.round_threshold);
    }
    out.theta = theta;

    EstimatorConfig fin = cfg.estimator;
    if (sampling) fin.shots = cfg.final_shots;
    Estimate e, c;
    if (omega) {
        // energy and cost come from one pooled set of circuits on the final state
        const GroupedObservable cost_obs = GroupedObservable::build(problem.folded.at(*omega).folded());
        const GroupedObservable* both[] = {&problem.energy_obs, &cost_obs};
        PooledEstimate p = evaluate_pooled(both, problem.ansatz, theta, fin, cfg.mitigation, eval_rng);
        e = std::move(p.estimates[0]);
        c = std::move(p.estimates[1]);
        out.shots += p.shots_used;
    } else {
        e = evaluate(problem.energy_obs, problem.ansatz, theta, fin, cfg.mitigation, eval_rng);
        out.shots += e.shots_used;
        const GroupedObservable cost_obs = GroupedObservable::build(problem.folded.at(e.value).folded());
        c = evaluate(cost_obs, problem.ansatz, theta, fin, cfg.mitigation, eval_rng);
        out.shots += c.shots_used;
    }
    const double w = omega.value_or(e.value);
    out.omega = w;
    out.energy = e.value;
    out.energy_se = e.std_err;
    out.cost = c.value;
    out.cost_se = c.std_err;
    const double d = out.energy - w;
    out.variance = out.cost - d * d;
    const double slack = 3.0 * std::sqrt(out.cost_se * out.cost_se + 4.0 * d * d * out.energy_se * out.energy_se);
    out.converged = out.variance <= cfg.variance_tol + slack;
    return out;
}

std::vector<PESPoint> pes_scan(const std::vector<PESGeometry>& geometries, const ReferenceSpec& reference, const PESConfig& cfg,
                               std::uint64_t seed) {
    std::vector<PESPoint> points;
    std::optional<MOFrame> aligned;  // previous frame with corrected signs
    std::vector<double> prev_theta;
    double prev_energy = 0.0;
    double spsa_a = cfg.vqe.spsa.a;

    for (std::size_t k = 0; k < geometries.size(); ++k) {
        const auto& geo = geometries[k];
        IntegralData data = geo.integrals;
        PESPoint pt;
        pt.geometry = geo.id;
        pt.orbital_signs.assign(static_cast<std::size_t>(data.n_orbitals), 1);
        if (cfg.phase_align && geo.frame) {
            if (aligned) {
                const PhaseAlignment pa = mo_phase_align(*aligned, geo.frame->coeffs);
                data = apply_orbital_signs(data, pa.signs);
                pt.orbital_signs = pa.signs;
                aligned = MOFrame{pa.coeffs, geo.frame->overlap};
            } else {
                aligned = geo.frame;
            }
        }

        const int nso = data.n_spin_orbitals();
        const Circuit ref = reference_circuit(reference, nso);
        const VQEProblem problem(qubit_hamiltonian(data), build_ucc_ansatz(ucc_excitations(data.n_electrons, nso), ref));

        std::optional<double> omega;
        if (!cfg.ground_state) {
            if (k > 0 && cfg.track_omega) {
                omega = prev_energy;
            } else if (cfg.omega0) {
                omega = cfg.omega0;
            } else {
                omega = exact_expectation(problem.hamiltonian(), run_pure(ref));
            }
        }
        std::vector<double> theta0(static_cast<std::size_t>(problem.ansatz.n_params()), 0.0);
        if (cfg.warm_start && k > 0) theta0 = prev_theta;

        VQEConfig vc = cfg.vqe;
        vc.spsa.a = spsa_a;
        const std::uint64_t point_seed = make_rng(seed, {k})();
        VQEResult r = run_vqe(problem, theta0, omega, vc, point_seed);
        if (spsa_a == 0.0) spsa_a = r.spsa_a;  // gains calibrated once per curve

        if (k > 0 && std::abs(r.energy - prev_energy) > cfg.jump_window) {
            pt.jump = true;
            if (cfg.retry_on_jump && !prev_theta.empty()) {
                VQEResult t = run_vqe(problem, prev_theta, omega, vc, point_seed ^ 0x9e3779b97f4a7c15ULL, prev_theta, cfg.eta);
                t.shots += r.shots;
                t.iterations += r.iterations;
                r = std::move(t);
                pt.retried = true;
                pt.jump = std::abs(r.energy - prev_energy) > cfg.jump_window;
            }
        }
        pt.omega = r.omega.value_or(r.energy);
        pt.theta = r.theta;
        pt.energy = r.energy;
        pt.std_err = r.energy_se;
        pt.cost = r.cost;
        pt.cost_se = r.cost_se;
        pt.variance = r.variance;
        pt.iterations = r.iterations;
        pt.shots = r.shots;
        if (k == 0 && omega && cfg.omega0) pt.jump = std::abs(r.energy - *cfg.omega0) > cfg.jump_window;
        pt.converged = r.converged;
        points.push_back(pt);
        prev_theta = r.theta;
        prev_energy = r.energy;
    }
    return points;
}

}  // namespace fsvqe

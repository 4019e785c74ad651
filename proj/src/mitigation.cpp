#include "fsvqe/mitigation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fsvqe/errors.hpp"

namespace fsvqe {

namespace {

void apply_2x2(std::vector<double>& dist, int n_qubits, int q, const std::array<double, 4>& m) {
    const std::size_t bit = std::size_t{1} << q;
    (void)n_qubits;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (i & bit) continue;
        const double p0 = dist[i], p1 = dist[i | bit];
        dist[i] = m[0] * p0 + m[1] * p1;
        dist[i | bit] = m[2] * p0 + m[3] * p1;
    }
}

}  // namespace

void ConfusionModel::validate() const {
    for (const auto& m : a) {
        if (std::abs(m[0] + m[2] - 1.0) > 1e-9 || std::abs(m[1] + m[3] - 1.0) > 1e-9)
            throw DataError("confusion matrix columns must sum to 1");
        if (std::abs(m[0] * m[3] - m[1] * m[2]) < 1e-12) throw DataError("confusion matrix is singular");
    }
}

void ConfusionModel::apply(std::vector<double>& dist) const {
    if (dist.size() != (std::size_t{1} << n_qubits())) throw DimensionError("distribution length does not match confusion model");
    for (int q = 0; q < n_qubits(); ++q) apply_2x2(dist, n_qubits(), q, a[static_cast<std::size_t>(q)]);
}

void ConfusionModel::apply_inverse(std::vector<double>& dist) const {
    if (dist.size() != (std::size_t{1} << n_qubits())) throw DimensionError("distribution length does not match confusion model");
    for (int q = 0; q < n_qubits(); ++q) {
        const auto& m = a[static_cast<std::size_t>(q)];
        const double det = m[0] * m[3] - m[1] * m[2];
        apply_2x2(dist, n_qubits(), q, {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det});
    }
}

ConfusionModel build_confusion(const NoiseModel& noise, int n_qubits) {
    const double p = noise.p_spam;
    if (!(p >= 0.0)) throw InvalidArgument("p_spam must be non-negative");
    if (p >= 0.5) throw InvalidArgument("p_spam >= 0.5 makes the confusion matrix non-invertible in practice");
    ConfusionModel cm;
    cm.a.assign(static_cast<std::size_t>(n_qubits), {1.0 - p, p, p, 1.0 - p});
    return cm;
}

ConfusionModel calibrate_confusion(const NoiseModel& noise, int n_qubits, std::uint64_t shots, Rng& rng) {
    std::vector<std::array<double, 4>> flips(static_cast<std::size_t>(n_qubits), {0, 0, 0, 0});
    for (int prep = 0; prep < 2; ++prep) {
        Circuit c(n_qubits);
        if (prep == 1)
            for (int q = 0; q < n_qubits; ++q) c.x(q);
        const QuantumState rho(run_noisy(c, {}, noise));
        const Counts counts = sample(rho, shots, &noise, rng);
        for (const auto& [outcome, k] : counts.histogram)
            for (int q = 0; q < n_qubits; ++q) {
                const int r = static_cast<int>((outcome >> q) & 1U);
                flips[static_cast<std::size_t>(q)][static_cast<std::size_t>(r * 2 + prep)] += static_cast<double>(k);
            }
    }
    ConfusionModel cm;
    for (auto m : flips) {
        const double n = static_cast<double>(shots);
        cm.a.push_back({m[0] / n, m[1] / n, m[2] / n, m[3] / n});
    }
    cm.validate();
    return cm;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, tau = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumulative += u[k];
        const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) tau = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
    return out;
}

std::vector<double> spam_mitigate(std::vector<double> dist, const ConfusionModel& cm) {
    cm.apply_inverse(dist);
    return project_to_simplex(dist);
}

std::vector<double> spam_mitigate(const Counts& counts, const ConfusionModel& cm) {
    if (counts.n_qubits != cm.n_qubits()) throw DimensionError("counts and confusion model sizes differ");
    std::vector<double> dist(std::size_t{1} << counts.n_qubits, 0.0);
    for (const auto& [outcome, k] : counts.histogram) dist[outcome] = static_cast<double>(k) / static_cast<double>(counts.shots);
    return spam_mitigate(std::move(dist), cm);
}

ZNEFit zne_fit(std::span<const ZNEPoint> points) {
    if (points.size() < 3) throw InvalidArgument("zero-noise extrapolation needs at least 3 points, got " + std::to_string(points.size()));
    const bool weighted = std::all_of(points.begin(), points.end(), [](const ZNEPoint& p) { return p.std_err > 0.0; });
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd y(m), w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        const double g = p.gamma;
        w(i) = weighted ? 1.0 / p.std_err : 1.0;
        design(i, 0) = w(i);
        design(i, 1) = w(i) * g;
        design(i, 2) = w(i) * g * g;
        y(i) = w(i) * p.value;
    }
    // c = L y with L the first row of the pseudo-inverse, which also propagates errors.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) throw InvalidArgument("zero-noise extrapolation needs 3 distinct folding factors");
    const Eigen::MatrixXd pinv = qr.pseudoInverse();
    const Eigen::Vector3d coef = pinv * y;
    ZNEFit fit;
    fit.intercept = coef(0);
    fit.b = coef(1);
    fit.a = coef(2);
    double var = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double li = pinv(0, i) * w(i);
        fit.weights.push_back(li);
        var += li * li * points[static_cast<std::size_t>(i)].std_err * points[static_cast<std::size_t>(i)].std_err;
    }
    fit.std_err = std::sqrt(var);
    return fit;
}

Estimate mitigated_estimate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                            const EstimatorConfig& cfg, const MitigationConfig& mit, Rng& rng) {
    if (cfg.backend != Backend::Noisy) throw InvalidArgument("mitigation needs the noisy backend");
    if (circuit.n_qubits() != obs.n_qubits) throw DimensionError("circuit and observable sizes differ");
    std::vector<int> gammas = mit.zne ? mit.gammas : std::vector<int>{1};
    if (mit.zne && gammas.size() < 3) throw InvalidArgument("zero-noise extrapolation needs at least 3 folding factors");

    Estimate est;
    est.value = obs.constant;
    if (obs.groups.empty()) return est;

    ConfusionModel cm;
    if (mit.spam) cm = mit.calibrate ? calibrate_confusion(cfg.noise, obs.n_qubits, mit.calibration_shots, rng)
                                     : build_confusion(cfg.noise, obs.n_qubits);

    const Circuit bound = circuit.bind(theta);
    std::vector<std::vector<ZNEPoint>> per_group(obs.groups.size());
    for (int gamma : gammas) {
        const DensityMatrix prep = run_noisy(fold_circuit(bound, gamma), {}, cfg.noise);
        for (std::size_t k = 0; k < obs.groups.size(); ++k) {
            DensityMatrix rho = prep;
            apply_circuit(rho, obs.rotations[k], {}, cfg.noise);
            auto probs = rho.probabilities();
            apply_readout_flips(probs, obs.n_qubits, cfg.noise.p_spam);
            if (cfg.shots > 0) {
                const Counts c = sample_distribution(probs, obs.n_qubits, cfg.shots, rng);
                std::fill(probs.begin(), probs.end(), 0.0);
                for (const auto& [outcome, n] : c.histogram) probs[outcome] = static_cast<double>(n) / static_cast<double>(cfg.shots);
                est.shots_used += cfg.shots;
            }
            if (mit.spam) probs = spam_mitigate(std::move(probs), cm);
            const GroupValue gv = group_value(probs, obs.groups[k], cfg.shots);
            per_group[k].push_back({gamma, gv.value, std::sqrt(gv.variance_of_mean)});
        }
    }
    double var = 0.0;
    for (auto& pts : per_group) {
        if (mit.zne) {
            const ZNEFit fit = zne_fit(pts);
            est.value += fit.intercept;
            est.group_values.push_back(fit.intercept);
            var += fit.std_err * fit.std_err;
        } else {
            est.value += pts.front().value;
            est.group_values.push_back(pts.front().value);
            var += pts.front().std_err * pts.front().std_err;
        }
    }
    est.std_err = std::sqrt(var);
    return est;
}

Estimate evaluate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                  const EstimatorConfig& cfg, const MitigationConfig& mit, Rng& rng) {
    if (cfg.backend == Backend::Noisy && mit.enabled()) return mitigated_estimate(obs, circuit, theta, cfg, mit, rng);
    return estimate(obs, circuit, theta, cfg, rng);
}

PooledEstimate mitigated_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                                std::span<const double> theta, const EstimatorConfig& cfg, const MitigationConfig& mit,
                                Rng& rng) {
    if (cfg.backend != Backend::Noisy) throw InvalidArgument("mitigation needs the noisy backend");
    const int n = circuit.n_qubits();
    for (const auto* o : observables)
        if (o->n_qubits != n) throw DimensionError("circuit and observable sizes differ");
    const std::vector<int> gammas = mit.zne ? mit.gammas : std::vector<int>{1};
    if (mit.zne && gammas.size() < 3) throw InvalidArgument("zero-noise extrapolation needs at least 3 folding factors");

    ConfusionModel cm;
    if (mit.spam) cm = mit.calibrate ? calibrate_confusion(cfg.noise, n, mit.calibration_shots, rng) : build_confusion(cfg.noise, n);

    std::vector<PauliString> bases;
    std::vector<const Circuit*> rotations;
    for (const auto* o : observables)
        for (std::size_t g = 0; g < o->groups.size(); ++g) {
            bases.push_back(o->groups[g].basis);
            rotations.push_back(&o->rotations[g]);
        }

    // dist[gamma][circuit]: corrected outcome distribution
    const Circuit bound = circuit.bind(theta);
    std::vector<std::vector<std::vector<double>>> dist(gammas.size());
    PooledEstimate out;
    for (std::size_t j = 0; j < gammas.size(); ++j) {
        const DensityMatrix prep = run_noisy(fold_circuit(bound, gammas[j]), {}, cfg.noise);
        for (std::size_t c = 0; c < bases.size(); ++c) {
            DensityMatrix rho = prep;
            apply_circuit(rho, *rotations[c], {}, cfg.noise);
            auto probs = rho.probabilities();
            apply_readout_flips(probs, n, cfg.noise.p_spam);
            if (cfg.shots > 0) {
                const Counts cnt = sample_distribution(probs, n, cfg.shots, rng);
                std::fill(probs.begin(), probs.end(), 0.0);
                for (const auto& [outcome, k] : cnt.histogram) probs[outcome] = static_cast<double>(k) / static_cast<double>(cfg.shots);
                out.shots_used += cfg.shots;
            }
            if (mit.spam) probs = spam_mitigate(std::move(probs), cm);
            dist[j].push_back(std::move(probs));
        }
    }

    const double shots = static_cast<double>(cfg.shots);
    for (const auto* o : observables) {
        Estimate est;
        est.value = o->constant;
        est.shots_used = out.shots_used;
        const std::size_t ng = o->groups.size();
        std::vector<std::vector<std::size_t>> covering(ng);
        for (std::size_t g = 0; g < ng; ++g)
            for (std::size_t c = 0; c < bases.size(); ++c)
                if (basis_covers(bases[c], o->groups[g])) covering[g].push_back(c);

        // pooled value and error of each group at each folding factor
        std::vector<std::vector<ZNEPoint>> points(ng);
        for (std::size_t g = 0; g < ng; ++g)
            for (std::size_t j = 0; j < gammas.size(); ++j) {
                double v = 0.0, var = 0.0;
                for (std::size_t c : covering[g]) {
                    const GroupValue gv = group_value(dist[j][c], o->groups[g], cfg.shots);
                    v += gv.value;
                    var += gv.variance_of_mean;
                }
                const double k = static_cast<double>(covering[g].size());
                points[g].push_back({gammas[j], v / k, std::sqrt(var) / k});
            }
        std::vector<std::vector<double>> weight(ng);  // weight[g][j] on the pooled value
        for (std::size_t g = 0; g < ng; ++g) {
            if (mit.zne) {
                const ZNEFit fit = zne_fit(points[g]);
                est.value += fit.intercept;
                est.group_values.push_back(fit.intercept);
                weight[g] = fit.weights;
            } else {
                est.value += points[g].front().value;
                est.group_values.push_back(points[g].front().value);
                weight[g] = {1.0};
            }
        }

        // every (gamma, circuit) sample is one independent draw of a combined outcome function
        double variance = 0.0;
        if (cfg.shots > 0) {
            for (std::size_t j = 0; j < gammas.size(); ++j)
                for (std::size_t c = 0; c < bases.size(); ++c) {
                    std::vector<std::pair<std::size_t, double>> members;
                    for (std::size_t g = 0; g < ng; ++g)
                        if (std::find(covering[g].begin(), covering[g].end(), c) != covering[g].end())
                            members.emplace_back(g, weight[g][j] / static_cast<double>(covering[g].size()));
                    if (members.empty()) continue;
                    double mean = 0.0, second = 0.0;
                    const auto& p = dist[j][c];
                    for (std::size_t outcome = 0; outcome < p.size(); ++outcome) {
                        if (p[outcome] == 0.0) continue;
                        double f = 0.0;
                        for (const auto& [g, w] : members) f += w * group_outcome_value(o->groups[g], outcome);
                        mean += p[outcome] * f;
                        second += p[outcome] * f * f;
                    }
                    variance += std::max(0.0, second - mean * mean) / shots;
                }
        }
        est.std_err = std::sqrt(variance);
        out.estimates.push_back(std::move(est));
    }
    return out;
}

PooledEstimate evaluate_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                               std::span<const double> theta, const EstimatorConfig& cfg, const MitigationConfig& mit,
                               Rng& rng) {
    if (cfg.backend == Backend::Noisy && mit.enabled()) return mitigated_pooled(observables, circuit, theta, cfg, mit, rng);
    return estimate_pooled(observables, circuit, theta, cfg, rng);
}

}  // namespace fsvqe

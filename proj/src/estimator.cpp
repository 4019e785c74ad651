#include "fsvqe/estimator.hpp"

#include <algorithm>
#include <bit>
#include <type_traits>
#include <cmath>

#include "fsvqe/errors.hpp"

namespace fsvqe {

GroupedObservable GroupedObservable::build(const PauliSum& s) {
    if (s.max_imag() > 1e-9) throw HermiticityError("observable has complex coefficients (max |Im| = " + std::to_string(s.max_imag()) + ")");
    GroupedObservable obs;
    obs.n_qubits = s.n_qubits();
    obs.constant = s.identity_coeff().real();
    obs.groups = partition(s, Commutativity::QubitWise);
    for (const auto& g : obs.groups) obs.rotations.push_back(measurement_circuit(g, obs.n_qubits));
    return obs;
}

PauliSum GroupedObservable::reconstruct() const {
    PauliSum s(n_qubits);
    if (constant != 0.0) s.add(PauliString{}, constant);
    for (const auto& g : groups)
        for (const auto& t : g.terms) s.add(t);
    return s;
}

std::size_t GroupedObservable::n_terms() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.terms.size();
    return n;
}

double group_outcome_value(const MeasurementGroup& g, std::uint64_t outcome) {
    double v = 0.0;
    for (const auto& t : g.terms) {
        const double c = t.coeff.real();
        v += (std::popcount(outcome & t.ops.support()) & 1) ? -c : c;
    }
    return v;
}

GroupValue group_value(const Counts& counts, const MeasurementGroup& g) {
    if (g.mode != Commutativity::QubitWise) throw InvalidArgument("counts can only be evaluated for qubit-wise groups");
    if (!g.terms.empty() && counts.n_qubits != g.terms.front().n_qubits) throw DimensionError("outcome length does not match the group's register");
    if (counts.shots == 0) throw InvalidArgument("empty counts");
    double sum = 0.0, sum2 = 0.0;
    for (const auto& [outcome, k] : counts.histogram) {
        const double v = group_outcome_value(g, outcome);
        sum += v * static_cast<double>(k);
        sum2 += v * v * static_cast<double>(k);
    }
    const double n = static_cast<double>(counts.shots);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, var / n};
}

double expectation_from_counts(const Counts& counts, const MeasurementGroup& g) { return group_value(counts, g).value; }

GroupValue group_value(std::span<const double> probs, const MeasurementGroup& g, std::uint64_t shots) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] == 0.0) continue;
        const double v = group_outcome_value(g, i);
        mean += probs[i] * v;
        m2 += probs[i] * v * v;
    }
    const double var = std::max(0.0, m2 - mean * mean);
    return {mean, shots > 0 ? var / static_cast<double>(shots) : 0.0};
}

Backend parse_backend(std::string_view text) {
    if (text == "exact") return Backend::Exact;
    if (text == "shots") return Backend::Shots;
    if (text == "noisy") return Backend::Noisy;
    throw InvalidArgument("unknown backend '" + std::string(text) + "' (expected exact, shots or noisy)");
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Exact: return "exact";
        case Backend::Shots: return "shots";
        case Backend::Noisy: return "noisy";
    }
    return "?";
}

double exact_expectation(const PauliSum& s, const Statevector& psi) {
    if (s.n_qubits() != psi.n_qubits()) throw DimensionError("operator and state sizes differ");
    const QuantumState st(psi);
    double v = 0.0;
    for (const auto& t : s) v += (t.coeff * string_expectation(t.ops, st)).real();
    return v;
}

namespace {

void add_group(Estimate& est, const GroupValue& gv, std::uint64_t shots) {
    est.value += gv.value;
    est.std_err += gv.variance_of_mean;  // summed variances, square-rooted at the end
    est.shots_used += shots;
    est.group_values.push_back(gv.value);
}

}  // namespace

Estimate estimate(const GroupedObservable& obs, const Circuit& circuit, std::span<const double> theta,
                  const EstimatorConfig& cfg, Rng& rng) {
    if (circuit.n_qubits() != obs.n_qubits) throw DimensionError("circuit and observable sizes differ");
    Estimate est;
    est.value = obs.constant;
    if (obs.groups.empty()) return est;

    if (cfg.backend == Backend::Exact) {
        const Statevector psi = run_pure(circuit, theta);
        const QuantumState st(psi);
        for (const auto& g : obs.groups) {
            double v = 0.0;
            for (const auto& t : g.terms) v += (t.coeff * string_expectation(t.ops, st)).real();
            add_group(est, {v, 0.0}, 0);
        }
        return est;
    }

    if (cfg.backend == Backend::Shots) {
        const Statevector prep = run_pure(circuit, theta);
        for (std::size_t k = 0; k < obs.groups.size(); ++k) {
            Statevector psi = prep;
            apply_circuit(psi, obs.rotations[k]);
            const auto probs = psi.probabilities();
            if (cfg.shots == 0) {
                add_group(est, group_value(probs, obs.groups[k], 0), 0);
            } else {
                const Counts c = sample_distribution(probs, obs.n_qubits, cfg.shots, rng);
                add_group(est, group_value(c, obs.groups[k]), cfg.shots);
            }
        }
    } else {
        const DensityMatrix prep = run_noisy(circuit, theta, cfg.noise);
        for (std::size_t k = 0; k < obs.groups.size(); ++k) {
            DensityMatrix rho = prep;
            apply_circuit(rho, obs.rotations[k], {}, cfg.noise);
            auto probs = rho.probabilities();
            apply_readout_flips(probs, obs.n_qubits, cfg.noise.p_spam);
            if (cfg.shots == 0) {
                add_group(est, group_value(probs, obs.groups[k], 0), 0);
            } else {
                const Counts c = sample_distribution(probs, obs.n_qubits, cfg.shots, rng);
                add_group(est, group_value(c, obs.groups[k]), cfg.shots);
            }
        }
    }
    est.std_err = std::sqrt(est.std_err);
    return est;
}

bool basis_covers(const PauliString& basis, const MeasurementGroup& g) {
    for (const auto& t : g.terms) {
        const std::uint64_t s = t.ops.support();
        if ((basis.x & s) != t.ops.x || (basis.z & s) != t.ops.z) return false;
    }
    return true;
}

PooledEstimate estimate_pooled(std::span<const GroupedObservable* const> observables, const Circuit& circuit,
                               std::span<const double> theta, const EstimatorConfig& cfg, Rng& rng) {
    PooledEstimate out;
    for (const auto* o : observables)
        if (o->n_qubits != circuit.n_qubits()) throw DimensionError("circuit and observable sizes differ");
    if (cfg.backend == Backend::Exact || cfg.shots == 0) {
        for (const auto* o : observables) out.estimates.push_back(estimate(*o, circuit, theta, cfg, rng));
        for (const auto& e : out.estimates) out.shots_used += e.shots_used;
        return out;
    }

    // one circuit per group, as separate estimates would run; equal bases are
    // repeated rather than merged so the shot budget per circuit is unchanged
    std::vector<PauliString> bases;
    for (const auto* o : observables)
        for (const auto& g : o->groups) bases.push_back(g.basis);

    const int n = circuit.n_qubits();
    std::vector<Counts> counts;
    counts.reserve(bases.size());
    auto measure = [&](auto state) {
        for (const auto& b : bases) {
            MeasurementGroup probe;
            probe.basis = b;
            auto rotated = state;
            std::vector<double> probs;
            if constexpr (std::is_same_v<decltype(state), DensityMatrix>) {
                apply_circuit(rotated, measurement_circuit(probe, n), {}, cfg.noise);
                probs = rotated.probabilities();
                apply_readout_flips(probs, n, cfg.noise.p_spam);
            } else {
                apply_circuit(rotated, measurement_circuit(probe, n));
                probs = rotated.probabilities();
            }
            counts.push_back(sample_distribution(probs, n, cfg.shots, rng));
        }
    };
    if (cfg.backend == Backend::Shots) {
        measure(run_pure(circuit, theta));
    } else {
        measure(run_noisy(circuit, theta, cfg.noise));
    }
    out.shots_used = cfg.shots * bases.size();

    for (const auto* o : observables) {
        Estimate est;
        est.value = o->constant;
        std::vector<std::vector<std::size_t>> covering(o->groups.size());
        std::vector<double> pooled(o->groups.size(), 0.0);
        for (std::size_t g = 0; g < o->groups.size(); ++g)
            for (std::size_t c = 0; c < bases.size(); ++c)
                if (basis_covers(bases[c], o->groups[g])) {
                    covering[g].push_back(c);
                    pooled[g] += static_cast<double>(counts[c].shots);
                }
        std::vector<double> group_sum(o->groups.size(), 0.0);
        double variance = 0.0;
        for (std::size_t c = 0; c < bases.size(); ++c) {
            std::vector<std::size_t> members;
            for (std::size_t g = 0; g < o->groups.size(); ++g)
                if (std::find(covering[g].begin(), covering[g].end(), c) != covering[g].end()) members.push_back(g);
            if (members.empty()) continue;
            double sum = 0.0, sum2 = 0.0;
            for (const auto& [outcome, k] : counts[c].histogram) {
                double v = 0.0;
                for (std::size_t g : members) {
                    const double h = group_outcome_value(o->groups[g], outcome);
                    group_sum[g] += h * static_cast<double>(k);
                    v += h / pooled[g];
                }
                sum += v * static_cast<double>(k);
                sum2 += v * v * static_cast<double>(k);
            }
            const double m = static_cast<double>(counts[c].shots);
            const double mean = sum / m;
            if (m > 1) variance += m * std::max(0.0, (sum2 - m * mean * mean) / (m - 1));
            est.shots_used += counts[c].shots;
        }
        for (std::size_t g = 0; g < o->groups.size(); ++g) {
            const double gv = group_sum[g] / pooled[g];
            est.value += gv;
            est.group_values.push_back(gv);
        }
        est.std_err = std::sqrt(variance);
        out.estimates.push_back(std::move(est));
    }
    return out;
}

std::uint64_t shots_schedule(int iteration, std::uint64_t s_min, std::uint64_t s_max, double k) {
    if (!(k > 0.0)) throw InvalidArgument("shots_schedule: k must be positive");
    if (s_min > s_max) throw InvalidArgument("shots_schedule: s_min exceeds s_max");
    const double lo = static_cast<double>(s_min), hi = static_cast<double>(s_max);
    return static_cast<std::uint64_t>(std::llround(hi - (hi - lo) * std::exp(-k * iteration)));
}

}  // namespace fsvqe

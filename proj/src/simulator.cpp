#include "fsvqe/simulator.hpp"

#include <cmath>
#include <numbers>

#include "fsvqe/errors.hpp"

namespace fsvqe {

NoiseModel NoiseModel::device_reference() {
    NoiseModel m;
    m.t1 = 290.0;
    m.t2 = 145.0;
    m.t_gate1 = 35.0;
    m.t_gate2 = 300.0;
    m.p1 = 1e-4;
    m.p2 = 1e-3;
    m.p_spam = 1e-2;
    return m;
}

void NoiseModel::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string("noise model: ") + name + " must lie in [0, 1]");
    };
    prob(p1, "p1");
    prob(p2, "p2");
    prob(p_spam, "p_spam");
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw InvalidArgument("noise model: T1 and T2 must be positive");
    if (t2 > 2.0 * t1) throw InvalidArgument("noise model: T2 must not exceed 2*T1");
    if (t_gate1 < 0.0 || t_gate2 < 0.0) throw InvalidArgument("noise model: gate lengths must be non-negative");
}

bool NoiseModel::has_gate_noise() const {
    const bool relaxes = (t_gate1 > 0.0 || t_gate2 > 0.0) && (std::isfinite(t1) || std::isfinite(t2));
    return p1 > 0.0 || p2 > 0.0 || relaxes;
}

NoiseModel scale_noise(const NoiseModel& base, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("scale_noise: lambda must lie in [0, 1]");
    NoiseModel m;
    m.t1 = kT1Ideal * std::pow(base.t1 / kT1Ideal, lambda);
    m.t2 = kT2Ideal * std::pow(base.t2 / kT2Ideal, lambda);
    m.t_gate1 = lambda * base.t_gate1;
    m.t_gate2 = lambda * base.t_gate2;
    m.p1 = lambda * base.p1;
    m.p2 = lambda * base.p2;
    m.p_spam = lambda * base.p_spam;
    return m;
}

std::array<cplx, 4> gate_matrix(GateKind kind, double angle) {
    const double s = 1.0 / std::numbers::sqrt2;
    const cplx i{0.0, 1.0};
    switch (kind) {
        case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::H: return {s, s, s, -s};
        case GateKind::RX: {
            const double c = std::cos(angle / 2), sn = std::sin(angle / 2);
            return {c, -i * sn, -i * sn, c};
        }
        case GateKind::RZ: return {std::exp(-i * (angle / 2)), 0.0, 0.0, std::exp(i * (angle / 2))};
        case GateKind::CNOT: break;
    }
    throw InvalidArgument("gate_matrix: not a single-qubit gate");
}

void apply_circuit(Statevector& psi, const Circuit& c, std::span<const double> theta) {
    if (c.n_qubits() != psi.n_qubits()) throw DimensionError("circuit and state sizes differ");
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::X: psi.apply_x(g.q0); break;
            case GateKind::H: psi.apply_h(g.q0); break;
            case GateKind::RX: psi.apply_rx(g.q0, c.angle_of(g, theta)); break;
            case GateKind::RZ: psi.apply_rz(g.q0, c.angle_of(g, theta)); break;
            case GateKind::CNOT: psi.apply_cnot(g.q0, g.q1); break;
        }
    }
}

void relax(DensityMatrix& rho, int q, double t_ns, const NoiseModel& noise) {
    if (t_ns <= 0.0) return;
    const double t = t_ns * 1e-3;  // microseconds
    const double gamma = std::isfinite(noise.t1) ? 1.0 - std::exp(-t / noise.t1) : 0.0;
    if (gamma > 0.0) {
        const std::array<std::array<cplx, 4>, 2> kraus{{{1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)}, {0.0, std::sqrt(gamma), 0.0, 0.0}}};
        rho.apply_kraus_1q(q, kraus);
    }
    // Amplitude damping already decays coherences by exp(-t/2T1).
    double rate = 0.0;
    if (std::isfinite(noise.t2)) rate += 1.0 / noise.t2;
    if (std::isfinite(noise.t1)) rate -= 0.5 / noise.t1;
    if (rate > 0.0) rho.dephase(q, std::exp(-t * rate));
}

void apply_circuit(DensityMatrix& rho, const Circuit& c, std::span<const double> theta, const NoiseModel& noise) {
    if (c.n_qubits() != rho.n_qubits()) throw DimensionError("circuit and state sizes differ");
    noise.validate();
    for (const auto& g : c.gates()) {
        if (g.is_two_qubit()) {
            rho.apply_cnot(g.q0, g.q1);
            const int qs[2] = {g.q0, g.q1};
            if (noise.p2 > 0.0) rho.depolarize(qs, noise.p2);
            relax(rho, g.q0, noise.t_gate2, noise);
            relax(rho, g.q1, noise.t_gate2, noise);
        } else {
            rho.apply_1q(g.q0, gate_matrix(g.kind, g.is_rotation() ? c.angle_of(g, theta) : 0.0));
            const int qs[1] = {g.q0};
            if (noise.p1 > 0.0) rho.depolarize(qs, noise.p1);
            relax(rho, g.q0, noise.t_gate1, noise);
        }
    }
}

Statevector run_pure(const Circuit& c, std::span<const double> theta, std::uint64_t init) {
    Statevector psi(c.n_qubits(), init);
    apply_circuit(psi, c, theta);
    return psi;
}

DensityMatrix run_noisy(const Circuit& c, std::span<const double> theta, const NoiseModel& noise, std::uint64_t init) {
    DensityMatrix rho(c.n_qubits(), init);
    apply_circuit(rho, c, theta, noise);
    return rho;
}

std::uint64_t Counts::operator[](std::string_view bits) const {
    if (static_cast<int>(bits.size()) != n_qubits) throw DimensionError("outcome length does not match register");
    const auto it = histogram.find(parse_bitstring(bits));
    return it == histogram.end() ? 0 : it->second;
}

std::map<std::string, std::uint64_t> Counts::labelled() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [k, v] : histogram) out[format_bitstring(k, n_qubits)] = v;
    return out;
}

void apply_readout_flips(std::vector<double>& probs, int n_qubits, double p) {
    if (p <= 0.0) return;
    for (int q = 0; q < n_qubits; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (i & bit) continue;
            const double a = probs[i], b = probs[i | bit];
            probs[i] = (1.0 - p) * a + p * b;
            probs[i | bit] = p * a + (1.0 - p) * b;
        }
    }
}

Counts sample_distribution(std::span<const double> probs, int n_qubits, std::uint64_t shots, Rng& rng) {
    if (shots == 0) throw InvalidArgument("sample: shots must be at least 1");
    if (probs.size() != (std::size_t{1} << n_qubits)) throw DimensionError("probability vector has the wrong length");
    Counts counts{n_qubits, shots, {}};
    double remaining_p = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] > 0.0) {
            remaining_p += probs[i];
            last = i;
        }
    if (!(remaining_p > 0.0)) throw InvalidArgument("sample: probabilities sum to zero");
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i <= last && remaining > 0; ++i) {
        const double p = std::max(probs[i], 0.0);
        if (p <= 0.0) continue;
        std::uint64_t k;
        if (i == last || p >= remaining_p) {
            k = remaining;
        } else {
            std::binomial_distribution<std::uint64_t> draw(remaining, std::min(1.0, p / remaining_p));
            k = draw(rng);
        }
        if (k > 0) counts.histogram[i] = k;
        remaining -= k;
        remaining_p -= p;
    }
    return counts;
}

Counts sample(const QuantumState& state, std::uint64_t shots, const NoiseModel* noise, Rng& rng) {
    auto probs = state.probabilities();
    if (noise) apply_readout_flips(probs, state.n_qubits(), noise->p_spam);
    return sample_distribution(probs, state.n_qubits(), shots, rng);
}

}  // namespace fsvqe

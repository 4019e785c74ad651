#include "fsvqe/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fsvqe/errors.hpp"

#ifndef FSVQE_SOURCE_FIXTURES
#define FSVQE_SOURCE_FIXTURES "fixtures"
#endif

namespace fsvqe {

namespace {

Eigen::MatrixXd matrix_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) throw DataError("sidecar field '" + what + "' is not a matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols) throw DataError("sidecar field '" + what + "' has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

}  // namespace

Fixture load_fixture(const std::filesystem::path& fcidump) {
    Fixture f;
    f.fcidump = fcidump;
    f.id = fcidump.stem().string();
    f.integrals = read_fcidump(fcidump);
    auto side = fcidump;
    side.replace_extension(".json");
    if (std::filesystem::exists(side)) {
        std::ifstream in(side);
        try {
            f.meta = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError(side.string() + ": " + e.what());
        }
        if (f.meta.contains("bond_length")) f.bond_length = f.meta["bond_length"].get<double>();
        if (f.meta.contains("mo_coeff") && f.meta.contains("overlap"))
            f.frame = MOFrame{matrix_from(f.meta["mo_coeff"], "mo_coeff"), matrix_from(f.meta["overlap"], "overlap")};
        if (f.meta.contains("fci_spectrum")) f.fci_spectrum = f.meta["fci_spectrum"].get<std::vector<double>>();
    }
    return f;
}

std::vector<Fixture> load_fixture_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InvalidArgument("fixture directory not found: " + dir.string());
    std::vector<Fixture> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".fcidump") out.push_back(load_fixture(e.path()));
    std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) {
        const double la = a.bond_length.value_or(0.0), lb = b.bond_length.value_or(0.0);
        return la != lb ? la < lb : a.id < b.id;
    });
    return out;
}

std::filesystem::path fixture_root() {
    if (const char* env = std::getenv("FSVQE_FIXTURES"); env && *env) return env;
    return FSVQE_SOURCE_FIXTURES;
}

std::filesystem::path resolve_fixture(const std::filesystem::path& p) {
    if (p.is_absolute() || std::filesystem::exists(p)) return p;
    const auto alt = fixture_root() / p;
    if (std::filesystem::exists(alt)) return alt;
    return p;
}

PESGeometry to_geometry(const Fixture& f) { return {f.id, f.integrals, f.frame}; }

json to_json(const Circuit& c) {
    json j;
    j["n_qubits"] = c.n_qubits();
    j["scale"] = c.scale();
    j["slots"] = c.slot_names();
    auto& gates = j["gates"] = json::array();
    for (const auto& g : c.gates()) {
        json r;
        r["kind"] = gate_name(g.kind);
        r["qubits"] = g.is_two_qubit() ? std::vector<int>{g.q0, g.q1} : std::vector<int>{g.q0};
        if (g.is_rotation()) {
            if (g.slot >= 0) {
                r["slot"] = c.slot_names()[static_cast<std::size_t>(g.slot)];
                r["weight"] = g.weight;
                if (g.angle != 0.0) r["angle"] = g.angle;
            } else {
                r["angle"] = g.angle;
            }
        }
        gates.push_back(std::move(r));
    }
    return j;
}

json to_json(const NoiseModel& m) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
    return {{"T1_us", num(m.t1)}, {"T2_us", num(m.t2)}, {"t_gate1_ns", m.t_gate1}, {"t_gate2_ns", m.t_gate2},
            {"p1", m.p1},         {"p2", m.p2},         {"p_spam", m.p_spam}};
}

json to_json(const Counts& c) { return {{"n_qubits", c.n_qubits}, {"shots", c.shots}, {"counts", c.labelled()}}; }

json to_json(const PESPoint& p) {
    return {{"geometry", p.geometry}, {"omega", p.omega},       {"theta", p.theta},       {"energy", p.energy},
            {"std_err", p.std_err},   {"cost", p.cost},         {"cost_se", p.cost_se},   {"variance", p.variance},
            {"iterations", p.iterations}, {"shots", p.shots},   {"converged", p.converged}, {"jump", p.jump},
            {"retried", p.retried},   {"orbital_signs", p.orbital_signs}};
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace fsvqe

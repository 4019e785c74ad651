#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fsvqe/errors.hpp"
#include "fsvqe/estimator.hpp"
#include "fsvqe/folded.hpp"
#include "fsvqe/grouping.hpp"
#include "fsvqe/json_io.hpp"
#include "fsvqe/vqe.hpp"

namespace py = pybind11;
using namespace fsvqe;

namespace {

std::vector<std::pair<std::string, cplx>> terms_of(const PauliSum& s) {
    std::vector<std::pair<std::string, cplx>> out;
    for (const auto& t : s) out.emplace_back(t.label(), t.coeff);
    return out;
}

PauliSum sum_from(int n_qubits, const std::vector<std::pair<std::string, cplx>>& terms) {
    PauliSum s(n_qubits);
    for (const auto& [label, c] : terms) s.add(parse_label(label), c);
    return s;
}

Commutativity mode_of(const std::string& m) { return parse_commutativity(m); }

py::dict point_dict(const PESPoint& p) {
    py::dict d;
    d["geometry"] = p.geometry;
    d["omega"] = p.omega;
    d["theta"] = p.theta;
    d["energy"] = p.energy;
    d["std_err"] = p.std_err;
    d["cost"] = p.cost;
    d["variance"] = p.variance;
    d["iterations"] = p.iterations;
    d["shots"] = p.shots;
    d["converged"] = p.converged;
    d["jump"] = p.jump;
    return d;
}

PESConfig config(const std::string& backend, std::uint64_t shots, std::optional<double> omega, bool ground, int max_iter) {
    PESConfig cfg;
    cfg.omega0 = omega;
    cfg.ground_state = ground;
    cfg.vqe.spsa.max_iter = max_iter;
    cfg.vqe.estimator.backend = parse_backend(backend);
    if (cfg.vqe.estimator.backend != Backend::Exact) {
        if (shots > 0) {
            cfg.vqe.schedule = false;
            cfg.vqe.estimator.shots = shots;
        } else {
            cfg.vqe.estimator.shots = cfg.vqe.s_min;
        }
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_fsvqe, m) {
    m.doc() = "Folded-spectrum VQE core";
    m.attr("__version__") = FSVQE_VERSION;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    m.def("hamiltonian", [](const std::filesystem::path& fcidump) {
        const PauliSum h = qubit_hamiltonian(read_fcidump(resolve_fixture(fcidump)));
        return py::make_tuple(h.n_qubits(), terms_of(h));
    }, py::arg("fcidump"), "(n_qubits, [(label, coeff)]) of the Jordan-Wigner Hamiltonian.");

    m.def("fold", [](int n_qubits, const std::vector<std::pair<std::string, cplx>>& terms, double omega) {
        return terms_of(fold(sum_from(n_qubits, terms), omega).folded());
    }, py::arg("n_qubits"), py::arg("terms"), py::arg("omega"), "Terms of (H - omega)^2.");

    m.def("group_count", [](int n_qubits, const std::vector<std::pair<std::string, cplx>>& terms, const std::string& mode) {
        return group_count(sum_from(n_qubits, terms), mode_of(mode));
    }, py::arg("n_qubits"), py::arg("terms"), py::arg("mode") = "qwc");

    m.def("groups", [](int n_qubits, const std::vector<std::pair<std::string, cplx>>& terms, const std::string& mode) {
        std::vector<std::vector<std::string>> out;
        for (const auto& g : partition(sum_from(n_qubits, terms), mode_of(mode))) {
            out.emplace_back();
            for (const auto& t : g.terms) out.back().push_back(t.label());
        }
        return out;
    }, py::arg("n_qubits"), py::arg("terms"), py::arg("mode") = "qwc");

    m.def("spectrum", [](const std::filesystem::path& fcidump, std::optional<int> electrons) {
        const Spectrum s = exact_spectrum(qubit_hamiltonian(read_fcidump(resolve_fixture(fcidump))), false, electrons);
        return std::vector<double>(s.values.data(), s.values.data() + s.values.size());
    }, py::arg("fcidump"), py::arg("electrons") = py::none());

    m.def("fsvqe", [](const std::filesystem::path& fcidump, const std::string& reference, std::optional<double> omega,
                      const std::string& backend, std::uint64_t shots, std::uint64_t seed, int max_iter) {
        const Fixture f = load_fixture(resolve_fixture(fcidump));
        const PESConfig cfg = config(backend, shots, omega, false, max_iter);
        py::gil_scoped_release release;
        auto pts = pes_scan({to_geometry(f)}, ReferenceSpec::parse(reference), cfg, seed);
        py::gil_scoped_acquire acquire;
        return point_dict(pts.front());
    }, py::arg("fcidump"), py::arg("reference"), py::arg("omega") = py::none(), py::arg("backend") = "exact",
       py::arg("shots") = 0, py::arg("seed") = 1, py::arg("max_iter") = 300,
       "Folded-spectrum VQE at one geometry; returns the result point as a dict.");

    m.def("pes", [](const std::filesystem::path& directory, const std::string& reference, std::optional<double> omega,
                    const std::string& backend, std::uint64_t shots, std::uint64_t seed, bool ground) {
        std::vector<PESGeometry> geos;
        for (const auto& f : load_fixture_dir(resolve_fixture(directory))) geos.push_back(to_geometry(f));
        const PESConfig cfg = config(backend, shots, omega, ground, 300);
        std::vector<PESPoint> pts;
        {
            py::gil_scoped_release release;
            pts = pes_scan(geos, ReferenceSpec::parse(reference), cfg, seed);
        }
        py::list out;
        for (const auto& p : pts) out.append(point_dict(p));
        return out;
    }, py::arg("directory"), py::arg("reference"), py::arg("omega") = py::none(), py::arg("backend") = "exact",
       py::arg("shots") = 0, py::arg("seed") = 1, py::arg("ground") = false);
}

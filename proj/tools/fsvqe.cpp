// fsvqe command-line tool.
//
// Exit codes: 0 success, 1 usage or input error, 2 some point did not converge.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsvqe/errors.hpp"
#include "fsvqe/estimator.hpp"
#include "fsvqe/folded.hpp"
#include "fsvqe/grouping.hpp"
#include "fsvqe/json_io.hpp"
#include "fsvqe/vqe.hpp"

namespace fs = std::filesystem;
using namespace fsvqe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

/// Everything a run depends on. Written next to the outputs as manifest.json
/// and accepted back through --manifest.
struct Settings {
    std::string fcidump;
    std::string fixtures;
    std::vector<std::string> references;
    std::optional<double> omega;
    bool ground_state = false;
    std::string backend = "exact";
    std::uint64_t shots = 0;  ///< 0: inverse-exponential schedule on sampling backends
    std::uint64_t final_shots = 30000;
    double noise_lambda = 1.0;
    std::vector<std::string> mitigate;
    std::vector<int> zne_gammas{1, 3, 5, 7};
    int max_iter = 300;
    std::uint64_t seed = 1;
};

json to_json(const Settings& s) {
    json j = {{"fcidump", s.fcidump},         {"fixtures", s.fixtures},       {"references", s.references},
              {"ground_state", s.ground_state}, {"backend", s.backend},       {"shots", s.shots},
              {"final_shots", s.final_shots}, {"noise_lambda", s.noise_lambda}, {"mitigate", s.mitigate},
              {"zne_gammas", s.zne_gammas},   {"max_iter", s.max_iter},       {"seed", s.seed}};
    j["omega"] = s.omega ? json(*s.omega) : json(nullptr);
    return j;
}

void from_json(const json& j, Settings& s) {
    static const std::set<std::string> known = {"fcidump",     "fixtures", "references", "omega",      "ground_state",
                                                "backend",     "shots",    "final_shots", "noise_lambda", "mitigate",
                                                "zne_gammas",  "max_iter", "seed",       "command",    "version"};
    if (!j.is_object()) throw ParseError("manifest: top level must be an object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ParseError("manifest: unknown key '" + key + "'");
    try {
        s.fcidump = j.value("fcidump", s.fcidump);
        s.fixtures = j.value("fixtures", s.fixtures);
        s.references = j.value("references", s.references);
        if (j.contains("omega") && !j["omega"].is_null()) s.omega = j["omega"].get<double>();
        s.ground_state = j.value("ground_state", s.ground_state);
        s.backend = j.value("backend", s.backend);
        s.shots = j.value("shots", s.shots);
        s.final_shots = j.value("final_shots", s.final_shots);
        s.noise_lambda = j.value("noise_lambda", s.noise_lambda);
        s.mitigate = j.value("mitigate", s.mitigate);
        s.zne_gammas = j.value("zne_gammas", s.zne_gammas);
        s.max_iter = j.value("max_iter", s.max_iter);
        s.seed = j.value("seed", s.seed);
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
}

PESConfig make_config(const Settings& s) {
    PESConfig cfg;
    cfg.omega0 = s.omega;
    cfg.ground_state = s.ground_state;
    VQEConfig& v = cfg.vqe;
    v.spsa.max_iter = s.max_iter;
    v.estimator.backend = parse_backend(s.backend);
    if (v.estimator.backend == Backend::Noisy) v.estimator.noise = scale_noise(NoiseModel::device_reference(), s.noise_lambda);
    if (v.estimator.backend != Backend::Exact) {
        if (s.shots > 0) {
            v.schedule = false;
            v.estimator.shots = s.shots;
        } else {
            v.estimator.shots = v.s_min;
        }
        v.final_shots = s.final_shots;
    }
    for (const auto& m : s.mitigate) {
        if (m == "spam") {
            v.mitigation.spam = true;
        } else if (m == "zne") {
            v.mitigation.zne = true;
        } else if (m != "none") {
            throw InvalidArgument("unknown mitigation '" + m + "' (expected spam, zne or none)");
        }
    }
    v.mitigation.gammas = s.zne_gammas;
    if ((v.mitigation.spam || v.mitigation.zne) && v.estimator.backend != Backend::Noisy)
        throw InvalidArgument("--mitigate needs --backend noisy");
    return cfg;
}

ReferenceSpec reference_for(const std::string& text, const IntegralData& d) {
    if (text.empty() || text == "hf") return ReferenceSpec{{hartree_fock_state(d.n_electrons, 2 * d.n_orbitals)}, +1};
    return ReferenceSpec::parse(text);
}

std::string reference_label(const ReferenceSpec& r, int n_qubits) { return r.to_string(n_qubits); }

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

std::string csv(const std::vector<PESPoint>& pts) {
    std::ostringstream o;
    o << "geometry,omega,energy,std_err,cost,iterations,converged\n";
    for (const auto& p : pts)
        o << p.geometry << ',' << format_real(p.omega) << ',' << format_real(p.energy) << ',' << format_real(p.std_err) << ','
          << format_real(p.cost) << ',' << p.iterations << ',' << (p.converged ? 1 : 0) << '\n';
    return o.str();
}

std::string file_tag(std::string label) {
    std::replace(label.begin(), label.end(), '+', 'p');
    std::replace(label.begin(), label.end(), '-', 'm');
    return label;
}

/// Writes outputs for every reference and reports flagged points on stderr.
int emit_runs(const std::string& command, const Settings& s, const std::vector<std::string>& labels,
              const std::vector<std::vector<PESPoint>>& runs, const std::string& out_dir) {
    int status = kExitOk;
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (const auto& p : runs[i])
            if (!p.converged) {
                std::cerr << "not converged: reference " << labels[i] << " geometry " << p.geometry << '\n';
                status = kExitNotConverged;
            }
    if (out_dir.empty()) {
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs.size() > 1) std::cout << "# reference " << labels[i] << '\n';
            std::cout << csv(runs[i]);
        }
        return status;
    }
    fs::create_directories(out_dir);
    json manifest = to_json(s);
    manifest["command"] = command;
    manifest["version"] = FSVQE_VERSION;
    manifest["references"] = labels;
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string tag = runs.size() > 1 ? "_" + file_tag(labels[i]) : "";
        write_file(fs::path(out_dir) / ("results" + tag + ".csv"), csv(runs[i]));
        json theta = json::array();
        for (const auto& p : runs[i]) theta.push_back(to_json(p));
        write_file(fs::path(out_dir) / ("theta" + tag + ".json"), json{{"reference", labels[i]}, {"points", theta}}.dump(2) + "\n");
    }
    return status;
}

std::string group_summary(const PauliSum& s, bool with_gc) {
    std::ostringstream o;
    o << s.size() << " terms, " << group_count(s, Commutativity::QubitWise) << " QWC groups";
    if (with_gc) o << ", " << group_count(s, Commutativity::General) << " GC groups";
    return o.str();
}

std::vector<fs::path> collect_fcidumps(const std::vector<std::string>& inputs, bool slow) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p = resolve_fixture(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.path().extension() == ".fcidump") found.push_back(e.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    if (!slow) {
        std::erase_if(files, [](const fs::path& f) { return read_fcidump(f).n_orbitals > 6; });
    }
    return files;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Folded-spectrum VQE for molecular excited states"};
    app.set_version_flag("--version", std::string(FSVQE_VERSION));
    app.require_subcommand(1);

    Settings s;
    std::string out_dir, manifest_path, reference;
    std::vector<std::string> mitigate_csv, gammas_csv;
    std::optional<double> fold_omega;
    bool dump_operator = false, dump_circuit = false, slow = false;
    int jobs = 1;
    std::string mode = "qwc";
    std::optional<int> electrons;
    std::vector<std::string> bench_inputs;

    auto add_fcidump = [&](CLI::App* c) { c->add_option("--fcidump", s.fcidump, "FCIDUMP file (relative paths also searched under $FSVQE_FIXTURES)"); };
    auto add_run_flags = [&](CLI::App* c) {
        c->add_option("--manifest", manifest_path, "JSON manifest; explicit flags override its values");
        c->add_option("--reference", s.references, "Reference determinant(s), e.g. 1010 or 1001+0110; repeatable");
        c->add_option("--backend", s.backend, "exact, shots or noisy")->check(CLI::IsMember({"exact", "shots", "noisy"}));
        c->add_option("--shots", s.shots, "Shots per circuit during optimisation (default: 1000 to 10000 schedule)");
        c->add_option("--final-shots", s.final_shots, "Shots per circuit for the final energy");
        c->add_option("--seed", s.seed, "Random seed");
        c->add_option("--noise-lambda", s.noise_lambda, "Noise scale for the noisy backend")->check(CLI::Range(0.0, 1.0));
        c->add_option("--mitigate", mitigate_csv, "spam,zne")->delimiter(',');
        c->add_option("--zne-gammas", gammas_csv, "Odd folding factors, e.g. 1,3,5,7")->delimiter(',');
        c->add_option("--max-iter", s.max_iter, "SPSA iterations");
        c->add_option("--out", out_dir, "Output directory for manifest.json, results CSV and theta JSON");
    };

    auto* ham = app.add_subcommand("hamiltonian", "Qubit Hamiltonian statistics");
    add_fcidump(ham);
    ham->add_option("--fold", fold_omega, "Also report (H - omega)^2");
    ham->add_flag("--dump-operator", dump_operator, "Print the operator, one '<re> <im> <label>' per line");

    auto* grp = app.add_subcommand("group", "Measurement groups as JSON");
    add_fcidump(grp);
    grp->add_option("--fold", fold_omega, "Group (H - omega)^2 instead of H");
    grp->add_option("--mode", mode, "qwc or gc")->check(CLI::IsMember({"qwc", "gc"}));

    auto* spec = app.add_subcommand("spectrum", "Exact eigenvalues (FCI oracle)");
    add_fcidump(spec);
    spec->add_option("--electrons", electrons, "Restrict to one particle-number sector");

    auto* vqe = app.add_subcommand("vqe", "Ground-state VQE at one geometry");
    auto* fsv = app.add_subcommand("fsvqe", "Folded-spectrum VQE at one geometry");
    for (auto* c : {vqe, fsv}) {
        add_fcidump(c);
        add_run_flags(c);
        c->add_flag("--dump-circuit", dump_circuit, "Write the bound ansatz circuit as JSON");
    }
    fsv->add_option("--omega", s.omega, "Target energy (default: reference-state energy)");

    auto* pes = app.add_subcommand("pes", "Potential-energy curve over a fixture directory");
    pes->add_option("--fixtures", s.fixtures, "Directory of FCIDUMP files with JSON sidecars");
    add_run_flags(pes);
    pes->add_option("--omega", s.omega, "Target energy at the first geometry");
    pes->add_flag("--ground", s.ground_state, "Plain VQE instead of the folded spectrum");
    pes->add_option("--jobs", jobs, "References run in parallel")->check(CLI::PositiveNumber);

    auto* bench = app.add_subcommand("bench-groups", "Term and QWC group counts for H and (H - omega)^2");
    bench->add_option("inputs", bench_inputs, "FCIDUMP files or directories (default: the bundled grouping set)");
    bench->add_flag("--slow", slow, "Include systems above 12 qubits");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        auto require_fcidump = [&] {
            if (s.fcidump.empty()) throw InvalidArgument("--fcidump is required");
            return load_fixture(resolve_fixture(s.fcidump));
        };

        if (*ham) {
            const Fixture f = require_fcidump();
            const PauliSum h = qubit_hamiltonian(f.integrals);
            std::cout << h.n_qubits() << " qubits, " << group_summary(h, true) << '\n';
            if (fold_omega) {
                const PauliSum fsop = fold(h, *fold_omega).folded();
                std::cout << "folded at omega " << format_real(*fold_omega) << ": " << group_summary(fsop, h.n_qubits() <= 8) << '\n';
                if (dump_operator) fsop.write(std::cout);
            } else if (dump_operator) {
                h.write(std::cout);
            }
            return kExitOk;
        }

        if (*grp) {
            const Fixture f = require_fcidump();
            PauliSum op = qubit_hamiltonian(f.integrals);
            if (fold_omega) op = fold(op, *fold_omega).folded();
            const auto groups = partition(op, parse_commutativity(mode));
            json jg = json::array();
            for (const auto& g : groups) {
                json members = json::array();
                for (const auto& t : g.terms) members.push_back(t.label());
                jg.push_back({{"basis", g.mode == Commutativity::QubitWise ? json(basis_label(g, op.n_qubits())) : json(nullptr)},
                              {"members", members}});
            }
            std::cout << json{{"n_terms", op.size()}, {"mode", mode}, {"n_groups", groups.size()}, {"groups", jg}}.dump(2) << '\n';
            return kExitOk;
        }

        if (*spec) {
            const Fixture f = require_fcidump();
            const Spectrum sp = exact_spectrum(qubit_hamiltonian(f.integrals), false, electrons);
            for (Eigen::Index k = 0; k < sp.values.size(); ++k) std::cout << format_real(sp.values(k)) << '\n';
            return kExitOk;
        }

        if (*bench) {
            const auto files = collect_fcidumps(bench_inputs.empty() ? std::vector<std::string>{(fixture_root() / "groups").string()} : bench_inputs, slow);
            std::cout << "system,qubits,h_terms,h_qwc_groups,fs_terms,fs_qwc_groups\n";
            for (const auto& f : files) {
                const PauliSum h = qubit_hamiltonian(read_fcidump(f));
                const PauliSum fsop = fold(h, 0.0).folded();
                std::cout << f.stem().string() << ',' << h.n_qubits() << ',' << h.size() << ','
                          << group_count(h, Commutativity::QubitWise) << ',' << fsop.size() << ','
                          << group_count(fsop, Commutativity::QubitWise) << '\n';
            }
            return kExitOk;
        }

        // vqe, fsvqe and pes share the run settings; a manifest supplies the
        // defaults and explicit flags win.
        CLI::App* run = *vqe ? vqe : *fsv ? fsv : pes;
        if (!manifest_path.empty()) {
            std::ifstream in(manifest_path);
            if (!in) throw ParseError("cannot open manifest " + manifest_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ParseError(manifest_path + ": " + e.what());
            }
            Settings base;
            from_json(j, base);
            auto given = [&](const char* name) { return run->get_option_no_throw(name) && run->get_option(name)->count() > 0; };
            if (given("--fcidump")) base.fcidump = s.fcidump;
            if (given("--fixtures")) base.fixtures = s.fixtures;
            if (given("--reference")) base.references = s.references;
            if (given("--omega")) base.omega = s.omega;
            if (given("--ground")) base.ground_state = s.ground_state;
            if (given("--backend")) base.backend = s.backend;
            if (given("--shots")) base.shots = s.shots;
            if (given("--final-shots")) base.final_shots = s.final_shots;
            if (given("--seed")) base.seed = s.seed;
            if (given("--noise-lambda")) base.noise_lambda = s.noise_lambda;
            if (given("--max-iter")) base.max_iter = s.max_iter;
            if (!mitigate_csv.empty()) base.mitigate = mitigate_csv;
            if (!gammas_csv.empty()) base.zne_gammas.clear();
            for (const auto& g : gammas_csv) base.zne_gammas.push_back(std::stoi(g));
            s = base;
        } else {
            s.mitigate = mitigate_csv;
            if (!gammas_csv.empty()) {
                s.zne_gammas.clear();
                for (const auto& g : gammas_csv) s.zne_gammas.push_back(std::stoi(g));
            }
        }
        if (*vqe) s.ground_state = true;
        PESConfig cfg = make_config(s);

        std::vector<PESGeometry> geos;
        std::vector<Fixture> fixtures;
        if (*pes) {
            if (s.fixtures.empty()) throw InvalidArgument("--fixtures is required");
            fixtures = load_fixture_dir(resolve_fixture(s.fixtures));
            if (fixtures.empty()) throw InvalidArgument("no FCIDUMP files in " + s.fixtures);
        } else {
            if (s.fcidump.empty()) throw InvalidArgument("--fcidump is required");
            fixtures.push_back(load_fixture(resolve_fixture(s.fcidump)));
        }
        for (const auto& f : fixtures) geos.push_back(to_geometry(f));
        const IntegralData& d0 = fixtures.front().integrals;
        const int n_qubits = 2 * d0.n_orbitals;

        std::vector<std::string> refs = s.references.empty() ? std::vector<std::string>{""} : s.references;
        std::vector<ReferenceSpec> specs;
        std::vector<std::string> labels;
        for (const auto& r : refs) {
            specs.push_back(reference_for(r, d0));
            labels.push_back(reference_label(specs.back(), n_qubits));
        }

        std::vector<std::vector<PESPoint>> runs(specs.size());
        // At most `jobs` scans in flight; each scan is seeded independently so
        // the results do not depend on the job count.
        for (std::size_t start = 0; start < specs.size(); start += static_cast<std::size_t>(jobs)) {
            std::vector<std::future<void>> batch;
            const std::size_t stop = std::min(specs.size(), start + static_cast<std::size_t>(jobs));
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(std::async(std::launch::async, [&, i] { runs[i] = pes_scan(geos, specs[i], cfg, s.seed); }));
            for (auto& b : batch) b.get();
        }

        if (dump_circuit) {
            const Circuit ansatz = build_ucc_ansatz(ucc_excitations(d0.n_electrons, n_qubits), reference_circuit(specs.front(), n_qubits));
            json jc = to_json(ansatz);
            jc["theta"] = runs.front().front().theta;
            if (out_dir.empty()) {
                std::cerr << jc.dump(2) << '\n';
            } else {
                fs::create_directories(out_dir);
                write_file(fs::path(out_dir) / "circuit.json", jc.dump(2) + "\n");
            }
        }
        return emit_runs(run->get_name(), s, labels, runs, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

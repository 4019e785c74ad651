// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 all default-tier criteria
//   acceptance --criterion 4   one criterion
//   acceptance --slow          adds the 14-qubit grouping cases to criterion 1

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "fsvqe/folded.hpp"
#include "fsvqe/grouping.hpp"
#include "fsvqe/json_io.hpp"
#include "fsvqe/mitigation.hpp"
#include "fsvqe/vqe.hpp"

using namespace fsvqe;

namespace {

constexpr double kChemAcc = 1.6e-3;

std::filesystem::path g_fixtures = FSVQE_TEST_FIXTURES;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// FCI level followed along a curve by eigenvector overlap. The first geometry
// picks the level closest to the normalised reference vector, later ones the
// level closest to the previous eigenvector, with orbital signs aligned as in
// the scan itself.
std::vector<double> tracked_fci(const std::vector<Fixture>& fixtures, const ReferenceSpec& ref) {
    std::vector<double> out;
    std::optional<MOFrame> prev_frame;
    std::vector<cplx> prev;
    for (const auto& f : fixtures) {
        IntegralData d = f.integrals;
        if (f.frame) {
            if (prev_frame) {
                const PhaseAlignment pa = mo_phase_align(*prev_frame, f.frame->coeffs);
                d = apply_orbital_signs(d, pa.signs);
                prev_frame = MOFrame{pa.coeffs, f.frame->overlap};
            } else {
                prev_frame = f.frame;
            }
        }
        const PauliSum h = qubit_hamiltonian(d);
        const int n = h.n_qubits();
        const Spectrum s = exact_spectrum(h, true, d.n_electrons);
        std::vector<cplx> target = prev;
        if (target.empty()) {
            target.assign(std::size_t{1} << n, 0.0);
            const double w = 1.0 / std::sqrt(static_cast<double>(ref.determinants.size()));
            for (std::size_t k = 0; k < ref.determinants.size(); ++k)
                target[ref.determinants[k]] = (k ? ref.relative_sign : 1) * w;
        }
        double best = -1.0;
        Eigen::Index level = 0;
        for (Eigen::Index k = 0; k < s.values.size(); ++k) {
            const auto v = s.full_vector(k, n);
            cplx o = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) o += std::conj(target[i]) * v[i];
            if (std::abs(o) > best) best = std::abs(o), level = k;
        }
        prev = s.full_vector(level, n);
        out.push_back(s.values(level));
    }
    return out;
}

std::vector<PESGeometry> geometries(const std::vector<Fixture>& fixtures) {
    std::vector<PESGeometry> g;
    for (const auto& f : fixtures) g.push_back(to_geometry(f));
    return g;
}

// ---------------------------------------------------------------- criterion 1

struct Golden {
    const char* fixture;
    std::size_t h_terms, h_groups, fs_terms, fs_groups;
};

Outcome golden_counts(bool slow) {
    std::vector<Golden> cases = {
        {"h2_sto3g", 15, 5, 24, 9},
        {"lih_s", 118, 29, 417, 65},
        {"lih_sto3g", 631, 136, 25542, 2216},
        {"beh2_s", 193, 43, 1783, 224},
    };
    if (slow) {
        cases.push_back({"beh2_sto3g", 666, 369, 47171, 8933});
        cases.push_back({"h2o_sto3g", 1578, 837, 111615, 20393});
    }
    Outcome out{true, ""};
    int matched = 0, total = 0;
    std::string misses;
    for (const auto& c : cases) {
        const PauliSum h = qubit_hamiltonian(load_fixture(g_fixtures / "groups" / (std::string(c.fixture) + ".fcidump")).integrals);
        const PauliSum fs = fold(h, 0.0).folded();
        const std::size_t got[4] = {h.size(), group_count(h, Commutativity::QubitWise), fs.size(),
                                    group_count(fs, Commutativity::QubitWise)};
        const std::size_t want[4] = {c.h_terms, c.h_groups, c.fs_terms, c.fs_groups};
        static const char* what[4] = {"H terms", "H groups", "FS terms", "FS groups"};
        for (int k = 0; k < 4; ++k) {
            ++total;
            if (got[k] == want[k]) {
                ++matched;
            } else {
                out.pass = false;
                misses += fmt(" %s %s %zu (expected %zu);", c.fixture, what[k], got[k], want[k]);
            }
        }
    }
    out.detail = fmt("%d/%d counts match", matched, total) + (misses.empty() ? "" : ", mismatches:" + misses);
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome gc_membership() {
    const PauliSum h = qubit_hamiltonian(load_fixture(g_fixtures / "groups" / "h2_sto3g.fcidump").integrals);
    const PauliSum fs = fold(h, 0.0).folded();
    const auto groups = partition(fs, Commutativity::General, {true});
    const std::set<std::string> g1 = {"IIII", "IIIZ", "IIZI", "ZZZZ", "IIZZ", "IZIZ", "ZIII", "ZIIZ",
                                      "ZIZI", "IZII", "IZZI", "IZZZ", "ZIZZ", "ZZZI", "ZZII", "ZZIZ"};
    const std::set<std::string> g2 = {"XYXY", "YYYY", "XXYY", "YXXY", "XYYX", "YYXX", "XXXX", "YXYX"};
    std::vector<std::set<std::string>> got;
    for (const auto& g : groups) {
        std::set<std::string> labels;
        for (const auto& t : g.terms) labels.insert(t.label());
        got.push_back(labels);
    }
    const bool pass = got.size() == 2 && ((got[0] == g1 && got[1] == g2) || (got[0] == g2 && got[1] == g1));
    std::string sizes;
    for (const auto& g : got) sizes += fmt("%s%zu", sizes.empty() ? "" : "+", g.size());
    return {pass, fmt("%zu groups of sizes %s over %zu strings; membership %s", got.size(), sizes.c_str(), fs.size(),
                      pass ? "equals the expected sets" : "differs from the expected sets")};
}

// ---------------------------------------------------------------- criterion 3

Outcome folding() {
    const auto fixtures = load_fixture_dir(g_fixtures / "h2");
    const std::size_t picks[] = {0, 4, 8, 13, 20};
    const double omegas[] = {-1.3, -0.6, 0.0, 0.4, 1.1};
    double worst = 0.0;
    int nearest_ok = 0, pairs = 0;
    for (std::size_t p : picks) {
        const PauliSum h = qubit_hamiltonian(fixtures.at(p).integrals);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(to_dense(h));
        for (double w : omegas) {
            ++pairs;
            const Eigen::MatrixXcd f = to_dense(fold(h, w).folded());
            for (Eigen::Index k = 0; k < eh.eigenvalues().size(); ++k) {
                const Eigen::VectorXcd v = eh.eigenvectors().col(k);
                const double e = eh.eigenvalues()(k);
                worst = std::max(worst, (f * v - (e - w) * (e - w) * v).norm());
            }
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ef(f);
            const Eigen::VectorXcd low = ef.eigenvectors().col(0);
            const double e_low = low.dot(to_dense(h) * low).real();
            double nearest = eh.eigenvalues()(0);
            for (Eigen::Index k = 0; k < eh.eigenvalues().size(); ++k)
                if (std::abs(eh.eigenvalues()(k) - w) < std::abs(nearest - w)) nearest = eh.eigenvalues()(k);
            if (std::abs(e_low - nearest) < 1e-8) ++nearest_ok;
        }
    }
    return {worst < 1e-8 && nearest_ok == pairs,
            fmt("%d (geometry, omega) pairs, max |F v - (E-w)^2 v| = %.1e, folded minimum at the nearest level %d/%d", pairs, worst,
                nearest_ok, pairs)};
}

// ---------------------------------------------------------------- criterion 4

Outcome h2_curves() {
    const auto fixtures = load_fixture_dir(g_fixtures / "h2");
    const auto geos = geometries(fixtures);
    const std::uint64_t seeds[] = {1, 2, 3};
    Outcome out{true, fmt("%zu bond lengths, seeds 1-3;", fixtures.size())};
    for (const auto& [label, refspec] : std::vector<std::pair<const char*, const char*>>{{"T1", "1100"}, {"S1", "1001+0110"}, {"S2", "0101"}}) {
        const ReferenceSpec ref = ReferenceSpec::parse(refspec);
        const auto fci = tracked_fci(fixtures, ref);
        std::vector<std::vector<double>> err(fixtures.size());
        std::vector<int> conv_count(fixtures.size(), 0);
        double min_fraction = 1.0;
        int strict_seeds = 0;
        for (std::uint64_t seed : seeds) {
            PESConfig cfg;
            cfg.vqe.estimator.backend = Backend::Shots;
            cfg.vqe.estimator.shots = cfg.vqe.s_min;
            const auto pts = pes_scan(geos, ref, cfg, seed);
            int conv = 0;
            bool strict = true;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                err[k].push_back(std::abs(pts[k].energy - fci[k]));
                conv += pts[k].converged;
                conv_count[k] += pts[k].converged;
                if (pts[k].converged && err[k].back() >= kChemAcc) strict = false;
            }
            min_fraction = std::min(min_fraction, static_cast<double>(conv) / static_cast<double>(pts.size()));
            strict_seeds += strict;
        }
        int points = 0, ok = 0;
        double worst = 0.0;
        for (std::size_t k = 0; k < fixtures.size(); ++k) {
            if (2 * conv_count[k] < static_cast<int>(std::size(seeds))) continue;
            ++points;
            const double m = median(err[k]);
            worst = std::max(worst, m);
            ok += m < kChemAcc;
        }
        const bool pass = min_fraction >= 0.9 && ok == points;
        out.pass = out.pass && pass;
        out.detail += fmt(" %s %s (converged >= %.0f%% per seed, median error < 1.6e-3 at %d/%d points, worst median %.1e, "
                          "seeds with every point inside %d/3);",
                          label, pass ? "ok" : "FAILED", 100 * min_fraction, ok, points, worst, strict_seeds);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome lih_curves() {
    const auto fixtures = load_fixture_dir(g_fixtures / "lih_s");
    const auto geos = geometries(fixtures);
    const std::vector<std::pair<const char*, const char*>> states = {
        {"T1", "100111"}, {"S1", "110101+101110"}, {"S2", "101101"},        {"T2", "010111"},
        {"S3", "110011+011110"}, {"T3", "111001"}, {"S4", "101011+011101"}, {"S5", "011011"},
    };
    Outcome out{true, ""};
    int converged_total = 0;
    for (const auto& [label, refspec] : states) {
        const ReferenceSpec ref = ReferenceSpec::parse(refspec);
        const auto fci = tracked_fci(fixtures, ref);
        PESConfig cfg;
        cfg.omega0 = fci.front();
        const auto pts = pes_scan(geos, ref, cfg, 1);
        int conv = 0, bad = 0;
        double worst_conv = 0.0, worst_all = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double e = std::abs(pts[k].energy - fci[k]);
            worst_all = std::max(worst_all, e);
            if (!pts[k].converged) continue;
            ++conv;
            worst_conv = std::max(worst_conv, e);
            bad += e >= kChemAcc;
        }
        converged_total += conv;
        if (bad) out.pass = false;
        out.detail += fmt(" %s %d/%zu converged, %d outside (worst converged %.1e, worst any %.1e);", label, conv, pts.size(), bad,
                          worst_conv, worst_all);
    }
    if (converged_total == 0) out.pass = false;
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome mitigation() {
    const Fixture f = load_fixture(g_fixtures / "h2" / "h2_0.74.fcidump");
    const PauliSum h = qubit_hamiltonian(f.integrals);
    const ReferenceSpec ref = ReferenceSpec::parse("0101");
    const VQEProblem problem(h, build_ucc_ansatz(ucc_excitations(2, 4), reference_circuit(ref, 4)));
    const Spectrum s = exact_spectrum(h, false, 2);
    const double fci = s.values(s.values.size() - 1);  // S2 is the top of the two-electron sector
    const double lambdas[] = {0.0, 0.2, 0.4, 1.0};
    Outcome out{true, "median of 5 seeds;"};
    for (double lam : lambdas) {
        double med[2], med_abs[2];
        for (int mit = 0; mit < 2; ++mit) {
            std::vector<double> e, a;
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                VQEConfig c;
                c.estimator.backend = Backend::Noisy;
                c.estimator.noise = scale_noise(NoiseModel::device_reference(), lam);
                c.estimator.shots = 20000;
                c.schedule = false;
                c.final_shots = 20000;
                c.mitigation.spam = c.mitigation.zne = mit == 1;
                const VQEResult r = run_vqe(problem, std::vector<double>(3, 0.0), fci, c, seed);
                e.push_back(r.energy);
                a.push_back(std::abs(r.energy - fci));
            }
            med[mit] = std::abs(median(e) - fci);
            med_abs[mit] = median(a);
        }
        bool ok = true;
        if (lam > 0.0 && med[1] > med[0]) ok = false;
        if (lam <= 0.4 && med[1] >= kChemAcc) ok = false;
        out.pass = out.pass && ok;
        out.detail += fmt(" lambda %.1f raw %.1e mitigated %.1e%s (median |error| %.1e / %.1e);", lam, med[0], med[1], ok ? "" : " FAILED",
                          med_abs[0], med_abs[1]);
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome precision_law() {
    const Fixture f = load_fixture(g_fixtures / "h2" / "h2_0.74.fcidump");
    const PauliSum h = qubit_hamiltonian(f.integrals);
    const VQEProblem problem(h, build_ucc_ansatz(ucc_excitations(2, 4), reference_circuit(ReferenceSpec::parse("1010"), 4)));
    const VQEResult ground = run_vqe(problem, std::vector<double>(3, 0.0), std::nullopt, VQEConfig{}, 1);
    const double shots[] = {1e2, 1e3, 1e4, 1e5};
    std::vector<double> sd;
    for (double s : shots) {
        EstimatorConfig cfg;
        cfg.backend = Backend::Shots;
        cfg.shots = static_cast<std::uint64_t>(s);
        std::vector<double> v;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng = make_rng(seed, {static_cast<std::uint64_t>(s)});
            v.push_back(estimate(problem.energy_obs, problem.ansatz, ground.theta, cfg, rng).value);
        }
        double mean = 0.0;
        for (double x : v) mean += x / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        sd.push_back(std::sqrt(ss / static_cast<double>(v.size() - 1)));
    }
    // least squares for sd = A / sqrt(s)
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sd.size(); ++i) {
        const double x = 1.0 / std::sqrt(shots[i]);
        num += x * sd[i];
        den += x * x;
    }
    const double a = num / den;
    double mean = 0.0;
    for (double v : sd) mean += v / static_cast<double>(sd.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < sd.size(); ++i) {
        ss_res += std::pow(sd[i] - a / std::sqrt(shots[i]), 2);
        ss_tot += std::pow(sd[i] - mean, 2);
    }
    const double r2 = 1.0 - ss_res / ss_tot;
    std::string pts;
    for (std::size_t i = 0; i < sd.size(); ++i) pts += fmt(" s=%.0e sd=%.2e", shots[i], sd[i]);
    return {r2 > 0.95, fmt("A = %.3f Ha, R^2 = %.5f;%s", a, r2, pts.c_str())};
}

// ---------------------------------------------------------------- criterion 8

unsigned g_cases_run = 0;
unsigned g_cases_failed = 0;

struct RunCounter : doctest::IReporter {
    explicit RunCounter(const doctest::ContextOptions&) {}
    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats& s) override {
        g_cases_run = s.numTestCasesPassingFilters;
        g_cases_failed = s.numTestCasesFailed;
    }
    void test_case_start(const doctest::TestCaseData&) override {}
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats&) override {}
    void test_case_exception(const doctest::TestCaseException&) override {}
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData&) override {}
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};
REGISTER_LISTENER("run_counter", 1, RunCounter);

constexpr unsigned kOracleCases = 11;

Outcome oracle_suite() {
    doctest::Context ctx;
    ctx.setOption("test-case",
                  "term products agree with dense matrices on random strings,"
                  "sum products and squares agree with dense matrices,"
                  "expectation values match dense contraction,"
                  "ladder images match the explicit Jordan-Wigner matrices,"
                  "canonical anticommutators hold for every pair on six modes,"
                  "pauli gadget equals the closed-form rotation,"
                  "ansatz parameter acts as exp(theta (T - T^dagger)),"
                  "folding around omega matches (H - omega)^2 densely,"
                  "noiseless density matrices equal the projector on the statevector,"
                  "noise channels keep trace*,"
                  "depolarizing matches the Pauli-twirl definition");
    ctx.setOption("minimal", true);
    ctx.setOption("no-intro", true);
    ctx.setOption("no-version", true);
    const int rc = ctx.run();
    return {rc == 0 && g_cases_run == kOracleCases,
            fmt("%u/%u dense-matrix oracle cases ran, %u failed", g_cases_run, kOracleCases, g_cases_failed)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    bool slow = false;
    std::string fixtures;
    app.add_option("--criterion", only, "Run a single criterion (1-8)")->check(CLI::Range(1, 8));
    app.add_flag("--slow", slow, "Include the 14-qubit grouping cases");
    app.add_option("--fixtures", fixtures, "Fixture directory");
    CLI11_PARSE(app, argc, argv);
    if (!fixtures.empty()) g_fixtures = fixtures;

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"term and group golden counts", [&] { return golden_counts(slow); }},
        {"GC partition of the H2 folded operator", gc_membership},
        {"folding correctness", folding},
        {"H2 excited-state curves, shot backend", h2_curves},
        {"LiH excited-state curves, exact backend", lih_curves},
        {"mitigation of H2 S2 at 0.74 A", mitigation},
        {"sampling-precision law", precision_law},
        {"oracle-equivalence property suite", oracle_suite},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first, dt, r.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    return failed ? 1 : 0;
}

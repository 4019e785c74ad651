#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsvqe/circuit.hpp"
#include "fsvqe/fermion.hpp"
#include "fsvqe/simulator.hpp"
#include "fsvqe/vqe.hpp"

namespace fsvqe {

using json = nlohmann::json;

/// An FCIDUMP file plus the optional sidecar `<stem>.json` written by the
/// fixture generator (geometry, MO coefficients, overlap, FCI spectrum).
struct Fixture {
    std::string id;
    std::filesystem::path fcidump;
    IntegralData integrals;
    json meta;
    std::optional<MOFrame> frame;
    std::optional<double> bond_length;
    std::vector<double> fci_spectrum;
};

Fixture load_fixture(const std::filesystem::path& fcidump);

/// Every *.fcidump in `dir`, ordered by bond length (then name).
std::vector<Fixture> load_fixture_dir(const std::filesystem::path& dir);

/// $FSVQE_FIXTURES when set, otherwise the source tree's fixtures directory.
std::filesystem::path fixture_root();

/// Resolves a relative fixture path against the working directory, then the fixture root.
std::filesystem::path resolve_fixture(const std::filesystem::path& p);

PESGeometry to_geometry(const Fixture& f);

json to_json(const Circuit& c);
json to_json(const NoiseModel& m);
json to_json(const Counts& c);
json to_json(const PESPoint& p);

/// Human-readable float with enough digits to round-trip.
std::string format_real(double v);

}  // namespace fsvqe

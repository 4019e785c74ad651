#include "fsvqe/grouping.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "fsvqe/errors.hpp"

namespace fsvqe {

Commutativity parse_commutativity(std::string_view text) {
    if (text == "qwc" || text == "QWC") return Commutativity::QubitWise;
    if (text == "gc" || text == "GC") return Commutativity::General;
    throw InvalidArgument("unknown commutativity '" + std::string(text) + "' (expected qwc or gc)");
}

const char* commutativity_name(Commutativity mode) { return mode == Commutativity::QubitWise ? "qwc" : "gc"; }

bool qwc_commute(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits != b.n_qubits) throw DimensionError("qwc_commute: qubit count mismatch");
    return qwc_commute(a.ops, b.ops);
}

bool gc_commute(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits != b.n_qubits) throw DimensionError("gc_commute: qubit count mismatch");
    return gc_commute(a.ops, b.ops);
}

namespace {

template <bool Qwc>
std::vector<std::size_t> degrees(const std::vector<PauliString>& v) {
    const std::size_t m = v.size();
    std::vector<std::size_t> deg(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const PauliString a = v[i];
        std::size_t d = 0;
        for (std::size_t j = i + 1; j < m; ++j) {
            bool ok;
            if constexpr (Qwc) {
                ok = qwc_commute(a, v[j]);
            } else {
                ok = strings_commute(a, v[j]);
            }
            if (!ok) {
                ++d;
                ++deg[j];
            }
        }
        deg[i] += d;
    }
    return deg;
}

// Returns colour per vertex.
std::vector<std::size_t> colour(const std::vector<PauliString>& v, Commutativity mode, std::size_t& n_colours) {
    const std::size_t m = v.size();
    const auto deg = mode == Commutativity::QubitWise ? degrees<true>(v) : degrees<false>(v);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });

    std::vector<std::size_t> col(m, 0);
    n_colours = 0;
    if (mode == Commutativity::QubitWise) {
        // A term fits a qubit-wise group iff it agrees with the union basis.
        std::vector<PauliString> basis;
        for (std::size_t i : order) {
            std::size_t c = 0;
            while (c < basis.size() && !qwc_commute(basis[c], v[i])) ++c;
            if (c == basis.size()) basis.push_back({});
            basis[c].x |= v[i].x;
            basis[c].z |= v[i].z;
            col[i] = c;
        }
        n_colours = basis.size();
    } else {
        std::vector<std::vector<PauliString>> members;
        for (std::size_t i : order) {
            std::size_t c = 0;
            for (; c < members.size(); ++c) {
                const auto& g = members[c];
                if (std::all_of(g.begin(), g.end(), [&](const PauliString& p) { return strings_commute(p, v[i]); })) break;
            }
            if (c == members.size()) members.emplace_back();
            members[c].push_back(v[i]);
            col[i] = c;
        }
        n_colours = members.size();
    }
    return col;
}

}  // namespace

std::vector<MeasurementGroup> partition(const PauliSum& s, Commutativity mode, PartitionOptions opts) {
    std::vector<PauliString> strings;
    std::vector<std::size_t> source;
    const auto& terms = s.terms();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].ops.is_identity() && !opts.include_identity) continue;
        strings.push_back(terms[i].ops);
        source.push_back(i);
    }
    std::size_t n_colours = 0;
    const auto col = colour(strings, mode, n_colours);
    std::vector<MeasurementGroup> groups(n_colours);
    for (auto& g : groups) g.mode = mode;
    for (std::size_t k = 0; k < strings.size(); ++k) {
        auto& g = groups[col[k]];
        g.terms.push_back(terms[source[k]]);
        g.source_index.push_back(source[k]);
        g.basis.x |= strings[k].x;
        g.basis.z |= strings[k].z;
    }
    if (mode == Commutativity::General)
        for (auto& g : groups) g.basis = {};
    return groups;
}

std::size_t group_count(const PauliSum& s, Commutativity mode) {
    std::vector<PauliString> strings;
    for (const auto& t : s)
        if (!t.ops.is_identity()) strings.push_back(t.ops);
    std::size_t n = 0;
    colour(strings, mode, n);
    return n;
}

Circuit measurement_circuit(const MeasurementGroup& g, int n_qubits) {
    if (g.mode != Commutativity::QubitWise) throw InvalidArgument("measurement_circuit needs a qubit-wise group");
    Circuit c(n_qubits);
    for (int q = 0; q < n_qubits; ++q) {
        const char o = g.basis.op(q);
        if (o == 'X') c.h(q);
        if (o == 'Y') c.rx(q, std::numbers::pi / 2);
    }
    return c;
}

std::string basis_label(const MeasurementGroup& g, int n_qubits) { return to_label(g.basis, n_qubits); }

}  // namespace fsvqe

#pragma once

#include "omlprob/omlprob.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace testing_support {

using omlprob::ElementId;
using omlprob::Rational;

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(OMLPROB_FIXTURE_DIR) / name; }

inline Rational R(const char* text) { return omlprob::parse_rational(text); }

// Pastes Boolean algebras given by their atom lists, identifying elements
// by name. Element names follow the fixture convention: atoms by name,
// co-atoms as <missing atom>'. Blocks of at most three atoms only. This is
// deliberately independent of omlprob::horizontal_sum and boolean_algebra.
inline omlprob::RawOml pasted(const std::vector<std::vector<std::string>>& blocks) {
    struct Rep {
        std::size_t block;
        unsigned mask;
    };
    std::vector<std::string> order{"0"};
    std::map<std::string, std::vector<Rep>> reps;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& atoms = blocks[b];
        const unsigned full = (1u << atoms.size()) - 1;
        for (unsigned m = 0; m <= full; ++m) {
            std::string name;
            const int bits = __builtin_popcount(m);
            if (m == 0) name = "0";
            else if (m == full) name = "1";
            else if (bits == 1) name = atoms[__builtin_ctz(m)];
            else name = atoms[__builtin_ctz(full & ~m)] + "'";
            if (!reps.contains(name) && name != "0" && name != "1") order.push_back(name);
            reps[name].push_back({b, m});
        }
    }
    order.push_back("1");
    omlprob::RawOml raw;
    raw.names = order;
    const std::size_t n = order.size();
    raw.leq.assign(n, std::vector<bool>(n, false));
    raw.ortho.assign(n, 0);
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bool le = order[i] == "0" || order[j] == "1";
            for (const Rep& x : reps[order[i]]) {
                for (const Rep& y : reps[order[j]]) {
                    if (x.block == y.block && (x.mask & ~y.mask) == 0) le = true;
                }
            }
            raw.leq[i][j] = le;
        }
        const Rep& r = reps[order[i]].front();
        const unsigned full = (1u << blocks[r.block].size()) - 1;
        for (const auto& [name, list] : reps) {
            for (const Rep& y : list) {
                if (y.block == r.block && y.mask == (full & ~r.mask)) raw.ortho[i] = pos[name];
            }
        }
    }
    return raw;
}

inline omlprob::LatticeRef l1() { return omlprob::share(omlprob::validate_oml(pasted({{"a", "a'"}, {"b", "b'"}}))); }
inline omlprob::LatticeRef l2() { return omlprob::share(omlprob::validate_oml(pasted({{"a", "b", "c"}, {"c", "d", "e"}}))); }

using NamedPairs = std::vector<std::pair<std::pair<const char*, const char*>, const char*>>;

// Atom-level values, rows = first argument.
inline NamedPairs p1_table() {
    return {{{"a", "a"}, "0.3"},    {{"a", "a'"}, "0"},      {{"a", "b"}, "0.2"},    {{"a", "b'"}, "0.1"},
            {{"a'", "a"}, "0"},     {{"a'", "a'"}, "0.7"},   {{"a'", "b"}, "0.3"},   {{"a'", "b'"}, "0.4"},
            {{"b", "a"}, "0.15"},   {{"b", "a'"}, "0.35"},   {{"b", "b"}, "0.5"},    {{"b", "b'"}, "0"},
            {{"b'", "a"}, "0.15"},  {{"b'", "a'"}, "0.35"},  {{"b'", "b"}, "0"},     {{"b'", "b'"}, "0.5"}};
}

inline NamedPairs p2_table() {
    const char* rows[5][5] = {{"0.2", "0", "0", "0.2", "0"},
                              {"0", "0.4", "0", "0.1", "0.3"},
                              {"0", "0", "0.4", "0", "0"},
                              {"0.15", "0.15", "0", "0.3", "0"},
                              {"0.05", "0.25", "0", "0", "0.3"}};
    static const char* names[5] = {"a", "b", "c", "d", "e"};
    NamedPairs out;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) out.push_back({{names[i], names[j]}, rows[i][j]});
    }
    return out;
}

inline std::map<std::pair<ElementId, ElementId>, Rational> atom_pairs(const omlprob::FiniteOml& l, const NamedPairs& t) {
    std::map<std::pair<ElementId, ElementId>, Rational> out;
    for (const auto& [k, v] : t) out[{l.at(k.first), l.at(k.second)}] = R(v);
    return out;
}

inline omlprob::SMap p1() {
    auto l = l1();
    return omlprob::extend_smap_from_atom_table(l, atom_pairs(*l, p1_table()));
}

inline omlprob::SMap p2() {
    auto l = l2();
    return omlprob::extend_smap_from_atom_table(l, atom_pairs(*l, p2_table()));
}

inline Rational at(const omlprob::SMap& p, const char* a, const char* b) {
    return p(p.lattice().at(a), p.lattice().at(b));
}

inline omlprob::Observable obs(const omlprob::LatticeRef& l, std::vector<std::pair<const char*, const char*>> support) {
    std::vector<omlprob::SupportPoint> pts;
    for (const auto& [v, e] : support) pts.push_back({R(v), l->at(e)});
    return omlprob::validate_observable(l, std::move(pts));
}

}  // namespace testing_support

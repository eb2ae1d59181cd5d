#pragma once

// Finite orthomodular lattices: validation from raw tables, table-driven
// lattice operations, block decomposition, Boolean algebras and horizontal
// sums.

#include "omlprob/error.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace omlprob {

struct ElementId {
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

using ElementSet = boost::dynamic_bitset<>;

/// Unvalidated lattice description. `leq[i][j]` means element i <= element j;
/// `ortho[i]` is the index of the complement of element i.
struct RawOml {
    std::vector<std::string> names;
    std::vector<std::vector<bool>> leq;
    std::vector<std::size_t> ortho;
};

/// A maximal set of pairwise compatible elements. `atoms` are the minimal
/// non-bottom members.
struct Block {
    std::vector<ElementId> members;
    std::vector<ElementId> atoms;
    bool is_boolean = false;

    bool contains(ElementId e) const { return std::binary_search(members.begin(), members.end(), e); }
};

class FiniteOml;
FiniteOml validate_oml(const RawOml& candidate);

/// Immutable, validated orthomodular lattice. Only `validate_oml` builds one,
/// so every instance satisfies the lattice, ortho and orthomodular axioms.
class FiniteOml {
public:
    std::size_t size() const { return names_.size(); }
    ElementId bottom() const { return bottom_; }
    ElementId top() const { return top_; }

    std::vector<ElementId> elements() const {
        std::vector<ElementId> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = id(i);
        return out;
    }

    const std::string& name(ElementId e) const { return names_.at(e.index); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<ElementId> find(std::string_view element_name) const {
        auto it = by_name_.find(std::string(element_name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    ElementId at(std::string_view element_name) const {
        if (auto e = find(element_name)) return *e;
        throw Error(ErrorCode::UnknownElement, "no element named \"" + std::string(element_name) + "\"",
                    {std::string(element_name)});
    }

    bool leq(ElementId a, ElementId b) const { return below_[b.index].test(a.index); }
    ElementId meet(ElementId a, ElementId b) const { return id(meet_[cell(a, b)]); }
    ElementId join(ElementId a, ElementId b) const { return id(join_[cell(a, b)]); }
    ElementId ortho(ElementId a) const { return id(ortho_[a.index]); }

    /// a ⊥ b, i.e. a <= b'.
    bool is_orthogonal(ElementId a, ElementId b) const { return leq(a, ortho(b)); }

    /// a = (a∧b) ∨ (a∧b') and b = (a∧b) ∨ (a'∧b).
    bool is_compatible(ElementId a, ElementId b) const { return compat_[cell(a, b)] != 0; }

    ElementId join_all(std::span<const ElementId> items) const {
        ElementId acc = bottom_;
        for (ElementId e : items) acc = join(acc, e);
        return acc;
    }

    const std::vector<ElementId>& atoms() const { return atoms_; }
    bool is_atom(ElementId e) const { return std::binary_search(atoms_.begin(), atoms_.end(), e); }

    /// Blocks in canonical order (lexicographic on sorted member indices).
    const std::vector<Block>& blocks() const { return blocks_; }

    /// Unordered orthogonal pairs (a.index <= b.index), bottom included.
    const std::vector<std::pair<ElementId, ElementId>>& orthogonal_pairs() const { return orthogonal_pairs_; }

    /// Elements below `a` (inclusive) as a bitset over indices.
    const ElementSet& down_set(ElementId a) const { return below_[a.index]; }

    /// The raw tables this lattice was validated from.
    RawOml raw() const {
        RawOml out;
        out.names = names_;
        out.leq.assign(size(), std::vector<bool>(size(), false));
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) out.leq[i][j] = below_[j].test(i);
        }
        out.ortho.assign(ortho_.begin(), ortho_.end());
        return out;
    }

    std::string format_set(std::span<const ElementId> items) const {
        std::string out = "{";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += name(items[i]);
        }
        return out + "}";
    }

private:
    friend FiniteOml validate_oml(const RawOml& candidate);

    FiniteOml() = default;

    static ElementId id(std::size_t i) { return ElementId{static_cast<std::uint32_t>(i)}; }
    std::size_t cell(ElementId a, ElementId b) const { return a.index * size() + b.index; }

    std::vector<std::string> names_;
    std::map<std::string, ElementId, std::less<>> by_name_;
    std::vector<ElementSet> below_;
    std::vector<std::uint32_t> ortho_;
    std::vector<std::uint32_t> meet_;
    std::vector<std::uint32_t> join_;
    std::vector<char> compat_;
    std::vector<ElementId> atoms_;
    std::vector<Block> blocks_;
    std::vector<std::pair<ElementId, ElementId>> orthogonal_pairs_;
    ElementId bottom_;
    ElementId top_;
};

namespace detail {

/// Bron–Kerbosch with pivoting over an adjacency given as bitsets.
inline void maximal_cliques(const std::vector<ElementSet>& adj, ElementSet r, ElementSet p, ElementSet x,
                            std::vector<ElementSet>& out) {
    if (p.none() && x.none()) {
        out.push_back(r);
        return;
    }
    ElementSet px = p | x;
    std::size_t pivot = px.find_first();
    std::size_t best = 0;
    for (std::size_t u = px.find_first(); u != ElementSet::npos; u = px.find_next(u)) {
        std::size_t c = (p & adj[u]).count();
        if (c >= best) {
            best = c;
            pivot = u;
        }
    }
    ElementSet candidates = p - adj[pivot];
    for (std::size_t v = candidates.find_first(); v != ElementSet::npos; v = candidates.find_next(v)) {
        ElementSet r2 = r;
        r2.set(v);
        maximal_cliques(adj, r2, p & adj[v], x & adj[v], out);
        p.reset(v);
        x.set(v);
    }
}

// Above this many triples a block is checked through its atoms instead of by
// brute-force distributivity.
inline constexpr std::size_t kExhaustiveTripleLimit = std::size_t{1} << 24;

}  // namespace detail

/// Checks that `members` (sorted, containing bottom and top) is a Boolean
/// subalgebra of `l`. Throws BlockNotBoolean with a witness otherwise.
inline void verify_boolean_subalgebra(const FiniteOml& l, std::span<const ElementId> members) {
    auto in = [&](ElementId e) { return std::binary_search(members.begin(), members.end(), e); };
    if (!in(l.bottom()) || !in(l.top())) {
        throw Error(ErrorCode::BlockNotBoolean, "subset misses bottom or top");
    }
    for (ElementId a : members) {
        if (!in(l.ortho(a))) {
            throw Error(ErrorCode::BlockNotBoolean, "not closed under complement at " + l.name(a), {l.name(a)});
        }
        for (ElementId b : members) {
            if (!in(l.meet(a, b)) || !in(l.join(a, b))) {
                throw Error(ErrorCode::BlockNotBoolean,
                            "not closed under meet/join at (" + l.name(a) + ", " + l.name(b) + ")",
                            {l.name(a), l.name(b)});
            }
        }
    }
    const std::size_t n = members.size();
    if (n * n * n <= detail::kExhaustiveTripleLimit) {
        for (ElementId a : members) {
            for (ElementId b : members) {
                for (ElementId c : members) {
                    if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) {
                        throw Error(ErrorCode::BlockNotBoolean,
                                    "distributivity fails at (" + l.name(a) + ", " + l.name(b) + ", " + l.name(c) + ")",
                                    {l.name(a), l.name(b), l.name(c)});
                    }
                }
            }
        }
        return;
    }
    // Large case: Boolean iff the members are exactly the joins of subsets of
    // pairwise orthogonal atoms that join to top.
    std::vector<ElementId> atoms;
    for (ElementId e : members) {
        if (l.is_atom(e)) atoms.push_back(e);
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            if (!l.is_orthogonal(atoms[i], atoms[j])) {
                throw Error(ErrorCode::BlockNotBoolean,
                            "atoms " + l.name(atoms[i]) + " and " + l.name(atoms[j]) + " are not orthogonal",
                            {l.name(atoms[i]), l.name(atoms[j])});
            }
        }
    }
    if (atoms.size() >= 63 || (std::size_t{1} << atoms.size()) != n) {
        throw Error(ErrorCode::BlockNotBoolean, "member count is not 2^(atom count)");
    }
    for (ElementId e : members) {
        ElementId acc = l.bottom();
        for (ElementId a : atoms) {
            if (l.leq(a, e)) acc = l.join(acc, a);
        }
        if (acc != e) {
            throw Error(ErrorCode::BlockNotBoolean, l.name(e) + " is not a join of atoms", {l.name(e)});
        }
    }
}

inline FiniteOml validate_oml(const RawOml& candidate) {
    const std::size_t n = candidate.names.size();
    if (n == 0) throw Error(ErrorCode::MalformedTables, "lattice has no elements");
    if (candidate.leq.size() != n || candidate.ortho.size() != n) {
        throw Error(ErrorCode::MalformedTables, "order/ortho tables do not match the element count");
    }
    for (const auto& row : candidate.leq) {
        if (row.size() != n) throw Error(ErrorCode::MalformedTables, "order table is not square");
    }
    for (std::size_t o : candidate.ortho) {
        if (o >= n) throw Error(ErrorCode::MalformedTables, "ortho index out of range");
    }

    FiniteOml l;
    l.names_ = candidate.names;
    for (std::size_t i = 0; i < n; ++i) {
        if (l.names_[i].empty()) throw Error(ErrorCode::MalformedTables, "empty element name");
        if (!l.by_name_.emplace(l.names_[i], FiniteOml::id(i)).second) {
            throw Error(ErrorCode::DuplicateElementName, "element name \"" + l.names_[i] + "\" repeats",
                        {l.names_[i]});
        }
    }
    const auto& nm = l.names_;

    // Partial order.
    l.below_.assign(n, ElementSet(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (candidate.leq[i][j]) l.below_[j].set(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!l.below_[i].test(i)) {
            throw Error(ErrorCode::NotAPartialOrder, "order is not reflexive at " + nm[i], {nm[i]});
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (l.below_[j].test(i) && l.below_[i].test(j)) {
                throw Error(ErrorCode::NotAPartialOrder, "order is not antisymmetric at (" + nm[i] + ", " + nm[j] + ")",
                            {nm[i], nm[j]});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        const ElementSet& down = l.below_[a];
        for (std::size_t b = down.find_first(); b != ElementSet::npos; b = down.find_next(b)) {
            if (!l.below_[b].is_subset_of(down)) {
                std::size_t c = (l.below_[b] - down).find_first();
                throw Error(ErrorCode::NotAPartialOrder,
                            "order is not transitive: " + nm[c] + " <= " + nm[b] + " <= " + nm[a],
                            {nm[c], nm[b], nm[a]});
            }
        }
    }

    // Bounds.
    std::vector<std::size_t> rank(n);
    std::optional<std::size_t> bottom, top;
    for (std::size_t i = 0; i < n; ++i) {
        rank[i] = l.below_[i].count();
        if (rank[i] == n) top = i;
        if (rank[i] == 1) {
            bool least = true;
            for (std::size_t j = 0; j < n && least; ++j) least = l.below_[j].test(i);
            if (least) bottom = i;
        }
    }
    if (!bottom || !top) throw Error(ErrorCode::NotALattice, "missing least or greatest element");
    l.bottom_ = FiniteOml::id(*bottom);
    l.top_ = FiniteOml::id(*top);
    if (auto it = l.by_name_.find("0"); it != l.by_name_.end() && it->second != l.bottom_) {
        throw Error(ErrorCode::ReservedName, "\"0\" is reserved for the bottom element", {"0"});
    }
    if (auto it = l.by_name_.find("1"); it != l.by_name_.end() && it->second != l.top_) {
        throw Error(ErrorCode::ReservedName, "\"1\" is reserved for the top element", {"1"});
    }

    std::vector<ElementSet> above(n, ElementSet(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = l.below_[a].find_first(); b != ElementSet::npos; b = l.below_[a].find_next(b)) {
            above[b].set(a);
        }
    }

    // Meet and join: the bound whose down-set (up-set) equals the common
    // lower (upper) bounds.
    l.meet_.assign(n * n, 0);
    l.join_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            ElementSet lower = l.below_[a] & l.below_[b];
            std::size_t m = ElementSet::npos;
            for (std::size_t c = lower.find_first(); c != ElementSet::npos; c = lower.find_next(c)) {
                if (m == ElementSet::npos || rank[c] > rank[m]) m = c;
            }
            if (m == ElementSet::npos || l.below_[m] != lower) {
                throw Error(ErrorCode::NotALattice, "no meet for (" + nm[a] + ", " + nm[b] + ")", {nm[a], nm[b]});
            }
            ElementSet upper = above[a] & above[b];
            std::size_t j = ElementSet::npos;
            for (std::size_t c = upper.find_first(); c != ElementSet::npos; c = upper.find_next(c)) {
                if (j == ElementSet::npos || above[c].count() > above[j].count()) j = c;
            }
            if (j == ElementSet::npos || above[j] != upper) {
                throw Error(ErrorCode::NotALattice, "no join for (" + nm[a] + ", " + nm[b] + ")", {nm[a], nm[b]});
            }
            l.meet_[a * n + b] = l.meet_[b * n + a] = static_cast<std::uint32_t>(m);
            l.join_[a * n + b] = l.join_[b * n + a] = static_cast<std::uint32_t>(j);
        }
    }

    // Orthocomplement.
    l.ortho_.resize(n);
    for (std::size_t i = 0; i < n; ++i) l.ortho_[i] = static_cast<std::uint32_t>(candidate.ortho[i]);
    for (std::size_t a = 0; a < n; ++a) {
        if (l.ortho_[l.ortho_[a]] != a) {
            throw Error(ErrorCode::OrthoNotInvolution,
                        "(" + nm[a] + "')' = " + nm[l.ortho_[l.ortho_[a]]] + " differs from " + nm[a], {nm[a]});
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = l.below_[a].find_first(); b != ElementSet::npos; b = l.below_[a].find_next(b)) {
            // b <= a must give a' <= b'
            if (!l.below_[l.ortho_[b]].test(l.ortho_[a])) {
                throw Error(ErrorCode::OrthoNotAntitone,
                            nm[b] + " <= " + nm[a] + " but " + nm[l.ortho_[a]] + " is not below " + nm[l.ortho_[b]],
                            {nm[b], nm[a]});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        ElementId e = FiniteOml::id(a), c = l.ortho(e);
        if (l.join(e, c) != l.top_ || l.meet(e, c) != l.bottom_) {
            throw Error(ErrorCode::ComplementNotUnique, nm[l.ortho_[a]] + " is not a complement of " + nm[a], {nm[a]});
        }
    }

    // Orthomodular law: a <= b implies b = a ∨ (a' ∧ b).
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = l.below_[b].find_first(); a != ElementSet::npos; a = l.below_[b].find_next(a)) {
            ElementId ea = FiniteOml::id(a), eb = FiniteOml::id(b);
            if (l.join(ea, l.meet(l.ortho(ea), eb)) != eb) {
                throw Error(ErrorCode::OrthomodularLawViolated,
                            "law fails for " + nm[a] + " <= " + nm[b], {nm[a], nm[b]});
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (rank[i] == 2) l.atoms_.push_back(FiniteOml::id(i));
    }

    l.compat_.assign(n * n, 0);
    std::vector<ElementSet> adj(n, ElementSet(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            ElementId ea = FiniteOml::id(a), eb = FiniteOml::id(b);
            ElementId ab = l.meet(ea, eb);
            bool ok = l.join(ab, l.meet(ea, l.ortho(eb))) == ea && l.join(ab, l.meet(l.ortho(ea), eb)) == eb;
            if (ok) {
                l.compat_[a * n + b] = l.compat_[b * n + a] = 1;
                if (a != b) {
                    adj[a].set(b);
                    adj[b].set(a);
                }
            }
            if (l.leq(ea, l.ortho(eb))) l.orthogonal_pairs_.emplace_back(ea, eb);
        }
    }

    std::vector<ElementSet> cliques;
    ElementSet all(n);
    all.set();
    detail::maximal_cliques(adj, ElementSet(n), all, ElementSet(n), cliques);
    for (const ElementSet& clique : cliques) {
        Block block;
        for (std::size_t i = clique.find_first(); i != ElementSet::npos; i = clique.find_next(i)) {
            block.members.push_back(FiniteOml::id(i));
        }
        for (ElementId a : l.atoms_) {
            if (block.contains(a)) block.atoms.push_back(a);
        }
        l.blocks_.push_back(std::move(block));
    }
    std::sort(l.blocks_.begin(), l.blocks_.end(),
              [](const Block& x, const Block& y) { return x.members < y.members; });
    for (Block& block : l.blocks_) {
        verify_boolean_subalgebra(l, block.members);
        block.is_boolean = true;
    }
    return l;
}

/// Whether the lattice is distributive, by exhaustive check on all triples.
inline bool is_distributive(const FiniteOml& l) {
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            for (ElementId c : l.elements()) {
                if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) return false;
            }
        }
    }
    return true;
}

inline constexpr std::size_t kMaxBooleanAtoms = 10;

/// Powerset algebra on the given atoms. Elements are ordered by subset size,
/// then lexicographically by atom position. Non-atomic elements are named
/// "x'" for co-atoms and "x|y|..." otherwise.
inline FiniteOml boolean_algebra(std::span<const std::string> atom_names) {
    const std::size_t k = atom_names.size();
    if (k == 0) throw Error(ErrorCode::EmptyAtoms, "a Boolean algebra needs at least one atom");
    if (k > kMaxBooleanAtoms) {
        throw Error(ErrorCode::MalformedTables, "at most " + std::to_string(kMaxBooleanAtoms) + " atoms supported");
    }
    std::set<std::string> seen;
    for (const auto& a : atom_names) {
        if (a.empty() || a == "0" || a == "1") {
            throw Error(ErrorCode::ReservedName, "atom name \"" + a + "\" is reserved or empty", {a});
        }
        if (!seen.insert(a).second) throw Error(ErrorCode::DuplicateAtomName, "atom \"" + a + "\" repeats", {a});
    }

    const std::uint32_t full = (std::uint32_t{1} << k) - 1;
    std::vector<std::uint32_t> masks(full + 1);
    for (std::uint32_t m = 0; m <= full; ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
        int cx = __builtin_popcount(x), cy = __builtin_popcount(y);
        if (cx != cy) return cx < cy;
        // lexicographic by lowest set bit first
        for (std::uint32_t bit = 1; bit; bit <<= 1) {
            if ((x & bit) != (y & bit)) return (x & bit) != 0;
        }
        return false;
    });
    std::vector<std::size_t> position(full + 1);
    for (std::size_t i = 0; i < masks.size(); ++i) position[masks[i]] = i;

    auto name_of = [&](std::uint32_t m) -> std::string {
        if (m == 0) return "0";
        if (m == full) return "1";
        int c = __builtin_popcount(m);
        if (c == 1) return atom_names[static_cast<std::size_t>(__builtin_ctz(m))];
        if (static_cast<std::size_t>(c) + 1 == k) {
            return atom_names[static_cast<std::size_t>(__builtin_ctz(full & ~m))] + "'";
        }
        std::string out;
        for (std::size_t i = 0; i < k; ++i) {
            if (m & (std::uint32_t{1} << i)) {
                if (!out.empty()) out += "|";
                out += atom_names[i];
            }
        }
        return out;
    };

    RawOml raw;
    const std::size_t n = masks.size();
    raw.names.resize(n);
    raw.leq.assign(n, std::vector<bool>(n, false));
    raw.ortho.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        raw.names[i] = name_of(masks[i]);
        raw.ortho[i] = position[full & ~masks[i]];
        for (std::size_t j = 0; j < n; ++j) raw.leq[i][j] = (masks[i] & ~masks[j]) == 0;
    }
    return validate_oml(raw);
}

inline FiniteOml boolean_algebra(std::initializer_list<std::string> atom_names) {
    std::vector<std::string> v(atom_names);
    return boolean_algebra(std::span<const std::string>(v));
}

struct NamedBlockSpec {
    std::string name;
    std::vector<std::string> atoms;
    bool operator==(const NamedBlockSpec&) const = default;
};

/// Blocks of a horizontal sum given by atom names (globally unique).
struct HorizontalSumSpec {
    std::vector<NamedBlockSpec> blocks;
    bool operator==(const HorizontalSumSpec&) const = default;
};

/// Glues Boolean algebras at a shared bottom and top. Interior elements keep
/// their names; bottom and top are named "0" and "1".
inline FiniteOml horizontal_sum(std::span<const FiniteOml> parts) {
    if (parts.size() < 2) throw Error(ErrorCode::TooFewBlocks, "a horizontal sum needs at least two blocks");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].blocks().size() != 1) {
            throw Error(ErrorCode::BlockNotBoolean, "summand " + std::to_string(i) + " is not a Boolean algebra");
        }
        if (parts[i].atoms().size() < 2) {
            throw Error(ErrorCode::TrivialBlock, "summand " + std::to_string(i) + " has fewer than two atoms");
        }
    }

    RawOml raw;
    raw.names.push_back("0");
    struct Origin {
        std::size_t part;
        ElementId local;
    };
    std::vector<Origin> origin{{0, parts[0].bottom()}};
    std::vector<std::vector<std::size_t>> global(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) {
        global[p].assign(parts[p].size(), 0);
        for (ElementId e : parts[p].elements()) {
            if (e == parts[p].bottom() || e == parts[p].top()) continue;
            global[p][e.index] = raw.names.size();
            raw.names.push_back(parts[p].name(e));
            origin.push_back({p, e});
        }
    }
    const std::size_t top = raw.names.size();
    raw.names.push_back("1");
    origin.push_back({0, parts[0].top()});
    for (std::size_t p = 0; p < parts.size(); ++p) {
        global[p][parts[p].bottom().index] = 0;
        global[p][parts[p].top().index] = top;
    }

    const std::size_t n = raw.names.size();
    raw.leq.assign(n, std::vector<bool>(n, false));
    raw.ortho.assign(n, 0);
    raw.ortho[0] = top;
    raw.ortho[top] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        raw.leq[0][i] = true;
        raw.leq[i][top] = true;
    }
    for (std::size_t i = 1; i < top; ++i) {
        const Origin& oi = origin[i];
        raw.ortho[i] = global[oi.part][parts[oi.part].ortho(oi.local).index];
        for (std::size_t j = 1; j < top; ++j) {
            const Origin& oj = origin[j];
            raw.leq[i][j] = oi.part == oj.part && parts[oi.part].leq(oi.local, oj.local);
        }
    }
    return validate_oml(raw);
}

inline FiniteOml horizontal_sum(const HorizontalSumSpec& spec) {
    if (spec.blocks.size() < 2) throw Error(ErrorCode::TooFewBlocks, "a horizontal sum needs at least two blocks");
    std::set<std::string> seen;
    std::vector<FiniteOml> parts;
    for (const auto& block : spec.blocks) {
        if (block.atoms.size() < 2) {
            throw Error(ErrorCode::TrivialBlock, "block \"" + block.name + "\" needs at least two atoms", {block.name});
        }
        for (const auto& a : block.atoms) {
            if (!seen.insert(a).second) {
                throw Error(ErrorCode::DuplicateAtomName, "atom \"" + a + "\" appears in two blocks", {a});
            }
        }
        parts.push_back(boolean_algebra(std::span<const std::string>(block.atoms)));
    }
    return horizontal_sum(std::span<const FiniteOml>(parts));
}

struct HorizontalSumCheck {
    bool is_sum = false;
    // Set when two blocks share more than {0, 1}.
    std::optional<std::pair<std::size_t, std::size_t>> witness_blocks;
    std::vector<ElementId> intersection;
    std::string note;
};

inline HorizontalSumCheck is_horizontal_sum(const FiniteOml& l) {
    HorizontalSumCheck out;
    const auto& blocks = l.blocks();
    if (blocks.size() < 2) {
        out.note = "single block: a lone Boolean algebra is not treated as a horizontal sum";
        return out;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            std::vector<ElementId> common;
            std::set_intersection(blocks[i].members.begin(), blocks[i].members.end(), blocks[j].members.begin(),
                                  blocks[j].members.end(), std::back_inserter(common));
            if (common.size() != 2) {
                out.witness_blocks = {i, j};
                out.intersection = std::move(common);
                out.note = "blocks " + std::to_string(i) + " and " + std::to_string(j) + " share " +
                           l.format_set(out.intersection);
                return out;
            }
        }
    }
    out.is_sum = true;
    return out;
}

/// Every way to write `a` as a join of pairwise orthogonal atoms, one per
/// block containing `a`, duplicates removed.
inline std::vector<std::vector<ElementId>> atom_decompositions(const FiniteOml& l, ElementId a) {
    std::vector<std::vector<ElementId>> out;
    for (const Block& block : l.blocks()) {
        if (!block.contains(a)) continue;
        std::vector<ElementId> parts;
        for (ElementId atom : block.atoms) {
            if (l.leq(atom, a)) parts.push_back(atom);
        }
        if (std::find(out.begin(), out.end(), parts) == out.end()) out.push_back(std::move(parts));
    }
    return out;
}

/// Index of the first block containing `a`.
inline std::size_t first_block_of(const FiniteOml& l, ElementId a) {
    const auto& blocks = l.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].contains(a)) return i;
    }
    return 0;  // unreachable: blocks cover the lattice
}

}  // namespace omlprob

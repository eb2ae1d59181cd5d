#pragma once

// States (additive probability maps) on a finite orthomodular lattice.

#include "omlprob/error.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace omlprob {

using LatticeRef = std::shared_ptr<const FiniteOml>;

inline LatticeRef share(FiniteOml l) { return std::make_shared<const FiniteOml>(std::move(l)); }

class State;
State validate_state(const LatticeRef& lattice, std::vector<Rational> values);

/// Normalized map L -> [0,1], additive on orthogonal pairs.
class State {
public:
    const FiniteOml& lattice() const { return *lattice_; }
    const LatticeRef& lattice_ref() const { return lattice_; }
    const Rational& operator()(ElementId a) const { return values_.at(a.index); }
    const std::vector<Rational>& values() const { return values_; }

    friend bool operator==(const State& x, const State& y) { return x.values_ == y.values_; }

private:
    friend State validate_state(const LatticeRef& lattice, std::vector<Rational> values);
    State(LatticeRef lattice, std::vector<Rational> values) : lattice_(std::move(lattice)), values_(std::move(values)) {}

    LatticeRef lattice_;
    std::vector<Rational> values_;
};

/// Checks range, normalization and additivity over every orthogonal pair.
inline State validate_state(const LatticeRef& lattice, std::vector<Rational> values) {
    const FiniteOml& l = *lattice;
    if (values.size() != l.size()) {
        throw Error(ErrorCode::MalformedTables, "state needs one value per element");
    }
    for (ElementId a : l.elements()) {
        if (!in_unit_interval(values[a.index])) {
            throw Error(ErrorCode::OutOfRange, "m(" + l.name(a) + ") = " + to_string(values[a.index]) + " is outside [0,1]",
                        {l.name(a)});
        }
    }
    if (values[l.top().index] != 1) {
        throw Error(ErrorCode::NotNormalized, "m(1) = " + to_string(values[l.top().index]), {l.name(l.top())});
    }
    for (auto [u, v] : l.orthogonal_pairs()) {
        ElementId w = l.join(u, v);
        if (values[w.index] != values[u.index] + values[v.index]) {
            throw Error(ErrorCode::AdditivityViolated,
                        "m(" + l.name(u) + " v " + l.name(v) + ") = " + to_string(values[w.index]) + " but m(" +
                            l.name(u) + ") + m(" + l.name(v) + ") = " + to_string(values[u.index] + values[v.index]),
                        {l.name(u), l.name(v)});
        }
    }
    return State(lattice, std::move(values));
}

/// Name-keyed form. Bottom and top may be omitted and default to 0 and 1.
inline State validate_state(const LatticeRef& lattice, const std::map<std::string, Rational>& by_name) {
    const FiniteOml& l = *lattice;
    std::vector<std::optional<Rational>> slots(l.size());
    for (const auto& [name, value] : by_name) slots[l.at(name).index] = value;
    if (!slots[l.bottom().index]) slots[l.bottom().index] = Rational(0);
    if (!slots[l.top().index]) slots[l.top().index] = Rational(1);
    std::vector<Rational> values(l.size());
    for (ElementId a : l.elements()) {
        if (!slots[a.index]) throw Error(ErrorCode::MalformedTables, "no value for " + l.name(a), {l.name(a)});
        values[a.index] = *slots[a.index];
    }
    return validate_state(lattice, std::move(values));
}

/// Extends atom weights additively; every decomposition of an element must
/// give the same value.
inline State state_from_atom_weights(const LatticeRef& lattice, const std::map<ElementId, Rational>& weights) {
    const FiniteOml& l = *lattice;
    for (ElementId atom : l.atoms()) {
        if (!weights.contains(atom)) {
            throw Error(ErrorCode::MalformedTables, "no weight for atom " + l.name(atom), {l.name(atom)});
        }
    }
    std::vector<Rational> values(l.size());
    for (ElementId a : l.elements()) {
        auto decompositions = atom_decompositions(l, a);
        std::optional<Rational> first;
        for (const auto& d : decompositions) {
            Rational sum = 0;
            for (ElementId atom : d) sum += weights.at(atom);
            if (!first) {
                first = sum;
            } else if (*first != sum) {
                throw Error(ErrorCode::DecompositionMismatch,
                            "atom weights give " + l.name(a) + " both " + to_string(*first) + " and " + to_string(sum),
                            {l.name(a)});
            }
        }
        values[a.index] = first.value_or(Rational(0));
    }
    return validate_state(lattice, std::move(values));
}

/// Deterministic state with m(b) = 1: uniform over the atoms of `b` in its
/// first block, then, block by block, the remaining mass spread uniformly
/// over atoms not yet weighted (preferring atoms below `b` when the block
/// contains `b`). Returns nullopt when this construction yields no state.
inline std::optional<State> canonical_fallback_state(const LatticeRef& lattice, ElementId b) {
    const FiniteOml& l = *lattice;
    if (b == l.bottom()) return std::nullopt;
    const auto& blocks = l.blocks();
    const std::size_t first = first_block_of(l, b);
    std::vector<std::size_t> order{first};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i != first) order.push_back(i);
    }

    std::map<ElementId, Rational> weights;
    for (std::size_t bi : order) {
        const Block& block = blocks[bi];
        Rational assigned = 0;
        std::vector<ElementId> open, open_below;
        for (ElementId atom : block.atoms) {
            if (auto it = weights.find(atom); it != weights.end()) {
                assigned += it->second;
            } else {
                open.push_back(atom);
                if (l.leq(atom, b)) open_below.push_back(atom);
            }
        }
        Rational remaining = 1 - assigned;
        if (remaining < 0) return std::nullopt;
        const auto& targets = (block.contains(b) && !open_below.empty()) ? open_below : open;
        for (ElementId atom : open) weights[atom] = 0;
        if (targets.empty()) {
            if (remaining != 0) return std::nullopt;
            continue;
        }
        Rational share = remaining / Rational(static_cast<long>(targets.size()));
        for (ElementId atom : targets) weights[atom] = share;
    }
    try {
        State m = state_from_atom_weights(lattice, weights);
        if (m(b) != 1) return std::nullopt;
        return m;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace omlprob

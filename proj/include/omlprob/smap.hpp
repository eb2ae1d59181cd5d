#pragma once

// Bivariate states (s-maps), conditional states and the causality
// classification of an s-map.

#include "omlprob/error.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/state.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace omlprob {

class SMap;
SMap validate_smap(const LatticeRef& lattice, std::vector<Rational> table);

/// p(a, b) over L x L, stored row-major. Always validated.
class SMap {
public:
    const FiniteOml& lattice() const { return *lattice_; }
    const LatticeRef& lattice_ref() const { return lattice_; }
    const Rational& operator()(ElementId a, ElementId b) const { return table_[a.index * lattice_->size() + b.index]; }
    const std::vector<Rational>& table() const { return table_; }

    friend bool operator==(const SMap& x, const SMap& y) { return x.table_ == y.table_; }

private:
    friend SMap validate_smap(const LatticeRef& lattice, std::vector<Rational> table);
    SMap(LatticeRef lattice, std::vector<Rational> table) : lattice_(std::move(lattice)), table_(std::move(table)) {}

    LatticeRef lattice_;
    std::vector<Rational> table_;
};

/// Verifies s1 (p(1,1) = 1), s2 (zero on orthogonal pairs), s3 (additive in
/// each argument over orthogonal joins) and p2 (p(a,b) <= p(a,a)).
inline SMap validate_smap(const LatticeRef& lattice, std::vector<Rational> table) {
    const FiniteOml& l = *lattice;
    const std::size_t n = l.size();
    if (table.size() != n * n) throw Error(ErrorCode::MalformedTables, "s-map table must be |L| x |L|");
    auto p = [&](ElementId a, ElementId b) -> const Rational& { return table[a.index * n + b.index]; };
    auto pair_names = [&](ElementId a, ElementId b) { return std::vector<std::string>{l.name(a), l.name(b)}; };
    auto show = [&](ElementId a, ElementId b) { return "p(" + l.name(a) + ", " + l.name(b) + ")"; };

    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            if (!in_unit_interval(p(a, b))) {
                throw Error(ErrorCode::OutOfRange, show(a, b) + " = " + to_string(p(a, b)) + " is outside [0,1]",
                            pair_names(a, b));
            }
        }
    }
    if (p(l.top(), l.top()) != 1) {
        throw Error(ErrorCode::S1Violated, "p(1, 1) = " + to_string(p(l.top(), l.top())), pair_names(l.top(), l.top()));
    }
    for (auto [u, v] : l.orthogonal_pairs()) {
        if (p(u, v) != 0 || p(v, u) != 0) {
            ElementId x = p(u, v) != 0 ? u : v, y = p(u, v) != 0 ? v : u;
            throw Error(ErrorCode::S2Violated,
                        l.name(x) + " is orthogonal to " + l.name(y) + " but " + show(x, y) + " = " + to_string(p(x, y)),
                        pair_names(x, y));
        }
    }
    for (auto [u, v] : l.orthogonal_pairs()) {
        ElementId w = l.join(u, v);
        for (ElementId b : l.elements()) {
            if (p(w, b) != p(u, b) + p(v, b)) {
                throw Error(ErrorCode::S3Violated,
                            show(w, b) + " = " + to_string(p(w, b)) + " differs from " + show(u, b) + " + " + show(v, b) +
                                " = " + to_string(p(u, b) + p(v, b)),
                            {l.name(u), l.name(v), l.name(b)});
            }
            if (p(b, w) != p(b, u) + p(b, v)) {
                throw Error(ErrorCode::S3Violated,
                            show(b, w) + " = " + to_string(p(b, w)) + " differs from " + show(b, u) + " + " + show(b, v) +
                                " = " + to_string(p(b, u) + p(b, v)),
                            {l.name(b), l.name(u), l.name(v)});
            }
        }
    }
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            if (p(a, b) > p(a, a)) {
                throw Error(ErrorCode::P2Violated, show(a, b) + " exceeds " + show(a, a), pair_names(a, b));
            }
        }
    }
    return SMap(lattice, std::move(table));
}

/// Builds the full table from values on atom pairs by summing over atom
/// decompositions; alternative decompositions of one element must agree.
/// `marginal`, when given, must match the atom diagonal.
inline SMap extend_smap_from_atom_table(const LatticeRef& lattice,
                                        const std::map<std::pair<ElementId, ElementId>, Rational>& atom_pairs,
                                        const std::map<ElementId, Rational>& marginal = {}) {
    const FiniteOml& l = *lattice;
    const auto& atoms = l.atoms();
    const std::size_t n = l.size();
    for (ElementId i : atoms) {
        for (ElementId j : atoms) {
            if (!atom_pairs.contains({i, j})) {
                throw Error(ErrorCode::MissingAtomPair, "no value for atom pair (" + l.name(i) + ", " + l.name(j) + ")",
                            {l.name(i), l.name(j)});
            }
        }
    }
    for (const auto& [atom, value] : marginal) {
        if (!l.is_atom(atom)) {
            throw Error(ErrorCode::MalformedTables, "marginal given for non-atom " + l.name(atom), {l.name(atom)});
        }
        if (atom_pairs.at({atom, atom}) != value) {
            throw Error(ErrorCode::DecompositionMismatch,
                        "marginal of " + l.name(atom) + " is " + to_string(value) + " but the diagonal entry is " +
                            to_string(atom_pairs.at({atom, atom})),
                        {l.name(atom)});
        }
    }

    std::vector<std::vector<std::vector<ElementId>>> decomp(n);
    for (ElementId a : l.elements()) decomp[a.index] = atom_decompositions(l, a);

    // Rows first: p(x, atom) for every element x and atom column.
    std::map<std::pair<std::uint32_t, ElementId>, Rational> row;
    for (ElementId x : l.elements()) {
        for (ElementId col : atoms) {
            std::optional<Rational> value;
            for (const auto& d : decomp[x.index]) {
                Rational sum = 0;
                for (ElementId i : d) sum += atom_pairs.at({i, col});
                if (!value) {
                    value = sum;
                } else if (*value != sum) {
                    throw Error(ErrorCode::DecompositionMismatch,
                                "decompositions of " + l.name(x) + " disagree against column " + l.name(col) + ": " +
                                    to_string(*value) + " vs " + to_string(sum),
                                {l.name(x), l.name(col)});
                }
            }
            row[{x.index, col}] = value.value_or(Rational(0));
        }
    }
    std::vector<Rational> table(n * n);
    for (ElementId x : l.elements()) {
        for (ElementId y : l.elements()) {
            std::optional<Rational> value;
            for (const auto& d : decomp[y.index]) {
                Rational sum = 0;
                for (ElementId j : d) sum += row.at({x.index, j});
                if (!value) {
                    value = sum;
                } else if (*value != sum) {
                    throw Error(ErrorCode::DecompositionMismatch,
                                "decompositions of " + l.name(y) + " disagree against row " + l.name(x) + ": " +
                                    to_string(*value) + " vs " + to_string(sum),
                                {l.name(y), l.name(x)});
                }
            }
            table[x.index * n + y.index] = value.value_or(Rational(0));
        }
    }
    return validate_smap(lattice, std::move(table));
}

/// mu_p(a) = p(a, a); also p(a, 1) = p(1, a) = mu_p(a) on a validated s-map.
inline State mu(const SMap& p) {
    const FiniteOml& l = p.lattice();
    std::vector<Rational> values(l.size());
    for (ElementId a : l.elements()) {
        values[a.index] = p(a, a);
        if (p(a, l.top()) != values[a.index] || p(l.top(), a) != values[a.index]) {
            throw Error(ErrorCode::S3Violated, "marginal identity fails at " + l.name(a), {l.name(a)});
        }
    }
    return validate_state(p.lattice_ref(), std::move(values));
}

// ---------------------------------------------------------------------------
// Conditional states

class ConditionalState;
ConditionalState validate_conditional(const LatticeRef& lattice, std::vector<Rational> table,
                                      std::vector<ElementId> fallback_used = {});

/// f(a | b) for b in L0 = L \ {0}. The bottom column is unused.
class ConditionalState {
public:
    const FiniteOml& lattice() const { return *lattice_; }
    const LatticeRef& lattice_ref() const { return lattice_; }

    const Rational& operator()(ElementId a, ElementId given) const {
        if (given == lattice_->bottom()) {
            throw Error(ErrorCode::UnknownElement, "conditioning on the bottom element is undefined", {"0"});
        }
        return table_[a.index * lattice_->size() + given.index];
    }

    /// Conditioners b with mu_p(b) = 0 whose column came from a fallback state.
    const std::vector<ElementId>& fallback_used() const { return fallback_used_; }
    const std::vector<Rational>& table() const { return table_; }

private:
    friend ConditionalState validate_conditional(const LatticeRef&, std::vector<Rational>, std::vector<ElementId>);
    ConditionalState(LatticeRef lattice, std::vector<Rational> table, std::vector<ElementId> fallback)
        : lattice_(std::move(lattice)), table_(std::move(table)), fallback_used_(std::move(fallback)) {}

    LatticeRef lattice_;
    std::vector<Rational> table_;
    std::vector<ElementId> fallback_used_;
};

/// Checks c1 (each column is a state), c2 (f(b|b) = 1) and c3 (mixture law
/// over orthogonal conditioners; pairwise suffices in the finite case).
inline ConditionalState validate_conditional(const LatticeRef& lattice, std::vector<Rational> table,
                                             std::vector<ElementId> fallback_used) {
    const FiniteOml& l = *lattice;
    const std::size_t n = l.size();
    if (table.size() != n * n) throw Error(ErrorCode::MalformedTables, "conditional table must be |L| x |L|");
    auto f = [&](ElementId a, ElementId b) -> const Rational& { return table[a.index * n + b.index]; };

    for (ElementId b : l.elements()) {
        if (b == l.bottom()) {
            for (ElementId a : l.elements()) table[a.index * n + b.index] = 0;
            continue;
        }
        std::vector<Rational> column(n);
        for (ElementId a : l.elements()) column[a.index] = f(a, b);
        try {
            validate_state(lattice, std::move(column));
        } catch (const Error& e) {
            throw Error(ErrorCode::C1Violated, "f(.|" + l.name(b) + ") is not a state (" + e.what() + ")", {l.name(b)});
        }
        if (f(b, b) != 1) {
            throw Error(ErrorCode::C2Violated, "f(" + l.name(b) + "|" + l.name(b) + ") = " + to_string(f(b, b)),
                        {l.name(b)});
        }
    }
    for (auto [u, v] : l.orthogonal_pairs()) {
        if (u == l.bottom() || v == l.bottom()) continue;
        ElementId w = l.join(u, v);
        for (ElementId x : l.elements()) {
            Rational mix = f(x, u) * f(u, w) + f(x, v) * f(v, w);
            if (f(x, w) != mix) {
                throw Error(ErrorCode::C3Violated,
                            "f(" + l.name(x) + "|" + l.name(w) + ") = " + to_string(f(x, w)) + " but the mixture over " +
                                l.name(u) + ", " + l.name(v) + " gives " + to_string(mix),
                            {l.name(x), l.name(u), l.name(v)});
            }
        }
    }
    return ConditionalState(lattice, std::move(table), std::move(fallback_used));
}

/// f_p(a|b) = p(a,b) / p(b,b) where p(b,b) > 0, otherwise m_b(a) for the
/// supplied fallback state or the canonical one.
inline ConditionalState conditional_from_smap(const SMap& p, const std::map<ElementId, State>& fallback = {}) {
    const FiniteOml& l = p.lattice();
    const std::size_t n = l.size();
    std::vector<Rational> table(n * n);
    std::vector<ElementId> used;
    for (ElementId b : l.elements()) {
        if (b == l.bottom()) continue;
        const Rational& mass = p(b, b);
        if (mass != 0) {
            for (ElementId a : l.elements()) table[a.index * n + b.index] = p(a, b) / mass;
            continue;
        }
        std::optional<State> m_b;
        if (auto it = fallback.find(b); it != fallback.end()) {
            if (it->second(b) != 1) {
                throw Error(ErrorCode::NoFallbackState, "supplied fallback state for " + l.name(b) + " has m(b) != 1",
                            {l.name(b)});
            }
            m_b = it->second;
        } else {
            m_b = canonical_fallback_state(p.lattice_ref(), b);
        }
        if (!m_b) {
            throw Error(ErrorCode::NoFallbackState,
                        "mu_p(" + l.name(b) + ") = 0 and no state with m(" + l.name(b) + ") = 1 was found", {l.name(b)});
        }
        for (ElementId a : l.elements()) table[a.index * n + b.index] = (*m_b)(a);
        used.push_back(b);
    }
    return validate_conditional(p.lattice_ref(), std::move(table), std::move(used));
}

/// p(a, b) = f(a|b) f(b|1), with p(a, 0) = 0.
inline SMap smap_from_conditional(const ConditionalState& f) {
    const FiniteOml& l = f.lattice();
    const std::size_t n = l.size();
    std::vector<Rational> table(n * n);
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            if (b == l.bottom()) continue;
            table[a.index * n + b.index] = f(a, b) * f(b, l.top());
        }
    }
    return validate_smap(f.lattice_ref(), std::move(table));
}

// ---------------------------------------------------------------------------
// Independence and causality

enum class Independence { Independent, Dependent, Indeterminate };

inline std::string_view to_string(Independence v) {
    switch (v) {
        case Independence::Independent: return "independent";
        case Independence::Dependent: return "dependent";
        case Independence::Indeterminate: return "indeterminate (fallback-dependent)";
    }
    return "";
}

struct IndependenceResult {
    Independence verdict = Independence::Indeterminate;
    Rational lhs;  // p(b, a)
    Rational rhs;  // p(b, b) p(a, a)
};

/// "b is independent of a": p(b,a) = p(b,b) p(a,a). With mu_p(a) = 0 the
/// answer depends on the fallback state and is reported as indeterminate.
inline IndependenceResult is_independent(const SMap& p, ElementId b, ElementId a) {
    IndependenceResult r;
    r.lhs = p(b, a);
    r.rhs = p(b, b) * p(a, a);
    if (p(a, a) == 0) {
        r.verdict = Independence::Indeterminate;
    } else {
        r.verdict = r.lhs == r.rhs ? Independence::Independent : Independence::Dependent;
    }
    return r;
}

enum class Causality { Symmetric, Causal, StronglyCausal };

inline std::string_view to_string(Causality c) {
    switch (c) {
        case Causality::Symmetric: return "symmetric";
        case Causality::Causal: return "causal";
        case Causality::StronglyCausal: return "strongly_causal";
    }
    return "";
}

struct CausalWitness {
    ElementId a, b;
    Rational p_ab, p_ba;
};

/// `dependent` depends on `on`, while `on` is independent of `dependent`.
struct DependenceWitness {
    ElementId dependent, on;
    Rational dependent_lhs, dependent_rhs;      // p(dependent, on) vs mu(dependent) mu(on)
    Rational independent_lhs, independent_rhs;  // p(on, dependent) vs mu(on) mu(dependent)
};

struct CausalityReport {
    Causality classification = Causality::Symmetric;
    std::vector<CausalWitness> causal_witnesses;
    std::vector<DependenceWitness> dependence_witnesses;
    std::vector<std::pair<ElementId, ElementId>> jauch_piron_notes;
    std::size_t ordered_pairs_scanned = 0;
    std::size_t indeterminate_pairs = 0;
};

/// Exhaustive scan over ordered pairs; bottom and top are left out of the
/// witness lists since pairs involving them are always symmetric and
/// independent.
inline CausalityReport classify_causality(const SMap& p) {
    const FiniteOml& l = p.lattice();
    CausalityReport report;
    auto interior = [&](ElementId e) { return e != l.bottom() && e != l.top(); };
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            ++report.ordered_pairs_scanned;
            if (a == b || !interior(a) || !interior(b)) continue;
            if (a < b && p(a, b) != p(b, a)) report.causal_witnesses.push_back({a, b, p(a, b), p(b, a)});
            IndependenceResult a_on_b = is_independent(p, a, b);
            IndependenceResult b_on_a = is_independent(p, b, a);
            if (a_on_b.verdict == Independence::Indeterminate || b_on_a.verdict == Independence::Indeterminate) {
                ++report.indeterminate_pairs;
                continue;
            }
            if (a_on_b.verdict == Independence::Dependent && b_on_a.verdict == Independence::Independent) {
                report.dependence_witnesses.push_back({a, b, a_on_b.lhs, a_on_b.rhs, b_on_a.lhs, b_on_a.rhs});
            }
        }
    }
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            if (a < b && p(a, a) == 1 && p(b, b) == 1) report.jauch_piron_notes.emplace_back(a, b);
        }
    }
    if (report.causal_witnesses.empty()) {
        report.classification = Causality::Symmetric;
    } else if (!report.dependence_witnesses.empty()) {
        report.classification = Causality::StronglyCausal;
    } else {
        report.classification = Causality::Causal;
    }
    return report;
}

struct PropertyCheck {
    explicit PropertyCheck(std::string n) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::string witness;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
};

/// Checks p1-p4, the marginal identity and the Jauch-Piron property. Never
/// throws on a failed property; failures carry a witness.
inline PropertyReport check_properties(const SMap& p) {
    const FiniteOml& l = p.lattice();
    const ElementId top = l.top();
    auto pn = [&](ElementId a, ElementId b) { return "(" + l.name(a) + ", " + l.name(b) + ")"; };
    PropertyReport report;

    PropertyCheck marginal{"marginal p(a,1) = p(1,a) = p(a,a)"};
    for (ElementId a : l.elements()) {
        ++marginal.cases;
        if (marginal.passed && (p(a, top) != p(a, a) || p(top, a) != p(a, a))) {
            marginal.passed = false;
            marginal.witness = l.name(a);
        }
    }
    report.checks.push_back(marginal);

    PropertyCheck p1{"p1 mu_p is a state"};
    p1.cases = 1;
    try {
        mu(p);
    } catch (const Error& e) {
        p1.passed = false;
        p1.witness = e.what();
    }
    report.checks.push_back(p1);

    PropertyCheck p2{"p2 p(a,b) <= p(a,a)"};
    PropertyCheck p3{"p3 compatible a,b: p(a,b) = mu_p(a^b)"};
    PropertyCheck p4{"p4 f_p(b|1) = f_p(b|a) iff p(b,a) = p(b,b)p(a,a)"};
    for (ElementId a : l.elements()) {
        for (ElementId b : l.elements()) {
            ++p2.cases;
            if (p2.passed && p(a, b) > p(a, a)) {
                p2.passed = false;
                p2.witness = pn(a, b);
            }
            if (l.is_compatible(a, b)) {
                ++p3.cases;
                ElementId m = l.meet(a, b);
                if (p3.passed && p(a, b) != p(m, m)) {
                    p3.passed = false;
                    p3.witness = pn(a, b);
                }
            }
            // p4 with conditioner a, mu_p(a) > 0
            if (p(a, a) != 0) {
                ++p4.cases;
                Rational prior = p(b, top);
                Rational posterior = p(b, a) / p(a, a);
                bool conditional_form = prior == posterior;
                bool product_form = p(b, a) == p(b, b) * p(a, a);
                if (p4.passed && conditional_form != product_form) {
                    p4.passed = false;
                    p4.witness = pn(b, a);
                }
            }
        }
    }
    report.checks.push_back(p2);
    report.checks.push_back(p3);
    report.checks.push_back(p4);

    PropertyCheck jp{"Jauch-Piron mu(a) = mu(b) = 1 => p(a,b) = p(b,a) = 1, p(a,c) = p(c,a)"};
    for (ElementId a : l.elements()) {
        if (p(a, a) != 1) continue;
        for (ElementId b : l.elements()) {
            if (p(b, b) != 1) continue;
            ++jp.cases;
            if (jp.passed && (p(a, b) != 1 || p(b, a) != 1)) {
                jp.passed = false;
                jp.witness = pn(a, b);
            }
        }
        for (ElementId c : l.elements()) {
            if (jp.passed && p(a, c) != p(c, a)) {
                jp.passed = false;
                jp.witness = pn(a, c);
            }
        }
    }
    report.checks.push_back(jp);
    return report;
}

}  // namespace omlprob

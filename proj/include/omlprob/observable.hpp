#pragma once

// Finite-spectrum observables, their ranges, expectations, conditional
// expectation onto Boolean subalgebras and the summability operator.

#include "omlprob/error.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"
#include "omlprob/state.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace omlprob {

struct SupportPoint {
    Rational value;
    ElementId element;

    friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

class Observable;
Observable validate_observable(const LatticeRef& lattice, std::vector<SupportPoint> support);

/// Spectrum values mapped to pairwise orthogonal, non-zero elements joining
/// to top, sorted by value.
class Observable {
public:
    const FiniteOml& lattice() const { return *lattice_; }
    const LatticeRef& lattice_ref() const { return lattice_; }
    const std::vector<SupportPoint>& support() const { return support_; }

    friend bool operator==(const Observable& x, const Observable& y) { return x.support_ == y.support_; }

private:
    friend Observable validate_observable(const LatticeRef&, std::vector<SupportPoint>);
    Observable(LatticeRef lattice, std::vector<SupportPoint> support)
        : lattice_(std::move(lattice)), support_(std::move(support)) {}

    LatticeRef lattice_;
    std::vector<SupportPoint> support_;
};

/// Entries whose element is bottom carry no mass and are dropped.
inline Observable validate_observable(const LatticeRef& lattice, std::vector<SupportPoint> support) {
    const FiniteOml& l = *lattice;
    if (support.empty()) throw Error(ErrorCode::MalformedTables, "observable has an empty support");
    std::sort(support.begin(), support.end(), [](const SupportPoint& a, const SupportPoint& b) { return a.value < b.value; });
    for (std::size_t i = 1; i < support.size(); ++i) {
        if (support[i].value == support[i - 1].value) {
            throw Error(ErrorCode::DuplicateSpectrumValue, "spectrum value " + to_string(support[i].value) + " repeats",
                        {to_string(support[i].value)});
        }
    }
    for (const auto& s : support) {
        if (s.element.index >= l.size()) throw Error(ErrorCode::UnknownElement, "support element out of range");
    }
    std::erase_if(support, [&](const SupportPoint& s) { return s.element == l.bottom(); });
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            if (!l.is_orthogonal(support[i].element, support[j].element)) {
                throw Error(ErrorCode::NotOrthogonal,
                            l.name(support[i].element) + " and " + l.name(support[j].element) + " are not orthogonal",
                            {l.name(support[i].element), l.name(support[j].element)});
            }
        }
    }
    ElementId total = l.bottom();
    for (const auto& s : support) total = l.join(total, s.element);
    if (total != l.top()) {
        throw Error(ErrorCode::JoinNotTop, "support elements join to " + l.name(total) + ", not 1", {l.name(total)});
    }
    return Observable(lattice, std::move(support));
}

inline Observable validate_observable(const LatticeRef& lattice,
                                      const std::vector<std::pair<Rational, std::string>>& by_name) {
    std::vector<SupportPoint> support;
    for (const auto& [value, name] : by_name) support.push_back({value, lattice->at(name)});
    return validate_observable(lattice, std::move(support));
}

/// Two-point observable: 1 on `a`, 0 on a'.
inline Observable indicator(const LatticeRef& lattice, ElementId a) {
    if (a == lattice->top()) return validate_observable(lattice, {{Rational(1), a}});
    if (a == lattice->bottom()) return validate_observable(lattice, {{Rational(0), lattice->top()}});
    return validate_observable(lattice, {{Rational(1), a}, {Rational(0), lattice->ortho(a)}});
}

inline Observable constant(const LatticeRef& lattice, const Rational& c) {
    return validate_observable(lattice, {{c, lattice->top()}});
}

/// A Boolean subalgebra of L together with its atoms.
struct RangeAlgebra {
    std::vector<ElementId> elements;  // sorted
    std::vector<ElementId> atoms;     // sorted

    bool contains(ElementId e) const { return std::binary_search(elements.begin(), elements.end(), e); }
    bool is_subset_of(const RangeAlgebra& other) const {
        return std::includes(other.elements.begin(), other.elements.end(), elements.begin(), elements.end());
    }
};

/// Closes `generators` under meet, join and complement and checks the
/// result is Boolean (NotBoolean otherwise).
inline RangeAlgebra subalgebra(const FiniteOml& l, std::span<const ElementId> generators) {
    std::set<ElementId> members{l.bottom(), l.top()};
    members.insert(generators.begin(), generators.end());
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<ElementId> snapshot(members.begin(), members.end());
        for (ElementId a : snapshot) {
            grew |= members.insert(l.ortho(a)).second;
            for (ElementId b : snapshot) {
                grew |= members.insert(l.meet(a, b)).second;
                grew |= members.insert(l.join(a, b)).second;
            }
        }
    }
    RangeAlgebra out;
    out.elements.assign(members.begin(), members.end());
    try {
        verify_boolean_subalgebra(l, out.elements);
    } catch (const Error& e) {
        throw Error(ErrorCode::NotBoolean, std::string("generated subalgebra is not Boolean: ") + e.what(), e.witness());
    }
    for (ElementId e : out.elements) {
        if (e == l.bottom()) continue;
        bool minimal = true;
        for (ElementId f : out.elements) {
            if (f != l.bottom() && f != e && l.leq(f, e)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.atoms.push_back(e);
    }
    return out;
}

inline std::vector<Rational> spectrum(const Observable& x) {
    std::vector<Rational> out;
    for (const auto& s : x.support()) out.push_back(s.value);
    return out;
}

/// Joins of all subsets of the support.
inline RangeAlgebra range(const Observable& x) {
    const FiniteOml& l = x.lattice();
    const auto& support = x.support();
    std::set<ElementId> members{l.bottom()};
    for (const auto& s : support) {
        std::vector<ElementId> grown;
        for (ElementId m : members) grown.push_back(l.join(m, s.element));
        members.insert(grown.begin(), grown.end());
    }
    RangeAlgebra out;
    out.elements.assign(members.begin(), members.end());
    for (const auto& s : support) out.atoms.push_back(s.element);
    std::sort(out.atoms.begin(), out.atoms.end());
    return out;
}

inline bool observables_compatible(const Observable& x, const Observable& y) {
    const FiniteOml& l = x.lattice();
    for (const auto& s : x.support()) {
        for (const auto& t : y.support()) {
            if (!l.is_compatible(s.element, t.element)) return false;
        }
    }
    return true;
}

inline std::map<Rational, Rational> distribution(const State& m, const Observable& x) {
    std::map<Rational, Rational> out;
    for (const auto& s : x.support()) out[s.value] = m(s.element);
    return out;
}

inline Rational expectation(const State& m, const Observable& x) {
    Rational sum = 0;
    for (const auto& s : x.support()) sum += s.value * m(s.element);
    return sum;
}

/// E_p(x) = sum of value * mu_p(element).
inline Rational expectation(const SMap& p, const Observable& x) {
    Rational sum = 0;
    for (const auto& s : x.support()) sum += s.value * p(s.element, s.element);
    return sum;
}

/// Result of a projection onto a Boolean subalgebra. `fallback_atoms` lists
/// conditioning atoms with mu_p = 0 that were handled by the fallback state.
struct Projection {
    Observable value;
    std::vector<ElementId> fallback_atoms;
};

namespace detail {

/// Builds an observable from (value, atom) pairs, joining atoms that share a
/// value.
inline Observable merge_by_value(const LatticeRef& lattice, const std::vector<std::pair<Rational, ElementId>>& points) {
    std::map<Rational, ElementId> merged;
    for (const auto& [value, atom] : points) {
        auto [it, inserted] = merged.emplace(value, atom);
        if (!inserted) it->second = lattice->join(it->second, atom);
    }
    std::vector<SupportPoint> support;
    for (const auto& [value, element] : merged) support.push_back({value, element});
    return validate_observable(lattice, std::move(support));
}

/// E_p(x | a) for a single conditioning element.
inline Rational conditional_mean(const SMap& p, const Observable& x, ElementId a, bool& used_fallback) {
    const FiniteOml& l = p.lattice();
    Rational mass = p(a, a);
    Rational sum = 0;
    if (mass != 0) {
        used_fallback = false;
        for (const auto& s : x.support()) sum += s.value * p(s.element, a);
        return sum / mass;
    }
    std::optional<State> m = canonical_fallback_state(p.lattice_ref(), a);
    if (!m) {
        throw Error(ErrorCode::ZeroMassConditioner, "mu_p(" + l.name(a) + ") = 0 and no fallback state exists",
                    {l.name(a)});
    }
    used_fallback = true;
    for (const auto& s : x.support()) sum += s.value * (*m)(s.element);
    return sum;
}

}  // namespace detail

/// z = E_p(x | B): value E_p(x|a) on every atom a of B, equal values merged.
inline Projection conditional_expectation(const SMap& p, const Observable& x, const RangeAlgebra& b) {
    std::vector<std::pair<Rational, ElementId>> points;
    std::vector<ElementId> fallback;
    for (ElementId atom : b.atoms) {
        bool used = false;
        points.emplace_back(detail::conditional_mean(p, x, atom, used), atom);
        if (used) fallback.push_back(atom);
    }
    return {detail::merge_by_value(p.lattice_ref(), points), std::move(fallback)};
}

/// oplus_p(x, y) = E_p(x|y) + y, living in R(y).
inline Projection oplus(const SMap& p, const Observable& x, const Observable& y) {
    std::vector<std::pair<Rational, ElementId>> points;
    std::vector<ElementId> fallback;
    for (const auto& s : y.support()) {
        bool used = false;
        Rational value = detail::conditional_mean(p, x, s.element, used) + s.value;
        points.emplace_back(value, s.element);
        if (used) fallback.push_back(s.element);
    }
    return {detail::merge_by_value(p.lattice_ref(), points), std::move(fallback)};
}

/// oplus_p^B(x, y) := E_p(x|B) + E_p(y|B), added atomwise inside B.
inline Projection oplus_subalgebra(const SMap& p, const Observable& x, const Observable& y, const RangeAlgebra& b) {
    std::vector<std::pair<Rational, ElementId>> points;
    std::vector<ElementId> fallback;
    for (ElementId atom : b.atoms) {
        bool ux = false, uy = false;
        Rational value = detail::conditional_mean(p, x, atom, ux) + detail::conditional_mean(p, y, atom, uy);
        points.emplace_back(value, atom);
        if (ux || uy) fallback.push_back(atom);
    }
    return {detail::merge_by_value(p.lattice_ref(), points), std::move(fallback)};
}

/// Classical sum of compatible observables over the common refinement.
inline Observable sum_compatible(const Observable& x, const Observable& y) {
    const FiniteOml& l = x.lattice();
    if (!observables_compatible(x, y)) throw Error(ErrorCode::NotCompatible, "observables are not compatible");
    std::vector<std::pair<Rational, ElementId>> points;
    for (const auto& s : x.support()) {
        for (const auto& t : y.support()) {
            ElementId cell = l.meet(s.element, t.element);
            if (cell != l.bottom()) points.emplace_back(s.value + t.value, cell);
        }
    }
    return detail::merge_by_value(x.lattice_ref(), points);
}

/// Checks e1-e4, d1 and the tower property for a pair of observables. `b`
/// defaults to R(y). The e2 and subalgebra e3 checks use oplus_subalgebra.
inline PropertyReport check_oplus_properties(const SMap& p, const Observable& x, const Observable& y,
                                             const std::optional<RangeAlgebra>& b = std::nullopt) {
    const RangeAlgebra sub = b ? *b : range(y);
    const Rational ex = expectation(p, x), ey = expectation(p, y);
    PropertyReport report;

    PropertyCheck e1{"e1 x<->y => oplus(x,y) <-> oplus(y,x)"};
    if (observables_compatible(x, y)) {
        e1.cases = 1;
        Observable xy = oplus(p, x, y).value, yx = oplus(p, y, x).value;
        if (!observables_compatible(xy, yx)) {
            e1.passed = false;
            e1.witness = "oplus(x,y) and oplus(y,x) are not compatible";
        }
    } else {
        e1.witness = "not applicable: x and y are not compatible";
    }
    report.checks.push_back(e1);

    PropertyCheck e2{"e2 oplus^B(x,y) = oplus^B(y,x) with oplus^B := E(x|B) + E(y|B)"};
    e2.cases = 1;
    if (oplus_subalgebra(p, x, y, sub).value != oplus_subalgebra(p, y, x, sub).value) {
        e2.passed = false;
        e2.witness = "subalgebra sums differ";
    }
    report.checks.push_back(e2);

    PropertyCheck e3{"e3 E(oplus(x,y)) = E(oplus^B(x,y)) = E(x) + E(y) with the same oplus^B"};
    e3.cases = 2;
    Rational lhs = expectation(p, oplus(p, x, y).value);
    Rational lhs_b = expectation(p, oplus_subalgebra(p, x, y, sub).value);
    if (lhs != ex + ey || lhs_b != ex + ey) {
        e3.passed = false;
        e3.witness = to_string(lhs) + ", " + to_string(lhs_b) + " vs " + to_string(Rational(ex + ey));
    }
    report.checks.push_back(e3);

    PropertyCheck e4{"e4 sum_ij (x_i + y_j) p(x_i, y_j) = E(x) + E(y)"};
    Rational double_sum = 0;
    for (const auto& s : x.support()) {
        for (const auto& t : y.support()) {
            ++e4.cases;
            double_sum += (s.value + t.value) * p(s.element, t.element);
        }
    }
    if (double_sum != ex + ey) {
        e4.passed = false;
        e4.witness = to_string(double_sum) + " vs " + to_string(Rational(ex + ey));
    }
    report.checks.push_back(e4);

    PropertyCheck d1{"d1 R(oplus(x,y)) within R(y)"};
    d1.cases = 1;
    if (!range(oplus(p, x, y).value).is_subset_of(range(y))) {
        d1.passed = false;
        d1.witness = "range escapes R(y)";
    }
    report.checks.push_back(d1);

    PropertyCheck tower{"tower E(E(x|B)) = E(x)"};
    tower.cases = 1;
    Projection z = conditional_expectation(p, x, sub);
    if (expectation(p, z.value) != ex) {
        tower.passed = false;
        tower.witness = to_string(expectation(p, z.value)) + " vs " + to_string(ex);
    }
    if (!range(z.value).is_subset_of(sub)) {
        tower.passed = false;
        tower.witness = "R(E(x|B)) escapes B";
    }
    report.checks.push_back(tower);
    return report;
}

}  // namespace omlprob

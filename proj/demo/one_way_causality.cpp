// Two binary variables measured in either order. Builds the s-map from an
// atom table, classifies it, and runs the exact Granger predicate across the
// two time stamps.

#include <omlprob/omlprob.hpp>

#include <iostream>

using namespace omlprob;

int main() {
    HorizontalSumSpec spec{{{"Y@t", {"b", "b'"}}, {"X@t1", {"a", "a'"}}}};
    ProcessLattice pl = process_lattice_from_named_blocks(spec);
    const FiniteOml& l = *pl.lattice;

    // rows = first argument
    const char* rows[4] = {"a", "a'", "b", "b'"};
    const char* values[4][4] = {{"3/10", "0", "1/5", "1/10"},
                                {"0", "7/10", "3/10", "2/5"},
                                {"3/20", "7/20", "1/2", "0"},
                                {"3/20", "7/20", "0", "1/2"}};
    std::map<std::pair<ElementId, ElementId>, Rational> table;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) table[{l.at(rows[i]), l.at(rows[j])}] = parse_rational(values[i][j]);
    }
    SMap p = extend_smap_from_atom_table(pl.lattice, table);

    CausalityReport report = classify_causality(p);
    std::cout << "classification: " << to_string(report.classification) << "\n";
    for (const auto& w : report.dependence_witnesses) {
        std::cout << "  " << l.name(w.dependent) << " depends on " << l.name(w.on) << ": p = " << w.dependent_lhs
                  << " vs " << w.dependent_rhs << ", reverse p = " << w.independent_lhs << "\n";
    }

    ConditionalState f = conditional_from_smap(p);
    std::cout << "f(a|b) = " << f(l.at("a"), l.at("b")) << ", mu(a) = " << mu(p)(l.at("a")) << "\n";

    for (auto [effect, cause] : {std::pair{"X@t1", "Y@t"}, std::pair{"Y@t", "X@t1"}}) {
        GrangerVerdict v = granger_causes(p, pl, parse_slot(effect), parse_slot(cause));
        std::cout << cause << " -> " << effect << ": " << (v.causes ? "causes" : "does not cause");
        if (!v.witnesses.empty()) std::cout << " (" << v.witnesses.size() << " witnesses)";
        std::cout << "\n";
        for (const auto& note : v.annotations) std::cout << "  note: " << note << "\n";
    }
}

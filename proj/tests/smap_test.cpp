#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace omlprob;
using testing_support::at;
using testing_support::atom_pairs;
using testing_support::l1;
using testing_support::l2;
using testing_support::p1;
using testing_support::p2;
using testing_support::R;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::MalformedTables;
}

std::vector<Rational> replaced(const SMap& p, const char* a, const char* b, const char* value) {
    std::vector<Rational> t = p.table();
    t[p.lattice().at(a).index * p.lattice().size() + p.lattice().at(b).index] = R(value);
    return t;
}

// L1 s-map with mu(a) = 1 and b, b' at 1/2 each.
SMap certain_a() {
    auto l = l1();
    testing_support::NamedPairs t = {{{"a", "a"}, "1"},   {{"a", "a'"}, "0"},   {{"a", "b"}, "1/2"},  {{"a", "b'"}, "1/2"},
                                     {{"a'", "a"}, "0"},  {{"a'", "a'"}, "0"},  {{"a'", "b"}, "0"},   {{"a'", "b'"}, "0"},
                                     {{"b", "a"}, "1/2"}, {{"b", "a'"}, "0"},   {{"b", "b"}, "1/2"},  {{"b", "b'"}, "0"},
                                     {{"b'", "a"}, "1/2"}, {{"b'", "a'"}, "0"}, {{"b'", "b"}, "0"},   {{"b'", "b'"}, "1/2"}};
    return extend_smap_from_atom_table(l, atom_pairs(*l, t));
}

}  // namespace

TEST(State, P1Marginal) {
    auto l = l1();
    State m = validate_state(l, std::map<std::string, Rational>{{"a", R("3/10")}, {"a'", R("7/10")}, {"b", R("1/2")}, {"b'", R("1/2")}});
    EXPECT_EQ(m(l->top()), 1);
    EXPECT_EQ(m(l->bottom()), 0);
}

TEST(State, UniformBlockState) {
    auto l = l2();
    State m = state_from_atom_weights(
        l, {{l->at("a"), R("1/3")}, {l->at("b"), R("1/3")}, {l->at("c"), R("1/3")}, {l->at("d"), R("1/3")}, {l->at("e"), R("1/3")}});
    EXPECT_EQ(m(l->at("c'")), R("2/3"));
    EXPECT_EQ(m(l->at("e'")), R("2/3"));
}

TEST(State, Violations) {
    auto l = l1();
    auto with = [&](std::map<std::string, Rational> v) { return [=] { validate_state(l, v); }; };
    EXPECT_EQ(code_of(with({{"a", R("3/10")}, {"a'", R("6/10")}, {"b", R("1/2")}, {"b'", R("1/2")}})),
              ErrorCode::AdditivityViolated);
    EXPECT_EQ(code_of(with({{"a", R("3/2")}, {"a'", R("-1/2")}, {"b", R("1/2")}, {"b'", R("1/2")}})), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of(with({{"1", R("9/10")}, {"a", R("3/10")}, {"a'", R("6/10")}, {"b", R("1/2")}, {"b'", R("2/5")}})),
              ErrorCode::NotNormalized);
    try {
        validate_state(l, std::map<std::string, Rational>{{"a", R("3/10")}, {"a'", R("6/10")}, {"b", R("1/2")}, {"b'", R("1/2")}});
    } catch (const Error& e) {
        std::set<std::string> w(e.witness().begin(), e.witness().end());
        EXPECT_TRUE(w.contains("a") && w.contains("a'"));
    }
}

TEST(State, AtomWeightsMustAgreeAcrossDecompositions) {
    auto l = l2();
    auto w = [&](const char* d) {
        return std::map<ElementId, Rational>{{l->at("a"), R("0.2")}, {l->at("b"), R("0.2")}, {l->at("c"), R("0.6")},
                                              {l->at("d"), R(d)},    {l->at("e"), R("0.1")}};
    };
    EXPECT_NO_THROW(state_from_atom_weights(l, w("0.3")));
    EXPECT_EQ(code_of([&] { state_from_atom_weights(l, w("0.5")); }), ErrorCode::DecompositionMismatch);
}

TEST(State, CanonicalFallback) {
    auto l = l1();
    auto m = canonical_fallback_state(l, l->at("b"));
    ASSERT_TRUE(m);
    EXPECT_EQ((*m)(l->at("b")), 1);
    EXPECT_EQ((*m)(l->at("b'")), 0);
    EXPECT_EQ((*m)(l->at("a")), R("1/2"));
    EXPECT_EQ((*m)(l->at("a'")), R("1/2"));

    auto k = l2();
    auto n = canonical_fallback_state(k, k->at("c'"));
    ASSERT_TRUE(n);
    EXPECT_EQ((*n)(k->at("c'")), 1);
    EXPECT_EQ((*n)(k->at("c")), 0);
    EXPECT_EQ((*n)(k->at("a")), R("1/2"));
    EXPECT_EQ((*n)(k->at("d")), R("1/2"));
}

TEST(SMap, P1Extension) {
    SMap p = p1();
    EXPECT_EQ(at(p, "a", "1"), R("3/10"));
    EXPECT_EQ(at(p, "1", "a"), R("3/10"));
    EXPECT_EQ(at(p, "a", "b"), R("1/5"));
    EXPECT_EQ(at(p, "b", "a"), R("3/20"));
    EXPECT_EQ(at(p, "a", "b'"), R("1/10"));
    EXPECT_EQ(at(p, "b'", "a"), R("3/20"));
    EXPECT_EQ(at(p, "a'", "b"), R("3/10"));
    EXPECT_EQ(at(p, "b", "a'"), R("7/20"));
    EXPECT_EQ(at(p, "a'", "b'"), R("2/5"));
    EXPECT_EQ(at(p, "b'", "a'"), R("7/20"));
    EXPECT_EQ(at(p, "1", "1"), 1);
    EXPECT_NO_THROW(validate_smap(p.lattice_ref(), p.table()));
    for (ElementId a : p.lattice().elements()) {
        EXPECT_EQ(p(a, p.lattice().top()), p(a, a));
        EXPECT_EQ(p(p.lattice().top(), a), p(a, a));
    }
}

TEST(SMap, P2Extension) {
    SMap p = p2();
    EXPECT_EQ(mu(p)(p.lattice().at("c")), R("2/5"));
    // column a through both decompositions of c'
    EXPECT_EQ(at(p, "a", "a") + at(p, "b", "a"), R("1/5"));
    EXPECT_EQ(at(p, "d", "a") + at(p, "e", "a"), R("1/5"));
    const std::map<std::string, const char*> row = {{"0", "0"},     {"1", "3/5"},   {"a", "1/5"},    {"a'", "2/5"},
                                                    {"b", "2/5"},   {"b'", "1/5"},  {"c", "0"},      {"c'", "3/5"},
                                                    {"d", "3/10"},  {"d'", "3/10"}, {"e", "3/10"},   {"e'", "3/10"}};
    for (const auto& [col, v] : row) EXPECT_EQ(at(p, "c'", col.c_str()), R(v)) << col;
    EXPECT_NO_THROW(validate_smap(p.lattice_ref(), p.table()));
}

TEST(SMap, ExtensionErrors) {
    auto l = l2();
    auto t = atom_pairs(*l, testing_support::p2_table());
    auto mutated = t;
    mutated[{l->at("e"), l->at("a")}] = R("1/10");
    EXPECT_EQ(code_of([&] { extend_smap_from_atom_table(l, mutated); }), ErrorCode::DecompositionMismatch);
    auto missing = t;
    missing.erase({l->at("b"), l->at("d")});
    EXPECT_EQ(code_of([&] { extend_smap_from_atom_table(l, missing); }), ErrorCode::MissingAtomPair);
    std::map<ElementId, Rational> marginal{{l->at("a"), R("1/4")}};
    EXPECT_EQ(code_of([&] { extend_smap_from_atom_table(l, t, marginal); }), ErrorCode::DecompositionMismatch);
}

TEST(SMap, AxiomViolations) {
    SMap p = p1();
    const auto& l = p.lattice_ref();
    EXPECT_EQ(code_of([&] { validate_smap(l, replaced(p, "a", "a'", "1/10")); }), ErrorCode::S2Violated);
    EXPECT_EQ(code_of([&] { validate_smap(l, replaced(p, "1", "1", "9/10")); }), ErrorCode::S1Violated);
    EXPECT_EQ(code_of([&] { validate_smap(l, replaced(p, "a", "b", "1/20")); }), ErrorCode::S3Violated);
    EXPECT_EQ(code_of([&] { validate_smap(l, replaced(p, "a", "b", "-1/5")); }), ErrorCode::OutOfRange);
    try {
        validate_smap(l, replaced(p, "a", "a'", "1/10"));
    } catch (const Error& e) {
        EXPECT_EQ(e.witness(), (std::vector<std::string>{"a", "a'"}));
    }
}

TEST(SMap, Marginal) {
    EXPECT_EQ(mu(p1())(p1().lattice().at("a")), R("3/10"));
    EXPECT_EQ(mu(p1())(p1().lattice().top()), 1);
}

TEST(Conditional, FromP1) {
    SMap p = p1();
    ConditionalState f = conditional_from_smap(p);
    const FiniteOml& l = p.lattice();
    EXPECT_EQ(f(l.at("a"), l.at("b")), R("2/5"));
    EXPECT_EQ(f(l.at("b"), l.at("a")), R("1/2"));
    EXPECT_EQ(f(l.at("b"), l.at("a")), f(l.at("b"), l.top()));
    for (ElementId b : l.elements()) {
        if (b != l.bottom()) EXPECT_EQ(f(b, b), 1);
    }
    EXPECT_TRUE(f.fallback_used().empty());
    EXPECT_THROW(f(l.at("a"), l.bottom()), Error);
}

TEST(Conditional, RoundTrip) {
    for (const SMap& p : {p1(), p2()}) {
        SMap back = smap_from_conditional(conditional_from_smap(p));
        for (ElementId a : p.lattice().elements()) {
            for (ElementId b : p.lattice().elements()) {
                if (p(b, b) != 0) EXPECT_EQ(back(a, b), p(a, b));
            }
        }
    }
    EXPECT_EQ(at(smap_from_conditional(conditional_from_smap(p1())), "a", "b"), R("1/5"));
}

TEST(Conditional, ZeroMassUsesFallback) {
    SMap p = certain_a();
    const FiniteOml& l = p.lattice();
    ConditionalState f = conditional_from_smap(p);
    ASSERT_EQ(f.fallback_used(), std::vector<ElementId>{l.at("a'")});
    EXPECT_EQ(f(l.at("a'"), l.at("a'")), 1);
    EXPECT_EQ(f(l.at("b"), l.at("a'")), R("1/2"));
}

TEST(Conditional, ProductFormIsNotAConditionalState) {
    // f(a|b) = m(a) fails c2 unless m(b) = 1
    auto l = share(boolean_algebra({"x", "y"}));
    std::vector<Rational> m = {R("0"), R("1/4"), R("3/4"), R("1")};
    std::vector<Rational> table(16);
    for (ElementId a : l->elements()) {
        for (ElementId b : l->elements()) table[a.index * 4 + b.index] = b == l->bottom() ? Rational(0) : m[a.index];
    }
    EXPECT_EQ(code_of([&] { validate_conditional(l, table); }), ErrorCode::C2Violated);
}

TEST(Independence, Examples) {
    SMap q1 = p1();
    const FiniteOml& l = q1.lattice();
    auto ba = is_independent(q1, l.at("b"), l.at("a"));
    EXPECT_EQ(ba.verdict, Independence::Independent);
    EXPECT_EQ(ba.lhs, R("3/20"));
    auto ab = is_independent(q1, l.at("a"), l.at("b"));
    EXPECT_EQ(ab.verdict, Independence::Dependent);
    EXPECT_EQ(ab.lhs, R("1/5"));
    EXPECT_EQ(ab.rhs, R("3/20"));

    SMap q2 = p2();
    auto ad = is_independent(q2, q2.lattice().at("a"), q2.lattice().at("d"));
    EXPECT_EQ(ad.verdict, Independence::Dependent);
    EXPECT_EQ(ad.lhs, R("1/5"));
    EXPECT_EQ(ad.rhs, R("3/50"));

    SMap z = certain_a();
    EXPECT_EQ(is_independent(z, z.lattice().at("b"), z.lattice().at("a'")).verdict, Independence::Indeterminate);
    EXPECT_EQ(to_string(Independence::Indeterminate), "indeterminate (fallback-dependent)");
}

TEST(Causality, P1IsStronglyCausal) {
    SMap p = p1();
    const FiniteOml& l = p.lattice();
    CausalityReport r = classify_causality(p);
    EXPECT_EQ(r.classification, Causality::StronglyCausal);
    std::set<std::pair<std::string, std::string>> causal, one_way;
    for (const auto& w : r.causal_witnesses) {
        causal.insert({l.name(w.a), l.name(w.b)});
        if (l.name(w.a) == "a" && l.name(w.b) == "b") {
            EXPECT_EQ(w.p_ab, R("1/5"));
            EXPECT_EQ(w.p_ba, R("3/20"));
        }
    }
    for (const auto& w : r.dependence_witnesses) one_way.insert({l.name(w.dependent), l.name(w.on)});
    const std::set<std::pair<std::string, std::string>> expected = {{"a", "b"}, {"a", "b'"}, {"a'", "b"}, {"a'", "b'"}};
    EXPECT_EQ(causal, expected);
    EXPECT_EQ(one_way, expected);
}

TEST(Causality, P2IsCausalOnly) {
    CausalityReport r = classify_causality(p2());
    EXPECT_EQ(r.classification, Causality::Causal);
    EXPECT_EQ(r.ordered_pairs_scanned, 144u);
    EXPECT_EQ(r.causal_witnesses.size(), 16u);
    EXPECT_TRUE(r.dependence_witnesses.empty());
    EXPECT_EQ(r.indeterminate_pairs, 0u);
}

TEST(Causality, BooleanAlgebraIsSymmetric) {
    Generator g(3);
    for (int round = 0; round < 10; ++round) {
        auto l = share(boolean_algebra({"x", "y", "z"}));
        std::vector<Rational> w = g.distribution(3);
        std::map<std::pair<ElementId, ElementId>, Rational> t;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) t[{l->atoms()[i], l->atoms()[j]}] = i == j ? w[i] : Rational(0);
        }
        SMap p = extend_smap_from_atom_table(l, t);
        EXPECT_EQ(classify_causality(p).classification, Causality::Symmetric);
        for (ElementId a : l->elements()) {
            for (ElementId b : l->elements()) EXPECT_EQ(p(a, b), p(l->meet(a, b), l->meet(a, b)));
        }
    }
}

TEST(Properties, TableFixtures) {
    for (const SMap& p : {p1(), p2(), certain_a()}) {
        PropertyReport r = check_properties(p);
        for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
    }
    EXPECT_EQ(at(p1(), "b", "b'"), 0);
    EXPECT_EQ(at(p2(), "c", "d"), 0);
}

TEST(Properties, JauchPironNotes) {
    SMap p = certain_a();
    CausalityReport r = classify_causality(p);
    ASSERT_EQ(r.jauch_piron_notes.size(), 1u);
    EXPECT_EQ(p.lattice().name(r.jauch_piron_notes[0].first), "a");
    EXPECT_EQ(p.lattice().name(r.jauch_piron_notes[0].second), "1");
    EXPECT_GT(r.indeterminate_pairs, 0u);
    for (ElementId c : p.lattice().elements()) EXPECT_EQ(p(p.lattice().at("a"), c), p(c, p.lattice().at("a")));
}

TEST(Properties, RandomHorizontalSums) {
    Generator g(2024);
    for (int round = 0; round < 60; ++round) {
        auto l = share(horizontal_sum(g.horizontal_sum_spec(2, 3, 2, 3)));
        SMap p = g.smap(l);
        EXPECT_NO_THROW(validate_smap(l, p.table()));
        EXPECT_TRUE(check_properties(p).all_passed());
        for (const Block& b : l->blocks()) {
            for (ElementId x : b.members) {
                for (ElementId y : b.members) {
                    EXPECT_EQ(p(x, y), p(y, x));
                    EXPECT_EQ(p(x, y), p(l->meet(x, y), l->meet(x, y)));
                }
            }
        }
    }
}

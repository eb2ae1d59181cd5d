#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace omlprob;
using testing_support::l1;
using testing_support::l2;
using testing_support::pasted;

namespace {

std::size_t pos(const RawOml& raw, const std::string& name) {
    return static_cast<std::size_t>(std::find(raw.names.begin(), raw.names.end(), name) - raw.names.begin());
}

ErrorCode code_of(const RawOml& raw) {
    try {
        validate_oml(raw);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "validation unexpectedly passed";
    return ErrorCode::MalformedTables;
}

RawOml chain4() {
    // 0 < x < y < 1 with x' = y: involutive and antitone, but x v x' = y
    RawOml raw;
    raw.names = {"0", "x", "y", "1"};
    raw.leq.assign(4, std::vector<bool>(4, false));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) raw.leq[i][j] = true;
    }
    raw.ortho = {3, 2, 1, 0};
    return raw;
}

RawOml hexagon() {
    // 0 < a < b' < 1 and 0 < b < a' < 1: an ortholattice that fails the
    // orthomodular law at a <= b'
    RawOml raw;
    raw.names = {"0", "a", "b'", "b", "a'", "1"};
    raw.leq.assign(6, std::vector<bool>(6, false));
    for (std::size_t i = 0; i < 6; ++i) {
        raw.leq[0][i] = raw.leq[i][5] = raw.leq[i][i] = true;
    }
    raw.leq[1][2] = raw.leq[3][4] = true;
    raw.ortho = {5, 4, 3, 2, 1, 0};
    return raw;
}

std::vector<LatticeRef> corpus() {
    std::vector<LatticeRef> out{l1(), l2(), share(boolean_algebra({"x", "y", "z"})), share(boolean_algebra({"u"})),
                                share(validate_oml(pasted({{"p", "q", "r"}})))};
    Generator g(11);
    for (int i = 0; i < 12; ++i) out.push_back(share(horizontal_sum(g.horizontal_sum_spec(2, 4, 2, 4))));
    return out;
}

}  // namespace

TEST(Lattice, L1FromTables) {
    auto l = l1();
    EXPECT_EQ(l->size(), 6u);
    EXPECT_EQ(l->atoms().size(), 4u);
    ASSERT_EQ(l->blocks().size(), 2u);
    for (const Block& b : l->blocks()) {
        EXPECT_EQ(b.members.size(), 4u);
        EXPECT_TRUE(b.is_boolean);
    }
    ElementId a = l->at("a"), b = l->at("b");
    EXPECT_EQ(l->meet(a, b), l->bottom());
    EXPECT_EQ(l->join(a, b), l->top());
    EXPECT_TRUE(l->is_orthogonal(a, l->at("a'")));
    EXPECT_FALSE(l->is_orthogonal(a, b));
    EXPECT_TRUE(l->is_compatible(a, l->at("a'")));
    EXPECT_FALSE(l->is_compatible(a, b));
    EXPECT_TRUE(is_horizontal_sum(*l).is_sum);
}

TEST(Lattice, L2FromTables) {
    auto l = l2();
    EXPECT_EQ(l->size(), 12u);
    EXPECT_EQ(l->join(l->at("a"), l->at("b")), l->at("c'"));
    EXPECT_EQ(l->join(l->at("d"), l->at("e")), l->at("c'"));
    EXPECT_EQ(l->join(l->at("a"), l->at("d")), l->at("c'"));  // both below c' = a v b = d v e
    EXPECT_EQ(l->join(l->at("a"), l->at("e'")), l->top());
    EXPECT_TRUE(l->is_orthogonal(l->at("d"), l->at("e")));
    EXPECT_TRUE(l->is_compatible(l->at("c"), l->at("d")));
    EXPECT_FALSE(l->is_compatible(l->at("a"), l->at("d")));
    ASSERT_EQ(l->blocks().size(), 2u);
    for (const Block& b : l->blocks()) EXPECT_EQ(b.members.size(), 8u);

    HorizontalSumCheck h = is_horizontal_sum(*l);
    EXPECT_FALSE(h.is_sum);
    std::set<std::string> shared;
    for (ElementId e : h.intersection) shared.insert(l->name(e));
    EXPECT_EQ(shared, (std::set<std::string>{"0", "c", "c'", "1"}));
}

TEST(Lattice, FixturesMatchTestSideConstruction) {
    for (auto [file, expected] : {std::pair{"l1.json", l1()}, std::pair{"l2.json", l2()}}) {
        auto doc = io::parse_file(testing_support::fixture(file));
        FiniteOml got = io::build_lattice(std::get<io::LatticeDocument>(doc.payload));
        ASSERT_EQ(got.size(), expected->size()) << file;
        for (ElementId x : expected->elements()) {
            for (ElementId y : expected->elements()) {
                EXPECT_EQ(got.leq(got.at(expected->name(x)), got.at(expected->name(y))), expected->leq(x, y)) << file;
            }
            EXPECT_EQ(got.name(got.ortho(got.at(expected->name(x)))), expected->name(expected->ortho(x))) << file;
        }
    }
}

TEST(Lattice, TwoElementLatticeIsValid) {
    RawOml raw{{"0", "1"}, {{true, true}, {false, true}}, {1, 0}};
    FiniteOml l = validate_oml(raw);
    EXPECT_EQ(l.blocks().size(), 1u);
    EXPECT_EQ(l.atoms().size(), 1u);  // 1 covers 0
    EXPECT_FALSE(is_horizontal_sum(l).is_sum);
}

TEST(Lattice, MutatedTablesAreRejected) {
    RawOml base = pasted({{"a", "a'"}, {"b", "b'"}});
    const std::size_t a = pos(base, "a"), b = pos(base, "b"), bp = pos(base, "b'"), ap = pos(base, "a'");

    RawOml swapped = base;  // a' := b
    swapped.ortho[a] = b;
    EXPECT_EQ(code_of(swapped), ErrorCode::OrthoNotInvolution);

    RawOml not_antitone = base;  // a <= b without b' <= a'
    not_antitone.leq[a][b] = true;
    EXPECT_EQ(code_of(not_antitone), ErrorCode::OrthoNotAntitone);

    RawOml not_transitive = base;
    not_transitive.leq[a][b] = true;
    not_transitive.leq[b][bp] = true;
    EXPECT_EQ(code_of(not_transitive), ErrorCode::NotAPartialOrder);

    RawOml not_antisymmetric = base;
    not_antisymmetric.leq[a][ap] = not_antisymmetric.leq[ap][a] = true;
    EXPECT_EQ(code_of(not_antisymmetric), ErrorCode::NotAPartialOrder);

    RawOml duplicate = base;
    duplicate.names[b] = "a";
    EXPECT_EQ(code_of(duplicate), ErrorCode::DuplicateElementName);

    RawOml reserved = base;
    reserved.names[a] = "0";
    reserved.names[0] = "z";
    EXPECT_EQ(code_of(reserved), ErrorCode::ReservedName);

    RawOml ragged = base;
    ragged.leq.pop_back();
    EXPECT_EQ(code_of(ragged), ErrorCode::MalformedTables);

    EXPECT_EQ(code_of(chain4()), ErrorCode::ComplementNotUnique);
    EXPECT_EQ(code_of(hexagon()), ErrorCode::OrthomodularLawViolated);
}

TEST(Lattice, BowtieIsNotALattice) {
    RawOml raw;
    raw.names = {"0", "x", "y", "u", "v", "1"};
    raw.leq.assign(6, std::vector<bool>(6, false));
    for (std::size_t i = 0; i < 6; ++i) raw.leq[0][i] = raw.leq[i][5] = raw.leq[i][i] = true;
    for (std::size_t lo : {1, 2}) {
        for (std::size_t hi : {3, 4}) raw.leq[lo][hi] = true;
    }
    raw.ortho = {5, 4, 3, 2, 1, 0};
    EXPECT_EQ(code_of(raw), ErrorCode::NotALattice);
}

TEST(Lattice, ErrorsCarryWitnesses) {
    try {
        validate_oml(hexagon());
        FAIL();
    } catch (const Error& e) {
        EXPECT_FALSE(e.witness().empty());
    }
}

TEST(Lattice, BooleanAlgebra) {
    FiniteOml two = boolean_algebra({"x", "y"});
    EXPECT_EQ(two.size(), 4u);
    EXPECT_EQ(two.ortho(two.at("x")), two.at("y"));
    FiniteOml three = boolean_algebra({"x", "y", "z"});
    EXPECT_EQ(three.size(), 8u);
    EXPECT_EQ(three.atoms().size(), 3u);
    EXPECT_EQ(three.blocks().size(), 1u);
    EXPECT_TRUE(is_distributive(three));
    EXPECT_FALSE(is_horizontal_sum(three).is_sum);
    EXPECT_FALSE(is_horizontal_sum(three).note.empty());

    EXPECT_THROW(boolean_algebra(std::span<const std::string>{}), Error);
    try {
        boolean_algebra({"x", "x"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateAtomName);
    }
}

TEST(Lattice, HorizontalSumOfCopies) {
    for (std::size_t k = 2; k <= 5; ++k) {
        std::vector<FiniteOml> parts;
        for (std::size_t i = 0; i < k; ++i) {
            parts.push_back(boolean_algebra({"u" + std::to_string(i), "v" + std::to_string(i)}));
        }
        FiniteOml l = horizontal_sum(std::span<const FiniteOml>(parts));
        EXPECT_EQ(l.size(), 2 + 2 * k);
        EXPECT_EQ(l.blocks().size(), k);
        EXPECT_TRUE(is_horizontal_sum(l).is_sum);
    }
}

TEST(Lattice, HorizontalSumErrors) {
    auto code = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::MalformedTables;
    };
    std::vector<FiniteOml> one{boolean_algebra({"x", "y"})};
    EXPECT_EQ(code([&] { horizontal_sum(std::span<const FiniteOml>(one)); }), ErrorCode::TooFewBlocks);
    std::vector<FiniteOml> trivial{boolean_algebra({"x", "y"}), boolean_algebra({"u"})};
    EXPECT_EQ(code([&] { horizontal_sum(std::span<const FiniteOml>(trivial)); }), ErrorCode::TrivialBlock);
    std::vector<FiniteOml> non_boolean{boolean_algebra({"x", "y"}), *l1()};
    EXPECT_EQ(code([&] { horizontal_sum(std::span<const FiniteOml>(non_boolean)); }), ErrorCode::BlockNotBoolean);

    HorizontalSumSpec dup{{{"B1", {"a", "b"}}, {"B2", {"b", "c"}}}};
    EXPECT_EQ(code([&] { horizontal_sum(dup); }), ErrorCode::DuplicateAtomName);
    HorizontalSumSpec small{{{"B1", {"a", "b"}}, {"B2", {"c"}}}};
    EXPECT_EQ(code([&] { horizontal_sum(small); }), ErrorCode::TrivialBlock);
    HorizontalSumSpec lone{{{"B1", {"a", "b"}}}};
    EXPECT_EQ(code([&] { horizontal_sum(lone); }), ErrorCode::TooFewBlocks);
}

TEST(Lattice, HorizontalSumRecoversBlocks) {
    Generator g(5);
    for (int round = 0; round < 20; ++round) {
        HorizontalSumSpec spec = g.horizontal_sum_spec(2, 4, 2, 4);
        FiniteOml l = horizontal_sum(spec);
        std::set<std::set<std::string>> want, got;
        for (const auto& b : spec.blocks) want.insert({b.atoms.begin(), b.atoms.end()});
        for (const Block& b : l.blocks()) {
            std::set<std::string> atoms;
            for (ElementId a : b.atoms) atoms.insert(l.name(a));
            got.insert(atoms);
        }
        EXPECT_EQ(got, want);
        EXPECT_TRUE(is_horizontal_sum(l).is_sum);
        std::size_t expected_size = 2;
        for (const auto& b : spec.blocks) expected_size += (std::size_t{1} << b.atoms.size()) - 2;
        EXPECT_EQ(l.size(), expected_size);
    }
}

TEST(Lattice, AtomDecompositions) {
    auto l = l2();
    auto d = atom_decompositions(*l, l->at("c'"));
    std::set<std::set<std::string>> got;
    for (const auto& parts : d) {
        std::set<std::string> s;
        for (ElementId e : parts) s.insert(l->name(e));
        got.insert(s);
    }
    EXPECT_EQ(got, (std::set<std::set<std::string>>{{"a", "b"}, {"d", "e"}}));
    EXPECT_EQ(atom_decompositions(*l, l->top()).size(), 2u);
    auto m = l1();
    EXPECT_EQ(atom_decompositions(*m, m->at("a'")).size(), 1u);
}

TEST(Lattice, RevalidationIsIdempotent) {
    for (const auto& l : corpus()) {
        FiniteOml again = validate_oml(l->raw());
        EXPECT_EQ(again.raw().leq, l->raw().leq);
        EXPECT_EQ(again.raw().ortho, l->raw().ortho);
        ASSERT_EQ(again.blocks().size(), l->blocks().size());
        for (std::size_t i = 0; i < again.blocks().size(); ++i) {
            EXPECT_EQ(again.blocks()[i].members, l->blocks()[i].members);
        }
    }
}

TEST(Lattice, DerivedLawsHoldEverywhere) {
    for (const auto& lp : corpus()) {
        const FiniteOml& l = *lp;
        ElementSet covered(l.size());
        for (const Block& b : l.blocks()) {
            for (ElementId e : b.members) covered.set(e.index);
        }
        EXPECT_TRUE(covered.all());
        for (ElementId a : l.elements()) {
            EXPECT_EQ(l.join(a, l.ortho(a)), l.top());
            EXPECT_EQ(l.meet(a, l.ortho(a)), l.bottom());
            for (ElementId b : l.elements()) {
                EXPECT_EQ(l.ortho(l.join(a, b)), l.meet(l.ortho(a), l.ortho(b)));
                EXPECT_TRUE(l.leq(l.join(l.meet(a, b), l.meet(a, l.ortho(b))), a));
                if (l.is_orthogonal(a, b)) EXPECT_TRUE(l.is_compatible(a, b));
                bool compatible = l.join(l.meet(a, b), l.meet(a, l.ortho(b))) == a &&
                                  l.join(l.meet(a, b), l.meet(l.ortho(a), b)) == b;
                EXPECT_EQ(l.is_compatible(a, b), compatible);
            }
        }
        EXPECT_EQ(is_distributive(l), l.blocks().size() == 1);
    }
}

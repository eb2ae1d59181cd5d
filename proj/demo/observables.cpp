// Observables on two Boolean blocks that share the atom c. Shows expectation,
// conditional expectation onto the range of another observable, and the
// summability operator for an incompatible pair.

#include <omlprob/omlprob.hpp>

#include <iostream>

using namespace omlprob;

namespace {

void print(const std::string& label, const Observable& x) {
    const FiniteOml& l = x.lattice();
    std::cout << label << ":";
    for (const SupportPoint& s : x.support()) std::cout << " " << s.value << "@" << l.name(s.element);
    std::cout << "\n";
}

}  // namespace

int main() {
    // blocks {a, b, c} and {c, d, e}; not a horizontal sum
    auto doc = io::parse_file(std::filesystem::path(OMLPROB_FIXTURE_DIR) / "l2.json");
    LatticeRef l = share(io::build_lattice(std::get<io::LatticeDocument>(doc.payload)));

    const char* names[5] = {"a", "b", "c", "d", "e"};
    const char* rows[5][5] = {{"1/5", "0", "0", "1/5", "0"},
                              {"0", "2/5", "0", "1/10", "3/10"},
                              {"0", "0", "2/5", "0", "0"},
                              {"3/20", "3/20", "0", "3/10", "0"},
                              {"1/20", "1/4", "0", "0", "3/10"}};
    std::map<std::pair<ElementId, ElementId>, Rational> table;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) table[{l->at(names[i]), l->at(names[j])}] = parse_rational(rows[i][j]);
    }
    SMap p = extend_smap_from_atom_table(l, table);

    auto obs = [&](std::vector<std::pair<const char*, const char*>> pts) {
        std::vector<SupportPoint> support;
        for (auto [v, e] : pts) support.push_back({parse_rational(v), l->at(e)});
        return validate_observable(l, support);
    };
    Observable x = obs({{"1", "a"}, {"2", "b"}, {"3", "c"}});
    Observable y = obs({{"0", "d"}, {"10", "e"}, {"-1", "c"}});
    print("x", x);
    print("y", y);
    std::cout << "E(x) = " << expectation(p, x) << ", E(y) = " << expectation(p, y) << "\n";
    std::cout << "compatible: " << (observables_compatible(x, y) ? "yes" : "no") << "\n";

    Projection ex = conditional_expectation(p, x, range(y));
    print("E(x|R(y))", ex.value);

    Projection s = oplus(p, x, y);
    print("x (+) y", s.value);
    std::cout << "E(x (+) y) = " << expectation(p, s.value) << "\n";

    PropertyReport checks = check_oplus_properties(p, x, y);
    for (const auto& c : checks.checks) std::cout << (c.passed ? "  ok   " : "  FAIL ") << c.name << "\n";
}

"""Brute-force reference values for the C++ suites (exact Fractions).

Lattice elements are modelled as (block, subset-of-atoms) pairs; an element
shared by two blocks (0, 1, c, c' in L2) is a single name with several
representations. The s-map on any pair is the double sum over atom
representations, taken from the first representation of each argument.
"""
from fractions import Fraction as F
from itertools import combinations


def powerset_names(atoms):
    out = {}
    n = len(atoms)
    for r in range(n + 1):
        for s in combinations(atoms, r):
            if r == 0:
                name = "0"
            elif r == n:
                name = "1"
            elif r == 1:
                name = s[0]
            else:
                name = [a for a in atoms if a not in s][0] + "'"
            out[name] = frozenset(s)
    return out


def lattice(blocks):
    reps = {}
    for atoms in blocks:
        for name, s in powerset_names(atoms).items():
            reps.setdefault(name, []).append(s)
    return reps


def extend(reps, atom_table):
    def p(x, y):
        vals = set()
        for sx in reps[x]:
            for sy in reps[y]:
                vals.add(sum((atom_table[i][j] for i in sx for j in sy), F(0)))
        assert len(vals) == 1, (x, y, vals)
        return vals.pop()
    return {(x, y): p(x, y) for x in reps for y in reps}


def classify(reps, p):
    interior = [e for e in reps if e not in ("0", "1")]
    mu = {e: p[(e, e)] for e in reps}
    causal = [(a, b) for a in interior for b in interior if a < b and p[(a, b)] != p[(b, a)]]
    one_way = []
    for a in interior:
        for b in interior:
            if a == b or mu[a] == 0 or mu[b] == 0:
                continue
            a_dep_b = p[(a, b)] != mu[a] * mu[b]
            b_ind_a = p[(b, a)] == mu[b] * mu[a]
            if a_dep_b and b_ind_a:
                one_way.append((a, b))
    return causal, one_way


def table(rows, values):
    return {r: {c: F(v) for c, v in zip(rows, vs)} for r, vs in zip(rows, values)}


L1 = lattice([["a", "a'"], ["b", "b'"]])
P1 = extend(L1, table(["a", "a'", "b", "b'"], [
    ["0.3", "0", "0.2", "0.1"], ["0", "0.7", "0.3", "0.4"],
    ["0.15", "0.35", "0.5", "0"], ["0.15", "0.35", "0", "0.5"]]))
L2 = lattice([["a", "b", "c"], ["c", "d", "e"]])
P2 = extend(L2, table(list("abcde"), [
    ["0.2", "0", "0", "0.2", "0"], ["0", "0.4", "0", "0.1", "0.3"], ["0", "0", "0.4", "0", "0"],
    ["0.15", "0.15", "0", "0.3", "0"], ["0.05", "0.25", "0", "0", "0.3"]]))

if __name__ == "__main__":
    print("L1 size", len(L1), "L2 size", len(L2))
    c1, w1 = classify(L1, P1)
    print("p1 causal pairs", [(a, b, str(P1[(a, b)]), str(P1[(b, a)])) for a, b in c1])
    print("p1 one-way (a depends on b, b independent of a)", w1)
    c2, w2 = classify(L2, P2)
    print("p2 ordered pairs scanned", len(L2) ** 2, "causal pairs", len(c2), "one-way", w2)
    print("p2 causal", [(a, b, str(P2[(a, b)]), str(P2[(b, a)])) for a, b in c2])
    print("p1 f(a|b)", P1[("a", "b")] / P1[("b", "b")], "f(a|b')", P1[("a", "b'")] / P1[("b'", "b'")])
    print("p1 f(b|a)", P1[("b", "a")] / P1[("a", "a")], "f(b|a')", P1[("b", "a'")] / P1[("a'", "a'")])
    # e4 with x = ind(a), y = ind(b)
    xs = [(1, "a"), (0, "a'")]
    ys = [(1, "b"), (0, "b'")]
    print("p1 e4 double sum", sum((xv + yv) * P1[(xe, ye)] for xv, xe in xs for yv, ye in ys))
    # oplus(x, y) values on b, b'
    print("p1 oplus", [(str(sum(xv * P1[(xe, ye)] for xv, xe in xs) / P1[(ye, ye)] + yv), ye) for yv, ye in ys])
    print("p2 c' row", {y: str(P2[("c'", y)]) for y in sorted(L2)})
    print("p2 a' column a", P2[("a'", "a")], "d' d'", P2[("d'", "d'")])

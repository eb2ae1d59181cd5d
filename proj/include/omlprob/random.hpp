#pragma once

// Seeded generators for horizontal sums, s-maps on them and observables.
// Used by the property suites and by `omlprob gen`.

#include "omlprob/lattice.hpp"
#include "omlprob/observable.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace omlprob {

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    /// Uniform integer in [lo, hi], independent of the standard library's
    /// distribution implementations.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + rng_() % (hi - lo + 1); }

    HorizontalSumSpec horizontal_sum_spec(std::size_t min_blocks, std::size_t max_blocks, std::size_t min_atoms,
                                          std::size_t max_atoms) {
        HorizontalSumSpec spec;
        const std::size_t blocks = uniform(min_blocks, max_blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            NamedBlockSpec block{"B" + std::to_string(b + 1), {}};
            const std::size_t atoms = uniform(min_atoms, max_atoms);
            for (std::size_t a = 0; a < atoms; ++a) block.atoms.push_back(std::string(1, char('a' + b)) + std::to_string(a));
            spec.blocks.push_back(std::move(block));
        }
        return spec;
    }

    /// Probability vector with small denominators; a zero weight appears with
    /// probability about 1/8 per entry (never all zero).
    std::vector<Rational> distribution(std::size_t size) {
        std::vector<std::uint64_t> w(size);
        std::uint64_t total = 0;
        while (total == 0) {
            total = 0;
            for (auto& x : w) {
                x = uniform(0, 7) == 0 ? 0 : uniform(1, 6);
                total += x;
            }
        }
        std::vector<Rational> out;
        for (auto x : w) {
            Rational q(mpz_class(std::to_string(x)), mpz_class(std::to_string(total)));
            q.canonicalize();
            out.push_back(q);
        }
        return out;
    }

    /// Joint table with the given row and column marginals: a random mix of
    /// the product coupling and a north-west-corner coupling taken in a
    /// shuffled column order.
    std::vector<std::vector<Rational>> coupling(const std::vector<Rational>& rows, const std::vector<Rational>& cols) {
        std::vector<std::vector<Rational>> product(rows.size(), std::vector<Rational>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) product[i][j] = rows[i] * cols[j];
        }
        std::vector<std::size_t> order(cols.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform(0, i - 1)]);
        std::vector<std::vector<Rational>> corner(rows.size(), std::vector<Rational>(cols.size()));
        std::vector<Rational> r = rows, c(cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) c[j] = cols[order[j]];
        std::size_t i = 0, j = 0;
        while (i < r.size() && j < c.size()) {
            Rational m = std::min(r[i], c[j]);
            corner[i][order[j]] += m;
            r[i] -= m;
            c[j] -= m;
            if (r[i] == 0) ++i;
            else ++j;
        }
        Rational lambda(mpz_class(std::to_string(uniform(0, 4))), mpz_class(4));
        lambda.canonicalize();
        for (std::size_t a = 0; a < rows.size(); ++a) {
            for (std::size_t b = 0; b < cols.size(); ++b) {
                product[a][b] = lambda * product[a][b] + (1 - lambda) * corner[a][b];
            }
        }
        return product;
    }

    /// Random s-map on a horizontal sum: per block a marginal, per ordered
    /// pair of distinct blocks an independent coupling of the two marginals.
    SMap smap(const LatticeRef& lattice) {
        const FiniteOml& l = *lattice;
        const auto& blocks = l.blocks();
        std::vector<std::vector<Rational>> marginals;
        for (const Block& b : blocks) marginals.push_back(distribution(b.atoms.size()));
        std::map<std::pair<ElementId, ElementId>, Rational> pairs;
        std::map<ElementId, Rational> marginal;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& atoms = blocks[bi].atoms;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                marginal[atoms[i]] = marginals[bi][i];
                for (std::size_t k = 0; k < atoms.size(); ++k) {
                    pairs[{atoms[i], atoms[k]}] = i == k ? marginals[bi][i] : Rational(0);
                }
            }
            for (std::size_t bj = 0; bj < blocks.size(); ++bj) {
                if (bi == bj) continue;
                auto joint = coupling(marginals[bi], marginals[bj]);
                const auto& other = blocks[bj].atoms;
                for (std::size_t i = 0; i < atoms.size(); ++i) {
                    for (std::size_t k = 0; k < other.size(); ++k) pairs[{atoms[i], other[k]}] = joint[i][k];
                }
            }
        }
        return extend_smap_from_atom_table(lattice, pairs, marginal);
    }

    /// Observable on a random block: a random grouping of its atoms with
    /// distinct values in [-5, 5] (step 1/2).
    Observable observable(const LatticeRef& lattice) {
        const FiniteOml& l = *lattice;
        const Block& block = l.blocks()[uniform(0, l.blocks().size() - 1)];
        const std::size_t groups = uniform(1, block.atoms.size());
        std::vector<ElementId> cells(groups, l.bottom());
        for (std::size_t i = 0; i < block.atoms.size(); ++i) {
            std::size_t g = i < groups ? i : uniform(0, groups - 1);
            cells[g] = l.join(cells[g], block.atoms[i]);
        }
        std::vector<long> values;
        while (values.size() < groups) {
            long v = static_cast<long>(uniform(0, 20)) - 10;
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
        }
        std::vector<SupportPoint> support;
        for (std::size_t g = 0; g < groups; ++g) {
            Rational q(mpz_class(values[g]), mpz_class(2));
            q.canonicalize();
            support.push_back({q, cells[g]});
        }
        return validate_observable(lattice, std::move(support));
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace omlprob

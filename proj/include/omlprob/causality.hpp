#pragma once

// Process lattices over time stamps, the s-map Granger predicate, the
// two-experiment s-map fitter and a lag-1 classical Granger reference.

#include "omlprob/error.hpp"
#include "omlprob/lattice.hpp"
#include "omlprob/observable.hpp"
#include "omlprob/rational.hpp"
#include "omlprob/smap.hpp"
#include "omlprob/state.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace omlprob {

/// One (series, stamp) copy of the base algebra.
struct Slot {
    std::string series;
    std::string stamp;

    std::string label() const { return series + "@" + stamp; }
    friend bool operator==(const Slot&, const Slot&) = default;
};

/// Parses "series@stamp".
inline Slot parse_slot(std::string_view text) {
    auto at = text.find('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == text.size()) {
        throw Error(ErrorCode::UnknownSeriesOrStamp, "expected <series>@<stamp>, got \"" + std::string(text) + "\"",
                    {std::string(text)});
    }
    return {std::string(text.substr(0, at)), std::string(text.substr(at + 1))};
}

/// Horizontal sum of copies of a Boolean base algebra, one per slot.
struct ProcessLattice {
    LatticeRef base;
    std::vector<std::string> series;
    std::vector<std::string> stamps;
    std::vector<Slot> slots;
    LatticeRef lattice;
    // index[slot][base element index] -> element of `lattice`
    std::vector<std::vector<ElementId>> index;

    std::size_t slot_index(const Slot& slot) const {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i] == slot) return i;
        }
        throw Error(ErrorCode::UnknownSeriesOrStamp, "no block for " + slot.label(), {slot.label()});
    }

    ElementId element(const Slot& slot, ElementId base_element) const {
        return index[slot_index(slot)].at(base_element.index);
    }

    /// All lattice elements of the slot's block, in base order.
    const std::vector<ElementId>& block(const Slot& slot) const { return index[slot_index(slot)]; }
};

namespace detail {

inline void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

/// Maps each base element to the join of the images of its atoms.
inline std::vector<ElementId> embed_block(const FiniteOml& base, const FiniteOml& target,
                                          const std::vector<ElementId>& atom_images) {
    std::vector<ElementId> out(base.size());
    const auto& base_atoms = base.atoms();
    for (ElementId e : base.elements()) {
        ElementId acc = target.bottom();
        for (std::size_t i = 0; i < base_atoms.size(); ++i) {
            if (base.leq(base_atoms[i], e)) acc = target.join(acc, atom_images[i]);
        }
        out[e.index] = acc;
    }
    return out;
}

inline void check_base(const FiniteOml& base) {
    if (base.blocks().size() != 1) throw Error(ErrorCode::BaseNotBoolean, "the base algebra must be Boolean");
    if (base.atoms().size() < 2) throw Error(ErrorCode::TrivialBlock, "the base algebra needs at least two atoms");
}

}  // namespace detail

/// One block per slot; atoms are named "<series>@<stamp>.<base atom>".
inline ProcessLattice build_process_lattice(const LatticeRef& base, const std::vector<Slot>& slots) {
    detail::check_base(*base);
    if (slots.size() < 2) throw Error(ErrorCode::TooFewBlocks, "a process lattice needs at least two blocks");
    ProcessLattice pl;
    pl.base = base;
    pl.slots = slots;
    HorizontalSumSpec spec;
    for (const Slot& s : slots) {
        detail::push_unique(pl.series, s.series);
        detail::push_unique(pl.stamps, s.stamp);
        NamedBlockSpec block{s.label(), {}};
        for (ElementId a : base->atoms()) block.atoms.push_back(s.label() + "." + base->name(a));
        spec.blocks.push_back(std::move(block));
    }
    pl.lattice = share(horizontal_sum(spec));
    for (const auto& block : spec.blocks) {
        std::vector<ElementId> images;
        for (const auto& atom : block.atoms) images.push_back(pl.lattice->at(atom));
        pl.index.push_back(detail::embed_block(*base, *pl.lattice, images));
    }
    return pl;
}

/// Grid form: every series at every stamp, series-major.
inline ProcessLattice build_process_lattice(const LatticeRef& base, const std::vector<std::string>& stamps,
                                            const std::vector<std::string>& series) {
    detail::check_base(*base);
    if (stamps.empty() || series.empty()) throw Error(ErrorCode::TooFewBlocks, "need at least one series and one stamp");
    std::vector<Slot> slots;
    for (const auto& s : series) {
        for (const auto& t : stamps) slots.push_back({s, t});
    }
    return build_process_lattice(base, slots);
}

/// Reads a horizontal sum whose block names are "<series>@<stamp>". Atom
/// names are kept; base atoms correspond by position.
inline ProcessLattice process_lattice_from_named_blocks(const HorizontalSumSpec& spec) {
    if (spec.blocks.size() < 2) throw Error(ErrorCode::TooFewBlocks, "a process lattice needs at least two blocks");
    const std::size_t k = spec.blocks.front().atoms.size();
    for (const auto& b : spec.blocks) {
        if (b.atoms.size() != k) {
            throw Error(ErrorCode::LabelMismatch, "block " + b.name + " is not a copy of the first block", {b.name});
        }
    }
    ProcessLattice pl;
    pl.base = share(boolean_algebra(std::span<const std::string>(spec.blocks.front().atoms)));
    detail::check_base(*pl.base);
    pl.lattice = share(horizontal_sum(spec));
    for (const auto& b : spec.blocks) {
        Slot s = parse_slot(b.name);
        detail::push_unique(pl.series, s.series);
        detail::push_unique(pl.stamps, s.stamp);
        pl.slots.push_back(s);
        std::vector<ElementId> images;
        for (const auto& atom : b.atoms) images.push_back(pl.lattice->at(atom));
        pl.index.push_back(detail::embed_block(*pl.base, *pl.lattice, images));
    }
    return pl;
}

/// Copies an observable on the base algebra into the slot's block.
inline Observable lift_observable(const ProcessLattice& pl, const Slot& slot, const Observable& base_observable) {
    const auto& block = pl.block(slot);
    std::vector<SupportPoint> support;
    for (const auto& s : base_observable.support()) support.push_back({s.value, block.at(s.element.index)});
    return validate_observable(pl.lattice, std::move(support));
}

struct GrangerWitness {
    ElementId effect_event;
    ElementId conditioning_event;
    Rational conditional;    // f_p(A|B)
    Rational unconditional;  // mu_p(A)
};

struct GrangerVerdict {
    bool causes = false;
    std::vector<GrangerWitness> witnesses;
    std::string cause;
    std::string effect;
    std::vector<std::string> annotations;
};

/// Exact predicate F(effect | cause) != F(effect) over every event A of the
/// effect block and every conditioning event B of the cause block with
/// mu_p(B) > 0.
inline GrangerVerdict granger_causes(const SMap& p, std::span<const ElementId> effect_block,
                                     std::span<const ElementId> cause_block) {
    const FiniteOml& l = p.lattice();
    GrangerVerdict v;
    std::vector<ElementId> effects(effect_block.begin(), effect_block.end());
    std::vector<ElementId> causes(cause_block.begin(), cause_block.end());
    std::sort(effects.begin(), effects.end());
    effects.erase(std::unique(effects.begin(), effects.end()), effects.end());
    std::sort(causes.begin(), causes.end());
    causes.erase(std::unique(causes.begin(), causes.end()), causes.end());
    for (ElementId b : causes) {
        if (b == l.bottom()) continue;
        const Rational& mass = p(b, b);
        if (mass == 0) {
            v.annotations.push_back("ZeroMassConditioner: mu_p(" + l.name(b) + ") = 0, skipped");
            continue;
        }
        for (ElementId a : effects) {
            Rational conditional = p(a, b) / mass;
            if (conditional != p(a, a)) v.witnesses.push_back({a, b, conditional, p(a, a)});
        }
    }
    v.causes = !v.witnesses.empty();
    return v;
}

inline GrangerVerdict granger_causes(const SMap& p, const ProcessLattice& pl, const Slot& effect, const Slot& cause) {
    if (&p.lattice() != pl.lattice.get() && p.lattice().names() != pl.lattice->names()) {
        throw Error(ErrorCode::LabelMismatch, "s-map is not defined on the process lattice");
    }
    const auto& eb = pl.block(effect);
    const auto& cb = pl.block(cause);
    GrangerVerdict v = granger_causes(p, eb, cb);
    v.cause = cause.label();
    v.effect = effect.label();
    auto ts = std::find(pl.stamps.begin(), pl.stamps.end(), cause.stamp);
    auto te = std::find(pl.stamps.begin(), pl.stamps.end(), effect.stamp);
    if (te != ts + 1) {
        v.annotations.push_back("effect stamp " + effect.stamp + " does not directly follow cause stamp " + cause.stamp);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Two-experiment fitter

/// Joint outcome counts of one sequential experiment. Labels are lattice
/// atom names; `first` was measured before `second`.
struct ExperimentCounts {
    std::vector<std::string> outcomes_first;
    std::vector<std::string> outcomes_second;
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& [k, c] : counts) t += c;
        return t;
    }

    void add(const std::string& first, const std::string& second, std::uint64_t count) {
        detail::push_unique(outcomes_first, first);
        detail::push_unique(outcomes_second, second);
        counts[{first, second}] += count;
    }
};

namespace detail {

inline bool same_labels(std::vector<std::string> a, std::vector<std::string> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

/// Relative-frequency table rows x cols from counts.
inline std::vector<std::vector<Rational>> frequencies(const ExperimentCounts& e, const std::vector<std::string>& rows,
                                                      const std::vector<std::string>& cols) {
    const std::uint64_t total = e.total();
    std::vector<std::vector<Rational>> t(rows.size(), std::vector<Rational>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            auto it = e.counts.find({rows[i], cols[j]});
            std::uint64_t c = it == e.counts.end() ? 0 : it->second;
            t[i][j] = Rational(mpz_class(std::to_string(c)), mpz_class(std::to_string(total)));
            t[i][j].canonicalize();
        }
    }
    return t;
}

/// Shifts column sums to `target` while keeping row sums: T + r (c - c').
inline void reconcile_columns(std::vector<std::vector<Rational>>& t, const std::vector<Rational>& target) {
    const std::size_t rows = t.size(), cols = target.size();
    std::vector<Rational> row_sum(rows), col_sum(cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            row_sum[i] += t[i][j];
            col_sum[j] += t[i][j];
        }
    }
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) t[i][j] += row_sum[i] * (target[j] - col_sum[j]);
    }
}

}  // namespace detail

/// Builds an s-map on a two-block process lattice from experiment 1 (xi
/// measured first, xi = atoms of one block) and experiment 2 (eta measured
/// first). Marginals must agree across experiments within `tolerance`; each
/// variable's marginal is then taken from the experiment that measured it
/// first and the other table's columns are shifted to match.
inline SMap fit_smap_from_experiments(const ProcessLattice& pl, const ExperimentCounts& exp1,
                                      const ExperimentCounts& exp2, const Rational& tolerance) {
    const FiniteOml& l = *pl.lattice;
    if (pl.slots.size() != 2) throw Error(ErrorCode::MalformedTables, "the fitter needs a lattice with exactly two blocks");
    if (exp1.total() == 0) throw Error(ErrorCode::EmptyExperiment, "experiment 1 has no counts", {"exp1"});
    if (exp2.total() == 0) throw Error(ErrorCode::EmptyExperiment, "experiment 2 has no counts", {"exp2"});

    auto atom_names = [&](std::size_t slot) {
        std::vector<std::string> names;
        for (ElementId e : pl.index[slot]) {
            if (l.is_atom(e)) names.push_back(l.name(e));
        }
        return names;
    };
    std::vector<std::string> xi, eta;
    for (std::size_t s = 0; s < 2; ++s) {
        auto names = atom_names(s);
        if (detail::same_labels(names, exp1.outcomes_first)) xi = names;
        if (detail::same_labels(names, exp1.outcomes_second)) eta = names;
    }
    if (xi.empty() || eta.empty()) {
        throw Error(ErrorCode::LabelMismatch, "experiment 1 labels do not match the atoms of the two blocks");
    }
    if (!detail::same_labels(exp2.outcomes_first, eta) || !detail::same_labels(exp2.outcomes_second, xi)) {
        throw Error(ErrorCode::LabelMismatch, "experiment 2 must measure the second variable first");
    }

    auto t1 = detail::frequencies(exp1, xi, eta);  // p(xi_i, eta_j)
    auto t2 = detail::frequencies(exp2, eta, xi);  // p(eta_j, xi_i)

    std::vector<Rational> xi_first(xi.size()), xi_second(xi.size()), eta_first(eta.size()), eta_second(eta.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        for (std::size_t j = 0; j < eta.size(); ++j) {
            xi_first[i] += t1[i][j];
            eta_second[j] += t1[i][j];
            eta_first[j] += t2[j][i];
            xi_second[i] += t2[j][i];
        }
    }
    auto gate = [&](const std::vector<std::string>& names, const std::vector<Rational>& a, const std::vector<Rational>& b) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            Rational gap = abs(a[i] - b[i]);
            if (gap > tolerance) {
                throw Error(ErrorCode::MarginalMismatch,
                            "marginal of " + names[i] + " is " + to_string(a[i]) + " when measured first but " +
                                to_string(b[i]) + " when measured second (tolerance " + to_string(tolerance) + ")",
                            {names[i], to_string(a[i]), to_string(b[i])});
            }
        }
    };
    gate(xi, xi_first, xi_second);
    gate(eta, eta_first, eta_second);

    detail::reconcile_columns(t1, eta_first);
    detail::reconcile_columns(t2, xi_first);
    for (const auto* t : {&t1, &t2}) {
        for (const auto& row : *t) {
            for (const auto& v : row) {
                if (v < 0) {
                    throw Error(ErrorCode::ReconciliationFailed,
                                "marginal reconciliation produced a negative joint frequency");
                }
            }
        }
    }

    std::map<std::pair<ElementId, ElementId>, Rational> atom_pairs;
    std::map<ElementId, Rational> marginal;
    auto set_block = [&](const std::vector<std::string>& names, const std::vector<Rational>& m) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            ElementId a = l.at(names[i]);
            marginal[a] = m[i];
            for (std::size_t k = 0; k < names.size(); ++k) atom_pairs[{a, l.at(names[k])}] = i == k ? m[i] : Rational(0);
        }
    };
    set_block(xi, xi_first);
    set_block(eta, eta_first);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        for (std::size_t j = 0; j < eta.size(); ++j) {
            atom_pairs[{l.at(xi[i]), l.at(eta[j])}] = t1[i][j];
            atom_pairs[{l.at(eta[j]), l.at(xi[i])}] = t2[j][i];
        }
    }
    return extend_smap_from_atom_table(pl.lattice, atom_pairs, marginal);
}

// ---------------------------------------------------------------------------
// Classical reference

/// Lag-1 bivariate comparison of residual variances. A reference
/// approximation only: the conditioning universe is {X, Y}.
struct ClassicalGrangerReport {
    std::size_t observations = 0;
    Rational rss_restricted;
    Rational rss_full;
    Rational sigma2_restricted;  // rss / (observations - 2)
    Rational sigma2_full;        // rss / (observations - 3)
    bool verdict = false;        // sigma2_full < sigma2_restricted
    std::string label = "reference approximation of classical Granger causality (lag 1, universe {X, Y})";
};

namespace detail {

/// Solves (A^T A) beta = A^T y exactly; returns the residual sum of squares.
inline Rational ols_rss(const std::vector<std::vector<Rational>>& design, const std::vector<Rational>& target,
                        const char* model) {
    const std::size_t k = design.front().size();
    std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k + 1));
    for (std::size_t r = 0; r < design.size(); ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) m[i][j] += design[r][i] * design[r][j];
            m[i][k] += design[r][i] * target[r];
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t pivot = c;
        while (pivot < k && m[pivot][c] == 0) ++pivot;
        if (pivot == k) {
            throw Error(ErrorCode::DegenerateDesign, std::string("singular normal equations in the ") + model + " model",
                        {model});
        }
        std::swap(m[c], m[pivot]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational factor = m[r][c] / m[c][c];
            for (std::size_t j = c; j <= k; ++j) m[r][j] -= factor * m[c][j];
        }
    }
    std::vector<Rational> beta(k);
    for (std::size_t i = 0; i < k; ++i) beta[i] = m[i][k] / m[i][i];
    Rational rss = 0;
    for (std::size_t r = 0; r < design.size(); ++r) {
        Rational fit = 0;
        for (std::size_t i = 0; i < k; ++i) fit += design[r][i] * beta[i];
        Rational e = target[r] - fit;
        rss += e * e;
    }
    return rss;
}

}  // namespace detail

/// Regresses y_t on (1, y_{t-1}) and on (1, y_{t-1}, x_{t-1}) by exact OLS
/// and compares degrees-of-freedom corrected residual variances.
inline ClassicalGrangerReport classical_granger_lag1(const std::vector<Rational>& series_x,
                                                     const std::vector<Rational>& series_y) {
    if (series_x.size() != series_y.size()) {
        throw Error(ErrorCode::MalformedTables, "series lengths differ");
    }
    const std::size_t n = series_x.size();
    if (n < 5) throw Error(ErrorCode::TooFewObservations, "need at least 5 time points for two residual degrees of freedom");
    ClassicalGrangerReport r;
    r.observations = n - 1;
    std::vector<std::vector<Rational>> restricted, full;
    std::vector<Rational> target;
    for (std::size_t t = 1; t < n; ++t) {
        restricted.push_back({Rational(1), series_y[t - 1]});
        full.push_back({Rational(1), series_y[t - 1], series_x[t - 1]});
        target.push_back(series_y[t]);
    }
    r.rss_restricted = detail::ols_rss(restricted, target, "restricted");
    r.rss_full = detail::ols_rss(full, target, "full");
    r.sigma2_restricted = r.rss_restricted / Rational(static_cast<long>(r.observations - 2));
    r.sigma2_full = r.rss_full / Rational(static_cast<long>(r.observations - 3));
    r.verdict = r.sigma2_full < r.sigma2_restricted;
    return r;
}

struct SeriesPair {
    std::vector<Rational> x;
    std::vector<Rational> y;
};

namespace detail {

/// Values k/100 with k uniform in [-500, 500]; uses the raw engine output so
/// the sequence is identical across standard libraries.
inline Rational draw_centi(std::mt19937_64& rng) {
    long k = static_cast<long>(rng() % 1001) - 500;
    Rational q(mpz_class(k), mpz_class(100));
    q.canonicalize();
    return q;
}

}  // namespace detail

/// y_t = x_{t-1}; y_0 and all x drawn from the seeded generator.
inline SeriesPair coupled_series(std::uint64_t seed, std::size_t length) {
    std::mt19937_64 rng(seed);
    SeriesPair s;
    for (std::size_t t = 0; t < length; ++t) s.x.push_back(detail::draw_centi(rng));
    s.y.push_back(detail::draw_centi(rng));
    for (std::size_t t = 1; t < length; ++t) s.y.push_back(s.x[t - 1]);
    for (auto& v : s.x) v.canonicalize();
    for (auto& v : s.y) v.canonicalize();
    return s;
}

/// Independent seeded draws for x and y.
inline SeriesPair noise_series(std::uint64_t seed, std::size_t length) {
    std::mt19937_64 rng(seed);
    SeriesPair s;
    for (std::size_t t = 0; t < length; ++t) {
        s.x.push_back(detail::draw_centi(rng));
        s.y.push_back(detail::draw_centi(rng));
    }
    for (auto& v : s.x) v.canonicalize();
    for (auto& v : s.y) v.canonicalize();
    return s;
}

}  // namespace omlprob

#pragma once

#include "cone.hpp"
#include "coneoff.hpp"
#include "group_actions.hpp"
#include "hyperbolicity.hpp"
#include "parallel.hpp"
#include "space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hypersc {

struct RotationPair {
    std::size_t apex = 0;
    std::vector<Perm> H;  // the whole subgroup, identity first
};

struct RotationFamilySpec {
    FiniteLengthSpace<double> X;
    double sigma = 0;
    std::vector<RotationPair> pairs;
    std::vector<Perm> conjugators;  // generators of the ambient action, for R3
};

inline bool perm_lt(const Perm& a, const Perm& b) { return a < b; }

// Subgroup generated by the given permutations, sorted with identity first.
inline std::vector<Perm> generated_subgroup(const std::vector<Perm>& gens, std::size_t n) {
    std::set<Perm> seen{identity_perm(n)};
    std::vector<Perm> frontier{identity_perm(n)};
    while (!frontier.empty()) {
        std::vector<Perm> next;
        for (const auto& g : frontier)
            for (const auto& s : gens) {
                Perm p = compose(s, g);
                if (seen.insert(p).second) next.push_back(p);
            }
        frontier = std::move(next);
    }
    std::vector<Perm> out(seen.begin(), seen.end());
    std::stable_partition(out.begin(), out.end(), [&](const Perm& p) { return p == identity_perm(n); });
    return out;
}

// Validates each subgroup (isometries fixing the apex) and closes it under
// composition.
inline RotationFamilySpec make_rotation_family(FiniteLengthSpace<double> X, double sigma, std::vector<RotationPair> pairs,
                                               std::vector<Perm> conjugators) {
    if (!(sigma > 0)) throw InputError(ErrorCode::invalid_argument, "sigma must be positive");
    const std::size_t n = X.size();
    for (auto& p : pairs) {
        if (p.apex >= n) throw InputError(ErrorCode::unknown_point, "apex out of range");
        for (const auto& h : p.H) {
            if (!is_isometry(X, h)) throw InputError(ErrorCode::validation, "rotation element is not an isometry");
            if (h[p.apex] != p.apex) throw InputError(ErrorCode::validation, "rotation element does not fix its apex");
        }
        p.H = generated_subgroup(p.H, n);
    }
    for (const auto& c : conjugators)
        if (!is_isometry(X, c)) throw InputError(ErrorCode::validation, "conjugator is not an isometry");
    return {std::move(X), sigma, std::move(pairs), std::move(conjugators)};
}

inline double rel_tol(double a) { return 1e-9 * std::max(1.0, std::abs(a)); }

struct AxiomReport {
    bool R1 = true, R2 = true, R3 = true;
    std::size_t R1_checked = 0;
    double R1_worst = 0;  // max |d(hx,x) - 2 d(v,x)|
    std::optional<std::pair<std::size_t, std::size_t>> R1_witness;  // (pair, point)
    std::optional<std::pair<std::size_t, std::size_t>> R2_witness;  // pair indices
    std::optional<std::pair<std::size_t, std::size_t>> R3_witness;  // (conjugator, pair)
    bool all() const { return R1 && R2 && R3; }
};

inline AxiomReport verify_rotation_axioms(const RotationFamilySpec& spec) {
    AxiomReport rep;
    const auto& X = spec.X;
    const std::size_t n = X.size();
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        const auto& p = spec.pairs[i];
        for (std::size_t x = 0; x < n; ++x) {
            const double dv = X.d(p.apex, x);
            if (dv > spec.sigma / 10 + rel_tol(spec.sigma)) continue;
            for (std::size_t k = 1; k < p.H.size(); ++k) {
                ++rep.R1_checked;
                double err = std::abs(X.d(p.H[k][x], x) - 2 * dv);
                if (err > rep.R1_worst) rep.R1_worst = err;
                if (err > rel_tol(2 * dv) && rep.R1) rep.R1 = false, rep.R1_witness = std::make_pair(i, x);
            }
        }
    }
    for (std::size_t i = 0; i < spec.pairs.size() && rep.R2; ++i)
        for (std::size_t j = i + 1; j < spec.pairs.size(); ++j) {
            const auto& a = spec.pairs[i];
            const auto& b = spec.pairs[j];
            if (a.apex == b.apex && a.H == b.H) continue;
            if (X.d(a.apex, b.apex) < spec.sigma - rel_tol(spec.sigma)) {
                rep.R2 = false;
                rep.R2_witness = std::make_pair(i, j);
                break;
            }
        }
    for (std::size_t c = 0; c < spec.conjugators.size() && rep.R3; ++c) {
        const Perm& g = spec.conjugators[c];
        const Perm gi = perm_inverse(g);
        for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
            std::vector<Perm> conj;
            for (const auto& h : spec.pairs[i].H) conj.push_back(compose(g, compose(h, gi)));
            std::sort(conj.begin(), conj.end());
            bool found = false;
            for (const auto& q : spec.pairs) {
                if (q.apex != g[spec.pairs[i].apex]) continue;
                std::vector<Perm> hs = q.H;
                std::sort(hs.begin(), hs.end());
                if (hs == conj) found = true;
            }
            if (!found) {
                rep.R3 = false;
                rep.R3_witness = std::make_pair(c, i);
                break;
            }
        }
    }
    return rep;
}

inline double min_displacement(const FiniteLengthSpace<double>& X, const Perm& g) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < X.size(); ++x) best = std::min(best, X.d(g[x], x));
    return best;
}

inline double max_displacement(const FiniteLengthSpace<double>& X, const Perm& g) {
    double best = 0;
    for (std::size_t x = 0; x < X.size(); ++x) best = std::max(best, X.d(g[x], x));
    return best;
}

struct KBall {
    std::vector<Perm> generators;   // nontrivial rotation elements and their conjugates
    std::vector<Perm> elements;     // identity first, then by word length
    std::vector<std::size_t> word_length;
    std::vector<double> min_disp;
    std::size_t word_budget = 0;
    double disp_budget = 0;
    std::size_t pruned = 0;
    bool closed = false;            // the last layer produced nothing new
    bool complete() const { return closed && pruned == 0; }
};

inline std::vector<Perm> k_generators(const RotationFamilySpec& spec) {
    std::set<Perm> gens;
    std::vector<Perm> conj{identity_perm(spec.X.size())};
    for (const auto& c : spec.conjugators) conj.push_back(c), conj.push_back(perm_inverse(c));
    for (const auto& p : spec.pairs)
        for (std::size_t k = 1; k < p.H.size(); ++k)
            for (const auto& c : conj) gens.insert(compose(c, compose(p.H[k], perm_inverse(c))));
    return {gens.begin(), gens.end()};
}

// Breadth-first over products of generators. A product at depth k whose
// minimal displacement exceeds D + (W - k) M, with M the largest generator
// displacement, cannot come back under D within the budget and is pruned.
inline KBall enumerate_k_ball(const RotationFamilySpec& spec, std::size_t word_budget, double disp_budget) {
    const auto& X = spec.X;
    KBall ball;
    ball.generators = k_generators(spec);
    ball.word_budget = word_budget;
    ball.disp_budget = disp_budget;
    double M = 0;
    for (const auto& s : ball.generators) M = std::max(M, max_displacement(X, s));
    std::set<Perm> seen{identity_perm(X.size())};
    ball.elements.push_back(identity_perm(X.size()));
    ball.word_length.push_back(0);
    ball.min_disp.push_back(0);
    std::vector<std::size_t> frontier{0};
    for (std::size_t k = 1; k <= word_budget; ++k) {
        struct Cand {
            Perm p;
            double m;
        };
        std::vector<std::vector<Cand>> cands(frontier.size());
        for_each_block(frontier.size(), [&](std::size_t i) {
            for (const auto& s : ball.generators) {
                Perm p = compose(s, ball.elements[frontier[i]]);
                cands[i].push_back({p, min_displacement(X, p)});
            }
        });
        std::vector<std::size_t> next;
        const double bound = disp_budget + static_cast<double>(word_budget - k) * M;
        for (auto& row : cands)
            for (auto& c : row) {
                if (!seen.insert(c.p).second) continue;
                if (c.m > bound + rel_tol(bound)) {
                    ++ball.pruned;
                    continue;
                }
                next.push_back(ball.elements.size());
                ball.elements.push_back(std::move(c.p));
                ball.word_length.push_back(k);
                ball.min_disp.push_back(c.m);
            }
        frontier = std::move(next);
        if (frontier.empty()) {
            ball.closed = true;
            break;
        }
    }
    return ball;
}

// Oracle: every product of at most W generators, deduplicated.
inline std::set<Perm> enumerate_k_naive(const std::vector<Perm>& gens, std::size_t n, std::size_t word_budget) {
    std::set<Perm> out{identity_perm(n)};
    std::vector<Perm> layer{identity_perm(n)};
    for (std::size_t k = 1; k <= word_budget; ++k) {
        std::vector<Perm> next;
        for (const auto& g : layer)
            for (const auto& s : gens) next.push_back(compose(s, g));
        for (const auto& p : next) out.insert(p);
        layer = std::move(next);
    }
    return out;
}

struct QuotientValue {
    double value = 0;
    bool certified = false;  // false: upper bound only
    std::size_t witness = 0; // index into the enumeration
};

inline QuotientValue quotient_distance(const RotationFamilySpec& spec, const KBall& ball, std::size_t x, std::size_t y) {
    if (x >= spec.X.size() || y >= spec.X.size()) throw InputError(ErrorCode::unknown_point, "point out of range");
    QuotientValue q;
    q.value = spec.X.d(x, y);
    for (std::size_t i = 1; i < ball.elements.size(); ++i) {
        double v = spec.X.d(ball.elements[i][x], y);
        if (v < q.value) q.value = v, q.witness = i;
    }
    q.certified = ball.complete();
    return q;
}

inline bool in_some_rotation_group(const RotationFamilySpec& spec, const Perm& g) {
    for (const auto& p : spec.pairs)
        if (std::find(p.H.begin(), p.H.end(), g) != p.H.end()) return true;
    return false;
}

inline double nearest_apex_distance(const RotationFamilySpec& spec, std::size_t x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : spec.pairs) best = std::min(best, spec.X.d(x, p.apex));
    return best;
}

struct FundamentalReport {
    double delta = 0;               // delta of the ambient space (product convention)
    double delta_four_point = 0;
    double bound = 0;               // sigma - 166 delta
    std::size_t scanned = 0;        // enumerated elements outside every rotation group
    double min_displacement = std::numeric_limits<double>::infinity();
    bool holds = true;              // vacuous when scanned == 0
    bool certified = false;         // the enumeration is all of K
    std::size_t free_checked = 0;
    double free_worst_slack = std::numeric_limits<double>::infinity();
    bool free_holds = true;         // d(gx,x) >= min{2 l, sigma/10}
};

inline FundamentalReport fundamental_theorem_check(const RotationFamilySpec& spec, const KBall& ball,
                                                   const DeltaOptions& opt = {}) {
    const auto& X = spec.X;
    FundamentalReport rep;
    auto dr = hyperbolicity_delta(X, opt);
    rep.delta = dr.delta_product;
    rep.delta_four_point = dr.delta_four_point;
    rep.bound = spec.sigma - 166 * rep.delta;
    rep.certified = ball.complete();
    for (std::size_t i = 1; i < ball.elements.size(); ++i) {
        const Perm& g = ball.elements[i];
        if (!in_some_rotation_group(spec, g)) {
            ++rep.scanned;
            rep.min_displacement = std::min(rep.min_displacement, ball.min_disp[i]);
        }
        for (std::size_t x = 0; x < X.size(); ++x) {
            const double l = nearest_apex_distance(spec, x);
            const double need = std::min(2 * l, spec.sigma / 10);
            const double slack = X.d(g[x], x) - need;
            ++rep.free_checked;
            rep.free_worst_slack = std::min(rep.free_worst_slack, slack);
            if (slack < -rel_tol(need)) rep.free_holds = false;
        }
    }
    if (rep.scanned > 0) rep.holds = rep.min_displacement >= rep.bound - rel_tol(rep.bound);
    return rep;
}

struct StabilizerReport {
    bool holds = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // (pair, element index)
    bool quantitative_holds = true;  // d(gx,x) > 3 sigma / 5 on B(v, sigma/5) for g outside H
    double worst_quantitative = std::numeric_limits<double>::infinity();
    std::size_t quantitative_checked = 0;
    bool certified = false;
};

inline StabilizerReport stabilizer_check(const RotationFamilySpec& spec, const KBall& ball) {
    StabilizerReport rep;
    rep.certified = ball.complete();
    const auto& X = spec.X;
    for (std::size_t pi = 0; pi < spec.pairs.size(); ++pi) {
        const auto& p = spec.pairs[pi];
        for (std::size_t i = 0; i < ball.elements.size(); ++i) {
            const Perm& g = ball.elements[i];
            const bool in_H = std::find(p.H.begin(), p.H.end(), g) != p.H.end();
            if (g[p.apex] == p.apex && !in_H && rep.holds) {
                rep.holds = false;
                rep.witness = std::make_pair(pi, i);
            }
            if (in_H) continue;
            for (std::size_t x = 0; x < X.size(); ++x) {
                if (X.d(p.apex, x) > spec.sigma / 5 + rel_tol(spec.sigma)) continue;
                ++rep.quantitative_checked;
                const double dx = X.d(g[x], x);
                rep.worst_quantitative = std::min(rep.worst_quantitative, dx);
                if (!(dx > 3 * spec.sigma / 5)) rep.quantitative_holds = false;
            }
        }
    }
    return rep;
}

struct LocalIsometryReport {
    bool hypotheses = true;
    std::string hypothesis_failure;
    bool holds = true;
    std::size_t pairs = 0;
    double worst_error = 0;
    bool certified = false;
};

inline LocalIsometryReport local_isometry_check(const RotationFamilySpec& spec, const KBall& ball, std::size_t x, double r) {
    LocalIsometryReport rep;
    if (x >= spec.X.size()) throw InputError(ErrorCode::unknown_point, "point out of range");
    if (!(r > 0) || r > spec.sigma / 40 + rel_tol(spec.sigma)) {
        rep.hypotheses = false;
        rep.hypothesis_failure = "radius must lie in (0, sigma/40]";
        return rep;
    }
    if (nearest_apex_distance(spec, x) < 2 * r - rel_tol(r)) {
        rep.hypotheses = false;
        rep.hypothesis_failure = "point lies within 2r of an apex";
        return rep;
    }
    rep.certified = ball.complete();
    std::vector<std::size_t> pts;
    for (std::size_t y = 0; y < spec.X.size(); ++y)
        if (spec.X.d(x, y) <= r + rel_tol(r)) pts.push_back(y);
    for (std::size_t a : pts)
        for (std::size_t b : pts) {
            ++rep.pairs;
            double err = std::abs(quotient_distance(spec, ball, a, b).value - spec.X.d(a, b));
            rep.worst_error = std::max(rep.worst_error, err);
            if (err > rel_tol(spec.X.d(a, b))) rep.holds = false;
        }
    return rep;
}

struct SmallProductReport {
    double worst = 0;  // max <x, hx>_v over pairs, h != 1 and all x
    double bound = 0;  // 2 delta
    bool holds = true;
};

inline SmallProductReport small_product_check(const RotationFamilySpec& spec, double delta) {
    SmallProductReport rep;
    rep.bound = 2 * delta;
    for (const auto& p : spec.pairs)
        for (std::size_t k = 1; k < p.H.size(); ++k)
            for (std::size_t x = 0; x < spec.X.size(); ++x)
                rep.worst = std::max(rep.worst, gromov_product(spec.X, x, p.H[k][x], p.apex));
    rep.holds = rep.worst <= rep.bound + rel_tol(rep.bound);
    return rep;
}

struct QuotientBallReport {
    std::size_t pair_index = 0;
    std::size_t orbits = 0;
    double delta = 0;   // four-point delta of the quotient ball
    double bound = 0;   // 2 delta of the ambient space
    bool holds = true;
    bool certified = false;
};

// Quotient of B(v, sigma/5) by K, one representative per orbit.
inline QuotientBallReport quotient_ball_delta(const RotationFamilySpec& spec, const KBall& ball, std::size_t pair_index,
                                              double ambient_delta) {
    const auto& p = spec.pairs.at(pair_index);
    QuotientBallReport rep;
    rep.pair_index = pair_index;
    rep.bound = 2 * ambient_delta;
    rep.certified = ball.complete();
    std::vector<std::size_t> reps;
    std::vector<char> covered(spec.X.size(), 0);
    for (std::size_t x = 0; x < spec.X.size(); ++x) {
        if (spec.X.d(p.apex, x) > spec.sigma / 5 + rel_tol(spec.sigma) || covered[x]) continue;
        reps.push_back(x);
        for (const auto& g : ball.elements) covered[g[x]] = 1;
    }
    rep.orbits = reps.size();
    const std::size_t m = reps.size();
    std::vector<double> tab(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) tab[i * m + j] = quotient_distance(spec, ball, reps[i], reps[j]).value;
    rep.delta = m >= 4 ? four_point_delta_of_table(tab, m) : 0.0;
    rep.holds = rep.delta <= rep.bound + rel_tol(rep.bound);
    return rep;
}

// Index layout of sample_coneoff_space: base vertices, then per attachment
// its apex followed by (vertex, level) points.
inline Perm extend_to_coneoff_sample(const ConeOffSpace& sp, std::size_t levels, const Perm& h) {
    const auto& base = sp.base();
    const std::size_t nb = base.size();
    if (h.size() != nb) throw InputError(ErrorCode::validation, "permutation has the wrong length");
    const auto& atts = sp.attachments();
    std::vector<std::size_t> offset(atts.size());
    std::size_t total = nb;
    for (std::size_t a = 0; a < atts.size(); ++a) {
        offset[a] = total;
        total += 1 + atts[a].Y.size() * levels;
    }
    Perm out(total);
    for (std::size_t v = 0; v < nb; ++v) out[v] = h[v];
    for (std::size_t a = 0; a < atts.size(); ++a) {
        std::vector<std::size_t> img;
        for (std::size_t y : atts[a].Y) img.push_back(h[y]);
        Subset target = make_subset(img);
        std::optional<std::size_t> b;
        for (std::size_t c = 0; c < atts.size(); ++c)
            if (atts[c].Y == target) b = c;
        if (!b) throw InputError(ErrorCode::validation, "permutation does not permute the attached subsets");
        out[offset[a]] = offset[*b];
        for (std::size_t k = 0; k < atts[a].Y.size(); ++k) {
            const std::size_t y2 = h[atts[a].Y[k]];
            const std::size_t k2 = static_cast<std::size_t>(
                std::lower_bound(atts[*b].Y.begin(), atts[*b].Y.end(), y2) - atts[*b].Y.begin());
            for (std::size_t l = 0; l < levels; ++l) out[offset[a] + 1 + k * levels + l] = offset[*b] + 1 + k2 * levels + l;
        }
    }
    return out;
}

inline std::size_t coneoff_sample_apex(const ConeOffSpace& sp, std::size_t levels, std::size_t attachment) {
    std::size_t idx = sp.base().size();
    for (std::size_t a = 0; a < attachment; ++a) idx += 1 + sp.attachments()[a].Y.size() * levels;
    return idx;
}

struct DeskModel {
    ConeOffSpace coneoff;
    std::vector<double> levels;
    RotationFamilySpec spec;
};

// Two 8-cycles with edges of length 8 joined by two bridges, coned off with
// rho = 3. The half-turn moves every cycle vertex by 32 >= pi sinh 3 along its
// cycle, so it acts on each cone as a rotation of angle pi.
inline DeskModel desk_model(bool with_swap = true, double bridge = 8.0) {
    const double rho = 3.0;
    std::vector<std::string> ids;
    std::vector<FiniteLengthSpace<double>::Edge> es;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 8; ++i) ids.push_back(std::string(c == 0 ? "p" : "q") + std::to_string(i));
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 8; ++i) es.push_back({8 * c + i, 8 * c + (i + 1) % 8, 8.0});
    es.push_back({0, 8, bridge});
    es.push_back({4, 12, bridge});
    auto base = FiniteLengthSpace<double>::from_indexed_graph(ids, es);
    Subset Y1, Y2;
    for (std::size_t i = 0; i < 8; ++i) Y1.push_back(i), Y2.push_back(8 + i);
    ConeOffSpace sp = build_coneoff(base, rho, {Y1, Y2});
    std::vector<double> levels{0.5, 1.5, 2.5};
    FiniteLengthSpace<double> X = sample_coneoff_space(sp, levels);
    Perm half(16), swap(16);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 8; ++i) half[8 * c + i] = 8 * c + (i + 4) % 8, swap[8 * c + i] = 8 * (1 - c) + i;
    Perm h = extend_to_coneoff_sample(sp, levels.size(), half);
    std::vector<RotationPair> pairs{{coneoff_sample_apex(sp, levels.size(), 0), {h}},
                                    {coneoff_sample_apex(sp, levels.size(), 1), {h}}};
    std::vector<Perm> conj;
    if (with_swap) conj.push_back(extend_to_coneoff_sample(sp, levels.size(), swap));
    auto spec = make_rotation_family(std::move(X), 2 * rho, std::move(pairs), std::move(conj));
    return {std::move(sp), std::move(levels), std::move(spec)};
}

}  // namespace hypersc

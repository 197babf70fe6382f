// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (0 when all pass).

#include "support.hpp"

#include "hypersc/burnside.hpp"
#include "hypersc/cone.hpp"
#include "hypersc/coneoff.hpp"
#include "hypersc/group_actions.hpp"
#include "hypersc/hyperbolicity.hpp"
#include "hypersc/rotation_family.hpp"
#include "hypersc/small_cancellation.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace hypersc;
using namespace hypersc::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class... Args>
std::string fmt(const Args&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

Outcome tree_exactness() {
    Rng rng(101);
    std::uniform_int_distribution<std::size_t> nv(2, 60);
    std::size_t nonzero = 0;
    auto t0 = Clock::now();
    for (int t = 0; t < 100; ++t)
        if (hyperbolicity_delta(random_tree(rng, nv(rng))).delta_four_point != 0) ++nonzero;
    const double secs = seconds_since(t0);
    return {nonzero == 0 && secs < 10.0, fmt("100 trees, nonzero=", nonzero, ", ", secs, " s")};
}

Outcome four_point_oracle() {
    Rng rng(102);
    std::uniform_int_distribution<std::size_t> nv(4, 25), extra(0, 20);
    std::size_t mismatch = 0;
    for (int t = 0; t < 50; ++t) {
        auto s = random_graph(rng, nv(rng), extra(rng));
        if (hyperbolicity_delta(s).delta_four_point != naive_four_point(s)) ++mismatch;
    }
    return {mismatch == 0, fmt("50 graphs, mismatches=", mismatch)};
}

Outcome mu_bounds() {
    double worst = std::numeric_limits<double>::infinity(), worst_fix = 0;
    bool shape = true;
    for (double rho : {2.0, 5.0, 10.0}) {
        const double cap = std::numbers::pi * std::sinh(rho);
        auto r = mu_bounds_check(rho, uniform_grid(0.0, 1.5 * cap, 10000));
        // the sinh bound is an inequality between lengths of size ~cap
        worst = std::min({worst, r.lower_slack, r.upper_slack, r.sinh_slack / std::max(1.0, cap)});
        shape = shape && r.points == 10000;
        worst_fix = std::max(worst_fix, std::abs(mu(cap, rho) - 2 * rho));
    }
    return {shape && worst >= -1e-9 && worst_fix <= 1e-9,
            fmt("worst slack=", worst, ", |mu(pi sinh rho)-2 rho|=", worst_fix)};
}

Outcome cone_metric() {
    std::size_t checked = 0, bad = 0;
    Rng rng(104);
    for (double rho : {0.5, 2.0, 6.0}) {
        for (std::size_t m : {5u, 12u, 40u}) {
            auto X = sample_cone_space(ConeSpec(cycle_space(m, 2 * std::numbers::pi * std::sinh(rho)), rho),
                                       level_radii(rho, 4), false);
            ++checked;
            if (X.size() > 200 || X.metric_violation()) ++bad;
        }
        auto base = to_double_space(random_graph(rng, 15, 8));
        auto X = sample_cone_space(ConeSpec(base, rho), level_radii(rho, 4), false);
        ++checked;
        if (X.size() > 200 || X.metric_violation()) ++bad;
    }
    double worst = 0;
    for (double rho : {2.0, 3.0, 4.0}) {
        auto X = sample_cone_space(ConeSpec(cycle_space(24, 2 * std::numbers::pi * std::sinh(rho)), rho), level_radii(rho, 3));
        worst = std::max(worst, hyperbolicity_delta(X).delta_four_point);
    }
    const double limit = 2 * BOLD_DELTA + 0.05;
    return {bad == 0 && worst <= limit,
            fmt(checked, " sampled cones, violations=", bad, "; circle cone delta=", worst, " <= ", limit)};
}

Outcome sandwich() {
    Rng rng(105);
    std::size_t fails = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 20; ++t) {
        auto r = sandwich_check(random_coneoff(rng));
        if (!r.holds) ++fails;
        worst = std::min({worst, r.lower_slack, r.upper_slack});
    }
    return {fails == 0, fmt("20 cone-offs, failures=", fails, ", worst slack=", worst)};
}

Outcome greedy() {
    Rng rng(106);
    std::size_t violations = 0;
    std::uniform_real_distribution<double> frac(0.01, 1.0);
    for (int t = 0; t < 1000; ++t) {
        auto sp = random_coneoff(rng);
        const double a = mu_cubic_coefficient(sp.rho());
        const double eta = frac(rng) * std::sqrt(1 / (10 * a));
        std::uniform_int_distribution<std::size_t> pick(0, sp.base().size() - 1), len(2, 20);
        std::vector<std::size_t> chain(len(rng));
        for (auto& v : chain) v = pick(rng);
        auto r = greedy_subchain(sp, chain, eta, a);
        if (!r.length_ok || !r.count_ok) ++violations;
    }
    return {violations == 0, fmt("1000 chains, violations=", violations)};
}

Outcome piece_axis() {
    Rng rng(107);
    std::uniform_int_distribution<int> rank(1, 3);
    std::size_t discrepancy = 0, truncated = 0, pairs = 0;
    for (int t = 0; t < 200; ++t) {
        auto p = random_presentation(rng, rank(rng), 2, 1, 12);
        auto rep = piece_axis_equivalence(p);
        discrepancy = std::max(discrepancy, rep.max_discrepancy);
        pairs += rep.pairs_checked;
        if (rep.truncated) ++truncated;
    }
    return {discrepancy == 0 && truncated == 0,
            fmt("200 relator pairs (", pairs, " conjugate pairs), max discrepancy=", discrepancy, ", truncated=", truncated)};
}

Outcome cdouble() {
    Rng rng(108);
    std::uniform_int_distribution<int> rank(2, 3), count(1, 3);
    std::size_t disagree = 0, cases = 0;
    for (int t = 0; t < 100; ++t) {
        auto p = random_presentation(rng, rank(rng), count(rng), 3, 14);
        auto q = q_family_from_relators(p);
        for (Rational lambda : {Rational(1, 4), Rational(1, 6), Rational(1, 8)}) {
            ++cases;
            if (!cdouble_equivalence(p, q, lambda).agree()) ++disagree;
        }
    }
    return {disagree == 0, fmt(cases, " verdict pairs, disagreements=", disagree)};
}

FiniteLengthSpace<Rational> scaled(const FiniteLengthSpace<Rational>& s, const Rational& lambda) {
    return s.convert<Rational>([&](const Rational& q) { return Rational(lambda * q); });
}

Outcome rescaling() {
    std::size_t combos = 0, bad = 0, nonvacuous = 0;
    const std::vector<Rational> lambdas{Rational(2), Rational(1, 3), Rational(7, 5), Rational(10)};
    std::function<bool(const Word&, const Word&)> el_words = [](const Word& a, const Word& b) {
        return elementary_test_free(a, b);
    };
    std::function<bool(const Perm&, const Perm&)> el_perms = [](const Perm& a, const Perm& b) {
        return compose(a, b) == compose(b, a);
    };
    // free group ball
    {
        const std::vector<Word> ws{"a", "b", "ab", "aB", "abb"};
        const Rational delta(1, 10);
        CayleyTreeModel m(2, 4);
        auto base = invariant_A(m, ws, el_words, delta);
        const Rational d0 = hyperbolicity_delta(m.to_space()).delta_four_point;
        for (const auto& l : lambdas) {
            ++combos;
            CayleyTreeModel ml(2, 4, l);
            auto r = invariant_A(ml, ws, el_words, l * delta);
            if (r.value != l * base.value || hyperbolicity_delta(ml.to_space()).delta_four_point != l * d0) ++bad;
            if (r.any_pair) ++nonvacuous;
        }
    }
    // finite vertex-transitive models with their full isometry groups
    for (auto s : {circulant(8, {1}), prism(5), petersen(), torus(4, 5)}) {
        auto gs = automorphisms(s);
        const Rational delta = hyperbolicity_delta(subdivide_edges(s)).delta_product;
        const Rational d0 = hyperbolicity_delta(s).delta_four_point;
        auto base = invariant_A(PermutationModel<Rational>(s), gs, el_perms, delta);
        for (const auto& l : lambdas) {
            ++combos;
            auto sl = scaled(s, l);
            auto r = invariant_A(PermutationModel<Rational>(sl), gs, el_perms, l * delta);
            if (r.value != l * base.value || hyperbolicity_delta(sl).delta_four_point != l * d0) ++bad;
            if (r.any_pair) ++nonvacuous;
        }
    }
    return {bad == 0 && combos == 20,
            fmt(combos, " model/lambda combinations, mismatches=", bad, ", with a non-elementary pair=", nonvacuous)};
}

Outcome axis_properties() {
    std::size_t models = 0, isometries = 0, violations = 0;
    for (const auto& [name, s] : vertex_transitive_models()) {
        ++models;
        PermutationModel<Rational> m(s);
        // delta of the metric graph; the vertex set alone can be 0-hyperbolic
        const Rational delta = hyperbolicity_delta(subdivide_edges(s)).delta_product;
        auto gs = automorphisms(s);
        std::vector<char> ok(gs.size(), 1);
        for_each_block(gs.size(), [&](std::size_t i) { ok[i] = axis_property_check(m, gs[i], delta).holds(); });
        isometries += gs.size();
        violations += static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    }
    return {violations == 0 && models == 20, fmt(models, " models, ", isometries, " isometries, violations=", violations)};
}

Outcome desk_model_checks() {
    auto spec = desk_model().spec;
    auto ax = verify_rotation_axioms(spec);
    const double D = spec.X.diameter();
    auto a = enumerate_k_ball(spec, 8, D);
    auto b = enumerate_k_ball(spec, 16, 2 * D);
    auto fa = fundamental_theorem_check(spec, a), fb = fundamental_theorem_check(spec, b);
    auto sa = stabilizer_check(spec, a), sb = stabilizer_check(spec, b);
    bool same = std::set<Perm>(a.elements.begin(), a.elements.end()) == std::set<Perm>(b.elements.begin(), b.elements.end()) &&
                fa.scanned == fb.scanned && fa.holds == fb.holds && fa.min_displacement == fb.min_displacement &&
                sa.holds == sb.holds && sa.quantitative_holds == sb.quantitative_holds;
    for (std::size_t x = 0; x < spec.X.size() && same; ++x)
        for (std::size_t y = 0; y < spec.X.size() && same; ++y)
            same = quotient_distance(spec, a, x, y).value == quotient_distance(spec, b, x, y).value;
    const bool pass = ax.all() && a.complete() && b.complete() && fa.holds && sa.holds && same;
    return {pass, fmt("axioms=", ax.all(), ", K-ball complete=", a.complete(), " (", a.elements.size(),
                      " elements), fundamental scanned=", fa.scanned, (fa.scanned == 0 ? " (vacuous)" : ""),
                      ", stabilizer=", sa.holds, ", doubling unchanged=", same)};
}

Outcome burnside() {
    const BurnsideInput in{Rational(20), Rational(1, 1000), Rational(1, 100), Rational(1, 100000000)};
    auto rep = critical_exponent_search(in);
    if (!rep.resolved) return {false, "test parameters did not resolve"};
    const BigInt n0 = *rep.n0;
    const bool at = burnside_inequalities_at(in, n0, rep.precision_bits).all();
    const bool below = burnside_inequalities_at(in, n0 - 1, rep.precision_bits).all();
    auto floor = c_threshold_floor(in);
    bool c_ok = floor && !c_constant(in, *floor, 512).below_one && c_constant(in, *floor + 1, 512).below_one;
    return {at && !below && c_ok, fmt("n0 has ", n0.str().size(), " digits, holds at n0=", at, ", holds at n0-1=", below,
                                      ", c crosses 1 at floor(C^2)+1=", c_ok)};
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(HYPERSC_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome determinism() {
    const std::string d = std::string(HYPERSC_DATA) + "/";
    const std::vector<std::string> cases{
        "delta " + d + "cycle6.json --exact",
        "delta " + d + "tree.json --float",
        "--seed 9 delta " + d + "cycle6.json --sample 500 --cap 3",
        "gromov " + d + "cycle6.json a b d",
        "qc " + d + "cycle6.json --subset a,b,c --strong-check",
        "cone --circle 12 --rho 3 --delta-check",
        "coneoff " + d + "coneoff_cycle.json --sandwich-check --delta",
        "coneoff " + d + "coneoff_cycle.json --query apex:0 1:5@1.5",
        "axes --rank 2 --radius 4 --word abAB --delta 1/10",
        "invariant-a --rank 2 --radius 3 --words a,b,ab,aB --delta 1/10",
        "sc-check " + d + "surface.txt --lambda 1/7 --family",
        "sc-check " + d + "commutator.txt --lambda 1/4 --variant cdouble --family",
        "graph-sc " + d + "triangle_graph.json --lambda 1/6",
        "rotation --desk-model",
        "rotation " + d + "rotation_single.json",
        "burnside-params",
        "burnside-params --rho0 20 --delta0 1/1000 --Delta0 1/100 --bold 1e-8",
        "gm-bounds --rho 3 --T 100 --k 2 --l 1 --diam 10 --distance 5",
        "cartan-hadamard " + d + "cycle6.json --sigma 2",
    };
    std::size_t differing = 0, empty = 0;
    for (const auto& args : cases) {
        const Run base = run_cli("--threads 1 " + args);
        if (base.out.empty()) {
            ++empty;
            continue;
        }
        for (int t : {1, 2, 4, 8}) {
            const Run r = run_cli("--threads " + std::to_string(t) + " " + args);
            if (r.out != base.out || r.code != base.code) {
                ++differing;
                break;
            }
        }
    }
    return {differing == 0 && empty == 0,
            fmt(cases.size(), " commands x 4 thread counts, differing=", differing, ", no output=", empty)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"tree exactness", tree_exactness},
        {"four-point oracle", four_point_oracle},
        {"mu bounds", mu_bounds},
        {"cone metric validity", cone_metric},
        {"cone-off sandwich", sandwich},
        {"greedy subchain bounds", greedy},
        {"piece/axis equivalence", piece_axis},
        {"C'' vs Delta/T", cdouble},
        {"rescaling", rescaling},
        {"axis properties", axis_properties},
        {"rotation family desk model", desk_model_checks},
        {"Burnside arithmetic", burnside},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        auto t0 = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << " ["
                  << seconds_since(t0) << " s]" << std::endl;
    }
    return failed;
}

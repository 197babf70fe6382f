#include "hypersc/burnside.hpp"
#include "hypersc/cone.hpp"
#include "hypersc/coneoff.hpp"
#include "hypersc/convexity.hpp"
#include "hypersc/group_actions.hpp"
#include "hypersc/hyperbolicity.hpp"
#include "hypersc/io.hpp"
#include "hypersc/parallel.hpp"
#include "hypersc/rotation_family.hpp"
#include "hypersc/small_cancellation.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

using namespace hypersc;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

using Action = std::function<int(Report&)>;

// Arguments that can change results; --threads and --format cannot.
std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--threads" || a == "--format") {
            ++i;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0 || a.rfind("--format=", 0) == 0) continue;
        out += a + "\n";
    }
    return out;
}

template <class T>
Json quad_ids(const FiniteLengthSpace<T>& s, const std::array<std::size_t, 4>& w) {
    Json out = Json::array();
    if (s.size() == 0) return out;
    for (std::size_t i : w) out.push_back(s.id(i));
    return out;
}

template <class T>
void fill_delta(Json& res, const FiniteLengthSpace<T>& s, const DeltaReport<T>& r) {
    res["points"] = s.size();
    res["delta_four_point"] = num(r.delta_four_point);
    res["delta_product"] = num(r.delta_product);
    res["witness"] = quad_ids(s, r.witness);
    res["product_witness"] = quad_ids(s, r.product_witness);
    res["sampled"] = r.sampled;
    if (r.sampled) {
        res["samples"] = r.samples;
        res["seed"] = r.seed;
    }
}

// Weights are exact unless a float literal appears or --float is given;
// --exact forces exact parsing of float literals too.
bool want_exact(const SpaceDoc& doc, bool exact, bool use_float) {
    if (exact && use_float) throw InputError(ErrorCode::invalid_argument, "--exact and --float are exclusive");
    return exact || (!use_float && doc_is_exact(doc));
}

Rational parse_length(const std::string& text) {
    // "<number>*bold" scales by the plane constant.
    const std::string suffix = "*bold";
    if (text.size() > suffix.size() && text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0)
        return parse_rational(text.substr(0, text.size() - suffix.size())) * ScalarTraits<Rational>::from_double(BOLD_DELTA);
    if (text == "bold") return ScalarTraits<Rational>::from_double(BOLD_DELTA);
    return parse_rational(text);
}

double parse_length_double(const std::string& text) { return parse_length(text).convert_to<double>(); }

CPoint parse_cpoint(const ConeOffSpace& sp, const std::string& text) {
    // "v" base vertex, "apex:K", or "K:v@r" for a point of cone K.
    if (text.rfind("apex:", 0) == 0) {
        std::size_t a = std::stoul(text.substr(5));
        return sp.normalize(CPoint::apex(a));
    }
    auto colon = text.find(':');
    auto at = text.find('@');
    if (colon != std::string::npos && at != std::string::npos && colon < at) {
        std::size_t a = std::stoul(text.substr(0, colon));
        std::size_t v = sp.base().index(text.substr(colon + 1, at - colon - 1));
        double r = parse_length_double(text.substr(at + 1));
        return sp.normalize(CPoint::in_cone(a, v, r));
    }
    return CPoint::at_base(sp.base().index(text));
}

Json word_list(const std::vector<Word>& ws) {
    Json out = Json::array();
    for (const auto& w : ws) out.push_back(w.empty() ? "1" : w);
    return out;
}

Json model_subset(const CayleyTreeModel& m, const Subset& y) {
    std::vector<Word> ws;
    for (std::size_t i : y) ws.push_back(m.word(i));
    return word_list(ws);
}

Perm parse_perm(const Json& j, const FiniteLengthSpace<double>& base) {
    if (!j.is_array() || j.size() != base.size())
        throw InputError(ErrorCode::malformed, "permutation must list the image of every base vertex in order");
    Perm p;
    for (const auto& v : j) p.push_back(base.index(require_string(v, "permutation entry")));
    std::vector<char> hit(p.size(), 0);
    for (std::size_t v : p) {
        if (hit[v]) throw InputError(ErrorCode::validation, "permutation is not a bijection");
        hit[v] = 1;
    }
    return p;
}

Json perm_json(const FiniteLengthSpace<double>& X, const Perm& g) {
    Json out = Json::array();
    for (std::size_t v : g) out.push_back(X.id(v));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypersc: hyperbolicity, cone-offs and small cancellation on finite models"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", seed, "seed for any sampling");
    app.add_option("--threads", threads, "worker threads (0: HYPERSC_THREADS or hardware)");

    Action action;
    std::string digest_args = join_args(argc, argv);

    // delta
    std::string delta_file;
    bool delta_exact = false, delta_float = false;
    std::uint64_t delta_samples = 2000000;
    std::size_t delta_cap = 256;
    auto* delta = app.add_subcommand("delta", "four-point and product hyperbolicity constants");
    delta->add_option("file", delta_file, "space file")->required();
    delta->add_flag("--exact", delta_exact, "exact rational arithmetic");
    delta->add_flag("--float", delta_float, "double precision with tolerance 1e-9");
    delta->add_option("--sample", delta_samples, "quadruple samples beyond the cap");
    delta->add_option("--cap", delta_cap, "largest space handled exhaustively");
    delta->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(delta_file);
            rep.digest_source += text;
            auto doc = parse_space_doc(parse_json_text(text));
            DeltaOptions opt{delta_cap, delta_samples, seed};
            rep.inputs = {{"file", delta_file}, {"cap", delta_cap}};
            if (want_exact(doc, delta_exact, delta_float)) {
                auto s = space_exact(doc);
                fill_delta(rep.results, s, hyperbolicity_delta(s, opt));
                rep.results["arithmetic"] = "exact";
            } else {
                auto s = space_double(doc);
                fill_delta(rep.results, s, hyperbolicity_delta(s, opt));
                rep.results["arithmetic"] = "float";
            }
            rep.certification["exhaustive"] = !rep.results["sampled"].get<bool>();
            return kOk;
        };
    });

    // gromov
    std::string gromov_file;
    std::vector<std::string> gromov_pts;
    auto* gromov = app.add_subcommand("gromov", "Gromov product <x,y>_z");
    gromov->add_option("file", gromov_file, "space file")->required();
    gromov->add_option("points", gromov_pts, "x y z")->required()->expected(3);
    gromov->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(gromov_file);
            rep.digest_source += text;
            auto doc = parse_space_doc(parse_json_text(text));
            rep.inputs = {{"file", gromov_file}, {"x", gromov_pts[0]}, {"y", gromov_pts[1]}, {"z", gromov_pts[2]}};
            auto run = [&](const auto& s) {
                std::size_t x = s.index(gromov_pts[0]), y = s.index(gromov_pts[1]), z = s.index(gromov_pts[2]);
                rep.results["gromov_product"] = num(gromov_product(s, x, y, z));
                rep.results["d_xy"] = num(s.d(x, y));
                rep.results["d_xz"] = num(s.d(x, z));
                rep.results["d_yz"] = num(s.d(y, z));
            };
            if (doc_is_exact(doc))
                run(space_exact(doc));
            else
                run(space_double(doc));
            return kOk;
        };
    });

    // qc
    std::string qc_file, qc_subset, qc_subset_file, qc_delta;
    bool qc_strong = false;
    auto* qc = app.add_subcommand("qc", "quasi-convexity constant and strong quasi-convexity");
    qc->add_option("file", qc_file, "space file")->required();
    qc->add_option("--subset", qc_subset, "comma-separated point ids");
    qc->add_option("--subset-file", qc_subset_file, "JSON {\"subset\": [...]}");
    qc->add_option("--delta", qc_delta, "hyperbolicity constant (default: computed product constant)");
    qc->add_flag("--strong-check", qc_strong, "exit 1 unless the subset is strongly quasi-convex");
    qc->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(qc_file);
            rep.digest_source += text;
            auto doc = parse_space_doc(parse_json_text(text));
            std::vector<std::string> ids;
            if (!qc_subset_file.empty()) {
                std::string st = read_text_file(qc_subset_file);
                rep.digest_source += st;
                ids = subset_ids_from_json(parse_json_text(st));
            } else {
                ids = split_list(qc_subset);
            }
            rep.inputs = {{"file", qc_file}, {"subset", ids}};
            bool verdict = false;
            auto run = [&](const auto& s, auto delta) {
                using T = decltype(delta);
                Subset y = subset_from_ids(s, ids);
                T d = qc_delta.empty() ? hyperbolicity_delta(s).delta_product : T(delta);
                auto sq = strong_quasi_convexity_check(s, y, d);
                rep.results["delta"] = num(d);
                rep.results["alpha"] = num(sq.alpha);
                rep.results["path_connected"] = sq.path_connected;
                rep.results["induced_excess"] = num(sq.excess);
                rep.results["strongly_quasi_convex"] = sq.verdict;
                verdict = sq.verdict;
            };
            if (doc_is_exact(doc))
                run(space_exact(doc), qc_delta.empty() ? Rational(0) : parse_rational(qc_delta));
            else
                run(space_double(doc), qc_delta.empty() ? 0.0 : parse_length_double(qc_delta));
            return qc_strong && !verdict ? kCheckFailed : kOk;
        };
    });

    // cone
    std::string cone_base;
    std::string cone_rho = "3";
    std::size_t cone_levels = 3;
    bool cone_delta_check = false;
    std::size_t cone_circle = 0;
    auto* cone = app.add_subcommand("cone", "sampled hyperbolic cone over a base space");
    cone->add_option("--base", cone_base, "base space file");
    cone->add_option("--circle", cone_circle, "use a cycle of this many points and circumference 2 pi sinh rho");
    cone->add_option("--rho", cone_rho, "cone radius");
    cone->add_option("--levels", cone_levels, "radial levels per base point");
    cone->add_flag("--delta-check", cone_delta_check, "exit 1 unless delta <= 2 BOLD_DELTA + 0.05");
    cone->callback([&] {
        action = [&](Report& rep) {
            const double rho = parse_length_double(cone_rho);
            if (!(rho > 0)) throw InputError(ErrorCode::invalid_argument, "rho must be positive");
            FiniteLengthSpace<double> base;
            if (!cone_base.empty()) {
                std::string text = read_text_file(cone_base);
                rep.digest_source += text;
                base = space_double(parse_space_doc(parse_json_text(text)));
            } else if (cone_circle >= 3) {
                base = cycle_space(cone_circle, 2 * std::numbers::pi * std::sinh(rho));
            } else {
                throw InputError(ErrorCode::invalid_argument, "give --base or --circle N with N >= 3");
            }
            if (cone_levels == 0) throw InputError(ErrorCode::invalid_argument, "levels must be positive");
            rep.inputs = {{"rho", rho}, {"levels", cone_levels}, {"base", cone_base.empty() ? "circle" : cone_base}};
            ConeSpec spec(base, rho);
            auto X = sample_cone_space(spec, level_radii(rho, cone_levels), false);
            auto bad = X.metric_violation();
            rep.results["points"] = X.size();
            rep.results["metric_ok"] = !bad.has_value();
            if (bad) rep.results["metric_violation"] = *bad;
            rep.results["mu_at_pi_sinh_rho"] = mu(std::numbers::pi * std::sinh(rho), rho);
            rep.results["two_rho"] = 2 * rho;
            rep.results["mu_cubic_coefficient"] = mu_cubic_coefficient(rho);
            auto d = hyperbolicity_delta(X, DeltaOptions{256, 2000000, seed});
            fill_delta(rep.results["delta"], X, d);
            const double limit = 2 * BOLD_DELTA + 0.05;
            rep.results["delta_limit"] = limit;
            rep.results["bold_delta"] = BOLD_DELTA;
            const bool ok = d.delta_four_point <= limit && !bad;
            rep.results["delta_within_limit"] = d.delta_four_point <= limit;
            rep.certification["exhaustive"] = !d.sampled;
            return cone_delta_check && !ok ? kCheckFailed : kOk;
        };
    });

    // coneoff
    std::string co_file;
    std::vector<std::string> co_query;
    bool co_sandwich = false, co_delta = false;
    std::size_t co_levels = 2;
    auto* coneoff = app.add_subcommand("coneoff", "cone-off distances, sandwich check and sampled delta");
    coneoff->add_option("file", co_file, "cone-off file")->required();
    coneoff->add_option("--query", co_query, "two points: v, apex:K or K:v@r")->expected(2);
    coneoff->add_flag("--sandwich-check", co_sandwich, "exit 1 unless mu(d_X) <= dot <= d_X");
    coneoff->add_flag("--delta", co_delta, "delta of the sampled cone-off");
    coneoff->add_option("--levels", co_levels, "interior radial levels per cone point for --delta");
    coneoff->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(co_file);
            rep.digest_source += text;
            auto doc = parse_coneoff_doc(parse_json_text(text));
            auto sp = build_coneoff(doc.base, doc.rho, doc.subsets);
            rep.inputs = {{"file", co_file}, {"rho", doc.rho}, {"attachments", doc.subsets.size()}};
            int code = kOk;
            if (!co_query.empty()) {
                CPoint p = parse_cpoint(sp, co_query[0]), q = parse_cpoint(sp, co_query[1]);
                rep.results["query"] = {{"from", co_query[0]}, {"to", co_query[1]}, {"distance", num(coneoff_distance(sp, p, q))}};
            }
            if (co_sandwich) {
                auto s = sandwich_check(sp);
                rep.results["sandwich"] = {{"holds", s.holds},
                                           {"lower_slack", num(s.lower_slack)},
                                           {"upper_slack", num(s.upper_slack)},
                                           {"triangle", s.triangle},
                                           {"worst_lower", {sp.base().id(s.worst_lower.first), sp.base().id(s.worst_lower.second)}},
                                           {"worst_upper", {sp.base().id(s.worst_upper.first), sp.base().id(s.worst_upper.second)}}};
                if (!s.holds || !s.triangle) code = kCheckFailed;
            }
            if (co_delta) {
                std::vector<double> levels;
                for (std::size_t i = 1; i <= co_levels; ++i)
                    levels.push_back(doc.rho * static_cast<double>(i) / static_cast<double>(co_levels + 1));
                auto X = sample_coneoff_space(sp, levels);
                auto d = hyperbolicity_delta(X, DeltaOptions{256, 2000000, seed});
                fill_delta(rep.results["delta"], X, d);
                rep.certification["delta_exhaustive"] = !d.sampled;
            }
            return code;
        };
    });

    // axes
    int ax_rank = 2, ax_radius = 6;
    std::string ax_word, ax_delta = "0", ax_scale = "1";
    auto* axes = app.add_subcommand("axes", "translation length, axis and cylinder of a word on a Cayley tree ball");
    axes->add_option("--rank", ax_rank, "number of generators");
    axes->add_option("--radius", ax_radius, "ball radius");
    axes->add_option("--word", ax_word, "word (uppercase = inverse)")->required();
    axes->add_option("--delta", ax_delta, "hyperbolicity constant used for the axis");
    axes->add_option("--scale", ax_scale, "edge length");
    axes->callback([&] {
        action = [&](Report& rep) {
            Word w = reduce(parse_word(ax_word, ax_rank));
            Rational delta = parse_rational(ax_delta), scale = parse_rational(ax_scale);
            if (delta < 0) throw InputError(ErrorCode::invalid_argument, "delta must be nonnegative");
            CayleyTreeModel m(ax_rank, ax_radius, scale);
            rep.inputs = {{"rank", ax_rank}, {"radius", ax_radius}, {"word", ax_word}, {"delta", num(delta)}, {"scale", num(scale)}};
            rep.results["reduced"] = w.empty() ? "1" : w;
            rep.results["cyclic_reduction"] = cyclic_reduce(w).empty() ? "1" : cyclic_reduce(w);
            rep.results["primitive_root"] = primitive_root(w).empty() ? "1" : primitive_root(w);
            rep.results["ball_size"] = m.size();
            rep.results["translation_length"] = num(m.translation_length(w));
            rep.results["translation_length_on_ball"] = num(m.translation_length_on_ball(w));
            rep.results["stable_length"] = num(stable_length(m, w, delta).estimate);
            rep.results["axis"] = model_subset(m, axis(m, w, delta));
            if (!cyclic_reduce(w).empty()) {
                auto cyl = cylinder(m, w, delta);
                rep.results["cylinder"] = model_subset(m, cyl.set);
                rep.results["cylinder_method"] = cyl.method;
                rep.results["cylinder_boundary_points"] = cyl.boundary_vertices;
                if (cyl.boundary_vertices > 0) rep.warnings.push_back("cylinder is truncated by the ball boundary");
            } else {
                rep.results["cylinder"] = nullptr;
                rep.warnings.push_back("element is not hyperbolic: no cylinder");
            }
            rep.certification["translation_length_matches_ball"] =
                m.translation_length(w) == m.translation_length_on_ball(w);
            return kOk;
        };
    });

    // invariant-a
    int ia_rank = 2, ia_radius = 4;
    std::string ia_words, ia_delta = "1/10", ia_scale = "1";
    auto* inva = app.add_subcommand("invariant-a", "invariant A and injectivity radius for free-group words");
    inva->add_option("--rank", ia_rank, "number of generators");
    inva->add_option("--radius", ia_radius, "ball radius");
    inva->add_option("--words", ia_words, "comma-separated words")->required();
    inva->add_option("--delta", ia_delta, "hyperbolicity constant");
    inva->add_option("--scale", ia_scale, "edge length");
    inva->callback([&] {
        action = [&](Report& rep) {
            Rational delta = parse_rational(ia_delta), scale = parse_rational(ia_scale);
            if (delta < 0) throw InputError(ErrorCode::invalid_argument, "delta must be nonnegative");
            CayleyTreeModel m(ia_rank, ia_radius, scale);
            std::vector<Word> ws;
            for (const auto& t : split_list(ia_words)) ws.push_back(reduce(parse_word(t, ia_rank)));
            rep.inputs = {{"rank", ia_rank}, {"radius", ia_radius}, {"words", word_list(ws)}, {"delta", num(delta)}, {"scale", num(scale)}};
            std::function<bool(const Word&, const Word&)> el = [](const Word& a, const Word& b) { return elementary_test_free(a, b); };
            auto A = invariant_A(m, ws, el, delta);
            rep.results["A"] = num(A.value);
            rep.results["admissible"] = A.admissible;
            rep.results["pairs"] = A.pairs;
            if (A.any_pair) rep.results["witness"] = word_list({A.witness.first, A.witness.second});
            else rep.warnings.push_back("no admissible non-elementary pair: A = 0 by convention");
            rep.results["rinj"] = num(rinj(m, ws));
            return kOk;
        };
    });

    // sc-check
    std::string sc_file, sc_lambda = "1/6", sc_variant = "cprime";
    bool sc_family = false;
    auto* sc = app.add_subcommand("sc-check", "C'(lambda) / C''(lambda) for a presentation");
    sc->add_option("file", sc_file, "presentation file")->required();
    sc->add_option("--lambda", sc_lambda, "small cancellation parameter");
    sc->add_option("--variant", sc_variant, "cprime or cdouble")->check(CLI::IsMember({"cprime", "cdouble"}));
    sc->add_flag("--family", sc_family, "also report Delta(Q), T(Q) and the axis equivalence");
    sc->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(sc_file);
            rep.digest_source += text;
            auto p = parse_presentation(text);
            Rational lambda = parse_rational(sc_lambda);
            auto var = sc_variant == "cprime" ? ScVariant::cprime : ScVariant::cdoubleprime;
            auto v = check_small_cancellation(p, lambda, var);
            auto mp = max_piece(p);
            rep.inputs = {{"file", sc_file}, {"lambda", num(lambda)}, {"variant", sc_variant}};
            rep.results["generators"] = p.generators;
            rep.results["relators"] = word_list(p.relators);
            rep.results["cyclic_conjugates"] = cyclic_conjugates(p).size();
            rep.results["max_piece"] = mp.length;
            if (mp.witness) rep.results["max_piece_witness"] = {mp.witness->first, mp.witness->second};
            rep.results["min_relator_length"] = v.min_relator_length;
            rep.results["pass"] = v.pass;
            Json viol = Json::array();
            for (const auto& x : v.violations)
                viol.push_back({{"word", x.word}, {"other", x.other}, {"piece", x.piece}, {"length", x.bound_length}});
            rep.results["violations"] = viol;
            if (sc_family) {
                auto q = q_family_from_relators(p);
                auto eq = cdouble_equivalence(p, q, lambda);
                auto ax = piece_axis_equivalence(p);
                rep.results["family"] = {{"Delta", num(q.Delta)},
                                         {"T", num(q.T)},
                                         {"members", q.family.size()},
                                         {"same_axis_conflict", q.same_axis_conflict},
                                         {"c_doubleprime", eq.c_doubleprime},
                                         {"Delta_le_lambda_T", eq.family_bound},
                                         {"agree", eq.agree()},
                                         {"axis_pairs", ax.pairs_checked},
                                         {"axis_max_discrepancy", ax.max_discrepancy}};
            }
            return v.pass ? kOk : kCheckFailed;
        };
    });

    // graph-sc
    std::string gsc_file, gsc_lambda;
    std::size_t gsc_cap = 64;
    auto* gsc = app.add_subcommand("graph-sc", "girth and pieces of a labelled graph");
    gsc->add_option("file", gsc_file, "labelled graph file")->required();
    gsc->add_option("--cap", gsc_cap, "longest piece explored");
    gsc->add_option("--lambda", gsc_lambda, "exit 1 unless every piece is at most lambda times the girth");
    gsc->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(gsc_file);
            rep.digest_source += text;
            auto g = parse_labelled_graph(parse_json_text(text));
            rep.inputs = {{"file", gsc_file}, {"cap", gsc_cap}};
            auto girth = graph_girth(g);
            auto piece = graph_max_piece(g, gsc_cap);
            rep.results["girth"] = girth ? Json(*girth) : Json("inf");
            rep.results["max_piece"] = piece.length;
            rep.results["indeterminate"] = piece.indeterminate;
            rep.results["witness"] = piece.witness;
            if (piece.indeterminate) rep.warnings.push_back("indeterminate >= cap: two distinct paths still share a label at the cap");
            if (gsc_lambda.empty()) return kOk;
            Rational lambda = parse_rational(gsc_lambda);
            rep.inputs["lambda"] = num(lambda);
            bool ok = !piece.indeterminate &&
                      (!girth || Rational(static_cast<long long>(piece.length)) <= lambda * static_cast<long long>(*girth));
            rep.results["pass"] = ok;
            return ok ? kOk : kCheckFailed;
        };
    });

    // rotation
    std::string rot_file, rot_check = "all";
    bool rot_desk = false;
    std::size_t rot_words = 8;
    double rot_disp = -1;
    auto* rot = app.add_subcommand("rotation", "rotation family axioms and K-ball checks");
    rot->add_option("file", rot_file, "family file");
    rot->add_flag("--desk-model", rot_desk, "use the built-in two-apex model");
    rot->add_option("--budget-words", rot_words, "word length budget");
    rot->add_option("--budget-displacement", rot_disp, "displacement budget (default: diameter)");
    rot->add_option("--check", rot_check, "all, axioms, fundamental, stabilizer, local, product or quotient-ball")
        ->check(CLI::IsMember({"all", "axioms", "fundamental", "stabilizer", "local", "product", "quotient-ball"}));
    rot->callback([&] {
        action = [&](Report& rep) {
            std::optional<RotationFamilySpec> spec;
            if (rot_desk) {
                spec = desk_model().spec;
                rep.inputs["model"] = "desk";
            } else {
                if (rot_file.empty()) throw InputError(ErrorCode::invalid_argument, "give a family file or --desk-model");
                std::string text = read_text_file(rot_file);
                rep.digest_source += text;
                Json j = parse_json_text(text);
                auto doc = parse_coneoff_doc(require(j, "space"));
                auto sp = build_coneoff(doc.base, doc.rho, doc.subsets);
                std::vector<double> levels = j.contains("levels") ? j.at("levels").get<std::vector<double>>()
                                                                  : std::vector<double>{doc.rho / 6, doc.rho / 2, 5 * doc.rho / 6};
                auto X = sample_coneoff_space(sp, levels);
                std::vector<RotationPair> pairs;
                for (const auto& pj : require(j, "pairs")) {
                    const Json& apex = require(pj, "apex");
                    std::size_t a = apex.is_number_integer() ? apex.get<std::size_t>()
                                                              : std::stoul(require_string(apex, "apex").substr(4));
                    if (a >= sp.attachments().size()) throw InputError(ErrorCode::unknown_point, "apex out of range");
                    RotationPair rp{coneoff_sample_apex(sp, levels.size(), a), {}};
                    for (const auto& h : require(pj, "subgroup"))
                        rp.H.push_back(extend_to_coneoff_sample(sp, levels.size(), parse_perm(h, doc.base)));
                    pairs.push_back(std::move(rp));
                }
                std::vector<Perm> conj;
                if (j.contains("conjugators"))
                    for (const auto& c : j.at("conjugators"))
                        conj.push_back(extend_to_coneoff_sample(sp, levels.size(), parse_perm(c, doc.base)));
                spec = make_rotation_family(std::move(X), weight_double(require(j, "sigma")), std::move(pairs), std::move(conj));
                rep.inputs["file"] = rot_file;
            }
            const auto& s = *spec;
            const double disp = rot_disp >= 0 ? rot_disp : s.X.diameter();
            rep.inputs["budget_words"] = rot_words;
            rep.inputs["budget_displacement"] = disp;
            rep.inputs["check"] = rot_check;
            rep.results["points"] = s.X.size();
            rep.results["sigma"] = s.sigma;
            auto ball = enumerate_k_ball(s, rot_words, disp);
            rep.results["k_ball"] = {{"elements", ball.elements.size()}, {"generators", ball.generators.size()},
                                     {"pruned", ball.pruned}, {"closed", ball.closed}};
            rep.certification["k_ball_complete"] = ball.complete();
            const bool all = rot_check == "all";
            bool ok = true;
            auto dr = hyperbolicity_delta(s.X);
            rep.results["delta_product"] = dr.delta_product;
            rep.results["delta_four_point"] = dr.delta_four_point;
            if (all || rot_check == "axioms") {
                auto ax = verify_rotation_axioms(s);
                rep.results["axioms"] = {{"R1", ax.R1}, {"R2", ax.R2}, {"R3", ax.R3}, {"R1_checked", ax.R1_checked},
                                         {"R1_worst", ax.R1_worst}};
                ok = ok && ax.all();
            }
            if (all || rot_check == "fundamental") {
                auto f = fundamental_theorem_check(s, ball);
                rep.results["fundamental"] = {{"bound", f.bound},
                                              {"scanned", f.scanned},
                                              {"min_displacement", num(f.min_displacement)},
                                              {"holds", f.holds},
                                              {"vacuous", f.scanned == 0},
                                              {"free_outside_apices", f.free_holds},
                                              {"free_worst_slack", num(f.free_worst_slack)}};
                ok = ok && f.holds && f.free_holds;
            }
            if (all || rot_check == "stabilizer") {
                auto st = stabilizer_check(s, ball);
                rep.results["stabilizer"] = {{"holds", st.holds}, {"quantitative_holds", st.quantitative_holds},
                                             {"quantitative_checked", st.quantitative_checked},
                                             {"worst_quantitative", num(st.worst_quantitative)}};
                ok = ok && st.holds && st.quantitative_holds;
            }
            if (all || rot_check == "local") {
                // Points farthest from the apices, radius sigma/40.
                std::size_t best = 0;
                for (std::size_t x = 1; x < s.X.size(); ++x)
                    if (nearest_apex_distance(s, x) > nearest_apex_distance(s, best)) best = x;
                auto li = local_isometry_check(s, ball, best, s.sigma / 40);
                rep.results["local_isometry"] = {{"center", s.X.id(best)}, {"hypotheses", li.hypotheses},
                                                 {"holds", li.holds}, {"pairs", li.pairs}, {"worst_error", li.worst_error}};
                ok = ok && (!li.hypotheses || li.holds);
            }
            if (all || rot_check == "product") {
                auto sp = small_product_check(s, dr.delta_product);
                rep.results["small_product"] = {{"worst", sp.worst}, {"bound", sp.bound}, {"holds", sp.holds}};
                ok = ok && sp.holds;
            }
            if (all || rot_check == "quotient-ball") {
                Json qb = Json::array();
                for (std::size_t i = 0; i < s.pairs.size(); ++i) {
                    auto q = quotient_ball_delta(s, ball, i, dr.delta_product);
                    qb.push_back({{"pair", i}, {"orbits", q.orbits}, {"delta", q.delta}, {"bound", q.bound}, {"holds", q.holds}});
                    ok = ok && q.holds;
                }
                rep.results["quotient_ball"] = qb;
            }
            rep.results["pass"] = ok;
            return ok ? kOk : kCheckFailed;
        };
    });

    // burnside-params
    std::string bp_rho0 = "20", bp_delta0 = "1e-10*bold", bp_Delta0 = "1e-10*bold", bp_bold = "bold", bp_n1;
    auto* bp = app.add_subcommand("burnside-params", "critical exponent of the induction and the constant c(n1)");
    bp->add_option("--rho0", bp_rho0, "rho0 (numbers may end in *bold)");
    bp->add_option("--delta0", bp_delta0, "delta0");
    bp->add_option("--Delta0", bp_Delta0, "Delta0");
    bp->add_option("--bold", bp_bold, "hyperbolicity constant of the plane");
    bp->add_option("--n1", bp_n1, "evaluate c(n1)");
    bp->callback([&] {
        action = [&](Report& rep) {
            BurnsideInput in{parse_length(bp_rho0), parse_length(bp_delta0), parse_length(bp_Delta0), parse_length(bp_bold)};
            rep.inputs = {{"rho0", num(in.rho0)}, {"delta0", num(in.delta0)}, {"Delta0", num(in.Delta0)}, {"bold", num(in.bold)}};
            auto r = critical_exponent_search(in);
            rep.results["delta1"] = r.delta1;
            rep.results["C"] = r.C;
            rep.results["c_threshold"] = r.threshold;
            rep.results["log10_N"] = r.log10_N;
            rep.results["binding_inequality"] = r.binding + 1;
            rep.results["resolved"] = r.resolved;
            rep.results["log10_n0"] = r.log10_n0;
            if (r.resolved) {
                rep.results["n0"] = r.n0->str();
                Json tab = Json::array();
                for (const auto& [n, l] : r.lambda_table) tab.push_back({{"n", n.str()}, {"lambda", l}});
                rep.results["lambda_table"] = tab;
                rep.results["guard_steps"] = r.guard_steps;
            } else {
                rep.warnings.push_back("n0 exceeds 2^65536; only log10 n0 is reported");
            }
            if (!bp_n1.empty()) {
                auto c = c_constant(in, BigInt(bp_n1));
                rep.results["c"] = {{"n1", bp_n1}, {"value", c.value}, {"below_one", c.below_one}};
            }
            rep.certification["n0_exact"] = r.resolved;
            return kOk;
        };
    });

    // gm-bounds
    std::string gm_rho = "3", gm_T = "100", gm_k = "1", gm_l = "0", gm_diam = "1", gm_dist, gm_delta = "1";
    std::string gm_rrho = "1e20*bold", gm_rdelta0 = "1e-10*bold";
    auto* gm = app.add_subcommand("gm-bounds", "embedding radius and distortion for graphical small cancellation");
    gm->add_option("--rho", gm_rho, "cone radius");
    gm->add_option("--T", gm_T, "T(Q)");
    gm->add_option("--k", gm_k, "quasi-isometry multiplicative constant");
    gm->add_option("--l", gm_l, "quasi-isometry additive constant");
    gm->add_option("--diam", gm_diam, "diameter of the graph");
    gm->add_option("--distance", gm_dist, "evaluate the lower bound at this graph distance");
    gm->add_option("--remark-delta", gm_delta, "delta for the lower bound on R");
    gm->add_option("--remark-rho", gm_rrho, "rho for the lower bound on R");
    gm->add_option("--remark-delta0", gm_rdelta0, "delta0 for the lower bound on R");
    gm->callback([&] {
        action = [&](Report& rep) {
            const double rho = parse_length_double(gm_rho), T = parse_length_double(gm_T), k = parse_length_double(gm_k),
                         l = parse_length_double(gm_l), diam = parse_length_double(gm_diam);
            rep.inputs = {{"rho", rho}, {"T", T}, {"k", k}, {"l", l}, {"diam", diam}};
            auto b = gm_embedding_bounds(rho, T, k, l, diam);
            rep.results["R"] = num(b.R);
            rep.results["log10_R"] = num(b.log10_R);
            rep.results["coefficient"] = num(b.coefficient);
            rep.results["log10_coefficient"] = num(b.log10_coefficient);
            if (!gm_dist.empty()) rep.results["distance_lower_bound"] = num(gm_distance_lower_bound(b, parse_length_double(gm_dist), k, l));
            auto r = gm_remark(parse_length_double(gm_delta), parse_length_double(gm_rdelta0), parse_length_double(gm_rrho));
            rep.results["remark"] = {{"log10_R_min", r.log10_R_min},
                                     {"log10_1e30_delta_over_20", r.log10_derived},
                                     {"log10_1e200_delta_over_20", r.log10_claimed},
                                     {"R_min_ge_1e30_bound", r.derived_holds},
                                     {"R_min_ge_1e200_bound", r.claimed_holds}};
            return kOk;
        };
    });

    // cartan-hadamard
    std::string ch_file, ch_sigma;
    auto* ch = app.add_subcommand("cartan-hadamard", "local versus global hyperbolicity");
    ch->add_option("file", ch_file, "space file")->required();
    ch->add_option("--sigma", ch_sigma, "ball radius")->required();
    ch->callback([&] {
        action = [&](Report& rep) {
            std::string text = read_text_file(ch_file);
            rep.digest_source += text;
            auto doc = parse_space_doc(parse_json_text(text));
            rep.inputs = {{"file", ch_file}, {"sigma", ch_sigma}};
            auto run = [&](const auto& s, auto sigma) {
                auto p = local_delta_profile(s, sigma, DeltaOptions{256, 2000000, seed});
                rep.results["local_delta"] = num(p.local_delta);
                rep.results["global_delta"] = num(p.global.delta_four_point);
                rep.results["prediction_holds"] = p.prediction_holds;
                rep.results["sigma_hypothesis"] = p.sigma_hypothesis;
                rep.results["simply_connected_certified"] = p.simply_connected_certified;
                rep.results["max_fundamental_cycle_diameter"] = num(p.max_fundamental_cycle_diameter);
                Json balls = Json::array();
                for (const auto& d : p.ball_delta) balls.push_back(num(d));
                rep.results["ball_delta"] = balls;
                rep.results["hypotheses_met"] = p.sigma_hypothesis && p.simply_connected_certified;
                if (!p.sigma_hypothesis) rep.warnings.push_back("hypothesis sigma > 1e7 local delta violated");
                if (!p.simply_connected_certified) rep.warnings.push_back("simple connectivity at scale 1e-5 sigma not certified");
            };
            if (doc_is_exact(doc))
                run(space_exact(doc), parse_rational(ch_sigma));
            else
                run(space_double(doc), parse_length_double(ch_sigma));
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    if (threads > 0) set_thread_count(threads);

    Report rep;
    rep.command = app.get_subcommands().front()->get_name();
    rep.digest_source = digest_args;
    int code = kOk;
    try {
        code = action(rep);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    rep.results["exit_code"] = code;
    std::cout << render_report(rep, format);
    return code;
}

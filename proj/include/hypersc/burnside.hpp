#pragma once

#include "scalar.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <gmp.h>
#include <mpfr.h>

#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hypersc {

using MpFloat = boost::multiprecision::mpfr_float;

namespace detail {

// Sets working precision (bits) and the widest exponent range for the scope.
class MpScope {
public:
    explicit MpScope(unsigned bits) : saved_(MpFloat::default_precision()) {
        mpfr_set_emax(mpfr_get_emax_max());
        mpfr_set_emin(mpfr_get_emin_min());
        MpFloat::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)) + 2);
    }
    ~MpScope() { MpFloat::default_precision(saved_); }
    MpScope(const MpScope&) = delete;
    MpScope& operator=(const MpScope&) = delete;

private:
    unsigned saved_;
};

inline MpFloat mp_of(const Rational& q) {
    return MpFloat(numerator(q).str()) / MpFloat(denominator(q).str());
}

inline MpFloat mp_of(const BigInt& n) { return MpFloat(n.str()); }

inline MpFloat mp_pi() { return boost::multiprecision::acos(MpFloat(-1)); }

inline MpFloat log_sinh(const MpFloat& x) {
    if (x > 50) return x - log(MpFloat(2)) + log1p(-exp(-2 * x));
    return log(sinh(x));
}

inline BigInt mp_ceil(const MpFloat& x) {
    MpFloat c = ceil(x);
    mpz_t z;
    mpz_init(z);
    mpfr_get_z(z, c.backend().data(), MPFR_RNDN);
    char* s = mpz_get_str(nullptr, 10, z);
    BigInt out(s);
    void (*freefunc)(void*, std::size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, std::strlen(s) + 1);
    mpz_clear(z);
    return out;
}

inline std::string mp_str(const MpFloat& x, int digits = 20) {
    return x.str(digits, std::ios_base::scientific);
}

}  // namespace detail

struct BurnsideInput {
    Rational rho0;
    Rational delta0;
    Rational Delta0;
    Rational bold;  // hyperbolicity constant of the hyperbolic plane
};

inline void validate(const BurnsideInput& in) {
    if (!(in.rho0 > 0)) throw InputError(ErrorCode::invalid_argument, "rho0 must be positive");
    if (!(in.delta0 > 0)) throw InputError(ErrorCode::invalid_argument, "delta0 must be positive");
    if (!(in.Delta0 > 0)) throw InputError(ErrorCode::invalid_argument, "Delta0 must be positive");
    if (!(in.bold > 0)) throw InputError(ErrorCode::invalid_argument, "the plane constant must be positive");
}

// n0 is reported exactly when it fits in this many bits.
inline constexpr unsigned kExactBitLimit = 65536;

struct BurnsideReport {
    std::string delta1;
    std::string C;          // pi sinh rho0 / (5 sqrt(rho0 delta1))
    std::string threshold;  // C^2: c(n1) < 1 iff n1 > C^2
    std::array<double, 4> log10_N{};  // each inequality holds iff n >= N_i
    int binding = 0;                  // index of the largest N_i
    bool resolved = false;
    std::optional<BigInt> n0;
    double log10_n0 = 0;
    unsigned precision_bits = 0;
    unsigned guard_steps = 0;
    std::vector<std::pair<BigInt, std::string>> lambda_table;  // (n, lambda_n)
};

namespace detail {

struct LogTerms {
    MpFloat logC, log_delta1;
    std::array<MpFloat, 4> logN;
};

// Natural logs of C and of the four thresholds; safe for any input size.
inline LogTerms burnside_logs(const BurnsideInput& in) {
    const MpFloat rho0 = mp_of(in.rho0), delta0 = mp_of(in.delta0), Delta0 = mp_of(in.Delta0);
    const MpFloat delta1 = 640000 * mp_of(in.bold);
    const MpFloat lpi = log(mp_pi());
    LogTerms t;
    t.log_delta1 = log(delta1);
    t.logC = lpi + log_sinh(rho0) - log(MpFloat(5)) - (log(rho0) + t.log_delta1) / 2;
    const MpFloat log_s = log_sinh(10000 * delta1);
    const MpFloat log_2pis = log(MpFloat(2)) + lpi + log_s;
    const MpFloat log_num = log_2pis + log1p(exp(log(86 * delta1) - log_2pis));
    const MpFloat log_min = boost::multiprecision::min(log(Delta0), MpFloat(lpi + log_s));
    t.logN[0] = 2 * (t.logC + t.log_delta1 - log(delta0));
    t.logN[1] = 2 * (t.logC + log_num - log_min);
    t.logN[2] = 2 * (t.logC + log(MpFloat(100)) + log(rho0) - lpi - log_sinh(rho0));
    t.logN[3] = 2 * t.logC;
    return t;
}

}  // namespace detail

struct InequalityCheck {
    std::array<bool, 4> holds{};
    bool all() const { return holds[0] && holds[1] && holds[2] && holds[3]; }
};

// Evaluates the four inequalities literally at n, from lambda_n.
inline InequalityCheck burnside_inequalities_at(const BurnsideInput& in, const BigInt& n, unsigned bits) {
    validate(in);
    if (n <= 0) throw InputError(ErrorCode::invalid_argument, "n must be positive");
    detail::MpScope scope(bits);
    using detail::mp_of;
    const MpFloat rho0 = mp_of(in.rho0), delta0 = mp_of(in.delta0), Delta0 = mp_of(in.Delta0);
    const MpFloat delta1 = 640000 * mp_of(in.bold);
    const MpFloat pi = detail::mp_pi();
    const MpFloat lambda = pi * sinh(rho0) / (5 * sqrt(mp_of(n) * rho0 * delta1));
    const MpFloat s = sinh(10000 * delta1);
    InequalityCheck c;
    c.holds[0] = lambda * delta1 <= delta0;
    c.holds[1] = lambda * (2 * pi * s + 86 * delta1) <= boost::multiprecision::min(Delta0, MpFloat(pi * s));
    c.holds[2] = 100 * lambda * rho0 * delta1 / (pi * sinh(rho0)) <= delta1;
    c.holds[3] = lambda * rho0 <= rho0;
    return c;
}

inline BurnsideReport critical_exponent_search(const BurnsideInput& in) {
    validate(in);
    BurnsideReport rep;
    unsigned bits = 256;
    MpFloat log2_max;
    {
        detail::MpScope scope(bits);
        auto t = detail::burnside_logs(in);
        const MpFloat ln10 = log(MpFloat(10));
        for (int i = 0; i < 4; ++i) {
            rep.log10_N[i] = static_cast<double>(t.logN[i] / ln10);
            if (t.logN[i] > t.logN[rep.binding]) rep.binding = i;
        }
        log2_max = t.logN[rep.binding] / log(MpFloat(2));
        rep.log10_n0 = std::max(0.0, rep.log10_N[rep.binding]);
        rep.delta1 = detail::mp_str(exp(t.log_delta1));
        rep.C = detail::mp_str(exp(t.logC));
        rep.threshold = detail::mp_str(exp(2 * t.logC));
    }
    const double l2 = static_cast<double>(log2_max);
    if (l2 > kExactBitLimit) return rep;
    bits = static_cast<unsigned>(std::max(0.0, l2)) + 192;
    rep.precision_bits = bits;
    detail::MpScope scope(bits);
    auto t = detail::burnside_logs(in);
    MpFloat Nmax = exp(t.logN[rep.binding]);
    BigInt n0 = detail::mp_ceil(Nmax);
    if (n0 < 1) n0 = 1;
    // Rounding guard against the literal inequalities; expected to take no step.
    while (n0 > 1 && burnside_inequalities_at(in, n0 - 1, bits).all()) --n0, ++rep.guard_steps;
    while (!burnside_inequalities_at(in, n0, bits).all()) ++n0, ++rep.guard_steps;
    rep.n0 = n0;
    rep.resolved = true;
    const MpFloat C = exp(t.logC);
    for (int k = 0; k < 6; ++k) {
        BigInt n = n0 << k;
        rep.lambda_table.emplace_back(n, detail::mp_str(C / sqrt(detail::mp_of(n))));
    }
    return rep;
}

struct CConstant {
    std::string value;  // c(n1) = C / sqrt(n1)
    bool below_one = false;
};

inline CConstant c_constant(const BurnsideInput& in, const BigInt& n1, unsigned bits = 256) {
    validate(in);
    if (n1 <= 0) throw InputError(ErrorCode::invalid_argument, "n1 must be positive");
    detail::MpScope scope(bits);
    auto t = detail::burnside_logs(in);
    MpFloat logc = t.logC - log(detail::mp_of(n1)) / 2;
    CConstant c;
    c.value = detail::mp_str(exp(logc));
    c.below_one = logc < 0;
    return c;
}

// floor(C^2) when it fits, so that c(n1) < 1 exactly for n1 > floor(C^2)
// (C^2 is irrational for the inputs of interest).
inline std::optional<BigInt> c_threshold_floor(const BurnsideInput& in) {
    validate(in);
    MpFloat l2;
    {
        detail::MpScope scope(256);
        l2 = 2 * detail::burnside_logs(in).logC / log(MpFloat(2));
    }
    if (static_cast<double>(l2) > kExactBitLimit) return std::nullopt;
    unsigned bits = static_cast<unsigned>(std::max(0.0, static_cast<double>(l2))) + 192;
    detail::MpScope scope(bits);
    MpFloat th = exp(2 * detail::burnside_logs(in).logC);
    return detail::mp_ceil(th) - 1;
}

struct GmBounds {
    double log10_R = 0;            // R = (1/20) (rho / (pi sinh rho)) T
    double log10_coefficient = 0;  // (1/500) (T / diam) (rho / (pi sinh rho))
    double R = 0;
    double coefficient = 0;
    bool zero = false;             // T = 0
};

inline double log_sinh_double(double x) { return x > 20 ? x - std::log(2.0) + std::log1p(-std::exp(-2 * x)) : std::log(std::sinh(x)); }

inline GmBounds gm_embedding_bounds(double rho, double T, double k, double l, double diam) {
    if (!(rho > 0)) throw InputError(ErrorCode::invalid_argument, "rho must be positive");
    if (!(T >= 0)) throw InputError(ErrorCode::invalid_argument, "T must be nonnegative");
    if (!(k >= 1)) throw InputError(ErrorCode::invalid_argument, "k must be at least 1");
    if (!(l >= 0)) throw InputError(ErrorCode::invalid_argument, "l must be nonnegative");
    if (!(diam > 0)) throw InputError(ErrorCode::invalid_argument, "diameter must be positive");
    GmBounds b;
    if (T == 0) {
        b.zero = true;
        b.log10_R = b.log10_coefficient = -std::numeric_limits<double>::infinity();
        return b;
    }
    const double lf = std::log(rho) - std::log(std::numbers::pi) - log_sinh_double(rho);
    b.log10_R = (lf + std::log(T) - std::log(20.0)) / std::log(10.0);
    b.log10_coefficient = (lf + std::log(T) - std::log(diam) - std::log(500.0)) / std::log(10.0);
    b.R = std::pow(10.0, b.log10_R);
    b.coefficient = std::pow(10.0, b.log10_coefficient);
    return b;
}

// Lower bound on the distance between images of two graph points at distance d.
inline double gm_distance_lower_bound(const GmBounds& b, double d, double k, double l) {
    return b.coefficient * (d / (2 * k) - l);
}

struct GmRemark {
    double log10_R_min = 0;     // at the smallest T allowed by delta / T <= delta0 / (pi sinh rho)
    double log10_derived = 0;   // 10^30 delta / 20
    double log10_claimed = 0;   // 10^200 delta / 20
    bool derived_holds = false;
    bool claimed_holds = false;
};

// rho >= 10^20 bold and delta0 <= 10^-10 bold give rho / delta0 >= 10^30.
inline GmRemark gm_remark(double delta, double delta0, double rho) {
    if (!(delta > 0) || !(delta0 > 0) || !(rho > 0)) throw InputError(ErrorCode::invalid_argument, "parameters must be positive");
    GmRemark r;
    const double ln10 = std::log(10.0);
    // T_min = delta pi sinh(rho) / delta0, so the sinh factors cancel in R.
    r.log10_R_min = (std::log(rho) + std::log(delta) - std::log(delta0) - std::log(20.0)) / ln10;
    r.log10_derived = 30 + (std::log(delta) - std::log(20.0)) / ln10;
    r.log10_claimed = 200 + (std::log(delta) - std::log(20.0)) / ln10;
    const double tol = 1e-9 * std::max(1.0, std::abs(r.log10_R_min));
    r.derived_holds = r.log10_R_min >= r.log10_derived - tol;
    r.claimed_holds = r.log10_R_min >= r.log10_claimed - tol;
    return r;
}

}  // namespace hypersc

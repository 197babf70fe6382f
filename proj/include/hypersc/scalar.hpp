#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace hypersc {

// Expression templates off: results deduce as Rational in generic code.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

enum class ErrorCode {
    malformed,
    disconnected,
    nonpositive_weight,
    duplicate_edge,
    unknown_point,
    invalid_argument,
    not_hyperbolic,
    validation,
};

inline const char* error_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::malformed: return "malformed";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::nonpositive_weight: return "nonpositive_weight";
    case ErrorCode::duplicate_edge: return "duplicate_edge";
    case ErrorCode::unknown_point: return "unknown_point";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::not_hyperbolic: return "not_hyperbolic";
    case ErrorCode::validation: return "validation";
    }
    return "unknown";
}

class InputError : public std::runtime_error {
public:
    InputError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Comparison policy per scalar type. Rationals compare exactly, doubles
// with an absolute tolerance.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational tolerance() { return Rational(0); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
    static Rational from_double(double x);
    static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double tolerance() { return 1e-9; }
    static double to_double(double x) { return x; }
    static double from_double(double x) { return x; }
    static std::string str(double x) {
        std::string s = std::to_string(x);
        return s;
    }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <class T>
bool le_tol(const T& a, const T& b) {
    return a <= b + ScalarTraits<T>::tolerance();
}

template <class T>
bool eq_tol(const T& a, const T& b) {
    return le_tol(a, b) && le_tol(b, a);
}

template <class T>
T half(const T& x) {
    return x / 2;
}

template <class T>
double to_double(const T& x) {
    return ScalarTraits<T>::to_double(x);
}

// Parses "p/q", "-p/q", integers and plain decimals ("0.25", "1e-3") into an
// exact rational. Decimal strings are read digit by digit, never via double.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw InputError(ErrorCode::malformed, "not a number: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw InputError(ErrorCode::malformed, "zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    BigInt mant = 0;
    long long scale = 0;
    bool any = false;
    bool dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            if (dot) --scale;
            any = true;
        } else if (c == '.' && !dot) {
            dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            fail();
        }
    }
    if (!any) fail();
    if (i < text.size()) {
        std::string exp(text.substr(i + 1));
        if (exp.empty()) fail();
        try {
            std::size_t used = 0;
            long long e = std::stoll(exp, &used);
            if (used != exp.size()) fail();
            scale += e;
        } catch (const std::logic_error&) {
            fail();
        }
    }
    if (scale > 4000 || scale < -4000) fail();
    Rational r(mant);
    BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
    if (scale > 0) r *= p;
    if (scale < 0) r /= p;
    return neg ? Rational(-r) : r;
}

// Shortest round-trip decimal of a double, read back exactly.
inline Rational ScalarTraits<Rational>::from_double(double x) {
    if (!std::isfinite(x)) throw InputError(ErrorCode::malformed, "non-finite length");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    for (int prec = 1; prec <= 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, x);
        if (std::strtod(probe, nullptr) == x) return parse_rational(probe);
    }
    return parse_rational(buf);
}

inline double parse_double(std::string_view text) {
    return to_double(parse_rational(text));
}

// Length that may be +infinity. Used for d_SC across components, T over an
// empty family and other sup/inf conventions.
template <class T>
struct Extended {
    bool infinite = false;
    T value{};

    static Extended inf() { return Extended{true, T{}}; }
    static Extended of(T v) { return Extended{false, std::move(v)}; }

    bool operator<(const Extended& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
    bool operator==(const Extended& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    Extended operator+(const Extended& o) const {
        if (infinite || o.infinite) return inf();
        return of(value + o.value);
    }
};

template <class T>
Extended<T> ext_min(const Extended<T>& a, const Extended<T>& b) {
    return b < a ? b : a;
}

}  // namespace hypersc

#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hypersc {

// Lowercase letter = generator, uppercase = its inverse.
using Word = std::string;

inline bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

inline char inverse_letter(char c) {
    return static_cast<char>(std::islower(static_cast<unsigned char>(c)) ? std::toupper(static_cast<unsigned char>(c))
                                                                          : std::tolower(static_cast<unsigned char>(c)));
}

inline int generator_of(char c) { return std::tolower(static_cast<unsigned char>(c)) - 'a'; }

inline Word parse_word(std::string_view text, int rank = 26) {
    if (rank <= 0) throw InputError(ErrorCode::invalid_argument, "empty alphabet");
    Word w;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        if (!is_letter(c) || generator_of(c) >= rank)
            throw InputError(ErrorCode::malformed, std::string("letter '") + c + "' is not in the alphabet");
        w.push_back(c);
    }
    return w;
}

inline Word reduce(std::string_view w) {
    Word out;
    for (char c : w) {
        if (!out.empty() && out.back() == inverse_letter(c))
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

inline Word inverse(std::string_view w) {
    Word out(w.rbegin(), w.rend());
    for (char& c : out) c = inverse_letter(c);
    return out;
}

inline Word multiply(std::string_view a, std::string_view b) { return reduce(std::string(a) + std::string(b)); }

// w = u c u^-1 with c cyclically reduced.
struct CyclicDecomposition {
    Word conjugator;
    Word core;
};

inline CyclicDecomposition cyclic_decompose(std::string_view w) {
    Word r = reduce(w);
    std::size_t i = 0, j = r.size();
    while (j - i >= 2 && r[i] == inverse_letter(r[j - 1])) ++i, --j;
    return {r.substr(0, i), r.substr(i, j - i)};
}

inline Word cyclic_reduce(std::string_view w) { return cyclic_decompose(w).core; }

// Shortest period of a cyclically reduced word that divides its length.
inline std::size_t primitive_period(std::string_view c) {
    const std::size_t n = c.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = c[i] == c[i - p];
        if (ok) return p;
    }
    return n;
}

// Shortest u such that w is conjugate to a power of u, taken as a prefix of
// the cyclic reduction.
inline Word primitive_root(std::string_view w) {
    Word c = cyclic_reduce(w);
    return c.substr(0, primitive_period(c));
}

// Generator of the maximal cyclic subgroup containing w (as a group element).
inline Word group_root(std::string_view w) {
    auto [u, c] = cyclic_decompose(w);
    return reduce(u + c.substr(0, primitive_period(c)) + inverse(u));
}

// True iff g and h lie in a common cyclic subgroup of the free group.
inline bool elementary_test_free(std::string_view g, std::string_view h) {
    Word rg = group_root(g), rh = group_root(h);
    if (rg.empty() || rh.empty()) return true;
    return rg == rh || rg == inverse(rh);
}

// All cyclic conjugates of w (w assumed cyclically reduced).
inline std::vector<Word> rotations(std::string_view w) {
    std::vector<Word> out;
    for (std::size_t i = 0; i < w.size(); ++i) out.push_back(std::string(w.substr(i)) + std::string(w.substr(0, i)));
    return out;
}

inline std::size_t common_prefix(std::string_view a, std::string_view b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return k;
}

// Reduced words of length <= radius over `rank` generators, by length then
// letter order a, A, b, B, ...
inline std::vector<Word> enumerate_ball(int rank, int radius) {
    if (rank <= 0) throw InputError(ErrorCode::invalid_argument, "empty alphabet");
    std::vector<char> letters;
    for (int g = 0; g < rank; ++g) {
        letters.push_back(static_cast<char>('a' + g));
        letters.push_back(static_cast<char>('A' + g));
    }
    std::vector<Word> out{""};
    std::size_t lo = 0;
    for (int len = 1; len <= radius; ++len) {
        std::size_t hi = out.size();
        for (std::size_t i = lo; i < hi; ++i)
            for (char c : letters) {
                const Word& w = out[i];
                if (!w.empty() && w.back() == inverse_letter(c)) continue;
                out.push_back(w + c);
            }
        lo = hi;
    }
    return out;
}

}  // namespace hypersc

#include "latseg/text.hpp"

#include <cmath>
#include <cstdio>

namespace latseg {

bool is_space_char(char32_t c) {
    switch (c) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case U'': case U' ': case U' ':
        case U' ': case U' ': case U' ': case U' ':
        case U'　':
            return true;
        default:
            return c >= U' ' && c <= U' ';
    }
}

std::u32string utf8_decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            throw DataError("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + len > s.size())
            throw DataError("truncated UTF-8 sequence at offset " + std::to_string(i));
        for (size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80)
                throw DataError("invalid UTF-8 continuation at offset " + std::to_string(i + k));
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            throw DataError("invalid UTF-8 scalar at offset " + std::to_string(i));
        out.push_back(cp);
        i += len;
    }
    return out;
}

void utf8_append(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string utf8_encode(std::u32string_view s) {
    std::string out;
    out.reserve(s.size() * 3);
    for (char32_t c : s) utf8_append(out, c);
    return out;
}

Ratio Ratio::from_decimal(std::string_view text) {
    size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    long long num = 0, den = 1;
    bool digits = false, frac = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (frac) throw DataError("bad decimal: " + std::string(text));
            frac = true;
            continue;
        }
        if (c < '0' || c > '9') throw DataError("bad decimal: " + std::string(text));
        if (num > (1LL << 60) || den > (1LL << 60))
            throw DataError("decimal out of range: " + std::string(text));
        num = num * 10 + (c - '0');
        if (frac) den *= 10;
        digits = true;
    }
    if (!digits) throw DataError("bad decimal: " + std::string(text));
    return Ratio{neg ? -num : num, den};
}

Ratio Ratio::from_double(double v) {
    if (!std::isfinite(v)) throw StructuralError("non-finite ratio");
    int exp = 0;
    double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
    long long num = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    while (num != 0 && (num & 1) == 0 && exp < 0) {
        num >>= 1;
        ++exp;
    }
    if (exp >= 0) {
        if (exp > 10) throw StructuralError("ratio magnitude too large");
        return Ratio{num << exp, 1};
    }
    if (exp < -62) {  // denormal-small thresholds are meaningless here
        return Ratio{0, 1};
    }
    return Ratio{num, 1LL << (-exp)};
}

std::string Ratio::to_string() const {
    if (den == 1) return std::to_string(num);
    if (num % den == 0) return std::to_string(num / den);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", to_double());
    return buf;
}

bool le_ratio(long long a, long long b, const Ratio& r) {
    return static_cast<__int128>(a) * r.den <= static_cast<__int128>(r.num) * b;
}

bool ge_ratio(unsigned long long a, unsigned long long b, const Ratio& r) {
    if (r.num < 0) return true;
    return static_cast<unsigned __int128>(a) * static_cast<unsigned long long>(r.den) >=
           static_cast<unsigned __int128>(r.num) * b;
}

}  // namespace latseg

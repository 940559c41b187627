#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace latseg {

// File/format problems in user-supplied data. CLI maps these to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated invariants on in-memory structures (malformed label sequences,
// non-contiguous analyses, corrupted lattices). Also exit code 2 at the CLI.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sentence boundary sentinel used in character features and n-gram contexts.
inline constexpr char32_t kBoundaryChar = U'♯';  // ♯

bool is_space_char(char32_t c);

// Strict UTF-8. Invalid input throws DataError with a byte offset.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
void utf8_append(std::string& out, char32_t c);

// Exact rational with int64 terms. Comparisons cross-multiply in 128 bits,
// so thresholds like delta and epsilon never go through floating point.
struct Ratio {
    long long num = 0;
    long long den = 1;  // > 0

    static Ratio from_decimal(std::string_view text);  // "15", "0.0001", "-2.5"
    static Ratio from_double(double v);                 // exact (doubles are dyadic)

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
};

// a/b <= r ?
bool le_ratio(long long a, long long b, const Ratio& r);
// a/b >= r ?
bool ge_ratio(unsigned long long a, unsigned long long b, const Ratio& r);

}  // namespace latseg

#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "atlas/errors.hpp"

namespace atlas {

// Exact rational number on 64-bit numerator/denominator, always normalized
// (den > 0, gcd(num, den) = 1).  Arithmetic goes through 128-bit
// intermediates and throws InternalInconsistency on overflow rather than
// wrapping.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}  // NOLINT: implicit on purpose
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw InternalInconsistency("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static Rat from128(__int128 n, __int128 d) {
        if (d == 0) throw InternalInconsistency("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        const __int128 lo = -__int128(0x7fffffffffffffffLL);
        const __int128 hi = __int128(0x7fffffffffffffffLL);
        if (n < lo || n > hi || d > hi)
            throw InternalInconsistency("rational overflow");
        Rat r;
        r.num = (long long)n;
        r.den = (long long)d;
        return r;
    }

    bool is_integer() const { return den == 1; }
    long long integer() const {
        if (den != 1) throw InternalInconsistency("expected integral rational");
        return num;
    }

    friend Rat operator+(const Rat& x, const Rat& y) {
        return from128(__int128(x.num) * y.den + __int128(y.num) * x.den,
                       __int128(x.den) * y.den);
    }
    friend Rat operator-(const Rat& x, const Rat& y) {
        return from128(__int128(x.num) * y.den - __int128(y.num) * x.den,
                       __int128(x.den) * y.den);
    }
    friend Rat operator*(const Rat& x, const Rat& y) {
        return from128(__int128(x.num) * y.num, __int128(x.den) * y.den);
    }
    friend Rat operator/(const Rat& x, const Rat& y) {
        if (y.num == 0) throw InternalInconsistency("rational division by zero");
        return from128(__int128(x.num) * y.den, __int128(x.den) * y.num);
    }
    Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
    Rat& operator+=(const Rat& y) { *this = *this + y; return *this; }
    Rat& operator-=(const Rat& y) { *this = *this - y; return *this; }
    Rat& operator*=(const Rat& y) { *this = *this * y; return *this; }
    Rat& operator/=(const Rat& y) { *this = *this / y; return *this; }

    friend bool operator==(const Rat& x, const Rat& y) {
        return x.num == y.num && x.den == y.den;
    }
    friend bool operator!=(const Rat& x, const Rat& y) { return !(x == y); }
    friend bool operator<(const Rat& x, const Rat& y) {
        return __int128(x.num) * y.den < __int128(y.num) * x.den;
    }
    friend bool operator>(const Rat& x, const Rat& y) { return y < x; }
    friend bool operator<=(const Rat& x, const Rat& y) { return !(y < x); }
    friend bool operator>=(const Rat& x, const Rat& y) { return !(x < y); }

    bool is_zero() const { return num == 0; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
        return os << r.str();
    }
};

}  // namespace atlas

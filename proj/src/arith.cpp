#include "atlas/arith.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace atlas::arith {

namespace {

// Jacobi symbol (a|m) for odd m > 0.
int jacobi(i64 a, i64 m) {
    a %= m;
    if (a < 0) a += m;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = m % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) t = -t;
        a %= m;
    }
    return m == 1 ? t : 0;
}

}  // namespace

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int e = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++e;
    }
    if (e > 0) {
        if (a % 2 == 0) return 0;
        i64 r = a % 8;
        if (r < 0) r += 8;
        int two = (r == 1 || r == 7) ? 1 : -1;
        if (e % 2 == 1 && two == -1) sign = -sign;
    }
    return sign * jacobi(a, n);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (i64 p = 3; p * p <= n; p += 2)
        if (n % p == 0) return false;
    return true;
}

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (i64 p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (i64 q = p * p; q <= n; q += p) composite[q] = true;
    }
    return out;
}

std::vector<i64> FactoredSquarefree::divisors() const {
    std::vector<i64> out{1};
    for (i64 p : primes) {
        std::size_t sz = out.size();
        for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool FactoredSquarefree::divisible_by(i64 p) const {
    return std::find(primes.begin(), primes.end(), p) != primes.end();
}

FactoredSquarefree factor_squarefree(i64 n) {
    if (n < 1) throw BadInput("factor_squarefree: need n >= 1, got " + std::to_string(n));
    FactoredSquarefree f;
    f.value = n;
    i64 m = n;
    for (i64 p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0)
            throw NotSquarefree(std::to_string(n) + " is divisible by " +
                                std::to_string(p) + "^2");
        f.primes.push_back(p);
    }
    if (m > 1) f.primes.push_back(m);
    std::sort(f.primes.begin(), f.primes.end());
    return f;
}

namespace {

std::shared_mutex g_class_mutex;
std::unordered_map<i64, i64> g_class_memo;

i64 class_number_uncached(i64 d) {
    // Exhaustive enumeration of primitive reduced forms.
    i64 h = 0;
    i64 absd = -d;
    for (i64 a = 1; 3 * a * a <= absd; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - d;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && a == c) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            ++h;
        }
    }
    return h;
}

}  // namespace

i64 class_number(i64 d) {
    if (d >= 0 || ((d % 4 + 4) % 4 != 0 && (d % 4 + 4) % 4 != 1))
        throw InvalidDiscriminant("class_number: " + std::to_string(d) +
                                  " is not a negative discriminant");
    {
        std::shared_lock lock(g_class_mutex);
        auto it = g_class_memo.find(d);
        if (it != g_class_memo.end()) return it->second;
    }
    i64 h = class_number_uncached(d);
    std::unique_lock lock(g_class_mutex);
    g_class_memo.emplace(d, h);
    return h;
}

Rat hurwitz_class_number(i64 n) {
    if (n < 0) throw BadInput("hurwitz_class_number: need n >= 0");
    if (n == 0) return Rat(-1, 12);
    i64 r = n % 4;
    if (r == 1 || r == 2) return Rat(0);
    Rat h(0);
    for (i64 f = 1; f * f <= n; ++f) {
        if (n % (f * f) != 0) continue;
        i64 d = -(n / (f * f));
        i64 dm = ((d % 4) + 4) % 4;
        if (dm != 0 && dm != 1) continue;
        if (d == -3)
            h += Rat(1, 3);
        else if (d == -4)
            h += Rat(1, 2);
        else
            h += Rat(class_number(d));
    }
    return h;
}

std::vector<Rat> hurwitz_table(i64 n_max) {
    std::vector<Rat> t;
    t.reserve(n_max + 1);
    for (i64 n = 0; n <= n_max; ++n) t.push_back(hurwitz_class_number(n));
    return t;
}

DiscDecomposition decompose_discriminant(i64 d) {
    if (d >= 0 || ((d % 4 + 4) % 4 != 0 && (d % 4 + 4) % 4 != 1))
        throw InvalidDiscriminant("decompose_discriminant: bad discriminant " +
                                  std::to_string(d));
    i64 absd = -d;
    // square part of |d|
    i64 f = 1;
    i64 m = absd;
    for (i64 p = 2; p * p <= m; ++p) {
        while (m % (p * p) == 0) {
            m /= p * p;
            f *= p;
        }
        while (m % p == 0) m /= p;
    }
    i64 d0 = d / (f * f);
    i64 dm = ((d0 % 4) + 4) % 4;
    if (dm != 0 && dm != 1) {
        // fold one factor of 2 back into the fundamental part
        if (f % 2 != 0)
            throw InternalInconsistency("decompose_discriminant failed for " +
                                        std::to_string(d));
        f /= 2;
        d0 *= 4;
    }
    return {d0, f};
}

std::vector<i64> class_number_one_discriminants(i64 bound) {
    std::vector<i64> out;
    for (i64 a = 3; a <= bound; ++a) {
        i64 d = -a;
        i64 dm = ((d % 4) + 4) % 4;
        if (dm != 0 && dm != 1) continue;
        if (decompose_discriminant(d).conductor != 1) continue;
        if (class_number(d) == 1) out.push_back(d);
    }
    return out;
}

void clear_caches() {
    std::unique_lock lock(g_class_mutex);
    g_class_memo.clear();
}

}  // namespace atlas::arith

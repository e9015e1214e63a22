#pragma once

namespace atlas {

// Multiplicative reduction type I_n, n >= 1.
struct KodairaSymbol {
    long long n = 1;

    friend bool operator==(const KodairaSymbol& a, const KodairaSymbol& b) {
        return a.n == b.n;
    }
    friend bool operator!=(const KodairaSymbol& a, const KodairaSymbol& b) {
        return !(a == b);
    }
};

}  // namespace atlas

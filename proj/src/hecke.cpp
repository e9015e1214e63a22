#include "atlas/hecke.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_map>

#include "atlas/errors.hpp"
#include "atlas/invariants.hpp"

namespace atlas::hecke {

namespace {

using SparseVec = std::vector<std::pair<int, Rat>>;  // sorted by index
using Matrix = std::vector<std::vector<Rat>>;

i64 power(i64 b, int e) {
    i64 r = 1;
    while (e--) r *= b;
    return r;
}

// ---------------------------------------------------------------------------
// P^1(Z/N) for squarefree N, indexed through the product of the P^1(F_p).

struct P1 {
    i64 N = 1;
    std::vector<i64> primes;
    std::vector<i64> weights;    // mixed-radix weights, weights[i] = prod of (p_j+1), j < i
    std::vector<i64> crt_units;  // e_i = 1 mod p_i, 0 mod p_j (j != i)
    i64 psi = 1;

    explicit P1(const arith::FactoredSquarefree& f) : N(f.value), primes(f.primes) {
        i64 w = 1;
        for (i64 p : primes) {
            weights.push_back(w);
            w *= p + 1;
        }
        psi = w;
        for (i64 p : primes) {
            i64 m = N / p;
            // m * inv(m mod p) mod N
            i64 inv = inverse_mod(m % p, p);
            crt_units.push_back(m % N == 0 ? 0 : (m * inv) % N);
        }
    }

    static i64 inverse_mod(i64 a, i64 p) {
        a %= p;
        if (a < 0) a += p;
        i64 t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            i64 q = r / nr;
            i64 t2 = t - q * nt;
            t = nt;
            nt = t2;
            i64 r2 = r - q * nr;
            r = nr;
            nr = r2;
        }
        if (r != 1)
            throw InternalInconsistency("inverse_mod of a non-unit");
        if (t < 0) t += p;
        return t;
    }

    i64 size() const { return psi; }

    // canonical index of (c:d); requires gcd(c, d, N) = 1
    i64 index(i64 c, i64 d) const {
        i64 idx = 0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            i64 p = primes[i];
            i64 cp = c % p;
            if (cp < 0) cp += p;
            i64 dp = d % p;
            if (dp < 0) dp += p;
            i64 local;
            if (cp == 0) {
                if (dp == 0)
                    throw InternalInconsistency("P1 index of non-coprime pair");
                local = p;  // (0:1)
            } else {
                local = (dp * inverse_mod(cp, p)) % p;  // (1:x)
            }
            idx += local * weights[i];
        }
        return idx;
    }

    // representative pair (c, d) mod N for an index
    std::pair<i64, i64> rep(i64 idx) const {
        i64 c = 0, d = 0;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            i64 p = primes[i];
            i64 local = (idx / weights[i]) % (p + 1);
            i64 cp, dp;
            if (local == p) {
                cp = 0;
                dp = 1;
            } else {
                cp = 1;
                dp = local;
            }
            c = (c + cp * crt_units[i]) % N;
            d = (d + dp * crt_units[i]) % N;
        }
        return {c, d};
    }

    // right action by an integer 2x2 matrix [[a,b],[c,d]] on the row (x:y)
    i64 apply(i64 idx, i64 a, i64 b, i64 c, i64 d) const {
        auto [x, y] = rep(idx);
        return index(x * a + y * c, x * b + y * d);
    }
};

// ---------------------------------------------------------------------------
// Sparse rational row operations for the relation quotient.

void sparse_axpy(SparseVec& dst, const Rat& coef, const SparseVec& src) {
    SparseVec out;
    out.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
        if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
            out.push_back(dst[i++]);
        } else if (i == dst.size() || src[j].first < dst[i].first) {
            Rat v = coef * src[j].second;
            if (!v.is_zero()) out.emplace_back(src[j].first, v);
            ++j;
        } else {
            Rat v = dst[i].second + coef * src[j].second;
            if (!v.is_zero()) out.emplace_back(dst[i].first, v);
            ++i;
            ++j;
        }
    }
    dst = std::move(out);
}

// ---------------------------------------------------------------------------
// Cusps of Gamma_0(N).

struct CuspList {
    i64 N;
    std::vector<std::pair<i64, i64>> reps;  // (p, q), q >= 0, lowest terms

    explicit CuspList(i64 N) : N(N) {}

    static i64 inv_mod(i64 a, i64 m) {
        if (m <= 1) return 0;
        i64 v = P1::inverse_mod(a % m, m);
        return v;
    }

    bool equivalent(i64 p1, i64 q1, i64 p2, i64 q2) const {
        i64 s1 = q1 == 0 ? 1 : inv_mod(p1, q1);
        i64 s2 = q2 == 0 ? 1 : inv_mod(p2, q2);
        i64 g = std::gcd(q1 * q2, N);
        if (g == 0) g = N;
        i64 lhs = (s1 * q2 - s2 * q1) % g;
        return lhs % g == 0;
    }

    int index(i64 p, i64 q) {
        if (q < 0) {
            p = -p;
            q = -q;
        }
        if (q == 0) {
            p = 1;
        } else {
            i64 g = std::gcd(p < 0 ? -p : p, q);
            if (g > 1) {
                p /= g;
                q /= g;
            }
            p = ((p % q) + q) % q;  // p/q ~ (p mod q)/q under translations
            if (q == 1) p = 0;
        }
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (equivalent(p, q, reps[i].first, reps[i].second)) return (int)i;
        reps.emplace_back(p, q);
        return (int)reps.size() - 1;
    }

    std::size_t count() const { return reps.size(); }
};

// ---------------------------------------------------------------------------
// The weight-2 modular-symbol space for Gamma_0(N).

struct Space {
    i64 N = 1;
    i64 genus = 0;  // genus of X_0(N)
    std::unique_ptr<P1> p1;
    i64 dimM = 0;
    std::vector<SparseVec> gen2basis;  // per P^1 index
    std::vector<i64> basis_symbol;     // basis index -> P^1 index
    std::size_t ncusps = 0;
    // cuspidal kernel: rows over M coordinates, with a designated free
    // coordinate per row at which every other row vanishes
    std::vector<std::vector<Rat>> kernel;
    std::vector<int> kernel_free_col;

    std::mutex hecke_mu;
    std::map<i64, Matrix> hecke_on_kernel;  // prime -> action matrix (rows = images)
};

// lift (c, d) mod N to a coprime integer pair
std::pair<i64, i64> lift_coprime(i64 c, i64 d, i64 N) {
    c %= N;
    if (c < 0) c += N;
    d %= N;
    if (d < 0) d += N;
    if (c == 0) return {0, 1};
    if (d == 0) {
        if (std::gcd(c, N) == 1) return {c, N};  // (c : 0) ~ (1 : 0) scaled; keep pair coprime
        return {1, 0};
    }
    for (i64 t = 0;; ++t) {
        i64 dd = d + t * N;
        if (std::gcd(c, dd) == 1) return {c, dd};
    }
}

// complete a coprime bottom row (c, d) to [[a, b], [c, d]] in SL_2(Z)
std::array<i64, 4> complete_sl2(i64 c, i64 d) {
    // extended gcd: x*d + y*c = 1
    i64 x = 1, x1 = 0, y = 0, y1 = 1, a = d, b = c;
    while (b != 0) {
        i64 q = a / b;
        i64 t;
        t = x - q * x1; x = x1; x1 = t;
        t = y - q * y1; y = y1; y1 = t;
        t = a - q * b;  a = b;  b = t;
    }
    if (a < 0) {
        a = -a;
        x = -x;
        y = -y;
    }
    if (a != 1) throw InternalInconsistency("complete_sl2: row not coprime");
    return {x, -y, c, d};  // det = x*d - (-y)*c = 1
}

// Manin symbols of the path {oo -> p/q}, emitted as (c, d) integer pairs
// (each standing for +1 times the symbol), via continued fractions.
void infinity_path_symbols(i64 p, i64 q,
                           const std::function<void(i64, i64)>& emit) {
    if (q == 0) return;  // {oo, oo}
    if (q < 0) {
        p = -p;
        q = -q;
    }
    i64 g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    // convergents p_k/q_k with (p_{-2}, q_{-2}) = (0, 1), (p_{-1}, q_{-1}) = (1, 0)
    i64 pk2 = 0, qk2 = 1, pk1 = 1, qk1 = 0;
    i64 a = p, b = q;
    int k = 0;
    while (true) {
        i64 ak = (a >= 0 ? a / b : -((-a + b - 1) / b));  // floor division
        i64 r = a - ak * b;
        i64 pk = ak * pk1 + pk2;
        i64 qk = ak * qk1 + qk2;
        // piece {p_{k-1}/q_{k-1} -> p_k/q_k} = bottom row ((-1)^{k-1} q_k, q_{k-1})
        i64 sgn = (k % 2 == 0) ? -1 : 1;
        emit(sgn * qk, qk1);
        pk2 = pk1;
        qk2 = qk1;
        pk1 = pk;
        qk1 = qk;
        ++k;
        if (r == 0) break;
        a = b;
        b = r;
    }
    if (pk1 != p || qk1 != q)
        throw InternalInconsistency("continued fraction did not converge");
}

i64 genus_x0_impl(const arith::FactoredSquarefree& f) {
    Rat psi(1), nu2(1), nu3(1), nuinf(1);
    for (i64 p : f.primes) {
        psi *= Rat(p + 1);
        nu2 *= Rat(1 + arith::kronecker(-4, p));
        nu3 *= Rat(1 + arith::kronecker(-3, p));
        nuinf *= Rat(2);
    }
    Rat g = Rat(1) + psi / Rat(12) - nu2 / Rat(4) - nu3 / Rat(3) - nuinf / Rat(2);
    if (!g.is_integer() || g.num < 0)
        throw InternalInconsistency("X_0 genus formula non-integral at N = " +
                                    std::to_string(f.value));
    return g.integer();
}

std::unique_ptr<Space> build_space(i64 N) {
    arith::FactoredSquarefree f;
    try {
        f = arith::factor_squarefree(N);
    } catch (const Error& e) {
        throw UnsupportedInput(std::string("level must be squarefree >= 1: ") + e.what());
    }

    auto sp = std::make_unique<Space>();
    sp->N = N;
    sp->genus = genus_x0_impl(f);
    if (N == 1) {
        sp->dimM = 0;
        sp->ncusps = 1;
        return sp;
    }
    sp->p1 = std::make_unique<P1>(f);
    const P1& p1 = *sp->p1;
    i64 psi = p1.size();

    // action tables for sigma = [[0,-1],[1,0]] and tau = [[0,-1],[1,-1]]
    std::vector<i64> sig(psi), tau(psi);
    for (i64 i = 0; i < psi; ++i) {
        sig[i] = p1.apply(i, 0, -1, 1, 0);
        tau[i] = p1.apply(i, 0, -1, 1, -1);
    }
    for (i64 i = 0; i < psi; ++i)
        if (tau[tau[tau[i]]] != i)
            throw InternalInconsistency("tau is not of order 3");

    // two-term relations x + xS = 0
    constexpr int kZero = -1;
    std::vector<i64> red_col(psi, kZero);
    std::vector<int> red_sign(psi, 0);
    std::vector<i64> col_gen;  // column -> representative P^1 index
    for (i64 i = 0; i < psi; ++i) {
        i64 j = sig[i];
        if (j == i) continue;  // 2x = 0
        if (j < i) continue;   // handled from the smaller index
        red_col[i] = (i64)col_gen.size();
        red_sign[i] = 1;
        red_col[j] = (i64)col_gen.size();
        red_sign[j] = -1;
        col_gen.push_back(i);
    }
    i64 ncols = (i64)col_gen.size();

    // three-term relations x + xT + xT^2 = 0
    std::vector<SparseVec> rows;
    std::vector<char> seen(psi, 0);
    for (i64 i = 0; i < psi; ++i) {
        if (seen[i]) continue;
        i64 o1 = i, o2 = tau[i], o3 = tau[o2];
        seen[o1] = seen[o2] = seen[o3] = 1;
        std::map<i64, Rat> acc;
        for (i64 o : {o1, o2, o3})
            if (red_col[o] != kZero) acc[red_col[o]] += Rat(red_sign[o]);
        SparseVec row;
        for (auto& [c, v] : acc)
            if (!v.is_zero()) row.emplace_back((int)c, v);
        if (!row.empty()) rows.push_back(std::move(row));
    }

    // echelon elimination
    std::map<int, SparseVec> pivot_rows;  // leading column -> row (leading coeff 1)
    for (auto& row : rows) {
        SparseVec r = std::move(row);
        while (!r.empty()) {
            auto it = pivot_rows.find(r.front().first);
            if (it == pivot_rows.end()) break;
            Rat lead = r.front().second;
            sparse_axpy(r, -lead, it->second);
        }
        if (r.empty()) continue;
        Rat lead = r.front().second;
        for (auto& [c, v] : r) v /= lead;
        int col = r.front().first;
        pivot_rows.emplace(col, std::move(r));
    }
    // back-substitution, descending pivot columns
    for (auto it = pivot_rows.rbegin(); it != pivot_rows.rend(); ++it) {
        SparseVec& r = it->second;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 1; i < r.size(); ++i) {
                auto jt = pivot_rows.find(r[i].first);
                if (jt == pivot_rows.end() || jt->first == it->first) continue;
                Rat coef = r[i].second;
                sparse_axpy(r, -coef, jt->second);
                changed = true;
                break;
            }
        }
    }

    // free columns form the basis
    std::vector<i64> col_to_basis(ncols, -1);
    for (i64 c = 0; c < ncols; ++c) {
        if (pivot_rows.count((int)c)) continue;
        col_to_basis[c] = (i64)sp->basis_symbol.size();
        sp->basis_symbol.push_back(col_gen[c]);
    }
    sp->dimM = (i64)sp->basis_symbol.size();

    // expression of every column over the basis
    std::vector<SparseVec> col_expr(ncols);
    for (i64 c = 0; c < ncols; ++c) {
        if (col_to_basis[c] >= 0) {
            col_expr[c] = {{(int)col_to_basis[c], Rat(1)}};
        } else {
            const SparseVec& r = pivot_rows.at((int)c);
            SparseVec e;
            for (std::size_t i = 1; i < r.size(); ++i) {
                i64 b = col_to_basis[r[i].first];
                if (b < 0)
                    throw InternalInconsistency("back-substitution left a pivot column");
                e.emplace_back((int)b, -r[i].second);
            }
            std::sort(e.begin(), e.end(),
                      [](auto& x, auto& y) { return x.first < y.first; });
            col_expr[c] = std::move(e);
        }
    }
    sp->gen2basis.resize(psi);
    for (i64 i = 0; i < psi; ++i) {
        if (red_col[i] == kZero) continue;
        SparseVec e = col_expr[red_col[i]];
        if (red_sign[i] < 0)
            for (auto& [b, v] : e) v = -v;
        sp->gen2basis[i] = std::move(e);
    }

    // structural check: dim M = 2g + (#cusps) - 1
    // boundary map and cusps
    CuspList cusps(N);
    std::vector<std::vector<Rat>> bmat;  // rows indexed by cusp, cols by basis
    auto brow = [&](int cusp) -> std::vector<Rat>& {
        while ((int)bmat.size() <= cusp) bmat.emplace_back(sp->dimM, Rat(0));
        return bmat[cusp];
    };
    for (i64 j = 0; j < sp->dimM; ++j) {
        auto [cbar, dbar] = p1.rep(sp->basis_symbol[j]);
        auto [c, d] = lift_coprime(cbar, dbar, N);
        auto g = complete_sl2(c, d);
        int cu1 = cusps.index(g[0], g[2]);  // gamma(oo) = a/c
        int cu0 = cusps.index(g[1], g[3]);  // gamma(0)  = b/d
        brow(cu1)[j] += Rat(1);
        brow(cu0)[j] -= Rat(1);
    }
    sp->ncusps = cusps.count();

    i64 expected_cusps = 1;
    for (std::size_t i = 0; i < f.primes.size(); ++i) expected_cusps *= 2;
    if ((i64)sp->ncusps != expected_cusps)
        throw InternalInconsistency("cusp count mismatch at N = " + std::to_string(N));
    if (sp->dimM != 2 * sp->genus + (i64)sp->ncusps - 1)
        throw InternalInconsistency("modular symbol dimension mismatch at N = " +
                                    std::to_string(N));

    // kernel of the boundary map
    std::size_t nrows = bmat.size();
    std::vector<int> pivot_col_of_row;
    std::vector<char> col_is_pivot(sp->dimM, 0);
    std::size_t rank = 0;
    for (i64 col = 0; col < sp->dimM && rank < nrows; ++col) {
        std::size_t sel = nrows;
        for (std::size_t r = rank; r < nrows; ++r)
            if (!bmat[r][col].is_zero()) {
                sel = r;
                break;
            }
        if (sel == nrows) continue;
        std::swap(bmat[rank], bmat[sel]);
        Rat lead = bmat[rank][col];
        for (i64 c2 = 0; c2 < sp->dimM; ++c2) bmat[rank][c2] /= lead;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == rank || bmat[r][col].is_zero()) continue;
            Rat f2 = bmat[r][col];
            for (i64 c2 = 0; c2 < sp->dimM; ++c2)
                bmat[r][c2] -= f2 * bmat[rank][c2];
        }
        pivot_col_of_row.push_back((int)col);
        col_is_pivot[col] = 1;
        ++rank;
    }
    if ((i64)rank != (i64)sp->ncusps - 1)
        throw InternalInconsistency("boundary rank mismatch at N = " + std::to_string(N));

    for (i64 fcol = 0; fcol < sp->dimM; ++fcol) {
        if (col_is_pivot[fcol]) continue;
        std::vector<Rat> v(sp->dimM, Rat(0));
        v[fcol] = Rat(1);
        for (std::size_t r = 0; r < rank; ++r)
            v[pivot_col_of_row[r]] = -bmat[r][fcol];
        sp->kernel.push_back(std::move(v));
        sp->kernel_free_col.push_back((int)fcol);
    }
    if ((i64)sp->kernel.size() != 2 * sp->genus)
        throw InternalInconsistency("cuspidal dimension mismatch at N = " +
                                    std::to_string(N));
    return sp;
}

// ---------------------------------------------------------------------------
// level cache

struct SpaceSlot {
    std::once_flag once;
    std::unique_ptr<Space> space;
};

std::mutex g_spaces_mu;
std::map<i64, std::shared_ptr<SpaceSlot>> g_spaces;

Space& level_space(i64 N) {
    std::shared_ptr<SpaceSlot> slot;
    {
        std::lock_guard lock(g_spaces_mu);
        auto& s = g_spaces[N];
        if (!s) s = std::make_shared<SpaceSlot>();
        slot = s;
    }
    std::call_once(slot->once, [&] { slot->space = build_space(N); });
    return *slot->space;
}

// Hecke action on the cuspidal subspace, for a prime ell not dividing N.
// Returned matrix A satisfies T(k_i) = sum_j A[i][j] k_j.
const Matrix& hecke_matrix(Space& sp, i64 ell) {
    {
        std::lock_guard lock(sp.hecke_mu);
        auto it = sp.hecke_on_kernel.find(ell);
        if (it != sp.hecke_on_kernel.end()) return it->second;
    }

    i64 N = sp.N;
    i64 dimM = sp.dimM;
    // columns of T on the ambient quotient space
    std::vector<std::vector<Rat>> cols(dimM, std::vector<Rat>(dimM, Rat(0)));

    // coset representatives [[a, b], [0, d]], ad = ell, 0 <= b < d
    std::vector<std::array<i64, 3>> reps;
    for (i64 a = 1; a <= ell; ++a) {
        if (ell % a != 0) continue;
        i64 d = ell / a;
        for (i64 b = 0; b < d; ++b) reps.push_back({a, b, d});
    }

    for (i64 j = 0; j < dimM; ++j) {
        auto [cbar, dbar] = sp.p1->rep(sp.basis_symbol[j]);
        auto [c, d] = lift_coprime(cbar, dbar, N);
        auto g = complete_sl2(c, d);
        std::vector<Rat>& col = cols[j];
        auto add_symbol = [&](i64 sc, i64 sd, int sgn) {
            i64 idx = sp.p1->index(sc, sd);
            for (auto& [b, v] : sp.gen2basis[idx])
                col[b] += sgn > 0 ? v : -v;
        };
        for (auto& [al, be, de] : reps) {
            // path {A g 0, A g oo} with A = [[al, be], [0, de]]
            i64 n0 = al * g[1] + be * g[3], d0 = de * g[3];
            i64 n1 = al * g[0] + be * g[2], d1 = de * g[2];
            // {r0 -> r1} = {oo -> r1} - {oo -> r0}
            infinity_path_symbols(n1, d1, [&](i64 sc, i64 sd) { add_symbol(sc, sd, +1); });
            infinity_path_symbols(n0, d0, [&](i64 sc, i64 sd) { add_symbol(sc, sd, -1); });
        }
    }

    // restrict to the cuspidal kernel
    i64 dimC = (i64)sp.kernel.size();
    Matrix A(dimC, std::vector<Rat>(dimC, Rat(0)));
    for (i64 i = 0; i < dimC; ++i) {
        std::vector<Rat> w(dimM, Rat(0));
        for (i64 j = 0; j < dimM; ++j) {
            const Rat& kj = sp.kernel[i][j];
            if (kj.is_zero()) continue;
            for (i64 r = 0; r < dimM; ++r) {
                const Rat& cj = cols[j][r];
                if (!cj.is_zero()) w[r] += kj * cj;
            }
        }
        for (i64 jj = 0; jj < dimC; ++jj) A[i][jj] = w[sp.kernel_free_col[jj]];
        // consistency: w must lie in the kernel span
        for (i64 r = 0; r < dimM; ++r) {
            Rat s(0);
            for (i64 jj = 0; jj < dimC; ++jj) {
                const Rat& coef = A[i][jj];
                if (!coef.is_zero()) s += coef * sp.kernel[jj][r];
            }
            if (s != w[r])
                throw InternalInconsistency("Hecke operator does not preserve the cuspidal space");
        }
    }

    std::lock_guard lock(sp.hecke_mu);
    return sp.hecke_on_kernel.emplace(ell, std::move(A)).first->second;
}

Matrix mat_mul(const Matrix& x, const Matrix& y) {
    i64 n = (i64)x.size();
    Matrix z(n, std::vector<Rat>(n, Rat(0)));
    for (i64 i = 0; i < n; ++i)
        for (i64 k = 0; k < n; ++k) {
            const Rat& v = x[i][k];
            if (v.is_zero()) continue;
            for (i64 j = 0; j < n; ++j)
                if (!y[k][j].is_zero()) z[i][j] += v * y[k][j];
        }
    return z;
}

Matrix mat_scaled_sub(const Matrix& x, i64 c, const Matrix& y) {
    Matrix z = x;
    i64 n = (i64)x.size();
    for (i64 i = 0; i < n; ++i)
        for (i64 j = 0; j < n; ++j) z[i][j] -= Rat(c) * y[i][j];
    return z;
}

Matrix identity(i64 n) {
    Matrix z(n, std::vector<Rat>(n, Rat(0)));
    for (i64 i = 0; i < n; ++i) z[i][i] = Rat(1);
    return z;
}

// matrix of T_{ell^e} on the cuspidal space
Matrix prime_power_matrix(Space& sp, i64 ell, int e) {
    i64 n = (i64)sp.kernel.size();
    if (e == 0) return identity(n);
    Matrix m1 = hecke_matrix(sp, ell);
    if (e == 1) return m1;
    Matrix prev = identity(n), cur = m1;
    for (int i = 2; i <= e; ++i) {
        Matrix next = mat_scaled_sub(mat_mul(cur, m1), ell, prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::mutex g_trace_mu;
std::map<std::pair<i64, i64>, i64> g_trace_full_memo;

}  // namespace

i64 genus_x0(i64 N) {
    arith::FactoredSquarefree f;
    try {
        f = arith::factor_squarefree(N);
    } catch (const Error& e) {
        throw UnsupportedInput(std::string("level must be squarefree >= 1: ") + e.what());
    }
    return genus_x0_impl(f);
}

i64 cuspidal_dimension(i64 N) { return (i64)level_space(N).kernel.size(); }

i64 trace_hecke(i64 N, i64 m) {
    if (m < 1) throw UnsupportedInput("Hecke index must be >= 1");
    if (N < 1) throw UnsupportedInput("level must be >= 1");
    if (std::gcd(m, N) != 1)
        throw UnsupportedInput("Hecke index must be coprime to the level");
    {
        std::lock_guard lock(g_trace_mu);
        auto it = g_trace_full_memo.find({N, m});
        if (it != g_trace_full_memo.end()) return it->second;
    }
    Space& sp = level_space(N);
    i64 dimC = (i64)sp.kernel.size();
    i64 tr2;  // trace on the cuspidal symbol space = 2 * trace on S_2
    if (dimC == 0) {
        tr2 = 0;
    } else if (m == 1) {
        tr2 = dimC;
    } else {
        // factor m and combine prime-power matrices
        Matrix acc = identity(dimC);
        i64 rest = m;
        for (i64 p = 2; p * p <= rest; ++p) {
            if (rest % p != 0) continue;
            int e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            acc = mat_mul(acc, prime_power_matrix(sp, p, e));
        }
        if (rest > 1) acc = mat_mul(acc, prime_power_matrix(sp, rest, 1));
        Rat t(0);
        for (i64 i = 0; i < dimC; ++i) t += acc[i][i];
        if (!t.is_integer())
            throw InternalInconsistency("non-integral Hecke trace");
        tr2 = t.integer();
    }
    if (tr2 % 2 != 0)
        throw InternalInconsistency("odd trace on the cuspidal symbol space");
    i64 result = tr2 / 2;
    std::lock_guard lock(g_trace_mu);
    g_trace_full_memo.emplace(std::make_pair(N, m), result);
    return result;
}

i64 trace_hecke_new(i64 N, i64 m) {
    arith::FactoredSquarefree f;
    try {
        f = arith::factor_squarefree(N);
    } catch (const Error& e) {
        throw UnsupportedInput(std::string("level must be squarefree >= 1: ") + e.what());
    }
    i64 total = 0;
    for (i64 d : f.divisors()) {
        i64 cof = N / d;
        int omega = 0;
        for (i64 p : f.primes)
            if (cof % p == 0) ++omega;
        i64 beta = 1;
        for (int i = 0; i < omega; ++i) beta *= -2;
        total += beta * trace_hecke(d, m);
    }
    return total;
}

FrobeniusCount point_count(i64 D, i64 ell, int k) {
    if (!arith::is_prime(ell)) throw BadPrime("ell must be prime");
    if (D % ell == 0)
        throw BadPrime(std::to_string(ell) + " divides the discriminant " +
                       std::to_string(D));
    if (k != 1 && k != 2) throw UnsupportedInput("field degree k must be 1 or 2");

    i64 gprime = trace_hecke_new(D, 1);
    i64 sk;
    if (k == 1) {
        sk = trace_hecke_new(D, ell);
    } else {
        sk = trace_hecke_new(D, ell * ell) - ell * gprime;
    }
    FrobeniusCount fc;
    fc.D = D;
    fc.ell = ell;
    fc.k = k;
    fc.count = power(ell, k) + 1 - sk;
    // Weil bound: |count - (ell^k + 1)| <= 2 g ell^{k/2}, i.e. sk^2 <= 4 g^2 ell^k
    if (sk * sk > 4 * gprime * gprime * power(ell, k))
        throw InternalInconsistency("point count violates the Weil bound at D = " +
                                    std::to_string(D));
    if (fc.count < 0)
        throw InternalInconsistency("negative point count at D = " + std::to_string(D));
    return fc;
}

ParityWitness parity_witness(i64 D) {
    arith::FactoredSquarefree f;
    try {
        f = arith::factor_squarefree(D);
    } catch (const Error&) {
        throw WrongShape("discriminant must be squarefree");
    }
    if (f.primes.size() != 2 || f.primes[0] != 3)
        throw WrongShape("expected D = 3p");
    i64 p = f.primes[1];
    if (p % 3 != 2) throw WrongShape("expected p = 2 (mod 3)");
    if (invariants::genus(invariants::ShimuraDiscriminant{f}) < 2)
        throw WrongShape("genus below 2 at D = " + std::to_string(D));
    ParityWitness w;
    w.ell = D == 267 ? 67 : D == 411 ? 103 : 109;
    FrobeniusCount fc = point_count(D, w.ell, 1);
    w.residue = (int)(((fc.count % 4) + 4) % 4);
    return w;
}

i64 simultaneous_eigenspace_dim(i64 N,
                                const std::vector<std::pair<i64, i64>>& eigs) {
    Space& sp = level_space(N);
    i64 dimC = (i64)sp.kernel.size();
    // current subspace as rows in cuspidal coordinates
    Matrix span = identity(dimC);
    for (auto& [ell, a] : eigs) {
        const Matrix& T = hecke_matrix(sp, ell);
        i64 rows = (i64)span.size();
        if (rows == 0) return 0;
        // images v (T - a) for each spanning row
        Matrix img(rows, std::vector<Rat>(dimC, Rat(0)));
        for (i64 i = 0; i < rows; ++i) {
            for (i64 j = 0; j < dimC; ++j) {
                const Rat& v = span[i][j];
                if (v.is_zero()) continue;
                for (i64 c = 0; c < dimC; ++c) img[i][c] += v * T[j][c];
            }
            for (i64 c = 0; c < dimC; ++c) img[i][c] -= Rat(a) * span[i][c];
        }
        // nullspace of img (combinations of rows mapping to zero)
        // gauss on img with row bookkeeping
        Matrix comb = identity(rows);
        i64 rank = 0;
        for (i64 col = 0; col < dimC && rank < rows; ++col) {
            i64 sel = -1;
            for (i64 r = rank; r < rows; ++r)
                if (!img[r][col].is_zero()) {
                    sel = r;
                    break;
                }
            if (sel < 0) continue;
            std::swap(img[rank], img[sel]);
            std::swap(comb[rank], comb[sel]);
            Rat lead = img[rank][col];
            for (i64 c = 0; c < dimC; ++c) img[rank][c] /= lead;
            for (i64 c = 0; c < rows; ++c) comb[rank][c] /= lead;
            for (i64 r = 0; r < rows; ++r) {
                if (r == rank || img[r][col].is_zero()) continue;
                Rat f2 = img[r][col];
                for (i64 c = 0; c < dimC; ++c) img[r][c] -= f2 * img[rank][c];
                for (i64 c = 0; c < rows; ++c) comb[r][c] -= f2 * comb[rank][c];
            }
            ++rank;
        }
        Matrix next;
        for (i64 r = rank; r < rows; ++r) {
            // row r of comb combines span rows into a kernel vector
            std::vector<Rat> v(dimC, Rat(0));
            for (i64 i = 0; i < rows; ++i) {
                const Rat& c = comb[r][i];
                if (c.is_zero()) continue;
                for (i64 j = 0; j < dimC; ++j) v[j] += c * span[i][j];
            }
            next.push_back(std::move(v));
        }
        span = std::move(next);
    }
    return (i64)span.size();
}

void clear_caches() {
    std::lock_guard l1(g_spaces_mu);
    std::lock_guard l2(g_trace_mu);
    g_spaces.clear();
    g_trace_full_memo.clear();
}

}  // namespace atlas::hecke

#include "atlas/cd_graphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "atlas/errors.hpp"
#include "atlas/invariants.hpp"
#include "atlas/rational.hpp"

namespace atlas::cd {

using arith::kronecker;

i64 eichler_class_number(const FactoredSquarefree& delta,
                         const FactoredSquarefree& nu) {
    if (delta.omega() % 2 != 1)
        throw BadInput("definite discriminant needs an odd number of prime factors: " +
                       std::to_string(delta.value));
    if (std::gcd(delta.value, nu.value) != 1)
        throw BadInput("Eichler level must be coprime to the discriminant");

    Rat mass(1, 12), t2(1, 4), t3(1, 3);
    for (i64 p : delta.primes) {
        mass *= Rat(p - 1);
        t2 *= Rat(1 - kronecker(-4, p));
        t3 *= Rat(1 - kronecker(-3, p));
    }
    for (i64 q : nu.primes) {
        mass *= Rat(q + 1);
        t2 *= Rat(1 + kronecker(-4, q));
        t3 *= Rat(1 + kronecker(-3, q));
    }
    Rat h = mass + t2 + t3;
    if (!h.is_integer() || h.integer() < 1)
        throw InternalInconsistency("class number formula gave " + h.str() +
                                    " at (" + std::to_string(delta.value) + ", " +
                                    std::to_string(nu.value) + ")");
    return h.integer();
}

i64 eichler_class_number(i64 delta, i64 nu) {
    return eichler_class_number(arith::factor_squarefree(delta),
                                arith::factor_squarefree(nu));
}

bool torsion_free(i64 D, i64 p) {
    if (D % p != 0) throw BadInput("p must divide D");
    FactoredSquarefree delta = arith::factor_squarefree(D / p);
    bool split4 = false, split3 = false;
    for (i64 q : delta.primes) {
        if (kronecker(-4, q) == 1) split4 = true;
        if (kronecker(-3, q) == 1) split3 = true;
    }
    return split4 && split3;
}

namespace {

// Search the h x h multiplicity matrices with all row sums p+1, symmetric
// under the w_p pairing, honoring the crossing total and forbidden entries.
void search_matrices(i64 h, i64 degree, std::optional<i64> crossing,
                     const std::vector<std::vector<char>>& allowed,
                     std::vector<std::vector<i64>>& m,
                     std::vector<i64>& row_left, i64 diag_left, std::size_t cell,
                     std::vector<std::vector<std::vector<i64>>>& out) {
    static_cast<void>(degree);
    std::size_t ncells = (std::size_t)(h * (h + 1) / 2);
    if (cell == ncells) {
        for (i64 i = 0; i < h; ++i)
            if (row_left[i] != 0) return;
        if (crossing && diag_left != 0) return;
        out.push_back(m);
        return;
    }
    // unrank cell -> (i, j), i <= j
    i64 i = 0;
    std::size_t c = cell;
    while (c >= (std::size_t)(h - i)) {
        c -= (std::size_t)(h - i);
        ++i;
    }
    i64 j = i + (i64)c;

    i64 cap = std::min(row_left[i], i == j ? row_left[i] : row_left[j]);
    if (!allowed[i][j]) cap = 0;
    for (i64 v = 0; v <= cap; ++v) {
        if (i == j && crossing && v > diag_left) break;
        m[i][j] = v;
        m[j][i] = v;
        row_left[i] -= v;
        if (i != j) row_left[j] -= v;
        search_matrices(h, degree, crossing, allowed, m, row_left,
                        i == j ? diag_left - v : diag_left, cell + 1, out);
        row_left[i] += v;
        if (i != j) row_left[j] += v;
        m[i][j] = 0;
        m[j][i] = 0;
    }
}

std::vector<std::vector<i64>> canonical_form(const std::vector<std::vector<i64>>& m) {
    i64 h = (i64)m.size();
    std::vector<int> perm(h);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<i64>> best;
    do {
        std::vector<std::vector<i64>> t(h, std::vector<i64>(h));
        for (i64 i = 0; i < h; ++i)
            for (i64 j = 0; j < h; ++j) t[i][j] = m[perm[i]][perm[j]];
        if (best.empty() || t < best) best = t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

DualGraph graph_from_matrix(i64 D, i64 p, const std::vector<std::vector<i64>>& m) {
    DualGraph g;
    g.D = D;
    g.p = p;
    g.h = (i64)m.size();
    g.multiplicity = m;
    g.graph.n_vertices = (int)(2 * g.h);
    for (i64 i = 0; i < g.h; ++i)
        for (i64 j = 0; j < g.h; ++j)
            for (i64 k = 0; k < m[i][j]; ++k)
                g.graph.edges.push_back({(int)i, (int)(g.h + j), 1});
    return g;
}

}  // namespace

DualGraphResult dual_graph(i64 D, i64 p, std::optional<i64> crossing_total,
                           const std::vector<std::pair<int, int>>& forbidden) {
    invariants::ShimuraDiscriminant Ds = invariants::ShimuraDiscriminant::make(D);
    if (D % p != 0 || !arith::is_prime(p)) throw BadInput("p must be a prime divisor of D");

    i64 h = eichler_class_number(D / p, 1);
    i64 edges = eichler_class_number(D / p, p);
    bool tf = torsion_free(D, p);

    DualGraphResult res;
    res.skeleton = {D, p, 2 * h, edges, tf};

    bool constrained = crossing_total.has_value() || !forbidden.empty();
    if (!tf) {
        if (constrained)
            throw TorsionPresent("fiber at (" + std::to_string(D) + ", " +
                                 std::to_string(p) +
                                 ") has torsion; only counts are available");
        res.kind = DualGraphResult::Kind::SkeletonOnly;
        return res;
    }
    if (edges != (p + 1) * h)
        throw InternalInconsistency("regularity failed in the torsion-free case at (" +
                                    std::to_string(D) + ", " + std::to_string(p) + ")");
    if (!constrained) {
        res.kind = DualGraphResult::Kind::Underdetermined;
        return res;
    }

    // translate forbidden vertex pairs; same-side pairs hold automatically
    std::vector<std::vector<char>> allowed(h, std::vector<char>(h, 1));
    for (auto& [u, v] : forbidden) {
        if (u < 0 || v < 0 || u >= 2 * h || v >= 2 * h)
            throw BadInput("forbidden pair outside the vertex range");
        bool uz = u < h, vz = v < h;
        if (uz == vz) continue;  // between-sides only; same side is structural
        i64 i = uz ? u : v;
        i64 j = (uz ? v : u) - h;
        allowed[i][j] = 0;
        allowed[j][i] = 0;
    }

    std::vector<std::vector<std::vector<i64>>> sols;
    std::vector<std::vector<i64>> m(h, std::vector<i64>(h, 0));
    std::vector<i64> row_left(h, p + 1);
    search_matrices(h, p + 1, crossing_total, allowed, m, row_left,
                    crossing_total.value_or(0), 0, sols);

    // a single isomorphism class has at most h! representatives; far more
    // solutions cannot be unique, so skip the canonicalization pass
    i64 orbit_cap = 1;
    for (i64 i = 2; i <= h; ++i) orbit_cap *= i;
    if ((i64)sols.size() > 2 * orbit_cap || sols.size() > 4000) {
        res.kind = DualGraphResult::Kind::Underdetermined;
        return res;
    }

    std::set<std::vector<std::vector<i64>>> canon;
    for (auto& s : sols) canon.insert(canonical_form(s));

    if (canon.size() == 1) {
        res.kind = DualGraphResult::Kind::Full;
        res.graph = graph_from_matrix(D, p, *canon.begin());
        return res;
    }
    res.kind = DualGraphResult::Kind::Underdetermined;
    return res;
}

EdgeInvolution side_swap_involution(const DualGraph& g) {
    EdgeInvolution inv;
    inv.vertex_map.resize(g.graph.n_vertices);
    for (int v = 0; v < g.graph.n_vertices; ++v) inv.vertex_map[v] = g.partner(v);
    inv.edge_map.assign(g.graph.edges.size(), -1);
    inv.edge_reversed.assign(g.graph.edges.size(), 0);

    // group edge indices by their Z-side pair (i, j): edge Z_i -- Z'_j
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (std::size_t e = 0; e < g.graph.edges.size(); ++e) {
        auto& ed = g.graph.edges[e];
        int u = ed.u, v = ed.v;
        if (!g.z_side(u)) std::swap(u, v);
        buckets[{u, v - (int)g.h}].push_back((int)e);
    }
    for (auto& [key, list] : buckets) {
        auto [i, j] = key;
        if (i == j) {
            for (int e : list) {
                inv.edge_map[e] = e;
                inv.edge_reversed[e] = 1;
            }
        } else if (i < j) {
            auto it = buckets.find({j, i});
            if (it == buckets.end() || it->second.size() != list.size())
                throw InternalInconsistency("side-swap action needs symmetric multiplicities");
            for (std::size_t k = 0; k < list.size(); ++k) {
                inv.edge_map[list[k]] = it->second[k];
                inv.edge_map[it->second[k]] = list[k];
            }
        }
    }
    return inv;
}

Graph al_quotient(const Graph& g, const EdgeInvolution& inv) {
    if ((int)inv.vertex_map.size() != g.n_vertices ||
        inv.edge_map.size() != g.edges.size())
        throw NotInvolution("action tables do not match the graph");
    for (int v = 0; v < g.n_vertices; ++v) {
        int w = inv.vertex_map[v];
        if (w < 0 || w >= g.n_vertices || inv.vertex_map[w] != v)
            throw NotInvolution("vertex map is not an involution");
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int f = inv.edge_map[e];
        if (f < 0 || f >= (int)g.edges.size() || inv.edge_map[f] != (int)e)
            throw NotInvolution("edge map is not an involution");
        const auto& eu = g.edges[e];
        const auto& fu = g.edges[f];
        int mu = inv.vertex_map[eu.u], mv = inv.vertex_map[eu.v];
        bool matches = (fu.u == mu && fu.v == mv) || (fu.u == mv && fu.v == mu);
        if (!matches || fu.length != eu.length)
            throw NotInvolution("edge map incompatible with the vertex map");
    }

    // vertex orbits
    std::vector<int> orbit(g.n_vertices, -1);
    int nq = 0;
    for (int v = 0; v < g.n_vertices; ++v) {
        if (orbit[v] >= 0) continue;
        orbit[v] = nq;
        orbit[inv.vertex_map[v]] = nq;
        ++nq;
    }

    Graph q;
    q.n_vertices = nq;
    std::vector<char> done(g.edges.size(), 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (done[e]) continue;
        int f = inv.edge_map[e];
        const auto& ed = g.edges[e];
        if (f == (int)e) {
            done[e] = 1;
            bool reversed;
            if (ed.u == ed.v) {
                reversed = e < inv.edge_reversed.size() && inv.edge_reversed[e];
            } else {
                reversed = inv.vertex_map[ed.u] == ed.v;
            }
            if (reversed) continue;  // node becomes a smooth point
            q.edges.push_back({orbit[ed.u], orbit[ed.v], ed.length});
        } else {
            done[e] = 1;
            done[f] = 1;
            q.edges.push_back({orbit[ed.u], orbit[ed.v], ed.length});
        }
    }
    return q;
}

KodairaSymbol kodaira_symbol(const Graph& q) {
    if (q.n_vertices == 0) throw NotGenusOne("empty graph");
    // connectivity
    std::vector<int> parent(q.n_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& e : q.edges) parent[find(e.u)] = find(e.v);
    for (int v = 0; v < q.n_vertices; ++v)
        if (find(v) != find(0)) throw NotGenusOne("graph is not connected");

    i64 betti = (i64)q.edges.size() - q.n_vertices + 1;
    if (betti != 1)
        throw NotGenusOne("first Betti number is " + std::to_string(betti));

    // strip leaves until the cycle remains
    std::vector<char> alive(q.edges.size(), 1);
    std::vector<int> degree(q.n_vertices, 0);
    for (auto& e : q.edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < q.edges.size(); ++e) {
            if (!alive[e]) continue;
            const auto& ed = q.edges[e];
            if (ed.u != ed.v && (degree[ed.u] == 1 || degree[ed.v] == 1)) {
                alive[e] = 0;
                --degree[ed.u];
                --degree[ed.v];
                changed = true;
            }
        }
    }
    i64 n = 0;
    for (std::size_t e = 0; e < q.edges.size(); ++e)
        if (alive[e]) n += q.edges[e].length;
    if (n < 1) throw InternalInconsistency("cycle extraction failed");
    return KodairaSymbol{n};
}

std::string to_text(const DualGraph& g) {
    std::ostringstream os;
    os << "D=" << g.D << " p=" << g.p << " vertices=" << 2 * g.h
       << " edges=" << g.graph.edges.size() << "\n";
    for (i64 i = 0; i < g.h; ++i) {
        for (i64 j = 0; j < g.h; ++j) {
            if (g.multiplicity[i][j] == 0) continue;
            os << "Z" << i + 1 << " -- Z'" << j + 1 << " x" << g.multiplicity[i][j]
               << "\n";
        }
    }
    return os.str();
}

std::string to_dot(const DualGraph& g) {
    std::ostringstream os;
    os << "graph dual {\n";
    for (i64 i = 0; i < g.h; ++i) {
        os << "  z" << i + 1 << " [label=\"Z" << i + 1 << "\"];\n";
        os << "  w" << i + 1 << " [label=\"Z'" << i + 1 << "\"];\n";
    }
    for (auto& e : g.graph.edges) {
        int u = e.u, v = e.v;
        os << "  " << (g.z_side(u) ? "z" : "w") << (g.z_side(u) ? u + 1 : u - g.h + 1)
           << " -- " << (g.z_side(v) ? "z" : "w")
           << (g.z_side(v) ? v + 1 : v - g.h + 1) << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace atlas::cd

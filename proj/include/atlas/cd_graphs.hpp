#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atlas/arith.hpp"
#include "atlas/kodaira.hpp"

namespace atlas::cd {

using arith::FactoredSquarefree;
using arith::i64;

// One-sided ideal class number h(delta, nu) of an Eichler order of level nu
// in the definite quaternion algebra of discriminant delta.
i64 eichler_class_number(const FactoredSquarefree& delta,
                         const FactoredSquarefree& nu);
i64 eichler_class_number(i64 delta, i64 nu);

struct Graph {
    int n_vertices = 0;
    struct Edge {
        int u = 0, v = 0;
        i64 length = 1;
    };
    std::vector<Edge> edges;
};

// Dual graph of a bad-reduction fiber: vertices split into two sides
// (0..h-1 and h..2h-1) exchanged by w_p, edges only between sides.
struct DualGraph {
    i64 D = 0, p = 0;
    i64 h = 0;  // vertices per side
    Graph graph;
    std::vector<std::vector<i64>> multiplicity;  // h x h, Z_i -- Z'_j

    bool z_side(int v) const { return v < h; }
    int partner(int v) const { return v < h ? v + (int)h : v - (int)h; }
};

struct Skeleton {
    i64 D = 0, p = 0;
    i64 n_vertices = 0;
    i64 n_edges = 0;
    bool torsion_free = false;
};

struct DualGraphResult {
    enum class Kind { Full, Underdetermined, SkeletonOnly };
    Kind kind = Kind::SkeletonOnly;
    Skeleton skeleton;
    std::optional<DualGraph> graph;
};

// Whether the fiber at p is a torsion-free (Mumford) quotient: the definite
// part D/p must admit a split prime for both of the orders of discriminant
// -4 and -3.
bool torsion_free(i64 D, i64 p);

// Vertex/edge counts always; the explicit multigraph when the torsion-free
// case holds and the constraints (total w_p-crossing multiplicity, forbidden
// vertex pairs) pin it uniquely up to isomorphism.  Passing constraints in a
// torsion case throws TorsionPresent.
DualGraphResult dual_graph(i64 D, i64 p, std::optional<i64> crossing_total = {},
                           const std::vector<std::pair<int, int>>& forbidden = {});

struct EdgeInvolution {
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
    std::vector<char> edge_reversed;  // used for fixed edges
};

// The side-swapping action v_i <-> v_i': edges between partners are fixed
// with endpoint reversal, cross edges are paired off.
EdgeInvolution side_swap_involution(const DualGraph& g);

Graph al_quotient(const Graph& g, const EdgeInvolution& inv);

// I_n for a connected quotient graph of first Betti number 1; n is the total
// length of the unique cycle.
KodairaSymbol kodaira_symbol(const Graph& q);

std::string to_text(const DualGraph& g);
std::string to_dot(const DualGraph& g);

}  // namespace atlas::cd

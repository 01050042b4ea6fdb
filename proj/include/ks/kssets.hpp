#pragma once

// Finite ray sets and their {0,1}-colorability. Everything here is exact:
// coordinates live in Z[sqrt 2] and orthogonality is decided without any
// tolerance.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ks {

/// a + b sqrt(2) with integer a and b.
struct Surd {
    std::int64_t a = 0;
    std::int64_t b = 0;

    constexpr bool is_zero() const { return a == 0 && b == 0; }
    double value() const;
    std::string to_string() const;

    friend constexpr Surd operator+(Surd x, Surd y) { return {x.a + y.a, x.b + y.b}; }
    friend constexpr Surd operator-(Surd x, Surd y) { return {x.a - y.a, x.b - y.b}; }
    friend constexpr Surd operator*(Surd x, Surd y) { return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a}; }
    friend constexpr bool operator==(Surd, Surd) = default;
};

/// p/q + (r/s) sqrt(2), produced by the coordinate parser before
/// denominators are cleared.
struct RationalSurd {
    std::int64_t a_num = 0;
    std::int64_t a_den = 1;
    std::int64_t b_num = 0;
    std::int64_t b_den = 1;
};

/// Parses "3", "-1/2", "sqrt2", "-2*sqrt2", "1+sqrt2", "1/2-sqrt2/2".
/// Throws ParseError.
RationalSurd parse_surd(std::string_view text);

/// Scales a rational row to integers and divides out the common factor, so
/// each ray has a canonical primitive representative up to sign.
std::vector<Surd> clear_denominators(const std::vector<RationalSurd>& row);

using Ray = std::vector<Surd>;
using Basis = std::vector<std::size_t>;
using BasisList = std::vector<Basis>;

struct RaySet {
    std::string name;
    std::size_t dimension = 0;
    std::vector<Ray> rays;
    std::string provenance;
    /// Bases designated by the source; enumerated from the graph when absent.
    std::optional<BasisList> bases;
};

/// Throws DomainError for an empty set, a dimension mismatch or a zero ray.
void validate(const RaySet& rs);

Surd dot(const Ray& u, const Ray& w);
bool parallel(const Ray& u, const Ray& w);

class OrthoGraph {
public:
    OrthoGraph() = default;
    explicit OrthoGraph(std::size_t n) : n_(n), adj_(n * n, 0), neighbors_(n) {}

    std::size_t size() const { return n_; }
    std::size_t edge_count() const { return edges_; }
    bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

    void add_edge(std::size_t i, std::size_t j);

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::size_t edges_ = 0;
};

/// Edge iff the exact dot product is zero. Throws DuplicateRay for two
/// parallel rays and DomainError for an invalid set.
OrthoGraph build_ortho_graph(const RaySet& rs);

/// All d-cliques, each sorted ascending, in lexicographic order. In R^d a set
/// of d mutually orthogonal rays is automatically a basis.
BasisList enumerate_bases(const OrthoGraph& g, std::size_t d);

/// The bases to use for rs: the supplied list if present (each entry must be
/// a d-clique of g, otherwise NotABasis), else the enumerated cliques.
BasisList resolve_bases(const RaySet& rs, const OrthoGraph& g);

/// Occurrences of each ray across the basis list.
std::vector<std::size_t> basis_multiplicity(const BasisList& bases, std::size_t n);

/// True when an odd number of bases covers every ray an even number of
/// times, which rules out any valuation by counting the 1s two ways.
bool parity_obstruction(const BasisList& bases, std::size_t n);

struct SolverStats {
    std::size_t nodes = 0;
    std::size_t backtracks = 0;
    std::size_t propagations = 0;
};

struct ColoringResult {
    bool colorable = false;
    std::vector<int> assignment;  ///< ray -> {0,1}, set when colorable
    SolverStats stats;
};

/// True iff assignment is total, 0/1 valued, has at most one 1 per edge and
/// exactly one 1 per basis.
bool verify_assignment(const OrthoGraph& g, const BasisList& bases, const std::vector<int>& assignment);

/// Backtracking with unit propagation. Branches on the basis with the fewest
/// open rays that has no 1 yet. Rays in no basis are set to 0. A colorable
/// result is always checked with verify_assignment before it is returned.
ColoringResult find_valuation(const OrthoGraph& g, const BasisList& bases);

/// Number of distinct assignments to the rays covered by the basis list
/// (uncovered rays are held at 0), stopping early once limit is reached.
std::size_t count_valuations(const OrthoGraph& g, const BasisList& bases,
                             std::size_t limit = static_cast<std::size_t>(-1));

} // namespace ks

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ham/graph.hpp"

namespace ham::gen {

using Rng = std::mt19937_64;

// Finite group with canonical integer element labels. Table-free kinds
// multiply by rule; symmetric groups go through rank/unrank.
class GroupSpec {
public:
    static GroupSpec cyclic(int n);
    static GroupSpec elementary_abelian_2(int k);
    static GroupSpec dihedral(int n);  // order 2n
    static GroupSpec symmetric(int m); // m <= 8
    static GroupSpec direct_product(std::vector<GroupSpec> parts);
    // "z12", "z2^8", "d5", "s4", products joined with 'x': "z3xz4"
    static GroupSpec parse(const std::string& text);

    long long order() const;
    int op(int a, int b) const;
    int inverse(int a) const;
    int identity() const { return 0; }
    std::string describe() const;

    // Identity/inverse axioms exactly; associativity on sampled triples.
    void validate(Rng& rng, int samples = 200) const;

private:
    GroupSpec() = default;
    enum class Kind { cyclic, z2k, dihedral, symmetric, product };
    Kind kind_ = Kind::cyclic;
    long long order_ = 1;
    int param_ = 0;
    std::vector<GroupSpec> parts_;
};

Graph cayley(const GroupSpec& g, const std::vector<int>& s);

// Uniform d-subset of the non-identity elements.
std::pair<Graph, std::vector<int>> random_cayley(const GroupSpec& g, int d, Rng& rng);

// Vertex set F_q; edge xy iff x+y lies in the multiplicative subgroup of the
// requested size (which must divide q-1).
Graph cayley_sum_subgroup(int q, int subgroup_size);

// The subgroup itself, smallest primitive root based.
std::vector<int> multiplicative_subgroup(int q, int subgroup_size);

Graph paley(int q);  // q prime, q ≡ 1 (mod 4)

struct Factorization {
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> matchings;
};

Factorization one_factorization(int n);  // round-robin, n even

struct FactorUnion {
    Graph graph;
    std::vector<int> picks;          // sampled factor indices, with repetition
    int distinct_factors = 0;
    // color_of[u*n+v] would be heavy; edge colors resolved via lookup below.
    std::vector<std::vector<std::pair<int, int>>> const* factors = nullptr;
};

// Union of k independently sampled spanning factors (uniform by default,
// else proportional to weights). Duplicate picks collapse in the union.
FactorUnion sample_factor_union(const std::vector<std::vector<std::pair<int, int>>>& factors,
                                int k, Rng& rng,
                                const std::vector<double>* weights = nullptr);

Graph random_regular(int n, int d, Rng& rng);
Graph gnp(int n, double p, Rng& rng);

bool is_prime(int q);

}  // namespace ham::gen

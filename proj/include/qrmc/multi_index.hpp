#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qrmc {

enum class IndexSetKind { Full, Total, Hyperbolic };

std::string to_string(IndexSetKind kind);
IndexSetKind index_set_kind_from_string(const std::string& s);

/// Finite downward-closed multi-index set Gamma in N^d, enumerated in
/// lexicographic ascending order (leftmost coordinate most significant).
///
///   Full(K_1..K_d):   { k : k_l <= K_l for all l }
///   Total(DEG):       { k : sum_l k_l <= DEG }
///   Hyperbolic(DEG):  { k : prod_l max(k_l, 1) <= DEG },  DEG >= 1
///
/// Immutable after construction.
class MultiIndexSet {
public:
    /// Hard cap on the number of enumerated indices; exceeding it raises
    /// CapacityError before memory blows up.
    static constexpr std::size_t kDefaultMaxIndices = 8'000'000;

    static MultiIndexSet full(std::vector<int> degrees,
                              std::size_t max_indices = kDefaultMaxIndices);
    static MultiIndexSet total(int dim, int degree,
                               std::size_t max_indices = kDefaultMaxIndices);
    static MultiIndexSet hyperbolic(int dim, int degree,
                                    std::size_t max_indices = kDefaultMaxIndices);
    static MultiIndexSet build(int dim, IndexSetKind kind, int degree,
                               std::size_t max_indices = kDefaultMaxIndices);

    int dim() const noexcept { return dim_; }
    IndexSetKind kind() const noexcept { return kind_; }
    /// Degree parameter: {DEG} for total/hyperbolic, (K_1..K_d) for full.
    const std::vector<int>& degrees() const noexcept { return degrees_; }

    std::size_t size() const noexcept { return flat_.size() / dim_; }
    std::span<const int> operator[](std::size_t i) const noexcept {
        return {flat_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }

    /// Largest k_l appearing in coordinate l across the set.
    const std::vector<int>& max_degree_per_coord() const noexcept { return kmax_; }

    bool contains(std::span<const int> k) const noexcept;
    bool is_downward_closed() const;

private:
    MultiIndexSet(int dim, IndexSetKind kind, std::vector<int> degrees,
                  std::vector<int> flat);

    int dim_;
    IndexSetKind kind_;
    std::vector<int> degrees_;
    std::vector<int> flat_;  // size() * dim_, lexicographic rows
    std::vector<int> kmax_;
};

/// #Gamma_T(dim, DEG) = binomial(DEG + dim, dim). CapacityError on uint64
/// overflow.
std::uint64_t cardinality_total(int dim, int degree);

/// #Gamma_H(dim, DEG) by the divisor-counting formula: the indices with all
/// coordinates nonzero are counted through the prime factorization of each
/// product value (number of ways to write it as a product of exactly dim
/// ordered factors), and the remaining ones reduce to lower dimensions.
std::uint64_t cardinality_hyperbolic(int dim, int degree);

}  // namespace qrmc

#include "qrmc/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "qrmc/errors.hpp"

namespace qrmc {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > UINT64_MAX / b)
        throw CapacityError("multi-index cardinality overflows 64 bits");
    return a * b;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // multiply first, divide by i afterwards; the intermediate is exact
        result = checked_mul(result, n - k + i) / i;
    }
    return result;
}

std::vector<int> prime_exponents(std::uint64_t g) {
    std::vector<int> exps;
    for (std::uint64_t p = 2; p * p <= g; ++p) {
        if (g % p == 0) {
            int e = 0;
            while (g % p == 0) {
                g /= p;
                ++e;
            }
            exps.push_back(e);
        }
    }
    if (g > 1) exps.push_back(1);
    return exps;
}

// #{k in N_+^n : prod k_l <= DEG} = 1 (for the all-ones index) plus, for
// each product value g in [2, DEG], the number of ordered factorizations of
// g into exactly n factors.
std::uint64_t count_positive_hyperbolic(int n, int degree) {
    std::uint64_t count = 1;
    for (int g = 2; g <= degree; ++g) {
        std::uint64_t ways = 1;
        for (int e : prime_exponents(static_cast<std::uint64_t>(g)))
            ways = checked_mul(ways, binomial_u64(static_cast<std::uint64_t>(e + n - 1),
                                                  static_cast<std::uint64_t>(n - 1)));
        count += ways;
        if (count > (std::uint64_t{1} << 62))
            throw CapacityError("hyperbolic cardinality overflows");
    }
    return count;
}

void check_dims(int dim) {
    if (dim < 1) throw std::invalid_argument("multi-index set: dim must be >= 1");
}

}  // namespace

std::string to_string(IndexSetKind kind) {
    switch (kind) {
        case IndexSetKind::Full: return "full";
        case IndexSetKind::Total: return "total";
        case IndexSetKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

IndexSetKind index_set_kind_from_string(const std::string& s) {
    if (s == "full") return IndexSetKind::Full;
    if (s == "total") return IndexSetKind::Total;
    if (s == "hyperbolic") return IndexSetKind::Hyperbolic;
    throw std::invalid_argument("unknown index set kind: " + s);
}

MultiIndexSet::MultiIndexSet(int dim, IndexSetKind kind, std::vector<int> degrees,
                             std::vector<int> flat)
    : dim_(dim), kind_(kind), degrees_(std::move(degrees)), flat_(std::move(flat)) {
    kmax_.assign(static_cast<std::size_t>(dim_), 0);
    for (std::size_t i = 0; i < size(); ++i) {
        auto row = (*this)[i];
        for (int l = 0; l < dim_; ++l)
            kmax_[static_cast<std::size_t>(l)] =
                std::max(kmax_[static_cast<std::size_t>(l)], row[static_cast<std::size_t>(l)]);
    }
}

MultiIndexSet MultiIndexSet::full(std::vector<int> degrees, std::size_t max_indices) {
    check_dims(static_cast<int>(degrees.size()));
    const int dim = static_cast<int>(degrees.size());
    std::uint64_t n = 1;
    for (int K : degrees) {
        if (K < 0) throw std::invalid_argument("full set: degrees must be >= 0");
        n = checked_mul(n, static_cast<std::uint64_t>(K) + 1);
        if (n > max_indices) throw CapacityError("full set exceeds index limit");
    }
    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(n) * dim);
    std::vector<int> k(static_cast<std::size_t>(dim), 0);
    // odometer with the rightmost coordinate fastest = lexicographic rows
    while (true) {
        flat.insert(flat.end(), k.begin(), k.end());
        int l = dim - 1;
        while (l >= 0 && k[static_cast<std::size_t>(l)] ==
                             degrees[static_cast<std::size_t>(l)]) {
            k[static_cast<std::size_t>(l)] = 0;
            --l;
        }
        if (l < 0) break;
        ++k[static_cast<std::size_t>(l)];
    }
    return MultiIndexSet(dim, IndexSetKind::Full, std::move(degrees), std::move(flat));
}

MultiIndexSet MultiIndexSet::total(int dim, int degree, std::size_t max_indices) {
    check_dims(dim);
    if (degree < 0) throw std::invalid_argument("total set: degree must be >= 0");
    if (cardinality_total(dim, degree) > max_indices)
        throw CapacityError("total-degree set exceeds index limit");
    std::vector<int> flat;
    std::vector<int> k(static_cast<std::size_t>(dim), 0);
    const auto recurse = [&](auto&& self, int l, int budget) -> void {
        if (l == dim - 1) {
            for (int v = 0; v <= budget; ++v) {
                k[static_cast<std::size_t>(l)] = v;
                flat.insert(flat.end(), k.begin(), k.end());
            }
            k[static_cast<std::size_t>(l)] = 0;
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            k[static_cast<std::size_t>(l)] = v;
            self(self, l + 1, budget - v);
        }
        k[static_cast<std::size_t>(l)] = 0;
    };
    recurse(recurse, 0, degree);
    return MultiIndexSet(dim, IndexSetKind::Total, {degree}, std::move(flat));
}

MultiIndexSet MultiIndexSet::hyperbolic(int dim, int degree, std::size_t max_indices) {
    check_dims(dim);
    if (degree < 1)
        throw std::invalid_argument(
            "hyperbolic set: degree must be >= 1 (prod max(k_l,1) >= 1 always)");
    if (cardinality_hyperbolic(dim, degree) > max_indices)
        throw CapacityError("hyperbolic set exceeds index limit");
    std::vector<int> flat;
    std::vector<int> k(static_cast<std::size_t>(dim), 0);
    const auto recurse = [&](auto&& self, int l, long long prod) -> void {
        if (l == dim) {
            flat.insert(flat.end(), k.begin(), k.end());
            return;
        }
        for (int v = 0;; ++v) {
            const long long factor = std::max(v, 1);
            if (prod * factor > degree) break;
            k[static_cast<std::size_t>(l)] = v;
            self(self, l + 1, prod * factor);
        }
        k[static_cast<std::size_t>(l)] = 0;
    };
    recurse(recurse, 0, 1);
    return MultiIndexSet(dim, IndexSetKind::Hyperbolic, {degree}, std::move(flat));
}

MultiIndexSet MultiIndexSet::build(int dim, IndexSetKind kind, int degree,
                                   std::size_t max_indices) {
    switch (kind) {
        case IndexSetKind::Full:
            return full(std::vector<int>(static_cast<std::size_t>(dim), degree),
                        max_indices);
        case IndexSetKind::Total:
            return total(dim, degree, max_indices);
        case IndexSetKind::Hyperbolic:
            return hyperbolic(dim, degree, max_indices);
    }
    throw std::invalid_argument("unknown index set kind");
}

bool MultiIndexSet::contains(std::span<const int> k) const noexcept {
    if (k.size() != static_cast<std::size_t>(dim_)) return false;
    // rows are lexicographically sorted by construction
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        auto row = (*this)[mid];
        const auto cmp = std::lexicographical_compare_three_way(
            row.begin(), row.end(), k.begin(), k.end());
        if (cmp == std::strong_ordering::less)
            lo = mid + 1;
        else if (cmp == std::strong_ordering::greater)
            hi = mid;
        else
            return true;
    }
    return false;
}

bool MultiIndexSet::is_downward_closed() const {
    std::vector<int> probe(static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < size(); ++i) {
        auto row = (*this)[i];
        for (int l = 0; l < dim_; ++l) {
            if (row[static_cast<std::size_t>(l)] == 0) continue;
            std::copy(row.begin(), row.end(), probe.begin());
            --probe[static_cast<std::size_t>(l)];
            if (!contains(probe)) return false;
        }
    }
    return true;
}

std::uint64_t cardinality_total(int dim, int degree) {
    check_dims(dim);
    if (degree < 0) throw std::invalid_argument("total set: degree must be >= 0");
    return binomial_u64(static_cast<std::uint64_t>(degree) + dim,
                        static_cast<std::uint64_t>(dim));
}

std::uint64_t cardinality_hyperbolic(int dim, int degree) {
    check_dims(dim);
    if (degree < 1) throw std::invalid_argument("hyperbolic set: degree must be >= 1");
    // all-nonzero block in full dimension
    std::uint64_t count = count_positive_hyperbolic(dim, degree);
    // blocks with c zero coordinates, 1 <= c <= dim-1, then the zero index
    for (int c = 1; c <= dim - 1; ++c) {
        const std::uint64_t ways = binomial_u64(static_cast<std::uint64_t>(dim),
                                                static_cast<std::uint64_t>(c));
        count += checked_mul(ways, count_positive_hyperbolic(dim - c, degree));
    }
    return count + 1;
}

}  // namespace qrmc

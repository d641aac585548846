#pragma once

#include <span>
#include <vector>

#include "qrmc/multi_index.hpp"
#include "qrmc/student.hpp"

namespace qrmc {

/// Cosine basis on [0,1]: 1 for k = 0, sqrt(2) cos(k pi u) otherwise.
/// Orthonormal under the Lebesgue measure on [0,1].
double cosine_eval(int k, double u);

/// Tensor basis element phi_k(x) = prod_l C_{k_l}(F_nu(x_l)); orthonormal
/// in L^2(nu). Bounded by 2^{d/2}.
double phi_eval(std::span<const int> k, std::span<const double> x,
                const SamplingMeasure& measure);

/// Christoffel number of the truncated basis: sum over k in Gamma of
/// ||phi_k||_inf^2 = 2^{#nonzero components of k}. At most 2^d * #Gamma.
double christoffel_number(const MultiIndexSet& gamma);

/// Measure + index set pair the series operations run against.
struct BasisContext {
    SamplingMeasure measure;
    MultiIndexSet gamma;

    BasisContext(SamplingMeasure m, MultiIndexSet g);
};

/// sum_{k in Gamma} coeffs[k] * phi_k(x).
double eval_series(std::span<const double> coeffs, std::span<const double> x,
                   const BasisContext& context);

/// Reusable workspace for repeated series evaluations against one context.
///
/// load_point computes the per-coordinate CDF values once and fills
/// cos(k pi u_l) tables up to the set's max degree (Chebyshev recurrence),
/// after which every basis element is a d-fold table product. Not
/// thread-safe; give each worker its own evaluator.
class SeriesEvaluator {
public:
    SeriesEvaluator(const SamplingMeasure& measure, const MultiIndexSet& gamma);

    void load_point(std::span<const double> x);

    /// Basis element value at the loaded point, by position in Gamma.
    double basis_value(std::size_t index) const noexcept;

    /// Dot product of coeffs with all basis values at the loaded point.
    double dot(std::span<const double> coeffs) const;

    /// load_point + dot in one call.
    double eval(std::span<const double> coeffs, std::span<const double> x);

    const MultiIndexSet& gamma() const noexcept { return *gamma_; }

private:
    const SamplingMeasure* measure_;
    const MultiIndexSet* gamma_;
    std::vector<std::size_t> offset_;  // per-coordinate table start
    std::vector<double> table_;
};

}  // namespace qrmc

#include "qrmc/cosine_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qrmc {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double cosine_eval(int k, double u) {
    if (k < 0) throw std::domain_error("cosine_eval: k must be >= 0");
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("cosine_eval: u must be in [0,1]");
    if (k == 0) return 1.0;
    return kSqrt2 * std::cos(k * M_PI * u);
}

double phi_eval(std::span<const int> k, std::span<const double> x,
                const SamplingMeasure& measure) {
    if (k.size() != x.size() || k.size() != static_cast<std::size_t>(measure.dim()))
        throw std::invalid_argument("phi_eval: dimension mismatch");
    double prod = 1.0;
    for (std::size_t l = 0; l < k.size(); ++l)
        prod *= cosine_eval(k[l], measure.cdf(x[l], static_cast<int>(l)));
    return prod;
}

double christoffel_number(const MultiIndexSet& gamma) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        int nonzero = 0;
        for (int v : gamma[i])
            if (v != 0) ++nonzero;
        sum += std::ldexp(1.0, nonzero);  // 2^nonzero
    }
    return sum;
}

BasisContext::BasisContext(SamplingMeasure m, MultiIndexSet g)
    : measure(std::move(m)), gamma(std::move(g)) {
    if (measure.dim() != gamma.dim())
        throw std::invalid_argument("BasisContext: measure and gamma dims differ");
}

double eval_series(std::span<const double> coeffs, std::span<const double> x,
                   const BasisContext& context) {
    SeriesEvaluator evaluator(context.measure, context.gamma);
    return evaluator.eval(coeffs, x);
}

SeriesEvaluator::SeriesEvaluator(const SamplingMeasure& measure,
                                 const MultiIndexSet& gamma)
    : measure_(&measure), gamma_(&gamma) {
    if (measure.dim() != gamma.dim())
        throw std::invalid_argument("SeriesEvaluator: measure and gamma dims differ");
    offset_.resize(static_cast<std::size_t>(gamma.dim()) + 1);
    offset_[0] = 0;
    for (int l = 0; l < gamma.dim(); ++l)
        offset_[static_cast<std::size_t>(l) + 1] =
            offset_[static_cast<std::size_t>(l)] +
            static_cast<std::size_t>(gamma.max_degree_per_coord()[static_cast<std::size_t>(l)]) + 1;
    table_.resize(offset_.back());
}

void SeriesEvaluator::load_point(std::span<const double> x) {
    const int d = gamma_->dim();
    if (x.size() != static_cast<std::size_t>(d))
        throw std::invalid_argument("SeriesEvaluator: point dimension mismatch");
    for (int l = 0; l < d; ++l) {
        double* t = table_.data() + offset_[static_cast<std::size_t>(l)];
        const int kmax = gamma_->max_degree_per_coord()[static_cast<std::size_t>(l)];
        const double u = measure_->cdf(x[static_cast<std::size_t>(l)], l);
        const double c1 = std::cos(M_PI * u);
        t[0] = 1.0;
        if (kmax >= 1) {
            // cos(k pi u) by the Chebyshev three-term recurrence
            double prev = 1.0, cur = c1;
            t[1] = kSqrt2 * c1;
            for (int k = 2; k <= kmax; ++k) {
                const double next = 2.0 * c1 * cur - prev;
                prev = cur;
                cur = next;
                t[k] = kSqrt2 * next;
            }
        }
    }
}

double SeriesEvaluator::basis_value(std::size_t index) const noexcept {
    auto k = (*gamma_)[index];
    double prod = 1.0;
    for (std::size_t l = 0; l < k.size(); ++l)
        prod *= table_[offset_[l] + static_cast<std::size_t>(k[l])];
    return prod;
}

double SeriesEvaluator::dot(std::span<const double> coeffs) const {
    if (coeffs.size() != gamma_->size())
        throw std::invalid_argument("SeriesEvaluator: coefficient length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        sum += coeffs[i] * basis_value(i);
    return sum;
}

double SeriesEvaluator::eval(std::span<const double> coeffs,
                             std::span<const double> x) {
    load_point(x);
    return dot(coeffs);
}

}  // namespace qrmc

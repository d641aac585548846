#pragma once

#include <span>
#include <vector>

#include "qrmc/rng.hpp"

namespace qrmc {

/// Product sampling measure on R^d whose marginals are non-standardized
/// Student's t laws with common shape parameter mu and per-coordinate
/// centers:
///
///     nu_l(x) = c_mu * (1 + (x - center_l)^2)^{-(mu+1)/2},
///     c_mu    = Gamma((mu+1)/2) / (Gamma(mu/2) * sqrt(pi)).
///
/// mu = 1 is the Cauchy law, mu = 2 has an algebraic CDF; both use closed
/// forms. Other mu values are served through the standard Student's t
/// (scaled by 1/sqrt(mu)) from boost::math.
///
/// Immutable after construction; all member functions are const and safe
/// to call concurrently.
class SamplingMeasure {
public:
    /// center may be empty (all zeros) or have exactly dim entries.
    SamplingMeasure(double mu, int dim, std::vector<double> center = {});

    double mu() const noexcept { return mu_; }
    int dim() const noexcept { return dim_; }
    const std::vector<double>& center() const noexcept { return center_; }
    double normalization() const noexcept { return c_mu_; }

    /// Marginal density of coordinate `coord` at x. Throws std::domain_error
    /// for non-finite x.
    double pdf(double x, int coord = 0) const;

    /// Marginal CDF, strictly increasing, values in (0,1).
    double cdf(double x, int coord = 0) const;

    /// Inverse marginal CDF. u must lie in (0,1); it is clamped to
    /// [1e-15, 1 - 1e-15] before evaluation so extreme uniforms cannot
    /// produce infinities.
    double inv_cdf(double u, int coord = 0) const;

    /// Deterministic inverse-transform map from d uniforms to a sample.
    void transform(std::span<const double> uniforms, std::span<double> out) const;

    /// Draw one d-dimensional sample from the stream (d uniforms consumed).
    std::vector<double> sample(RngStream& stream) const;
    void sample(RngStream& stream, std::span<double> out) const;

private:
    double centered_cdf(double x) const;      // center = 0
    double centered_inv_cdf(double u) const;  // center = 0

    double mu_;
    int dim_;
    std::vector<double> center_;
    double c_mu_;
    enum class Form { Cauchy, AlgebraicMu2, General } form_;
};

}  // namespace qrmc

#include "qrmc/student.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace qrmc {

namespace {

constexpr double kGuardBand = 1e-15;

// Standard Student's t with mu degrees of freedom; our marginal is T/sqrt(mu).
boost::math::students_t_distribution<double> standard_t(double mu) {
    return boost::math::students_t_distribution<double>(mu);
}

}  // namespace

SamplingMeasure::SamplingMeasure(double mu, int dim, std::vector<double> center)
    : mu_(mu), dim_(dim), center_(std::move(center)) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("SamplingMeasure: mu must be positive and finite");
    if (dim < 1)
        throw std::invalid_argument("SamplingMeasure: dim must be >= 1");
    if (center_.empty()) {
        center_.assign(static_cast<std::size_t>(dim), 0.0);
    } else if (center_.size() != static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("SamplingMeasure: center size must equal dim");
    }
    for (double c : center_)
        if (!std::isfinite(c))
            throw std::invalid_argument("SamplingMeasure: center must be finite");

    c_mu_ = std::exp(std::lgamma((mu_ + 1.0) / 2.0) - std::lgamma(mu_ / 2.0)) /
            std::sqrt(M_PI);
    if (mu_ == 1.0)
        form_ = Form::Cauchy;
    else if (mu_ == 2.0)
        form_ = Form::AlgebraicMu2;
    else
        form_ = Form::General;
}

double SamplingMeasure::pdf(double x, int coord) const {
    if (!std::isfinite(x))
        throw std::domain_error("SamplingMeasure::pdf: x must be finite");
    const double z = x - center_[static_cast<std::size_t>(coord)];
    return c_mu_ * std::pow(1.0 + z * z, -(mu_ + 1.0) / 2.0);
}

double SamplingMeasure::centered_cdf(double x) const {
    switch (form_) {
        case Form::Cauchy:
            return 0.5 + std::atan(x) / M_PI;
        case Form::AlgebraicMu2:
            return 0.5 * (x / std::sqrt(x * x + 1.0) + 1.0);
        case Form::General:
            return boost::math::cdf(standard_t(mu_), x * std::sqrt(mu_));
    }
    return 0.0;  // unreachable
}

double SamplingMeasure::centered_inv_cdf(double u) const {
    switch (form_) {
        case Form::Cauchy:
            return std::tan(M_PI * (u - 0.5));
        case Form::AlgebraicMu2:
            // sign(u - 1/2) * sqrt((u - 1/2)^2 / (u (1 - u)))
            return (u - 0.5) / std::sqrt(u * (1.0 - u));
        case Form::General:
            return boost::math::quantile(standard_t(mu_), u) / std::sqrt(mu_);
    }
    return 0.0;  // unreachable
}

double SamplingMeasure::cdf(double x, int coord) const {
    if (!std::isfinite(x))
        throw std::domain_error("SamplingMeasure::cdf: x must be finite");
    return centered_cdf(x - center_[static_cast<std::size_t>(coord)]);
}

double SamplingMeasure::inv_cdf(double u, int coord) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("SamplingMeasure::inv_cdf: u must be in (0,1)");
    u = std::min(std::max(u, kGuardBand), 1.0 - kGuardBand);
    return centered_inv_cdf(u) + center_[static_cast<std::size_t>(coord)];
}

void SamplingMeasure::transform(std::span<const double> uniforms,
                                std::span<double> out) const {
    if (uniforms.size() != static_cast<std::size_t>(dim_) ||
        out.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("SamplingMeasure::transform: size mismatch");
    for (int l = 0; l < dim_; ++l)
        out[static_cast<std::size_t>(l)] =
            inv_cdf(uniforms[static_cast<std::size_t>(l)], l);
}

void SamplingMeasure::sample(RngStream& stream, std::span<double> out) const {
    if (out.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("SamplingMeasure::sample: size mismatch");
    for (int l = 0; l < dim_; ++l)
        out[static_cast<std::size_t>(l)] = inv_cdf(stream.next_uniform(), l);
}

std::vector<double> SamplingMeasure::sample(RngStream& stream) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    sample(stream, out);
    return out;
}

}  // namespace qrmc

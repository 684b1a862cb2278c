#pragma once

namespace scorebounds {

/// Standard normal CDF.
double norm_cdf(double z);

/// Standard normal density.
double norm_pdf(double z);

/// Inverse standard normal CDF for p in (0,1). Rational initialization
/// refined by one Halley step; absolute error below 1e-12 in probability.
double inv_norm_cdf(double p);

}  // namespace scorebounds

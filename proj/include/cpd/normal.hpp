#pragma once

namespace cpd {

/// Standard normal quantile, Wichura's PPND16 rational approximation
/// (relative error below 1e-15 on (0,1)). p must lie strictly inside (0,1).
double normal_quantile(double p);

/// Standard normal c.d.f.
double normal_cdf(double x);

}  // namespace cpd

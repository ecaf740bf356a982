#include "mitt/stats.hpp"

#include <boost/math/distributions/normal.hpp>

namespace mitt {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double normal_quantile(double p) { return boost::math::quantile(kStdNormal, p); }

double normal_upper_tail(double x) {
  return boost::math::cdf(boost::math::complement(kStdNormal, x));
}

}  // namespace mitt

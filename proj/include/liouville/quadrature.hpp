#pragma once

#include <vector>

namespace liouville {

/// Gauss-Legendre rule mapped to [0, 1]; exact for polynomials of degree 2*order-1.
struct GaussLegendreRule {
    std::vector<long double> nodes;
    std::vector<long double> weights;
};

GaussLegendreRule gauss_legendre(int order);

} // namespace liouville

#include "liouville/quadrature.hpp"

#include "liouville/errors.hpp"

#include <cmath>
#include <numbers>

namespace liouville {

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1 || order > 64) throw DomainError("quadrature order must be in [1, 64]");
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        // Newton iteration on P_order from the Chebyshev-like initial guess.
        long double x = std::cos(pi * (i + 0.75L) / (order + 0.5L));
        long double dp = 1;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= order; ++k) {
                long double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (order == 1) {
                p1 = x;
                p0 = 1;
            }
            dp = order * (x * p1 - p0) / (x * x - 1);
            long double step = p1 / dp;
            x -= step;
            if (std::fabs(step) < 1e-19L) break;
        }
        // Recompute the derivative at the converged node.
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= order; ++k) {
            long double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = (order == 1) ? 1.0L : order * (x * p1 - p0) / (x * x - 1);
        long double w = 2 / ((1 - x * x) * dp * dp);
        // Map [-1, 1] -> [0, 1], ascending nodes.
        rule.nodes[i] = (1 - x) / 2;
        rule.nodes[order - 1 - i] = (1 + x) / 2;
        rule.weights[i] = w / 2;
        rule.weights[order - 1 - i] = w / 2;
    }
    return rule;
}

} // namespace liouville

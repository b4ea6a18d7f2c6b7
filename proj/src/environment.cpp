#include "sll/environment.hpp"

#include <stdexcept>

#include "sll/values.hpp"

namespace sll {

Environment::Environment(double lambda, double rho, double cost, int n, SignalModel signals)
    : lambda_(lambda), rho_(rho), cost_(cost), n_(n), signals_(std::move(signals)) {
    if (!(lambda > 0.0 && lambda < 0.5))
        throw std::invalid_argument("lambda must lie in (0, 1/2)");
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("rho must lie in (0, 1]");
    if (cost < 0.0) throw std::invalid_argument("cost must be nonnegative");
    if (n < 0) throw std::invalid_argument("sample size must be nonnegative");
    if (!(value_informed(0.5, signals_) - cost > 0.5))
        throw std::invalid_argument(
            "information must be strictly valuable at belief 1/2: v(1/2) - c > 1/2");
    p_hat_ = sll::p_hat(signals_, cost_);
}

double Environment::effective_lambda() const {
    return lambda_ / (1.0 - (1.0 - rho_) * (1.0 - 2.0 * lambda_));
}

}  // namespace sll

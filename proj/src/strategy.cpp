#include "sll/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace sll {

namespace {
constexpr double kTieTol = 1e-12;
}

Strategy Strategy::full_acquisition(int n) {
    Strategy s;
    s.beta.assign(static_cast<std::size_t>(n) + 1, 1.0);
    s.beliefs.assign(static_cast<std::size_t>(n) + 1, 0.5);
    s.tie.assign(static_cast<std::size_t>(n) + 1, 0.5);
    return s;
}

bool Strategy::symmetric(double tol) const {
    const int nn = n();
    for (int k = 0; k <= nn; ++k) {
        std::size_t i = static_cast<std::size_t>(k), j = static_cast<std::size_t>(nn - k);
        if (std::abs(beta[i] - beta[j]) > tol) return false;
        if (std::abs(beliefs[i] - (1.0 - beliefs[j])) > tol) return false;
    }
    return true;
}

void Strategy::validate() const {
    if (beta.empty() || beta.size() != beliefs.size() || beta.size() != tie.size())
        throw std::invalid_argument("strategy vectors must share length n+1");
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (beta[i] < 0.0 || beta[i] > 1.0) throw std::invalid_argument("beta outside [0,1]");
        if (beliefs[i] < 0.0 || beliefs[i] > 1.0)
            throw std::invalid_argument("belief outside [0,1]");
        if (tie[i] < 0.0 || tie[i] > 1.0) throw std::invalid_argument("tie outside [0,1]");
    }
}

double phi(const Strategy& strategy, const Environment& env, Theta theta, int k) {
    if (k < 0 || k > strategy.n()) throw std::invalid_argument("sample count out of range");
    std::size_t i = static_cast<std::size_t>(k);
    double p_k = strategy.beliefs[i];
    double cutoff = 1.0 - p_k;

    // Informed: follow the posterior, tie-broken at q = 1 - p_k.
    double informed = env.signals().prob_above(theta, cutoff, strategy.tie[i]);

    // Uninformed: same rule evaluated at q = 1/2.
    double uninformed;
    if (0.5 > cutoff + kTieTol)
        uninformed = 1.0;
    else if (std::abs(0.5 - cutoff) <= kTieTol)
        uninformed = strategy.tie[i];
    else
        uninformed = 0.0;

    double b = strategy.beta[i];
    return b * informed + (1.0 - b) * uninformed;
}

}  // namespace sll

#include "sll/values.hpp"

#include <cmath>
#include <stdexcept>

#include "sll/numeric.hpp"

namespace sll {

double value_informed(double p, const SignalModel& signals) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("belief outside [0,1]");
    double cutoff = 1.0 - p;
    // P(play 1 | theta) with the 50/50 tie rule at q = 1-p.
    double play1_in_1 = signals.prob_above(Theta::one, cutoff, 0.5);
    double play1_in_0 = signals.prob_above(Theta::zero, cutoff, 0.5);
    return p * play1_in_1 + (1.0 - p) * (1.0 - play1_in_0);
}

double posterior(double p, double q) {
    if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
        throw std::invalid_argument("posterior: arguments outside [0,1]");
    double num = p * q;
    double den = num + (1.0 - p) * (1.0 - q);
    if (den == 0.0)
        throw std::domain_error("posterior undefined: certain belief meets opposite certain signal");
    return num / den;
}

double p_hat(const SignalModel& signals, double cost) {
    if (cost < 0.0) throw std::invalid_argument("information cost must be nonnegative");
    auto gain = [&](double p) { return value_informed(p, signals) - cost - value_uninformed(p); };
    if (!(gain(0.5) > 0.0))
        throw std::invalid_argument("information must be strictly valuable at belief 1/2");
    // gain is convex on [1/2, 1] with gain(1) = -cost <= 0; the set where it
    // is strictly positive is [1/2, p_hat).
    return bisect_boundary([&](double p) { return gain(p) > 0.0; }, 0.5, 1.0, 1e-12, 200);
}

}  // namespace sll

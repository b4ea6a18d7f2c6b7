#pragma once

#include "sll/signal_model.hpp"

namespace sll {

// Match probability when acquiring a signal at interim belief p: play 1 iff
// the signal q exceeds 1-p, splitting an atom exactly at the cutoff 50/50.
// Convex, symmetric around 1/2; equals max(p, 1-p, pi) for binary signals.
double value_informed(double p, const SignalModel& signals);

// Match probability without a signal: follow the more likely state.
inline double value_uninformed(double p) { return p > 0.5 ? p : 1.0 - p; }

// Bayes posterior from interim belief p and signal q. Throws std::domain_error
// on the 0/0 case (certain prior meeting the opposite certain signal).
double posterior(double p, double q);

// The indifference threshold: information is strictly valuable exactly on
// (1 - p_hat, p_hat). Bisection on [1/2, 1] to 1e-12.
double p_hat(const SignalModel& signals, double cost);

}  // namespace sll

#pragma once

#include "sll/signal_model.hpp"

namespace sll {

// One game instance: switching probability, sampling recency, information
// cost, sample size, and the signal technology. Immutable after construction;
// the constructor enforces the parameter ranges and that information is
// strictly valuable at belief 1/2.
class Environment {
  public:
    Environment(double lambda, double rho, double cost, int n, SignalModel signals);

    double lambda() const { return lambda_; }
    double rho() const { return rho_; }
    double cost() const { return cost_; }
    int n() const { return n_; }
    const SignalModel& signals() const { return signals_; }

    // Indifference threshold for this cost/signal pair (cached).
    double p_hat() const { return p_hat_; }

    // Probability that a sampled action was taken under a state different
    // from today's; equals lambda when rho = 1, tends to 1/2 as rho -> 0.
    double effective_lambda() const;

  private:
    double lambda_;
    double rho_;
    double cost_;
    int n_;
    SignalModel signals_;
    double p_hat_;
};

}  // namespace sll

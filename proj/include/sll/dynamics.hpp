#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sll/strategy.hpp"

namespace sll {

struct PopulationState {
    Theta theta;
    double x;  // prevalence of action 1 in the sampling pool
};

// Per-state response probabilities phi_theta(k), precomputed once so the
// one-step map can be evaluated cheaply inside simulations and solvers.
class Dynamics {
  public:
    Dynamics(const Strategy& strategy, const Environment& env);

    // Explicit response tables, for strategies whose uninformed action is not
    // derived from beliefs (e.g. majority-copying rules).
    Dynamics(int n, double rho, std::vector<double> phi0, std::vector<double> phi1);

    // One-step map x' = g_theta(x) = (1-rho) x + rho sum_k B(n,k,x) phi_theta(k).
    double g(Theta theta, double x) const;

    double phi(Theta theta, int k) const {
        return phi_[theta == Theta::one ? 1 : 0][static_cast<std::size_t>(k)];
    }
    int n() const { return n_; }
    double rho() const { return rho_; }

  private:
    int n_;
    double rho_;
    std::vector<double> phi_[2];
};

// Simulates the hidden-Markov population chain: theta flips with probability
// lambda each period, then x updates through g under the new state.
// Deterministic given the seed.
std::vector<PopulationState> simulate_chain(const Strategy& strategy, const Environment& env,
                                            double x0, Theta theta0, std::int64_t horizon,
                                            std::uint64_t seed);

// Streaming variant for long runs: visit(t, state) is called once per period,
// t = 1..horizon, after the period's transition.
void simulate_chain_visit(const Dynamics& dyn, double lambda, double x0, Theta theta0,
                          std::int64_t horizon, std::uint64_t seed,
                          const std::function<void(std::int64_t, const PopulationState&)>& visit);

}  // namespace sll

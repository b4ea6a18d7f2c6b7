#include "sll/dynamics.hpp"

#include <stdexcept>

#include "sll/numeric.hpp"
#include "sll/rng.hpp"

namespace sll {

Dynamics::Dynamics(const Strategy& strategy, const Environment& env)
    : n_(env.n()), rho_(env.rho()) {
    if (strategy.n() != n_) throw std::invalid_argument("strategy size does not match environment");
    for (int t = 0; t < 2; ++t) {
        phi_[t].resize(static_cast<std::size_t>(n_) + 1);
        for (int k = 0; k <= n_; ++k)
            phi_[t][static_cast<std::size_t>(k)] =
                sll::phi(strategy, env, t == 1 ? Theta::one : Theta::zero, k);
    }
}

Dynamics::Dynamics(int n, double rho, std::vector<double> phi0, std::vector<double> phi1)
    : n_(n), rho_(rho) {
    if (phi0.size() != static_cast<std::size_t>(n) + 1 || phi1.size() != phi0.size())
        throw std::invalid_argument("response tables must have length n+1");
    phi_[0] = std::move(phi0);
    phi_[1] = std::move(phi1);
}

double Dynamics::g(Theta theta, double x) const {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("prevalence outside [0,1]");
    const std::vector<double>& ph = phi_[theta == Theta::one ? 1 : 0];
    double acc = 0.0;
    if (n_ <= 30) {
        // Horner-style accumulation over the binomial pmf.
        double pmf[32];
        binomial_pmf(n_, x, {pmf, static_cast<std::size_t>(n_) + 1});
        for (int k = 0; k <= n_; ++k) acc += pmf[k] * ph[static_cast<std::size_t>(k)];
    } else {
        std::vector<double> pmf(static_cast<std::size_t>(n_) + 1);
        binomial_pmf(n_, x, pmf);
        for (int k = 0; k <= n_; ++k) acc += pmf[static_cast<std::size_t>(k)] * ph[static_cast<std::size_t>(k)];
    }
    double y = (1.0 - rho_) * x + rho_ * acc;
    if (y < 0.0) y = 0.0;
    if (y > 1.0) y = 1.0;
    return y;
}

void simulate_chain_visit(const Dynamics& dyn, double lambda, double x0, Theta theta0,
                          std::int64_t horizon, std::uint64_t seed,
                          const std::function<void(std::int64_t, const PopulationState&)>& visit) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    Rng rng(seed);
    PopulationState s{theta0, x0};
    for (std::int64_t t = 1; t <= horizon; ++t) {
        if (rng.bernoulli(lambda)) s.theta = flip(s.theta);
        s.x = dyn.g(s.theta, s.x);
        visit(t, s);
    }
}

std::vector<PopulationState> simulate_chain(const Strategy& strategy, const Environment& env,
                                            double x0, Theta theta0, std::int64_t horizon,
                                            std::uint64_t seed) {
    Dynamics dyn(strategy, env);
    std::vector<PopulationState> out;
    out.reserve(static_cast<std::size_t>(horizon));
    simulate_chain_visit(dyn, env.lambda(), x0, theta0, horizon, seed,
                         [&](std::int64_t, const PopulationState& s) { out.push_back(s); });
    return out;
}

}  // namespace sll

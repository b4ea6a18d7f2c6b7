#pragma once

#include <vector>

#include "sll/environment.hpp"

namespace sll {

// Acquisition probabilities beta(k) plus the beliefs p_k the action rule is
// derived from: play 1 iff the signal q exceeds 1 - p_k (and iff p_k > 1/2
// when uninformed), with an explicit tie probability at exact indifference.
struct Strategy {
    std::vector<double> beta;     // length n+1
    std::vector<double> beliefs;  // p_k, length n+1
    std::vector<double> tie;      // length n+1, default 1/2

    static Strategy full_acquisition(int n);

    int n() const { return static_cast<int>(beta.size()) - 1; }
    bool symmetric(double tol = 1e-9) const;
    void validate() const;
};

// Probability of playing action 1 in state theta with a sample of k ones.
double phi(const Strategy& strategy, const Environment& env, Theta theta, int k);

}  // namespace sll

#pragma once

#include <cstddef>
#include <vector>

#include "sll/rng.hpp"

namespace sll {

enum class Theta : int { zero = 0, one = 1 };

inline Theta flip(Theta t) { return t == Theta::one ? Theta::zero : Theta::one; }

// Distribution of induced posterior beliefs q under a uniform prior.
// Atomic: the unconditional distribution H is a finite list of (q, mass)
// pairs, symmetric under q -> 1-q. State-conditional masses follow from
// Bayes: mass_1(q) = 2q m(q), mass_0(q) = 2(1-q) m(q).
class SignalModel {
  public:
    struct Atom {
        double q;     // posterior belief
        double mass;  // unconditional mass
    };

    enum class Kind { binary, tabulated };

    static SignalModel binary(double precision);
    static SignalModel tabulated(std::vector<Atom> atoms);

    Kind kind() const { return kind_; }
    double precision() const { return precision_; }  // meaningful for binary only
    const std::vector<Atom>& atoms() const { return atoms_; }

    double support_min() const { return atoms_.front().q; }
    double support_max() const { return atoms_.back().q; }

    // State-conditional mass of the atom at q (0 if no atom there).
    double conditional_mass(Theta theta, double q) const;

    // cdf H_theta(q), right-continuous.
    double cdf(Theta theta, double q) const;

    // Mid-value convention: (H(q) + H(q-)) / 2. Coincides with the cdf at
    // continuity points; used uniformly when a threshold hits an atom.
    double cdf_mid(Theta theta, double q) const;

    // Probability that a signal drawn in state theta strictly exceeds the
    // cutoff, counting an atom exactly at the cutoff with weight tie_weight.
    double prob_above(Theta theta, double cutoff, double tie_weight) const;

    double sample(Theta theta, Rng& rng) const;

  private:
    SignalModel() = default;
    void validate() const;

    Kind kind_ = Kind::binary;
    double precision_ = 0.0;
    std::vector<Atom> atoms_;  // sorted by q
};

}  // namespace sll

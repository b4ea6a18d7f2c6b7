#include "sll/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sll {

namespace {
constexpr double kAtomTol = 1e-12;
}

SignalModel SignalModel::binary(double precision) {
    if (!(precision > 0.5) || !(precision <= 1.0))
        throw std::invalid_argument("binary signal precision must lie in (1/2, 1]");
    SignalModel m;
    m.kind_ = Kind::binary;
    m.precision_ = precision;
    m.atoms_ = {{1.0 - precision, 0.5}, {precision, 0.5}};
    m.validate();
    return m;
}

SignalModel SignalModel::tabulated(std::vector<Atom> atoms) {
    SignalModel m;
    m.kind_ = Kind::tabulated;
    m.atoms_ = std::move(atoms);
    std::sort(m.atoms_.begin(), m.atoms_.end(), [](const Atom& a, const Atom& b) { return a.q < b.q; });
    m.validate();
    return m;
}

void SignalModel::validate() const {
    if (atoms_.empty()) throw std::invalid_argument("signal model needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (a.q < 0.0 || a.q > 1.0) throw std::invalid_argument("signal atom outside [0,1]");
        if (a.mass <= 0.0) throw std::invalid_argument("signal atom mass must be positive");
        total += a.mass;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("signal atom masses must sum to 1");
    // Symmetry of the unconditional distribution under q -> 1-q. This yields
    // the state symmetry H_0(q) = 1 - H_1((1-q)-).
    for (const Atom& a : atoms_) {
        double mirror_mass = 0.0;
        for (const Atom& b : atoms_)
            if (std::abs(b.q - (1.0 - a.q)) <= kAtomTol) mirror_mass += b.mass;
        if (std::abs(mirror_mass - a.mass) > 1e-9)
            throw std::invalid_argument("signal distribution must be symmetric under q -> 1-q");
    }
    // Informativeness: H_1 < H_0 somewhere, i.e. some atom away from 1/2.
    bool informative = false;
    for (const Atom& a : atoms_)
        if (std::abs(a.q - 0.5) > kAtomTol) informative = true;
    if (!informative)
        throw std::invalid_argument("signal distribution is uninformative");
}

double SignalModel::conditional_mass(Theta theta, double q) const {
    double m = 0.0;
    for (const Atom& a : atoms_)
        if (std::abs(a.q - q) <= kAtomTol)
            m += (theta == Theta::one ? 2.0 * a.q : 2.0 * (1.0 - a.q)) * a.mass;
    return m;
}

double SignalModel::cdf(Theta theta, double q) const {
    double c = 0.0;
    for (const Atom& a : atoms_) {
        if (a.q <= q + kAtomTol)
            c += (theta == Theta::one ? 2.0 * a.q : 2.0 * (1.0 - a.q)) * a.mass;
        else
            break;
    }
    return c;
}

double SignalModel::cdf_mid(Theta theta, double q) const {
    return cdf(theta, q) - 0.5 * conditional_mass(theta, q);
}

double SignalModel::prob_above(Theta theta, double cutoff, double tie_weight) const {
    double p = 0.0;
    for (const Atom& a : atoms_) {
        double m = (theta == Theta::one ? 2.0 * a.q : 2.0 * (1.0 - a.q)) * a.mass;
        if (a.q > cutoff + kAtomTol)
            p += m;
        else if (std::abs(a.q - cutoff) <= kAtomTol)
            p += tie_weight * m;
    }
    return p;
}

double SignalModel::sample(Theta theta, Rng& rng) const {
    double u = rng.uniform();
    double acc = 0.0;
    for (const Atom& a : atoms_) {
        acc += (theta == Theta::one ? 2.0 * a.q : 2.0 * (1.0 - a.q)) * a.mass;
        if (u < acc) return a.q;
    }
    return atoms_.back().q;
}

}  // namespace sll

#include "sll/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sll/dynamics.hpp"
#include "sll/numeric.hpp"
#include "sll/rng.hpp"
#include "sll/strategy.hpp"
#include "sll/values.hpp"

namespace sll {

namespace {

// h_theta(x) = x(1-x) L_theta(x) with L_theta(x) = s x + d_theta,
// s = 2 - 3b, d1 = 3 b pi - 1, d0 = 3 b (1-pi) - 1.
struct Cubic {
    double s, d0, d1;

    explicit Cubic(const PdmpConfig& c)
        : s(2.0 - 3.0 * c.b), d0(3.0 * c.b * (1.0 - c.pi) - 1.0), d1(3.0 * c.b * c.pi - 1.0) {}

    double line(Theta theta, double t) const { return s * t + (theta == Theta::one ? d1 : d0); }
    double h(Theta theta, double t) const { return t * (1.0 - t) * line(theta, t); }

    bool degenerate() const { return std::abs(d0 + d1) < 1e-13; }  // b = 2/3: h0 = -h1

    // Antiderivative of 1/h_theta by partial fractions:
    //   1/d ln t - 1/(s+d) ln(1-t) + R ln|s t + d|,  R = -s / (d (s+d)).
    double antiderivative(Theta theta, double t) const {
        double d = theta == Theta::one ? d1 : d0;
        double sd = s + d;
        double r = -s / (d * sd);
        return std::log(t) / d - std::log1p(-t) / sd + r * std::log(std::abs(s * t + d));
    }

    // Endpoint exponent constant: 1/h0 + 1/h1 ~ c/(1-t) near 1 (and c/t near 0).
    double exponent_constant() const { return -(1.0 / d0 + 1.0 / d1); }
};

}  // namespace

void PdmpConfig::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("switch rate must be positive");
    if (!(pi > 0.5) || !(pi < 1.0))
        throw std::invalid_argument("signal precision must lie in (1/2, 1)");
    Cubic cb(*this);
    if (cb.d0 >= 0.0)
        throw std::invalid_argument(
            "drift root condition violated: 3b(1-pi) - 1 must be negative (b < 1/(3(1-pi)))");
    if (b < 2.0 / 3.0 - 1e-12)
        throw std::invalid_argument(
            "drift root condition violated: need b >= 2/3 so that h0 < 0 < h1 on (0,1)");
}

double pdmp_drift(const PdmpConfig& config, Theta theta, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("prevalence outside [0,1]");
    return Cubic(config).h(theta, x);
}

PdmpDensity invariant_density(const PdmpConfig& config, int grid_points) {
    config.validate();
    if (grid_points < 64 || grid_points % 2 != 0)
        throw std::invalid_argument("grid_points must be even and at least 64");
    const Cubic cb(config);
    const double lambda = config.lambda;

    PdmpDensity d;
    d.config = config;
    const int half = grid_points / 2;
    const double x_min = 1e-10;
    d.x.resize(static_cast<std::size_t>(grid_points));
    const double ratio = std::pow(0.5 / x_min, 1.0 / half);
    for (int i = 0; i < half; ++i) {
        double xi = x_min * std::pow(ratio, i);
        d.x[static_cast<std::size_t>(i)] = xi;
        d.x[static_cast<std::size_t>(grid_points - 1 - i)] = 1.0 - xi;
    }

    d.f0.resize(d.x.size());
    d.f1.resize(d.x.size());
    const bool degenerate = cb.degenerate();
    const double e_mid = degenerate ? 0.0
                                    : cb.antiderivative(Theta::zero, 0.5) +
                                          cb.antiderivative(Theta::one, 0.5);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        double t = d.x[i];
        double expo = 0.0;
        if (!degenerate) {
            double e = cb.antiderivative(Theta::zero, t) + cb.antiderivative(Theta::one, t) - e_mid;
            expo = -lambda * e;
        }
        double g = std::exp(expo);
        d.f1[i] = g / cb.h(Theta::one, t);
        d.f0[i] = -g / cb.h(Theta::zero, t);
    }

    d.tail_exponent = degenerate ? 0.0 : lambda * cb.exponent_constant();

    if (degenerate) {
        d.normalized = false;
        d.norm_constant = 1.0;
        return d;
    }

    // Trapezoid over the grid plus exact power-law tails at the endpoints.
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < d.x.size(); ++i)
        mass += 0.5 * (d.f1[i] + d.f1[i + 1]) * (d.x[i + 1] - d.x[i]);
    const double a = d.tail_exponent;
    mass += d.f1.front() * d.x.front() / a;
    mass += d.f1.back() * (1.0 - d.x.back()) / a;

    for (std::size_t i = 0; i < d.x.size(); ++i) {
        d.f0[i] /= mass;
        d.f1[i] /= mass;
    }
    d.norm_constant = mass;
    d.normalized = true;
    return d;
}

namespace {

// Integral of w(x) f_theta(x) dx with w(x) ~ x^pow0 near 0 and (1-x)^pow1
// near 1; the endpoint tails use the density's power-law exponent.
double integrate_weighted(const PdmpDensity& d, const std::vector<double>& f,
                          const std::function<double(double)>& w, int pow0, int pow1) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < d.x.size(); ++i)
        acc += 0.5 * (w(d.x[i]) * f[i] + w(d.x[i + 1]) * f[i + 1]) * (d.x[i + 1] - d.x[i]);
    double a0 = d.tail_exponent + pow0;
    double a1 = d.tail_exponent + pow1;
    if (a0 > 1e-12) acc += w(d.x.front()) * f.front() * d.x.front() / a0;
    if (a1 > 1e-12) acc += w(d.x.back()) * f.back() * (1.0 - d.x.back()) / a1;
    return acc;
}

double binom3(int k, double x) {
    switch (k) {
        case 0: return (1 - x) * (1 - x) * (1 - x);
        case 1: return 3.0 * x * (1 - x) * (1 - x);
        case 2: return 3.0 * x * x * (1 - x);
        default: return x * x * x;
    }
}

}  // namespace

double likelihood_ratio(const PdmpDensity& density, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("sample count must lie in {0,1,2,3}");
    auto w = [k](double x) {
        return std::pow(x, k) * std::pow(1.0 - x, 3 - k);
    };
    double num = integrate_weighted(density, density.f1, w, k, 3 - k);
    double den = integrate_weighted(density, density.f0, w, k, 3 - k);
    return num / den;
}

BStarResult find_b_star(double lambda, double pi, double cost, int grid_points) {
    SignalModel signals = SignalModel::binary(pi);
    const double ph = p_hat(signals, cost);
    if (!(ph < 1.0)) throw std::invalid_argument("find_b_star requires p_hat < 1");
    const double target = ph / (1.0 - ph);

    auto lr2_at = [&](double b) {
        PdmpConfig c{lambda, pi, b};
        return likelihood_ratio(invariant_density(c, grid_points), 2);
    };

    const double b_lo = 2.0 / 3.0 + 1e-9;
    const double b_hi = (1.0 / (3.0 * (1.0 - pi))) * (1.0 - 1e-9);
    double lr_hi = lr2_at(b_hi);
    if (lr_hi <= target) {
        ConvergenceError err(
            "find_b_star: consensus likelihood ratio cannot reach the indifference odds; "
            "switch rate too large for this regime (max LR_2 = " +
            std::to_string(lr_hi) + ", need " + std::to_string(target) + ")");
        err.residuals = {lr_hi, target};
        throw err;
    }
    double b_star =
        bisect_root([&](double b) { return lr2_at(b) - target; }, b_lo, b_hi, 1e-11, 200);

    BStarResult r;
    r.b_star = b_star;
    r.p_hat = ph;
    r.density = invariant_density(PdmpConfig{lambda, pi, b_star}, grid_points);
    for (int k = 0; k <= 3; ++k) {
        double lr = likelihood_ratio(r.density, k);
        r.beliefs[k] = lr / (1.0 + lr);
    }
    if (!(r.beliefs[0] < 1.0 - ph && r.beliefs[3] > ph))
        throw ConvergenceError("find_b_star: belief ordering check failed at the solution");

    // Welfare: herding matches the consensus action at unanimous samples,
    // informed play matches with the signal precision at mixed samples.
    const double b = b_star;
    auto match = [&](Theta theta, double x) {
        double m1 = b * pi + (1.0 - b) * (theta == Theta::zero ? 1.0 : 0.0);
        double m2 = b * pi + (1.0 - b) * (theta == Theta::one ? 1.0 : 0.0);
        double m0 = theta == Theta::zero ? 1.0 : 0.0;
        double m3 = theta == Theta::one ? 1.0 : 0.0;
        return binom3(0, x) * m0 + binom3(1, x) * m1 + binom3(2, x) * m2 + binom3(3, x) * m3;
    };
    auto acq = [&](double x) { return b * (binom3(1, x) + binom3(2, x)); };

    double match_total =
        0.5 * integrate_weighted(r.density, r.density.f1,
                                 [&](double x) { return match(Theta::one, x); }, 0, 0) +
        0.5 * integrate_weighted(r.density, r.density.f0,
                                 [&](double x) { return match(Theta::zero, x); }, 0, 0);
    r.info_rate = 0.5 * integrate_weighted(r.density, r.density.f1, acq, 1, 1) +
                  0.5 * integrate_weighted(r.density, r.density.f0, acq, 1, 1);
    r.welfare = match_total - cost * r.info_rate;
    if (!(r.welfare > ph))
        throw ConvergenceError("find_b_star: welfare does not exceed the indifference threshold (" +
                               std::to_string(r.welfare) + " vs " + std::to_string(ph) + ")");
    return r;
}

namespace {

// One adaptive fourth-order step of x' = h(x); returns the new x and updates
// dt. Histogram time is charged at the half-step point by the caller.
double rk4_step(const Cubic& cb, Theta theta, double x, double dt) {
    auto f = [&](double v) { return cb.h(theta, v); };
    double k1 = f(x);
    double k2 = f(std::clamp(x + 0.5 * dt * k1, 0.0, 1.0));
    double k3 = f(std::clamp(x + 0.5 * dt * k2, 0.0, 1.0));
    double k4 = f(std::clamp(x + dt * k3, 0.0, 1.0));
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

constexpr double kXClip = 1e-15;

double flow_and_record(const Cubic& cb, Theta theta, double x, double duration,
                       std::vector<double>& hist, int bins, bool record) {
    double remaining = duration;
    double dt = std::min(0.1, duration);
    const double rel_tol = 1e-9;
    while (remaining > 0.0) {
        if (dt > remaining) dt = remaining;
        double full = rk4_step(cb, theta, x, dt);
        double half = rk4_step(cb, theta, x, 0.5 * dt);
        double two = rk4_step(cb, theta, half, 0.5 * dt);
        double err = std::abs(full - two) / 15.0;
        double scale = rel_tol * std::max(std::abs(x), 1e-6);
        if (err > scale && dt > 1e-12) {
            dt *= std::max(0.2, 0.9 * std::pow(scale / (err + 1e-300), 0.2));
            continue;
        }
        if (record) {
            int b = std::clamp(static_cast<int>(half * bins), 0, bins - 1);
            hist[static_cast<std::size_t>(b)] += dt;
        }
        x = std::clamp(two, kXClip, 1.0 - kXClip);
        remaining -= dt;
        if (err > 0.0) dt *= std::min(5.0, 0.9 * std::pow(scale / err, 0.2));
    }
    return x;
}

// Analytic mass of each histogram bin, per state.
void analytic_bin_masses(const PdmpDensity& d, int bins, std::vector<double>& m0,
                         std::vector<double>& m1) {
    m0.assign(static_cast<std::size_t>(bins), 0.0);
    m1.assign(static_cast<std::size_t>(bins), 0.0);
    auto bin_at = [&](double x) { return std::clamp(static_cast<int>(x * bins), 0, bins - 1); };
    for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
        double xa = d.x[i], xb = d.x[i + 1];
        // Split the trapezoid segment at bin edges.
        double left = xa;
        while (left < xb) {
            int bl = bin_at(left);
            double edge = std::min(xb, static_cast<double>(bl + 1) / bins);
            auto lerp = [&](const std::vector<double>& f, double t) {
                double w = (t - xa) / (xb - xa);
                return f[i] * (1.0 - w) + f[i + 1] * w;
            };
            double seg = edge - left;
            m0[static_cast<std::size_t>(bl)] +=
                0.5 * (lerp(d.f0, left) + lerp(d.f0, edge)) * seg;
            m1[static_cast<std::size_t>(bl)] +=
                0.5 * (lerp(d.f1, left) + lerp(d.f1, edge)) * seg;
            left = edge;
        }
    }
    double a = d.tail_exponent;
    if (a > 1e-12) {
        m0.front() += d.f0.front() * d.x.front() / a;
        m1.front() += d.f1.front() * d.x.front() / a;
        m0.back() += d.f0.back() * (1.0 - d.x.back()) / a;
        m1.back() += d.f1.back() * (1.0 - d.x.back()) / a;
    }
    for (int j = 0; j < bins; ++j) {
        m0[static_cast<std::size_t>(j)] *= 0.5;  // joint (theta, x) masses
        m1[static_cast<std::size_t>(j)] *= 0.5;
    }
}

}  // namespace

PdmpSimResult simulate_pdmp(const PdmpDensity& density, double total_time, int bins,
                            std::uint64_t seed) {
    if (!density.normalized)
        throw std::invalid_argument("simulate_pdmp needs a normalizable density (b > 2/3)");
    const Cubic cb(density.config);
    const double lambda = density.config.lambda;
    Rng rng(seed);

    std::vector<double> hist[2];
    hist[0].assign(static_cast<std::size_t>(bins), 0.0);
    hist[1].assign(static_cast<std::size_t>(bins), 0.0);

    double burnin = std::min(100.0 / lambda, 0.1 * total_time);
    double t = -burnin;
    double x = 0.5;
    Theta theta = rng.bernoulli(0.5) ? Theta::one : Theta::zero;
    while (t < total_time) {
        double u = -std::log1p(-rng.uniform()) / lambda;
        bool record = t >= 0.0;
        double fly = u;
        if (t < 0.0 && t + u > 0.0) {
            // Straddles the burn-in boundary: split the flight.
            x = flow_and_record(cb, theta, x, -t, hist[theta == Theta::one ? 1 : 0], bins, false);
            fly = u + t;
            t = 0.0;
            record = true;
        }
        if (t + fly > total_time) fly = total_time - t;
        x = flow_and_record(cb, theta, x, fly, hist[theta == Theta::one ? 1 : 0], bins, record);
        t += fly;
        theta = flip(theta);
    }

    PdmpSimResult r;
    r.mass0.assign(static_cast<std::size_t>(bins), 0.0);
    r.mass1.assign(static_cast<std::size_t>(bins), 0.0);
    double tot = 0.0;
    for (double v : hist[0]) tot += v;
    for (double v : hist[1]) tot += v;
    for (int j = 0; j < bins; ++j) {
        r.mass0[static_cast<std::size_t>(j)] = hist[0][static_cast<std::size_t>(j)] / tot;
        r.mass1[static_cast<std::size_t>(j)] = hist[1][static_cast<std::size_t>(j)] / tot;
    }

    std::vector<double> a0, a1;
    analytic_bin_masses(density, bins, a0, a1);
    double l1 = 0.0;
    for (int j = 0; j < bins; ++j) {
        l1 += std::abs(r.mass0[static_cast<std::size_t>(j)] - a0[static_cast<std::size_t>(j)]);
        l1 += std::abs(r.mass1[static_cast<std::size_t>(j)] - a1[static_cast<std::size_t>(j)]);
    }
    r.l1_distance = l1;
    return r;
}

std::vector<double> discretization_check(const PdmpDensity& density,
                                         const std::vector<double>& eps_list,
                                         std::int64_t sim_budget, std::uint64_t seed, int bins) {
    const PdmpConfig& c = density.config;
    std::vector<double> a0, a1;
    analytic_bin_masses(density, bins, a0, a1);

    std::vector<double> tv_out;
    tv_out.reserve(eps_list.size());
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        double eps = eps_list[e];
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
        double lam_d = c.lambda * eps;
        if (lam_d >= 0.5) throw std::invalid_argument("eps too large: switch probability >= 1/2");
        Environment env(lam_d, eps, 0.0, 3, SignalModel::binary(c.pi));

        Strategy s;
        s.beta = {0.0, c.b, c.b, 0.0};
        s.beliefs = {1e-6, 0.5 - 1e-6, 0.5 + 1e-6, 1.0 - 1e-6};
        s.tie = {0.5, 0.5, 0.5, 0.5};

        Dynamics dyn(s, env);
        std::vector<double> hist[2];
        hist[0].assign(static_cast<std::size_t>(bins), 0.0);
        hist[1].assign(static_cast<std::size_t>(bins), 0.0);
        std::int64_t burnin =
            std::max<std::int64_t>(100000, static_cast<std::int64_t>(20.0 / lam_d));
        std::int64_t periods = sim_budget;
        simulate_chain_visit(dyn, lam_d, 0.5, Theta::one, burnin + periods,
                             derive_seed(seed, e),
                             [&](std::int64_t t, const PopulationState& st) {
                                 if (t <= burnin) return;
                                 int b = std::clamp(static_cast<int>(st.x * bins), 0, bins - 1);
                                 hist[st.theta == Theta::one ? 1 : 0][static_cast<std::size_t>(b)] += 1.0;
                             });
        double tot = 0.0;
        for (double v : hist[0]) tot += v;
        for (double v : hist[1]) tot += v;
        double tv = 0.0;
        for (int j = 0; j < bins; ++j) {
            tv += std::abs(hist[0][static_cast<std::size_t>(j)] / tot - a0[static_cast<std::size_t>(j)]);
            tv += std::abs(hist[1][static_cast<std::size_t>(j)] / tot - a1[static_cast<std::size_t>(j)]);
        }
        tv_out.push_back(0.5 * tv);
    }
    return tv_out;
}

}  // namespace sll

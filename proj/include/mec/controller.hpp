#pragma once
#include <mec/model.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mec {

// =======================================================================
// Per-slot problem
// =======================================================================

/*
 * One instance of the per-slot drift-plus-penalty problem
 *
 *   min  -sum_i Q_i (D_l,i + D_r,i) + V sum_i (kappa f_i^3 + p_i)
 *   s.t. 0 <= f_i <= f_max,i,  0 <= p_i <= p_max,i,
 *        alpha_i >= eps_A,  sum_i alpha_i <= 1.
 *
 * It splits into SP1 (CPU frequencies, separable per device) and SP2
 * (transmit powers and bandwidth shares, coupled through the simplex).
 */
template <class Scalar>
struct PtsProblem
{
    using value_t = Scalar;
    using vec_type = vec_t<Scalar>;

    vec_type queues;
    vec_type gains;
    vec_type cycles_per_bit;
    vec_type f_max;
    vec_type p_max;

    Scalar slot_len;
    Scalar bandwidth;
    Scalar noise_psd;
    Scalar switched_cap;
    Scalar control_V;
    Scalar eps_A;

    Eigen::Index size() const { return queues.size(); }
};

inline PtsProblem<double> make_problem(
    const SystemConfig& sys,
    const std::vector<DeviceConfig>& devices,
    const vec_d& queues,
    const vec_d& gains)
{
    const auto n = static_cast<Eigen::Index>(devices.size());
    PtsProblem<double> pb;
    pb.queues = queues;
    pb.gains = gains;
    pb.cycles_per_bit.resize(n);
    pb.f_max.resize(n);
    pb.p_max.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pb.cycles_per_bit[i] = devices[i].cycles_per_bit;
        pb.f_max[i] = devices[i].f_max;
        pb.p_max[i] = devices[i].p_max;
    }
    pb.slot_len = sys.slot_len;
    pb.bandwidth = sys.bandwidth;
    pb.noise_psd = sys.noise_psd;
    pb.switched_cap = sys.switched_cap;
    pb.control_V = sys.control_V;
    pb.eps_A = sys.eps_A;
    return pb;
}

/// Constants of the Lagrangian bandwidth search. Defaults are the published ones.
struct BandwidthSettings
{
    double xi = 1e-7;
    int max_iters = 200;
    double growth = 1.5;
    double root_lo = 1e-9;
    double root_tol = 1e-10;
    int max_growth = 4096;
};

struct GaussSeidelSettings
{
    double rel_tol = 1e-9;
    int max_alternations = 100;
    BandwidthSettings bandwidth;
};

/// Solver telemetry for one slot.
struct SolverDiagnostics
{
    int alternations = 0;
    int bw_iterations = 0;
    double lambda = 0.0;
    bool converged = true;
};

// =======================================================================
// Closed forms
// =======================================================================

/// Minimizer of -Q tau f / L + V kappa f^3 over [0, f_max].
template <class Scalar>
inline Scalar optimal_cpu_freq(
    Scalar queue, Scalar slot_len, Scalar kappa, Scalar V,
    Scalar cycles_per_bit, Scalar f_max)
{
    using std::sqrt;
    if (queue <= Scalar(0)) return Scalar(0);
    const Scalar stationary = sqrt(queue * slot_len / (Scalar(3) * kappa * V * cycles_per_bit));
    return std::min(f_max, stationary);
}

/*
 * Minimizer of -Q D_r(alpha, p) + V p over [0, p_max] for fixed alpha:
 *   min{ alpha w max{ Q tau / (V ln 2) - N0 / H, 0 }, p_max }.
 */
template <class Scalar>
inline Scalar optimal_tx_power(
    Scalar queue, Scalar gain, Scalar alpha, Scalar V,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd, Scalar p_max)
{
    const Scalar water = queue * slot_len / (Scalar(M_LN2) * V) - noise_psd / gain;
    if (!(water > Scalar(0))) return Scalar(0);
    return std::min(alpha * bandwidth * water, p_max);
}

/*
 * dD_r/dalpha at fixed p. With x = H p / (alpha N0 w):
 *   w tau [ log2(1 + x) - x / ((1 + x) ln 2) ].
 * Strictly decreasing in alpha, unbounded as alpha -> 0+ for p > 0.
 */
template <class Scalar>
inline Scalar marginal_rate(
    Scalar alpha, Scalar p, Scalar gain,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd)
{
    using std::log1p;
    if (p <= Scalar(0)) return Scalar(0);
    const Scalar x = gain * p / (alpha * noise_psd * bandwidth);
    return bandwidth * slot_len * (log1p(x) - x / (Scalar(1) + x)) / Scalar(M_LN2);
}

/// Derivative of marginal_rate with respect to alpha (always <= 0).
template <class Scalar>
inline Scalar marginal_rate_slope(
    Scalar alpha, Scalar p, Scalar gain,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd)
{
    if (p <= Scalar(0)) return Scalar(0);
    const Scalar x = gain * p / (alpha * noise_psd * bandwidth);
    const Scalar r = x / (Scalar(1) + x);
    return -bandwidth * slot_len * r * r / (alpha * Scalar(M_LN2));
}

/*
 * Root in alpha of Q * marginal_rate(alpha) = lambda.
 *
 * Returns eps_A when the device does not transmit (p == 0 or Q == 0),
 * 1 when Q * marginal_rate(1) >= lambda, and the bracket floor root_lo
 * when even that is too small. Otherwise Newton steps are taken inside a
 * shrinking bisection bracket until the bracket or the Newton step is
 * within root_tol (relative).
 */
template <class Scalar>
inline Scalar root_R(
    Scalar lambda, Scalar queue, Scalar p, Scalar gain,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd, Scalar eps_A,
    const BandwidthSettings& s = {}, Scalar hint = Scalar(0.5))
{
    using std::abs;
    if (p <= Scalar(0) || queue <= Scalar(0)) return eps_A;

    auto residual = [&](Scalar a) {
        return queue * marginal_rate(a, p, gain, bandwidth, slot_len, noise_psd) - lambda;
    };
    if (residual(Scalar(1)) >= Scalar(0)) return Scalar(1);

    Scalar lo = Scalar(s.root_lo);
    Scalar hi = Scalar(1);
    if (residual(lo) <= Scalar(0)) return lo;

    // residual > 0 on [lo, root), < 0 on (root, hi].
    Scalar a = (hint > lo && hint < hi) ? hint : Scalar(0.5);
    for (int it = 0; it < 200; ++it) {
        const Scalar r = residual(a);
        if (r == Scalar(0)) return a;
        if (r > Scalar(0)) lo = a; else hi = a;
        if (hi - lo <= Scalar(s.root_tol) * hi) break;

        const Scalar slope = queue * marginal_rate_slope(a, p, gain, bandwidth, slot_len, noise_psd);
        Scalar next = (slope < Scalar(0)) ? a - r / slope : Scalar(-1);
        if (!(next > lo && next < hi)) {
            next = Scalar(0.5) * (lo + hi);
        } else if (abs(next - a) <= Scalar(s.root_tol) * next) {
            return next;
        }
        a = next;
    }
    return a;
}

// =======================================================================
// Objectives
// =======================================================================

template <class Scalar>
inline Scalar sp2_objective(
    const PtsProblem<Scalar>& pb,
    const typename PtsProblem<Scalar>::vec_type& powers,
    const typename PtsProblem<Scalar>::vec_type& alphas)
{
    Scalar obj = Scalar(0);
    for (Eigen::Index i = 0; i < pb.size(); ++i) {
        const Scalar dr = remote_departure(alphas[i], powers[i], pb.gains[i],
                                           pb.bandwidth, pb.slot_len, pb.noise_psd);
        obj += -pb.queues[i] * dr + pb.control_V * powers[i];
    }
    return obj;
}

template <class Scalar>
inline Scalar pts_objective(const PtsProblem<Scalar>& pb, const SlotDecision<Scalar>& d)
{
    Scalar obj = sp2_objective(pb, d.tx_powers, d.bw_fracs);
    for (Eigen::Index i = 0; i < pb.size(); ++i) {
        const Scalar dl = local_departure(d.freqs[i], pb.slot_len, pb.cycles_per_bit[i]);
        obj += -pb.queues[i] * dl + pb.control_V * local_power(d.freqs[i], pb.switched_cap);
    }
    return obj;
}

// =======================================================================
// Bandwidth allocation (Lagrangian bisection on the multiplier)
// =======================================================================

template <class Scalar>
struct LagrangeState
{
    Scalar lambda_lo = Scalar(0);
    Scalar lambda_hi = Scalar(0);
    Scalar lambda = Scalar(0);
    vec_t<Scalar> roots;
};

template <class Scalar>
struct BandwidthResult
{
    vec_t<Scalar> bw_fracs;
    LagrangeState<Scalar> state;
    int iterations = 0;
    bool converged = false;
    bool active = false;    // false if no device transmits; fractions are then 1/N
};

/*
 * Optimal bandwidth split for fixed transmit powers. The multiplier is
 * bracketed from below by the largest marginal utility at alpha = 1,
 * the upper end is grown geometrically until the split is strictly
 * under-allocated, then bisected until |sum alpha - 1| < xi.
 */
template <class Scalar>
inline BandwidthResult<Scalar> bandwidth_allocation(
    const PtsProblem<Scalar>& pb,
    const typename PtsProblem<Scalar>::vec_type& powers,
    const BandwidthSettings& s = {})
{
    using std::abs;
    const auto n = pb.size();
    BandwidthResult<Scalar> out;

    // Roots move smoothly with lambda; the previous one seeds Newton.
    out.state.roots = vec_t<Scalar>::Constant(n, Scalar(0.5));
    auto allocate = [&](Scalar lambda) {
        for (Eigen::Index i = 0; i < n; ++i) {
            out.state.roots[i] = root_R(lambda, pb.queues[i], powers[i], pb.gains[i],
                                        pb.bandwidth, pb.slot_len, pb.noise_psd, pb.eps_A, s,
                                        out.state.roots[i]);
        }
        out.bw_fracs = out.state.roots.max(pb.eps_A);
        return out.bw_fracs.sum();
    };

    // Devices that do not transmit are excluded from the bracket floor.
    Scalar lambda_lo = Scalar(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (powers[i] > Scalar(0) && pb.queues[i] > Scalar(0)) {
            out.active = true;
            lambda_lo = std::max(lambda_lo, pb.queues[i] * marginal_rate(
                Scalar(1), powers[i], pb.gains[i], pb.bandwidth, pb.slot_len, pb.noise_psd));
        }
    }
    if (!out.active || !(lambda_lo > Scalar(0))) {
        out.bw_fracs = vec_t<Scalar>::Constant(n, Scalar(1) / Scalar(n));
        out.state.roots = vec_t<Scalar>::Constant(n, pb.eps_A);
        out.converged = true;
        out.active = false;
        return out;
    }

    Scalar lambda_hi = lambda_lo;
    Scalar total = allocate(lambda_hi);
    for (int g = 0; total >= Scalar(1) && g < s.max_growth; ++g) {
        lambda_hi *= Scalar(s.growth);
        total = allocate(lambda_hi);
    }
    Scalar lambda = lambda_hi;

    int l = 0;
    while (abs(total - Scalar(1)) >= Scalar(s.xi) && l <= s.max_iters) {
        lambda = Scalar(0.5) * (lambda_lo + lambda_hi);
        ++l;
        total = allocate(lambda);
        if (total > Scalar(1)) lambda_lo = lambda;
        else lambda_hi = lambda;
    }

    out.state.lambda_lo = lambda_lo;
    out.state.lambda_hi = lambda_hi;
    out.state.lambda = lambda;
    out.iterations = l;
    out.converged = abs(total - Scalar(1)) < Scalar(s.xi);
    return out;
}

// =======================================================================
// SP2: alternating power / bandwidth minimization
// =======================================================================

template <class Scalar>
struct Sp2Solution
{
    vec_t<Scalar> tx_powers;
    vec_t<Scalar> bw_fracs;
    Scalar objective = Scalar(0);
    Scalar lambda = Scalar(0);
    int iterations = 0;
    int bw_iterations = 0;
    bool converged = false;
    std::vector<Scalar> history;    // objective after each alternation, starting at the initial point
};

template <class Scalar>
inline vec_t<Scalar> optimal_tx_powers(
    const PtsProblem<Scalar>& pb, const typename PtsProblem<Scalar>::vec_type& alphas)
{
    vec_t<Scalar> p(pb.size());
    for (Eigen::Index i = 0; i < pb.size(); ++i) {
        p[i] = optimal_tx_power(pb.queues[i], pb.gains[i], alphas[i], pb.control_V,
                                pb.bandwidth, pb.slot_len, pb.noise_psd, pb.p_max[i]);
    }
    return p;
}

/*
 * Gauss-Seidel on (p, alpha) from the equal split. Each block update is
 * an exact minimization, so the objective is non-increasing; the best
 * iterate is returned if the alternation cap is hit.
 */
template <class Scalar>
inline Sp2Solution<Scalar> solve_sp2(const PtsProblem<Scalar>& pb, const GaussSeidelSettings& s = {})
{
    using std::abs;
    const auto n = pb.size();
    Sp2Solution<Scalar> sol;

    vec_t<Scalar> alpha = vec_t<Scalar>::Constant(n, Scalar(1) / Scalar(n));
    vec_t<Scalar> p = optimal_tx_powers(pb, alpha);
    Scalar obj = sp2_objective(pb, p, alpha);
    sol.history.push_back(obj);
    sol.tx_powers = p;
    sol.bw_fracs = alpha;
    sol.objective = obj;

    // Which devices transmit does not depend on alpha, so an all-silent
    // start stays silent and the split is irrelevant.
    if (!(p > Scalar(0)).any()) {
        sol.converged = true;
        return sol;
    }

    for (int k = 1; k <= s.max_alternations; ++k) {
        const auto bw = bandwidth_allocation(pb, p, s.bandwidth);
        alpha = bw.bw_fracs;
        sol.bw_iterations += bw.iterations;
        p = optimal_tx_powers(pb, alpha);
        const Scalar next = sp2_objective(pb, p, alpha);
        sol.history.push_back(next);
        sol.iterations = k;

        if (next <= sol.objective) {
            sol.tx_powers = p;
            sol.bw_fracs = alpha;
            sol.objective = next;
            sol.lambda = bw.state.lambda;
        }
        // Changes below lambda * xi are within the accuracy of the
        // bandwidth step and no longer reflect descent.
        const Scalar change = abs(next - obj);
        const Scalar floor = std::max(Scalar(s.rel_tol) * abs(next),
                                      bw.state.lambda * Scalar(s.bandwidth.xi));
        obj = next;
        if (change <= floor) {
            sol.converged = bw.converged;
            break;
        }
    }
    return sol;
}

// =======================================================================
// Slot decision
// =======================================================================

template <class Scalar>
inline vec_t<Scalar> optimal_cpu_freqs(const PtsProblem<Scalar>& pb)
{
    vec_t<Scalar> f(pb.size());
    for (Eigen::Index i = 0; i < pb.size(); ++i) {
        f[i] = optimal_cpu_freq(pb.queues[i], pb.slot_len, pb.switched_cap, pb.control_V,
                                pb.cycles_per_bit[i], pb.f_max[i]);
    }
    return f;
}

template <class Scalar>
inline SlotDecision<Scalar> decide_slot(
    const PtsProblem<Scalar>& pb,
    SolverDiagnostics* diag = nullptr,
    const GaussSeidelSettings& s = {})
{
    SlotDecision<Scalar> d(pb.size());
    d.freqs = optimal_cpu_freqs(pb);
    const auto sp2 = solve_sp2(pb, s);
    d.tx_powers = sp2.tx_powers;
    d.bw_fracs = sp2.bw_fracs;
    if (diag) {
        diag->alternations = sp2.iterations;
        diag->bw_iterations = sp2.bw_iterations;
        diag->lambda = static_cast<double>(sp2.lambda);
        diag->converged = sp2.converged;
    }
    return d;
}

} // namespace mec

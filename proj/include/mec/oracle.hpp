#pragma once
#include <mec/controller.hpp>
#include <stdexcept>

namespace mec {
namespace oracle {

/*
 * Brute-force reference solvers. They share the model departure/power
 * functions with the controller but none of its optimization logic.
 */

template <class Scalar>
struct GridSp1Result
{
    Scalar freq;
    Scalar objective;
};

template <class Scalar>
inline Scalar sp1_objective(Scalar f, Scalar queue, Scalar slot_len, Scalar kappa, Scalar V, Scalar L)
{
    return -queue * local_departure(f, slot_len, L) + V * local_power(f, kappa);
}

/// Exhaustive SP1 minimum over a uniform grid of grid_points on [0, f_max].
template <class Scalar>
inline GridSp1Result<Scalar> grid_sp1(
    Scalar queue, Scalar slot_len, Scalar kappa, Scalar V, Scalar L, Scalar f_max,
    long grid_points)
{
    if (grid_points < 1000) throw std::invalid_argument("grid_sp1: need at least 1000 grid points");
    GridSp1Result<Scalar> best{Scalar(0), sp1_objective(Scalar(0), queue, slot_len, kappa, V, L)};
    for (long k = 1; k < grid_points; ++k) {
        const Scalar f = f_max * Scalar(k) / Scalar(grid_points - 1);
        const Scalar obj = sp1_objective(f, queue, slot_len, kappa, V, L);
        if (obj < best.objective) best = {f, obj};
    }
    return best;
}

/// Exhaustive transmit-power minimum over a uniform grid on [0, p_max].
template <class Scalar>
inline std::pair<Scalar, Scalar> grid_power(
    Scalar queue, Scalar gain, Scalar alpha, Scalar V,
    Scalar bandwidth, Scalar slot_len, Scalar noise_psd, Scalar p_max, long grid_points)
{
    auto objective = [&](Scalar p) {
        return -queue * remote_departure(alpha, p, gain, bandwidth, slot_len, noise_psd) + V * p;
    };
    std::pair<Scalar, Scalar> best{Scalar(0), objective(Scalar(0))};
    for (long k = 1; k < grid_points; ++k) {
        const Scalar p = p_max * Scalar(k) / Scalar(grid_points - 1);
        const Scalar obj = objective(p);
        if (obj < best.second) best = {p, obj};
    }
    return best;
}

template <class Scalar>
struct GridSp2Result
{
    vec_t<Scalar> tx_powers;
    vec_t<Scalar> bw_fracs;
    Scalar objective;
    // Bound on how far the grid minimum can sit above the true minimum.
    Scalar slack;
    Scalar step;
    long evaluations = 0;
};

namespace detail {

/// Optimal power and per-device objective value at bandwidth share a.
template <class Scalar>
inline Scalar device_value(const PtsProblem<Scalar>& pb, Eigen::Index i, Scalar a, Scalar& p)
{
    p = optimal_tx_power(pb.queues[i], pb.gains[i], a, pb.control_V,
                         pb.bandwidth, pb.slot_len, pb.noise_psd, pb.p_max[i]);
    return -pb.queues[i] * remote_departure(a, p, pb.gains[i], pb.bandwidth, pb.slot_len, pb.noise_psd)
           + pb.control_V * p;
}

/*
 * Enumerates alpha_0..alpha_{n-2} over eps_A + k*step inside the box
 * [lo_i, hi_i]; the last share takes the remaining bandwidth.
 */
template <class Scalar>
inline void enumerate_box(
    const PtsProblem<Scalar>& pb, const vec_t<Scalar>& lo, const vec_t<Scalar>& hi,
    Scalar step, GridSp2Result<Scalar>& best)
{
    const auto n = pb.size();
    const Scalar eps = pb.eps_A;
    vec_t<Scalar> alpha(n), p(n);

    auto evaluate = [&]() {
        Scalar total = Scalar(0);
        for (Eigen::Index i = 0; i < n; ++i) total += device_value(pb, i, alpha[i], p[i]);
        ++best.evaluations;
        if (total < best.objective) {
            best.objective = total;
            best.bw_fracs = alpha;
            best.tx_powers = p;
        }
    };
    auto recurse = [&](auto&& self, Eigen::Index i, Scalar used) -> void {
        if (i == n - 1) {
            alpha[i] = Scalar(1) - used;
            if (alpha[i] >= eps) evaluate();
            return;
        }
        using std::ceil;
        const long k0 = std::max(0L, static_cast<long>(ceil((lo[i] - eps) / step)));
        for (long k = k0;; ++k) {
            const Scalar a = eps + Scalar(k) * step;
            if (a > hi[i] * (Scalar(1) + Scalar(1e-12))) break;
            if (used + a + eps * Scalar(n - 1 - i) > Scalar(1) + Scalar(1e-15)) break;
            alpha[i] = a;
            self(self, i + 1, used + a);
        }
    };
    recurse(recurse, 0, Scalar(0));
}

// Lipschitz estimate of each separable term in alpha around the grid
// optimum, by finite differences over a window of n steps.
template <class Scalar>
inline Scalar grid_slack(const PtsProblem<Scalar>& pb, const vec_t<Scalar>& at, Scalar step)
{
    using std::abs;
    const auto n = pb.size();
    Scalar lip = Scalar(0), pa, pc;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar lo = std::max(pb.eps_A, at[i] - Scalar(n) * step);
        const Scalar hi = std::min(Scalar(1), at[i] + Scalar(n) * step);
        const int probes = 16;
        for (int k = 0; k < probes; ++k) {
            const Scalar a0 = lo + (hi - lo) * Scalar(k) / Scalar(probes);
            const Scalar a1 = lo + (hi - lo) * Scalar(k + 1) / Scalar(probes);
            if (a1 <= a0) continue;
            const Scalar d = abs(device_value(pb, i, a1, pc) - device_value(pb, i, a0, pa)) / (a1 - a0);
            lip = std::max(lip, d);
        }
    }
    return Scalar(2 * std::max<Eigen::Index>(n - 1, 1)) * step * lip;
}

} // namespace detail

/*
 * SP2 over a discretized bandwidth simplex. For any split the optimal
 * powers are separable and given exactly by the closed form, so the
 * search is grid-limited only in alpha. The optimal value is
 * non-increasing in every alpha_i, so the last coordinate takes all
 * remaining bandwidth.
 */
template <class Scalar>
inline GridSp2Result<Scalar> grid_sp2(const PtsProblem<Scalar>& pb, Scalar alpha_step)
{
    const auto n = pb.size();
    if (n > 4) throw std::invalid_argument("grid_sp2: simplex enumeration limited to N <= 4");
    if (!(alpha_step > Scalar(0) && alpha_step <= Scalar(1e-2))) {
        throw std::invalid_argument("grid_sp2: alpha_step must lie in (0, 1e-2]");
    }
    GridSp2Result<Scalar> best;
    best.objective = std::numeric_limits<Scalar>::infinity();
    best.step = alpha_step;
    detail::enumerate_box<Scalar>(pb, vec_t<Scalar>::Constant(n, pb.eps_A), vec_t<Scalar>::Ones(n),
                          alpha_step, best);
    best.slack = detail::grid_slack(pb, best.bw_fracs, alpha_step);
    return best;
}

/*
 * grid_sp2 followed by successive 10x finer grids on a box of +-2 steps
 * around the incumbent. Only meaningful when the objective is convex in
 * alpha (it is), so the incumbent's neighbourhood contains the optimum.
 */
template <class Scalar>
inline GridSp2Result<Scalar> refined_grid_sp2(const PtsProblem<Scalar>& pb, Scalar alpha_step, int levels)
{
    auto best = grid_sp2(pb, alpha_step);
    Scalar step = alpha_step;
    for (int l = 0; l < levels; ++l) {
        const vec_t<Scalar> center = best.bw_fracs;
        const Scalar half = Scalar(2) * step;
        step /= Scalar(10);
        detail::enumerate_box<Scalar>(pb, center - half, center + half, step, best);
    }
    best.step = step;
    best.slack = detail::grid_slack(pb, best.bw_fracs, step);
    return best;
}

} // namespace oracle
} // namespace mec

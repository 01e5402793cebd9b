#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace polyhull {

// Feasibility test for {w >= 0 : G w <= h} via a dense phase-1 simplex with
// Bland's rule (deterministic, anti-cycling). When infeasible, `farkas` holds
// y >= 0 with yT G >= 0 componentwise and yT h < 0, certifying that no
// nonnegative w can satisfy the system.
struct LPResult {
    bool feasible = false;
    std::vector<double> farkas;
};

inline LPResult lp_feasible(const std::vector<std::vector<double>>& G, const std::vector<double>& h,
                            double feas_tol = 1e-9) {
    const std::size_t m = G.size();
    const std::size_t n = m ? G[0].size() : 0;
    if (m == 0) return {true, {}};

    double hscale = 0.0;
    for (double v : h) hscale = std::max(hscale, std::abs(v));
    const double tol = feas_tol * (1.0 + hscale);
    const double pivot_tol = 1e-11;

    // Standard form: [G I][w;s] = h with w,s >= 0.  Rows with negative rhs
    // are sign-flipped and receive an artificial variable; phase 1 minimizes
    // the artificial sum.  Artificial columns are the identity, so the dual
    // vector is read off their final reduced costs.
    const std::size_t cols = n + m + m;  // w, slacks, artificials
    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::vector<double> sign(m, 1.0);
    std::vector<std::size_t> basis(m);
    std::vector<bool> art_used(m, false);

    for (std::size_t r = 0; r < m; ++r) {
        sign[r] = h[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) T[r][j] = sign[r] * G[r][j];
        T[r][n + r] = sign[r];  // slack
        T[r][cols] = sign[r] * h[r];
        if (sign[r] < 0.0) {
            T[r][n + m + r] = 1.0;  // artificial
            art_used[r] = true;
            basis[r] = n + m + r;
        } else {
            basis[r] = n + r;
        }
    }

    // Objective row for min(sum of artificials): reduced costs d_j = c_j - yT A_j,
    // maintained explicitly; initially y = sum of artificial rows.
    std::vector<double> obj(cols + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (!art_used[r]) continue;
        for (std::size_t j = 0; j <= cols; ++j) obj[j] -= T[r][j];
    }
    for (std::size_t r = 0; r < m; ++r)
        if (art_used[r]) obj[n + m + r] = 0.0;

    // Dantzig pricing normally; a stall of the phase-1 objective (degenerate
    // pivot chain or incipient cycle) switches permanently to Bland's rule,
    // whose finite-termination guarantee also breaks cycles.
    const std::size_t max_iters = 200000;
    const std::size_t stall_window = 500;
    double last_inf = 1e300;
    std::size_t stalled = 0;
    bool bland = false;
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= max_iters) throw LPNumericalFailure("phase-1 simplex exceeded the iteration cap");
        const double cur_inf = -obj[cols];
        if (cur_inf < last_inf - 1e-13 * (1.0 + std::abs(last_inf))) {
            last_inf = cur_inf;
            stalled = 0;
        } else if (!bland && ++stalled >= stall_window) {
            bland = true;
        }
        std::size_t enter = cols;
        if (bland) {
            // Bland: smallest-index column with negative reduced cost.
            for (std::size_t j = 0; j < cols; ++j) {
                if (obj[j] < -pivot_tol) {
                    enter = j;
                    break;
                }
            }
        } else {
            // Dantzig: most negative reduced cost (first index on ties).
            double most = -pivot_tol;
            for (std::size_t j = 0; j < cols; ++j) {
                if (obj[j] < most) {
                    most = obj[j];
                    enter = j;
                }
            }
        }
        if (enter == cols) break;  // optimal
        // Ratio test; ties -> smallest basis label (Bland).
        std::size_t leave = m;
        double best = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (T[r][enter] <= pivot_tol) continue;
            const double ratio = T[r][cols] / T[r][enter];
            if (leave == m || ratio < best - 1e-15 ||
                (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave == m) throw LPNumericalFailure("phase-1 objective unbounded (inconsistent tableau)");
        // Pivot.
        const double piv = T[leave][enter];
        for (std::size_t j = 0; j <= cols; ++j) T[leave][j] /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = T[r][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) T[r][j] -= f * T[leave][j];
        }
        const double fo = obj[enter];
        if (fo != 0.0)
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= fo * T[leave][j];
        basis[leave] = enter;
    }

    // Optimal artificial sum = -obj[rhs].
    const double infeas = -obj[cols];
    if (infeas <= tol) return {true, {}};

    // Dual y* from artificial reduced costs (c_a = 1): y*_r = 1 - d_{a_r};
    // fold the row sign flips back in.
    LPResult out;
    out.feasible = false;
    out.farkas.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        // Artificial column (cost 1): d = 1 - y*_r.  Rows without an
        // artificial kept sign +1 and their slack column (cost 0) gives
        // d = -y*_r directly.
        const double ystar = art_used[r] ? 1.0 - obj[n + m + r] : -obj[n + r];
        // Original Farkas u = -(sign-adjusted dual): u_r = -sign_r * y*_r.
        out.farkas[r] = -sign[r] * ystar;
    }
    // The certificate direction: u >= 0, uT G >= 0, uT h < 0.  Clip tiny
    // negative noise; the caller re-verifies on its own data anyway.
    for (double& v : out.farkas)
        if (v < 0.0 && v > -1e-12) v = 0.0;
    return out;
}

}  // namespace polyhull

"""Compiled inner loops for the worst-case tail-exponent minimax.

The quantity minimized here is the convex dual

    g(t, lam) = sum_i log(1 + xi_i * tau_i) + lam * (mu - sum_i tau_i) - t * s,

with xi_i = (exp(a_i t) - 1) / a_i and tau_i = clamp(1/lam - 1/xi_i, 0, a_i).
For fixed t the per-module terms depend on u = 1/lam only through which of
three regimes each module is in (tau = 0, interior, saturated at a_i), so a
single evaluation reduces to two binary searches over precomputed prefix
sums:

    interior (1/xi_i < u < 1/xi_i + a_i):  log(1 + xi tau) = log(xi_i) + log(u)
    saturated (u >= 1/xi_i + a_i):         log(1 + xi a)   = log(xi_i) + log(1/xi_i + a_i)

Widths must be passed sorted in DESCENDING order so that 1/xi_i is ascending.
The line searches are golden section: outer over t on an adaptively doubled
bracket, inner over log(lam) (a monotone reparameterization, which preserves
unimodality while keeping the iteration count independent of the enormous
dynamic range of lam).
"""

import numpy as np
from numba import njit

INVPHI = 0.6180339887498949  # (sqrt(5) - 1) / 2
LAMBDA_FLOOR = 1e-14
EXP_ARG_CAP = 700.0  # exp stays finite below this argument

STATUS_OK = 0
STATUS_MAXITER = 1


@njit(cache=True)
def _dual_from_tables(y, mu, ts, inv_xi, pre_logxi, pre_invxi,
                      sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a):
    """Dual value at log-multiplier y for one fixed t (tables precomputed)."""
    u = np.exp(-y)
    c_act = np.searchsorted(inv_xi, u)                    # modules with tau > 0
    c_sat = np.searchsorted(sat_sorted, u, side='right')  # modules with tau = a
    if c_sat > c_act:
        c_sat = c_act
    n_int = c_act - c_sat
    # log(1 + xi tau) = log(xi) + log(u) on interior modules and
    # log(xi) + log(1/xi + a) on saturated ones; the active prefix already
    # carries log(xi) for both, so only log(1/xi + a) is added per saturation.
    terms = pre_logxi[c_act] + n_int * (-y) + pre_logsat[c_sat]
    tau_sum = n_int * u - (pre_invxi[c_act] - pre_sat_invxi[c_sat]) + pre_sat_a[c_sat]
    lam = np.exp(y)
    return terms + lam * (mu - tau_sum) - ts


@njit(cache=True)
def _profile_in_lambda(t, widths_desc, mu, s, y_tol, max_iter):
    """min_lam g(t, lam) by golden section on y = log(lam).

    Returns (value, lam_star, iterations, status).
    """
    m = widths_desc.shape[0]
    inv_xi = np.empty(m)
    logxi = np.empty(m)
    sat = np.empty(m)
    for i in range(m):
        a = widths_desc[i]
        e = np.expm1(a * t)
        inv_xi[i] = a / e
        logxi[i] = np.log(e) - np.log(a)
        sat[i] = a / e + a

    lam_hi = 1.0 / inv_xi[0]  # largest xi, from the largest width
    if lam_hi <= 2.0 * LAMBDA_FLOOR:
        # t so small that every xi is below the multiplier floor; the dual is
        # flat at the O(t) level, so report the proportional-means value.
        total = 0.0
        asum = 0.0
        for i in range(m):
            asum += widths_desc[i]
        for i in range(m):
            total += np.log1p((mu * widths_desc[i] / asum) / inv_xi[i])
        return total - t * s, lam_hi, 0, STATUS_OK

    pre_logxi = np.zeros(m + 1)
    pre_invxi = np.zeros(m + 1)
    for i in range(m):
        pre_logxi[i + 1] = pre_logxi[i] + logxi[i]
        pre_invxi[i + 1] = pre_invxi[i] + inv_xi[i]
    order = np.argsort(sat)
    sat_sorted = np.empty(m)
    pre_logsat = np.zeros(m + 1)
    pre_sat_invxi = np.zeros(m + 1)
    pre_sat_a = np.zeros(m + 1)
    for j in range(m):
        i = order[j]
        sat_sorted[j] = sat[i]
        pre_logsat[j + 1] = pre_logsat[j] + np.log(sat[i])
        pre_sat_invxi[j + 1] = pre_sat_invxi[j] + inv_xi[i]
        pre_sat_a[j + 1] = pre_sat_a[j] + widths_desc[i]

    ts = t * s
    y_lo = np.log(LAMBDA_FLOOR)
    y_hi = np.log(lam_hi)
    if y_hi <= y_lo:
        v = _dual_from_tables(y_hi, mu, ts, inv_xi, pre_logxi, pre_invxi,
                              sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a)
        return v, np.exp(y_hi), 1, STATUS_OK

    h = y_hi - y_lo
    yc = y_hi - INVPHI * h
    yd = y_lo + INVPHI * h
    fc = _dual_from_tables(yc, mu, ts, inv_xi, pre_logxi, pre_invxi,
                           sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a)
    fd = _dual_from_tables(yd, mu, ts, inv_xi, pre_logxi, pre_invxi,
                           sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a)
    used = 2
    status = STATUS_OK
    while h > y_tol:
        if used >= max_iter:
            status = STATUS_MAXITER
            break
        if fc <= fd:
            y_hi = yd
            yd = yc
            fd = fc
            h = y_hi - y_lo
            yc = y_hi - INVPHI * h
            fc = _dual_from_tables(yc, mu, ts, inv_xi, pre_logxi, pre_invxi,
                                   sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a)
        else:
            y_lo = yc
            yc = yd
            fc = fd
            h = y_hi - y_lo
            yd = y_lo + INVPHI * h
            fd = _dual_from_tables(yd, mu, ts, inv_xi, pre_logxi, pre_invxi,
                                   sat_sorted, pre_logsat, pre_sat_invxi, pre_sat_a)
        used += 1
    if fc <= fd:
        return fc, np.exp(yc), used, status
    return fd, np.exp(yd), used, status


@njit(cache=True)
def minimize_exponent(widths_desc, mu, s, y_tol, t_rel_tol, max_iter):
    """min_{t > 0} min_lam g(t, lam) for 0 < mu < sum(a), mu < s < sum(a).

    Returns (value, t_star, lam_star, status).
    """
    t_cap = EXP_ARG_CAP / widths_desc[0]

    # Adaptive bracket: double the upper end until the profile stops
    # decreasing (convexity then guarantees the minimizer is inside).
    t_hi = 1.0 if 1.0 < t_cap else t_cap
    prev, lam_prev, _, st = _profile_in_lambda(t_hi, widths_desc, mu, s, y_tol, max_iter)
    best_v, best_t, best_lam = prev, t_hi, lam_prev
    status = st
    while t_hi < t_cap:
        t_next = 2.0 * t_hi
        if t_next > t_cap:
            t_next = t_cap
        v, lam_v, _, st = _profile_in_lambda(t_next, widths_desc, mu, s, y_tol, max_iter)
        if st != STATUS_OK:
            status = st
        if v < best_v:
            best_v, best_t, best_lam = v, t_next, lam_v
        t_hi = t_next
        if v >= prev:
            break
        prev = v

    t_lo = 0.0
    t_tol = t_rel_tol * t_hi + 1e-300
    h = t_hi - t_lo
    tc = t_hi - INVPHI * h
    td = t_lo + INVPHI * h
    fc, lamc, _, st1 = _profile_in_lambda(tc, widths_desc, mu, s, y_tol, max_iter)
    fd, lamd, _, st2 = _profile_in_lambda(td, widths_desc, mu, s, y_tol, max_iter)
    if st1 != STATUS_OK or st2 != STATUS_OK:
        status = STATUS_MAXITER
    used = 2
    while h > t_tol:
        if used >= max_iter:
            status = STATUS_MAXITER
            break
        if fc <= fd:
            t_hi = td
            td = tc
            fd = fc
            lamd = lamc
            h = t_hi - t_lo
            tc = t_hi - INVPHI * h
            fc, lamc, _, st1 = _profile_in_lambda(tc, widths_desc, mu, s, y_tol, max_iter)
            if st1 != STATUS_OK:
                status = STATUS_MAXITER
        else:
            t_lo = tc
            tc = td
            fc = fd
            lamc = lamd
            h = t_hi - t_lo
            td = t_lo + INVPHI * h
            fd, lamd, _, st2 = _profile_in_lambda(td, widths_desc, mu, s, y_tol, max_iter)
            if st2 != STATUS_OK:
                status = STATUS_MAXITER
        used += 1

    if fc <= fd and fc < best_v:
        best_v, best_t, best_lam = fc, tc, lamc
    elif fd < best_v:
        best_v, best_t, best_lam = fd, td, lamd
    return best_v, best_t, best_lam, status

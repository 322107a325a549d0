"""Numba @njit kernel implementations (default path).

Loop versions of the contracts documented in _kernels_np. Serial on purpose:
accumulation order is fixed, so results are reproducible regardless of
thread count.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def hermite_tables(Z, kmax):
    n, m = Z.shape
    T = np.empty((n, m, kmax + 1))
    for t in range(n):
        for j in range(m):
            T[t, j, 0] = 1.0
            if kmax >= 1:
                T[t, j, 1] = Z[t, j]
            for k in range(1, kmax):
                T[t, j, k + 1] = Z[t, j] * T[t, j, k] - k * T[t, j, k - 1]
    return T


@njit(cache=True)
def _products(T, midx, t, b, pref, suf):
    # prefix/suffix partial products of the basis factors at sample t,
    # basis b; pref[j] = prod_{l<j}, suf[j] = prod_{l>j}.
    m = midx.shape[1]
    pref[0] = 1.0
    for j in range(1, m):
        pref[j] = pref[j - 1] * T[t, j - 1, midx[b, j - 1]]
    suf[m - 1] = 1.0
    for j in range(m - 2, -1, -1):
        suf[j] = suf[j + 1] * T[t, j + 1, midx[b, j + 1]]


@njit(cache=True)
def field_values(T, midx, coef):
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    G = np.zeros((n, K))
    for t in range(n):
        for b in range(NB):
            prod = 1.0
            for j in range(m):
                prod *= T[t, j, midx[b, j]]
            for a in range(K):
                G[t, a] += coef[a, b] * prod
    return G


@njit(cache=True)
def field_jacobian(T, midx, coef):
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    J = np.zeros((n, K, K))
    pref = np.empty(m)
    suf = np.empty(m)
    for t in range(n):
        for b in range(NB):
            _products(T, midx, t, b, pref, suf)
            for i in range(K):
                k = midx[b, i]
                if k == 0:
                    continue
                dBi = k * T[t, i, k - 1] * pref[i] * suf[i]
                for a in range(K):
                    J[t, a, i] += coef[a, b] * dBi
    return J


@njit(cache=True)
def raw_divstar(T, midx, coef):
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    out = np.zeros(n)
    pref = np.empty(m)
    suf = np.empty(m)
    for t in range(n):
        acc = 0.0
        for b in range(NB):
            _products(T, midx, t, b, pref, suf)
            for a in range(K):
                acc += coef[a, b] * T[t, a, midx[b, a] + 1] * pref[a] * suf[a]
        out[t] = acc
    return out


@njit(cache=True)
def _squash_s_u(r, p):
    base = 1.0 + r**p
    s = base ** (-1.0 / p)
    u = -(r ** (p - 2)) * base ** (-1.0 / p - 1.0)
    return s, u


@njit(cache=True)
def squash_divstar(T, midx, coef, Z, p):
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    out = np.empty(n)
    pref = np.empty(m)
    suf = np.empty(m)
    G = np.empty(K)
    J = np.empty((K, K))
    for t in range(n):
        for a in range(K):
            G[a] = 0.0
            for i in range(K):
                J[a, i] = 0.0
        for b in range(NB):
            _products(T, midx, t, b, pref, suf)
            prodb = pref[m - 1] * T[t, m - 1, midx[b, m - 1]]
            for a in range(K):
                G[a] += coef[a, b] * prodb
            for i in range(K):
                k = midx[b, i]
                if k == 0:
                    continue
                dBi = k * T[t, i, k - 1] * pref[i] * suf[i]
                for a in range(K):
                    J[a, i] += coef[a, b] * dBi
        r2 = 0.0
        for a in range(K):
            r2 += G[a] * G[a]
        r = np.sqrt(r2)
        s, u = _squash_s_u(r, p)
        D = 0.0
        P = 0.0
        for a in range(K):
            D += J[a, a]
            P += G[a] * Z[t, a]
        Q = 0.0
        for i in range(K):
            gj = 0.0
            for a in range(K):
                gj += G[a] * J[a, i]
            Q += G[i] * gj
        out[t] = -(s * D + u * Q) + s * P
    return out


@njit(cache=True)
def squash_gradient(T, midx, coef, Z, w, p):
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    grad = np.zeros((K, NB))
    pref = np.empty(m)
    suf = np.empty(m)
    G = np.empty(K)
    J = np.empty((K, K))
    v = np.empty(K)
    B = np.empty(NB)
    dB = np.empty((K, NB))
    for t in range(n):
        wt = w[t]
        if wt == 0.0:
            continue
        for a in range(K):
            G[a] = 0.0
            for i in range(K):
                J[a, i] = 0.0
        for b in range(NB):
            _products(T, midx, t, b, pref, suf)
            B[b] = pref[m - 1] * T[t, m - 1, midx[b, m - 1]]
            for a in range(K):
                G[a] += coef[a, b] * B[b]
            for i in range(K):
                k = midx[b, i]
                if k == 0:
                    dB[i, b] = 0.0
                else:
                    dB[i, b] = k * T[t, i, k - 1] * pref[i] * suf[i]
                    for a in range(K):
                        J[a, i] += coef[a, b] * dB[i, b]
        r2 = 0.0
        for a in range(K):
            r2 += G[a] * G[a]
        r = np.sqrt(r2)
        base = 1.0 + r**p
        s = base ** (-1.0 / p)
        u = -(r ** (p - 2)) * base ** (-1.0 / p - 1.0)
        up_over_r = -(p - 2) * r ** (p - 4) * base ** (-1.0 / p - 1.0) + (
            p + 1
        ) * r ** (2 * p - 4) * base ** (-1.0 / p - 2.0)
        D = 0.0
        P = 0.0
        for a in range(K):
            D += J[a, a]
            P += G[a] * Z[t, a]
        Q = 0.0
        for i in range(K):
            gj = 0.0
            for a in range(K):
                gj += G[a] * J[a, i]
            Q += G[i] * gj
        for a in range(K):
            va = 0.0
            for j in range(K):
                va += G[j] * J[j, a] + J[a, j] * G[j]
            v[a] = va
        for a in range(K):
            v[a] = (-u * D - up_over_r * Q + u * P) * G[a] - u * v[a] + s * Z[t, a]
        for b in range(NB):
            wBb = 0.0
            for i in range(K):
                wBb += G[i] * dB[i, b]
            for a in range(K):
                grad[a, b] += wt * (B[b] * v[a] - s * dB[a, b] - u * G[a] * wBb)
    return grad


@njit(cache=True)
def greedy_cover_idx(pts, radius):
    N, m = pts.shape
    mind = np.full(N, np.inf)
    assign = np.zeros(N, dtype=np.int64)
    centers = np.empty(N, dtype=np.int64)
    C = 0
    cur = 0
    while True:
        centers[C] = cur
        for i in range(N):
            d2 = 0.0
            for j in range(m):
                diff = pts[i, j] - pts[cur, j]
                d2 += diff * diff
            d = np.sqrt(d2)
            if d < mind[i]:
                mind[i] = d
                assign[i] = C
        C += 1
        far = 0
        fd = -1.0
        for i in range(N):
            if mind[i] > fd:
                fd = mind[i]
                far = i
        if fd <= radius:
            break
        cur = far
    tight = np.zeros(C)
    for i in range(N):
        if mind[i] > tight[assign[i]]:
            tight[assign[i]] = mind[i]
    return centers[:C].copy(), assign, tight


@njit(cache=True)
def nn_distances(pts):
    N, m = pts.shape
    out = np.empty(N)
    for i in range(N):
        best = np.inf
        for k in range(N):
            if k == i:
                continue
            d2 = 0.0
            for j in range(m):
                diff = pts[i, j] - pts[k, j]
                d2 += diff * diff
            if d2 < best:
                best = d2
        out[i] = np.sqrt(best)
    return out

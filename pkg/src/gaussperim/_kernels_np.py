"""Pure numpy kernel implementations (fallback path).

Same contracts as _kernels_nb. Sample batches are processed in chunks so the
intermediate (chunk, n_basis) arrays stay small.

Conventions shared by both backends:
  Z     (n, m) float64 sample points
  T     (n, m, kmax+1) probabilists' Hermite values He_k(Z[t, j])
  midx  (NB, m) int64 multi-indices, total degree <= d, so tables need
        kmax = d + 1 (the raising identity consumes one extra degree)
  coef  (K, NB) float64, K <= m active field components (along e_1..e_K)

The squash maps a raw polynomial field G through s(r) = (1 + r^p)^(-1/p),
r = |G|, so |s(r) G| < 1 pointwise and admissibility is exact. p is an even
integer >= 4; every radial factor below then carries a nonnegative power of
r and r = 0 is regular.
"""

import numpy as np

_CHUNK = 16384


def hermite_tables(Z, kmax):
    Z = np.ascontiguousarray(Z, dtype=np.float64)
    n, m = Z.shape
    T = np.empty((n, m, kmax + 1))
    T[:, :, 0] = 1.0
    if kmax >= 1:
        T[:, :, 1] = Z
    for k in range(1, kmax):
        T[:, :, k + 1] = Z * T[:, :, k] - k * T[:, :, k - 1]
    return T


def _basis(T, midx):
    # B[t, b] = prod_j He_{midx[b, j]}(Z[t, j])
    n = T.shape[0]
    NB, m = midx.shape
    B = np.ones((n, NB))
    for j in range(m):
        B *= T[:, j, midx[:, j]]
    return B


def _basis_grad(T, midx, K):
    # dB[t, i, b] = d/dz_i of the basis product, for coordinates i < K,
    # using He_k' = k He_{k-1}.
    n = T.shape[0]
    NB, m = midx.shape
    dB = np.zeros((n, K, NB))
    for i in range(K):
        pr = np.ones((n, NB))
        for j in range(m):
            if j == i:
                continue
            pr *= T[:, j, midx[:, j]]
        a = midx[:, i]
        lowered = T[:, i, np.maximum(a - 1, 0)] * a
        dB[:, i, :] = pr * lowered
    return dB


def field_values(T, midx, coef):
    n = T.shape[0]
    K = coef.shape[0]
    G = np.empty((n, K))
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, n))
        G[sl] = _basis(T[sl], midx) @ coef.T
    return G


def field_jacobian(T, midx, coef):
    # J[t, a, i] = d G_a / d z_i, restricted to i < K (all that the squash
    # divergence ever needs).
    n = T.shape[0]
    K = coef.shape[0]
    J = np.empty((n, K, K))
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, n))
        dB = _basis_grad(T[sl], midx, K)
        J[sl] = np.einsum("ab,nib->nai", coef, dB)
    return J


def raw_divstar(T, midx, coef):
    # Adjoint-gradient of the raw polynomial field: the raising identity
    # (-d/dz_a + z_a) He_k(z_a) = He_{k+1}(z_a) makes this another exact
    # Hermite sum, one degree up in the component's own coordinate.
    n = T.shape[0]
    K, NB = coef.shape
    m = midx.shape[1]
    out = np.zeros(n)
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, n))
        acc = np.zeros(sl.stop - sl.start)
        for a in range(K):
            pr = np.ones((sl.stop - sl.start, NB))
            for j in range(m):
                if j == a:
                    continue
                pr *= T[sl, j, midx[:, j]]
            raised = T[sl, a, midx[:, a] + 1]
            acc += (pr * raised) @ coef[a]
        out[sl] = acc
    return out


def _squash_factors(r, p):
    base = 1.0 + r**p
    s = base ** (-1.0 / p)
    u = -(r ** (p - 2)) * base ** (-1.0 / p - 1.0)  # s'(r) / r
    up_over_r = -(p - 2) * r ** (p - 4) * base ** (-1.0 / p - 1.0) + (
        p + 1
    ) * r ** (2 * p - 4) * base ** (-1.0 / p - 2.0)  # u'(r) / r
    return s, u, up_over_r


def squash_divstar(T, midx, coef, Z, p):
    # Exact divergence-star of the squashed field s(|G|) G via the chain
    # rule: -div(sG) + <sG, z> = -(s trJ + u G^T J G) + s <G, z>.
    n = T.shape[0]
    K = coef.shape[0]
    out = np.empty(n)
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, n))
        B = _basis(T[sl], midx)
        dB = _basis_grad(T[sl], midx, K)
        G = B @ coef.T
        J = np.einsum("ab,nib->nai", coef, dB)
        r = np.sqrt(np.sum(G * G, axis=1))
        s, u, _ = _squash_factors(r, p)
        D = np.trace(J, axis1=1, axis2=2)
        Q = np.einsum("ni,nj,nji->n", G, G, J)
        P = np.sum(G * Z[sl, :K], axis=1)
        out[sl] = -(s * D + u * Q) + s * P
    return out


def squash_gradient(T, midx, coef, Z, w, p):
    # Gradient of sum_t w_t * squash_divstar_t with respect to coef.
    K, NB = coef.shape
    n = T.shape[0]
    grad = np.zeros((K, NB))
    for lo in range(0, n, _CHUNK):
        sl = slice(lo, min(lo + _CHUNK, n))
        ws = w[sl]
        B = _basis(T[sl], midx)
        dB = _basis_grad(T[sl], midx, K)
        G = B @ coef.T
        J = np.einsum("ab,nib->nai", coef, dB)
        r = np.sqrt(np.sum(G * G, axis=1))
        s, u, up_over_r = _squash_factors(r, p)
        D = np.trace(J, axis1=1, axis2=2)
        Q = np.einsum("ni,nj,nji->n", G, G, J)
        P = np.sum(G * Z[sl, :K], axis=1)
        v = np.einsum("nj,nja->na", G, J) + np.einsum("nai,ni->na", J, G)
        wB = np.einsum("ni,nib->nb", G, dB)
        c1 = (
            (-u * D - up_over_r * Q + u * P)[:, None] * G
            - u[:, None] * v
            + s[:, None] * Z[sl, :K]
        )
        grad += np.einsum("n,nb,na->ab", ws, B, c1)
        grad -= np.einsum("n,n,nab->ab", ws, s, dB)
        grad -= np.einsum("n,n,na,nb->ab", ws, u, G, wB)
    return grad


def greedy_cover_idx(pts, radius):
    # Farthest-point traversal: keep selecting the point farthest from the
    # chosen centers until everything lies within `radius` of one. Returns
    # (center indices, nearest-center assignment, per-center tight radius).
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    N = pts.shape[0]
    mind = np.full(N, np.inf)
    assign = np.zeros(N, dtype=np.int64)
    centers = []
    cur = 0
    while True:
        centers.append(cur)
        d = np.sqrt(np.sum((pts - pts[cur]) ** 2, axis=1))
        closer = d < mind
        mind[closer] = d[closer]
        assign[closer] = len(centers) - 1
        far = int(np.argmax(mind))
        if mind[far] <= radius:
            break
        cur = far
    C = len(centers)
    tight = np.zeros(C)
    np.maximum.at(tight, assign, mind)
    return np.asarray(centers, dtype=np.int64), assign, tight


def nn_distances(pts):
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    N = pts.shape[0]
    out = np.empty(N)
    step = max(1, int(4e6) // max(N, 1))
    for lo in range(0, N, step):
        hi = min(lo + step, N)
        d2 = np.sum((pts[lo:hi, None, :] - pts[None, :, :]) ** 2, axis=2)
        for r in range(hi - lo):
            d2[r, lo + r] = np.inf
        out[lo:hi] = np.sqrt(np.min(d2, axis=1))
    return out

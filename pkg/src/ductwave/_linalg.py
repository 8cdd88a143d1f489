"""Small shared linear-algebra helpers."""

import numpy as np
import scipy.linalg as sla


def fd_jacobian(f, u, h=1e-6):
    """Centered finite-difference Jacobian of f: R^n -> R^n at u."""
    u = np.asarray(u, dtype=float)
    n = u.size
    J = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (np.asarray(f(u + e)) - np.asarray(f(u - e))) / (2 * h)
    return J


def canonical_vector(v):
    """Scale-fix a nonzero vector: unit Euclidean norm, and the leading
    component (first index whose modulus is at least half the max) rotated
    to the positive real axis.  Deterministic under small perturbations,
    and invariant under multiplication of v by any nonzero complex scalar.
    """
    v = np.asarray(v, dtype=complex)
    amax = np.max(np.abs(v))
    if amax == 0.0:
        raise ValueError("zero vector has no canonical form")
    lead = int(np.argmax(np.abs(v) >= 0.5 * amax))
    phase = v[lead] / abs(v[lead])
    return v / (phase * np.linalg.norm(v))


def eig_sorted(M):
    """Eigendecomposition with eigenvalues sorted by (real, imag) and
    canonically normalized eigenvectors."""
    w, V = sla.eig(np.asarray(M, dtype=complex))
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    V = V[:, order]
    for k in range(V.shape[1]):
        V[:, k] = canonical_vector(V[:, k])
    return w, V


def spectral_scale(*matrices):
    """max(1, largest eigenvalue magnitude over the given matrices)."""
    r = 1.0
    for M in matrices:
        w = sla.eigvals(np.asarray(M, dtype=complex))
        if w.size:
            r = max(r, float(np.max(np.abs(w))))
    return r

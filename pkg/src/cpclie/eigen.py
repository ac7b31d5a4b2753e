"""Small dense symmetric eigenproblems and spectrum bookkeeping."""

from fractions import Fraction

import numpy as np


class EigenError(ArithmeticError):
    pass


def jacobi_eigenvalues(a, tol=1e-13, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.

    Stops once the off-diagonal Frobenius norm drops below ``tol``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise EigenError("matrix must be square")
    a = 0.5 * (a + a.T)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum((a - np.diag(np.diag(a))) ** 2))
        if off < tol:
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # rotation angle that zeroes a[p, q]
                diff = a[q, q] - a[p, p]
                if abs(2.0 * apq) < 1e-150 * abs(diff):
                    t = apq / diff  # tan of a tiny angle; tau itself would overflow
                elif diff == 0:
                    t = 1.0
                else:
                    tau = diff / (2.0 * apq)
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp = a[p].copy()
                rq = a[q].copy()
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
    raise EigenError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def symmetric_eigenvalues(a, solver="jacobi"):
    if solver == "jacobi":
        return jacobi_eigenvalues(a)
    if solver == "lapack":
        return np.linalg.eigvalsh(0.5 * (a + np.swapaxes(a, -1, -2)))
    raise EigenError(f"unknown solver {solver!r}")


def cluster(values, tol):
    """Group ascending eigenvalues into (mean value, multiplicity) clusters."""
    out = []
    group = []
    for v in np.sort(np.asarray(values, dtype=float)):
        if group and v - group[-1] > tol:
            out.append((float(np.mean(group)), len(group)))
            group = []
        group.append(v)
    if group:
        out.append((float(np.mean(group)), len(group)))
    return out


def expand(clusters):
    return np.array([v for v, m in clusters for _ in range(m)], dtype=float)


def spectrum_distance(a, b):
    """L-infinity distance between two sorted eigenvalue vectors."""
    a = np.sort(np.asarray(a, float))
    b = np.sort(np.asarray(b, float))
    if a.shape != b.shape:
        return float("inf")
    return float(np.max(np.abs(a - b), initial=0.0))


def char_poly(m):
    """Exact characteristic polynomial coefficients (leading 1 first) by Faddeev-LeVerrier."""
    m = np.array(m, dtype=object)
    n = m.shape[0]
    for idx in np.ndindex(m.shape):
        m[idx] = Fraction(m[idx])
    coeffs = [Fraction(1)]
    ident = np.eye(n, dtype=int).astype(object)
    mk = np.zeros((n, n), dtype=int).astype(object)
    for k in range(1, n + 1):
        mk = m @ (mk + coeffs[-1] * ident)
        coeffs.append(-sum(mk[i, i] for i in range(n)) / k)
    return coeffs


def char_poly_roots(m):
    """Eigenvalues of a general small matrix as roots of its exact characteristic polynomial."""
    return np.roots([float(c) for c in char_poly(m)])

"""Full SVD, Moore-Penrose pseudoinverse and orthonormal completion.

The SVD is a one-sided (Hestenes) Jacobi iteration on the taller
orientation of the input. At the sizes used here (a few dozen rows at most)
it is accurate to a few ulps and fully deterministic: rotations are applied
in a fixed cyclic order and missing left singular vectors are filled in by
Gram-Schmidt against the canonical basis in index order.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, NumericalError, PreconditionError
from .linalg import as_matrix, as_state

MAX_SWEEPS = 60
JACOBI_TOL = 1e-13
PINV_RCOND = 1e-12
ORTHONORMAL_TOL = 1e-10
COMPLETION_SKIP = 1e-8


@dataclass(frozen=True)
class SvdResult:
    """``a = u @ diag_rect(sigma) @ v_dagger`` with full square ``u`` and ``v_dagger``."""

    u: np.ndarray
    sigma: np.ndarray
    v_dagger: np.ndarray

    @property
    def shape(self):
        return (self.u.shape[0], self.v_dagger.shape[1])

    def sigma_matrix(self):
        return diag_rect(self.sigma, *self.shape)

    def reconstruct(self):
        return self.u @ self.sigma_matrix() @ self.v_dagger


def diag_rect(values, rows, cols):
    """rows x cols matrix with ``values`` down the main diagonal."""
    out = np.zeros((rows, cols), dtype=np.complex128)
    k = min(rows, cols, len(values))
    out[np.arange(k), np.arange(k)] = np.asarray(values)[:k]
    return out


def rect_identity(rows, cols):
    """Ones on the main diagonal, zeros elsewhere; a partial isometry when rows != cols."""
    if rows < 1 or cols < 1:
        raise PreconditionError(f"rect_identity needs positive dims, got {rows}x{cols}")
    return np.eye(rows, cols, dtype=np.complex128)


def _jacobi_columns(a):
    """Orthogonalise the columns of ``a`` (m >= n) by plane rotations.

    Returns ``(g, v)`` with ``a @ v == g``, ``v`` unitary and the columns of
    ``g`` mutually orthogonal.
    """
    g = a.copy()
    n = g.shape[1]
    v = np.eye(n, dtype=np.complex128)
    floor = 1e-30 * max(float(np.vdot(a, a).real), np.finfo(float).tiny)

    off = 0.0
    for _ in range(MAX_SWEEPS):
        off = 0.0
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp, gq = g[:, p], g[:, q]
                alpha = float(np.vdot(gp, gp).real)
                beta = float(np.vdot(gq, gq).real)
                gamma = complex(np.vdot(gp, gq))
                mag = abs(gamma)
                if mag <= floor:
                    continue
                rel = mag / np.sqrt(alpha * beta)
                off = max(off, rel)
                if rel <= JACOBI_TOL:
                    continue
                rotated = True
                phase = gamma / mag
                zeta = (beta - alpha) / (2.0 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                # [col_p, col_q] <- [col_p, conj(phase) col_q] @ [[c, s], [-s, c]]
                for m in (g, v):
                    mp = m[:, p].copy()
                    mq = m[:, q] * np.conj(phase)
                    m[:, p] = c * mp - s * mq
                    m[:, q] = s * mp + c * mq
        if not rotated:
            return g, v
    raise NumericalError(
        f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps "
        f"(largest relative off-diagonal Gram entry {off:.3e})"
    )


def _svd_tall(a):
    m, n = a.shape
    g, v = _jacobi_columns(a)
    norms = np.linalg.norm(g, axis=0)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    g = g[:, order]
    v = v[:, order]

    smax = sigma[0] if sigma.size else 0.0
    keep = int(np.sum(sigma > JACOBI_TOL * smax)) if smax > 0 else 0
    u = orthonormal_complete(g[:, :keep] / sigma[:keep], m)
    return u, sigma, v


def _fix_phases(res):
    """Rotate each singular pair so the largest entry of its u-column is real and >= 0."""
    u, vh = res.u.copy(), res.v_dagger.copy()
    for j in range(res.sigma.size):
        col = u[:, j]
        big = col[np.argmax(np.abs(col))]
        if big == 0:
            continue
        ph = big / abs(big)
        u[:, j] = col / ph
        vh[j, :] = vh[j, :] * ph
    return SvdResult(u=u, sigma=res.sigma, v_dagger=vh)


def svd_full(a):
    """Full singular value decomposition ``a = U diag(sigma) V^H``.

    ``sigma`` has ``min(m, n)`` non-negative entries in descending order.
    Degenerate singular values leave the corresponding singular vectors
    unconstrained; only reconstruction and unitarity are guaranteed.

    Raises NumericalError when the Jacobi sweeps fail to converge.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m >= n:
        u, sigma, v = _svd_tall(a)
        return _fix_phases(SvdResult(u=u, sigma=sigma, v_dagger=v.conj().T))
    # a^H = u' s v'^H  =>  a = v' s u'^H
    u_t, sigma, v_t = _svd_tall(a.conj().T)
    return _fix_phases(SvdResult(u=v_t, sigma=sigma, v_dagger=u_t.conj().T))


def pinv_vector(x):
    """Pseudoinverse of a nonzero ket: the 1 x n row ``x^H / (x^H x)``."""
    x = as_state(x)
    nrm2 = float(np.vdot(x, x).real)
    if nrm2 == 0.0:
        raise DegenerateInputError("pseudoinverse of the zero vector is undefined here")
    return (x.conj() / nrm2)[np.newaxis, :]


def pinv_matrix(a, rcond=PINV_RCOND):
    """Moore-Penrose pseudoinverse ``V diag(1/sigma) U^H`` from :func:`svd_full`.

    Singular values at or below ``rcond * sigma_max`` are treated as zero.
    """
    a = as_matrix(a)
    res = svd_full(a)
    m, n = a.shape
    smax = res.sigma[0] if res.sigma.size else 0.0
    inv = np.array([1.0 / s if s > rcond * smax else 0.0 for s in res.sigma])
    return res.v_dagger.conj().T @ diag_rect(inv, n, m) @ res.u.conj().T


def orthonormal_complete(partial_columns, target_dim):
    """Extend orthonormal columns to a ``target_dim`` square unitary.

    The given columns are kept verbatim as the leading columns. New columns
    come from Gram-Schmidt on e_0, e_1, ... in index order; candidates whose
    residual norm is below 1e-8 are skipped.
    """
    q = np.array(partial_columns, dtype=np.complex128)
    if q.ndim == 1:
        q = q[:, np.newaxis]
    if q.ndim != 2 or q.shape[0] != target_dim:
        raise PreconditionError(
            f"columns of length {q.shape[0] if q.ndim == 2 else '?'} cannot live in dimension {target_dim}"
        )
    k = q.shape[1]
    if k > target_dim:
        raise PreconditionError(f"{k} columns exceed target dimension {target_dim}")
    if k:
        err = np.linalg.norm(q.conj().T @ q - np.eye(k))
        if err > ORTHONORMAL_TOL:
            raise PreconditionError(f"input columns are not orthonormal (residual {err:.3e})")

    cols = [q[:, j] for j in range(k)]
    for i in range(target_dim):
        if len(cols) == target_dim:
            break
        r = np.zeros(target_dim, dtype=np.complex128)
        r[i] = 1.0
        # two passes of classical Gram-Schmidt keep the loss of orthogonality at roundoff level
        for _ in range(2):
            for c in cols:
                r = r - np.vdot(c, r) * c
        nr = np.linalg.norm(r)
        if nr < COMPLETION_SKIP:
            continue
        cols.append(r / nr)
    if len(cols) != target_dim:
        raise NumericalError("orthonormal completion ran out of canonical basis vectors")
    out = np.column_stack(cols)
    out[:, :k] = q
    return out

"""Dense complex matrix and state-vector arithmetic.

Matrices are 2-D ``complex128`` numpy arrays and state vectors are 1-D
``complex128`` arrays. The helpers here validate shapes and finiteness so
that every other module can rely on the same error behaviour.
"""

import numpy as np

from .errors import DimensionError, PreconditionError

UNITARY_TOL = 1e-10
STATE_NORM_TOL = 1e-10


def _shape(a):
    return "x".join(str(s) for s in np.shape(a))


def as_matrix(a):
    """Coerce ``a`` to a finite 2-D complex array (copying when needed)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {_shape(m)}")
    if not np.all(np.isfinite(m)):
        raise PreconditionError("matrix contains NaN or Inf entries")
    return m


def as_state(v):
    """Coerce ``v`` to a finite 1-D complex vector.

    Column matrices (n x 1) are flattened.
    """
    s = np.array(v, dtype=np.complex128)
    if s.ndim == 2 and s.shape[1] == 1:
        s = s[:, 0]
    if s.ndim != 1 or s.size < 1:
        raise DimensionError(f"expected a non-empty vector, got shape {_shape(s)}")
    if not np.all(np.isfinite(s)):
        raise PreconditionError("vector contains NaN or Inf entries")
    return s


def identity(n, m=None):
    m = n if m is None else m
    return np.eye(n, m, dtype=np.complex128)


def mat_mul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {_shape(a)} by {_shape(b)}")
    return a @ b


def conj_transpose(a):
    """Hermitian adjoint. A 1-D vector is treated as a column and becomes a 1 x n row."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 1:
        return as_state(arr).conj()[np.newaxis, :]
    return as_matrix(arr).conj().T


def _as_row(x_dual):
    r = np.asarray(x_dual, dtype=np.complex128)
    if r.ndim == 1:
        r = r[np.newaxis, :]
    r = as_matrix(r)
    if r.shape[0] != 1:
        raise DimensionError(f"dual vector must be a single row, got shape {_shape(r)}")
    return r


def outer_product(y, x_dual):
    """Ket-times-bra product ``|y><x|`` given the bra as a 1 x n row."""
    y = as_state(y)
    row = _as_row(x_dual)
    return y[:, np.newaxis] * row


def kronecker(a, b):
    """Kronecker product of two matrices or two vectors (vectors stay 1-D)."""
    a_arr, b_arr = np.asarray(a), np.asarray(b)
    if a_arr.ndim == 1 and b_arr.ndim == 1:
        return np.kron(as_state(a_arr), as_state(b_arr))
    return np.kron(as_matrix(np.atleast_2d(a_arr)), as_matrix(np.atleast_2d(b_arr)))


def apply(a, v):
    """Matrix-vector product ``a|v>``."""
    a, v = as_matrix(a), as_state(v)
    if a.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot apply {_shape(a)} matrix to vector of dim {v.shape[0]}")
    return a @ v


def inner(a, b):
    """``<a|b>`` with the first argument conjugated."""
    a, b = as_state(a), as_state(b)
    if a.shape != b.shape:
        raise DimensionError(f"inner product of dims {a.size} and {b.size}")
    return complex(np.vdot(a, b))


def norm(v):
    return float(np.linalg.norm(as_state(v)))


def normalize(v):
    v = as_state(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise PreconditionError("cannot normalize the zero vector")
    return v / n


def is_normalized(v, tol=STATE_NORM_TOL):
    """True when the squared amplitudes sum to one within ``tol``."""
    v = as_state(v)
    return abs(float(np.vdot(v, v).real) - 1.0) <= tol


def unitarity_residual(a):
    """``max(||a^H a - I||_F, ||a a^H - I||_F)``.

    Both products are checked so a rectangular matrix can never pass.
    """
    a = as_matrix(a)
    rows, cols = a.shape
    left = np.linalg.norm(a.conj().T @ a - np.eye(cols), "fro")
    right = np.linalg.norm(a @ a.conj().T - np.eye(rows), "fro")
    return float(max(left, right))


def is_unitary(a, tol=UNITARY_TOL):
    return unitarity_residual(a) <= tol


def frobenius_distance(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {_shape(a)} vs {_shape(b)}")
    return float(np.linalg.norm(a - b, "fro"))

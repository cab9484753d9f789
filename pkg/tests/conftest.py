import numpy as np
import pytest
from hypothesis import strategies as st

from qpercept.dirac import basis_ket

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
I2 = np.eye(2, dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_complex(rng, rows, cols):
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_corpus(n, seed=7, max_dim=8):
    """Random complex matrices, every third one rank-deficient (product of thin factors)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        m, k = (int(d) for d in rng.integers(1, max_dim + 1, size=2))
        if i % 3 == 0:
            r = int(rng.integers(1, min(m, k) + 1))
            a = random_complex(rng, m, r) @ random_complex(rng, r, k)
        else:
            a = random_complex(rng, m, k)
        out.append(a)
    return out


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, max_dim=8, rows=None, cols=None):
    r = rows or draw(st.integers(1, max_dim))
    c = cols or draw(st.integers(1, max_dim))
    re = draw(st.lists(finite, min_size=r * c, max_size=r * c))
    im = draw(st.lists(finite, min_size=r * c, max_size=r * c))
    return (np.array(re) + 1j * np.array(im)).reshape(r, c)


@st.composite
def normalized_states(draw, min_qubits=1, max_qubits=4):
    n = draw(st.integers(min_qubits, max_qubits))
    dim = 2**n
    re = np.array(draw(st.lists(finite, min_size=dim, max_size=dim)))
    im = np.array(draw(st.lists(finite, min_size=dim, max_size=dim)))
    v = re + 1j * im
    nrm = np.linalg.norm(v)
    if nrm < 1e-3:
        return basis_ket("0" * n)
    return v / nrm

"""Kets in Dirac notation: basis states, superpositions, text parsing and formatting.

State grammar (whitespace between tokens is ignored)::

    state := term (('+' | '-') term)*
    term  := [coeff '*'] ket
    coeff := real | '(' real ('+' | '-') real 'i' ')'
    ket   := '|' bit+ '>'

A single leading sign on the first term is also accepted so that formatted
states whose first amplitude is negative parse back. Bit strings are
big-endian: ``|01>`` is index 1 of a 4-dimensional space.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParseError, PreconditionError
from .linalg import as_state, normalize

__all__ = [
    "KetLabel",
    "basis_ket",
    "parse_state",
    "format_state",
    "uniform_superposition",
    "normalize",
    "ket_label",
]

_REAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_BITS = re.compile(r"[01]+")


@dataclass(frozen=True)
class KetLabel:
    bits: str

    def __post_init__(self):
        if not self.bits or not _BITS.fullmatch(self.bits):
            raise ParseError(f"ket label must be a non-empty bit string, got {self.bits!r}")

    @property
    def n_qubits(self):
        return len(self.bits)

    @property
    def index(self):
        return int(self.bits, 2)

    def __str__(self):
        return f"|{self.bits}>"


def basis_ket(label):
    """Computational basis vector for a bit string (``"01"`` or ``KetLabel``)."""
    if not isinstance(label, KetLabel):
        label = KetLabel(str(label))
    v = np.zeros(2**label.n_qubits, dtype=np.complex128)
    v[label.index] = 1.0
    return v


def uniform_superposition(n_qubits):
    if n_qubits < 1:
        raise PreconditionError("need at least one qubit")
    dim = 2**n_qubits
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)


def n_qubits_of(dim):
    """log2 of ``dim``; raises DimensionError unless ``dim`` is a power of two."""
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


def ket_label(index, n_qubits):
    return KetLabel(format(index, f"0{n_qubits}b"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def real(self):
        self.skip_ws()
        m = _REAL.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a number", self.pos)
        self.pos = m.end()
        return float(m.group())

    def coeff(self):
        if self.peek() == "(":
            self.pos += 1
            re_part = self.real()
            sign = self.peek()
            if sign not in "+-" or not sign:
                raise ParseError("expected '+' or '-' in complex coefficient", self.pos)
            self.pos += 1
            im_part = self.real()
            self.expect("i")
            self.expect(")")
            return complex(re_part, im_part if sign == "+" else -im_part)
        return complex(self.real())

    def ket(self):
        self.expect("|")
        m = _BITS.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a bit string inside the ket", self.pos)
        self.pos = m.end()
        self.expect(">")
        return KetLabel(m.group())

    def term(self):
        coef = 1.0 + 0j
        if self.peek() != "|":
            coef = self.coeff()
            self.expect("*")
        return coef, self.ket()

    def state(self):
        terms = []
        sign = 1.0
        if self.peek() in ("+", "-") and self.peek():
            # unary sign only when directly followed by a ket
            save = self.pos
            op = self.text[self.pos]
            self.pos += 1
            if self.peek() == "|":
                sign = -1.0 if op == "-" else 1.0
            else:
                self.pos = save
        coef, label = self.term()
        terms.append((sign * coef, label))
        while True:
            op = self.peek()
            if op not in ("+", "-") or not op:
                break
            self.pos += 1
            coef, label = self.term()
            terms.append((-coef if op == "-" else coef, label))
        return terms


def parse_terms(text):
    """Parse ``text`` fully and return ``[(coefficient, KetLabel), ...]``."""
    p = _Parser(text)
    terms = p.state()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError(f"unexpected {text[p.pos]!r}", p.pos)
    return terms


def parse_state(text):
    """Parse a Dirac-notation superposition into an (unnormalised) state vector.

    >>> parse_state("0.5*|0> - 0.5*|1>").real.tolist()
    [0.5, -0.5]
    """
    terms = parse_terms(text)
    width = terms[0][1].n_qubits
    for _, label in terms:
        if label.n_qubits != width:
            raise DimensionError(f"mixed ket widths {width} and {label.n_qubits} in {text!r}")
    v = np.zeros(2**width, dtype=np.complex128)
    for coef, label in terms:
        v[label.index] += coef
    return v


def _fmt_real(x):
    s = f"{x:.8g}"
    return "0" if s in ("-0", "0") else s


def format_state(v, tol=1e-12):
    """Canonical text for ``v``; terms with magnitude <= ``tol`` are dropped."""
    v = as_state(v)
    n = n_qubits_of(v.size)
    parts = []
    for idx, amp in enumerate(v):
        if abs(amp) <= tol:
            continue
        label = str(ket_label(idx, n))
        if abs(amp.imag) <= tol:
            mag = _fmt_real(abs(amp.real))
            neg = amp.real < 0
            body = label if mag == "1" else f"{mag}*{label}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        else:
            im = amp.imag
            body = f"({_fmt_real(amp.real)}{'-' if im < 0 else '+'}{_fmt_real(abs(im))}i)*{label}"
            parts.append(body if not parts else " + " + body)
    return "".join(parts)

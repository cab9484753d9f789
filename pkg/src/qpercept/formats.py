"""Dataset (.qds) and model (.qpm) text formats.

A dataset is one training pair per line, ``state -> state`` in the ket
grammar of :mod:`qpercept.dirac`; ``#`` starts a comment line. Both sides
are normalised on load so rounded amplitudes such as ``0.70710678`` are
accepted.

A model file looks like::

    QPM1
    mode: Decomposed
    threshold: 0.5
    W:
    2 4
    0.5,0 0,0 0,0 0.5,0
    ...
    F:
    ...
    S:
    ...
    WNEW:
    ...

Entries are ``re,im`` at 17 significant digits, so a save/load round trip
is exact.
"""

from pathlib import Path

import numpy as np

from .decomp import svd_full
from .dirac import format_state, parse_state
from .errors import ParseError
from .perceptron import Mode, PerceptronModel, TrainingPair, TrainingSet

MAGIC = "QPM1"
_BLOCKS = (("W", "raw_w"), ("F", "f_hat"), ("S", "sigma_new"), ("WNEW", "w_new"))


def parse_dataset(text):
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lead = len(raw) - len(raw.lstrip())
        arrow = line.find("->")
        if arrow < 0:
            raise ParseError("expected 'input -> target'", lead, line=lineno)
        sides = ((line[:arrow], lead), (line[arrow + 2 :], lead + arrow + 2))
        try:
            states = []
            for chunk, offset in sides:
                try:
                    states.append(parse_state(chunk))
                except ParseError as exc:
                    pos = None if exc.position is None else exc.position + offset
                    raise ParseError(exc.message, pos, line=lineno) from None
            pairs.append(TrainingPair.from_states(*states))
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if not pairs:
        raise ParseError("dataset contains no training pairs")
    try:
        return TrainingSet(tuple(pairs))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_dataset(ts, header=None):
    lines = [f"# {header}"] if header else []
    for pair in ts:
        lines.append(f"{format_state(pair.input)} -> {format_state(pair.target)}")
    return "\n".join(lines) + "\n"


def load_dataset(path):
    return parse_dataset(Path(path).read_text(encoding="utf-8"))


def save_dataset(ts, path, header=None):
    Path(path).write_text(format_dataset(ts, header), encoding="utf-8")


def _num(x):
    return f"{x:.17g}"


def _format_matrix(label, m):
    out = [f"{label}:", f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        out.append(" ".join(f"{_num(z.real)},{_num(z.imag)}" for z in row))
    return out


def format_model(model):
    lines = [MAGIC, f"mode: {model.mode.value}", f"threshold: {_num(model.measurement_threshold)}"]
    for label, attr in _BLOCKS:
        lines.extend(_format_matrix(label, getattr(model, attr)))
    return "\n".join(lines) + "\n"


class _Lines:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.i = 0

    def next(self):
        while self.i < len(self.lines) and not self.lines[self.i].strip():
            self.i += 1
        if self.i >= len(self.lines):
            raise ParseError("unexpected end of model file", line=self.i + 1)
        self.i += 1
        return self.lines[self.i - 1].strip()

    def fail(self, msg):
        raise ParseError(msg, line=self.i)


def _read_matrix(src, label):
    if src.next() != f"{label}:":
        src.fail(f"expected block '{label}:'")
    try:
        rows, cols = (int(t) for t in src.next().split())
    except ValueError:
        src.fail(f"block {label}: expected 'rows cols'")
    m = np.empty((rows, cols), dtype=np.complex128)
    for r in range(rows):
        cells = src.next().split()
        if len(cells) != cols:
            src.fail(f"block {label}: row {r} has {len(cells)} entries, expected {cols}")
        try:
            for c, cell in enumerate(cells):
                re_s, im_s = cell.split(",")
                m[r, c] = complex(float(re_s), float(im_s))
        except ValueError:
            src.fail(f"block {label}: malformed entry {cell!r}")
    return m


def _read_field(src, key):
    line = src.next()
    if not line.startswith(f"{key}:"):
        src.fail(f"expected '{key}:' line")
    return line[len(key) + 1 :].strip()


def parse_model(text):
    src = _Lines(text)
    if src.next() != MAGIC:
        src.fail(f"missing {MAGIC} header")
    mode_s = _read_field(src, "mode")
    try:
        mode = Mode(mode_s)
    except ValueError:
        src.fail(f"unknown mode {mode_s!r}")
    try:
        threshold = float(_read_field(src, "threshold"))
    except ValueError:
        src.fail("threshold is not a number")
    mats = {attr: _read_matrix(src, label) for label, attr in _BLOCKS}
    try:
        return PerceptronModel(
            mode=mode,
            measurement_threshold=threshold,
            singular_values=svd_full(mats["raw_w"]).sigma,
            **mats,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def save_model(model, path):
    Path(path).write_text(format_model(model), encoding="utf-8")


def load_model(path):
    return parse_model(Path(path).read_text(encoding="utf-8"))

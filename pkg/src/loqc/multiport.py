"""Mode-transformation matrices and Fock-state evolution through them.

A passive linear network on N modes is described by an N x N unitary
acting on the mode creation operators. The convention fixed here (and
relied on by every regression test) is that evolution replaces the
creation operator of input mode k by the k-th *column* of the matrix:

    a_k+  ->  sum_l  L[l, k] a_l+

``evolve`` expands each input basis term as a product of such linear
forms applied to the vacuum and collects the resulting monomials. The
permanent-based ``permanent_amplitude`` computes single transition
amplitudes by an independent route and exists purely to cross-check
``evolve``.

All functions are pure; amplitude accumulation runs in a fixed order, so
results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .fock import FockState, Occupation, PRUNE_TOL, check_occupation

#: Maximum allowed deviation of L+L from the identity.
UNITARY_TOL = 1e-9

SQRT2 = math.sqrt(2.0)

_FACT = [math.factorial(n) for n in range(40)]


class ModeTransform:
    """An N x N unitary matrix acting on mode operators."""

    __slots__ = ("dim", "_m")

    def __init__(self, matrix: np.ndarray):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if not np.isfinite(m).all() or dev > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
        m.flags.writeable = False
        self.dim = m.shape[0]
        self._m = m

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def dagger(self) -> "ModeTransform":
        return ModeTransform(self._m.conj().T)

    def unitarity_deviation(self) -> float:
        return float(np.abs(self._m.conj().T @ self._m - np.eye(self.dim)).max())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ModeTransform(dim={self.dim})"


@dataclass
class ElementSpec:
    """One optical element and the circuit modes it touches.

    kind is one of "bs" (two-mode splitter, parameter eta), "ps"
    (single-mode phase, parameter delta), "gen3" (the parametrized
    three-mode family, three angles in radians) or "raw" (an explicit
    unitary block).
    """

    kind: str
    modes: tuple[int, ...]
    eta: float | None = None
    delta: float | None = None
    angles: tuple[float, float, float] | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.modes = tuple(int(m) for m in self.modes)
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"element modes must be distinct: {self.modes}")
        widths = {"bs": 2, "ps": 1, "gen3": 3}
        if self.kind in widths:
            if len(self.modes) != widths[self.kind]:
                raise ValueError(f"{self.kind} element takes exactly {widths[self.kind]} mode(s)")
        elif self.kind == "raw":
            if self.matrix is None or len(self.modes) != np.shape(self.matrix)[0]:
                raise ValueError("raw element needs a square matrix matching its mode count")
        else:
            raise ValueError(f"unknown element kind {self.kind!r}")

    @classmethod
    def bs(cls, i: int, j: int, eta: float) -> "ElementSpec":
        return cls("bs", (i, j), eta=float(eta))

    @classmethod
    def ps(cls, mode: int, delta: float) -> "ElementSpec":
        return cls("ps", (mode,), delta=float(delta))

    @classmethod
    def gen3(cls, i: int, j: int, k: int, t1: float, t2: float, t3: float) -> "ElementSpec":
        return cls("gen3", (i, j, k), angles=(float(t1), float(t2), float(t3)))

    @classmethod
    def raw(cls, modes: tuple[int, ...], matrix: np.ndarray) -> "ElementSpec":
        return cls("raw", tuple(modes), matrix=np.array(matrix, dtype=complex))

    def block(self) -> np.ndarray:
        """The element's own unitary block."""
        if self.kind == "bs":
            return beam_splitter(self.eta).matrix
        if self.kind == "ps":
            return np.array([[np.exp(1j * self.delta)]])
        if self.kind == "gen3":
            return general3(*self.angles).matrix
        return np.asarray(self.matrix)


def beam_splitter(eta: float) -> ModeTransform:
    """Two-mode splitter with reflectivity eta, asymmetric sign convention.

    Matrix [[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]]; the sign
    flip sits on the second mode's reflection. Other conventions (complex
    symmetric splitters) are intentionally not provided.
    """
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"reflectivity eta must lie in [0, 1], got {eta}")
    r = math.sqrt(eta)
    t = math.sqrt(1.0 - eta)
    return ModeTransform(np.array([[r, t], [t, -r]]))


def phase_shifter(delta: float) -> ModeTransform:
    """diag(e^{i delta}, 1): phase on the first of the two modes."""
    return ModeTransform(np.array([[np.exp(1j * float(delta)), 0], [0, 1]]))


def general3(theta1: float, theta2: float, theta3: float) -> ModeTransform:
    """The real three-mode family swept by the postcorrection searches.

    Equals the product of three two-mode rotations: one on modes (1,2) by
    theta3, a reflection-type splitter on modes (0,1) by theta2, then a
    rotation on modes (1,2) by theta1.
    """
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    c3, s3 = math.cos(theta3), math.sin(theta3)
    return ModeTransform(np.array([
        [-c2, s2 * c3, s2 * s3],
        [c1 * s2, s1 * s3 + c1 * c2 * c3, -s1 * c3 + c1 * c2 * s3],
        [s1 * s2, -c1 * s3 + s1 * c2 * c3, c1 * c3 + s1 * c2 * s3],
    ]))


def ns_matrix() -> ModeTransform:
    """Closed-form 3x3 matrix of the nonlinear sign-shift network.

    Mode 0 is the signal; modes 1 and 2 are the ancilla/detector modes.
    """
    u = 1.0 - SQRT2
    v = 2.0 ** -0.25
    w = math.sqrt(3.0 / SQRT2 - 2.0)
    return ModeTransform(np.array([
        [u, v, w],
        [v, 0.5, 0.5 - 1.0 / SQRT2],
        [w, 0.5 - 1.0 / SQRT2, SQRT2 - 0.5],
    ]))


#: Exact angles at which the three-rotation factorization of ``general3``
#: reproduces ``ns_matrix`` to machine precision (the printed circuit
#: angles 22.5 / 65.53 / 22.5 degrees are roundings of these).
NS_ANGLES = (math.pi / 8, math.acos(SQRT2 - 1.0), math.pi / 8)


def embed(element: ElementSpec, total_modes: int) -> ModeTransform:
    """Place an element's block on its target modes, identity elsewhere."""
    for m in element.modes:
        if not 0 <= m < total_modes:
            raise ValueError(f"element mode {m} out of range for {total_modes} modes")
    full = np.eye(total_modes, dtype=complex)
    idx = np.array(element.modes)
    full[np.ix_(idx, idx)] = element.block()
    return ModeTransform(full)


def compose(first: ModeTransform, then: ModeTransform) -> ModeTransform:
    """Composite transform of `first` followed by `then` (circuit order)."""
    if first.dim != then.dim:
        raise ValueError(f"dimension mismatch: {first.dim} vs {then.dim}")
    return ModeTransform(then.matrix @ first.matrix)


def compose_elements(elements: list[ElementSpec] | tuple[ElementSpec, ...], total_modes: int) -> ModeTransform:
    """Embed and compose a sequence of elements in circuit order."""
    total = ModeTransform(np.eye(total_modes))
    for el in elements:
        total = compose(total, embed(el, total_modes))
    return total


def evolve(state: FockState, transform: ModeTransform, prune_tol: float = PRUNE_TOL) -> FockState:
    """Send a Fock state through a linear network.

    Each basis term |n1 n2 ...> is rewritten as the corresponding product
    of creation-operator monomials; every operator of input mode k is
    replaced by the linear form given by column k of the matrix, the
    product is expanded, and monomials are converted back to occupation
    amplitudes. Total photon number is conserved term by term.
    """
    if state.num_modes != transform.dim:
        raise ValueError(f"state has {state.num_modes} modes, transform {transform.dim}")
    L = transform.matrix
    n_modes = transform.dim
    columns = [[(l, L[l, k]) for l in range(n_modes) if L[l, k] != 0] for k in range(n_modes)]
    out: dict[Occupation, complex] = {}
    zero = (0,) * n_modes
    for occ, amp in state.terms():
        poly: dict[Occupation, complex] = {zero: 1.0 + 0j}
        for k, n_k in enumerate(occ):
            for _ in range(n_k):
                nxt: dict[Occupation, complex] = {}
                for mono, coeff in poly.items():
                    for l, c in columns[k]:
                        key = mono[:l] + (mono[l] + 1,) + mono[l + 1:]
                        nxt[key] = nxt.get(key, 0j) + coeff * c
                poly = nxt
        pref = amp / math.sqrt(math.prod(_FACT[n] for n in occ))
        for mono, coeff in poly.items():
            out[mono] = out.get(mono, 0j) + pref * coeff * math.sqrt(math.prod(_FACT[m] for m in mono))
    if prune_tol > 0:
        out = {o: a for o, a in out.items() if abs(a) >= prune_tol}
    return FockState(n_modes, out)


def matrix_permanent(m: np.ndarray) -> complex:
    """Permanent by direct sum over permutations (small matrices only)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    rows = range(n)
    total = 0j
    for cols in permutations(rows):
        p = 1.0 + 0j
        for r, c in zip(rows, cols):
            p *= m[r, c]
        total += p
    return total


def permanent_amplitude(input_occ: Occupation, output_occ: Occupation, transform: ModeTransform) -> complex:
    """Transition amplitude <out|U|in> via the matrix permanent.

    Builds the submatrix that repeats column k of the transform once per
    input photon in mode k and row l once per output photon in mode l;
    the amplitude is per(sub)/sqrt(prod n_in! prod n_out!). Kept free of
    any shared code with ``evolve`` so the two can cross-check each other.
    """
    inp = check_occupation(input_occ, transform.dim)
    outp = check_occupation(output_occ, transform.dim)
    if sum(inp) != sum(outp):
        return 0j
    cols = [k for k, n in enumerate(inp) for _ in range(n)]
    rows = [l for l, n in enumerate(outp) for _ in range(n)]
    sub = transform.matrix[np.ix_(rows, cols)]
    norm = math.sqrt(math.prod(_FACT[n] for n in inp) * math.prod(_FACT[n] for n in outp))
    return complex(matrix_permanent(sub)) / norm

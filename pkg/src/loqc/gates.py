"""Named nondeterministic gate circuits and their evaluation.

The gallery:

* ``ns``           - nonlinear sign shift on one mode,
                     a|0> + b|1> + c|2>  ->  a|0> + b|1> - c|2>,
                     heralded by its two ancilla detectors, success 1/4.
* ``cs``           - conditional sign flip on two dual-rail qubits built
                     from two sign-shift cores between a splitter pair,
                     success 1/16.
* ``cnot_klm``     - the conditional sign flip conjugated by a balanced
                     splitter on the target rails, success 1/16.
* ``cnot_2photon`` - the six-mode two-photon coincidence-basis CNOT,
                     success 1/9 on coincidence detection.

A ``GateCircuit`` is an immutable description (ancilla preparation,
element list, outcome branches, computational modes); evaluation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .encodings import Encoding, decode, encode, logical_fidelity, qubit_gate
from .fock import FockState
from .measurement import (
    DetectionPattern,
    OutcomeBranch,
    postselect_branches,
    with_ancilla,
)
from .multiport import (
    ElementSpec,
    ModeTransform,
    SQRT2,
    compose_elements,
    evolve,
    ns_matrix,
)

GATE_NAMES = ("ns", "cs", "cnot_klm", "cnot_2photon")


@dataclass
class BranchOutcome:
    label: str
    probability: float
    conditional_state: FockState | None


@dataclass
class GateCircuit:
    """A postselected gate: network, ancilla preparation and branches."""

    name: str
    num_modes: int
    ancilla: dict[int, int]
    elements: list[ElementSpec]
    branches: list[OutcomeBranch]
    computational_modes: list[int]
    encoding: Encoding | None = None
    coincidence: bool = False

    def __post_init__(self) -> None:
        comp = set(self.computational_modes)
        if comp & set(self.ancilla):
            raise ValueError("ancilla and computational modes must be disjoint")
        if not self.branches:
            raise ValueError("a gate circuit needs at least one outcome branch")

    @cached_property
    def transform(self) -> ModeTransform:
        return compose_elements(self.elements, self.num_modes)

    def run(self, comp_state: FockState) -> list[BranchOutcome]:
        """Evolve a computational-mode input and evaluate every branch."""
        full = with_ancilla(comp_state, self.ancilla, self.num_modes)
        out = evolve(full, self.transform)
        results = []
        for branch, res in postselect_branches(out, self.branches):
            results.append(BranchOutcome(branch.label or branch.pattern.describe(),
                                         res.probability, res.conditional_state))
        return results


# -- circuit builders ---------------------------------------------------

def ns_gate() -> GateCircuit:
    """Sign-shift core: signal on mode 0, ancilla photon on mode 1."""
    return GateCircuit(
        name="ns",
        num_modes=3,
        ancilla={1: 1, 2: 0},
        elements=[ElementSpec.raw((0, 1, 2), ns_matrix().matrix)],
        branches=[OutcomeBranch(DetectionPattern({1: 1, 2: 0}), label="n1=1,n2=0")],
        computational_modes=[0],
    )


def _cs_elements() -> list[ElementSpec]:
    ns_m = ns_matrix().matrix
    return [
        ElementSpec.bs(1, 3, 0.5),
        ElementSpec.raw((1, 4, 5), ns_m),
        ElementSpec.raw((3, 6, 7), ns_m),
        ElementSpec.bs(1, 3, 0.5),  # the balanced splitter is an involution
    ]


_CS_ANCILLA = {4: 1, 5: 0, 6: 1, 7: 0}
_CS_BRANCH = OutcomeBranch(DetectionPattern({4: 1, 5: 0, 6: 1, 7: 0}), label="both cores fire")


def cs_gate() -> GateCircuit:
    """Conditional sign flip on two dual-rail qubits (modes 0..3).

    Qubit 0 lives on modes (0, 1), qubit 1 on modes (2, 3); logical 1
    puts the photon on the pair's second rail. A balanced splitter mixes
    the two logical-1 rails, a sign-shift core sits on each arm, and the
    splitter is undone. Success requires both cores to herald.
    """
    return GateCircuit(
        name="cs",
        num_modes=8,
        ancilla=dict(_CS_ANCILLA),
        elements=_cs_elements(),
        branches=[_CS_BRANCH],
        computational_modes=[0, 1, 2, 3],
        encoding=Encoding("dual_rail", 2),
    )


def cnot_from_cs() -> GateCircuit:
    """CNOT: the conditional sign flip between balanced splitters on the
    target qubit's rails (the dual-rail Hadamard)."""
    hadamard = ElementSpec.bs(2, 3, 0.5)
    return GateCircuit(
        name="cnot_klm",
        num_modes=8,
        ancilla=dict(_CS_ANCILLA),
        elements=[hadamard, *_cs_elements(), hadamard],
        branches=[_CS_BRANCH],
        computational_modes=[0, 1, 2, 3],
        encoding=Encoding("dual_rail", 2),
    )


def two_photon_cnot_matrix() -> ModeTransform:
    """The 6x6 unitary of the two-photon CNOT.

    Mode order (c_H, c_V, t_H, t_V, v_c, v_t): control pair, target pair,
    then the two unoccupied ancillary modes. Rows/columns encode how each
    output mode mixes the inputs; the matrix is symmetric, so the mode-
    operator convention drops out.
    """
    m = np.array([
        [1, 0, 0, 0, SQRT2, 0],
        [0, -1, 1, 1, 0, 0],
        [0, 1, 1, 0, 0, 1],
        [0, 1, 0, 1, 0, -1],
        [SQRT2, 0, 0, 0, -1, 0],
        [0, 0, 1, -1, 0, -1],
    ]) / math.sqrt(3.0)
    return ModeTransform(m)


def two_photon_cnot() -> GateCircuit:
    """Coincidence-basis CNOT on two polarization-encoded qubits.

    Success is heralded destructively: vacuum on both ancillary modes and
    exactly one photon per qubit pair (the coincidence condition), which
    the evaluator expresses as the branch probability times the logical
    fraction of the survivors.
    """
    return GateCircuit(
        name="cnot_2photon",
        num_modes=6,
        ancilla={4: 0, 5: 0},
        elements=[ElementSpec.raw((0, 1, 2, 3, 4, 5), two_photon_cnot_matrix().matrix)],
        branches=[OutcomeBranch(DetectionPattern({4: 0, 5: 0}), label="ancilla vacuum")],
        computational_modes=[0, 1, 2, 3],
        encoding=Encoding("polarization", 2),
        coincidence=True,
    )


def build_gate(name: str) -> GateCircuit:
    builders = {
        "ns": ns_gate,
        "cs": cs_gate,
        "cnot_klm": cnot_from_cs,
        "cnot_2photon": two_photon_cnot,
    }
    if name not in builders:
        raise ValueError(f"unknown gate {name!r}; choose from {GATE_NAMES}")
    return builders[name]()


# -- evaluation ----------------------------------------------------------

@dataclass
class GateInputResult:
    input_label: str
    branch_probabilities: dict[str, float]
    success_probability: float
    fidelity: float
    conditional: list[list[float]] = field(default_factory=list)  # [[re, im], ...]


@dataclass
class GateReport:
    gate: str
    inputs: list[GateInputResult]
    overall_success_probability: float
    sign_pattern: str | None = None


_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

_GATE_TARGETS = {"cs": _CZ, "cnot_klm": qubit_gate("CNOT"), "cnot_2photon": qubit_gate("CNOT")}


def _vec_to_pairs(vec: np.ndarray) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in vec]


def _eval_ns(circuit: GateCircuit, extra_inputs: list[tuple[str, np.ndarray]]) -> GateReport:
    inputs: list[tuple[str, np.ndarray]] = [
        ("|0>", np.array([1, 0, 0], dtype=complex)),
        ("|1>", np.array([0, 1, 0], dtype=complex)),
        ("|2>", np.array([0, 0, 1], dtype=complex)),
        ("(|0>+|1>+|2>)/sqrt3", np.ones(3, dtype=complex) / math.sqrt(3.0)),
    ] + extra_inputs
    target_map = np.diag([1.0, 1.0, -1.0]).astype(complex)
    rows = []
    signs = []
    for label, vec in inputs:
        state = FockState(1, {(k,): a for k, a in enumerate(vec) if a != 0})
        outcomes = circuit.run(state)
        probs = {o.label: o.probability for o in outcomes}
        success = sum(probs.values())
        cond = outcomes[0].conditional_state
        cond_vec = np.array([cond.amplitude((k,)) if cond else 0j for k in range(3)])
        target = target_map @ vec
        target /= np.linalg.norm(target)
        fid = logical_fidelity(target, cond_vec)
        rows.append(GateInputResult(label, probs, success, fid, _vec_to_pairs(cond_vec)))
        if label in ("|0>", "|1>", "|2>"):
            k = int(label[1])
            amp = cond_vec[k]
            signs.append("+" if amp.real >= 0 else "-")
    overall = sum(r.success_probability for r in rows) / len(rows)
    return GateReport("ns", rows, overall, sign_pattern="".join(signs))


def _eval_logical(circuit: GateCircuit, extra_inputs: list[tuple[str, np.ndarray]]) -> GateReport:
    enc = circuit.encoding
    target_u = _GATE_TARGETS[circuit.name]
    inputs: list[tuple[str, np.ndarray]] = []
    for index in range(enc.dim):
        bits = format(index, f"0{enc.num_qubits}b")
        vec = np.zeros(enc.dim, dtype=complex)
        vec[index] = 1.0
        inputs.append((f"|{bits}>", vec))
    inputs += extra_inputs
    rows = []
    for label, vec in inputs:
        state = encode(vec, enc)
        outcomes = circuit.run(state)
        probs = {o.label: o.probability for o in outcomes}
        cond = outcomes[0].conditional_state
        if cond is None:
            rows.append(GateInputResult(label, probs, 0.0, 0.0))
            continue
        logical, leakage = decode(cond, enc)
        if circuit.coincidence:
            success = sum(probs.values()) * (1.0 - leakage)
        else:
            success = sum(probs.values())
        target = target_u @ vec
        fid = logical_fidelity(target / np.linalg.norm(target), logical)
        rows.append(GateInputResult(label, probs, success, fid, _vec_to_pairs(logical)))
    overall = sum(r.success_probability for r in rows) / len(rows)
    return GateReport(circuit.name, rows, overall)


def evaluate_gate(name: str, extra_inputs: list[tuple[str, np.ndarray]] | None = None) -> GateReport:
    """Run a named gate over its logical basis (plus optional extras)."""
    circuit = build_gate(name)
    extras = extra_inputs or []
    if name == "ns":
        return _eval_ns(circuit, extras)
    return _eval_logical(circuit, extras)

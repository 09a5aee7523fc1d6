"""Command-line front end: circuit files, gate verification, searches.

Subcommands:

* ``simulate FILE``    - run a circuit description and report the outcome
  distribution, per-branch conditionals and success probability.
* ``verify-gate NAME`` - evaluate a gallery gate (ns, cs, cnot_klm,
  cnot_2photon) over its logical basis.
* ``search SCHEME``    - run a feasibility scan or the success optimizer
  (single_bs:case1, single_bs:case3, two_bs:case3, ns_in_ns:case1,
  optimize_ns).
* ``selftest``         - seeded randomized cross-checks of the simulator.

Circuit grammar (one directive per line, ``#`` starts a comment, ports
are numbered 1..N left to right):

    modes N
    input fock n1 n2 ... nN
    input dualrail a0 a1 ... a_{2^q-1}     # q qubits, complex literals
    bs I J eta=V        | bs I J theta=DEG  (eta = cos^2 theta)
    ps I delta=RAD
    gen3 I J K t1=RAD t2=RAD t3=RAD
    correction NAME <bs|ps|gen3 line>      # on surviving ports, 1-based
    detect P=C [P=C ...] [correct NAME]

Reports are JSON trees with fixed key order and floats printed at 10
significant digits (override with the LOQC_REPORT_DIGITS environment
variable); identical invocations produce byte-identical output. Exit
codes: 0 success, 1 diagnostics, 2 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .encodings import Encoding, encode
from .fock import FockState
from .gates import GATE_NAMES, evaluate_gate
from .measurement import (
    DetectionPattern,
    OutcomeBranch,
    outcome_distribution,
    postselect_branches,
)
from .multiport import ElementSpec, compose_elements, evolve
from .search import (
    ns_in_ns_feasibility,
    optimize_success,
    single_bs_infeasibility,
    two_bs_feasibility,
)

SEARCH_SCHEMES = ("single_bs:case1", "single_bs:case3", "two_bs:case3",
                  "ns_in_ns:case1", "optimize_ns")

DIGITS_ENV = "LOQC_REPORT_DIGITS"
DEFAULT_DIGITS = 10


class CliError(Exception):
    """A user-facing diagnostic (exit code 1)."""


@dataclass
class ParseError(Exception):
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


# -- circuit description files -------------------------------------------

@dataclass(frozen=True)
class CircuitElement:
    kind: str                    # "bs" | "ps" | "gen3"
    ports: tuple[int, ...]       # 1-based
    params: tuple[float, ...]    # canonical: bs=(eta,), ps=(delta,), gen3=(t1,t2,t3)

    def to_line(self) -> str:
        ports = " ".join(str(p) for p in self.ports)
        if self.kind == "bs":
            return f"bs {ports} eta={self.params[0]!r}"
        if self.kind == "ps":
            return f"ps {ports} delta={self.params[0]!r}"
        return ("gen3 {} t1={!r} t2={!r} t3={!r}"
                .format(ports, *self.params))

    def to_spec(self, ports_offset: int = 1) -> ElementSpec:
        modes = tuple(p - ports_offset for p in self.ports)
        if self.kind == "bs":
            return ElementSpec.bs(*modes, self.params[0])
        if self.kind == "ps":
            return ElementSpec.ps(modes[0], self.params[0])
        return ElementSpec.gen3(*modes, *self.params)


@dataclass(frozen=True)
class CircuitBranch:
    pattern: tuple[tuple[int, int], ...]  # ((port, count), ...) sorted
    correction: str | None = None

    def describe(self) -> str:
        return " ".join(f"{p}={c}" for p, c in self.pattern)

    def to_line(self) -> str:
        text = "detect " + self.describe()
        if self.correction is not None:
            text += f" correct {self.correction}"
        return text


@dataclass(frozen=True)
class CircuitFile:
    modes: int
    input_kind: str | None = None          # "fock" | "dualrail" | None
    input_values: tuple = ()
    elements: tuple[CircuitElement, ...] = ()
    corrections: tuple[tuple[str, CircuitElement], ...] = ()
    branches: tuple[CircuitBranch, ...] = ()

    def to_text(self) -> str:
        lines = [f"modes {self.modes}"]
        if self.input_kind == "fock":
            lines.append("input fock " + " ".join(str(n) for n in self.input_values))
        elif self.input_kind == "dualrail":
            lines.append("input dualrail " + " ".join(repr(a) for a in self.input_values))
        lines.extend(el.to_line() for el in self.elements)
        lines.extend(f"correction {name} {el.to_line()}" for name, el in self.corrections)
        lines.extend(b.to_line() for b in self.branches)
        return "\n".join(lines) + "\n"

    def correction_elements(self, name: str) -> list[CircuitElement]:
        return [el for n, el in self.corrections if n == name]


_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[str, int]]:
    """(token, 1-based column) pairs; text after '#' is a comment."""
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_float(tok: str, lineno: int, col: int, what: str) -> float:
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(lineno, col, f"invalid {what}: {tok!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, col, f"{what} must be finite, got {tok!r}")
    return value


def _parse_int(tok: str, lineno: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, col, f"invalid {what}: {tok!r}") from None


def _parse_kv(tok: str, lineno: int, col: int, key: str) -> float:
    if "=" not in tok:
        raise ParseError(lineno, col, f"expected {key}=<value>, got {tok!r}")
    name, _, raw = tok.partition("=")
    if name != key:
        raise ParseError(lineno, col, f"expected parameter {key!r}, got {name!r}")
    return _parse_float(raw, lineno, col + len(name) + 1, key)


def _parse_port(tok: str, lineno: int, col: int, modes: int) -> int:
    port = _parse_int(tok, lineno, col, "port")
    if not 1 <= port <= modes:
        raise ParseError(lineno, col, f"port {port} out of range 1..{modes}")
    return port


def _parse_element(tokens: list[tuple[str, int]], lineno: int, modes: int) -> CircuitElement:
    kind = tokens[0][0]
    want_ports = {"bs": 2, "ps": 1, "gen3": 3}[kind]
    if len(tokens) < 1 + want_ports:
        raise ParseError(lineno, tokens[0][1], f"{kind} needs {want_ports} port(s)")
    ports = tuple(
        _parse_port(tok, lineno, col, modes) for tok, col in tokens[1:1 + want_ports]
    )
    if len(set(ports)) != len(ports):
        raise ParseError(lineno, tokens[1][1], f"{kind} ports must be distinct")
    rest = tokens[1 + want_ports:]
    if kind == "bs":
        if len(rest) != 1:
            raise ParseError(lineno, tokens[0][1], "bs takes exactly one of eta= or theta=")
        tok, col = rest[0]
        if tok.startswith("eta="):
            eta = _parse_kv(tok, lineno, col, "eta")
            if not 0.0 <= eta <= 1.0:
                raise ParseError(lineno, col, f"eta must lie in [0, 1], got {eta}")
        elif tok.startswith("theta="):
            theta_deg = _parse_kv(tok, lineno, col, "theta")
            eta = math.cos(math.radians(theta_deg)) ** 2
        else:
            raise ParseError(lineno, col, f"expected eta= or theta=, got {tok!r}")
        return CircuitElement("bs", ports, (eta,))
    if kind == "ps":
        if len(rest) != 1:
            raise ParseError(lineno, tokens[0][1], "ps takes exactly delta=<radians>")
        tok, col = rest[0]
        return CircuitElement("ps", ports, (_parse_kv(tok, lineno, col, "delta"),))
    if len(rest) != 3:
        raise ParseError(lineno, tokens[0][1], "gen3 takes t1= t2= t3= (radians)")
    angles = tuple(
        _parse_kv(tok, lineno, col, f"t{i + 1}") for i, (tok, col) in enumerate(rest)
    )
    return CircuitElement("gen3", ports, angles)


def parse_circuit(text: str) -> CircuitFile:
    """Parse a circuit description; every failure is a positioned error."""
    modes: int | None = None
    input_kind: str | None = None
    input_values: tuple = ()
    elements: list[CircuitElement] = []
    corrections: list[tuple[str, CircuitElement]] = []
    correction_lines: dict[str, int] = {}
    branches: list[CircuitBranch] = []
    branch_lines: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokens(raw)
        if not tokens:
            continue
        head, head_col = tokens[0]

        if head == "modes":
            if modes is not None:
                raise ParseError(lineno, head_col, "duplicate modes declaration")
            if len(tokens) != 2:
                raise ParseError(lineno, head_col, "usage: modes N")
            n = _parse_int(tokens[1][0], lineno, tokens[1][1], "mode count")
            if n < 1:
                raise ParseError(lineno, tokens[1][1], "mode count must be positive")
            modes = n
            continue

        if modes is None:
            raise ParseError(lineno, head_col, "modes must be declared before any other directive")

        if head == "input":
            if input_kind is not None:
                raise ParseError(lineno, head_col, "duplicate input declaration")
            if len(tokens) < 2:
                raise ParseError(lineno, head_col, "usage: input fock|dualrail <values>")
            kind = tokens[1][0]
            values = tokens[2:]
            if kind == "fock":
                if len(values) != modes:
                    raise ParseError(lineno, tokens[1][1],
                                     f"input fock needs {modes} occupation number(s)")
                occ = []
                for tok, col in values:
                    n = _parse_int(tok, lineno, col, "occupation")
                    if n < 0:
                        raise ParseError(lineno, col, "occupations must be non-negative")
                    occ.append(n)
                input_kind, input_values = "fock", tuple(occ)
            elif kind == "dualrail":
                count = len(values)
                if count == 0 or count & (count - 1):
                    raise ParseError(lineno, tokens[1][1],
                                     "input dualrail needs 2^q amplitudes")
                qubits = count.bit_length() - 1
                if 2 * qubits != modes:
                    raise ParseError(lineno, tokens[1][1],
                                     f"{count} amplitudes encode {qubits} qubit(s) "
                                     f"needing {2 * qubits} modes, file declares {modes}")
                amps = []
                for tok, col in values:
                    try:
                        a = complex(tok)
                    except ValueError:
                        raise ParseError(lineno, col, f"invalid amplitude: {tok!r}") from None
                    if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                        raise ParseError(lineno, col, "amplitudes must be finite")
                    amps.append(a)
                norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
                if abs(norm - 1.0) > 1e-6:
                    raise ParseError(lineno, tokens[1][1],
                                     f"amplitudes are not normalized (norm {norm:.6f})")
                input_kind, input_values = "dualrail", tuple(amps)
            else:
                raise ParseError(lineno, tokens[1][1],
                                 f"unknown input kind {kind!r} (use fock or dualrail)")
            continue

        if head in ("bs", "ps", "gen3"):
            elements.append(_parse_element(tokens, lineno, modes))
            continue

        if head == "correction":
            if len(tokens) < 3:
                raise ParseError(lineno, head_col, "usage: correction NAME <element line>")
            name = tokens[1][0]
            if tokens[2][0] not in ("bs", "ps", "gen3"):
                raise ParseError(lineno, tokens[2][1],
                                 f"correction element must be bs, ps or gen3, got {tokens[2][0]!r}")
            # ports inside a correction refer to surviving-mode positions;
            # range is rechecked per referencing branch below
            el = _parse_element(tokens[2:], lineno, modes)
            corrections.append((name, el))
            correction_lines.setdefault(name, lineno)
            continue

        if head == "detect":
            body = tokens[1:]
            correction_name: str | None = None
            pairs: list[tuple[int, int]] = []
            i = 0
            while i < len(body):
                tok, col = body[i]
                if tok == "correct":
                    if i + 1 >= len(body):
                        raise ParseError(lineno, col, "correct needs a correction name")
                    correction_name = body[i + 1][0]
                    if i + 2 != len(body):
                        raise ParseError(lineno, body[i + 2][1],
                                         "correct NAME must end the detect line")
                    break
                if "=" not in tok:
                    raise ParseError(lineno, col, f"expected PORT=COUNT, got {tok!r}")
                port_s, _, count_s = tok.partition("=")
                port = _parse_port(port_s, lineno, col, modes)
                count = _parse_int(count_s, lineno, col + len(port_s) + 1, "photon count")
                if count < 0:
                    raise ParseError(lineno, col, "photon counts must be non-negative")
                pairs.append((port, count))
                i += 1
            if not pairs:
                raise ParseError(lineno, head_col, "detect needs at least one PORT=COUNT")
            if len({p for p, _ in pairs}) != len(pairs):
                raise ParseError(lineno, head_col, "detect ports must be distinct")
            if len(pairs) >= modes:
                raise ParseError(lineno, head_col,
                                 "detect must leave at least one surviving port")
            if correction_name is not None and correction_name != "identity":
                if correction_name not in correction_lines:
                    raise ParseError(lineno, head_col,
                                     f"unknown correction {correction_name!r}")
            branches.append(CircuitBranch(tuple(sorted(pairs)), correction_name))
            branch_lines.append(lineno)
            continue

        raise ParseError(lineno, head_col, f"unknown directive {head!r}")

    if modes is None:
        raise ParseError(1, 1, "missing modes declaration")

    circ = CircuitFile(
        modes=modes,
        input_kind=input_kind,
        input_values=input_values,
        elements=tuple(elements),
        corrections=tuple(corrections),
        branches=tuple(branches),
    )

    # corrections act on surviving ports: recheck ranges per referencing branch
    for branch, lineno in zip(circ.branches, branch_lines):
        if branch.correction in (None, "identity"):
            continue
        surviving = modes - len(branch.pattern)
        for name, el in circ.corrections:
            if name != branch.correction:
                continue
            bad = [p for p in el.ports if p > surviving]
            if bad:
                raise ParseError(
                    correction_lines[name], 1,
                    f"correction {name!r} uses port {bad[0]} but branch "
                    f"'{branch.describe()}' leaves only {surviving} surviving port(s)")
    return circ


# -- report assembly -------------------------------------------------------

def _fmt_counts(counts) -> str:
    return ",".join(str(n) for n in counts)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _build_input_state(circ: CircuitFile) -> FockState:
    if circ.input_kind is None:
        raise CliError("circuit file has no input declaration")
    if circ.input_kind == "fock":
        return FockState.from_occupation(circ.input_values)
    qubits = len(circ.input_values).bit_length() - 1
    return encode(np.array(circ.input_values, dtype=complex), Encoding("dual_rail", qubits))


def _branch_to_outcome(circ: CircuitFile, branch: CircuitBranch) -> OutcomeBranch:
    pattern = DetectionPattern({p - 1: c for p, c in branch.pattern})
    correction = None
    if branch.correction not in (None, "identity"):
        surviving = circ.modes - len(branch.pattern)
        specs = [el.to_spec() for el in circ.correction_elements(branch.correction)]
        correction = compose_elements(specs, surviving)
    return OutcomeBranch(pattern, correction, label=branch.describe())


def simulate_report(circ: CircuitFile, source_text: str) -> dict:
    state = _build_input_state(circ)
    if state.num_modes != circ.modes:
        raise CliError(f"input state spans {state.num_modes} modes, file declares {circ.modes}")
    transform = compose_elements([el.to_spec() for el in circ.elements], circ.modes)
    out = evolve(state, transform)

    if circ.branches:
        measured = sorted({p - 1 for b in circ.branches for p, _ in b.pattern})
    else:
        measured = list(range(circ.modes))
    dist = outcome_distribution(out, measured)
    outcomes = {_fmt_counts(k): v for k, v in sorted(dist.items())}

    report = {
        "tool": {"name": "loqc", "version": __version__},
        "command": "simulate",
        "input": {
            "digest": "sha256:" + hashlib.sha256(source_text.encode()).hexdigest(),
            "modes": circ.modes,
            "mode_order": "ports 1..N left to right; internal indices are ports minus 1",
        },
        "measured_ports": [m + 1 for m in measured],
        "outcomes": outcomes,
    }

    if circ.branches:
        try:
            evaluated = postselect_branches(out, [_branch_to_outcome(circ, b) for b in circ.branches])
        except ValueError as exc:
            raise CliError(str(exc)) from None
        rows = []
        total = 0.0
        for circuit_branch, (branch, res) in zip(circ.branches, evaluated):
            total += res.probability
            surviving_ports = [p for p in range(1, circ.modes + 1)
                               if p not in {q for q, _ in circuit_branch.pattern}]
            conditional = {}
            if res.conditional_state is not None:
                for occ, amp in res.conditional_state.terms():
                    conditional[_fmt_counts(occ)] = _pair(amp)
            rows.append({
                "pattern": circuit_branch.describe(),
                "correction": circuit_branch.correction or "identity",
                "probability": res.probability,
                "surviving_ports": surviving_ports,
                "conditional": conditional,
            })
        report["branches"] = rows
        report["success_probability"] = total
    return report


def gate_report(name: str) -> dict:
    if name not in GATE_NAMES:
        raise CliError(f"unknown gate {name!r}; choose from {', '.join(GATE_NAMES)}")
    rep = evaluate_gate(name)
    payload = {
        "tool": {"name": "loqc", "version": __version__},
        "command": "verify-gate",
        "input": {
            "digest": "sha256:" + hashlib.sha256(name.encode()).hexdigest(),
            "gate": name,
            "mode_order": "ports 1..N left to right; dual-rail qubit q uses ports 2q+1, 2q+2 "
                          "with the photon on the first port encoding logical 0",
        },
        "gate": rep.gate,
        "overall_success_probability": rep.overall_success_probability,
    }
    if rep.sign_pattern is not None:
        payload["sign_pattern"] = rep.sign_pattern
    payload["inputs"] = [
        {
            "input": row.input_label,
            "branch_probabilities": dict(row.branch_probabilities),
            "success_probability": row.success_probability,
            "fidelity": row.fidelity,
            "conditional": row.conditional,
        }
        for row in rep.inputs
    ]
    return payload


def search_report(scheme: str, grid_step: float | None, tolerance: float | None) -> dict:
    if scheme not in SEARCH_SCHEMES:
        raise CliError(f"unknown search scheme {scheme!r}; choose from {', '.join(SEARCH_SCHEMES)}")
    if grid_step is not None and grid_step <= 0:
        raise CliError("--grid-step must be positive")
    if tolerance is not None and tolerance <= 0:
        raise CliError("--tolerance must be positive")
    kwargs = {}
    if tolerance is not None:
        kwargs["tolerance"] = tolerance

    if scheme.startswith("single_bs:"):
        case = int(scheme[-1])
        step = grid_step if grid_step is not None else 1e-2
        records = [
            single_bs_infeasibility(case, step, target=target, **kwargs).to_record()
            for target in ("sign_flip", "restore")
        ]
    elif scheme == "two_bs:case3":
        step = grid_step if grid_step is not None else 1e-2
        records = [two_bs_feasibility(3, step, **kwargs).to_record()]
    elif scheme == "ns_in_ns:case1":
        step = grid_step if grid_step is not None else 2e-2
        records = [ns_in_ns_feasibility(1, (2, 0), step, **kwargs).to_record()]
    else:  # optimize_ns
        step = grid_step if grid_step is not None else 0.05
        records = [optimize_success("ns_sign_flip", step).to_record()]

    request = f"{scheme}|grid_step={grid_step}|tolerance={tolerance}"
    return {
        "tool": {"name": "loqc", "version": __version__},
        "command": "search",
        "input": {"digest": "sha256:" + hashlib.sha256(request.encode()).hexdigest(),
                  "scheme": scheme},
        "reports": records,
    }


def selftest_report(seed: int) -> dict:
    from .multiport import ModeTransform, permanent_amplitude
    from .encodings import SCHEMES, decode, zy_decompose
    from .search import closed_form_amplitudes, parametrized_ns_amplitudes

    rng = np.random.default_rng(seed)
    checks = []

    def record(name: str, deviation: float, tol: float):
        checks.append({"name": name, "max_deviation": deviation,
                       "tolerance": tol, "passed": bool(deviation <= tol)})

    def random_unitary(dim: int) -> np.ndarray:
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        return q * (d / np.abs(d))

    dev = 0.0
    for _ in range(10):
        t = ModeTransform(random_unitary(3))
        occs = [(2, 0, 1), (1, 1, 0), (0, 0, 3), (1, 1, 1)]
        for inp in occs:
            out = evolve(FockState.from_occupation(inp), t, prune_tol=0.0)
            for outp in occs:
                if sum(outp) != sum(inp):
                    continue
                dev = max(dev, abs(out.amplitude(outp) - permanent_amplitude(inp, outp, t)))
    record("evolve vs permanent oracle", dev, 1e-10)

    dev = 0.0
    for _ in range(20):
        t = ModeTransform(random_unitary(3))
        amps = {tuple(rng.integers(0, 3, 3)): complex(*rng.normal(size=2)) for _ in range(4)}
        state = FockState(3, amps)
        if state.norm() == 0:
            continue
        dev = max(dev, abs(evolve(state, t).norm() - state.norm()))
    record("norm conservation", dev, 1e-9)

    dev = 0.0
    for scheme in SCHEMES:
        enc = Encoding(scheme, 2)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        w, leak = decode(encode(v, enc), enc)
        dev = max(dev, float(np.abs(w - v).max()), leak)
    record("encode/decode round trip", dev, 1e-9)

    dev = 0.0
    for _ in range(25):
        u = random_unitary(2)
        dec = zy_decompose(u)
        dev = max(dev, float(np.abs(dec.rotation_product() - u).max()))
    record("zy reconstruction", dev, 1e-9)

    dev = 0.0
    for _ in range(25):
        angles = tuple(rng.uniform(0, 2 * math.pi, 3))
        sim = parametrized_ns_amplitudes(angles)
        for key, val in closed_form_amplitudes(angles).items():
            dev = max(dev, abs(sim[key] - val))
    record("closed forms vs simulator", dev, 1e-10)

    return {
        "tool": {"name": "loqc", "version": __version__},
        "command": "selftest",
        "seed": seed,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


# -- output formatting -----------------------------------------------------

def _report_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError:
        raise CliError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= digits <= 17:
        raise CliError(f"{DIGITS_ENV} must lie in 1..17, got {digits}")
    return digits


def _quantize(obj, digits: int):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _quantize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_quantize(v, digits) for v in obj]
    return obj


def render_report(report: dict, pretty: bool = False) -> str:
    report = _quantize(report, _report_digits())
    if not pretty:
        return json.dumps(report, separators=(",", ":"))
    return _render_pretty(report)


def _render_pretty(report: dict) -> str:
    lines = [f"loqc {report['tool']['version']} - {report['command']}"]

    def walk(obj, indent: int, label: str | None = None):
        pad = "  " * indent
        if isinstance(obj, dict):
            if label:
                lines.append(f"{pad}{label}:")
            for k, v in obj.items():
                walk(v, indent + (1 if label else 0), str(k))
        elif isinstance(obj, list):
            if label:
                lines.append(f"{pad}{label}:")
            for i, v in enumerate(obj):
                walk(v, indent + (1 if label else 0), f"[{i}]")
        else:
            lines.append(f"{pad}{label}: {obj}")

    for key, value in report.items():
        if key in ("tool", "command"):
            continue
        walk(value, 0, str(key))
    return "\n".join(lines)


# -- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # diagnostics, not usage-exit(2)
        raise CliError(message)


def _make_parser() -> _Parser:
    parser = _Parser(prog="loqc", description="postselected linear-optics simulator")
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = parser.add_subparsers(dest="subcommand")

    p_sim = sub.add_parser("simulate", help="run a circuit description file")
    p_sim.add_argument("file")

    p_gate = sub.add_parser("verify-gate", help="evaluate a gallery gate")
    p_gate.add_argument("name", choices=GATE_NAMES)

    p_search = sub.add_parser("search", help="feasibility scans and optimization")
    p_search.add_argument("scheme", choices=SEARCH_SCHEMES)
    p_search.add_argument("--grid-step", type=float, default=None)
    p_search.add_argument("--tolerance", type=float, default=None)

    p_self = sub.add_parser("selftest", help="seeded randomized cross-checks")
    p_self.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise CliError("a subcommand is required (simulate, verify-gate, search, selftest)")
        if args.subcommand == "simulate":
            try:
                text = Path(args.file).read_text(encoding="utf-8")
            except OSError as exc:
                raise CliError(f"cannot read {args.file}: {exc.strerror or exc}") from None
            try:
                circ = parse_circuit(text)
            except ParseError as exc:
                raise CliError(f"{args.file}:{exc.line}:{exc.column}: {exc.message}") from None
            report = simulate_report(circ, text)
        elif args.subcommand == "verify-gate":
            report = gate_report(args.name)
        elif args.subcommand == "search":
            report = search_report(args.scheme, args.grid_step, args.tolerance)
        else:
            report = selftest_report(args.seed)
        print(render_report(report, pretty=args.pretty))
        if args.subcommand == "selftest" and not report["passed"]:
            return 1
        return 0
    except CliError as exc:
        print(f"loqc: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"loqc: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

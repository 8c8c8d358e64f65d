"""Circuit programs: text grammar, parsing diagnostics, and execution.

Grammar (line oriented, `#` starts a comment, indices 0-based):

    dim <d>
    qudits <n>
    S <q> | F <q> | Finv <q> | M <q> <a> | CZ <q1> <q2> | CX <ctrl> <tgt>
    SWAP <q1> <q2>
    W <q...> z=<list> x=<list> [t=<phase>]
    measure z <q> -> <name>
    measure w z=<list> x=<list> [delta=<int>] -> <name>

Any gate or measurement line may end in `if <name>=<k>`, conditioning on an
earlier measurement record. `measure w` lists are full-width (length n).

Execution modes: `enumerate` walks every branch (probabilities are exact
Fractions), `sample` draws one trajectory per shot, `fixed` pins every
record. The dense reference backend can be asked to cross-check each
trajectory's post-measurement state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .clifford import GateSpec, apply as apply_conjugation, gate_tableau
from .measurement import (
    OutcomeCoset,
    UnsupportedOutcomeError,
    measure_pauli,
)
from .modmath import RingParams, mod_inverse, ring_params
from .tableau import StabilizerTableau, standard_basis_tableau
from .weyl import PauliVector


class ResourceLimitError(Exception):
    """Branch enumeration exceeded the configured cap."""


@dataclass(frozen=True)
class Diagnostic:
    line: int
    code: str  # syntax | index-range | non-unit | undefined-record |
    #            duplicate-record | missing-header
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.code}: {self.message}"


@dataclass(frozen=True)
class Instruction:
    op: str  # "gate" | "measure"
    line: int
    gate: GateSpec | None = None
    record: str | None = None
    mz_qudit: int | None = None  # set for `measure z`
    mw_z: tuple[int, ...] = ()
    mw_x: tuple[int, ...] = ()
    delta: int = 0
    condition: tuple[str, int] | None = None

    def pauli_vector(self, ring: RingParams, n: int) -> PauliVector:
        if self.mz_qudit is not None:
            v = [0] * (2 * n)
            v[self.mz_qudit] = 1
            return PauliVector(0, tuple(v), ring)
        return PauliVector(self.delta, self.mw_z + self.mw_x, ring)

    def pauli(self, ring: RingParams, n: int):
        """Dense-backend view of the measured operator."""
        return self.pauli_vector(ring, n).to_phased()


@dataclass(frozen=True)
class CircuitProgram:
    ring: RingParams
    n: int
    instructions: tuple[Instruction, ...]
    records: tuple[str, ...] = ()  # declaration order


# ---------------------------------------------------------------------------
# Parsing.
# ---------------------------------------------------------------------------


def _parse_int_list(text: str):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        return None


def parse_program(text: str):
    """(program | None, diagnostics). The program is None iff errors exist."""
    diags: list[Diagnostic] = []
    lines = []
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((i, stripped))

    def err(line, code, msg):
        diags.append(Diagnostic(line, code, msg))

    d = n = None
    body_start = 0
    for want in ("dim", "qudits"):
        if body_start >= len(lines):
            err(len(lines) + 1 if lines else 1, "missing-header",
                f"expected `{want} <int>` header")
            return None, diags
        lno, line = lines[body_start]
        parts = line.split()
        if len(parts) != 2 or parts[0] != want or not parts[1].isdigit():
            err(lno, "missing-header", f"expected `{want} <int>`, got {line!r}")
            return None, diags
        if want == "dim":
            d = int(parts[1])
            if d < 2:
                err(lno, "syntax", f"dimension must be >= 2, got {d}")
                return None, diags
        else:
            n = int(parts[1])
            if n < 1:
                err(lno, "syntax", f"qudit count must be >= 1, got {n}")
                return None, diags
        body_start += 1
    ring = ring_params(d)

    instructions: list[Instruction] = []
    records: list[str] = []

    def check_qudit(lno, q):
        if not 0 <= q < n:
            err(lno, "index-range", f"qudit index {q} out of range [0, {n})")
            return False
        return True

    def parse_condition(lno, parts):
        """Strip a trailing `if name=k`; returns (parts, condition | None)."""
        if "if" not in parts:
            return parts, None
        pos = parts.index("if")
        tail = parts[pos + 1 :]
        if len(tail) != 1 or "=" not in tail[0]:
            err(lno, "syntax", "conditional must be `if <name>=<k>`")
            return parts[:pos], None
        name, _, val = tail[0].partition("=")
        if name not in records:
            err(lno, "undefined-record", f"record {name!r} not defined yet")
            return parts[:pos], None
        try:
            k = int(val)
        except ValueError:
            err(lno, "syntax", f"conditional value {val!r} is not an integer")
            return parts[:pos], None
        if not 0 <= k < d:
            err(lno, "index-range", f"conditional value {k} out of range [0, {d})")
            return parts[:pos], None
        return parts[:pos], (name, k)

    for lno, line in lines[body_start:]:
        parts, cond = parse_condition(lno, line.split())
        if not parts:
            err(lno, "syntax", "empty instruction")
            continue
        head = parts[0]
        if head in ("S", "F", "Finv"):
            if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                err(lno, "syntax", f"usage: {head} <q>")
                continue
            q = int(parts[1])
            if not check_qudit(lno, q):
                continue
            instructions.append(
                Instruction("gate", lno, gate=GateSpec(head, (q,)), condition=cond)
            )
        elif head == "M":
            if len(parts) != 3:
                err(lno, "syntax", "usage: M <q> <a>")
                continue
            try:
                q, a = int(parts[1]), int(parts[2])
            except ValueError:
                err(lno, "syntax", "usage: M <q> <a>")
                continue
            if not check_qudit(lno, q):
                continue
            if mod_inverse(a % d, d) is None:
                err(lno, "non-unit", f"multiplier {a} is not a unit mod {d}")
                continue
            instructions.append(
                Instruction("gate", lno, gate=GateSpec("M", (q,), a=a % d), condition=cond)
            )
        elif head in ("CZ", "CX", "SWAP"):
            if len(parts) != 3:
                err(lno, "syntax", f"usage: {head} <q1> <q2>")
                continue
            try:
                q1, q2 = int(parts[1]), int(parts[2])
            except ValueError:
                err(lno, "syntax", f"usage: {head} <q1> <q2>")
                continue
            if not (check_qudit(lno, q1) and check_qudit(lno, q2)):
                continue
            if q1 == q2:
                err(lno, "index-range", f"{head} needs two distinct qudits")
                continue
            instructions.append(
                Instruction("gate", lno, gate=GateSpec(head, (q1, q2)), condition=cond)
            )
        elif head == "W":
            qudits = []
            kw = {}
            bad = False
            for tok in parts[1:]:
                if "=" in tok:
                    key, _, val = tok.partition("=")
                    kw[key] = val
                elif tok.lstrip("-").isdigit():
                    qudits.append(int(tok))
                else:
                    bad = True
            if bad or not qudits or "z" not in kw or "x" not in kw:
                err(lno, "syntax", "usage: W <q...> z=<list> x=<list> [t=<phase>]")
                continue
            zexp = _parse_int_list(kw["z"])
            xexp = _parse_int_list(kw["x"])
            if zexp is None or xexp is None or len(zexp) != len(qudits) or len(
                xexp
            ) != len(qudits):
                err(lno, "syntax", "W exponent lists must match the qudit list")
                continue
            try:
                tphase = int(kw.get("t", "0"))
            except ValueError:
                err(lno, "syntax", f"bad t= value {kw['t']!r}")
                continue
            if len(set(qudits)) != len(qudits):
                err(lno, "index-range", "W qudit list has duplicates")
                continue
            if not all(check_qudit(lno, q) for q in qudits):
                continue
            gate = GateSpec(
                "W",
                tuple(qudits),
                zexp=tuple(zexp),
                xexp=tuple(xexp),
                tphase=tphase,
            )
            instructions.append(Instruction("gate", lno, gate=gate, condition=cond))
        elif head == "measure":
            if cond is not None:
                err(lno, "syntax", "measurements cannot be conditional")
                continue
            if len(parts) < 2 or parts[1] not in ("z", "w"):
                err(lno, "syntax", "usage: measure z|w ... -> <name>")
                continue
            if "->" not in parts or parts.index("->") != len(parts) - 2:
                err(lno, "syntax", "measurement must end in `-> <name>`")
                continue
            name = parts[-1]
            mid = parts[2:-2]
            if name in records:
                err(lno, "duplicate-record", f"record {name!r} already defined")
                continue
            if parts[1] == "z":
                if len(mid) != 1 or not mid[0].lstrip("-").isdigit():
                    err(lno, "syntax", "usage: measure z <q> -> <name>")
                    continue
                q = int(mid[0])
                if not check_qudit(lno, q):
                    continue
                records.append(name)
                instructions.append(
                    Instruction("measure", lno, record=name, mz_qudit=q, condition=cond)
                )
            else:
                kw = {}
                bad = False
                for tok in mid:
                    if "=" not in tok:
                        bad = True
                        continue
                    key, _, val = tok.partition("=")
                    kw[key] = val
                if bad or "z" not in kw or "x" not in kw:
                    err(lno, "syntax",
                        "usage: measure w z=<list> x=<list> [delta=<int>] -> <name>")
                    continue
                zv = _parse_int_list(kw["z"])
                xv = _parse_int_list(kw["x"])
                if zv is None or xv is None or len(zv) != n or len(xv) != n:
                    err(lno, "syntax", f"measure w lists must have length {n}")
                    continue
                try:
                    delta = int(kw.get("delta", "0"))
                except ValueError:
                    err(lno, "syntax", f"bad delta= value {kw['delta']!r}")
                    continue
                records.append(name)
                instructions.append(
                    Instruction(
                        "measure",
                        lno,
                        record=name,
                        mw_z=tuple(zv),
                        mw_x=tuple(xv),
                        delta=delta % d,
                        condition=cond,
                    )
                )
        else:
            err(lno, "syntax", f"unknown instruction {head!r}")
    if diags:
        return None, diags
    program = CircuitProgram(ring, n, tuple(instructions), tuple(records))
    return program, []


# ---------------------------------------------------------------------------
# Execution.
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    outcomes: dict[str, int]
    probability: Fraction
    cosets: dict[str, OutcomeCoset] = field(default_factory=dict)
    tableau: StabilizerTableau | None = None


def _initial_tableau(program: CircuitProgram) -> StabilizerTableau:
    return standard_basis_tableau((0,) * program.n, program.ring)


def _run_branching(program: CircuitProgram, fix: dict, branch_cap: int):
    """All trajectories compatible with the (possibly partial) pinning."""
    branches = [Trajectory({}, Fraction(1), {}, _initial_tableau(program))]
    for inst in program.instructions:
        nxt: list[Trajectory] = []
        for br in branches:
            if inst.condition is not None:
                name, want = inst.condition
                if br.outcomes[name] != want:
                    nxt.append(br)
                    continue
            if inst.op == "gate":
                U = gate_tableau(inst.gate, program.n, program.ring)
                br.tableau = apply_conjugation(U, br.tableau)
                nxt.append(br)
                continue
            p = inst.pauli_vector(program.ring, program.n)
            if inst.record in fix:
                post, rec = measure_pauli(br.tableau, p, fix=fix[inst.record])
                outs = [(post, rec)]
            else:
                from .measurement import terminal_distribution

                dist = terminal_distribution(br.tableau, p)
                outs = [
                    measure_pauli(br.tableau, p, fix=h)
                    for h in dist.coset.members(program.ring.d)
                ]
            for post, rec in outs:
                t2 = Trajectory(
                    dict(br.outcomes),
                    br.probability * rec.probability,
                    dict(br.cosets),
                    post,
                )
                t2.outcomes[inst.record] = rec.outcome
                t2.cosets[inst.record] = rec.coset
                nxt.append(t2)
            if len(nxt) > branch_cap:
                raise ResourceLimitError(
                    f"branch count exceeded cap of {branch_cap}"
                )
        branches = nxt
    order = list(program.records)
    branches.sort(key=lambda tr: tuple(tr.outcomes.get(r, -1) for r in order))
    return branches


def _run_sample(program: CircuitProgram, shots: int, seed: int):
    out = []
    for shot in range(shots):
        rng = random.Random(f"{seed}:{shot}")
        tr = Trajectory({}, Fraction(1), {}, _initial_tableau(program))
        for inst in program.instructions:
            if inst.condition is not None:
                name, want = inst.condition
                if tr.outcomes[name] != want:
                    continue
            if inst.op == "gate":
                U = gate_tableau(inst.gate, program.n, program.ring)
                tr.tableau = apply_conjugation(U, tr.tableau)
                continue
            p = inst.pauli_vector(program.ring, program.n)
            tr.tableau, rec = measure_pauli(tr.tableau, p, rng=rng)
            tr.outcomes[inst.record] = rec.outcome
            tr.cosets[inst.record] = rec.coset
            tr.probability *= rec.probability
        out.append(tr)
    return out


def run_program(
    program: CircuitProgram,
    mode: str = "enumerate",
    shots: int = 1,
    seed: int = 0,
    fix: dict | None = None,
    branch_cap: int = 4096,
) -> list[Trajectory]:
    fix = dict(fix or {})
    for name in fix:
        if name not in program.records:
            raise ValueError(f"--fix names unknown record {name!r}")
    if mode == "enumerate":
        return _run_branching(program, fix, branch_cap)
    if mode == "fixed":
        missing = [r for r in program.records if r not in fix]
        if missing:
            raise ValueError(f"fixed mode needs every record pinned; missing {missing}")
        return _run_branching(program, fix, branch_cap)
    if mode == "sample":
        return _run_sample(program, shots, seed)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Results as plain data (shared by CLI and service).
# ---------------------------------------------------------------------------


def oracle_overlap(program: CircuitProgram, tr: Trajectory) -> float:
    """|<dense trajectory state | tableau subspace>|^2 for one trajectory."""
    import numpy as np

    from . import oracle

    dense = oracle.simulate(program, fix=tr.outcomes)
    matches = [
        (o, pr, psi) for o, pr, psi in dense if o == tr.outcomes
    ]
    if len(matches) != 1:
        return 0.0
    _, _, psi = matches[0]
    gens = [tr.tableau.column_operator(j) for j in range(tr.tableau.ncols)]
    basis = oracle.stabilized_subspace(gens, tr.tableau.n, program.ring.d)
    return oracle.overlap_with_subspace(psi, basis)


def result_dict(
    program: CircuitProgram,
    trajectories: list[Trajectory],
    emit_tableau: bool = False,
    with_oracle: bool = False,
) -> dict:
    out = {
        "dim": program.ring.d,
        "qudits": program.n,
        "trajectories": [],
    }
    for tr in trajectories:
        entry = {
            "outcomes": dict(tr.outcomes),
            "probability": {
                "num": tr.probability.numerator,
                "den": tr.probability.denominator,
                "float": float(tr.probability),
            },
            "cosets": {
                name: {"kappa": c.kappa, "eta": c.eta}
                for name, c in tr.cosets.items()
            },
        }
        if emit_tableau and tr.tableau is not None:
            entry["tableau"] = tr.tableau.to_json_dict()
        if with_oracle:
            entry["oracle_overlap"] = oracle_overlap(program, tr)
        out["trajectories"].append(entry)
    return out

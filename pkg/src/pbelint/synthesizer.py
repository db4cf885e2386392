"""Enumerate all DSL programs consistent with an example and quantify divergence.

The search enumerates the closed atom vocabulary once (ConstStr texts drawn
from substrings of the first output, Split over separators present in every
input, SubStr over the CPos range and regex-atom RelPos pool), groups atoms by
the tuple of strings they produce on the training inputs, and then walks every
way to cover all outputs with at most max_concat such groups. Any consistent
program over the vocabulary within the size bound is found, including ones
whose part boundaries differ from the canonical alignment. Unalignable
examples only get whole-output atomic programs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional, Sequence

from .alignment import align_example
from .annotations import Example
from .detectors import SPECIAL, char_class
from .dsl import (
    CASE_TYPES,
    CPos,
    Concat,
    ConstStr,
    EvalError,
    Expr,
    LEFT,
    Program,
    REGEX_ATOMS,
    RelPos,
    RIGHT,
    Split,
    SubStr,
    evaluate,
    format_program,
    node_count,
    resolve_position,
)


@dataclass(frozen=True)
class SynthesisConfig:
    """Search bounds. cpos_range/separators default from the example's inputs."""

    max_size: int = 7
    max_concat: int = 4
    cpos_range: Optional[int] = None
    occurrence_max: int = 3
    separators: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be >= 1")
        if not 1 <= self.max_concat <= 4:
            raise ValueError("max_concat must be in [1, 4]")
        if self.occurrence_max < 0:
            raise ValueError("occurrence_max must be >= 0")


@dataclass
class DivergenceReport:
    programs: list[Program]
    outputs_by_input: dict[str, dict[str, list[str]]]
    errors_by_input: dict[str, dict[str, str]]
    intent_counts: dict[str, int]


def default_separators(inputs: Sequence[str]) -> tuple[str, ...]:
    """Every printable special character present in all inputs."""
    common: Optional[set[str]] = None
    for text in inputs:
        specials = {c for c in text if char_class(c) == SPECIAL}
        common = specials if common is None else common & specials
    return tuple(sorted(common or ()))


def _apply_case(value: str, case: str) -> str:
    if case == "upper":
        return value.upper()
    if case == "lower":
        return value.lower()
    return value


def _position_pool(inputs: Sequence[str], cfg: SynthesisConfig):
    """Position atoms that resolve on every input, with their resolved indices."""
    reach = cfg.cpos_range if cfg.cpos_range is not None else max(
        len(x) for x in inputs
    )
    pool = [CPos(k) for k in range(-reach, reach + 1)]
    for atom in REGEX_ATOMS:
        for side in (LEFT, RIGHT):
            for occ in range(cfg.occurrence_max + 1):
                pool.append(RelPos(atom, side, occ))
    resolved = []
    for position in pool:
        indices = []
        try:
            for text in inputs:
                indices.append(resolve_position(position, text))
        except EvalError:
            continue
        resolved.append((position, tuple(indices)))
    return resolved


def enumerate_atoms(
    example: Example, cfg: SynthesisConfig
) -> list[tuple[Expr, tuple[str, ...]]]:
    """All atomic expressions in the vocabulary, with their value vectors.

    The value vector is what the atom evaluates to on each training input;
    atoms that fail to evaluate on any input are dropped (they can never be
    part of a consistent program).
    """
    inputs = example.inputs
    outputs = example.outputs
    atoms: list[tuple[Expr, tuple[str, ...]]] = []

    first = outputs[0]
    const_texts = {
        first[a:b] for a in range(len(first)) for b in range(a + 1, len(first) + 1)
    }
    for text in sorted(const_texts):
        atoms.append((ConstStr(text), tuple(text for _ in inputs)))

    separators = (
        cfg.separators if cfg.separators is not None else default_separators(inputs)
    )
    for sep in separators:
        fields = [text.split(sep) for text in inputs]
        for index in range(min(len(f) for f in fields)):
            atoms.append((Split(sep, index), tuple(f[index] for f in fields)))

    positions = _position_pool(inputs, cfg)
    for start_pos, starts in positions:
        for end_pos, ends in positions:
            if not all(s < e for s, e in zip(starts, ends)):
                continue
            base = tuple(
                text[s:e] for text, s, e in zip(inputs, starts, ends)
            )
            for case in CASE_TYPES:
                values = (
                    base
                    if case == "none"
                    else tuple(_apply_case(v, case) for v in base)
                )
                atoms.append((SubStr(start_pos, end_pos, case), values))
    return atoms


def _const_count(expr: Expr) -> int:
    if isinstance(expr, ConstStr):
        return 1
    if isinstance(expr, Concat):
        return sum(_const_count(p) for p in expr.parts)
    return 0


def _rank(programs) -> list[Program]:
    """Dedup by printed form; order by (size, ConstStr count, printed form)."""
    by_text: dict[str, Program] = {}
    for program in programs:
        by_text.setdefault(format_program(program), program)
    return [
        program
        for _, program in sorted(
            by_text.items(),
            key=lambda item: (
                item[1].size,
                _const_count(item[1].root),
                item[0],
            ),
        )
    ]


def synthesize(example: Example, cfg: Optional[SynthesisConfig] = None) -> list[Program]:
    """All consistent programs within the configured bounds, ranked."""
    cfg = cfg or SynthesisConfig()
    if not example.samples:
        raise ValueError("example has no samples")
    outputs = example.outputs
    atoms = enumerate_atoms(example, cfg)

    aligned = True
    if len(example.samples) >= 2:
        aligned = align_example(example).aligned
    if not aligned:
        whole = tuple(outputs)
        return _rank(
            Program(expr)
            for expr, values in atoms
            if values == whole and node_count(expr) <= cfg.max_size
        )

    groups: dict[tuple[str, ...], list[Expr]] = defaultdict(list)
    for expr, values in atoms:
        groups[values].append(expr)
    group_items = [
        (values, sorted(exprs, key=node_count)) for values, exprs in groups.items()
    ]
    min_sizes = [node_count(exprs[0]) for _, exprs in group_items]

    # Index candidate groups by where their first-sample value occurs in the
    # first output, so the walk only inspects locally plausible groups.
    first_out = outputs[0]
    candidates_at: dict[int, list[int]] = defaultdict(list)
    for gi, (values, _) in enumerate(group_items):
        v0 = values[0]
        for a in range(len(first_out) - len(v0) + 1):
            if first_out.startswith(v0, a):
                candidates_at[a].append(gi)
        if v0 == "":
            for a in range(len(first_out) + 1):
                candidates_at[a].append(gi)

    target = tuple(len(o) for o in outputs)
    paths: list[tuple[int, ...]] = []

    def walk(node: tuple[int, ...], path: tuple[int, ...], min_size: int):
        if node == target and path:
            paths.append(path)
        if len(path) == cfg.max_concat:
            return
        concat_overhead = 1 if path else 0
        for gi in candidates_at.get(node[0], ()):
            values = group_items[gi][0]
            advanced = []
            for position, out, value in zip(node, outputs, values):
                if not out.startswith(value, position):
                    advanced = None
                    break
                advanced.append(position + len(value))
            if advanced is None:
                continue
            new_min = min_size + min_sizes[gi]
            if new_min + concat_overhead > cfg.max_size:
                continue
            walk(tuple(advanced), path + (gi,), new_min)

    walk(tuple(0 for _ in outputs), (), 0)

    programs: list[Program] = []
    for path in paths:
        member_lists = [group_items[gi][1] for gi in path]
        if len(path) == 1:
            programs.extend(
                Program(expr)
                for expr in member_lists[0]
                if node_count(expr) <= cfg.max_size
            )
            continue
        suffix_min = [0] * (len(path) + 1)
        for i in range(len(path) - 1, -1, -1):
            suffix_min[i] = suffix_min[i + 1] + min_sizes[path[i]]

        def assemble(i: int, parts: tuple[Expr, ...], size: int):
            if size + suffix_min[i] > cfg.max_size:
                return
            if i == len(member_lists):
                programs.append(Program(Concat(parts)))
                return
            for expr in member_lists[i]:
                expr_size = node_count(expr)
                if size + expr_size + suffix_min[i + 1] > cfg.max_size:
                    break  # members are size-sorted
                assemble(i + 1, parts + (expr,), size + expr_size)

        assemble(0, (), 1)

    return _rank(programs)


def check_consistency(program: Program, example: Example) -> bool:
    """True iff the program reproduces every sample's output (errors count as false)."""
    for sample in example.samples:
        try:
            if evaluate(program, sample.input) != sample.output:
                return False
        except EvalError:
            return False
    return True


def divergence(programs: Sequence[Program], unseen: Sequence[str]) -> DivergenceReport:
    """Group programs by their output on each unseen input; errors kept separate."""
    if not programs:
        raise ValueError("divergence needs at least one program")
    outputs_by_input: dict[str, dict[str, list[str]]] = {}
    errors_by_input: dict[str, dict[str, str]] = {}
    intent_counts: dict[str, int] = {}
    for text in unseen:
        produced: dict[str, list[str]] = defaultdict(list)
        failed: dict[str, str] = {}
        for program in programs:
            label = format_program(program)
            try:
                produced[evaluate(program, text)].append(label)
            except EvalError as exc:
                failed[label] = str(exc)
        outputs_by_input[text] = {
            out: sorted(progs) for out, progs in sorted(produced.items())
        }
        errors_by_input[text] = failed
        intent_counts[text] = len(produced)
    return DivergenceReport(list(programs), outputs_by_input, errors_by_input, intent_counts)

import random

import pytest

from pbelint.annotations import Example, Sample
from pbelint.dsl import (
    CASE_TYPES,
    CPos,
    Concat,
    ConstStr,
    EvalError,
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
)
from pbelint.synthesizer import (
    SynthesisConfig,
    check_consistency,
    divergence,
    synthesize,
)

from conftest import make_example


def prints(programs):
    return {format_program(p) for p in programs}


# --- independent brute-force enumerator (test oracle) -------------------------


def naive_consistent_programs(example: Example, max_size: int) -> set[str]:
    """Printed forms of every consistent program, by raw grammar enumeration.

    Enumerates the closed vocabulary directly (no alignment, no grouping):
    ConstStr over substrings of the first output, Split over separators present
    in every input, SubStr over all position pairs, and every flat Concat of
    2-4 atoms, keeping exactly the programs that reproduce all outputs within
    the size bound. Prefix pruning only discards provably inconsistent parts.
    """
    inputs = [s.input for s in example.samples]
    outputs = tuple(s.output for s in example.samples)
    reach = max(len(x) for x in inputs)

    positions = [CPos(k) for k in range(-reach, reach + 1)]
    positions += [
        RelPos(atom, side, occ)
        for atom in REGEX_ATOMS
        for side in (LEFT, RIGHT)
        for occ in range(4)
    ]

    atoms = []
    first = outputs[0]
    for text in {first[a:b] for a in range(len(first)) for b in range(a + 1, len(first) + 1)}:
        atoms.append(ConstStr(text))
    separators = set.intersection(
        *({c for c in x if not c.isalnum()} for x in inputs)
    )
    for sep in sorted(separators):
        for idx in range(min(len(x.split(sep)) for x in inputs)):
            atoms.append(Split(sep, idx))
    for y1 in positions:
        for y2 in positions:
            for case in CASE_TYPES:
                atoms.append(SubStr(y1, y2, case))

    valued = []
    for atom in atoms:
        values = []
        try:
            for x in inputs:
                values.append(evaluate(atom, x))
        except EvalError:
            continue
        valued.append((atom, tuple(values)))

    found: set[str] = set()
    for atom, values in valued:
        if values == outputs and node_count(atom) <= max_size:
            found.add(format_program(Program(atom)))

    def extend(parts, prefixes, size):
        if len(parts) >= 2 and prefixes == outputs and size + 1 <= max_size:
            found.add(format_program(Program(Concat(tuple(parts)))))
        if len(parts) == 4:
            return
        for atom, values in valued:
            new_size = size + node_count(atom)
            if new_size + 1 > max_size:
                continue
            new_prefixes = tuple(p + v for p, v in zip(prefixes, values))
            if all(o.startswith(p) for p, o in zip(new_prefixes, outputs)):
                extend(parts + [atom], new_prefixes, new_size)

    extend([], ("",) * len(outputs), 0)
    return found


# --- reference behavior --------------------------------------------------------


NUMBER_AFTER = "SubStr(y1: RelPos('[0-9]+', '-0', 0), y2: CPos(0), case_type: None)"
STRING_AFTER = "Split(sep: _, index: 1)"


def test_multiple_intents_before_disambiguation():
    example = make_example(
        "t2r1", [("ABCD_12", "12"), ("BDJ_535", "535"), ("GE_443", "443")]
    )
    programs = synthesize(example)
    texts = prints(programs)
    assert NUMBER_AFTER in texts
    assert STRING_AFTER in texts
    report = divergence(programs, ["B_DS2345"])
    outs = report.outputs_by_input["B_DS2345"]
    assert "2345" in outs and "DS2345" in outs
    assert report.intent_counts["B_DS2345"] >= 2


def test_better_sample_removes_digit_intent():
    example = make_example(
        "t2r2", [("ABCD_12", "12"), ("BDJ_535", "535"), ("GE_D443", "D443")]
    )
    programs = synthesize(example)
    texts = prints(programs)
    assert NUMBER_AFTER not in texts
    assert STRING_AFTER in texts
    report = divergence(programs, ["B_DS2345"])
    assert "2345" not in report.outputs_by_input["B_DS2345"]


def test_identity_single_pair():
    example = Example("id", (Sample("abc", "abc"),))
    texts = prints(synthesize(example))
    assert "ConstStr('abc')" in texts
    assert any(t.startswith("SubStr(") for t in texts)


def test_unaligned_gets_whole_output_atoms_only():
    example = Example("u", (Sample("ab", "ab"), Sample("cd", "c-d")))
    programs = synthesize(example)
    assert programs == []


def test_check_consistency_reference_program():
    example = make_example(
        "row1", [("AB_CD_123", "CD123"), ("BDG_SJKL_535", "SJKL535")]
    )
    program = Program(Concat((Split("_", 1), Split("_", 2))))
    assert check_consistency(program, example)


def test_check_consistency_rejects_constant():
    example = make_example("c", [("ABCD_12", "12"), ("BDJ_535", "535")])
    assert not check_consistency(Program(ConstStr("12")), example)


def test_exact_match_duality_offers_const_and_extraction():
    example = make_example("em", [("x-11", "x11"), ("y-11", "y11")])
    texts = prints(synthesize(example))
    assert any("ConstStr('11')" in t for t in texts)
    assert any("Split(sep: -, index: 1)" in t for t in texts)


# --- properties ------------------------------------------------------------------


def random_small_example(rng: random.Random) -> Example:
    alphabet = "abcXY12_-"
    samples = []
    for _ in range(rng.randint(2, 3)):
        n = rng.randint(3, 8)
        inp = "".join(rng.choice(alphabet) for _ in range(n))
        a = rng.randrange(n)
        b = rng.randint(a + 1, n)
        out = inp[a:b]
        if rng.random() < 0.3:
            out += rng.choice(alphabet)
        samples.append(Sample(inp, out[:6]))
    return Example("r", tuple(samples))


def test_soundness_on_random_examples():
    rng = random.Random(11)
    checked = 0
    for _ in range(30):
        example = random_small_example(rng)
        programs = synthesize(example, SynthesisConfig(max_size=5))
        checked += len(programs)
        for program in programs:
            assert check_consistency(program, example), format_program(program)
    assert checked > 0


@pytest.mark.parametrize(
    "pairs",
    [
        [("ab_cd", "b_cd"), ("xy_zw", "y_zw")],
        [("AB_12", "12"), ("CD_34", "34")],
        [("x-11", "x11"), ("y-11", "y11")],
        [("aXb", "Xb"), ("cXd", "Xd"), ("eXf", "Xf")],
    ],
)
def test_completeness_within_bounds(pairs):
    """Raw grammar enumeration finds nothing the synthesizer misses (and vice versa)."""
    example = make_example("cmp", pairs)
    cfg = SynthesisConfig(max_size=5)
    ours = prints(synthesize(example, cfg))
    naive = naive_consistent_programs(example, max_size=5)
    assert naive - ours == set()
    assert ours - naive == set()


def test_completeness_catches_cross_boundary_split():
    """The known cross-segment program must be found (keeps the check non-vacuous)."""
    example = make_example("xb", [("ab_cd", "b_cd"), ("xy_zw", "y_zw")])
    crossing = format_program(
        Program(Concat((SubStr(CPos(1), CPos(3)), Split("_", 1))))
    )
    assert crossing in prints(synthesize(example, SynthesisConfig(max_size=5)))


def test_ranking_deterministic_and_ordered():
    example = make_example(
        "rank", [("ABCD_12", "12"), ("BDJ_535", "535"), ("GE_443", "443")]
    )
    first = synthesize(example)
    second = synthesize(example)
    assert [format_program(p) for p in first] == [format_program(p) for p in second]
    sizes = [p.size for p in first]
    assert sizes == sorted(sizes)


def test_adding_sample_never_enlarges_consistent_set():
    cfg = SynthesisConfig(cpos_range=12, separators=("_", "-"))
    base = make_example(
        "m", [("ABCD_12", "12"), ("BDJ_535", "535"), ("GE_443", "443")]
    )
    extended = Example("m2", base.samples + (Sample("AK_B121", "B121"),))
    assert prints(synthesize(extended, cfg)) <= prints(synthesize(base, cfg))


def test_divergence_single_program_single_input():
    program = Program(ConstStr("x"))
    report = divergence([program], ["whatever"])
    assert report.intent_counts["whatever"] == 1
    assert report.outputs_by_input["whatever"] == {"x": [format_program(program)]}


def test_divergence_records_errors_separately():
    programs = [Program(Split("_", 1)), Program(ConstStr("q"))]
    report = divergence(programs, ["nounderscore"])
    assert report.intent_counts["nounderscore"] == 1
    assert format_program(programs[0]) in report.errors_by_input["nounderscore"]


def test_divergence_requires_programs():
    with pytest.raises(ValueError):
        divergence([], ["x"])

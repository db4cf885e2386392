import pytest

from pbelint.annotations import Example, Sample

# The five canonical ambiguity demonstrations, one per property. Each maps a
# property name to its sample pairs; these decompositions and verdicts anchor
# the whole detector semantics.
REFERENCE_ROWS = {
    "similar_length": [("AB_CD_123", "CD123"), ("BDG_SJKL_535", "SJKL535")],
    "exact_position": [("Mohan Kumar", "Kumar"), ("Merve Williams", "Williams")],
    "exact_match": [("19-11-1995", "19/11"), ("10-11-2012", "10/11")],
    "token_type": [("A1B-123-A2BD", "123BD"), ("1A-53-GGAK", "53AK")],
    "repeating": [("K 1 TFR 1", "1"), ("Y 2 ECN 2", "2")],
}


def make_example(example_id, pairs):
    return Example(example_id, tuple(Sample(i, o) for i, o in pairs))


@pytest.fixture
def reference_examples():
    return {
        name: make_example(name, pairs) for name, pairs in REFERENCE_ROWS.items()
    }

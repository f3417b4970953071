import json
import random
from fractions import Fraction

import pytest

from wmt.errors import RatioTooLarge
from wmt.mellin import coefficients, mellin_symbolic
from wmt.oracle import (gl2_cross_oracle, gln_proposition, growth_probe, random_assignment,
                        term_ratios, truncated_mellin_sum)

from conftest import SPOT


def test_a1_spot(a1):
    rep = truncated_mellin_sum(a1, SPOT, 40)
    assert rep.closed == Fraction(6, 5)
    assert rep.passed
    assert rep.error <= Fraction(1, 4) ** 41 * 100


def test_a1_at_x_zero(a1):
    rep = truncated_mellin_sum(a1, {"q": 2, "y1": Fraction(1, 2), "x1": 0}, 10)
    assert rep.partial == rep.closed == Fraction(3, 4)
    assert rep.bound == 0 and rep.passed


def test_a2_spot(a2):
    pt = {"q": 3, "y1": Fraction(1, 3), "y2": Fraction(1, 9),
          "x1": Fraction(1, 81), "x2": Fraction(1, 81)}
    rep = truncated_mellin_sum(a2, pt, 25)
    assert rep.passed
    assert rep.bound > 0


def test_ratio_too_large(a1):
    with pytest.raises(RatioTooLarge):
        truncated_mellin_sum(a1, {"q": 2, "y1": Fraction(1, 2), "x1": Fraction(1, 2)}, 5)


def test_bound_strictly_decreasing(a1):
    table_k = 30
    table = coefficients(mellin_symbolic(a1), table_k)
    bounds = [truncated_mellin_sum(a1, SPOT, K, table).bound for K in range(0, table_k + 1, 5)]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_random_assignments_respect_ratio(a2):
    rng = random.Random(3)
    for _ in range(5):
        a = random_assignment(a2, rng)
        assert a["q"] in (2, 3, 4, 5, 7)
        assert max(max(r) for r in term_ratios(a2, a)) <= Fraction(1, 2)
        assert mellin_symbolic(a2).c.eval_exact(a) != 0


def test_random_assignments_are_seeded(a1):
    one = random_assignment(a1, random.Random(11))
    two = random_assignment(a1, random.Random(11))
    assert one == two


def test_report_json(a1):
    data = truncated_mellin_sum(a1, SPOT, 10).to_dict()
    assert set(data) == {"kind", "params", "assignment", "K", "partial", "closed", "bound", "pass"}
    assert data["closed"] == "6/5"
    json.dumps(data)


def test_gl2_cross_oracle():
    rep = gl2_cross_oracle(50)
    assert rep.passed
    assert -3 in rep.checked and 0 in rep.checked


def test_growth_a1(a1):
    rep = growth_probe(a1, 0, 20)
    assert rep.rows[0][0] == 0
    assert rep.onset is not None and rep.onset <= 1
    assert rep.passed


def test_growth_a2(a2):
    for d in range(2):
        rep = growth_probe(a2, d, 20)
        assert rep.passed, rep.to_dict()


def test_gln_transcription_matches_a2(a2):
    assert gln_proposition(3).equals(mellin_symbolic(a2).value)


def test_gln_transcription_matches_a1(a1):
    assert gln_proposition(2).equals(mellin_symbolic(a1).value)

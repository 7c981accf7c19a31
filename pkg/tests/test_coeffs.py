import csv
import io
import json
from math import factorial

import pytest
from hypothesis import given, strategies as st

from expbump.coeffs import (
    CoefficientMismatchError,
    CoefficientRow,
    coeff_closed_form,
    coeff_reindexed,
    coeff_row_recurrence,
    coeff_triangle,
    coefficient_row,
    symbolic_diff_oracle,
    triangle_to_csv,
    triangle_to_json,
)


@pytest.mark.parametrize("i,k,expected", [
    (1, 0, 1),
    (2, 1, 2),
    (3, 1, 6),
    (3, 2, 6),
    (5, 4, 120),
    (4, 1, 12),
    (4, 2, 36),
])
def test_closed_form_values(i, k, expected):
    assert coeff_closed_form(i, k) == expected


@pytest.mark.parametrize("i,k", [(0, 0), (3, 3), (3, -1), (-2, 0)])
def test_closed_form_rejects_out_of_range(i, k):
    with pytest.raises(ValueError, match=r"i=|k="):
        coeff_closed_form(i, k)


def test_recurrence_examples():
    r2 = coeff_row_recurrence(CoefficientRow(1, (1,)))
    assert r2.entries == (1, 2)
    r3 = coeff_row_recurrence(r2)
    assert r3.entries == (1, 6, 6)
    assert coeff_row_recurrence(r3).entries == (1, 12, 36, 24)


def test_row_shape_is_enforced():
    with pytest.raises(ValueError):
        CoefficientRow(3, (1, 2))
    with pytest.raises(ValueError):
        CoefficientRow(0, ())


def test_small_triangles():
    assert [r.entries for r in coeff_triangle(3).rows] == [(1,), (1, 2), (1, 6, 6)]
    assert [r.entries for r in coeff_triangle(1).rows] == [(1,)]
    assert coeff_triangle(4)[4, 2] == 36
    with pytest.raises(ValueError):
        coeff_triangle(0)


def test_triangle_check_fires_on_bad_recurrence(monkeypatch):
    import expbump.coeffs as mod

    def broken(row):
        good = coeff_row_recurrence(row)
        if good.order == 5:
            return CoefficientRow(5, good.entries[:2] + (good.entries[2] + 1,) + good.entries[3:])
        return good

    monkeypatch.setattr(mod, "coeff_row_recurrence", broken)
    with pytest.raises(CoefficientMismatchError) as info:
        mod.coeff_triangle(6)
    assert (info.value.i, info.value.k) == (5, 2)


@pytest.mark.parametrize("i,expected", [(1, [1]), (2, [1, 2]), (3, [1, 6, 6]), (4, [1, 12, 36, 24])])
def test_symbolic_oracle_small(i, expected):
    assert list(symbolic_diff_oracle(i).entries) == expected


def test_symbolic_oracle_tail():
    assert symbolic_diff_oracle(6)[5] == 720


def test_symbolic_oracle_matches_closed_form_to_30():
    for i in range(1, 31):
        assert symbolic_diff_oracle(i).entries == tuple(coeff_closed_form(i, k) for k in range(i))


def test_recurrence_matches_closed_form_to_60():
    tri = coeff_triangle(60)
    for row in tri.rows:
        i = row.order
        assert row.entries == tuple(coeff_closed_form(i, k) for k in range(i))
        assert row[0] == 1
        assert row[i - 1] == factorial(i)


def test_reindexed_identity_to_60():
    for i in range(1, 61):
        for m in range(1, i + 1):
            assert coeff_reindexed(i, m) == coeff_closed_form(i, i - m)


def test_exceeds_64_bits():
    # i! leaves int64 at i = 21; exact ints must keep every digit
    assert coeff_closed_form(21, 20) == factorial(21) > 2**63


def test_memoized_rows_beyond_default():
    row = coefficient_row(70)
    assert row.order == 70
    assert row[69] == factorial(70)
    assert coefficient_row(70) is row


@given(st.integers(1, 120).flatmap(lambda i: st.tuples(st.just(i), st.integers(0, i - 1))))
def test_entries_positive(ik):
    i, k = ik
    assert coeff_closed_form(i, k) >= 1


@given(st.integers(1, 80))
def test_row_sum_recurrence_consistent(i):
    # first entry is carried over unchanged by the recurrence
    row = coefficient_row(i)
    nxt = coeff_row_recurrence(row)
    assert nxt[0] == row[0] == 1
    assert nxt.entries == coefficient_row(i + 1).entries


def test_csv_export():
    text = triangle_to_csv(coeff_triangle(3))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["i", "k", "a_ik"]
    assert rows[-1] == ["3", "2", "6"]
    assert len(rows) == 1 + 6


def test_json_export_uses_strings():
    data = json.loads(triangle_to_json(coeff_triangle(25)))
    assert data["rows"][0] == ["1"]
    last = data["rows"][24]
    assert all(isinstance(v, str) for v in last)
    assert int(last[-1]) == factorial(25)

import json
import math
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from expbump.pou import (
    Cover,
    CoverageError,
    PartitionWeightSet,
    Patch,
    bump,
    jet_of_f,
    pou_over_cover,
    smooth_step,
    uniform_points,
)

EINV = math.exp(-1)


def test_jet_of_f_examples():
    assert jet_of_f(-1.0, 5).is_zero()
    assert jet_of_f(1.0, 0).coefficients == pytest.approx([EINV])
    assert jet_of_f(1.0, 2).coefficients == pytest.approx([EINV, EINV, -EINV / 2], rel=1e-15)


def test_jet_of_f_edge_cutoff():
    assert jet_of_f(1e-9, 4).is_zero()
    assert jet_of_f(1 / 800, 4).is_zero()
    assert not jet_of_f(1 / 600, 4).is_zero()


def test_smooth_step_examples():
    assert smooth_step(0.5, 0).value == 0.5
    assert smooth_step(-2.0, 3).is_zero()
    assert smooth_step(3.0, 3).coefficients == (1.0, 0.0, 0.0, 0.0)
    v = smooth_step(0.25, 0).value
    direct = math.exp(-4) / (math.exp(-4) + math.exp(-4 / 3))
    assert 0 < v < 0.5
    assert v == pytest.approx(direct, rel=1e-15)


@given(st.floats(-0.5, 1.5))
def test_step_complement(t):
    a = smooth_step(t, 3)
    b = smooth_step(1 - t, 3)
    assert a.value + b.value == pytest.approx(1.0, abs=1e-15)
    # odd derivatives agree, even ones cancel: sigma'(t) = sigma'(1 - t)
    assert a.coefficients[1] == pytest.approx(b.coefficients[1], rel=1e-12, abs=1e-15)


@given(st.floats(-0.5, 1.5))
def test_step_monotone(t):
    assert smooth_step(t, 1).coefficients[1] >= 0.0


def test_step_derivatives_by_finite_differences():
    step = sys.float_info.epsilon ** (1 / 3)
    for t in (0.1, 0.3, 0.5, 0.77, 0.9):
        for m in range(1, 5):
            lo = smooth_step(t - step, m - 1).derivative(m - 1)
            hi = smooth_step(t + step, m - 1).derivative(m - 1)
            fd = (hi - lo) / (2 * step)
            exact = smooth_step(t, m).derivative(m)
            assert fd == pytest.approx(exact, rel=1e-5, abs=1e-7)


def test_bump_examples():
    p = Patch(0.0, 4.0, 1.0)
    assert bump(p, 2.0, 2).coefficients == (1.0, 0.0, 0.0)
    assert bump(p, 0.0, 2).is_zero()
    assert bump(p, 0.5, 0).value == 0.5
    assert bump(p, 3.5, 0).value == 0.5
    assert bump(p, 5.0, 0).value == 0.0


def test_bump_values_bounded():
    p = Patch(-1.0, 2.0, 0.7)
    for x in np.linspace(-2, 3, 401):
        v = bump(p, x, 0).value
        assert 0.0 <= v <= 1.0
        if x <= -1.0 or x >= 2.0:
            assert v == 0.0


@pytest.mark.parametrize("lower,upper,ramp", [(1.0, 1.0, 0.1), (0.0, 1.0, 0.6), (0.0, 1.0, 0.0)])
def test_malformed_patch(lower, upper, ramp):
    with pytest.raises(ValueError):
        Patch(lower, upper, ramp)


def test_single_patch_weight_one():
    cover = Cover((0.0, 1.0), (Patch(-1.0, 2.0, 0.5),))
    ev = pou_over_cover(cover, uniform_points(cover, 5), 3)
    assert np.all(ev.values() == 1.0)
    assert np.all(ev.derivatives(2) == 0.0)


def test_two_identical_patches_split_evenly():
    p = Patch(-1.0, 2.0, 0.5)
    cover = Cover((0.0, 1.0), (p, p))
    ev = pou_over_cover(cover, [0.0, 0.3, 1.0], 2)
    assert np.all(ev.values() == 0.5)


def test_lone_patch_gets_full_weight():
    cover = Cover((0.0, 10.0), (Patch(-1.0, 6.0, 1.0), Patch(4.0, 11.0, 1.0)))
    ws = PartitionWeightSet(cover)
    assert ws.weight(0, 2.0) == 1.0 and ws.weight(1, 2.0) == 0.0
    assert ws.weight(0, 8.0) == 0.0 and ws.weight(1, 8.0) == 1.0


def test_gap_is_reported():
    cover = Cover((0.0, 1.0), (Patch(-1.0, 0.6, 0.2), Patch(0.7, 2.0, 0.2)))
    assert cover.find_gap() == pytest.approx(0.6)
    with pytest.raises(CoverageError, match="x=0.6"):
        pou_over_cover(cover, [0.5], 0)


def test_touching_patches_leave_a_gap():
    # the shared endpoint 0.5 lies in neither open patch
    cover = Cover((0.0, 1.0), (Patch(-1.0, 0.5, 0.2), Patch(0.5, 2.0, 0.2)))
    assert cover.find_gap() == 0.5


def test_domain_endpoint_must_be_inside():
    cover = Cover((0.0, 1.0), (Patch(0.0, 2.0, 0.2),))
    assert cover.find_gap() == 0.0


def test_empty_points():
    cover = Cover((0.0, 1.0), (Patch(-1.0, 2.0, 0.5),))
    ev = pou_over_cover(cover, [], 2)
    assert ev.values().shape == (0, 1)
    assert ev.to_csv() == "x,patch_index,weight,d1,d2\n"


def test_cover_json_roundtrip():
    cover = Cover((0.0, 3.0), (Patch(-1.0, 2.0, 0.5), Patch(1.0, 4.0, 1.0)))
    assert Cover.from_json(json.dumps(cover.to_dict())) == cover


@st.composite
def covers(draw):
    """Random valid covers of [0, L]: a chain of patches with overlaps."""
    n = draw(st.integers(1, 6))
    length = draw(st.floats(1.0, 20.0))
    cuts = sorted(draw(st.lists(st.floats(0.05, 0.95), min_size=n - 1, max_size=n - 1)))
    knots = [0.0] + [c * length for c in cuts] + [length]
    patches = []
    for j in range(n):
        a, b = knots[j], knots[j + 1]
        left = draw(st.floats(0.05, 1.0)) + (0.0 if j else 0.01)
        right = draw(st.floats(0.05, 1.0)) + (0.0 if j < n - 1 else 0.01)
        lo, hi = a - left, b + right
        ramp = draw(st.floats(0.05, 1.0)) * min(left, right, (hi - lo) / 2)
        patches.append(Patch(lo, hi, ramp))
    return Cover((0.0, length), tuple(patches))


@settings(max_examples=60, deadline=None)
@given(covers())
def test_partition_of_unity_properties(cover):
    pts = uniform_points(cover, 200)
    ev = pou_over_cover(cover, pts, 3)
    vals = ev.values()
    assert np.all(vals >= 0.0)
    assert np.all(np.abs(vals.sum(axis=1) - 1.0) <= 1e-12)
    for r, x in enumerate(pts):
        for j, p in enumerate(cover.patches):
            if not p.lower < x < p.upper:
                assert vals[r, j] == 0.0
    for m in range(1, 4):
        d = ev.derivatives(m)
        scale = max(1.0, np.abs(d).max())
        assert np.all(np.abs(d.sum(axis=1)) <= 1e-12 * scale * len(cover.patches) + 1e-13)


def test_weight_derivatives_by_finite_differences():
    cover = Cover((0.0, 6.0), (Patch(-1.0, 3.0, 1.0), Patch(2.0, 5.0, 0.8), Patch(4.0, 7.0, 1.0)))
    ws = PartitionWeightSet(cover)
    step = sys.float_info.epsilon ** (1 / 3)
    for x in (2.15, 2.4, 2.9, 4.2, 4.5, 4.9):
        for m in range(1, 5):
            lo = ws.weights(x - step, m - 1)
            hi = ws.weights(x + step, m - 1)
            mid = ws.weights(x, m)
            for j in range(3):
                fd = (hi[j].derivative(m - 1) - lo[j].derivative(m - 1)) / (2 * step)
                exact = mid[j].derivative(m)
                assert fd == pytest.approx(exact, rel=1e-5, abs=1e-6)


def test_csv_layout():
    cover = Cover((0.0, 1.0), (Patch(-1.0, 2.0, 0.5),))
    text = pou_over_cover(cover, [0.5], 2).to_csv()
    assert text == "x,patch_index,weight,d1,d2\n0.5,0,1.0,0.0,0.0\n"

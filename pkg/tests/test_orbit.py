"""Orbit iteration, cycle detection, and the four-way verdict rules.

The inverse-square orbit of 0.5 is the main frozen oracle: every iterate
is an exact power of two, so the expected moduli below are hand-derived
and exact. The attracting/repelling fixed points of 0.3*e^z come from a
bisection oracle run inside the tests, independent of the classifier.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bungee import (
    Classification,
    ClassifierConfig,
    Completed,
    CycleFound,
    Overflowed,
    PoleHit,
    classify,
    classify_batch,
    classify_point,
    detect_cycle,
    iterate_orbit,
    parse,
)
from bungee.orbit import DEFAULT_CONFIG

# Config used by the sine-pair and drift examples: their orbits creep
# outward at ~2*pi per step, so escape must be read at a lower radius.
DRIFT_CFG = ClassifierConfig(max_iter=2000, r_bound=100.0, r_esc=1e3)


def bisect(h, lo: float, hi: float) -> float:
    """Sign-change bisection, independent of any package numerics."""
    flo = h(lo)
    assert flo * h(hi) < 0
    for _ in range(200):
        mid = (lo + hi) / 2
        if flo * h(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def inverse_square_orbit(z0: complex, guard: float = 1e150) -> list[complex]:
    """Hand iteration of 1/z^2, stopping once the guard is crossed."""
    z = complex(z0)
    vals = [z]
    while abs(z) <= guard and 0 < abs(z):
        z = 1 / (z * z)
        vals.append(z)
    return vals


# --- configuration -------------------------------------------------------


def test_default_config_values():
    cfg = ClassifierConfig()
    assert cfg.max_iter == 1000
    assert cfg.r_bound == 1e3
    assert cfg.r_esc == 1e6
    assert cfg.tail_window == 50
    assert cfg.min_alternations == 2
    assert cfg.peak_growth == 2.0
    assert cfg.cycle_tol == 1e-12
    assert cfg.overflow_guard == 1e150


@pytest.mark.parametrize(
    "kwargs",
    [
        {"max_iter": 0},
        {"r_bound": 0.0},
        {"r_bound": 1e7},
        {"r_esc": 1e151},
        {"tail_window": 0},
        {"tail_window": 1000},
        {"min_alternations": 1},
        {"peak_growth": 1.0},
        {"cycle_tol": 0.0},
    ],
)
def test_config_validation_rejects(kwargs):
    with pytest.raises(ValueError):
        ClassifierConfig(**kwargs)


def test_config_dict_round_trip():
    cfg = DRIFT_CFG
    assert ClassifierConfig.from_dict(cfg.to_dict()) == cfg
    assert ClassifierConfig.from_dict({"max_iter": 500}).max_iter == 500


# --- iterate_orbit -------------------------------------------------------


def test_inverse_square_orbit_record_matches_hand_iteration():
    want = inverse_square_orbit(0.5)
    assert len(want) == 10  # overflow guard crossed at step 9
    rec = iterate_orbit(parse("1/pow(z,2)"), 0.5)
    assert rec.seed == 0.5
    assert rec.values.tolist() == want
    assert rec.moduli.tolist() == [abs(v) for v in want]
    # Exact powers of two all the way out.
    assert rec.moduli.tolist() == [
        0.5,
        4.0,
        0.0625,
        256.0,
        1.52587890625e-05,
        4294967296.0,
        5.421010862427522e-20,
        3.402823669209385e38,
        8.636168555094445e-78,
        1.3407807929942597e154,
    ]
    assert rec.termination == Overflowed(9)
    assert rec.returns == 2
    assert rec.peaks == (
        (5, 4294967296.0),
        (7, 3.402823669209385e38),
        (9, 1.3407807929942597e154),
    )
    assert rec.global_max == 1.3407807929942597e154


def test_orbit_record_invariants_hold():
    for text, seed, cfg in [
        ("1/pow(z,2)", 0.5 + 0j, DEFAULT_CONFIG),
        ("z+sin(z)+2*pi", 0j, DEFAULT_CONFIG),
        ("z+sin(z)+2*pi", 0j, DRIFT_CFG),
        ("0.3*exp(z)", 0j, DEFAULT_CONFIG),
        ("exp(z)", 5 + 0j, DEFAULT_CONFIG),
    ]:
        rec = iterate_orbit(parse(text), seed, cfg)
        assert all(value > cfg.r_esc for _, value in rec.peaks)
        assert rec.returns <= len(rec.peaks)
        assert len(rec.values) <= cfg.max_iter + 1
        assert rec.global_max == rec.moduli.max()


def test_drift_orbit_walks_out_linearly():
    rec = iterate_orbit(parse("z+sin(z)+2*pi"), 0)
    assert rec.termination == Completed()
    assert rec.returns == 0 and rec.peaks == ()
    for n in range(31):
        assert abs(rec.moduli[n] - 2 * math.pi * n) <= 1e-6


def test_sine_map_fixes_origin_exactly():
    rec = iterate_orbit(parse("z+sin(z)"), 0)
    assert rec.termination == CycleFound(1, 0)
    assert rec.moduli.max() == 0.0


def test_pole_hit_is_recorded():
    rec = iterate_orbit(parse("1/pow(z,2)"), 0)
    assert rec.termination == PoleHit(1)


def test_non_finite_seed_is_rejected():
    with pytest.raises(ValueError):
        iterate_orbit(parse("z"), complex("inf"))
    with pytest.raises(ValueError):
        iterate_orbit(parse("z"), complex(0, math.nan))


# --- detect_cycle --------------------------------------------------------


def test_detect_cycle_on_settled_fixed_point():
    # Attracting fixed point of 0.3*e^z, located independently.
    q = bisect(lambda x: 0.3 * math.exp(x) - x, 0.0, 1.0)
    assert abs(q - 0.4894) < 5e-4
    settled = np.full(10, complex(q))
    assert detect_cycle(settled, 1e-12) == (1, 0)
    rec = iterate_orbit(parse("0.3*exp(z)"), q)
    assert isinstance(rec.termination, CycleFound)
    assert rec.termination.period == 1
    assert rec.termination.entry == 0


def test_detect_cycle_sees_no_cycle_in_alternating_escape():
    vals = np.array(inverse_square_orbit(0.5), dtype=np.complex128)
    assert detect_cycle(vals, 1e-12) is None


def test_detect_cycle_after_transient():
    # i -> -1 -> 1 -> 1 -> ..., exact on units.
    vals = np.array([1j, -1, 1, 1, 1], dtype=np.complex128)
    assert detect_cycle(vals, 1e-12) == (1, 2)
    rec = iterate_orbit(parse("1/pow(z,2)"), 1j)
    assert rec.termination == CycleFound(1, 2)


def test_detect_cycle_reports_least_period():
    two_cycle = np.array([2, 0.5, 2, 0.5, 2, 0.5], dtype=np.complex128)
    assert detect_cycle(two_cycle, 1e-12) == (2, 0)


# --- classify ------------------------------------------------------------


def test_drift_map_escapes_under_its_shipped_config():
    assert classify_point(parse("z+sin(z)+2*pi"), 0, DRIFT_CFG) == Classification.ESCAPING


def test_sine_map_origin_is_bounded():
    assert classify_point(parse("z+sin(z)"), 0) == Classification.BOUNDED
    assert classify_point(parse("z+sin(z)"), 0, DRIFT_CFG) == Classification.BOUNDED


def test_inverse_square_half_is_bungee():
    assert classify_point(parse("1/pow(z,2)"), 0.5) == Classification.BUNGEE


def test_scaled_exp_escapes_beyond_repelling_point():
    # Bisection locates the repelling fixed point p of 0.3*e^x with
    # 0.3*e^p = p and p > 1; real orbits started above p blow up.
    p = bisect(lambda x: 0.3 * math.exp(x) - x, 1.0, 3.0)
    assert 1.7 < p < 1.9
    assert 3 > p
    assert classify_point(parse("0.3*exp(z)"), 3) == Classification.ESCAPING


def test_classify_point_examples():
    assert classify_point(parse("0.3*exp(z)"), 0) == Classification.BOUNDED
    assert classify_point(parse("exp(z)"), 5) == Classification.ESCAPING
    assert classify_point(parse("1/pow(z,2)"), 1) == Classification.BOUNDED


def test_pole_forces_unresolved():
    assert classify_point(parse("1/pow(z,2)"), 0) == Classification.UNRESOLVED
    assert classify_point(parse("1/z"), 0) == Classification.UNRESOLVED


def test_rotation_is_bounded_without_a_cycle():
    # |a| = 1 up to rounding; angles never realign within tolerance, so
    # the orbit completes max_iter steps with constant modulus.
    a = complex(math.cos(1.0), math.sin(1.0))
    f = parse(f"({a.real!r}+{a.imag!r}*i)*z")
    rec = iterate_orbit(f, 0.7 + 0.1j)
    assert rec.termination == Completed()
    assert classify(rec) == Classification.BOUNDED
    assert rec.moduli.max() <= DEFAULT_CONFIG.r_bound


def test_geometric_growth_escapes_via_completed_tail():
    # 1.4^1000 ~ 1e146 stays below the overflow guard, so the orbit
    # completes with a tail far beyond r_esc and a final global maximum.
    rec = iterate_orbit(parse("1.4*z"), 1)
    assert rec.termination == Completed()
    assert rec.tail_min > DEFAULT_CONFIG.r_esc
    assert rec.moduli[-1] == rec.global_max
    assert classify(rec) == Classification.ESCAPING


def test_verdict_is_a_partition():
    f = parse("1/pow(z,2)")
    for seed in (0, 0.5, 1, 1j, 2, 0.1 + 0.1j):
        verdict = classify_point(f, seed)
        assert verdict in (
            Classification.ESCAPING,
            Classification.BOUNDED,
            Classification.BUNGEE,
            Classification.UNRESOLVED,
        )


# --- soundness, read back from the records -------------------------------


def test_bounded_via_completed_soundness():
    a = complex(math.cos(1.0), math.sin(1.0))
    f = parse(f"({a.real!r}+{a.imag!r}*i)*z")
    rec = iterate_orbit(f, 0.9)
    assert classify(rec) == Classification.BOUNDED
    assert isinstance(rec.termination, Completed)
    assert np.all(rec.moduli <= DEFAULT_CONFIG.r_bound)


def test_bungee_soundness():
    f = parse("1/pow(z,2)")
    for seed in (0.5, 0.3, 1.7, 0.4 + 0.2j):
        rec = iterate_orbit(f, seed)
        if classify(rec) != Classification.BUNGEE:
            continue
        assert rec.returns >= DEFAULT_CONFIG.min_alternations
        values = [v for _, v in rec.peaks]
        assert all(
            values[j + 1] >= DEFAULT_CONFIG.peak_growth * values[j]
            for j in range(len(values) - 1)
        )


def test_escaping_via_completed_tail_soundness():
    rec = iterate_orbit(parse("1.4*z"), 1)
    assert classify(rec) == Classification.ESCAPING
    assert isinstance(rec.termination, Completed)
    window = rec.moduli[-DEFAULT_CONFIG.tail_window :]
    assert window.min() > DEFAULT_CONFIG.r_esc
    assert rec.moduli[-1] == rec.global_max


def test_monotone_refinement_keeps_cycle_verdicts():
    f = parse("0.3*exp(z)")
    wider = ClassifierConfig(max_iter=4000)
    for seed in (0, -1, -2, 0.5j, -0.5 - 0.3j, 0.25):
        rec = iterate_orbit(f, seed)
        if not isinstance(rec.termination, CycleFound):
            continue
        assert classify(rec) == Classification.BOUNDED
        assert classify_point(f, seed, wider) == Classification.BOUNDED


def test_slow_escape_needs_the_override_config():
    drift = parse("z+sin(z)+2*pi")
    assert classify_point(drift, 0) != Classification.ESCAPING
    assert classify_point(drift, 0, DRIFT_CFG) == Classification.ESCAPING


# --- determinism and batch agreement -------------------------------------


def test_identical_inputs_give_identical_records():
    f = parse("1/pow(z,2)")
    a = iterate_orbit(f, 0.5)
    b = iterate_orbit(f, 0.5)
    assert np.array_equal(a.values, b.values)
    assert a.peaks == b.peaks and a.returns == b.returns
    assert a.termination == b.termination
    assert (a.tail_min, a.tail_max, a.global_max) == (b.tail_min, b.tail_max, b.global_max)
    assert classify(a) == classify(b)


def test_batch_agrees_with_scalar_path():
    f = parse("1/pow(z,2)")
    seeds = np.array([0.5, 1, 1j, 2, 0.1 + 0.1j, 0], dtype=np.complex128)
    batch = classify_batch(f, seeds)
    for seed, verdict in zip(seeds, batch):
        assert classify_point(f, complex(seed)) == Classification(int(verdict))


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["1/pow(z,2)", "0.3*exp(z)", "z+sin(z)+2*pi", "exp(z)"]),
    st.builds(
        complex,
        st.floats(-2, 2).map(lambda x: round(x, 3)),
        st.floats(-2, 2).map(lambda x: round(x, 3)),
    ),
)
def test_batch_agrees_with_scalar_path_randomized(text, seed):
    f = parse(text)
    batch = classify_batch(f, np.array([seed], dtype=np.complex128))
    assert classify_point(f, seed) == Classification(int(batch[0]))


def test_classification_str_names():
    assert str(Classification.ESCAPING) == "Escaping"
    assert str(Classification.BOUNDED) == "Bounded"
    assert str(Classification.BUNGEE) == "Bungee"
    assert str(Classification.UNRESOLVED) == "Unresolved"
    assert [int(c) for c in Classification] == [0, 1, 2, 3]

"""Curated example maps with metadata flags and checkable expectations.

Each entry records one or two concrete maps, what is known about them
(commutation, asymptotic-value hypotheses, whether the map is entire),
an optional classifier configuration suited to their dynamics, and a
list of expectations. Expectations carry no cached truth values: every
one is recomputed from the maps by `run_example`, and each states in
its ``source`` why the expected outcome is forced.

The ``scale`` argument of `run_example` shrinks sample grids for quick
smoke runs; ``scale=1.0`` runs every expectation at full size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .expr import FunctionExpr, evaluate, parse
from .orbit import (
    Classification,
    ClassifierConfig,
    DEFAULT_CONFIG,
    classify,
    classify_batch,
    classify_point,
    iterate_orbit,
)
from .relations import RelationId, SamplePlan, check_permutable, verify_relation

__all__ = [
    "Flag",
    "Expectation",
    "ExpectationResult",
    "ExampleEntry",
    "ExampleReport",
    "list_examples",
    "get_example",
    "run_example",
    "export_registry_json",
]


@dataclass(frozen=True)
class Flag:
    """An optional boolean hypothesis plus the note justifying it."""

    value: Optional[bool]
    note: str


@dataclass(frozen=True)
class ExpectationResult:
    description: str
    passed: bool
    measured: dict


@dataclass(frozen=True)
class Expectation:
    """A checkable claim about an entry; ``run`` recomputes it from scratch."""

    description: str
    source: str
    run: Callable[["ExampleEntry", ClassifierConfig, float], ExpectationResult]

    def to_dict(self) -> dict:
        return {"description": self.description, "source": self.source}


@dataclass(frozen=True)
class ExampleEntry:
    id: str
    summary: str
    f: FunctionExpr
    g: Optional[FunctionExpr]
    conjugation: Optional[tuple[complex, complex]]
    permutable: Flag
    no_finite_asymptotic_values: Flag
    oracle_not_entire: bool
    cfg_override: Optional[ClassifierConfig]
    expectations: tuple[Expectation, ...]

    def config(self) -> ClassifierConfig:
        return self.cfg_override if self.cfg_override is not None else DEFAULT_CONFIG

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "summary": self.summary,
            "f": str(self.f),
            "g": None if self.g is None else str(self.g),
            "conjugation": (
                None
                if self.conjugation is None
                else [
                    [self.conjugation[0].real, self.conjugation[0].imag],
                    [self.conjugation[1].real, self.conjugation[1].imag],
                ]
            ),
            "flags": {
                "permutable": {
                    "value": self.permutable.value,
                    "note": self.permutable.note,
                },
                "no_finite_asymptotic_values": {
                    "value": self.no_finite_asymptotic_values.value,
                    "note": self.no_finite_asymptotic_values.note,
                },
                "oracle_not_entire": self.oracle_not_entire,
            },
            "cfg_override": (
                None if self.cfg_override is None else self.cfg_override.to_dict()
            ),
            "expectations": [e.to_dict() for e in self.expectations],
        }


@dataclass(frozen=True)
class ExampleReport:
    example: str
    results: tuple[ExpectationResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "passed": self.passed,
            "results": [
                {
                    "description": r.description,
                    "passed": r.passed,
                    "measured": r.measured,
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _scaled(n: int, scale: float, floor: int = 2) -> int:
    return max(floor, int(round(n * scale)))


def _fixed_point_bisection(lam: float, lo: float, hi: float) -> float:
    """Root of lam*e^q = q by bisection; the bracket must change sign."""
    f_lo = lam * math.exp(lo) - lo
    f_hi = lam * math.exp(hi) - hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError("bisection bracket does not change sign")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = lam * math.exp(mid) - mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- expectation bodies ------------------------------------------------------


def _sine_drift(entry: ExampleEntry, cfg: ClassifierConfig, scale: float):
    z = 0j
    worst = 0.0
    for n in range(1, 31):
        z = evaluate(entry.g, z)
        worst = max(worst, abs(z - 2.0 * math.pi * n))
    return ExpectationResult(
        description=_SINE_DRIFT_DESC,
        passed=worst <= 1e-6,
        measured={"max_drift_dev": worst, "steps": 30},
    )


def _sine_zero_escapes(entry, cfg, scale):
    verdict = classify_point(entry.g, 0j, cfg)
    return ExpectationResult(
        description=_SINE_ZERO_ESC_DESC,
        passed=verdict is Classification.ESCAPING,
        measured={"verdict": str(verdict)},
    )


def _sine_zero_fixed(entry, cfg, scale):
    verdict = classify_point(entry.f, 0j, cfg)
    return ExpectationResult(
        description=_SINE_ZERO_FIX_DESC,
        passed=verdict is Classification.BOUNDED,
        measured={"verdict": str(verdict)},
    )


def _sine_lattice_bounded(entry, cfg, scale):
    verdicts = {
        k: str(classify_point(entry.f, complex(k * math.pi), cfg))
        for k in range(-3, 4)
    }
    return ExpectationResult(
        description=_SINE_LATTICE_DESC,
        passed=all(v == "Bounded" for v in verdicts.values()),
        measured={"verdicts": verdicts},
    )


def _sine_kswap(entry, cfg, scale):
    n = _scaled(10, scale)
    plan = SamplePlan.grid(-1.0, 1.0, -1.0, 1.0, n, n)
    rep = verify_relation(RelationId.K_SWAP, entry.f, plan, g=entry.g, cfg=cfg)
    resolved_fraction = rep.evaluated_count / rep.sample_count
    return ExpectationResult(
        description=_SINE_KSWAP_DESC,
        passed=rep.violation_rate == 0.0 and resolved_fraction >= 0.8,
        measured={
            "violation_rate": rep.violation_rate,
            "evaluated_count": rep.evaluated_count,
            "sample_count": rep.sample_count,
        },
    )


def _rational_half_bungee(entry, cfg, scale):
    verdict = classify_point(entry.f, 0.5 + 0j, cfg)
    return ExpectationResult(
        description=_RAT_HALF_DESC,
        passed=verdict is Classification.BUNGEE,
        measured={"verdict": str(verdict)},
    )


def _rational_one_bounded(entry, cfg, scale):
    verdict = classify_point(entry.f, 1.0 + 0j, cfg)
    return ExpectationResult(
        description=_RAT_ONE_DESC,
        passed=verdict is Classification.BOUNDED,
        measured={"verdict": str(verdict)},
    )


def _annulus_seeds(count: int) -> np.ndarray:
    k = np.arange(count)
    radius = 0.1 + 0.8 * k / max(count - 1, 1)
    angle = 2.0 * math.pi * ((k * 0.6180339887498949) % 1.0)
    return radius * np.exp(1j * angle)


def _rational_annulus(entry, cfg, scale):
    seeds = _annulus_seeds(_scaled(500, scale, floor=16))
    codes = classify_batch(entry.f, seeds, cfg)
    bungee_rate = float(np.mean(codes == int(Classification.BUNGEE)))
    bounded = int(np.sum(codes == int(Classification.BOUNDED)))
    return ExpectationResult(
        description=_RAT_ANNULUS_DESC,
        passed=bungee_rate >= 0.95 and bounded == 0,
        measured={
            "bungee_rate": bungee_rate,
            "bounded_count": bounded,
            "sample_count": int(seeds.size),
        },
    )


def _rational_circle(entry, cfg, scale):
    count = 64 if scale >= 1.0 else 16
    seeds = np.exp(2j * math.pi * np.arange(count) / count)
    codes = classify_batch(entry.f, seeds, cfg)
    bounded = int(np.sum(codes == int(Classification.BOUNDED)))
    return ExpectationResult(
        description=_RAT_CIRCLE_DESC,
        passed=bounded == count,
        measured={"bounded_count": bounded, "sample_count": count},
    )


def _exp_basin(entry, cfg, scale):
    q = _fixed_point_bisection(0.3, 0.0, 1.0)
    seeds = np.linspace(-2.0, 0.0, 17)
    worst = 0.0
    all_bounded = True
    for s in seeds:
        rec = iterate_orbit(entry.f, complex(s), cfg)
        if classify(rec, cfg) is not Classification.BOUNDED:
            all_bounded = False
        worst = max(worst, abs(rec.values[-1] - q))
    return ExpectationResult(
        description=_EXP_BASIN_DESC,
        passed=all_bounded and worst <= 1e-6,
        measured={"fixed_point": q, "max_limit_dev": worst, "seeds": 17},
    )


def _exp_escape(entry, cfg, scale):
    verdict = classify_point(entry.f, 3.0 + 0j, cfg)
    return ExpectationResult(
        description=_EXP_ESCAPE_DESC,
        passed=verdict is Classification.ESCAPING,
        measured={"verdict": str(verdict)},
    )


def _exp_conjugacy(entry, cfg, scale):
    a, b = entry.conjugation
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, _scaled(25, scale), _scaled(20, scale))
    rep = verify_relation(
        RelationId.CONJUGACY_TRANSPORT, entry.f, plan, a=a, b=b, cfg=cfg
    )
    return ExpectationResult(
        description=_EXP_CONJ_DESC,
        passed=rep.violation_rate <= 0.01 and rep.evaluated_count > 0,
        measured={
            "violation_rate": rep.violation_rate,
            "evaluated_count": rep.evaluated_count,
            "sample_count": rep.sample_count,
        },
    )


def _exp_conjugacy_identity(entry, cfg, scale):
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, _scaled(25, scale), _scaled(20, scale))
    rep = verify_relation(
        RelationId.CONJUGACY_TRANSPORT, entry.f, plan, a=1 + 0j, b=0j, cfg=cfg
    )
    return ExpectationResult(
        description=_EXP_CONJ_ID_DESC,
        passed=rep.violation_rate == 0.0,
        measured={
            "violation_rate": rep.violation_rate,
            "evaluated_count": rep.evaluated_count,
        },
    )


def _translate_permutes(entry, cfg, scale):
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, _scaled(20, scale), _scaled(10, scale))
    res = check_permutable(entry.f, entry.g, plan)
    return ExpectationResult(
        description=_TRANS_PERM_DESC,
        passed=res.permutable and res.max_dev < 1e-9,
        measured={"max_dev": res.max_dev, "checked": res.checked},
    )


def _translate_disjoint(entry, cfg, scale):
    n = _scaled(200, scale)
    plan = SamplePlan.grid(-3.0, 3.0, -3.0, 3.0, n, n)
    rep = verify_relation(
        RelationId.DISJOINT_K_AND_BU, entry.f, plan, g=entry.g, cfg=cfg
    )
    return ExpectationResult(
        description=_TRANS_DISJOINT_DESC,
        passed=len(rep.violations) == 0,
        measured={
            "violations": len(rep.violations),
            "evaluated_count": rep.evaluated_count,
            "sample_count": rep.sample_count,
        },
    )


# Slow linear drift needs a longer budget and lower radii to resolve as
# escape within the iteration limit; the tighter config applies to this
# expectation only.
_DRIFT_CFG = ClassifierConfig(max_iter=2000, r_bound=100.0, r_esc=1e3)


def _translate_escape_invariant(entry, cfg, scale):
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, _scaled(20, scale), _scaled(10, scale))
    rep = verify_relation(
        RelationId.ESCAPING_INVARIANCE,
        entry.f,
        plan,
        g=entry.g,
        cfg=_DRIFT_CFG,
        no_finite_asymptotic_values=entry.no_finite_asymptotic_values.value,
        hypothesis_source=f"registry:{entry.id}",
    )
    return ExpectationResult(
        description=_TRANS_ESC_INV_DESC,
        passed=rep.violation_rate == 0.0 and rep.evaluated_count > 0,
        measured={
            "violation_rate": rep.violation_rate,
            "evaluated_count": rep.evaluated_count,
        },
    )


def _halfplane_strips(entry, cfg, scale):
    n = _scaled(100, scale)
    plan = SamplePlan.grid(-4.0, 4.0, -4.0, 4.0, n, n)
    rep = verify_relation(RelationId.STRIP_CONTAINMENT, entry.f, plan, cfg=cfg)
    return ExpectationResult(
        description=_HALF_STRIPS_DESC,
        passed=rep.violation_rate <= 0.01,
        measured={
            "violation_rate": rep.violation_rate,
            "violations": len(rep.violations),
            "evaluated_count": rep.evaluated_count,
        },
    )


def _halfplane_disjoint_escape(entry, cfg, scale):
    n = _scaled(100, scale)
    plan = SamplePlan.grid(-4.0, 4.0, -4.0, 4.0, n, n)
    seeds = plan.seeds()
    cls_f = classify_batch(entry.f, seeds, cfg)
    cls_g = classify_batch(entry.g, seeds, cfg)
    esc = int(Classification.ESCAPING)
    both = int(np.sum((cls_f == esc) & (cls_g == esc)))
    return ExpectationResult(
        description=_HALF_DISJOINT_DESC,
        passed=both == 0,
        measured={
            "both_escaping": both,
            "escaping_under_f": int(np.sum(cls_f == esc)),
            "escaping_under_g": int(np.sum(cls_g == esc)),
        },
    )


def _periodic_not_permutable(entry, cfg, scale):
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, _scaled(20, scale), _scaled(10, scale))
    res = check_permutable(entry.f, entry.g, plan)
    return ExpectationResult(
        description=_PERIODIC_NOT_PERM_DESC,
        passed=(not res.permutable) and res.max_dev > 1.0,
        measured={"max_dev": res.max_dev, "checked": res.checked},
    )


def _periodic_verdict_equality(entry, cfg, scale):
    n = _scaled(10, scale)
    plan = SamplePlan.grid(-2.0, 2.0, -2.0, 2.0, n, n)
    seeds = plan.seeds()
    cls_f = classify_batch(entry.f, seeds, cfg)
    cls_g = classify_batch(entry.g, seeds, cfg)
    unres = int(Classification.UNRESOLVED)
    both = (cls_f != unres) & (cls_g != unres)
    mismatches = int(np.sum(both & (cls_f != cls_g)))
    return ExpectationResult(
        description=_PERIODIC_EQ_DESC,
        passed=mismatches == 0 and int(both.sum()) > 0,
        measured={
            "mismatches": mismatches,
            "both_resolved": int(both.sum()),
            "sample_count": int(seeds.size),
        },
    )


# --- descriptions ------------------------------------------------------------

_SINE_DRIFT_DESC = "iterates of 0 under g advance by one sine period per step"
_SINE_ZERO_ESC_DESC = "0 escapes under the drifted map g"
_SINE_ZERO_FIX_DESC = "0 is a fixed point of f and classifies Bounded"
_SINE_LATTICE_DESC = "integer multiples of pi classify Bounded under f"
_SINE_KSWAP_DESC = (
    "bounded-core membership transports through the swapped composition (KSwap)"
)
_RAT_HALF_DESC = "0.5 alternates between huge and tiny moduli and classifies Bungee"
_RAT_ONE_DESC = "1 is a fixed point and classifies Bounded"
_RAT_ANNULUS_DESC = (
    "seeds in the annulus 0.1 <= |z| <= 0.9 classify Bungee at rate >= 0.95, "
    "never Bounded"
)
_RAT_CIRCLE_DESC = "unit-circle seeds classify Bounded"
_EXP_BASIN_DESC = (
    "real seeds in [-2, 0] classify Bounded and settle onto the attracting "
    "fixed point located by bisection"
)
_EXP_ESCAPE_DESC = "the real seed 3 classifies Escaping"
_EXP_CONJ_DESC = "classification transports through the affine conjugacy 2z+1"
_EXP_CONJ_ID_DESC = "the identity conjugacy transports every verdict exactly"
_TRANS_PERM_DESC = "the pair commutes: both composition orders agree numerically"
_TRANS_DISJOINT_DESC = (
    "the pair's bounded cores are disjoint and their bungee sets are disjoint"
)
_TRANS_ESC_INV_DESC = "the image under f of an escaping seed of g still escapes under g"
_HALF_STRIPS_DESC = (
    "escaping seeds lie in the left-half-plane strips around odd multiples of pi"
)
_HALF_DISJOINT_DESC = "the escaping sets of the two maps are disjoint"
_PERIODIC_NOT_PERM_DESC = "the two composition orders disagree: the pair does not commute"
_PERIODIC_EQ_DESC = (
    "translating the map by its period leaves every resolved verdict unchanged"
)


def _build_registry() -> dict:
    sine_f = parse("z+sin(z)")
    sine_g = parse("z+sin(z)+2*pi")
    sine_cfg = ClassifierConfig(max_iter=2000, r_bound=100.0, r_esc=1e3)
    entries = [
        ExampleEntry(
            id="ex_sine_pair",
            summary=(
                "z+sin(z) and its translate by the period 2*pi: a commuting "
                "pair whose drifted member escapes along a line"
            ),
            f=sine_f,
            g=sine_g,
            conjugation=None,
            permutable=Flag(
                True,
                "translating by a period of the sine term commutes with the map",
            ),
            no_finite_asymptotic_values=Flag(None, "not stated for this pair"),
            oracle_not_entire=False,
            cfg_override=sine_cfg,
            expectations=(
                Expectation(
                    _SINE_DRIFT_DESC,
                    "sin vanishes at every multiple of 2*pi, so the n-th "
                    "iterate of 0 is exactly 2*pi*n in exact arithmetic",
                    _sine_drift,
                ),
                Expectation(
                    _SINE_ZERO_ESC_DESC,
                    "the linear drift 2*pi*n is unbounded and never returns",
                    _sine_zero_escapes,
                ),
                Expectation(
                    _SINE_ZERO_FIX_DESC,
                    "f(0) = 0 + sin(0) = 0",
                    _sine_zero_fixed,
                ),
                Expectation(
                    _SINE_LATTICE_DESC,
                    "sin vanishes at k*pi, so each such point is fixed",
                    _sine_lattice_bounded,
                ),
                Expectation(
                    _SINE_KSWAP_DESC,
                    "membership equivalence between z under f(g) and g(z) "
                    "under g(f), checked per seed",
                    _sine_kswap,
                ),
            ),
        ),
        ExampleEntry(
            id="ex_rational_bungee",
            summary=(
                "the reciprocal square 1/z^2: a rational oracle whose "
                "alternating orbits are provably bungee off the unit circle "
                "and bounded on it"
            ),
            f=parse("1/pow(z,2)"),
            g=None,
            conjugation=None,
            permutable=Flag(None, "single map; not applicable"),
            no_finite_asymptotic_values=Flag(None, "not stated for this map"),
            oracle_not_entire=True,
            cfg_override=None,
            expectations=(
                Expectation(
                    _RAT_HALF_DESC,
                    "|z| < 1 forces moduli to alternate through r^(-2^n) and "
                    "r^(2^n): one subsequence escapes, one collapses to 0",
                    _rational_half_bungee,
                ),
                Expectation(
                    _RAT_ONE_DESC,
                    "1/1^2 = 1",
                    _rational_one_bounded,
                ),
                Expectation(
                    _RAT_ANNULUS_DESC,
                    "every seed with 0 < |z| < 1 has the alternating modulus "
                    "pattern; a spiral sample across the annulus checks it",
                    _rational_annulus,
                ),
                Expectation(
                    _RAT_CIRCLE_DESC,
                    "|1/z^2| = 1 when |z| = 1, so the whole orbit stays on "
                    "the unit circle",
                    _rational_circle,
                ),
            ),
        ),
        ExampleEntry(
            id="ex_exponential_family",
            summary=(
                "the scaled exponential 0.3*exp(z), with 0.3 inside (0, 1/e): "
                "the real axis around the origin sits in the attracting basin "
                "of its fixed point"
            ),
            f=parse("0.3*exp(z)"),
            g=None,
            conjugation=(2 + 0j, 1 + 0j),
            permutable=Flag(None, "single map; not applicable"),
            no_finite_asymptotic_values=Flag(
                False, "0 is a finite asymptotic value of the scaled exponential"
            ),
            oracle_not_entire=False,
            cfg_override=None,
            expectations=(
                Expectation(
                    _EXP_BASIN_DESC,
                    "0.3 < 1/e puts an attracting fixed point on (0, 1) whose "
                    "basin contains the real segment; bisection of "
                    "0.3*e^q = q locates it independently",
                    _exp_basin,
                ),
                Expectation(
                    _EXP_ESCAPE_DESC,
                    "0.3*e^3 > 3 starts a monotone, unbounded real orbit",
                    _exp_escape,
                ),
                Expectation(
                    _EXP_CONJ_DESC,
                    "conjugating by an affine map carries orbits to orbits, "
                    "so verdicts agree at image points",
                    _exp_conjugacy,
                ),
                Expectation(
                    _EXP_CONJ_ID_DESC,
                    "the identity conjugacy compares each verdict with itself",
                    _exp_conjugacy_identity,
                ),
            ),
        ),
        ExampleEntry(
            id="ex_exp_translate",
            summary=(
                "z+1+exp(-z) and its translate by 2*pi*i: a commuting entire "
                "pair with drifting orbits and complementary class structure"
            ),
            f=parse("z+1+exp(-z)"),
            g=parse("z+1+exp(-z)+2*pi*i"),
            conjugation=None,
            permutable=Flag(
                True,
                "translating by the period of exp(-z) commutes with the map",
            ),
            no_finite_asymptotic_values=Flag(
                True,
                "hypothesis stated for this pair's escape arguments",
            ),
            oracle_not_entire=False,
            cfg_override=None,
            expectations=(
                Expectation(
                    _TRANS_PERM_DESC,
                    "exp(-z) has period 2*pi*i, so both orders equal the "
                    "same map composed with the translation",
                    _translate_permutes,
                ),
                Expectation(
                    _TRANS_DISJOINT_DESC,
                    "orbits under the translate gain 2*pi*i per step relative "
                    "to the base map, so no seed can stay bounded, or "
                    "alternate, under both",
                    _translate_disjoint,
                ),
                Expectation(
                    _TRANS_ESC_INV_DESC,
                    "f permutes with g, so f maps orbits of g to orbits of g",
                    _translate_escape_invariant,
                ),
            ),
        ),
        ExampleEntry(
            id="ex_halfplane_pair",
            summary=(
                "exp(-z-1)+1 and exp(z-1)-1: mirror-family maps whose "
                "escaping sets live in opposite half-planes"
            ),
            f=parse("exp(-z-1)+1"),
            g=parse("exp(z-1)-1"),
            conjugation=None,
            permutable=Flag(None, "not stated for this pair"),
            no_finite_asymptotic_values=Flag(
                False,
                "each map tends to a finite constant far into one half-plane",
            ),
            oracle_not_entire=False,
            cfg_override=None,
            expectations=(
                Expectation(
                    _HALF_STRIPS_DESC,
                    "escape forces iterates ever deeper into the left "
                    "half-plane, which requires the exponent's imaginary part "
                    "to stay near an odd multiple of pi",
                    _halfplane_strips,
                ),
                Expectation(
                    _HALF_DISJOINT_DESC,
                    "one map escapes only into left-half-plane strips, the "
                    "mirror-family map only into right-half-plane strips, so "
                    "no seed escapes under both",
                    _halfplane_disjoint_escape,
                ),
            ),
        ),
        ExampleEntry(
            id="ex_periodic_translate",
            summary=(
                "exp(z) and exp(z)+2*pi*i: a map translated by one of its own "
                "periods (higher iterate translates follow the same pattern "
                "but are not cataloged)"
            ),
            f=parse("exp(z)"),
            g=parse("exp(z)+2*pi*i"),
            conjugation=None,
            permutable=Flag(
                False,
                "direct evaluation at 0 separates the two orders by 2*pi*i",
            ),
            no_finite_asymptotic_values=Flag(
                False, "0 is a finite asymptotic value of exp"
            ),
            oracle_not_entire=False,
            cfg_override=None,
            expectations=(
                Expectation(
                    _PERIODIC_NOT_PERM_DESC,
                    "exp(w+2*pi*i) = exp(w) makes the inner translation "
                    "vanish in one order but not the other",
                    _periodic_not_permutable,
                ),
                Expectation(
                    _PERIODIC_EQ_DESC,
                    "g^n = f^n + 2*pi*i for n >= 1 because exp absorbs the "
                    "translation, so every orbit differs by one bounded shift",
                    _periodic_verdict_equality,
                ),
            ),
        ),
    ]
    return {e.id: e for e in entries}


_REGISTRY = _build_registry()


def list_examples() -> list[tuple[str, str]]:
    """All example ids with one-line summaries, in stable catalog order."""
    return [(e.id, e.summary) for e in _REGISTRY.values()]


def get_example(example_id: str) -> ExampleEntry:
    """Look up one entry; unknown ids raise KeyError."""
    try:
        return _REGISTRY[example_id]
    except KeyError:
        raise KeyError(f"unknown example id: {example_id!r}") from None


def run_example(
    example_id: str,
    cfg: Optional[ClassifierConfig] = None,
    scale: float = 1.0,
) -> ExampleReport:
    """Recompute every expectation of an entry and report pass/fail.

    ``cfg`` replaces the entry's configuration for all expectations
    (single expectations may still document and use a specialized one);
    ``scale`` in (0, 1] shrinks sample sizes proportionally.
    """
    if not 0 < scale <= 1:
        raise ValueError("scale must be in (0, 1]")
    entry = get_example(example_id)
    effective = cfg if cfg is not None else entry.config()
    results = tuple(exp.run(entry, effective, scale) for exp in entry.expectations)
    return ExampleReport(example=entry.id, results=results)


def export_registry_json() -> str:
    """The whole catalog as a JSON array, expressions in grammar syntax."""
    return json.dumps([e.to_dict() for e in _REGISTRY.values()])

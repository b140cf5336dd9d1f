"""Orbit iteration and empirical classification of seeds.

A seed is iterated under a map until one of: the iteration budget runs
out (`Completed`), the orbit leaves the trusted dynamic range or an
evaluation event fires (`Overflowed`), a near-repeat of an earlier value
is found (`CycleFound`), or a pole is hit (`PoleHit`, oracle maps only).

Along the way the orbit's excursions are tracked against two radii. A
*peak* is registered when the modulus first exceeds ``r_esc`` after a
visit below ``r_bound``; its value is the largest modulus attained before
the orbit next descends below ``r_bound``, and that descent counts as a
*return*. Repeated peak/return alternation with geometrically growing
peaks is the signature of a bungee orbit: one subsequence of the orbit
escapes while another stays bounded.

Verdicts are assigned by the first matching rule:

1. Bounded: a detected cycle whose moduli all stay within ``r_bound``,
   or a completed orbit that never left ``r_bound``.
2. Bungee: at least ``min_alternations`` returns with every consecutive
   peak pair growing by factor ``peak_growth``, regardless of how the
   orbit terminated.
3. Escaping: overflow with fewer than ``min_alternations`` returns, or a
   completed orbit whose last ``tail_window`` moduli all exceed ``r_esc``
   with the final iterate attaining the orbit's maximum.
4. Unresolved otherwise. A pole hit always forces Unresolved.

The same vectorized engine drives single-point classification, batch
classification and grid rendering, so verdicts are identical across all
of them by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence, Union

import numpy as np

from .expr import EVENT_NONE, EVENT_POLE, FunctionExpr, eval_array

__all__ = [
    "Classification",
    "ClassifierConfig",
    "DEFAULT_CONFIG",
    "Completed",
    "Overflowed",
    "CycleFound",
    "PoleHit",
    "Termination",
    "OrbitRecord",
    "BatchState",
    "detect_cycle",
    "iterate_orbit",
    "classify",
    "classify_point",
    "classify_batch",
]


class Classification(enum.IntEnum):
    """Empirical orbit classes; values double as raster codes."""

    ESCAPING = 0
    BOUNDED = 1
    BUNGEE = 2
    UNRESOLVED = 3

    def __str__(self) -> str:  # "Escaping" rather than "Classification.ESCAPING"
        return self.name.capitalize()


@dataclass(frozen=True)
class ClassifierConfig:
    """Finite-precision proxies for the escape/bound/alternation tests.

    ``overflow_guard`` bounds the modulus range the iteration trusts:
    an orbit is terminated as overflowed once its modulus exceeds the
    guard or drops below its reciprocal (while nonzero), since one more
    step of a power-type map would leave double range either way.
    """

    max_iter: int = 1000
    r_bound: float = 1e3
    r_esc: float = 1e6
    tail_window: int = 50
    min_alternations: int = 2
    peak_growth: float = 2.0
    cycle_tol: float = 1e-12
    overflow_guard: float = 1e150

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not 0 < self.r_bound < self.r_esc < self.overflow_guard:
            raise ValueError("need 0 < r_bound < r_esc < overflow_guard")
        if not 1 <= self.tail_window < self.max_iter:
            raise ValueError("tail_window must satisfy 1 <= W < max_iter")
        if self.min_alternations < 2:
            raise ValueError("min_alternations must be at least 2")
        if self.peak_growth <= 1:
            raise ValueError("peak_growth must exceed 1")
        if self.cycle_tol <= 0:
            raise ValueError("cycle_tol must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierConfig":
        return cls(**data)

    def replace(self, **changes) -> "ClassifierConfig":
        merged = {**asdict(self), **changes}
        return ClassifierConfig(**merged)


DEFAULT_CONFIG = ClassifierConfig()


@dataclass(frozen=True)
class Completed:
    """The iteration budget was exhausted without another terminator."""


@dataclass(frozen=True)
class Overflowed:
    """The orbit left the trusted range.

    ``step`` is the index of the offending iterate: if that iterate's
    value crossed the dynamic-range guard it is the last recorded index,
    and if evaluation itself overflowed it is one past the last recorded
    index (the value never materialized).
    """

    step: int


@dataclass(frozen=True)
class CycleFound:
    """A near-repeat with the given period, first visible at ``entry``."""

    period: int
    entry: int


@dataclass(frozen=True)
class PoleHit:
    """Division by exact zero at iterate ``step`` (oracle maps only)."""

    step: int


Termination = Union[Completed, Overflowed, CycleFound, PoleHit]


@dataclass(frozen=True)
class OrbitRecord:
    """Everything the classifier needs to know about one finished orbit.

    ``values[n]`` is the n-th iterate (``values[0]`` the seed), ``moduli``
    their absolute values, ``peaks`` the registered escape peaks as
    ``(index, modulus)`` pairs, ``returns`` the count of descents below
    ``r_bound`` after a peak. Tail statistics cover the last
    ``tail_window`` recorded moduli.
    """

    seed: complex
    values: np.ndarray
    moduli: np.ndarray
    peaks: tuple[tuple[int, float], ...]
    returns: int
    termination: Termination
    tail_min: float
    tail_max: float
    global_max: float


# --- engine ----------------------------------------------------------------

_RUNNING = 0
_COMPLETED = 1
_OVERFLOWED = 2
_CYCLE = 3
_POLE = 4


@dataclass
class BatchState:
    """Per-seed final state of a batch run (parallel arrays)."""

    z: np.ndarray
    kind: np.ndarray
    term_step: np.ndarray
    period: np.ndarray
    cycle_max: np.ndarray
    n_peaks: np.ndarray
    n_returns: np.ndarray
    last_peak: np.ndarray
    cur_peak: np.ndarray
    in_peak: np.ndarray
    escalation_ok: np.ndarray
    global_max: np.ndarray
    final_modulus: np.ndarray
    tail_min: np.ndarray
    tail_max: np.ndarray


def _run_batch(
    root,
    seeds: np.ndarray,
    cfg: ClassifierConfig,
    history: Optional[list] = None,
) -> BatchState:
    z = np.array(seeds, dtype=np.complex128).ravel()
    n = z.size
    if history is not None and n != 1:
        raise ValueError("history capture supports single-seed runs only")
    if not np.isfinite(z).all():
        raise ValueError("seeds must be finite")

    guard = cfg.overflow_guard
    inv_guard = 1.0 / guard
    tol = cfg.cycle_tol
    tail_from = cfg.max_iter - cfg.tail_window  # steps beyond this feed the tail

    m = np.abs(z)
    kind = np.zeros(n, dtype=np.int8)
    term_step = np.zeros(n, dtype=np.int64)
    period = np.zeros(n, dtype=np.int64)
    cycle_max = np.zeros(n, dtype=np.float64)

    armed = m < cfg.r_bound
    in_peak = np.zeros(n, dtype=bool)
    n_peaks = np.zeros(n, dtype=np.int64)
    n_returns = np.zeros(n, dtype=np.int64)
    last_peak = np.zeros(n, dtype=np.float64)
    cur_peak = np.zeros(n, dtype=np.float64)
    escalation_ok = np.ones(n, dtype=bool)
    global_max = m.copy()
    final_modulus = m.copy()
    tail_min = np.full(n, np.inf)
    tail_max = np.full(n, -np.inf)

    tortoise = z.copy()
    power = np.ones(n, dtype=np.int64)
    lam = np.zeros(n, dtype=np.int64)
    win_max = np.full(n, -np.inf)

    if history is not None:
        history.append(complex(z[0]))

    seed_out = (m > guard) | ((m > 0) & (m < inv_guard))
    if seed_out.any():
        kind[seed_out] = _OVERFLOWED

    for step in range(1, cfg.max_iter + 1):
        idx = np.flatnonzero(kind == _RUNNING)
        if idx.size == 0:
            break
        vals, events = eval_array(root, z[idx])
        failed = events != EVENT_NONE
        if failed.any():
            fi = idx[failed]
            kind[fi] = np.where(events[failed] == EVENT_POLE, _POLE, _OVERFLOWED)
            term_step[fi] = step
            idx = idx[~failed]
            vals = vals[~failed]
        if idx.size == 0:
            continue

        mv = np.abs(vals)
        z[idx] = vals
        final_modulus[idx] = mv
        global_max[idx] = np.maximum(global_max[idx], mv)
        if step > tail_from:
            tail_min[idx] = np.minimum(tail_min[idx], mv)
            tail_max[idx] = np.maximum(tail_max[idx], mv)
        if history is not None:
            history.append(complex(vals[0]))

        below = mv < cfg.r_bound
        pre_in = in_peak[idx]

        ending = pre_in & below
        if ending.any():
            ei = idx[ending]
            n_returns[ei] += 1
            prev = last_peak[ei]
            weak = (prev > 0) & (cur_peak[ei] < cfg.peak_growth * prev)
            escalation_ok[ei] &= ~weak
            last_peak[ei] = cur_peak[ei]
            in_peak[ei] = False
        if below.any():
            armed[idx[below]] = True
        extending = pre_in & ~below
        if extending.any():
            xi = idx[extending]
            cur_peak[xi] = np.maximum(cur_peak[xi], mv[extending])
        starting = ~pre_in & (mv > cfg.r_esc) & armed[idx]
        if starting.any():
            si = idx[starting]
            n_peaks[si] += 1
            in_peak[si] = True
            cur_peak[si] = mv[starting]
            armed[si] = False

        out = (mv > guard) | ((mv > 0) & (mv < inv_guard))
        if out.any():
            oi = idx[out]
            kind[oi] = _OVERFLOWED
            term_step[oi] = step
            idx = idx[~out]
            vals = vals[~out]
            mv = mv[~out]
        if idx.size == 0:
            continue

        lam[idx] += 1
        win_max[idx] = np.maximum(win_max[idx], mv)
        tort = tortoise[idx]
        near = np.abs(vals - tort) <= tol * np.abs(tort)
        if near.any():
            ci = idx[near]
            kind[ci] = _CYCLE
            term_step[ci] = step
            period[ci] = lam[ci]
            cycle_max[ci] = win_max[ci]
            idx = idx[~near]
        if idx.size == 0:
            continue
        checkpoint = lam[idx] == power[idx]
        if checkpoint.any():
            ki = idx[checkpoint]
            tortoise[ki] = z[ki]
            power[ki] *= 2
            lam[ki] = 0
            win_max[ki] = -np.inf

    still = kind == _RUNNING
    kind[still] = _COMPLETED
    term_step[still] = cfg.max_iter

    return BatchState(
        z=z,
        kind=kind,
        term_step=term_step,
        period=period,
        cycle_max=cycle_max,
        n_peaks=n_peaks,
        n_returns=n_returns,
        last_peak=last_peak,
        cur_peak=cur_peak,
        in_peak=in_peak,
        escalation_ok=escalation_ok,
        global_max=global_max,
        final_modulus=final_modulus,
        tail_min=tail_min,
        tail_max=tail_max,
    )


def _verdicts(state: BatchState, cfg: ClassifierConfig) -> np.ndarray:
    pending_weak = state.in_peak & (state.last_peak > 0) & (
        state.cur_peak < cfg.peak_growth * state.last_peak
    )
    escalating = state.escalation_ok & ~pending_weak
    not_pole = state.kind != _POLE

    bounded = ((state.kind == _CYCLE) & (state.cycle_max <= cfg.r_bound)) | (
        (state.kind == _COMPLETED) & (state.global_max <= cfg.r_bound)
    )
    bungee = (
        ~bounded
        & not_pole
        & (state.n_returns >= cfg.min_alternations)
        & escalating
        & (state.n_peaks > 0)
    )
    escaping = (
        ~bounded
        & ~bungee
        & not_pole
        & (
            ((state.kind == _OVERFLOWED) & (state.n_returns < cfg.min_alternations))
            | (
                (state.kind == _COMPLETED)
                & (state.tail_min > cfg.r_esc)
                & (state.final_modulus >= state.global_max)
            )
        )
    )
    codes = np.full(state.kind.shape, int(Classification.UNRESOLVED), dtype=np.int8)
    codes[escaping] = int(Classification.ESCAPING)
    codes[bungee] = int(Classification.BUNGEE)
    codes[bounded] = int(Classification.BOUNDED)
    return codes


def _alternations(moduli: np.ndarray, cfg: ClassifierConfig):
    """Replay the peak/return state machine over a recorded modulus sequence."""
    peaks: list[tuple[int, float]] = []
    returns = 0
    armed = bool(moduli[0] < cfg.r_bound)
    in_peak = False
    for i in range(1, len(moduli)):
        mv = float(moduli[i])
        if in_peak:
            if mv < cfg.r_bound:
                returns += 1
                in_peak = False
                armed = True
            elif mv > peaks[-1][1]:
                peaks[-1] = (i, mv)
        else:
            if armed and mv > cfg.r_esc:
                peaks.append((i, mv))
                in_peak = True
                armed = False
            elif mv < cfg.r_bound:
                armed = True
    return tuple(peaks), returns


def detect_cycle(
    values: Sequence[complex], tol: float
) -> Optional[tuple[int, int]]:
    """Find a near-repeat in an orbit prefix.

    Walks the sequence with a doubling checkpoint (Brent's schedule),
    comparing complex values under relative tolerance ``tol``. Returns
    ``(period, entry)`` for the first match, where ``entry`` is the
    first index at which the orbit agrees with itself one period later,
    or None if the prefix never repeats.
    """
    vals = np.asarray(values, dtype=np.complex128)
    found = None
    tortoise = 0
    power = 1
    lam = 0
    for i in range(1, len(vals)):
        lam += 1
        ref = vals[tortoise]
        if abs(vals[i] - ref) <= tol * abs(ref):
            found = (lam, i)
            break
        if lam == power:
            tortoise = i
            power *= 2
            lam = 0
    if found is None:
        return None
    period, at = found
    for mu in range(len(vals) - period):
        if abs(vals[mu] - vals[mu + period]) <= tol * abs(vals[mu + period]):
            return period, mu
    return period, max(at - period, 0)


def iterate_orbit(
    f: FunctionExpr, z0: complex, cfg: ClassifierConfig = DEFAULT_CONFIG
) -> OrbitRecord:
    """Iterate ``f`` from ``z0`` and record the orbit until termination."""
    seed = complex(z0)
    if not (math.isfinite(seed.real) and math.isfinite(seed.imag)):
        raise ValueError("seed must be finite")
    history: list[complex] = []
    state = _run_batch(f.root, np.array([seed]), cfg, history=history)
    values = np.array(history, dtype=np.complex128)
    moduli = np.abs(values)
    peaks, returns = _alternations(moduli, cfg)
    assert len(peaks) == int(state.n_peaks[0]) and returns == int(state.n_returns[0])

    k = int(state.kind[0])
    if k == _COMPLETED:
        termination: Termination = Completed()
    elif k == _OVERFLOWED:
        termination = Overflowed(int(state.term_step[0]))
    elif k == _POLE:
        termination = PoleHit(int(state.term_step[0]))
    else:
        hit = detect_cycle(values, cfg.cycle_tol)
        assert hit is not None and hit[0] == int(state.period[0])
        termination = CycleFound(hit[0], hit[1])

    window = moduli[-min(cfg.tail_window, len(moduli)) :]
    return OrbitRecord(
        seed=seed,
        values=values,
        moduli=moduli,
        peaks=peaks,
        returns=returns,
        termination=termination,
        tail_min=float(window.min()),
        tail_max=float(window.max()),
        global_max=float(moduli.max()),
    )


def classify(rec: OrbitRecord, cfg: ClassifierConfig = DEFAULT_CONFIG) -> Classification:
    """Assign a verdict to a finished orbit record (first rule wins)."""
    if isinstance(rec.termination, PoleHit):
        return Classification.UNRESOLVED

    if isinstance(rec.termination, CycleFound):
        cycle = rec.moduli[-rec.termination.period :]
        if np.all(cycle <= cfg.r_bound):
            return Classification.BOUNDED
    elif isinstance(rec.termination, Completed):
        if rec.global_max <= cfg.r_bound:
            return Classification.BOUNDED

    values = [v for _, v in rec.peaks]
    escalating = all(
        values[j + 1] >= cfg.peak_growth * values[j] for j in range(len(values) - 1)
    )
    if rec.returns >= cfg.min_alternations and escalating and rec.peaks:
        return Classification.BUNGEE

    if isinstance(rec.termination, Overflowed) and rec.returns < cfg.min_alternations:
        return Classification.ESCAPING
    if isinstance(rec.termination, Completed):
        if rec.tail_min > cfg.r_esc and rec.moduli[-1] >= rec.global_max:
            return Classification.ESCAPING

    return Classification.UNRESOLVED


def classify_point(
    f: FunctionExpr, z0: complex, cfg: ClassifierConfig = DEFAULT_CONFIG
) -> Classification:
    """Iterate from one seed and classify the resulting record."""
    return classify(iterate_orbit(f, z0, cfg), cfg)


def classify_batch(
    f: FunctionExpr,
    seeds: np.ndarray,
    cfg: ClassifierConfig = DEFAULT_CONFIG,
    return_state: bool = False,
):
    """Classify many seeds in one vectorized run.

    Returns an int8 array of `Classification` codes aligned with
    ``seeds``; with ``return_state`` also the final `BatchState`.
    Verdicts agree with `classify_point` at every seed.
    """
    seeds = np.asarray(seeds, dtype=np.complex128)
    state = _run_batch(f.root, seeds.ravel(), cfg)
    codes = _verdicts(state, cfg).reshape(seeds.shape)
    if return_state:
        return codes, state
    return codes

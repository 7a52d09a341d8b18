"""Model selection: structure search, penalty sweeps, substitution search.

Selection is plain enumeration.  Candidates are ranked by the recomputed
sum of squares s; any candidate whose denominator changes sign inside the
data interval is demoted behind every pole-free one, because a pole beats
a slightly larger s as a reason to reject a fit.  Ties prefer fewer total
coefficients, then a smaller denominator degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import DerivativeGridSpec
from .errors import EmptySweep, NegativeAbscissa, NoFeasibleModel, PadefitError
from .fitting import Dataset, FitConfig, FitReport, fit_linearized, fit_regularized
from .rational import pole_scan


@dataclass(frozen=True)
class SearchSpace:
    """Inclusive degree ranges and optional tail/substitution grids.

    l_candidates lists tail powers to try (None entry = no tail).
    q_grid lists substitution exponents; the default tries only the plain
    coordinate.
    """

    n_range: tuple[int, int]
    m_range: tuple[int, int]
    l_candidates: tuple[int, ...] | None = None
    q_grid: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if self.n_range[0] > self.n_range[1] or self.m_range[0] > self.m_range[1]:
            raise ValueError("degree ranges must be nondecreasing")
        if self.n_range[0] < 0 or self.m_range[0] < 0:
            raise ValueError("degrees must be nonnegative")
        if not self.q_grid:
            raise ValueError("q_grid must be nonempty")
        if any(not (q > 0) for q in self.q_grid):
            raise ValueError("substitution exponents must be positive")


@dataclass(frozen=True)
class Candidate:
    """One search row.

    attempt is the raw (n, m, tail_power, x_power) tuple that was tried;
    config is its validated form, None when the structure itself is
    invalid (a tail power not clearing both degrees).  Exactly one of
    report and error is set.
    """

    attempt: tuple[int, int, int | None, float]
    config: FitConfig | None
    report: FitReport | None
    error: str | None

    @property
    def pole_count(self) -> int:
        return 0 if self.report is None else self.report.poles.count


def _rank_key(candidate: Candidate):
    r = candidate.report
    return (r.poles.count > 0, r.s, candidate.config.n + candidate.config.m, candidate.config.m)


def grid_search(
    data: Dataset,
    space: SearchSpace,
    lam: float = 0.0,
    lam1: float = 0.0,
    zero_powers: frozenset[int] = frozenset(),
    *,
    scan_points: int = 1001,
) -> tuple[FitReport, list[Candidate]]:
    """Fit every structure in the space and return the best report plus
    every attempted candidate.

    Combinations whose free-coefficient count exceeds the data size, or
    whose tail power does not clear both degrees, are recorded as failed
    candidates rather than silently skipped.  The search is exhaustive
    and deterministic; candidates are enumerated in q, n, m, l order.

    Raises
    ------
    NoFeasibleModel
        If every candidate failed to produce a report.
    """
    rows: list[Candidate] = []
    tails = space.l_candidates if space.l_candidates is not None else (None,)
    for q in space.q_grid:
        for n in range(space.n_range[0], space.n_range[1] + 1):
            for m in range(space.m_range[0], space.m_range[1] + 1):
                for l in tails:
                    attempt = (n, m, l, q)
                    try:
                        cfg = FitConfig(
                            n=n,
                            m=m,
                            tail_power=l,
                            x_power=q,
                            lam=lam,
                            lam1=lam1,
                            zero_powers=zero_powers,
                        )
                    except ValueError as exc:
                        rows.append(Candidate(attempt, None, None, str(exc)))
                        continue
                    try:
                        report = fit_linearized(data, cfg, scan_points=scan_points)
                    except PadefitError as exc:
                        rows.append(Candidate(attempt, cfg, None, str(exc)))
                        continue
                    rows.append(Candidate(attempt, cfg, report, None))
    fitted = [c for c in rows if c.report is not None]
    if not fitted:
        raise NoFeasibleModel("every candidate in the search space failed")
    best = min(fitted, key=_rank_key)
    return best.report, rows


@dataclass(frozen=True)
class SweepRow:
    """One penalty value and its fit quality; error text when the fit failed."""

    lam: float
    d: float
    d_der: float
    pole_count: int
    error: str | None = None


@dataclass(frozen=True)
class LambdaSweep:
    """Rows of a numerator-penalty sweep, ascending in lam, plus the index
    chosen by the default plateau rule."""

    rows: tuple[SweepRow, ...]
    chosen: int

    def chosen_lam(self) -> float:
        return self.rows[self.chosen].lam


def lambda_sweep(
    data: Dataset,
    config: FitConfig,
    grid,
    der_interval: tuple[float, float] | None = None,
    der_points: int = 40,
    *,
    placement: str = "right",
    scan_points: int = 1001,
) -> LambdaSweep:
    """Refit with each penalty value and tabulate d, d_der and pole count.

    Pole counting and the oscillation measure both run over der_interval
    (default: the data interval), so the sweep judges smoothness on the
    same window throughout.  A failed fit becomes a row with NaN metrics
    and its error text; the sweep itself only fails if the grid is bad.
    """
    lams = [float(v) for v in grid]
    if len(lams) < 2:
        raise EmptySweep("need at least two penalty values")
    if any(v < 0 for v in lams):
        raise ValueError("penalty values must be nonnegative")
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("penalty grid must be strictly ascending")
    interval = der_interval if der_interval is not None else data.interval()
    der_grid = DerivativeGridSpec(interval, der_points, placement)
    rows = []
    for lam in lams:
        cfg = replace(config, lam=lam)
        try:
            report = fit_regularized(data, cfg, der_grid, scan_points=scan_points)
            poles = pole_scan(report.model, interval, scan_points)
            rows.append(SweepRow(lam, report.d, report.d_der, poles.count))
        except PadefitError as exc:
            rows.append(SweepRow(lam, math.nan, math.nan, 0, str(exc)))
    sweep = LambdaSweep(rows=tuple(rows), chosen=0)
    return replace(sweep, chosen=_choose_index(sweep, rel_tol=0.05))


def _choose_index(sweep: LambdaSweep, rel_tol: float) -> int:
    rows = sweep.rows
    for i in range(len(rows) - 1):
        row, nxt = rows[i], rows[i + 1]
        if row.error is not None or nxt.error is not None:
            continue
        if row.pole_count != 0:
            continue
        if abs(nxt.d_der - row.d_der) <= rel_tol * abs(row.d_der):
            return i
    clean = [i for i, r in enumerate(rows) if r.error is None and r.pole_count == 0]
    return clean[-1] if clean else len(rows) - 1


def choose_lambda(sweep: LambdaSweep, rel_tol: float = 0.05) -> float:
    """Smallest pole-free penalty at the onset of the d_der plateau.

    A row qualifies when its oscillation measure differs from the next
    larger penalty's by at most rel_tol relative: past that point extra
    smoothing no longer changes the derivative picture, so the smallest
    such penalty distorts the data least.  Falls back to the largest
    pole-free penalty when no plateau exists (and to the last row if
    every row has poles).  Loosening rel_tol never moves the choice to
    a larger penalty.

    Raises
    ------
    EmptySweep
        If the sweep has fewer than two rows.
    """
    if len(sweep.rows) < 2:
        raise EmptySweep("need at least two rows")
    if not (rel_tol >= 0):
        raise ValueError("rel_tol must be nonnegative")
    return sweep.rows[_choose_index(sweep, rel_tol)].lam


def q_search(
    data: Dataset,
    config: FitConfig,
    q_grid,
    *,
    scan_points: int = 1001,
) -> tuple[float, FitReport]:
    """One fit per substitution exponent; best by s, first grid value wins ties.

    Raises
    ------
    NegativeAbscissa
        If the data has negative abscissae and the grid holds any
        non-integer exponent.
    NoFeasibleModel
        If every exponent fails.
    """
    qs = [float(q) for q in q_grid]
    if not qs:
        raise ValueError("q_grid must be nonempty")
    if any(not (q > 0) for q in qs):
        raise ValueError("substitution exponents must be positive")
    if np.any(data.x < 0.0) and any(not float(q).is_integer() for q in qs):
        raise NegativeAbscissa("non-integer exponents need x >= 0")
    best: tuple[float, FitReport] | None = None
    for q in qs:
        try:
            report = fit_linearized(data, replace(config, x_power=q), scan_points=scan_points)
        except PadefitError:
            continue
        if best is None or report.s < best[1].s:
            best = (q, report)
    if best is None:
        raise NoFeasibleModel("every substitution exponent failed")
    return best


def tune_lambda1(
    data: Dataset,
    config: FitConfig,
    baseline_d_der: float,
    *,
    der_grid: DerivativeGridSpec,
    pole_interval: tuple[float, float] | None = None,
    rel_window: float = 0.10,
    coarse=None,
    refine_step: float = 0.01,
    scan_points: int = 1001,
) -> tuple[float, FitReport]:
    """Coarse-to-fine denominator-penalty pick against a smoothness anchor.

    Admissible penalties give a pole-free fit whose d_der stays within
    rel_window of baseline_d_der (typically the best polynomial's value,
    polynomials being immune to pole artifacts); among those the smallest
    s wins.  A coarse pass over `coarse` (default 1.0 down to 0.1 in
    steps of 0.1, then 0) brackets the winner, and one refinement pass at
    refine_step granularity finishes the job.

    pole_interval widens the pole-free requirement past the smoothness
    grid (default: the grid's own interval).  A model meant for
    extrapolation should be scanned over the extrapolation range too: a
    denominator root just outside the data window ruins predictions while
    leaving every in-window diagnostic clean.

    Raises
    ------
    NoFeasibleModel
        If no penalty in the scanned grids is admissible.
    """
    if baseline_d_der <= 0:
        raise ValueError("baseline_d_der must be positive")
    if coarse is None:
        grid = [1.0 - 0.1 * i for i in range(10)] + [0.0]
    else:
        grid = [float(v) for v in coarse]
    scan_interval = pole_interval if pole_interval is not None else der_grid.interval

    def admissible_fit(lam1):
        report = fit_regularized(data, replace(config, lam1=lam1), der_grid, scan_points=scan_points)
        poles = pole_scan(report.model, scan_interval, scan_points)
        ok = poles.count == 0 and abs(report.d_der - baseline_d_der) <= rel_window * baseline_d_der
        return ok, report

    best: tuple[float, FitReport] | None = None
    for lam1 in grid:
        try:
            ok, report = admissible_fit(lam1)
        except PadefitError:
            continue
        if ok and (best is None or report.s < best[1].s):
            best = (lam1, report)
    if best is None:
        raise NoFeasibleModel("no admissible denominator penalty in the coarse grid")
    center = best[0]
    half = 5 * refine_step
    lo = max(0.0, center - half)
    hi = min(max(grid), center + half)
    fine = [lo + refine_step * i for i in range(int(round((hi - lo) / refine_step)) + 1)]
    for lam1 in fine:
        try:
            ok, report = admissible_fit(lam1)
        except PadefitError:
            continue
        if ok and report.s < best[1].s:
            best = (lam1, report)
    return best

"""Roots of the characteristic equation and selection of mu*.

For ``lam > 0`` the characteristic equation of S is

    mu phi'(mu) / phi(mu) = mu^2 / lam,        mu >= 0 (mu = 0 only if 0 in S).

For ``mu > 0`` it is equivalent to ``lambda_hat(mu) = lam``.  Among the
roots, ``mu*`` is the one maximizing ``psi_S``; ties are reported and never
broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .degree_set import DegreeSet
from .genfun import eval_genfun, inv_lambda_hat, lambda_hat, psi

__all__ = [
    "CharEqError",
    "TiedMaximizersError",
    "Root",
    "CharEqResult",
    "PhaseTransition",
    "ScanResult",
    "TIE_TOL",
    "solve_char_eq",
    "mu_star",
    "scan_phases",
    "monotone_mu_star_check",
]

TIE_TOL = 1e-9
GRID_POINTS = 512


class CharEqError(RuntimeError):
    """Numerical failure while solving the characteristic equation."""


class TiedMaximizersError(ValueError):
    """Raised when a unique mu* is required but several roots maximize psi."""

    def __init__(self, lam: float, maximizers: Sequence[float]):
        self.lam = lam
        self.maximizers = tuple(maximizers)
        super().__init__(f"lambda={lam!r}: psi is maximized by several roots {self.maximizers}")


@dataclass(frozen=True)
class Root:
    mu: float
    psi: float
    multiplicity: str = "simple"  # or "suspected-tangent"


@dataclass(frozen=True)
class CharEqResult:
    lam: float
    roots: tuple[Root, ...]
    maximizers: tuple[float, ...]
    mu_star_min: float
    mu_star_max: float
    unique: bool

    @property
    def mu_star(self) -> float:
        if not self.unique:
            raise TiedMaximizersError(self.lam, self.maximizers)
        return self.mu_star_min

    @property
    def root_values(self) -> list[float]:
        return [r.mu for r in self.roots]


@dataclass(frozen=True)
class PhaseTransition:
    lambda_c: float
    type: str  # "jump" | "continuous_zero" | "inflection_suspect"
    mu_left: float
    mu_right: float
    detail: str = ""


@dataclass
class ScanResult:
    lambdas: np.ndarray
    mu_star_min: np.ndarray
    mu_star_max: np.ndarray
    unique: np.ndarray
    transitions: list[PhaseTransition]
    warnings: list[str] = field(default_factory=list)

    @property
    def jumps(self) -> list[PhaseTransition]:
        return [t for t in self.transitions if t.type == "jump"]

    def __iter__(self):
        return iter(self.transitions)

    def __len__(self):
        return len(self.transitions)


# -- root finding -----------------------------------------------------------


def _bisect_many(f: Callable[[np.ndarray], np.ndarray], lo, hi, rel_width: float,
                 max_iter: int = 200) -> np.ndarray:
    """Bisect several sign-change brackets at once.

    ``f(lo)`` and ``f(hi)`` must have opposite signs (or one be zero) for
    every bracket.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    flo = f(lo)
    for _ in range(max_iter):
        width = hi - lo
        if np.all(width <= rel_width * np.maximum(np.abs(hi), 1e-300)):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _zoom_min(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              rounds: int = 10, points: int = 33):
    """Minimize a vectorized function on [a, b] by repeated grid zooming.

    Each round keeps the two cells around the best sample.  Returns
    ``(x, f(x))``.
    """
    best_x, best_v = a, math.inf
    for _ in range(rounds):
        xs = np.linspace(a, b, points)
        vs = np.asarray(f(xs), dtype=float)
        j = int(np.argmin(vs))
        if vs[j] < best_v:
            best_x, best_v = float(xs[j]), float(vs[j])
        a, b = xs[max(j - 1, 0)], xs[min(j + 1, points - 1)]
        if b - a <= 1e-15 * max(abs(b), 1e-300):
            break
    return best_x, best_v


def _upper_bracket(S: DegreeSet, lam: float) -> float:
    r1_at_1 = eval_genfun(S, 1.0).r1
    hi = max(1.0, 4 * lam * max(1.0, r1_at_1))
    for _ in range(80):
        F = lam * inv_lambda_hat(S, np.array([hi, 2 * hi])) - 1.0
        if F[0] < 0 and F[1] < 0:
            return hi
        hi *= 2
    raise CharEqError(f"could not certify an upper root bound for lambda={lam!r}")


def solve_char_eq(S: DegreeSet, lam: float, tol: float = 1e-10,
                  grid_points: int = GRID_POINTS) -> CharEqResult:
    """All roots of the characteristic equation, with psi at each and mu* selected.

    Positive roots are sign changes of ``lam / lambda_hat(mu) - 1`` on a
    log-spaced grid, refined by bisection.  Interior extrema of that
    function that come close to zero without a sign change are refined;
    they become either a pair of simple roots or a single
    ``suspected-tangent`` root.
    """
    if not lam > 0 or not math.isfinite(lam):
        raise ValueError("lambda must be positive and finite")
    if S.is_trivial:
        raise ValueError("the characteristic equation needs S != {0}")

    def F(mu):
        return lam * inv_lambda_hat(S, mu) - 1.0

    mu_hi = _upper_bracket(S, lam)
    mu_lo = 1e-6 * min(1.0, lam)
    grid = np.geomspace(mu_lo, mu_hi, grid_points)
    Fg = F(grid)

    lo_b, hi_b = [], []
    tangents = []
    sg = np.sign(Fg)
    for i in range(len(grid) - 1):
        if sg[i] == 0:
            continue
        if sg[i] * sg[i + 1] < 0 or sg[i + 1] == 0:
            lo_b.append(grid[i])
            hi_b.append(grid[i + 1])
    exact = [grid[i] for i in range(len(grid)) if sg[i] == 0]

    # interior extrema with no sign change: possible close pair or tangency
    tangent_tol = 10 * tol
    for i in range(1, len(grid) - 1):
        if not (sg[i - 1] == sg[i] == sg[i + 1] != 0):
            continue
        if (Fg[i] - Fg[i - 1]) * (Fg[i + 1] - Fg[i]) >= 0:
            continue
        s = sg[i]
        if s * (Fg[i] - Fg[i - 1]) > 0:
            continue  # extremum pointing away from zero
        x, v = _zoom_min(lambda m, s=s: s * F(m), grid[i - 1], grid[i + 1])
        if v <= 0:
            lo_b += [grid[i - 1], x]
            hi_b += [x, grid[i + 1]]
        elif v < tangent_tol:
            tangents.append(x)

    rel_width = max(1e-15, 1e-3 * tol)
    roots_pos = list(_bisect_many(F, lo_b, hi_b, rel_width)) + exact
    mus = sorted(set(float(m) for m in roots_pos))
    if mus:
        resid = np.abs(np.asarray(lambda_hat(S, np.array(mus))) - lam)
        if np.any(resid > tol * lam):
            raise CharEqError(
                f"root refinement failed at lambda={lam!r}: residual {resid.max():.3g}")

    roots: list[Root] = []
    if 0 in S:
        roots.append(Root(0.0, 0.0))
    for m in mus:
        roots.append(Root(m, float(psi(S, m))))
    for m in tangents:
        roots.append(Root(float(m), float(psi(S, m)), "suspected-tangent"))
    roots.sort(key=lambda r: r.mu)
    if not roots:
        raise CharEqError(f"no root found at lambda={lam!r}")

    maxim = _maximizers(S, lam, roots)
    return CharEqResult(lam, tuple(roots), maxim, min(maxim), max(maxim), len(maxim) == 1)


def _maximizers(S: DegreeSet, lam: float, roots: list[Root]) -> tuple[float, ...]:
    """Roots whose psi is within TIE_TOL of the best, one per separate hill.

    Consecutive near-best roots with no clearly lower root between them
    are resolved exactly: psi-check is strictly monotone between adjacent
    roots, increasing iff lambda_hat < lam there.  Only near-best roots
    separated by a lower root are reported as a tie.
    """
    best = max(r.psi for r in roots)
    groups: list[list[Root]] = []
    barrier = True
    for r in roots:
        if r.psi >= best - TIE_TOL:
            if barrier:
                groups.append([r])
            else:
                groups[-1].append(r)
            barrier = False
        else:
            barrier = True
    out = []
    for g in groups:
        if len(g) == 1:
            out.append(g[0].mu)
            continue
        mids = np.array([0.5 * (a.mu + b.mu) for a, b in zip(g, g[1:])])
        up = lam * np.asarray(inv_lambda_hat(S, mids)) - 1.0 > 0
        peaks = [r for j, r in enumerate(g)
                 if (j == 0 or up[j - 1]) and (j == len(g) - 1 or not up[j])]
        out.append(max(peaks or g, key=lambda r: r.psi).mu)
    return tuple(out)


def mu_star(S: DegreeSet, lam: float, tol: float = 1e-10) -> float:
    """The unique maximizing root; raises :class:`TiedMaximizersError` on ties."""
    return solve_char_eq(S, lam, tol).mu_star


# -- phase scan -------------------------------------------------------------


def _interval_suspect(S: DegreeSet, la: float, lb: float, ma: float, mb: float,
                      samples: int = 64) -> bool:
    """Could mu* fail to be continuous on [la, lb]?

    ``ma`` is mu*_max(la), ``mb`` is mu*_min(lb).  If mu* were continuous
    there, every mu in [ma, mb] would be mu*(l) for some l in [la, lb], so
    lambda_hat would be non-decreasing on [ma, mb] with values in [la, lb].
    """
    if mb <= ma:
        return False
    if ma == 0.0:
        return True
    mus = np.linspace(ma, mb, samples)
    lh = np.asarray(lambda_hat(S, mus))
    slack = 1e-9 * lb
    if np.any(lh < la - slack) or np.any(lh > lb + slack):
        return True
    return bool(np.any(np.diff(lh) < -slack))


def scan_phases(S: DegreeSet, lambda_lo: float, lambda_hi: float, grid_points: int = 200,
                tol: float = 1e-9, spacing: str = "linear") -> ScanResult:
    """Tabulate mu*(lambda) and localize and classify its non-analytic points.

    Candidate grid cells are bisected in lambda down to width ``tol``.
    A cell whose mu-gap stays above ``jump_threshold`` under refinement is
    a ``jump``; mu* leaving 0 continuously is ``continuous_zero``;
    near-flat stretches of an increasing lambda_hat are reported as
    ``inflection_suspect``.
    """
    if not 0 < lambda_lo < lambda_hi:
        raise ValueError("need 0 < lambda_lo < lambda_hi")
    if grid_points < 16:
        raise ValueError("grid_points must be >= 16")
    if spacing == "log":
        lams = np.geomspace(lambda_lo, lambda_hi, grid_points)
    elif spacing == "linear":
        lams = np.linspace(lambda_lo, lambda_hi, grid_points)
    else:
        raise ValueError("spacing must be 'linear' or 'log'")
    jump_threshold = max(1e3 * tol, 1e-4)

    cache: dict[float, CharEqResult] = {}

    def solve(lam: float) -> CharEqResult:
        if lam not in cache:
            cache[lam] = solve_char_eq(S, lam)
        return cache[lam]

    res = [solve(float(l)) for l in lams]
    mins = np.array([r.mu_star_min for r in res])
    maxs = np.array([r.mu_star_max for r in res])
    uniq = np.array([r.unique for r in res])

    transitions: list[PhaseTransition] = []
    warnings: list[str] = []

    for lam, r in zip(lams, res):
        if not r.unique:
            transitions.append(PhaseTransition(float(lam), "jump", r.mu_star_min, r.mu_star_max,
                                               "tie at a grid point"))

    def classify(la, lb, history):
        ra, rb = solve(la), solve(lb)
        gap = rb.mu_star_min - ra.mu_star_max
        coarse = history[-4] if len(history) >= 4 else history[0]
        lc = 0.5 * (la + lb)
        if gap > jump_threshold and gap >= 0.5 * coarse:
            return PhaseTransition(lc, "jump", ra.mu_star_max, rb.mu_star_min,
                                   f"mu gap {gap:.6g} over lambda width {lb - la:.3g}")
        if ra.mu_star_max == 0.0:
            return PhaseTransition(lc, "continuous_zero", 0.0, rb.mu_star_min,
                                   "mu* leaves 0 continuously")
        return PhaseTransition(lc, "inflection_suspect", ra.mu_star_max, rb.mu_star_min,
                               "candidate cell without a resolvable jump")

    def localize(la, lb, history):
        if lb - la <= tol:
            transitions.append(classify(la, lb, history))
            return
        lm = 0.5 * (la + lb)
        ra, rm, rb = solve(la), solve(lm), solve(lb)
        if not rm.unique:
            transitions.append(PhaseTransition(lm, "jump", rm.mu_star_min, rm.mu_star_max,
                                               "tied maximizers"))
        found = False
        for (l0, l1, m0, m1) in ((la, lm, ra.mu_star_max, rm.mu_star_min),
                                 (lm, lb, rm.mu_star_max, rb.mu_star_min)):
            if _interval_suspect(S, l0, l1, m0, m1):
                found = True
                localize(l0, l1, history + [m1 - m0])
        if not found and rm.unique:
            warnings.append(f"candidate cell [{la:.10g}, {lb:.10g}] not resolved by bisection")

    for i in range(len(lams) - 1):
        la, lb = float(lams[i]), float(lams[i + 1])
        if _interval_suspect(S, la, lb, maxs[i], mins[i + 1]):
            localize(la, lb, [mins[i + 1] - maxs[i]])

    transitions.extend(_inflection_candidates(S, lams, maxs, mins, transitions))
    transitions.sort(key=lambda t: t.lambda_c)
    return ScanResult(lams, mins, maxs, uniq, transitions, warnings)


def _inflection_candidates(S, lams, maxs, mins, found, samples: int = 64,
                           flat: float = 1e-6) -> list[PhaseTransition]:
    """Stationary points of an increasing lambda_hat (evidence only)."""
    out = []
    covered = [(t.mu_left, t.mu_right) for t in found]
    for i in range(len(lams) - 1):
        ma, mb = maxs[i], mins[i + 1]
        if mb <= ma or ma < 1e-3:
            continue
        if any(lo <= ma and mb <= hi for lo, hi in covered):
            continue
        mus = np.linspace(ma, mb, samples)
        lh = np.asarray(lambda_hat(S, mus))
        if np.any(np.diff(lh) < 0):
            continue
        elast = np.diff(np.log(lh)) / np.diff(np.log(mus))
        j = int(np.argmin(elast))
        if elast[j] > 1e-2:
            continue

        def e(m):
            h = 1e-6 * m
            return (np.log(np.asarray(lambda_hat(S, m + h)) / np.asarray(lambda_hat(S, m - h)))
                    / np.log((m + h) / (m - h)))

        x, v = _zoom_min(e, mus[max(j - 1, 0)], mus[min(j + 2, samples - 1)])
        if v < flat:
            lc = float(lambda_hat(S, x))
            out.append(PhaseTransition(lc, "inflection_suspect", x, x,
                                       f"lambda_hat elasticity {v:.3g} at mu={x:.8g}"))
    return out


def monotone_mu_star_check(S: DegreeSet, lambda_grid: Sequence[float]):
    """Is mu*(lambda) (the largest maximizer on ties) non-decreasing on the grid?

    Returns ``(ok, violation)`` where ``violation`` is None or
    ``(lam_i, lam_j, mu_i, mu_j)`` for the first decreasing step.
    """
    lams = [float(l) for l in lambda_grid]
    if any(b < a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda_grid must be sorted")
    mus = [solve_char_eq(S, l).mu_star_max for l in lams]
    for i in range(len(lams) - 1):
        if mus[i + 1] < mus[i]:
            return False, (lams[i], lams[i + 1], mus[i], mus[i + 1])
    return True, None

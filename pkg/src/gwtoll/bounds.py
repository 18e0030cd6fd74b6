"""Interval envelopes for the ratio recursions and cut-off error certificates.

Given only the first ``M`` levels of a tree, the ratio at the root of any
extension lies in an interval ``[rho_inf, rho_sup]`` obtained by seeding the
unobserved nodes with a-priori ranges and propagating upward with the
monotonicity of each recursion. Because ``f = -log rho`` (or
``-log(rho0 + rho_star)``), ``log(rho_sup / rho_inf)`` bounds how far the
toll of the full tree can be from the toll of its truncation.

Every node's envelope uses its own remaining budget ``M - depth``, so a
single sweep gives the envelopes of all fringe subtrees at once. Results
are rounded outward by a relative 1e-15 so float error cannot break the
sandwich.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CutoffTooSmall
from .functionals import parse_family, toll_value
from .reductions import ReductionKind, deletion_rounds
from .trees import Tree, build_tree, level_profile, truncate

ETA_A = 13.0 / 7.0
ETA_C = math.sqrt(20.0 / 21.0)
SLACK = 1e-9
CONTRACTION_SLACK = 1e-12
DOM_BOUND_CONSTANT = 1.0


@dataclass(frozen=True)
class IntervalState:
    """Per-node envelopes for independent sets or matchings at cut-off ``M``.

    Entries are NaN below depth ``M``. ``exact[v]`` marks fringes seen in
    full (height below the remaining budget), where ``rho_inf == rho_sup``.
    """

    family: str
    M: int
    rho_inf: np.ndarray
    rho_sup: np.ndarray
    exact: np.ndarray

    def tau(self, v: int = 0) -> float:
        if self.rho_inf[v] <= 0.0:
            return math.inf
        return math.log(self.rho_sup[v] / self.rho_inf[v])


@dataclass(frozen=True)
class DomIntervalState:
    """Per-node envelopes of ``rho0`` and ``rho_star`` at cut-off ``M``."""

    M: int
    rho0_inf: np.ndarray
    rho0_sup: np.ndarray
    rhostar_inf: np.ndarray
    rhostar_sup: np.ndarray
    exact: np.ndarray


@dataclass(frozen=True)
class TauReport:
    """Certificate for one tree and cut-off.

    ``tau`` is the family's envelope width (``eta`` for dominating sets,
    the bound on ``|f_r(t) - f_r(t^(M))|`` for reductions). ``bound_rhs``
    is the explicit level-profile bound it is compared with, and
    ``certified`` says whether the measured ``cutoff_error`` stays within
    the envelope.
    """

    family: str
    M: int
    tau: float
    bound_rhs: float
    w_M: int
    cutoff_error: float
    certified: bool
    violated: bool
    tau0: float | None = None
    tau_star: float | None = None
    eta: float | None = None
    tau_star_infinite: bool = False


def interval_eval(t: Tree, M: int, family="indset") -> IntervalState:
    """Envelopes of ``rho`` for every node, given the tree cut at depth ``M``.

    Independent sets seed depth-``M`` nodes with ``[1/2, 1]``. Matchings
    seed them with ``[0, 1]``, which reproduces ``[1/(1 + deg), 1]`` one
    level higher.
    """
    if M < 0:
        raise ValueError("M must be >= 0")
    fam = parse_family(family).tag
    if fam == "indset":
        lo, hi, ex = kernels.ind_envelope(t.parent, t.depth, int(M))
    elif fam == "matching":
        lo, hi, ex = kernels.match_envelope(t.parent, t.depth, int(M))
    else:
        raise ValueError(f"interval_eval handles indset and matching, not {fam}")
    return IntervalState(fam, int(M), lo, hi, ex.astype(bool))


def dom_interval_eval(t: Tree, M: int) -> DomIntervalState:
    """Envelopes of ``rho0`` and ``rho_star`` for every node.

    Depth-``M`` nodes start from the box ``rho0 in [0, 1/2]``,
    ``rho_star in [0, 1]``. A node with a single child and budget at least
    two is evaluated through its grandchildren in closed form, which keeps
    the envelopes tight along unary chains.
    """
    if M < 2:
        raise CutoffTooSmall("dominating-set envelopes need M >= 2")
    lo0, hi0, los, his, ex = kernels.dom_envelope(t.parent, t.depth, t.outdeg, int(M))
    return DomIntervalState(int(M), lo0, hi0, los, his, ex.astype(bool))


def _log_ratio(sup: np.ndarray, inf: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``log(sup / inf)`` with ``0/0 -> 0``; ``x/0`` is flagged, value left at 0."""
    sup = np.asarray(sup, dtype=np.float64)
    inf = np.asarray(inf, dtype=np.float64)
    infinite = (inf <= 0.0) & (sup > 0.0)
    out = np.zeros(sup.shape)
    ok = (inf > 0.0) & (sup > 0.0)
    out[ok] = np.log(sup[ok] / inf[ok])
    return out, infinite


def dom_taus(state: DomIntervalState) -> dict[str, np.ndarray]:
    """Per-node ``tau0``, ``tau_star`` and ``eta = (13/7) tau0 + tau_star``.

    ``eta`` is ``inf`` where either width is unbounded.
    """
    t0, inf0 = _log_ratio(state.rho0_sup, state.rho0_inf)
    ts, infs = _log_ratio(state.rhostar_sup, state.rhostar_inf)
    eta = ETA_A * t0 + ts
    eta[inf0 | infs] = np.inf
    return {"tau0": t0, "tau_star": ts, "tau0_infinite": inf0, "tau_star_infinite": infs, "eta": eta}


def cutoff_error(t: Tree, M: int, family) -> float:
    """``|f(t) - f(t^(M))|`` for any family."""
    if t.height <= M:
        return 0.0
    fam = parse_family(family)
    return float(abs(toll_value(fam, t) - toll_value(fam, truncate(t, M))))


def vanishing_branches(t: Tree, M: int, kind, r: int) -> np.ndarray:
    """Root children whose branch, cut at depth ``M - 1`` and planted under a
    fresh root, is fully removed within ``r`` rounds.

    Only branches of height at least ``M - 1`` are considered.
    """
    kind = ReductionKind.parse(kind)
    out = []
    for c in t.root_children().tolist():
        size = int(t.subtree_size[c])
        branch_height = int(t.depth[c : c + size].max()) - 1
        if branch_height < M - 1:
            continue
        sub = build_tree(t.outdeg[c : c + size].copy())
        cut = truncate(sub, max(M - 1, 0))
        planted = build_tree(np.concatenate(([1], cut.outdeg)))
        if deletion_rounds(planted, kind, r)[1] > 0:
            out.append(c)
    return np.array(out, dtype=np.int64)


def reduction_certificate(t: Tree, M: int, kind, r: int) -> int:
    """Upper bound on ``|f_r(t) - f_r(t^(M))|`` read off ``t^(M)``.

    A root branch can change status only if its cut version vanishes. For
    the leaf and path rules branches act independently, so the count of such
    branches bounds the change. For the old-leaf and old-path rules a change
    in one branch can shift its right siblings, so the bound is the range of
    the toll, ``min(deg, r)``, as soon as one such branch exists.
    """
    kind = ReductionKind.parse(kind)
    k = vanishing_branches(t, M, kind, r).size
    if kind in (ReductionKind.LEAF, ReductionKind.PATH):
        return int(k)
    return min(t.degree, int(r)) if k else 0


def tau_report(t: Tree, M: int, family, dom_constant: float = DOM_BOUND_CONSTANT) -> TauReport:
    """Envelope width at the root, its explicit bound and the measured error.

    Bounds: ``(log 2 / 2^M) w_M`` for independent sets, ``2^(1-M) w_M`` for
    matchings and ``K c^M (w_{M-2} + w_{M-1} + w_M)`` for dominating sets,
    with ``c = sqrt(20/21)`` and ``K = dom_constant``.
    """
    fam = parse_family(family)
    prof = level_profile(t)
    wM = prof.at(M)
    err = cutoff_error(t, M, fam)
    if fam.tag == "matching" and M < 1:
        raise CutoffTooSmall("matching certificate needs M >= 1")
    if fam.tag in ("indset", "matching"):
        st = interval_eval(t, M, fam)
        tau = st.tau(0)
        rhs = (math.log(2.0) / 2.0**M if fam.tag == "indset" else 2.0 ** (1 - M)) * wM
        return TauReport(
            fam.name, M, tau, rhs, wM, err, certified=err <= tau + SLACK, violated=tau > rhs + SLACK
        )
    if fam.tag == "domset":
        st = dom_interval_eval(t, M)
        taus = dom_taus(st)
        t0 = float(taus["tau0"][0])
        ts = float(taus["tau_star"][0])
        infinite = bool(taus["tau_star_infinite"][0] or taus["tau0_infinite"][0])
        eta = math.inf if infinite else float(taus["eta"][0])
        # f = -log(rho0 + rho_star), so the envelope of the sum certifies f
        lo = st.rho0_inf[0] + st.rhostar_inf[0]
        hi = st.rho0_sup[0] + st.rhostar_sup[0]
        width = math.log(hi / lo)
        rhs = dom_constant * ETA_C**M * (prof.at(M - 2) + prof.at(M - 1) + wM)
        return TauReport(
            fam.name,
            M,
            eta,
            rhs,
            wM,
            err,
            certified=err <= width + SLACK,
            violated=infinite or eta > rhs + SLACK,
            tau0=t0,
            tau_star=math.inf if infinite else ts,
            eta=eta,
            tau_star_infinite=infinite,
        )
    if fam.tag == "reduction":
        if M < 1:
            raise CutoffTooSmall("reduction certificate needs M >= 1")
        bound = float(reduction_certificate(t, M, fam.kind, fam.r))
        return TauReport(
            fam.name, M, bound, bound, wM, err, certified=err <= bound, violated=err > bound
        )
    raise ValueError(f"no cut-off certificate for {fam.name}")


@dataclass(frozen=True)
class EtaContractionReport:
    """One check of ``eta^M(t) <= c^j * sum eta^(M-j)`` over depth-``j`` nodes.

    ``j = 1`` when the root has two or more children, else ``j = 2``.
    ``skipped`` is set when some term on the right is unbounded.
    """

    M: int
    depth: int
    lhs: float
    rhs: float
    skipped: bool
    holds: bool


def check_eta_contraction(t: Tree, M: int, slack: float = CONTRACTION_SLACK) -> EtaContractionReport:
    """Contraction of ``eta`` from one or two levels down (``M >= 3``)."""
    if M < 3:
        raise CutoffTooSmall("the contraction check needs M >= 3")
    taus = dom_taus(dom_interval_eval(t, M))
    eta = taus["eta"]
    j = 1 if t.degree >= 2 else 2
    below = eta[t.depth == j]
    lhs = float(eta[0])
    if np.isinf(below).any():
        return EtaContractionReport(M, j, lhs, math.inf, skipped=True, holds=True)
    rhs = ETA_C**j * float(below.sum())
    return EtaContractionReport(M, j, lhs, rhs, skipped=False, holds=lhs <= rhs + slack)

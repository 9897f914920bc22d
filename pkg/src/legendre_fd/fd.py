"""The FD-method recurrence for ``-((1 - x^2) u')' + q u = lambda u``.

Step ``d`` of the recurrence computes the eigenvalue correction ``L[d]``
from an inner product with the basic eigenfunction, assembles the
right-hand side ``F[d]``, inverts the Legendre operator on the orthogonal
complement of ``P_n`` through the Cauchy kernel ``P_n(x) Q_n(xi) -
P_n(xi) Q_n(x)`` and projects out the ``P_n`` component.

The basic eigenfunction is stored unnormalised as ``P_n``; the factor
``(2n + 1) / 2`` is applied inside inner products instead. All arrays are
node samples of shape ``(N, 2K + 1)``, either float64 or
:class:`~legendre_fd.ddarray.DDArray` depending on the mesh precision.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .ddarray import DDArray
from .errors import FDStepError, LegendreFDError
from .potential import PotentialSpec, check_mesh, weighted_l1_norm
from .quadrature import Mesh, cumulative, integrate
from .special_functions import check_order, legendre_functions, legendre_functions_mp
from .theory import BoundReport, apriori_bounds

logger = logging.getLogger(__name__)


def _to_float(value):
    return value.to_float() if isinstance(value, DDArray) else np.asarray(value, dtype=float)


def _sqrt(value):
    return value.sqrt() if isinstance(value, DDArray) else np.sqrt(value)


def legendre_samples(n, mesh):
    """``(P_n, Q_n, P_n', Q_n')`` at every node of ``mesh``; memoised."""
    key = ("legendre", n)
    if key in mesh._cache:
        return mesh._cache[key]
    if mesh.extended:
        import mpmath

        rows = [[], [], [], []]
        with mpmath.workdps(40):
            for sub in mesh.subintervals:
                mp = sub.mp_nodes
                vals = [legendre_functions_mp(n, z, omx, opx)
                        for z, omx, opx in zip(mp["nodes"], mp["one_minus_x"], mp["one_plus_x"])]
                for r, col in zip(rows, zip(*vals)):
                    r.append(col)
        out = tuple(DDArray.from_mpf(r) for r in rows)
    else:
        out = legendre_functions(n, mesh.nodes, mesh.one_minus_x, mesh.one_plus_x)
    mesh._cache[key] = out
    return out


@dataclass
class FDState:
    """Workspace of one solve: corrections, samples and diagnostics."""

    n: int
    m: int
    mesh: Mesh
    spec: PotentialSpec
    P: object
    Q: object
    dP: object
    dQ: object
    q: object
    L: list = field(default_factory=list)
    U: list = field(default_factory=list)
    DU: list = field(default_factory=list)
    F: list = field(default_factory=list)
    eta: list = field(default_factory=list)
    unorm_l2: list = field(default_factory=list)
    unorm_sup: list = field(default_factory=list)
    orthogonality: list = field(default_factory=list)

    @classmethod
    def create(cls, n, m, spec, mesh):
        n = check_order(n)
        if isinstance(m, bool) or int(m) != m or m < 0:
            raise LegendreFDError(f"step budget m must be a non-negative integer, got {m!r}")
        P, Q, dP, dQ = legendre_samples(n, mesh)
        return cls(n=n, m=int(m), mesh=mesh, spec=spec, P=P, Q=Q, dP=dP, dQ=dQ,
                   q=spec.sample(mesh))

    @property
    def norm_factor(self):
        # A^{-2} = (2n + 1) / 2
        return (2 * self.n + 1) / 2

    def inner(self, a, b):
        """Normalised discrete inner product ``A^{-2} <a, b>``."""
        return integrate(self.mesh, a * b) * self.norm_factor

    def truncated(self, d):
        """Truncated sums of ``L``, ``U`` and ``DU`` through step ``d``."""
        lam, u, du = self.L[0], self.U[0], self.DU[0]
        for j in range(1, d + 1):
            lam = lam + self.L[j]
            u = u + self.U[j]
            du = du + self.DU[j]
        return lam, u, du


def basic_step(state):
    """Initialise ``L[0] = n(n+1)``, ``U[0] = P_n`` and ``DU[0] = P_n'``."""
    n = state.n
    lam0 = float(n * (n + 1))
    state.L[:] = [DDArray(lam0) if state.mesh.extended else lam0]
    state.U[:] = [state.P]
    state.DU[:] = [state.dP]
    state.F[:] = [None]
    state.eta[:] = []
    state.orthogonality[:] = [0.0]
    _record_norms(state, 0, reset=True)


def lambda_correction(state, d):
    """``L[d] = A^{-2} int P_n U[d-1] q``."""
    value = state.inner(state.U[0], state.U[d - 1] * state.q)
    _store(state.L, d, value)
    return value


def rhs(state, d):
    """``F[d] = q U[d-1] - sum_{j<d} L[d-j] U[j]``."""
    f = state.q * state.U[d - 1]
    for j in range(d):
        f = f - state.L[d - j] * state.U[j]
    _store(state.F, d, f)
    return f


def u_correction(state, d):
    """Variation-of-parameters solution for ``U[d]`` and its derivative."""
    mesh, f = state.mesh, state.F[d]
    cp = cumulative(mesh, f * state.P)
    cq = cumulative(mesh, f * state.Q)
    _store(state.U, d, state.Q * cp - state.P * cq)
    _store(state.DU, d, state.dQ * cp - state.dP * cq)


def orthogonalize(state, d):
    """Remove the ``P_n`` component from ``U[d]`` and ``DU[d]``."""
    coeff = state.inner(state.U[d], state.U[0])
    state.U[d] = state.U[d] - coeff * state.U[0]
    state.DU[d] = state.DU[d] - coeff * state.DU[0]
    left = float(state.inner(state.U[d], state.U[0]))
    _store(state.orthogonality, d, left)
    return coeff


def residual(state, d):
    """Residual of the truncated eigenpair through step ``d``.

    ``sqrt(int g^2)`` with ``g = (1 - x^2) u' + int_{-1}^x (lambda - q) u``
    for the truncated ``lambda``, ``u`` and ``u'``.
    """
    mesh = state.mesh
    lam, u, du = state.truncated(d)
    g = mesh.one_minus_x2 * du + cumulative(mesh, (lam - state.q) * u)
    eta = _sqrt(integrate(mesh, g * g))
    _store(state.eta, d, eta)
    return eta


def _store(seq, d, value):
    if len(seq) == d:
        seq.append(value)
    else:
        seq[d] = value


def _record_norms(state, d, reset=False):
    if reset:
        state.unorm_l2[:] = []
        state.unorm_sup[:] = []
    mesh, u = state.mesh, state.U[d]
    l2 = float(_sqrt(integrate(mesh, u * u)))
    weight = np.sqrt(np.sqrt(_to_float(mesh.one_minus_x2)))
    sup = float(np.max(np.abs(weight * _to_float(u))))
    _store(state.unorm_l2, d, l2)
    _store(state.unorm_sup, d, sup)


def _check_finite(state, d):
    if not (np.all(np.isfinite(_to_float(state.U[d])))
            and math.isfinite(float(state.L[d]))):
        raise FDStepError(d, "non-finite values in the corrections")


@dataclass(frozen=True)
class FDSolution:
    """Truncated eigenpair after ``m`` steps plus per-step diagnostics.

    ``lambda_partial[d]`` is the truncated eigenvalue after step ``d`` and
    ``lambda_m`` equals ``lambda_partial[m]``. ``lambda_text`` keeps every
    digit of the extended-precision sum.
    """

    n: int
    m: int
    precision: str
    lambda_m: float
    lambda_text: str
    lambda_steps: np.ndarray
    lambda_partial: np.ndarray
    nodes: np.ndarray
    u: np.ndarray
    du: np.ndarray
    eta: np.ndarray
    unorm_l2: np.ndarray
    unorm_sup: np.ndarray
    orthogonality: np.ndarray
    norm_q: float
    bound: BoundReport


def solve(n, m, spec, mesh, allow_interior_singularities=False):
    """Run ``m`` steps of the FD-method for eigen-index ``n``.

    Raises :class:`~legendre_fd.errors.ConfigurationError` if a singularity
    of ``spec`` is not a mesh breakpoint (unless explicitly allowed) and
    :class:`~legendre_fd.errors.FDStepError` for numerical failures.
    """
    bad = check_mesh(spec, mesh, allow_interior_singularities)
    if bad:
        logger.warning("singularities %s lie inside subintervals; accuracy is reduced", bad)
    state = FDState.create(n, m, spec, mesh)
    norm_q = weighted_l1_norm(spec, mesh, allow_interior_singularities=True)
    bound = apriori_bounds(state.n, state.m, norm_q)
    if not bound.convergent:
        logger.info("n=%d is not above the threshold n0=%d; convergence is not guaranteed",
                    state.n, bound.n0)

    steps = (
        ("lambda correction", lambda_correction),
        ("right-hand side", rhs),
        ("eigenfunction correction", u_correction),
        ("orthogonalisation", orthogonalize),
        ("finiteness check", _check_finite),
        ("norm bookkeeping", _record_norms),
        ("residual", residual),
    )
    with np.errstate(all="ignore"):
        basic_step(state)
        _run(state, 0, "residual", residual)
        for d in range(1, state.m + 1):
            for name, op in steps:
                _run(state, d, name, op)
    return _assemble(state, norm_q, bound)


def _run(state, d, name, op):
    try:
        op(state, d)
    except FDStepError:
        raise
    except Exception as exc:
        raise FDStepError(d, f"{name} failed: {exc}") from exc


def _assemble(state, norm_q, bound):
    mesh = state.mesh
    lam, u, du = state.truncated(state.m)
    partial, acc = [], None
    for value in state.L:
        acc = value if acc is None else acc + value
        partial.append(float(acc))
    if mesh.extended:
        import mpmath

        with mpmath.workdps(40):
            text = mpmath.nstr(lam.to_mpf(), 32)
    else:
        text = repr(float(lam))
    return FDSolution(
        n=state.n, m=state.m, precision=mesh.precision,
        lambda_m=float(lam), lambda_text=text,
        lambda_steps=np.array([float(v) for v in state.L]),
        lambda_partial=np.array(partial),
        nodes=mesh.nodes_float(), u=_to_float(u), du=_to_float(du),
        eta=np.array([float(e) for e in state.eta]),
        unorm_l2=np.array(state.unorm_l2), unorm_sup=np.array(state.unorm_sup),
        orthogonality=np.array(state.orthogonality),
        norm_q=norm_q, bound=bound,
    )

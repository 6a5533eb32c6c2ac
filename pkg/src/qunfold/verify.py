"""Verification harness: independent oracles, Monte-Carlo trials and suite runner.

Every suite draws its randomness from ``make_rng(seed, suite_index, n, function_index, trial)``
so each trial is reproducible on its own and reports come out in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import (
    CPTPChannel,
    apply_channel,
    depolarizing_channel,
    identity_channel,
    random_cptp,
    unitary_channel,
)
from .errors import ConfigError, QunfoldError, StepTooLarge
from .gentropy import (
    BRIDGED_F,
    ConvexG,
    bridged_f,
    catalog_g,
    f_from_g,
    monotonicity_defect,
    relative_g_entropy,
    unweighted_pullback_sum,
)
from .matcore import dagger, expi_hermitian, matrix_function
from .petz import MonotoneF, catalog_f, check_f_symmetry, get_f, petz_metric
from .states import (
    DensityMatrix,
    ProbabilityVector,
    TangentVectorM,
    TangentVectorS,
    UnfoldedPoint,
    UnitaryMatrix,
    embed_diagonal,
    haar_unitary,
    make_rng,
    random_density,
    random_tangent_m,
    random_tangent_s,
    sample_simplex,
)
from .unfold import fisher_rao, g_expansion_metric, project, pullback_metric, split_metric

__all__ = [
    "CPTPChannel",
    "Quantity",
    "SuiteConfig",
    "TrialReport",
    "SUITES",
    "apply_channel",
    "hessian_fd",
    "metric_monotonicity_check",
    "metric_monotonicity_trial",
    "random_cptp",
    "relative_g_entropy_superoperator",
    "run_suite",
    "suite_passed",
]

SUITES = (
    "split",
    "expansion",
    "hessian",
    "monotonicity",
    "entropy-monotonicity",
    "classical",
    "kernel",
    "commuting",
    "fg-bridge",
    "f-symmetry",
    "readings",
)

DEFAULT_TOLERANCES = {
    "split": 1e-9,
    "expansion": 1e-9,
    "hessian": 5e-4,
    "monotonicity": 1e-9,
    "entropy-monotonicity": 1e-9,
    "classical": 1e-10,
    "kernel": 1e-10,
    "commuting": 1e-10,
    "fg-bridge": 1e-12,
    "f-symmetry": 1e-10,
    "readings": 1e-9,
}

DEFAULT_NS = {"hessian": (2, 3)}

# ``check`` decides how ``error`` is formed from value and reference
_CHECKS = ("abs", "le", "ge", "info")


@dataclass
class Quantity:
    """One checked number.

    ``error`` is the raw discrepancy; the check passes when it is at most
    ``tol * max(1, |reference|)``, i.e. absolute for references of size up to 1 and
    relative beyond, since metric values scale like ``1 / min(p)``. With
    ``scaled=False`` the bound is plain ``tol``.
    """

    name: str
    value: float
    reference: float
    tol: float
    check: str = "abs"
    scaled: bool = True
    error: float = field(init=False)

    def __post_init__(self):
        if self.check not in _CHECKS:
            raise ValueError(f"unknown check {self.check!r}")
        v, r = float(self.value), float(self.reference)
        if self.check == "le":
            err = max(0.0, v - r)
        elif self.check == "ge":
            err = max(0.0, r - v)
        else:
            err = abs(v - r)
        self.value, self.reference, self.error = v, r, err

    @property
    def bound(self) -> float:
        if not self.scaled or not math.isfinite(self.reference):
            return self.tol
        return self.tol * max(1.0, abs(self.reference))

    @property
    def passed(self) -> bool:
        if self.check == "info":
            return True
        return math.isfinite(self.error) and self.error <= self.bound


@dataclass
class TrialReport:
    trial_id: int
    seed: int
    stream: list
    n: int
    function: str
    quantities: list
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.note and all(q.passed for q in self.quantities)

    def to_dict(self) -> dict:
        d = {
            "trial_id": self.trial_id,
            "seed": self.seed,
            "stream": list(self.stream),
            "n": self.n,
            "function": self.function,
            "passed": self.passed,
            "quantities": [
                {
                    "name": q.name,
                    "value": _finite_or_none(q.value),
                    "reference": _finite_or_none(q.reference),
                    "abs_error": _finite_or_none(q.error),
                    "tol": q.tol,
                    "bound": q.bound,
                    "check": q.check,
                    "passed": q.passed,
                }
                for q in self.quantities
            ],
        }
        if self.note:
            d["note"] = self.note
        return d


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def suite_passed(reports) -> bool:
    return all(r.passed for r in reports)


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    ns: tuple | None = None
    trials: int = 100
    seed: int = 0
    tol: float | None = None
    step: float = 1e-3

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; available: {', '.join(SUITES)}")
        if self.trials < 0:
            raise ConfigError(f"trials must be >= 0, got {self.trials}")
        if self.ns is not None and (not self.ns or any(n < 2 for n in self.ns)):
            raise ConfigError(f"dimensions must be >= 2, got {self.ns}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tol}")
        if not 1e-4 <= self.step <= 1e-2:
            raise ConfigError(f"step must lie in [1e-4, 1e-2], got {self.step}")

    @property
    def dims(self) -> tuple:
        return tuple(self.ns) if self.ns is not None else DEFAULT_NS.get(self.suite, (2, 3, 4))

    @property
    def tolerance(self) -> float:
        return DEFAULT_TOLERANCES[self.suite] if self.tol is None else self.tol


# oracles


def relative_g_entropy_superoperator(rho: DensityMatrix, sigma: DensityMatrix, g: ConvexG) -> float:
    """``Tr(sqrt(rho) g(L_sigma R_rho^{-1})(sqrt(rho)))`` with the superoperator built explicitly.

    In row-major vectorization ``L_sigma R_rho^{-1}`` is ``sigma (x) (rho^{-1})^T``, a
    Hermitian positive matrix on ``C^(n^2)``; ``g`` is applied to it by spectral calculus.
    """
    n = rho.n
    rho_inv = matrix_function(rho.mat, lambda x: 1.0 / x)
    modular = np.kron(sigma.mat, rho_inv.T)
    g_modular = matrix_function(modular, lambda x: float(g(x)), tol=1e-9)
    sqrt_rho = matrix_function(rho.mat, math.sqrt)
    image = (g_modular @ sqrt_rho.reshape(-1)).reshape(n, n)
    return float(np.trace(sqrt_rho @ image).real)


def _curve_point(m: UnfoldedPoint, x: TangentVectorM, s: float) -> DensityMatrix:
    p = m.p.p + s * x.v
    if np.any(p <= 0):
        raise StepTooLarge(f"p + s v leaves the open simplex at s = {s!r}")
    u = m.u.mat @ expi_hermitian(x.h, s)
    return project(UnfoldedPoint(UnitaryMatrix(u), ProbabilityVector(p / p.sum())))


def hessian_fd(m: UnfoldedPoint, x: TangentVectorM, y: TangentVectorM, g: ConvexG, step: float) -> float:
    """``-d_s d_t H_g(pi(gamma_X(s)), pi(gamma_Y(t)))`` at ``s = t = 0`` by a 4-point stencil.

    ``gamma_X(s) = (U exp(s iH_X), p + s v_X)``.
    """
    if not 1e-4 <= step <= 1e-2:
        raise ValueError(f"step must lie in [1e-4, 1e-2], got {step}")
    xs = {s: _curve_point(m, x, s) for s in (step, -step)}
    ys = {t: _curve_point(m, y, t) for t in (step, -step)}

    def h(s, t):
        return relative_g_entropy(xs[s], ys[t], g)

    mixed = (h(step, step) - h(step, -step) - h(-step, step) + h(-step, -step)) / (4.0 * step * step)
    return -mixed


def metric_monotonicity_check(rho: DensityMatrix, a: TangentVectorS, channel: CPTPChannel, f: MonotoneF,
                              tol: float = 1e-9) -> Quantity:
    """``G^f_{Phi rho}(Phi A, Phi A) <= G^f_rho(A, A) + tol`` for a same-dimension channel."""
    out_rho = apply_channel(channel, rho)
    pushed = channel.apply_raw(a.a)
    pushed = TangentVectorS((pushed + dagger(pushed)) / 2)
    before = petz_metric(rho, a, a, f)
    after = petz_metric(out_rho, pushed, pushed, f)
    return Quantity("pushed_metric_le_metric", after, before, tol, "le")


def metric_monotonicity_trial(n: int, f: MonotoneF, rng: np.random.Generator, trial_id: int = 0, seed: int = 0,
                              stream=(), tol: float = 1e-9) -> TrialReport:
    """Sample ``rho``, traceless ``A`` and a rank-2 channel on ``C^n`` and run the check."""
    rho = random_density(n, rng)
    a = random_tangent_s(n, rng)
    channel = random_cptp(n, n, 2, rng)
    q = metric_monotonicity_check(rho, a, channel, f, tol)
    return TrialReport(trial_id, seed, list(stream), n, f.name, [q])


# trial generators


def _random_point(n: int, rng) -> UnfoldedPoint:
    return UnfoldedPoint(haar_unitary(n, rng), sample_simplex(n, rng))


def _scaled_tangent(m: UnfoldedPoint, rng) -> TangentVectorM:
    # v_j = p_j (z_j - <z>_p) with |z| <= 3, so |v_j| <= 6 p_j and p + s v stays inside
    # the simplex for |s| <= 1e-2 while the spectral part of the metric is O(1)
    x = random_tangent_m(m.n, rng)
    p = m.p.p
    z = np.clip(rng.standard_normal(m.n), -3.0, 3.0)
    return TangentVectorM(x.h, p * (z - np.dot(p, z)))


def _diagonal_tangent(n: int, rng, with_v: bool) -> TangentVectorM:
    h = np.diag(rng.standard_normal(n)).astype(np.complex128)
    v = rng.standard_normal(n) if with_v else np.zeros(n)
    return TangentVectorM(h, v - v.mean())


def _trial_split(n, f, rng, tol):
    m = _random_point(n, rng)
    x, y = random_tangent_m(n, rng), random_tangent_m(n, rng)
    s = split_metric(m, x, y, f)
    return [Quantity("split_total_vs_pullback", s.total, pullback_metric(m, x, y, f), tol)]


def _trial_expansion(n, g, rng, tol):
    m = _random_point(n, rng)
    x, y = random_tangent_m(n, rng), random_tangent_m(n, rng)
    ref = split_metric(m, x, y, bridged_f(g)).total
    return [Quantity("expansion_vs_split_bridged_f", g_expansion_metric(m, x, y, g), ref, tol)]


def _trial_hessian(n, g, rng, tol, step):
    m = _random_point(n, rng)
    x, y = _scaled_tangent(m, rng), _scaled_tangent(m, rng)
    closed = g_expansion_metric(m, x, y, g)
    fd = hessian_fd(m, x, y, g, step)
    fd_half = hessian_fd(m, x, y, g, step / 2)
    ratio = abs(fd - closed) / abs(fd_half - closed) if fd_half != closed else math.inf
    # a single trial's ratio is noise when its h^2 coefficient happens to vanish, so
    # it is recorded only; the checked ratio is aggregated over the suite
    return [
        Quantity("fd_vs_closed_form", fd, closed, tol),
        Quantity("step_halving_error_ratio", ratio, 4.0, 1.0, "info", scaled=False),
    ], (fd, fd_half, closed)


def _channel_for_trial(n: int, trial: int, rng):
    kind = ("random", "random-dim", "depolarizing", "identity", "unitary")[trial % 5]
    if kind == "random":
        return kind, random_cptp(n, n, 2, rng)
    if kind == "random-dim":
        m = int(rng.integers(2, n + 2))
        return kind, random_cptp(n, m, -(-n // m) + 1, rng)
    if kind == "depolarizing":
        m = int(rng.integers(2, n + 2))
        return kind, depolarizing_channel(n, m)
    if kind == "identity":
        return kind, identity_channel(n)
    return kind, unitary_channel(haar_unitary(n, rng).mat)


def _trial_entropy_monotonicity(n, g, rng, tol, trial):
    rho, sigma = random_density(n, rng), random_density(n, rng)
    kind, channel = _channel_for_trial(n, trial, rng)
    defect = monotonicity_defect(rho, sigma, channel, g)
    qs = [Quantity(f"defect_nonnegative[{kind}]", defect, 0.0, tol, "ge")]
    if kind in ("identity", "unitary"):
        qs.append(Quantity(f"defect_vanishes[{kind}]", defect, 0.0, 1e-10))
    return qs


def _trial_classical(n, f, rng, tol):
    m = _random_point(n, rng)
    x, y = _diagonal_tangent(n, rng, True), _diagonal_tangent(n, rng, True)
    return [Quantity("commuting_pullback_vs_fisher_rao", pullback_metric(m, x, y, f), fisher_rao(m.p, x.v, y.v), tol)]


def _trial_kernel(n, f, rng, tol):
    m = _random_point(n, rng)
    x = _diagonal_tangent(n, rng, False)
    y = random_tangent_m(n, rng)
    return [
        Quantity("pullback_on_kernel", pullback_metric(m, x, y, f), 0.0, tol),
        Quantity("split_total_on_kernel", split_metric(m, x, y, f).total, 0.0, tol),
    ]


def _trial_commuting(n, g, rng, tol):
    u = haar_unitary(n, rng).mat
    p, q = sample_simplex(n, rng).p, sample_simplex(n, rng).p
    rho = DensityMatrix((u * p) @ dagger(u))
    sigma = DensityMatrix((u * q) @ dagger(u))
    classical = float(np.sum(p * np.asarray(g(q / p))))
    return [Quantity("commuting_entropy_vs_classical_sum", relative_g_entropy(rho, sigma, g), classical, tol)]


def _trial_readings(n, g, rng, tol):
    rho, sigma = random_density(n, rng), random_density(n, rng)
    oracle = relative_g_entropy_superoperator(rho, sigma, g)
    return [
        Quantity("weighted_sum_vs_superoperator", relative_g_entropy(rho, sigma, g), oracle, tol),
        Quantity("unweighted_sum_vs_superoperator", unweighted_pullback_sum(rho, sigma, g), oracle, tol, "info"),
    ]


def _fixed_fg_bridge(tol):
    grid = np.logspace(-2, 2, 200)
    reports = []
    for gi, g in enumerate(catalog_g()):
        f = get_f(BRIDGED_F[g.name])
        worst = max(abs(f_from_g(g, x) - float(f(x))) for x in grid)
        qs = [
            Quantity(f"max_grid_deviation_from_{f.name}", worst, 0.0, tol),
            Quantity("bridge_at_1", f_from_g(g, 1.0), 1.0, tol),
        ]
        reports.append((gi, g.name, qs))
    return reports


def _fixed_f_symmetry(tol):
    grid = np.logspace(-4, 4, 201)
    reports = []
    for fi, f in enumerate(catalog_f()):
        rep = check_f_symmetry(f, grid)
        qs = [
            Quantity("normalization_defect", rep.normalization_defect, 0.0, tol),
            Quantity("symmetry_defect", rep.symmetry_defect, 0.0, tol),
        ]
        reports.append((fi, f.name, qs))
    return reports


def _fixed_commuting_example(g):
    rho = embed_diagonal(ProbabilityVector([0.5, 0.5]))
    sigma = embed_diagonal(ProbabilityVector([0.25, 0.75]))
    return Quantity("kl_half_vs_quarter", relative_g_entropy(rho, sigma, g), 0.5 * math.log(4.0 / 3.0), 1e-12)


def _guarded(fn, *args):
    try:
        return fn(*args), ""
    except QunfoldError as exc:
        return [], f"{type(exc).__name__}: {exc}"


def run_suite(config: SuiteConfig) -> list[TrialReport]:
    """Run one suite; reports are ordered by (n, function, trial)."""
    if not isinstance(config, SuiteConfig):
        raise ConfigError("run_suite expects a SuiteConfig")
    if config.trials == 0:
        return []
    suite, tol, seed = config.suite, config.tolerance, config.seed
    sidx = SUITES.index(suite)
    reports: list[TrialReport] = []

    if suite in ("fg-bridge", "f-symmetry"):
        fixed = _fixed_fg_bridge(tol) if suite == "fg-bridge" else _fixed_f_symmetry(tol)
        for idx, name, qs in fixed:
            reports.append(TrialReport(idx, seed, [sidx, 0, idx, 0], 0, name, qs))
        return reports

    ns = config.dims
    uses_g = suite in ("expansion", "hessian", "entropy-monotonicity", "commuting", "readings")
    functions = catalog_g() if uses_g else catalog_f()
    fit_pairs = []
    trial_id = 0

    if suite == "commuting":
        g = functions[0]
        reports.append(TrialReport(trial_id, seed, [sidx, 2, 0, -1], 2, g.name, [_fixed_commuting_example(g)]))
        trial_id += 1

    for n in ns:
        for fi, fn in enumerate(functions):
            for t in range(config.trials):
                stream = [sidx, n, fi, t]
                rng = make_rng(seed, *stream)
                if suite == "split":
                    qs, note = _guarded(_trial_split, n, fn, rng, tol)
                elif suite == "expansion":
                    qs, note = _guarded(_trial_expansion, n, fn, rng, tol)
                elif suite == "hessian":
                    out, note = _guarded(_trial_hessian, n, fn, rng, tol, config.step)
                    qs = []
                    if out:
                        qs, pair = out
                        fit_pairs.append(pair)
                elif suite == "monotonicity":
                    rep = metric_monotonicity_trial(n, fn, rng, trial_id, seed, stream, tol)
                    qs, note = rep.quantities, ""
                elif suite == "entropy-monotonicity":
                    qs, note = _guarded(_trial_entropy_monotonicity, n, fn, rng, tol, t)
                elif suite == "classical":
                    qs, note = _guarded(_trial_classical, n, fn, rng, tol)
                elif suite == "kernel":
                    qs, note = _guarded(_trial_kernel, n, fn, rng, tol)
                elif suite == "commuting":
                    qs, note = _guarded(_trial_commuting, n, fn, rng, tol)
                else:  # readings
                    qs, note = _guarded(_trial_readings, n, fn, rng, tol)
                reports.append(TrialReport(trial_id, seed, stream, n, fn.name, qs, note))
                trial_id += 1

    if suite == "hessian" and fit_pairs:
        fd, fd_half, closed = (np.array(c) for c in zip(*fit_pairs))
        scale = float(fd @ closed / (closed @ closed))
        ratio = float(np.linalg.norm(fd - closed) / np.linalg.norm(fd_half - closed))
        qs = [
            Quantity("fitted_fd_over_closed_form", scale, 1.0, 1e-3),
            Quantity("rms_step_halving_error_ratio", ratio, 4.0, 1.0, scaled=False),
        ]
        reports.append(TrialReport(trial_id, seed, [sidx, 0, 0, -1], 0, "fit", qs))
    return reports


def report_document(config: SuiteConfig, reports) -> dict:
    """JSON-ready suite report with a fixed key order."""
    cfg = asdict(config)
    cfg["ns"] = list(config.dims)
    cfg["tol"] = config.tolerance
    return {
        "schema": 1,
        "suite": config.suite,
        "config": cfg,
        "passed": suite_passed(reports),
        "n_reports": len(reports),
        "n_failed": sum(not r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }

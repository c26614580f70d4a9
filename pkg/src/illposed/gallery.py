"""Named operator models with closed-form spectral data.

Each model carries whichever spectral description it is naturally given in:
a singular value law (compact examples), a multiplier with its benchmark
measure (non-compact and unbounded examples), or a directly known
distribution function (eigenvalue counting asymptotics).  Models also
record the classification and degree their parameters imply, which the
test suite checks against the computed pipeline.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (COUNTING_INTEGERS, DISCRETE, GENERIC_SAMPLED, INF,
                   INDETERMINATE, LEBESGUE_HALFLINE, LEBESGUE_LINE,
                   LEBESGUE_RADIAL, MODERATE, MONOTONE_TAIL, MILD,
                   Multiplier, MeasureSpace, PIECEWISE_MONOTONE,
                   RADIAL_MONOTONE_TAIL, SEVERE, SigmaSequence, TailLaw,
                   DEFAULT_THRESHOLDS, DistributionFunction, geometric_grid)
from . import counting as _counting
from . import distribution as _distribution
from . import estimate as _estimate

__all__ = ["Expected", "OperatorModel", "AnalysisReport", "make", "analyze",
           "available_models", "weyl_from_theta", "MODEL_IDS"]


@dataclass(frozen=True)
class Expected:
    classification: str
    degree: float | None = None
    essinf_verdict: str | None = None


@dataclass(frozen=True)
class OperatorModel:
    """A named operator with its spectral data and expected classification."""

    id: str
    parameters: dict
    kind: str  # "sigma" | "multiplier" | "phi"
    expected: Expected
    sigma_law: TailLaw | None = None
    multiplier: Multiplier | None = None
    measure: MeasureSpace | None = None
    log_phi_form: Callable | None = None
    eps_max: float = 0.99
    notes: str = ""

    def sigma_sequence(self, n_terms=4096):
        """Materialize the singular value law to its first n_terms values.

        Singular values are nonincreasing by definition while a decay law
        only holds asymptotically (the log-type laws rise over their first
        few indices), so the head is sorted into place.
        """
        if self.sigma_law is None:
            raise ValueError(f"model {self.id!r} has no singular value law")
        n = np.arange(1, n_terms + 1, dtype=float)
        values = np.sort(self.sigma_law.sigma(n))[::-1]
        return SigmaSequence(values, tail_law=self.sigma_law)


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise ValueError(f"parameter {name} must be positive, got {value}")


# ---------------------------------------------------------------------------
# compact models (singular value laws)

def riemann_liouville(alpha=1.0):
    """Fractional integration of order alpha on the unit interval."""
    _positive(alpha=alpha)
    return OperatorModel(
        id="riemann_liouville", parameters={"alpha": float(alpha)},
        kind="sigma", sigma_law=TailLaw.power(alpha),
        expected=Expected(MODERATE, float(alpha)),
        notes="sigma_n = n^-alpha; degree alpha")


def multivariate_integration(d=2):
    """Iterated integration over the d-dimensional unit cube.

    The limit degree is 1 for every d, but the log factors push finite
    windows well below it: the report shows the honest finite-size value.
    """
    d = int(d)
    _positive(d=d)
    return OperatorModel(
        id="multivariate_integration", parameters={"d": d},
        kind="sigma", sigma_law=TailLaw.power_log(d),
        expected=Expected(MODERATE, 1.0),
        notes="sigma_n = log(n+1)^(d-1)/n; limit degree 1 for every d")


def sobolev_embedding(p=2.0, d=2):
    """Embedding of the order-p Sobolev space over a d-cube into L2."""
    d = int(d)
    _positive(p=p, d=d)
    return OperatorModel(
        id="sobolev_embedding", parameters={"p": float(p), "d": d},
        kind="sigma", sigma_law=TailLaw.power(p / d),
        expected=Expected(MODERATE, p / d),
        notes="sigma_n = n^(-p/d); degree p/d")


# ---------------------------------------------------------------------------
# counting asymptotics given directly

def weyl_from_theta(theta_inverse, d, c=1.0):
    """log Phi(eps) = log c + (d/2) log theta_inverse(eps)."""
    def log_phi(eps):
        inv = theta_inverse(eps)
        if inv <= 0:
            return -INF
        return math.log(c) + 0.5 * d * math.log(inv)
    return log_phi


def weyl(p=2.0, d=2, c=1.0):
    """Eigenvalue-counting model Phi(eps) = c * (Theta^-1(eps))^(d/2).

    Theta(t) = t^-p, so Phi = c * eps^(-d/(2p)) and the degree is p/d.
    """
    d = int(d)
    _positive(p=p, d=d, c=c)
    return OperatorModel(
        id="weyl", parameters={"p": float(p), "d": d, "c": float(c)},
        kind="phi",
        log_phi_form=weyl_from_theta(lambda eps: eps ** (-1.0 / p), d, c),
        expected=Expected(MODERATE, p / d),
        notes="Phi = c * eps^(-d/(2p)) from the eigenvalue counting law")


def inverse_laplacian(d=2):
    """Squared inverse of the Laplacian on a d-dimensional manifold."""
    d = int(d)
    _positive(d=d)
    base = weyl(p=2.0, d=d, c=1.0)
    return OperatorModel(
        id="inverse_laplacian", parameters={"d": d}, kind="phi",
        log_phi_form=base.log_phi_form,
        expected=Expected(MODERATE, 2.0 / d),
        notes="Phi ~ eps^(-d/4); degree 2/d, dimension dependent")


# ---------------------------------------------------------------------------
# multiplier models

def backward_heat(t_bar=1.0):
    """Periodic backward heat evolution: lambda(k) = exp(-k^2 t), k in Z."""
    _positive(t_bar=t_bar)
    t = float(t_bar)

    def fn(k):
        return math.exp(-t * k * k)

    def strict_root(x):
        # largest integer k >= 0 with k^2 < x
        if x <= 0:
            return -1
        k = int(math.sqrt(x))
        while (k + 1) ** 2 < x:
            k += 1
        while k >= 0 and k * k >= x:
            k -= 1
        return k

    def count(eps):
        k = strict_root(math.log(1.0 / eps) / t) if eps < 1.0 else -1
        return float(2 * k + 1) if k >= 0 else 0.0

    mult = Multiplier(
        fn=fn, shape=DISCRETE, sup_bound=1.0,
        superlevel=count,
        log_superlevel=lambda e: math.log(count(e)) if count(e) > 0 else -INF,
        cutoff_hint=lambda e: math.ceil(
            math.sqrt(max(0.0, math.log(1.0 / e)) / t)) + 2,
        decay=fn)
    return OperatorModel(
        id="backward_heat", parameters={"t_bar": t}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(COUNTING_INTEGERS),
        expected=Expected(SEVERE, essinf_verdict="ill_posed"),
        notes="Phi ~ 2 sqrt(log(1/eps)/t); severe")


def multiplier_a1(s=1.0):
    """lambda = (1 + w^2)^-s on the line: the moderate reference family."""
    _positive(s=s)
    s = float(s)

    def fn(w):
        return (1.0 + w * w) ** -s

    def boundary(eps):
        return math.sqrt(eps ** (-1.0 / s) - 1.0) if eps < 1.0 else 0.0

    mult = Multiplier(fn=fn, shape=MONOTONE_TAIL, sup_bound=1.0,
                      superlevel=lambda e: 2.0 * boundary(e),
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="multiplier_a1", parameters={"s": s}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_LINE),
        expected=Expected(MODERATE, s, essinf_verdict="ill_posed"),
        notes="Phi = 2 sqrt(eps^(-1/s) - 1); degree s")


def multiplier_a2():
    """lambda = w^2 / (1 + w^4): an inner zero that does not change the degree."""
    def fn(w):
        w2 = w * w
        return w2 / (1.0 + w2 * w2)

    def superlevel(eps):
        if eps >= 0.5:
            return 0.0
        disc = math.sqrt(1.0 - 4.0 * eps * eps)
        y_hi = (1.0 + disc) / (2.0 * eps)
        y_lo = 2.0 * eps / (1.0 + disc)  # stable form of (1 - disc)/(2 eps)
        return 2.0 * (math.sqrt(y_hi) - math.sqrt(y_lo))

    mult = Multiplier(fn=fn, shape=PIECEWISE_MONOTONE, sup_bound=0.5,
                      breakpoints=(1.0,), superlevel=superlevel, decay=fn)
    return OperatorModel(
        id="multiplier_a2", parameters={}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_LINE),
        expected=Expected(MODERATE, 1.0, essinf_verdict="ill_posed"),
        eps_max=0.495,
        notes="Phi ~ 2(eps^-1/2 - eps^1/2); the inner zero is negligible")


def multiplier_b(s=1.0):
    """lambda = exp(-|w|^s) on the line: the severe reference family."""
    _positive(s=s)
    s = float(s)

    def fn(w):
        return math.exp(-abs(w) ** s)

    def boundary(eps):
        return math.log(1.0 / eps) ** (1.0 / s) if eps < 1.0 else 0.0

    mult = Multiplier(fn=fn, shape=MONOTONE_TAIL, sup_bound=1.0,
                      superlevel=lambda e: 2.0 * boundary(e),
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="multiplier_b", parameters={"s": s}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_LINE),
        expected=Expected(SEVERE, essinf_verdict="ill_posed"),
        notes="Phi = 2 log(1/eps)^(1/s); severe")


def multiplier_c(s=1.0):
    """lambda = log(|w|)^-2s beyond e, 1 inside: the mild reference family.

    Phi = 2 exp(eps^(-1/(2s))) overflows floats almost immediately, so the
    model supplies log Phi in closed form and the numeric path is only
    usable at coarse eps.
    """
    _positive(s=s)
    s = float(s)

    def fn(w):
        a = abs(w)
        return 1.0 if a < math.e else math.log(a) ** (-2.0 * s)

    def log_superlevel(eps):
        if eps >= 1.0:
            return -INF
        return math.log(2.0) + eps ** (-1.0 / (2.0 * s))

    mult = Multiplier(fn=fn, shape=MONOTONE_TAIL, sup_bound=1.0,
                      breakpoints=(math.e,), log_superlevel=log_superlevel,
                      decay=fn)
    return OperatorModel(
        id="multiplier_c", parameters={"s": s}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_LINE),
        expected=Expected(MILD, essinf_verdict="ill_posed"),
        notes="log Phi = log 2 + eps^(-1/(2s)); mild")


def hausdorff():
    """Moment-sequence operator: lambda = pi / cosh(pi w) on [0, inf).

    The closed-form boundary is the standard small-eps form log(2 pi /
    eps)/pi; the numeric bisection path recovers the exact arccosh
    threshold, which agrees with it to O(eps^2).
    """
    def fn(w):
        x = math.pi * abs(w)
        if x > 700.0:
            return 0.0  # cosh overflows and the quotient underflows anyway
        return math.pi / math.cosh(x)

    def boundary(eps):
        return max(0.0, math.log(2.0 * math.pi / eps) / math.pi)

    mult = Multiplier(fn=fn, shape=MONOTONE_TAIL, sup_bound=math.pi,
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="hausdorff", parameters={}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_HALFLINE),
        expected=Expected(SEVERE, essinf_verdict="ill_posed"),
        notes="Phi ~ log(2 pi/eps)/pi; severe; |T|^2 = pi")


def gaussian_kernel(d=1):
    """Convolution by exp(-|t|^2): lambda = pi^d exp(-|w|^2/2), radial."""
    d = int(d)
    _positive(d=d)
    peak = math.pi ** d

    def fn(r):
        return peak * math.exp(-0.5 * r * r)

    def boundary(eps):
        return math.sqrt(2.0 * math.log(peak / eps)) if eps < peak else 0.0

    mult = Multiplier(fn=fn, shape=RADIAL_MONOTONE_TAIL, sup_bound=peak,
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="gaussian_kernel", parameters={"d": d}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_RADIAL, dim=d),
        expected=Expected(SEVERE, essinf_verdict="ill_posed"),
        notes="Phi ~ log(1/eps)^(d/2); severe")


def laplace_kernel(a=1.0, b=1.0, d=1):
    """Laplace-type point-spread kernel: lambda = (1 + b |w|^2)^-2a, radial.

    The radial computation gives degree 2a/d; at d = 1 this matches the
    dimension-free reading 2a.
    """
    d = int(d)
    _positive(a=a, b=b, d=d)
    a, b = float(a), float(b)

    def fn(r):
        return (1.0 + b * r * r) ** (-2.0 * a)

    def boundary(eps):
        if eps >= 1.0:
            return 0.0
        return math.sqrt((eps ** (-0.5 / a) - 1.0) / b)

    mult = Multiplier(fn=fn, shape=RADIAL_MONOTONE_TAIL, sup_bound=1.0,
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="laplace_kernel", parameters={"a": a, "b": b, "d": d},
        kind="multiplier", multiplier=mult,
        measure=MeasureSpace(LEBESGUE_RADIAL, dim=d),
        expected=Expected(MODERATE, 2.0 * a / d, essinf_verdict="ill_posed"),
        notes="Phi ~ eps^(-d/(4a)); degree 2a/d (2a at d = 1)")


def fractional_line(s=0.5):
    """Fractional integration on the whole line: lambda = |w|^-2s, unbounded."""
    _positive(s=s)
    s = float(s)

    def fn(w):
        return INF if w == 0 else abs(w) ** (-2.0 * s)

    def boundary(eps):
        return eps ** (-0.5 / s)

    mult = Multiplier(fn=fn, shape=MONOTONE_TAIL, sup_bound=INF,
                      superlevel=lambda e: 2.0 * boundary(e),
                      boundary=boundary, decay=fn)
    return OperatorModel(
        id="fractional_line", parameters={"s": s}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_LINE),
        expected=Expected(MODERATE, s, essinf_verdict="ill_posed"),
        notes="Phi = 2 eps^(-1/(2s)); degree s; pole at 0 is harmless")


def parabolic_source(diffusivity=1.0, t0=1.0, d=1):
    """Heat-source identification: lambda = (1 - exp(-t0 k^2 |w|^2))^2 / (k^4 |w|^4)."""
    d = int(d)
    _positive(diffusivity=diffusivity, t0=t0, d=d)
    kap, t0 = float(diffusivity), float(t0)
    kap4 = kap ** 4

    def fn(r):
        if r == 0.0:
            return t0 * t0
        a = t0 * kap * kap * r * r
        num = -math.expm1(-a)
        return (num * num) / (kap4 * r ** 4)

    def envelope(r):
        if r <= 0:
            return t0 * t0
        return min(t0 * t0, 1.0 / (kap4 * r ** 4))

    mult = Multiplier(fn=fn, shape=RADIAL_MONOTONE_TAIL, sup_bound=t0 * t0,
                      decay=envelope)
    return OperatorModel(
        id="parabolic_source",
        parameters={"diffusivity": kap, "t0": t0, "d": d},
        kind="multiplier", multiplier=mult,
        measure=MeasureSpace(LEBESGUE_RADIAL, dim=d),
        expected=Expected(MODERATE, 2.0 / d, essinf_verdict="ill_posed"),
        eps_max=min(0.99, 0.99 * t0 * t0),
        notes="lambda ~ |w|^-4 at infinity; degree 2/d")


def counterexample_sin2():
    """lambda = sin^2 on [0, inf): ill-posed but with a useless Phi."""
    def fn(w):
        return math.sin(w) ** 2

    mult = Multiplier(fn=fn, shape=GENERIC_SAMPLED, sup_bound=1.0,
                      resolution=1.0 / 64.0,
                      log_superlevel=lambda e: INF if e < 1.0 else -INF)
    return OperatorModel(
        id="counterexample_sin2", parameters={}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_HALFLINE),
        expected=Expected(INDETERMINATE, essinf_verdict="ill_posed"),
        notes="Phi = +inf below 1: non-informative although 0 in essran")


def counterexample_const(c=0.5):
    """lambda identically c: Phi is non-informative and nothing is ill-posed."""
    _positive(c=c)
    c = float(c)
    mult = Multiplier(fn=lambda w: c, shape=GENERIC_SAMPLED, sup_bound=c,
                      resolution=1.0 / 64.0,
                      log_superlevel=lambda e: INF if e < c else -INF)
    return OperatorModel(
        id="counterexample_const", parameters={"c": c}, kind="multiplier",
        multiplier=mult, measure=MeasureSpace(LEBESGUE_HALFLINE),
        expected=Expected(INDETERMINATE, essinf_verdict="well_posed_candidate"),
        eps_max=0.99 * c,
        notes="Phi = +inf below c, yet essinf = c > 0: not ill-posed")


_FACTORIES = {
    "riemann_liouville": riemann_liouville,
    "multivariate_integration": multivariate_integration,
    "sobolev_embedding": sobolev_embedding,
    "weyl": weyl,
    "inverse_laplacian": inverse_laplacian,
    "backward_heat": backward_heat,
    "multiplier_a1": multiplier_a1,
    "multiplier_a2": multiplier_a2,
    "multiplier_b": multiplier_b,
    "multiplier_c": multiplier_c,
    "hausdorff": hausdorff,
    "gaussian_kernel": gaussian_kernel,
    "laplace_kernel": laplace_kernel,
    "fractional_line": fractional_line,
    "parabolic_source": parabolic_source,
    "counterexample_sin2": counterexample_sin2,
    "counterexample_const": counterexample_const,
}

MODEL_IDS = tuple(_FACTORIES)


def make(model_id, **params):
    """Construct a gallery model by id; unknown ids raise with the choices."""
    try:
        factory = _FACTORIES[model_id]
    except KeyError:
        raise ValueError(f"unknown model {model_id!r}; choose from "
                         f"{', '.join(MODEL_IDS)}") from None
    return factory(**params)


def available_models():
    """(id, parameter defaults, expected classification, notes) rows."""
    rows = []
    for model_id, factory in _FACTORIES.items():
        sig = inspect.signature(factory)
        params = ", ".join(f"{k}={v.default}" for k, v in sig.parameters.items())
        model = factory()
        exp = model.expected.classification
        if model.expected.degree is not None:
            exp += f" (degree {model.expected.degree:g})"
        rows.append((model_id, params, exp, model.notes))
    return rows


# ---------------------------------------------------------------------------
# the end-to-end pipeline

@dataclass
class AnalysisReport:
    model: str
    params: dict
    phi: DistributionFunction
    ratios: list
    interval: object
    classification: str
    degree: float | None
    expected: Expected
    matches_expected: bool
    diagnostics: dict = field(default_factory=dict)


def _refine_degree(interval, phi, thresholds):
    """Regression-refined degree: prefactors bias the raw ratio window."""
    slope, rms, degree = _estimate.regression_report(phi, thresholds)
    info = {"regression_slope": slope, "regression_rms": rms}
    if interval.classification == MODERATE and degree is not None:
        return degree, info
    return interval.degree, info


def analyze(model, grid=None, thresholds=DEFAULT_THRESHOLDS, n_terms=4096,
            points=60, method="auto", trim=None, match_tol=0.05,
            run_essinf=True):
    """Run the full pipeline for a gallery model and compare with its tag.

    Dispatches on the model's spectral data: singular value laws go through
    the counting path, multipliers through the superlevel path, direct
    counting asymptotics are sampled as curves.  The reported degree is the
    regression-refined one whenever the tail is power-law.
    """
    diagnostics = {}
    if model.kind == "sigma":
        seq = model.sigma_sequence(n_terms)
        sq = seq.squares
        if grid is None:
            lo, hi = float(sq[-1]) * 1.01, float(sq[0]) * 0.99
            if lo >= hi:
                lo = hi / 1e6
            grid = geometric_grid(hi, lo, points)
        phi = _counting.counting_curve(seq, grid)
        interval = _counting.interval_from_sigma(seq, thresholds=thresholds)
        degree = interval.degree
        if interval.classification == MODERATE and \
                "regression_degree" in interval.diagnostics:
            degree = interval.diagnostics["regression_degree"]
        counting_iv = _counting.interval_from_counting(phi, thresholds)
        diagnostics["counting_interval"] = (counting_iv.lower,
                                            counting_iv.upper,
                                            counting_iv.classification)
    elif model.kind == "multiplier":
        if grid is None:
            grid = geometric_grid(model.eps_max,
                                  model.eps_max * 2.0 ** -59, points)
        phi = _distribution.phi_curve(model.multiplier, model.measure, grid,
                                      method=method, trim=trim)
        interval = _counting.interval_from_counting(phi, thresholds)
        degree, info = _refine_degree(interval, phi, thresholds)
        diagnostics.update(info)
        if run_essinf:
            ess = _distribution.essinf_estimate(model.multiplier,
                                                model.measure)
            diagnostics["essinf_value"] = ess.value
            diagnostics["essinf_verdict"] = ess.verdict
    elif model.kind == "phi":
        if grid is None:
            grid = geometric_grid(model.eps_max,
                                  model.eps_max * 2.0 ** -59, points)
        logs = [model.log_phi_form(float(e)) for e in grid]
        phi = DistributionFunction.build(np.asarray(grid, dtype=float), logs,
                                         source="weyl")
        interval = _counting.interval_from_counting(phi, thresholds)
        degree, info = _refine_degree(interval, phi, thresholds)
        diagnostics.update(info)
    else:
        raise ValueError(f"unknown spectral data kind {model.kind!r}")

    ratios = _estimate.ratio_samples(phi)
    matches = interval.classification == model.expected.classification
    if matches and model.expected.degree is not None:
        matches = (degree is not None and
                   abs(degree - model.expected.degree) <= match_tol)
    if model.expected.essinf_verdict is not None and run_essinf and \
            model.kind == "multiplier":
        matches = matches and (diagnostics.get("essinf_verdict") ==
                               model.expected.essinf_verdict)
    diagnostics.setdefault("trend", interval.diagnostics.get("trend"))
    diagnostics.setdefault("drift", interval.diagnostics.get("drift"))
    if trim is not None:
        diagnostics["trim"] = trim
    return AnalysisReport(model=model.id, params=dict(model.parameters),
                          phi=phi, ratios=ratios, interval=interval,
                          classification=interval.classification,
                          degree=degree, expected=model.expected,
                          matches_expected=matches, diagnostics=diagnostics)

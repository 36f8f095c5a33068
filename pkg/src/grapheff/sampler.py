"""Property values and class labels with prescribed Pearson correlations.

Each property P_k is an affine image of a unit-variance latent n_k, and the
continuous label is

    Y = sigma_y * (sum_k r_k n_k + n_0 * sqrt(1 - sum_k r_k^2))

with n_0 an extra independent latent. Because the latents are independent
with unit variance, Cov(n_k, Y) = sigma_y * r_k and Var(Y) = sigma_y^2, so
Pearson(P_k, Y) = r_k. The continuous label is then min-max normalised and
binned into C integer classes.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

SQRT3 = math.sqrt(3.0)


class SpecError(ValueError):
    """Raised for an inadmissible correlation or distribution specification."""


@dataclass(frozen=True)
class Gaussian:
    mu: float
    sigma: float

    def validate(self):
        if not self.sigma > 0:
            raise SpecError(f"Gaussian sigma must be > 0, got {self.sigma}")

    @property
    def mean(self):
        return self.mu

    @property
    def std(self):
        return self.sigma


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def validate(self):
        if not self.a < self.b:
            raise SpecError(f"Uniform needs a < b, got a={self.a}, b={self.b}")

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def std(self):
        return (self.b - self.a) / math.sqrt(12.0)


Family = Union[Gaussian, Uniform]


@dataclass(frozen=True)
class PropertySpec:
    family: Family
    target_r: float


@dataclass(frozen=True)
class CorrelationSpec:
    properties: tuple
    label_classes: int = 2
    sigma_y: float = 1.0
    sample_count: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))

    @property
    def targets(self) -> np.ndarray:
        return np.array([p.target_r for p in self.properties], dtype=float)

    def to_dict(self) -> dict:
        props = []
        for p in self.properties:
            fam = p.family
            if isinstance(fam, Gaussian):
                d = {"family": "gaussian", "mu": fam.mu, "sigma": fam.sigma}
            else:
                d = {"family": "uniform", "a": fam.a, "b": fam.b}
            d["target_r"] = p.target_r
            props.append(d)
        return {"properties": props, "label_classes": self.label_classes,
                "sigma_y": self.sigma_y, "sample_count": self.sample_count}

    @classmethod
    def from_dict(cls, d: dict) -> "CorrelationSpec":
        props = []
        for p in d["properties"]:
            if p["family"] == "gaussian":
                fam = Gaussian(float(p["mu"]), float(p["sigma"]))
            elif p["family"] == "uniform":
                fam = Uniform(float(p["a"]), float(p["b"]))
            else:
                raise SpecError(f"unknown family {p['family']!r}")
            props.append(PropertySpec(fam, float(p["target_r"])))
        return cls(tuple(props), int(d["label_classes"]), float(d["sigma_y"]),
                   int(d["sample_count"]))


@dataclass
class CorrelatedTable:
    property_targets: np.ndarray   # K x N
    continuous_label: np.ndarray   # N
    labels: np.ndarray             # N, ints in 0..C-1
    latents: np.ndarray = field(default=None, repr=False)  # (K+1) x N

    def to_csv(self) -> str:
        k = self.property_targets.shape[0]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"p_{i + 1}" for i in range(k)] + ["y_cont", "label"])
        for i in range(self.labels.shape[0]):
            w.writerow([repr(float(x)) for x in self.property_targets[:, i]]
                       + [repr(float(self.continuous_label[i])),
                          int(self.labels[i])])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CorrelatedTable":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        k = len(header) - 2
        arr = np.array([[float(x) for x in r[:-1]] for r in body])
        return cls(arr[:, :k].T.copy(), arr[:, k].copy(),
                   np.array([int(r[-1]) for r in body], dtype=np.int64))


def validate_spec(spec: CorrelationSpec) -> CorrelationSpec:
    """Check admissibility; return the spec unchanged when valid."""
    if len(spec.properties) < 1:
        raise SpecError("at least one property is required")
    for i, p in enumerate(spec.properties):
        p.family.validate()
        if not -1.0 <= p.target_r <= 1.0:
            raise SpecError(f"target_r[{i}] = {p.target_r} outside [-1, 1]")
    ssq = float(np.sum(spec.targets ** 2))
    # tolerate rounding on the boundary, e.g. 0.6**2 + 0.8**2
    if ssq > 1.0 + 1e-12:
        raise SpecError(f"sum of squared target correlations is {ssq:.6g} > 1")
    if spec.label_classes < 2:
        raise SpecError(f"label_classes must be >= 2, got {spec.label_classes}")
    if not spec.sigma_y > 0:
        raise SpecError(f"sigma_y must be > 0, got {spec.sigma_y}")
    if spec.sample_count < 2:
        raise SpecError(f"sample_count must be >= 2, got {spec.sample_count}")
    return spec


def _unit_latent(family, rng, n):
    if isinstance(family, Uniform):
        return rng.uniform(-SQRT3, SQRT3, size=n)
    return rng.standard_normal(n)


def sample_latents(spec: CorrelationSpec, seed) -> np.ndarray:
    """Return a (K+1) x N array; row 0 is the independent label noise.

    Rows 1..K have the family of the matching property (standard normal,
    or uniform on [-sqrt 3, sqrt 3]) and unit variance. Row 0 is standard
    normal.
    """
    rng = np.random.default_rng(seed)
    n = spec.sample_count
    rows = [rng.standard_normal(n)]
    rows += [_unit_latent(p.family, rng, n) for p in spec.properties]
    return np.vstack(rows)


def realize_properties(spec: CorrelationSpec, latents: np.ndarray) -> np.ndarray:
    out = np.empty((len(spec.properties), latents.shape[1]))
    for k, p in enumerate(spec.properties):
        out[k] = p.family.mean + p.family.std * latents[k + 1]
    return out


def compose_label_variable(spec: CorrelationSpec, latents: np.ndarray) -> np.ndarray:
    r = spec.targets
    resid = math.sqrt(max(0.0, 1.0 - float(np.sum(r ** 2))))
    return spec.sigma_y * (r @ latents[1:] + resid * latents[0])


def discretize_labels(y, classes: int) -> np.ndarray:
    """Min-max normalise, scale by ``classes`` and floor; the top value is
    clamped so that labels lie in ``0..classes-1``."""
    y = np.asarray(y, dtype=float)
    if y.shape[0] < 2:
        raise SpecError("need at least two values to discretize")
    lo, hi = y.min(), y.max()
    if hi == lo:
        raise SpecError("cannot discretize a constant label variable")
    z = (y - lo) / (hi - lo)
    return np.minimum(np.floor(z * classes), classes - 1).astype(np.int64)


def generate_correlated_table(spec: CorrelationSpec, seed) -> CorrelatedTable:
    validate_spec(spec)
    latents = sample_latents(spec, seed)
    props = realize_properties(spec, latents)
    y = compose_label_variable(spec, latents)
    labels = discretize_labels(y, spec.label_classes)
    return CorrelatedTable(props, y, labels, latents)


def single_property_spec(family: Family, r: float, classes: int = 2,
                         n: int = 4096, sigma_y: float = 1.0) -> CorrelationSpec:
    return CorrelationSpec((PropertySpec(family, r),), classes, sigma_y, n)


def three_property_spec(n: int = 4096, classes: int = 11) -> CorrelationSpec:
    """Two uniform properties and one Gaussian with r = (-0.7, 0.1, 0.7)."""
    return CorrelationSpec(
        (PropertySpec(Uniform(0.0, 12.0), -0.7),
         PropertySpec(Uniform(2.0, 4.0), 0.1),
         PropertySpec(Gaussian(5.0, 2.0), 0.7)),
        label_classes=classes, sigma_y=1.0, sample_count=n)

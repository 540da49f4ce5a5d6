"""Registry of example continued fractions with independent reference oracles."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..cf import TwoVariantCF
from ..errors import DomainError
from ..numerics import PrecisionContext, QComplex, parse_number
from . import oracles
from .builders import arctan_cf, perron_cn, perron_digamma, perron_incgamma, perron_log

__all__ = [
    "GalleryEntry", "GALLERY", "get_entry", "build", "oracle_value", "parse_params",
    "arctan_cf", "perron_cn", "perron_digamma", "perron_incgamma", "perron_log",
    "ORACLE_CACHE", "INVARIANT_CASES",
]


@dataclass(frozen=True)
class GalleryEntry:
    id: str
    builder: Callable
    oracle: Callable
    params: tuple
    defaults: dict
    description: str
    literals: dict = field(default_factory=dict)

    def normalize(self, params: dict) -> dict:
        unknown = set(params) - set(self.params)
        if unknown:
            raise DomainError(f"unknown parameter(s) for {self.id}: {sorted(unknown)}")
        out = {}
        for name in self.params:
            raw = params.get(name, self.defaults.get(name))
            if raw is None:
                raise DomainError(f"missing parameter {name!r} for {self.id}")
            out[name] = QComplex.of(raw)
        return out

    def build(self, params: dict) -> TwoVariantCF:
        p = self.normalize(params)
        return self.builder(*(p[name] for name in self.params))

    def literal(self, params: dict):
        p = self.normalize(params)
        return self.literals.get(tuple(p[name] for name in self.params))


def _q(*values):
    return tuple(QComplex.of(v) for v in values)


GALLERY = {
    e.id: e
    for e in (
        GalleryEntry(
            "perron_digamma", perron_digamma,
            lambda p, ctx: oracles.digamma_ratio(p["x"], p["nu"], ctx),
            ("x", "nu"), {"x": "1", "nu": "1/2"},
            "4/[psi((x+3+nu)/4)+psi((x+3-nu)/4)-psi((x+1+nu)/4)-psi((x+1-nu)/4)], Re x > 0",
            {_q(1, "1/2"): "1.327052799890558739735", _q("1/2", "1/2"): "0.883414269615"},
        ),
        GalleryEntry(
            "perron_incgamma", perron_incgamma,
            lambda p, ctx: oracles.incgamma_ratio(p["z"].re, p["alpha"].re, ctx),
            ("z", "alpha"), {"z": "1/16", "alpha": "4"},
            "(z^(alpha-1) e^z int_z^inf e^-v v^-alpha dv)^-1, z > 0",
            {_q("1/16", 4): "3.09147726049419952742569567195"},
        ),
        GalleryEntry(
            "perron_log", perron_log,
            lambda p, ctx: oracles.log_ratio(p["x"], ctx),
            ("x",), {"x": "1"},
            "x/log(1+x), x not in (-inf,-1]",
        ),
        GalleryEntry(
            "perron_cn", perron_cn,
            lambda p, ctx: oracles.cn_laplace(p["x"].re, p["k"].re, ctx),
            ("x", "k"), {"x": "0.8", "k": "0.9"},
            "int_0^inf exp(-t x) cn(t; k) dt, x > 0, 0 < k < 1",
        ),
        GalleryEntry(
            "arctan", arctan_cf,
            lambda p, ctx: oracles.arctan(p["x"], ctx),
            ("x",), {"x": "1"},
            "arctan x, |x| <= 1, x != +-i",
        ),
    )
}

# Parameter sets exercised by the property suites (one per subclass where possible).
INVARIANT_CASES = (
    ("perron_digamma", {"x": "1", "nu": "1/2"}),
    ("perron_digamma", {"x": "1/2", "nu": "1/2"}),
    ("perron_incgamma", {"z": "1/16", "alpha": "4"}),
    ("perron_log", {"x": "1"}),
    ("perron_log", {"x": "-1.5+0.01i"}),
    ("perron_cn", {"x": "0.8", "k": "0.9"}),
    ("arctan", {"x": "1"}),
    ("arctan", {"x": "1/2"}),
)

ORACLE_CACHE = oracles.OracleCache()


def get_entry(gallery_id: str) -> GalleryEntry:
    try:
        return GALLERY[gallery_id]
    except KeyError:
        raise DomainError(f"unknown gallery id {gallery_id!r}; known: {sorted(GALLERY)}") from None


def build(gallery_id: str, params: dict | None = None) -> TwoVariantCF:
    return get_entry(gallery_id).build(params or {})


def oracle_value(gallery_id: str, params: dict | None, ctx: PrecisionContext):
    entry = get_entry(gallery_id)
    p = entry.normalize(params or {})
    entry.builder(*(p[name] for name in entry.params))  # domain validation
    key = (gallery_id, tuple(p[name] for name in entry.params), ctx.digits)
    return ORACLE_CACHE.get_or_compute(key, lambda: entry.oracle(p, ctx))


def parse_params(items) -> dict:
    """['x=1', 'nu=1/2'] -> {'x': QComplex(1), 'nu': QComplex(1/2)}."""
    out = {}
    for item in items:
        if "=" not in item:
            raise DomainError(f"parameter {item!r} is not of the form name=value")
        name, value = item.split("=", 1)
        out[name.strip()] = parse_number(value)
    return out

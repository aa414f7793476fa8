"""Formal group laws over unramified p-adic rings."""

import json

from . import _core
from ._core import (
    FormalModule,
    commutant_dimension,
    endo_subfield,
    generation_check,
    honda,
    lubin_tate,
    multiplicative,
    torsion_count,
    torsion_degree,
    unit_quotient_order,
)

__all__ = [
    "FormalModule",
    "commutant_dimension",
    "endo_subfield",
    "generation_check",
    "honda",
    "lubin_tate",
    "multiplicative",
    "run",
    "torsion_count",
    "torsion_degree",
    "unit_quotient_order",
]


def run(command, **config):
    """Run a CLI suite in-process; returns (exit_code, report dict).

    Keyword arguments are the CLI keys (p, f, N, group, u, nmax, ...).
    """
    kv = {}
    for key, value in config.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        kv[key] = str(value)
    code, text = _core.run_json(command, kv)
    return code, json.loads(text)


"""JSON (de)serialization for grids, harmonic polynomials, maps, subspaces
and Moebius parameters.  Callable-backed maps are in-memory objects and do
not serialize."""

from __future__ import annotations

import json

import numpy as np

from .harmonics import HarmonicExpansion, HarmonicPoly, Subspace
from .moebius import MoebiusMap
from .polynomials import Poly
from .quadrature import BallGrid, SphereGrid
from .spheremap import SphereMap, poly_map, sampled_map

__all__ = [
    "grid_to_dict", "grid_from_dict",
    "poly_to_dict", "poly_from_dict",
    "harmonic_to_dict", "harmonic_from_dict",
    "expansion_to_dict", "expansion_from_dict",
    "map_to_dict", "map_from_dict",
    "moebius_to_dict", "moebius_from_dict",
    "subspace_to_dict",
    "save_json", "load_json",
]


def grid_to_dict(g: SphereGrid | BallGrid) -> dict:
    return {
        "n": g.n,
        "nodes": g.nodes.tolist(),
        "weights": g.weights.tolist(),
        "exactness": g.exactness,
        "domain": "ball" if isinstance(g, BallGrid) else "sphere",
    }


def grid_from_dict(d: dict) -> SphereGrid | BallGrid:
    cls = BallGrid if d.get("domain") == "ball" else SphereGrid
    return cls(int(d["n"]), np.asarray(d["nodes"], dtype=float),
               np.asarray(d["weights"], dtype=float), int(d["exactness"]))


def poly_to_dict(p: Poly) -> dict:
    return {"n": p.n, "terms": [{"exponents": list(e), "coeff": c} for e, c in sorted(p.coeffs.items())]}


def poly_from_dict(d: dict) -> Poly:
    return Poly(int(d["n"]), {tuple(t["exponents"]): float(t["coeff"]) for t in d["terms"]})


def harmonic_to_dict(h: HarmonicPoly) -> dict:
    out = poly_to_dict(h.poly)
    out["k"] = h.k
    return out


def harmonic_from_dict(d: dict) -> HarmonicPoly:
    return HarmonicPoly(int(d["n"]), int(d["k"]), poly_from_dict(d))


def expansion_to_dict(e: HarmonicExpansion) -> dict:
    return {
        "n": e.n, "m": e.m, "kmax": e.kmax,
        "blocks": {str(k): b.tolist() for k, b in e.blocks.items()},
        "quadrature_warning": e.quadrature_warning,
    }


def expansion_from_dict(d: dict) -> HarmonicExpansion:
    blocks = {int(k): np.asarray(b, dtype=float) for k, b in d["blocks"].items()}
    return HarmonicExpansion(int(d["n"]), int(d["m"]), int(d["kmax"]), blocks,
                             bool(d.get("quadrature_warning", False)))


def map_to_dict(u: SphereMap) -> dict:
    if u.is_poly:
        return {
            "n": u.n, "m": u.m, "backing": "poly",
            "components": [poly_to_dict(c) for c in u.components],
        }
    if u.is_sampled:
        b = u.backing
        return {
            "n": u.n, "m": u.m, "backing": "sampled",
            "grid": grid_to_dict(b.grid),
            "values": b.values.tolist(),
            "jacobians": None if b.jacobians is None else b.jacobians.tolist(),
        }
    raise TypeError("callable-backed maps do not serialize")


def map_from_dict(d: dict) -> SphereMap:
    if d["backing"] == "poly":
        return poly_map(int(d["n"]), [poly_from_dict(c) for c in d["components"]])
    if d["backing"] == "sampled":
        grid = grid_from_dict(d["grid"])
        jac = d.get("jacobians")
        return sampled_map(grid, np.asarray(d["values"], dtype=float),
                           None if jac is None else np.asarray(jac, dtype=float))
    raise ValueError(f"unknown backing {d['backing']!r}")


def moebius_to_dict(phi: MoebiusMap) -> dict:
    return {"n": phi.n, "O": phi.O.tolist(), "xi": phi.xi.tolist(), "lambda": phi.lam}


def moebius_from_dict(d: dict) -> MoebiusMap:
    return MoebiusMap(int(d["n"]), np.asarray(d["O"], dtype=float),
                      np.asarray(d["xi"], dtype=float), float(d["lambda"]))


def subspace_to_dict(s: Subspace) -> dict:
    return {
        "n": s.n, "k": s.k, "label": s.label, "eigenvalue": s.eigenvalue,
        "basis": [[poly_to_dict(c) for c in m.components] for m in s.maps],
    }


def save_json(obj: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)

"""Serialization round trips and the command-line surface."""

import json

import numpy as np
import pytest

from spherestab.cli import main
from spherestab.io import (
    grid_from_dict,
    grid_to_dict,
    harmonic_from_dict,
    harmonic_to_dict,
    map_from_dict,
    map_to_dict,
    moebius_from_dict,
    moebius_to_dict,
    save_json,
    subspace_to_dict,
)
from spherestab.moebius import moebius_apply, random_moebius
from spherestab.quadrature import build_sphere_grid
from spherestab.spheremap import identity_map, linear_map, sampled_map


def test_grid_round_trip():
    g = build_sphere_grid(3, 8)
    g2 = grid_from_dict(grid_to_dict(g))
    assert g2.n == 3 and g2.exactness == g.exactness
    assert np.allclose(g2.nodes, g.nodes) and np.allclose(g2.weights, g.weights)


def test_harmonic_round_trip(sphere_points):
    from spherestab.harmonics import scalar_basis

    h = scalar_basis(3, 3)[2]
    h2 = harmonic_from_dict(harmonic_to_dict(h))
    assert h2.k == 3 and h2.n == 3
    assert np.max(np.abs(h(sphere_points) - h2(sphere_points))) < 1e-15


def test_expansion_round_trip(sphere_points):
    from spherestab.harmonics import analyze, synthesize
    from spherestab.io import expansion_from_dict, expansion_to_dict

    e = analyze(identity_map(3), 2)
    e2 = expansion_from_dict(json.loads(json.dumps(expansion_to_dict(e))))
    v = synthesize(e2)
    assert np.max(np.abs(v.eval(sphere_points) - sphere_points)) < 1e-12


def test_poly_map_round_trip(sphere_points):
    u = linear_map(np.diag([1.0, 2.0, 3.0]))
    u2 = map_from_dict(map_to_dict(u))
    assert np.max(np.abs(u.eval(sphere_points) - u2.eval(sphere_points))) < 1e-15


def test_sampled_map_round_trip():
    g = build_sphere_grid(3, 6)
    u = identity_map(3)
    us = sampled_map(g, u.eval(g.nodes), u.jac(g.nodes))
    d = map_to_dict(us)
    u2 = map_from_dict(d)
    assert u2.is_sampled
    X, U, J = u2.sample(u2.grid)
    assert np.allclose(U, g.nodes) and np.allclose(J, np.broadcast_to(np.eye(3), J.shape))


def test_moebius_round_trip(rng, sphere_points):
    phi = random_moebius(rng)
    phi2 = moebius_from_dict(moebius_to_dict(phi))
    assert np.max(np.abs(moebius_apply(phi, sphere_points) - moebius_apply(phi2, sphere_points))) < 1e-14


def test_subspace_export():
    from spherestab.operator import eigenspaces

    d = subspace_to_dict(eigenspaces(3, 2)[2])
    assert d["label"] == "eig3" and d["eigenvalue"] == 3.0
    assert len(d["basis"]) == 3


def test_callable_map_refuses_serialization():
    from spherestab.moebius import as_sphere_map, identity_moebius

    with pytest.raises(TypeError):
        map_to_dict(as_sphere_map(identity_moebius(3)))


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_spectrum_table(tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--n", "3", "--kmax", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["k", "i", "sigma", "dim"]
    rows = {tuple(l.split(",")[:2]): l.split(",") for l in lines[1:]}
    assert rows[("3", "3")][6] == "1/4"     # C_{3,3,3}
    assert rows[("1", "2")][6] == "0/1"     # kernel row
    # residual column stays tiny
    assert all(float(l.split(",")[-1]) < 1e-9 for l in lines[1:])


def test_cli_spectrum_n4(tmp_path):
    out = tmp_path / "spec4.csv"
    assert main(["spectrum", "--n", "4", "--kmax", "2", "--out", str(out)]) == 0
    rows = {tuple(l.split(",")[:2]): l.split(",") for l in out.read_text().splitlines()[1:]}
    assert rows[("2", "3")][6] == "0/1"     # C_{4,2,3} = 0


def test_cli_rates_flip(tmp_path):
    out = tmp_path / "rates.csv"
    assert main(["rates", "--family", "flip", "--sigmas", "0.05:0.8:geometric:6",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",")[0] == "sigma"
    slope = float(lines[1].split(",")[-1])
    assert abs(slope - 3.0) < 0.05


def test_cli_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["rates", "--family", "stretch", "--sigmas", "0.004:0.04:geometric:5",
                     "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_deficits_identity(tmp_path):
    from spherestab.io import map_to_dict

    mp = tmp_path / "id.json"
    save_json(map_to_dict(identity_map(3)), str(mp))
    out = tmp_path / "rep.json"
    assert main(["deficits", "--map", str(mp), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["volume"] - 1.0) < 1e-12
    assert rep["delta"] < 1e-12 and rep["epsilon"] < 1e-12
    assert rep["degree_estimate"] == 1


def test_cli_fit_moebius(tmp_path):
    mp = tmp_path / "ell.json"
    save_json(map_to_dict(linear_map(np.diag([1.0, 1.0, 1.1]))), str(mp))
    out = tmp_path / "fit.json"
    assert main(["fit-moebius", "--map", str(mp), "--out", str(out)]) == 0
    fit = json.loads(out.read_text())
    assert fit["ratio"] < 100
    assert fit["value"] >= 0


def test_cli_bad_inputs(tmp_path):
    assert main(["rates", "--family", "flip", "--sigmas", "nonsense"]) == 2
    assert main(["deficits", "--map", str(tmp_path / "missing.json")]) == 2
    # sampled map without gradient data cannot produce a deficit report
    g = build_sphere_grid(3, 6)
    nograd = tmp_path / "nograd.json"
    save_json(map_to_dict(sampled_map(g, g.nodes.copy(), None)), str(nograd))
    assert main(["deficits", "--map", str(nograd)]) == 2
    # degenerate volume cannot be Moebius-fitted
    flat = tmp_path / "flat.json"
    save_json(map_to_dict(linear_map(np.diag([1.0, 1.0, 0.0]))), str(flat))
    assert main(["fit-moebius", "--map", str(flat)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--config", str(bad), "--only"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus-command"])
    assert exc.value.code == 2


def test_cli_stability_sweep(tmp_path):
    out = tmp_path / "stab.csv"
    assert main(["stability", "--family", "homothety", "--theorem", "isometric",
                 "--sigmas", "0.1:0.5:geometric:4", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sigma,lhs,delta,epsilon,E,ratio"
    assert len(lines) == 5
    ratios = [float(l.split(",")[5]) for l in lines[1:]]
    assert max(ratios) < 100


def test_cli_verify_unknown_check():
    assert main(["verify", "--only", "no.such.check"]) == 2


def test_cli_verify_subset_and_tolerance(tmp_path):
    rep = tmp_path / "report.json"
    rc = main(["verify", "--only", "quadrature.exactness", "quadrature.linearity",
               "--out", str(rep)])
    assert rc == 0
    data = json.loads(rep.read_text())
    assert data["passed"] and len(data["checks"]) == 2
    # an impossible tolerance must fail with exit code 1
    rc = main(["verify", "--tol", "1e-20", "--only", "quadrature.exactness"])
    assert rc == 1

"""The invariant-check registry behind the verify command."""

from spherestab.config import Config
from spherestab.verify import ALL_CHECKS, run_checks


def test_names_are_unique():
    names = [n for n, _ in ALL_CHECKS]
    assert len(names) == len(set(names))


def test_subset_run_passes():
    cfg = Config()
    ok, results = run_checks(cfg, names=[
        "quadrature.exactness",
        "harmonics.orthonormal",
        "operator.spectrum",
        "forms.min_constant",
    ])
    assert ok
    assert len(results) == 4
    assert all(r["passed"] for r in results)


def test_impossible_tolerance_fails():
    cfg = Config().with_tolerance(1e-20)
    ok, results = run_checks(cfg, names=["quadrature.exactness"])
    assert not ok
    assert not results[0]["passed"]


def test_crashing_check_reports_failure():
    import spherestab.verify as V

    def boom(cfg):
        raise RuntimeError("synthetic")

    old = V.ALL_CHECKS
    V.ALL_CHECKS = [("synthetic.boom", boom)]
    try:
        ok, results = V.run_checks(Config())
        assert not ok
        assert "synthetic" in results[0]["detail"]
    finally:
        V.ALL_CHECKS = old

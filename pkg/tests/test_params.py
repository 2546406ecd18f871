import numpy as np
import pytest

from sosre import params, verify
from sosre.params import (
    InvariantViolation,
    ModelParams,
    NearSingular,
    ParseError,
    guard_tol_default,
    guard_violations,
    min_guard_margins,
    rel_diff,
    require_all_nonsingular,
    require_nonsingular,
    validate_params,
)


def test_model_params_coercion():
    p = ModelParams(eta=1, zeta=0.5, theta=2, lambdas=[0.3, 1], xis=(0.2, 0.4))
    assert p.n == 2
    assert isinstance(p.lambdas, tuple) and p.lambdas[1] == 1 + 0j
    assert p.eta == 1 + 0j
    assert p.lambdas_array().dtype == complex


def test_model_params_structural_errors():
    with pytest.raises(InvariantViolation, match="at least one"):
        ModelParams(0.7, 1.1, 0.9, (), ())
    with pytest.raises(InvariantViolation, match="equal length"):
        ModelParams(0.7, 1.1, 0.9, (0.3,), (0.2, 0.4))
    with pytest.raises(InvariantViolation, match="finite"):
        ModelParams(np.nan, 1.1, 0.9, (0.3,), (0.2,))
    with pytest.raises(InvariantViolation, match="finite"):
        ModelParams(0.7, 1.1, 0.9, (np.inf,), (0.2,))
    with pytest.raises(InvariantViolation, match="sequence of numbers"):
        ModelParams(0.7, 1.1, 0.9, 0.3, (0.2,))


def test_replace_and_drop():
    p = ModelParams(0.7, 1.1, 0.9, (0.3, 0.5), (0.2, 0.4))
    q = p.replace_lambda(1, 0.6)
    assert q.lambdas == (0.3 + 0j, 0.6 + 0j) and q.xis == p.xis
    assert p.lambdas[1] == 0.5 + 0j  # original untouched
    r = p.drop_site(0)
    assert r.n == 1 and r.lambdas == (0.5 + 0j,) and r.xis == (0.4 + 0j,)


def test_rel_diff():
    assert rel_diff(0.0, 0.0) == 0.0
    assert rel_diff(1.0, 1.0) == 0.0
    assert abs(rel_diff(1e300, 2e300) - 0.5) < 1e-15
    assert abs(rel_diff(1e-300, 2e-300) - 0.5) < 1e-15
    assert rel_diff(1 + 1j, 1 + 1j) == 0.0


def test_guard_tol_env(monkeypatch):
    monkeypatch.delenv(params.GUARD_ENV_VAR, raising=False)
    assert guard_tol_default() == params.DEFAULT_GUARD_TOL
    monkeypatch.setenv(params.GUARD_ENV_VAR, "1e-3")
    assert guard_tol_default() == 1e-3
    monkeypatch.setenv(params.GUARD_ENV_VAR, "lots")
    with pytest.raises(ParseError):
        guard_tol_default()
    monkeypatch.setenv(params.GUARD_ENV_VAR, "-1")
    with pytest.raises(ParseError):
        guard_tol_default()
    monkeypatch.setenv(params.GUARD_ENV_VAR, "inf")
    with pytest.raises(ParseError):
        guard_tol_default()


def test_validate_params_names_offenders():
    p = ModelParams(0.7, 1.1, 0.9, (-1.1, 0.5), (0.2, 0.4))
    with pytest.raises(InvariantViolation, match=r"zeta\+lambda\[0\]"):
        validate_params(p)
    q = ModelParams(0.7, 1.1, 1e-9, (0.3, 0.5), (0.2, 0.4))
    with pytest.raises(InvariantViolation, match=r"theta\+0\*eta"):
        validate_params(q)
    r = ModelParams(0.7, 1.1, 0.9, (0.3, 0.3), (0.2, 0.4))
    with pytest.raises(InvariantViolation, match=r"lambda\[0\]-lambda\[1\]"):
        validate_params(r)


def test_guard_violations_skip():
    p = ModelParams(0.7, 1.1, 0.9, (0.2, 0.5), (0.2, 0.4))
    bad = guard_violations(p)
    assert "lambda[0]-xi[0]" in bad
    assert "lambda[0]-xi[0]" not in guard_violations(p, skip={"lambda[0]-xi[0]"})
    validate_params(p, skip={"lambda[0]-xi[0]"})


def test_min_guard_margins_consistent():
    rng = np.random.default_rng(110)
    p = verify.sample_params(verify.SuiteConfig(), 3, rng)
    gen, rat = min_guard_margins(p)
    assert gen > 0 and rat > 0
    # any tolerance below both margins admits the point
    assert guard_violations(p, guard_tol=gen * 0.99, ratio_guard_tol=rat * 0.99) == []
    assert len(guard_violations(p, guard_tol=gen * 1.01, ratio_guard_tol=rat * 1.01)) >= 1


def test_require_nonsingular():
    require_nonsingular("anything", 0.5)
    with pytest.raises(NearSingular, match="2\\*lambda"):
        require_nonsingular("2*lambda", 1e-9)
    with pytest.raises(NearSingular, match="family\\[3\\]"):
        require_all_nonsingular(
            lambda k: f"family[{k}]", np.array([1.0, 0.5, 0.25, 1e-12])
        )
    require_all_nonsingular(lambda k: "none", np.array([]))

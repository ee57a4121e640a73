"""Acceptance criteria 1-10, one pass/fail line each (see the terminal summary)."""

import json
import time

import numpy as np
import pytest

from deformq import cli, verify
from deformq import dirac as dr
from deformq import fw
from deformq.moyal import landau_problem
from deformq.spin import precession_series
from deformq.susy import witten_index
from deformq.verify import RunConfig

CFG = RunConfig(backend="exact", hbar=1.0, triples=1000)


def suite(name):
    t0 = time.perf_counter()
    recs = verify.SUITE_FUNCS[name](CFG)
    return recs, time.perf_counter() - t0


def failed(recs):
    return [r.check for r in recs if not r.passed]


def summary(recs):
    bad = failed(recs)
    return f"{len(recs) - len(bad)}/{len(recs)} checks" + (f"; failing: {bad[:3]}" if bad else "")


@pytest.fixture(scope="module")
def clifford():
    return suite("cliffordization")


def test_criterion_01_cliffordization(criterion, clifford):
    recs, dt = clifford
    core = [r for r in recs if "random monomials" in r.check or "grade law" in r.check]
    ok = len(core) == 3 and not failed(core) and dt < 30 and CFG.triples >= 1000
    assert criterion(1, ok, f"{summary(core)} over {CFG.triples} triples, d <= 8, {dt:.1f} s")


def test_criterion_02_scalar_part_theorem(criterion):
    recs, _ = suite("wick")
    core = [r for r in recs if "200 draws" in r.check or "Wick pairing" in r.check]
    ok = len(core) == 4 and not failed(recs)
    assert criterion(2, ok, f"n = 2, 4, 6 with 200 draws each and the n = 4 pairing sum; {summary(recs)}")


def test_criterion_03_oscillator(criterion):
    recs, _ = suite("oscillator")
    genvalue = [r for r in recs if r.check.startswith("H ⋆ pi_")]
    norms = [r for r in recs if "∫" in r.check]
    worst = max(r.residual for r in norms)
    ok = len(genvalue) == 13 and not failed(recs) and worst <= 1e-9
    assert criterion(3, ok, f"exact genvalues n <= 12; worst normalization error {worst:.1e}; {summary(recs)}")


def test_criterion_04_landau(criterion):
    recs, _ = suite("landau")
    L = landau_problem(1, 1)
    levels = [r for r in recs if r.check.startswith(("H_L ⋆ pi_", "J ⋆ pi_"))]
    ok = len(levels) == 2 * 49 and not failed(recs) and L.energy(6) == L.energy(0) * 13
    assert criterion(4, ok, f"n, l <= 6 energies and angular momenta exact; {summary(recs)}")


def test_criterion_05_spin(criterion, clifford):
    recs, _ = clifford
    spin = [r for r in recs if r.paper_ref == "Pauli star product and spin"]
    times = [float(t) for t in np.linspace(0, 6, 64)]
    worst = max(r[3] for r in precession_series((0.4, -1.1, 0.7), 1.5, 2.0, 1.0, times, 1.0))
    ok = not failed(spin) and worst <= 1e-10
    assert criterion(5, ok, f"projector and expectation identities exact; precession residual {worst:.1e} "
                            f"over 64 samples; {summary(spin)}")


@pytest.fixture(scope="module")
def susy_records():
    return suite("susy")[0]


def test_criterion_06_feynman_and_susy_spectrum(criterion, susy_records):
    recs = [r for r in susy_records if r.paper_ref != "Witten index"]
    trick = [r for r in recs if r.check.startswith("[(p - eA/c)")]
    spectrum = [r for r in recs if r.check.startswith("H ⋆ pi(n_F")]
    ok = len(trick) == 2 and len(spectrum) == 18 and not failed(recs)
    assert criterion(6, ok, f"symmetric-gauge identity and n <= 8 spectrum exact; {summary(recs)}")


def test_criterion_07_witten_index(criterion, susy_records):
    recs = [r for r in susy_records if r.paper_ref == "Witten index"]
    values = [witten_index(n).value for n in range(1, 9)]
    ok = not failed(recs) and max(abs(v - 1) for v in values) <= 1e-9
    assert criterion(7, ok, f"index {values[0]:.12g} for N = 1..8; {summary(recs)}")


def test_criterion_08_dirac(criterion):
    recs, _ = suite("dirac")
    per_rep = {k: sum(r.check.startswith(k + ":") for r in recs) for k in dr.REPS}
    kin = dr.Kinematics((4, 0, 0), 3, 1)
    times = np.linspace(0, 10 / float(kin.energy), 41)
    worst = max(dr.zitterbewegung_heisenberg_residual(dr.build_rep(k), kin, 0, float(t))
                for k in dr.REPS for t in times)
    ok = all(per_rep.values()) and not failed(recs) and kin.energy == 5 and worst <= 1e-8
    assert criterion(8, ok, f"D4/D5/D6 {per_rep}; Zitterbewegung residual {worst:.1e}; {summary(recs)}")


def test_criterion_09_foldy_wouthuysen(criterion):
    recs, _ = suite("fw")
    ctx = fw.fw_context("D4")
    odd = [fw.fw_dirac_em(f, ctx).odd_after_second.is_zero() for f in fw.standard_cases(ctx)]
    ok = all(odd) and not failed(recs)
    assert criterion(9, ok, f"four field cases term by term, odd part zero after two steps; {summary(recs)}")


def test_criterion_10_full_verify(criterion, tmp_path, monkeypatch, capsys):
    monkeypatch.delenv(cli.OUT_ENV, raising=False)
    t0 = time.perf_counter()
    code = cli.main(["verify", "--suite", "all", "--out", str(tmp_path)])
    dt = time.perf_counter() - t0
    capsys.readouterr()
    report = json.loads((tmp_path / "report.json").read_text())
    ok = code == 0 and dt < 300 and not report["summary"]["failed"]
    assert criterion(10, ok, f"verify --suite all: exit {code}, {report['summary']['checks']} checks in {dt:.1f} s")

"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible with
``pytest -s`` or when run as a script) and then asserts.
"""
import cmath
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from etcs.assembly import assemble_nu_bar, load_block, load_gluing, load_instance
from etcs.configuration import (
    PLUS,
    Configuration,
    gluing_angle_cos2,
    lambda_sum_gram,
    proj_composition,
)
from etcs.dedekind import FixedPoint, FixedPointSet, dedekind_sum
from etcs.defects import (
    CoboundaryData,
    closed_relations_check,
    defect_report,
    ek_solvability,
    ek_solvability_scan,
    g2_bordism_check,
    g2_class_count,
    smooth_structure_count,
)
from etcs.eta import EtaParams, F_small, c_constant, dedekind_log
from etcs.gluing import GluingData, enumerate_gluings
from etcs.hyperbolic import AngleExpr, HyperPolygon, cusp_sum, nu_bar_via_polygon, polygon_area, rho_from_theta
from etcs.lattice import GramMatrix

from conftest import DATA

NU_BAR_TOL = 1e-6
ETA_TOL = 1e-10
DEDEKIND_TOL = 1e-9
RUNTIME_LIMIT = 1.0


def verdict(n: int, checks: dict) -> None:
    failed = [name for name, ok in checks.items() if not ok]
    status = "PASS" if not failed else "FAIL (" + ", ".join(failed) + ")"
    print(f"criterion {n}: {status}")
    assert not failed, failed


def instance(name):
    return load_instance(DATA / "instances" / f"{name}.json")


def test_criterion_1_twisted_example():
    t0 = time.perf_counter()
    rep = assemble_nu_bar(instance("twisted_k3_1"))
    elapsed = time.perf_counter() - t0
    verdict(1, {
        "nu_bar=-19": rep.nu_bar == -19 and abs(rep.nu_bar_real + 19) <= NU_BAR_TOL,
        "nu=5 mod 48": rep.nu_mod48 == 5,
        "not nullbordant": not g2_bordism_check(rep.nu_mod48) and not rep.g2_nullbordant,
        "runtime<1s": elapsed < RUNTIME_LIMIT,
    })


def test_criterion_2_polygon_cross_check():
    poly = HyperPolygon.load(DATA / "polygons" / "twisted_k3_1.json")
    res = nu_bar_via_polygon(poly, rho_from_theta(), m_rho=-1)
    verdict(2, {
        "cusp angles": [c.angle for c in poly.cusps] == [1, 2, Fraction(2, 3)],
        "ell=11/3": cusp_sum(poly) == Fraction(11, 3),
        "area=2pi-2theta": polygon_area(poly) == AngleExpr(Fraction(2), Fraction(-2)),
        "theta cancels": res.theta_coefficient == 0 and res.exact is not None,
        "nu_bar=-19": res.exact == 144 - 88 - 72 - 3 == -19,
    })


def test_criterion_3_rectangular_baseline():
    inst = instance("tcs_rectangular")
    rep, g = assemble_nu_bar(inst), inst.gluing
    verdict(3, {
        "gluing (0 1; 1 0)": g.G == ((0, 1), (1, 0)) and g.k_plus == g.k_minus == 1,
        "nu_bar=0": rep.nu_bar == 0 and abs(rep.nu_bar_real) <= NU_BAR_TOL,
        "nu=24": rep.nu_mod48 == 24,
    })


def test_criterion_4_angle_examples():
    r7 = assemble_nu_bar(instance("quarter_angle"))
    r8 = assemble_nu_bar(instance("sixth_angle"))
    verdict(4, {
        "theta=pi/4": math.isclose(r7.theta, math.pi / 4),
        "D=F=0": r7.D_plus == r7.D_minus == r7.F_plus == r7.F_minus == 0,
        "nu_bar=-36": r7.nu_bar == -36 and abs(r7.nu_bar_real + 36) <= NU_BAR_TOL,
        "theta=pi/6": math.isclose(r8.theta, math.pi / 6),
        "m_rho=0": r8.m_rho == 0,
        "nu_bar=-48": r8.nu_bar == -48 and abs(r8.nu_bar_real + 48) <= NU_BAR_TOL,
        "nu=24": r8.nu_mod48 == 24,
    })


def _cfg(rows, r):
    return Configuration(GramMatrix.from_rows(rows), r, r)


def test_criterion_5_configurations():
    ex36 = _cfg([[6, 2], [2, 2]], 1)
    ex37 = _cfg([[2, 4, 3, 4], [4, 2, 3, 2], [3, 3, 6, 6], [4, 2, 6, 4]], 2)
    ex38 = _cfg([[4, 5, 1, -1], [5, 2, -1, 1], [1, -1, 4, 5], [-1, 1, 5, 2]], 2)
    half = Fraction(1, 2)
    verdict(5, {
        "cos2=1/3": gluing_angle_cos2(ex36).rational == (Fraction(1, 3),),
        "proj=I/2": proj_composition(ex37, PLUS) == [[half, 0], [0, half]],
        "lambda gram": lambda_sum_gram(ex38, 0, PLUS).tolist() == [[4, 5, 16], [5, 2, -16], [16, -16, -272]],
    })


def _gluing(name) -> GluingData:
    return load_gluing(DATA / "gluings" / f"{name}.json")


def _class_of(classes, g):
    return next((c for c in classes if g in c), None)


def test_criterion_6_enumeration():
    c11 = enumerate_gluings(1, 1, 3)
    c21 = enumerate_gluings(2, 1, 3)
    c22 = enumerate_gluings(2, 2, 4)
    c31 = enumerate_gluings(3, 1, 3)
    f1 = _class_of(c21, _gluing("k2_1_square"))
    f4 = _class_of(c31, _gluing("k3_1_twisted"))
    verdict(6, {
        "(1,1) single class": len(c11) == 1 and c11[0].representative.G == ((0, 1), (1, 0)),
        "(2,1) square class": f1 is not None
        and (f1.geometry.s_plus_sq, f1.geometry.s_minus_sq, f1.geometry.cos2_theta) == (1, 1, Fraction(1, 2)),
        "(2,2) both ratio-3 classes": all(_class_of(c22, _gluing(f)) is not None for f in ("k2_2_ratio_3_third", "k2_2_ratio_3_3")),
        "(3,1) twisted class": f4 is not None
        and (f4.geometry.s_plus_sq, f4.geometry.s_minus_sq, f4.geometry.cos2_theta) == (2, 2, Fraction(1, 3)),
    })


def test_criterion_7_eta_series():
    rng = np.random.default_rng(20260101)
    worst = 0.0
    for _ in range(100):
        tau = complex(rng.uniform(-5, 5), rng.uniform(0.02, 4))
        l0 = dedekind_log(tau).value
        worst = max(
            worst,
            abs(dedekind_log(tau + 1).value - l0 - math.pi * 1j / 12),
            abs(dedekind_log(-1 / tau).value - l0 - 0.5 * cmath.log(tau / 1j)),
        )
    rhombic = max(abs(F_small(EtaParams(2, 1, Fraction(s))).value) for s in rng.uniform(0.05, 20, 20))
    twisted = F_small(EtaParams(3, -1, 2)).value
    verdict(7, {
        "functional equations": worst <= ETA_TOL,
        "F_small(2,1,s)=0": rhombic <= ETA_TOL,
        "c(3,-1)=pi/18": math.isclose(c_constant(3, -1), math.pi / 18, rel_tol=4 * np.finfo(float).eps),
        "F_small(3,-1,sqrt2)": abs(twisted - (0.5 * math.acos(1 / 3) - math.pi / 9)) <= ETA_TOL,
    })


def _random_closed_tuple(rng):
    ind_d, sigma, n_plus = rng.randint(-30, 30), rng.randint(-300, 300), rng.randint(-40, 40)
    p_sq = sigma + 224 * ind_d
    p2 = 7 * p_sq - 1440 * ind_d
    chi = (p2 - p_sq + 4 * n_plus) // 2
    return sigma, p_sq, p2, ind_d, chi, n_plus


def test_criterion_8_defect_suite():
    rng = random.Random(8)
    relation_ok = True
    for _ in range(1000):
        sigma, p_sq, p2, ind_d, chi, n_plus = _random_closed_tuple(rng)
        relation_ok &= all(closed_relations_check(sigma, p_sq, p2, ind_d, chi, n_plus).values())
        d = rng.choice([0, 2, 4, 6, 8, 12, 24])
        s1 = rng.randint(-200, 200)
        w1 = CoboundaryData(rng.randint(-100, 100), s1, rng.randint(-20, 20), s1 + 8 * rng.randint(-40, 40), d=d)
        w2 = CoboundaryData(chi - w1.chi, sigma - w1.sigma, n_plus - w1.n_plus, p_sq - w1.p_sq, d=d)
        relation_ok &= defect_report(w1).ok and defect_report(w2).ok
    pairs = np.array([(p, s) for p in range(-200, 201) for s in range(-200, 201) if (p - s) % 8 == 0])
    scan = ek_solvability_scan(pairs[:, 0], pairs[:, 1])
    direct = np.array([ek_solvability(int(p), int(s)) for p, s in pairs])
    verdict(8, {
        "relation 13": relation_ok,
        "solvability vs scan": bool((scan == direct).all()),
        "smooth structures": {d: smooth_structure_count(d) for d in (2, 4, 6, 8, 12, 24)}
        == {2: 1, 4: 1, 6: 1, 8: 2, 12: 1, 24: 2},
        "class counts": g2_class_count(2) == (1, 24) and g2_class_count(24) == (3, 72),
    })


def _random_fixed_points(rng):
    k = rng.randint(3, 12)
    entries = []
    for _ in range(rng.randint(1, 4)):
        while True:
            a1, a2 = (Fraction(rng.randint(1, 2 * k - 1), k) for _ in range(2))
            a3 = -(a1 + a2)
            if a3 % 2:
                break
        entries.append(FixedPoint(rng.randint(1, k - 1), (a1, a2, a3)))
    return FixedPointSet(k, tuple(entries))


def test_criterion_9_dedekind_sums():
    rng = random.Random(9)
    conj_ok = True
    for _ in range(100):
        fps = _random_fixed_points(rng)
        conj_ok &= abs(dedekind_sum(fps.conjugated()).value - dedekind_sum(fps).value) <= DEDEKIND_TOL
    fixtures = [FixedPointSet.from_json(p.read_text()) for p in sorted((DATA / "fixed_points").glob("*.json"))]
    fixtures += [load_block(p).fixed_points for p in sorted((DATA / "blocks").glob("*.json"))]
    verdict(9, {
        "empty=0": dedekind_sum(FixedPointSet(3)).rational == 0,
        "conjugation": conj_ok,
        "fixtures reconstruct": all(
            (v := dedekind_sum(f)).rational is not None and v.certified for f in fixtures
        ),
    })


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))

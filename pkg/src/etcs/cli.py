"""Command-line front end.  Exit codes: 0 ok, 1 validation error, 2 integrality or cross-check failure."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import assembly, defects
from . import configuration as cf
from .eta import EtaError, EtaParams, F_contribution, F_small
from .gluing import GluingError, derive, enumerate_gluings, torus_figure
from .hyperbolic import HyperPolygon, PolygonError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def cmd_nu_bar(args) -> int:
    inst = assembly.load_instance(args.instance)
    rep = assembly.assemble_nu_bar(inst, b1=args.b1, integrality_tol=args.tol)
    text = assembly.report_render(rep, "json" if args.json else "text")
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def cmd_cross_check(args) -> int:
    inst = assembly.load_instance(args.instance)
    res = assembly.cross_check(inst, HyperPolygon.load(args.polygon), tol=args.tol)
    print(f"nu_bar_assembled: {res.assembled:.12f}")
    exact = "" if res.polygon_exact is None else f" (exact {res.polygon_exact})"
    print(f"nu_bar_polygon: {res.polygon:.12f}{exact}")
    print(f"polygon_area: {res.area}")
    print(f"cusp_sum: {res.ell}")
    print(f"delta: {res.delta:.3e}")
    print(f"verdict: {'pass' if res.passed else 'fail'}")
    return EXIT_OK if res.passed else EXIT_NUMERIC


def cmd_enumerate(args) -> int:
    classes = enumerate_gluings(
        args.k_plus,
        args.k_minus,
        args.bound,
        eps_plus=None if args.eps_plus is None else [args.eps_plus],
        eps_minus=None if args.eps_minus is None else [args.eps_minus],
        dedupe=not args.no_dedupe,
    )
    if args.json:
        out = [
            {"representative": c.representative.to_obj(), "geometry": c.geometry.to_obj(), "members": len(c.members)}
            for c in classes
        ]
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"{len(classes)} class(es)")
    for c in classes:
        g, geo = c.representative, c.geometry
        (m, p), (n, q) = g.G
        ratios = "free" if geo.ratios_free else f"s+^2={geo.s_plus_sq} s-^2={geo.s_minus_sq}"
        print(
            f"eps=({g.eps_plus},{g.eps_minus}) G=[[{m},{p}],[{n},{q}]] {geo.case} "
            f"cos^2(theta)={geo.cos2_theta} {ratios} members={len(c.members)}"
        )
    return EXIT_OK


def cmd_config_check(args) -> int:
    cfg = assembly.load_configuration(args.configuration)
    ok = cf.condition_i(cfg)
    print(f"condition_i: {'pass' if ok else 'fail'}")
    spec = cf.gluing_angle_cos2(cfg)
    print("cos2_theta_eigenvalues: " + ", ".join(str(c) for c in spec.rational))
    if spec.irrational_factors:
        print(f"irrational_factors: {len(spec.irrational_factors)}")
    if args.cos2 is not None:
        c2 = cf.condition_ii(cfg, args.cos2)
        print(f"condition_ii({args.cos2}): {'pass' if c2 else 'fail'}")
        ok = ok and c2
        if c2:
            print(f"lambda_gram: {cf.lambda_sum_gram(cfg, args.cos2).tolist()}")
    if ok:
        angles = cf.configuration_angles(cfg, cos2_theta=args.cos2)
        print("configuration_angles: " + json.dumps(angles.to_obj()))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_classify(args) -> int:
    d = args.d
    per_nu, total = defects.g2_class_count(d)
    table = defects.modulus_table(d)
    print(f"b3: {args.b3}")
    print(f"d: {d}  d_tilde: {table['d_tilde']}")
    print(f"tcs_admissible_d: {'yes' if defects.tcs_d_validation(d) else 'no'}")
    print(f"smooth_structures: {defects.smooth_structure_count(d)}")
    print(f"g2_classes_per_nu: {per_nu}")
    print(f"g2_classes_total: {total}")
    print(f"moduli: mu Z/{table['mu']}, nu Z/48, xi Z/{table['xi']}")
    if args.mu is not None:
        print(f"mu: {args.mu % table['mu']} mod {table['mu']}")
    return EXIT_OK


def cmd_defect(args) -> int:
    data = defects.CoboundaryData(args.chi, args.sigma, args.n_plus, args.p_sq, d=args.d, p1_sq=args.p1_sq)
    rep = defects.defect_report(data)
    for name, val in (("mu", rep.mu), ("nu", rep.nu), ("xi", rep.xi), ("lambda", rep.lam)):
        if val is not None:
            print(f"{name}: {val}")
    for name, ok in rep.verdicts.items():
        print(f"{name}: {'pass' if ok else 'fail'}")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_eta(args) -> int:
    params = EtaParams(args.k, args.eps, args.s_sq)
    small = F_small(params, args.tol)
    big = F_contribution(params, args.tol)
    print(f"F_small: {small.value:.15f}")
    print(f"F_contribution: {big.value:.12f}")
    print(f"error_bound: {big.error:.3e}")
    return EXIT_OK


def cmd_render_torus(args) -> int:
    g = assembly.load_gluing(args.gluing)
    fig = torus_figure(g, derive(g), s_plus=None if args.s_plus_sq is None else float(args.s_plus_sq) ** 0.5)
    svg = fig.to_svg()
    if args.output == "-":
        sys.stdout.write(svg + "\n")
    else:
        with open(args.output, "w") as fh:
            fh.write(svg + "\n")
        print(f"wrote {args.output} (angle {fig.theta:.12f})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="etcs", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nu-bar", help="assemble nu-bar for an instance file")
    p.add_argument("instance")
    p.add_argument("--b1", type=int, default=None)
    p.add_argument("--tol", type=float, default=assembly.INTEGRALITY_TOL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_nu_bar)

    p = sub.add_parser("cross-check", help="compare assembled nu-bar with the polygon route")
    p.add_argument("instance")
    p.add_argument("polygon")
    p.add_argument("--tol", type=float, default=assembly.INTEGRALITY_TOL)
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("enumerate-gluings", help="list admissible gluing matrices")
    p.add_argument("--k-plus", type=int, required=True)
    p.add_argument("--eps-plus", type=int)
    p.add_argument("--k-minus", type=int, required=True)
    p.add_argument("--eps-minus", type=int)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--no-dedupe", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("config-check", help="angles and conditions of a configuration")
    p.add_argument("configuration")
    p.add_argument("--cos2", type=_frac)
    p.set_defaults(func=cmd_config_check)

    p = sub.add_parser("classify", help="smooth-structure and G2-class counts")
    p.add_argument("--b3", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mu", type=int)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("defect", help="mu, nu, xi from coboundary data")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--sigma", type=int, required=True)
    p.add_argument("--n-plus", type=int, required=True)
    p.add_argument("--p-sq", type=int, required=True)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--p1-sq", type=int)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("eta", help="torus contribution F_{k,eps}(s)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=int, required=True)
    p.add_argument("--s-sq", type=_frac, required=True)
    p.add_argument("--tol", type=float, default=assembly.SERIES_TOL)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("render-torus", help="SVG of the identified torus lattices")
    p.add_argument("gluing")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--s-plus-sq", type=_frac, help="ratio for right-angle gluings")
    p.set_defaults(func=cmd_render_torus)
    return ap


VALIDATION_ERRORS = (
    assembly.LoadError,
    cf.ConfigurationError,
    defects.DefectError,
    EtaError,
    GluingError,
    PolygonError,
    ValueError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except assembly.IntegralityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Building-block records, glued instances, and the assembled nu-bar invariant.

    nu_bar = D+ + D- + F+ + F- - 72 rho / pi + 3 m_rho,    rho = pi - 2 theta

D are fixed-point Dedekind sums, F are the torus eta contributions, m_rho is
read off the configuration angles (or given as an override).  The result
must be an integer; a non-integral sum means the input data are inconsistent.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import configuration as cf
from .dedekind import FixedPointError, FixedPointSet, dedekind_sum
from .defects import g2_bordism_check, nu_from_nu_bar
from .eta import EtaError, EtaParams, F_contribution
from .gluing import GluingData, GluingError, derive
from .hyperbolic import HyperPolygon, PolygonError, cusp_sum, nu_bar_via_polygon, polygon_area, rho_from_theta
from .lattice import GramMatrix, LatticeError

SCHEMA = "etcs/1"
SERIES_TOL = 1e-12
INTEGRALITY_TOL = 1e-6


class LoadError(ValueError):
    """Malformed or inconsistent input file; message carries the field path."""


class IntegralityError(ArithmeticError):
    pass


def _check_schema(obj, where: str) -> None:
    if not isinstance(obj, dict):
        raise LoadError(f"{where}: expected a JSON object")
    version = obj.get("schema", SCHEMA)
    if version != SCHEMA:
        raise LoadError(f"{where}.schema: unsupported version {version!r}, expected {SCHEMA!r}")


def _int_field(obj, key, where, default=None):
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise LoadError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


@dataclass(frozen=True)
class BlockRecord:
    name: str
    polarising_gram: GramMatrix | None
    k: int
    eps: int
    fixed_points: FixedPointSet
    notes: str = ""

    def __post_init__(self):
        if self.fixed_points.k != self.k:
            raise LoadError(f"block {self.name!r}: fixed_points.k = {self.fixed_points.k} differs from k = {self.k}")

    @classmethod
    def from_obj(cls, obj, where: str = "block") -> "BlockRecord":
        _check_schema(obj, where)
        k = _int_field(obj, "k", where)
        if k < 1:
            raise LoadError(f"{where}.k: must be positive")
        eps = _int_field(obj, "eps", where, 0)
        gram = obj.get("polarising_gram")
        if gram is not None:
            try:
                gram = GramMatrix.from_obj(gram)
            except LatticeError as exc:
                raise LoadError(f"{where}.polarising_gram: {exc}") from None
        fp = obj.get("fixed_points") or {"k": k, "entries": []}
        try:
            fps = FixedPointSet.from_obj(fp, where=f"{where}.fixed_points")
        except FixedPointError as exc:
            raise LoadError(str(exc)) from None
        return cls(str(obj.get("name", where)), gram, k, eps, fps, str(obj.get("notes", "")))

    def to_obj(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "polarising_gram": None if self.polarising_gram is None else self.polarising_gram.tolist(),
            "k": self.k,
            "eps": self.eps,
            "fixed_points": self.fixed_points.to_obj(),
            "notes": self.notes,
        }


@dataclass(frozen=True)
class EtcsInstance:
    name: str
    block_plus: BlockRecord
    block_minus: BlockRecord
    gluing: GluingData
    configuration: cf.Configuration | None
    m_rho_override: int | None = None
    b1: int = 0
    s_plus_sq: Fraction | None = None  # only needed for right-angle gluings with k > 2

    def __post_init__(self):
        where = f"instance {self.name!r}"
        if self.gluing.k_plus != self.block_plus.k or self.gluing.k_minus != self.block_minus.k:
            raise LoadError(f"{where}: gluing orders ({self.gluing.k_plus}, {self.gluing.k_minus}) differ from block orders")
        for side, block, eps in (("plus", self.block_plus, self.gluing.eps_plus), ("minus", self.block_minus, self.gluing.eps_minus)):
            if (block.eps - eps) % block.k:
                raise LoadError(f"{where}: block_{side}.eps = {block.eps} disagrees with gluing eps_{side} = {eps}")
        cfg = self.configuration
        if cfg is None:
            if self.m_rho_override is None:
                raise LoadError(f"{where}: a configuration or an m_rho override is required")
            return
        for side, block in ((cf.PLUS, self.block_plus), (cf.MINUS, self.block_minus)):
            if block.polarising_gram is not None and cfg.n_gram(side) != block.polarising_gram:
                raise LoadError(f"{where}: configuration N_{side} block differs from block {block.name!r} polarising lattice")


def _resolve(value, base: Path, where: str):
    """Inline object, or a path relative to the referring file."""
    if isinstance(value, str):
        path = (base / value).resolve()
        try:
            return json.loads(path.read_text()), str(path)
        except FileNotFoundError:
            raise LoadError(f"{where}: referenced file {value!r} not found") from None
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}: invalid JSON: {exc}") from None
    return value, where


def _read_json(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise LoadError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON: {exc}") from None


def load_block(path) -> BlockRecord:
    return BlockRecord.from_obj(_read_json(path), where=str(path))


def load_gluing(path) -> GluingData:
    obj = _read_json(path)
    _check_schema(obj, str(path))
    try:
        return GluingData.from_obj(obj, where=str(path))
    except GluingError as exc:
        raise LoadError(str(exc)) from None


def load_configuration(path) -> cf.Configuration:
    return _configuration_from_obj(_read_json(path), str(path))


def _configuration_from_obj(obj, where) -> cf.Configuration:
    _check_schema(obj, where)
    try:
        return cf.Configuration.from_obj(obj)
    except (cf.ConfigurationError, LatticeError) as exc:
        raise LoadError(f"{where}: {exc}") from None


def instance_from_obj(obj, base: Path = Path("."), where: str = "instance") -> EtcsInstance:
    _check_schema(obj, where)
    parts = {}
    for key in ("block_plus", "block_minus", "gluing"):
        if key not in obj:
            raise LoadError(f"{where}.{key}: missing")
        parts[key] = _resolve(obj[key], base, f"{where}.{key}")
    bp = BlockRecord.from_obj(*parts["block_plus"])
    bm = BlockRecord.from_obj(*parts["block_minus"])
    gobj, gwhere = parts["gluing"]
    _check_schema(gobj, gwhere)
    try:
        gluing = GluingData.from_obj(gobj, where=gwhere)
    except GluingError as exc:
        raise LoadError(str(exc)) from None
    cfg = None
    if obj.get("configuration") is not None:
        cfg = _configuration_from_obj(*_resolve(obj["configuration"], base, f"{where}.configuration"))
    overrides = obj.get("overrides") or {}
    m_override = overrides.get("m_rho")
    if m_override is not None and (isinstance(m_override, bool) or not isinstance(m_override, int)):
        raise LoadError(f"{where}.overrides.m_rho: expected an integer")
    s_sq = obj.get("s_plus_sq")
    return EtcsInstance(
        str(obj.get("name", where)),
        bp,
        bm,
        gluing,
        cfg,
        m_override,
        _int_field(obj, "b1", where, 0),
        None if s_sq is None else Fraction(str(s_sq)),
    )


def load_instance(path) -> EtcsInstance:
    path = Path(path)
    return instance_from_obj(_read_json(path), path.parent, str(path))


# ------------------------------------------------------------------ assembly


@dataclass(frozen=True)
class NuBarReport:
    name: str
    D_plus: Fraction
    D_minus: Fraction
    F_plus: float
    F_plus_error: float
    F_minus: float
    F_minus_error: float
    theta: float
    cos2_theta: Fraction
    rho: float
    m_rho: int
    nu_bar_real: float
    nu_bar: int
    nu_mod48: int
    b1: int
    g2_nullbordant: bool
    provenance: dict = field(default_factory=dict, compare=False)

    def to_obj(self) -> dict:
        out = asdict(self)
        for key in ("D_plus", "D_minus", "cos2_theta"):
            out[key] = str(out[key])
        out["schema"] = SCHEMA
        return out

    @classmethod
    def from_obj(cls, obj: dict) -> "NuBarReport":
        data = {k: v for k, v in obj.items() if k != "schema"}
        for key in ("D_plus", "D_minus", "cos2_theta"):
            data[key] = Fraction(data[key])
        return cls(**data)


def _f_term(k: int, eps: int, s_sq, side: str) -> tuple[float, float, str]:
    if k <= 2:
        return 0.0, 0.0, f"k_{side} = {k}: rectangular/rhombic torus, contribution vanishes"
    if s_sq is None:
        raise LoadError(f"right-angle gluing with k_{side} = {k} > 2 needs an explicit s_plus_sq")
    try:
        f = F_contribution(EtaParams(k, eps, s_sq), SERIES_TOL)
    except EtaError as exc:
        raise LoadError(f"F_{side}: {exc}") from None
    return f.value, f.error, f"(144/pi) F_{{{k},{eps}}}(s) with s^2 = {s_sq}"


def _d_term(block: BlockRecord, side: str) -> tuple[Fraction, str]:
    if not block.fixed_points.entries:
        return Fraction(0), f"block {block.name!r}: no isolated fixed points"
    v = dedekind_sum(block.fixed_points)
    if v.rational is None:
        raise IntegralityError(f"D_{side}: Dedekind sum {v.value!r} did not reconstruct to a rational")
    return v.rational, f"Dedekind sum over {len(block.fixed_points.entries)} fixed-point records of {block.name!r}"


def assemble_nu_bar(inst: EtcsInstance, b1: int | None = None, integrality_tol: float = INTEGRALITY_TOL) -> NuBarReport:
    b1 = inst.b1 if b1 is None else b1
    g = inst.gluing
    geo = derive(g)
    if geo.excluded:
        raise LoadError(f"gluing excluded: {geo.reason}")
    cos2 = geo.cos2_theta
    prov = {}
    if geo.ratios_free:
        rho = 0.0
        s_plus_sq = inst.s_plus_sq
        s_minus_sq = None if s_plus_sq is None else 1 / s_plus_sq
    else:
        rho = math.pi - 2 * geo.theta
        s_plus_sq, s_minus_sq = geo.s_plus_sq, geo.s_minus_sq
    prov["rho"] = f"pi - 2 theta, cos^2 theta = {cos2} from the gluing matrix"

    if inst.m_rho_override is not None:
        m = inst.m_rho_override
        prov["m_rho"] = "override supplied by the instance"
    else:
        cfg = inst.configuration
        spectrum = cf.gluing_angle_cos2(cfg)
        if cos2 not in spectrum:
            raise LoadError(f"cos^2 theta = {cos2} of the gluing is not an eigenvalue of the configuration")
        angles = cf.configuration_angles(cfg, cos2_theta=cos2)
        m = cf.m_rho(angles, rho, rho_cos_exact=2 * cos2 - 1)
        prov["m_rho"] = "signed count of negative configuration angles in [pi - |rho|, pi]"

    d_plus, prov["D_plus"] = _d_term(inst.block_plus, "plus")
    d_minus, prov["D_minus"] = _d_term(inst.block_minus, "minus")
    f_plus, e_plus, prov["F_plus"] = _f_term(g.k_plus, g.eps_plus, s_plus_sq, "plus")
    f_minus, e_minus, prov["F_minus"] = _f_term(g.k_minus, g.eps_minus, s_minus_sq, "minus")

    total = float(d_plus + d_minus) + f_plus + f_minus - 72 * rho / math.pi + 3 * m
    nearest = round(total)
    if abs(total - nearest) > integrality_tol:
        raise IntegralityError(f"nu_bar = {total!r} is not within {integrality_tol} of an integer")
    nu = nu_from_nu_bar(nearest, b1).value
    return NuBarReport(
        inst.name, d_plus, d_minus, f_plus, e_plus, f_minus, e_minus, geo.theta, cos2, rho, m,
        total, nearest, nu, b1, g2_bordism_check(nu), prov,
    )


def report_render(report: NuBarReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.to_obj(), indent=2, sort_keys=True)
    p = report.provenance
    lines = [
        f"instance: {report.name}",
        f"D_plus: {report.D_plus}    # {p.get('D_plus', '')}",
        f"D_minus: {report.D_minus}    # {p.get('D_minus', '')}",
        f"F_plus: {report.F_plus:.12f} +- {report.F_plus_error:.1e}    # {p.get('F_plus', '')}",
        f"F_minus: {report.F_minus:.12f} +- {report.F_minus_error:.1e}    # {p.get('F_minus', '')}",
        f"theta: {report.theta:.12f}",
        f"rho: {report.rho:.12f}    # {p.get('rho', '')}",
        f"-72 rho/pi: {-72 * report.rho / math.pi:.12f}",
        f"m_rho: {report.m_rho}    # {p.get('m_rho', '')}",
        f"nu_bar_real: {report.nu_bar_real:.12f}",
        f"nu_bar: {report.nu_bar}",
        f"b1: {report.b1}",
        f"nu_mod48: {report.nu_mod48}",
        f"g2_nullbordant: {'true' if report.g2_nullbordant else 'false'}",
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CrossCheckResult:
    assembled: float
    polygon: float
    polygon_exact: Fraction | None
    ell: Fraction
    area: str
    delta: float
    passed: bool


def cross_check(inst: EtcsInstance, polygon: HyperPolygon, tol: float = INTEGRALITY_TOL) -> CrossCheckResult:
    """Compare the assembled nu-bar with the polygon route (D and m_rho shared)."""
    rep = assemble_nu_bar(inst)
    try:
        area = polygon_area(polygon)
        rho = rho_from_theta() if area.needs_theta else rep.rho
        poly = nu_bar_via_polygon(polygon, rho, rep.m_rho, rep.D_plus, rep.D_minus, theta=rep.theta)
    except PolygonError as exc:
        raise LoadError(str(exc)) from None
    delta = poly.value - rep.nu_bar_real
    return CrossCheckResult(
        rep.nu_bar_real, poly.value, poly.exact, cusp_sum(polygon), str(area), delta, abs(delta) <= tol
    )

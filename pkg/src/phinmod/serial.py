"""JSON instance format: field towers, elements, modules, flags, and records.

Parsing threads a JSON-pointer path through every helper so a malformed file
reports exactly where it went wrong.  Emission is canonical: coefficients as
exact fraction strings on the pi/theta grid, precision as an integer, a
fraction string, or "inf".  One parse/emit cycle is idempotent.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .coeff import DualNumber, GaloisShape, ProductElement
from .cohomology import H1Tate, H1Trivial
from .colmez import FamilyGerm
from .errors import ParseError, ValidationError
from .filtration import Filtration
from .linalg import Matrix, Subspace, mat
from .modules import PhiNModule
from .monodromy import MonodromyData, check_constraints
from .padic import INF, FieldElement, LocalFieldDesc


def _fail(path: str, msg: str):
    raise ParseError(f"{path or '/'}: {msg}")


def _get(data: dict, key: str, path: str):
    if key not in data:
        _fail(path, f"missing key {key!r}")
    return data[key]


def _expect_dict(data, path: str) -> dict:
    if not isinstance(data, dict):
        _fail(path, "expected an object")
    return data


def _expect_list(data, path: str, length: int | None = None) -> list:
    if not isinstance(data, list):
        _fail(path, "expected an array")
    if length is not None and len(data) != length:
        _fail(path, f"expected {length} entries, got {len(data)}")
    return data


def parse_fraction(data, path: str) -> Fraction:
    if isinstance(data, bool) or not isinstance(data, (int, str)):
        _fail(path, "expected an integer or a fraction string")
    try:
        return Fraction(data)
    except (ValueError, ZeroDivisionError):
        _fail(path, f"not a rational number: {data!r}")


def fraction_out(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _prec_in(data, path: str):
    if data is None:
        return None
    if data == "inf":
        return INF
    return parse_fraction(data, path)


def _prec_out(prec):
    if prec is INF:
        return "inf"
    return fraction_out(prec)


# ---------------------------------------------------------------------------
# field and shape

_FIELD_CACHE: dict = {}


def parse_field(data, path: str = "/field", override_prec: int | None = None) -> LocalFieldDesc:
    data = _expect_dict(data, path)
    p = _get(data, "p", path)
    if not isinstance(p, int) or p < 2:
        _fail(path + "/p", "expected a prime integer")
    f_l = data.get("fL", 1)
    e_l = data.get("eL", 1)
    for name, val in (("fL", f_l), ("eL", e_l)):
        if not isinstance(val, int) or val < 1:
            _fail(f"{path}/{name}", "expected a positive integer")
    if "unram_poly" in data:
        raw = _expect_list(data["unram_poly"], path + "/unram_poly", f_l + 1)
        unram = tuple(int(parse_fraction(c, f"{path}/unram_poly/{i}")) for i, c in enumerate(raw))
    else:
        unram = (0, 1) if f_l == 1 else _fail(path, "unram_poly required when fL > 1")
    if "eis_poly" in data:
        raw = _expect_list(data["eis_poly"], path + "/eis_poly", e_l + 1)
        eis = []
        for i, coeff in enumerate(raw):
            row = _expect_list(coeff, f"{path}/eis_poly/{i}", f_l)
            eis.append(
                tuple(int(parse_fraction(c, f"{path}/eis_poly/{i}/{j}")) for j, c in enumerate(row))
            )
        eis = tuple(eis)
    else:
        base = [tuple([0] * f_l) for _ in range(e_l + 1)]
        base[0] = tuple([-p] + [0] * (f_l - 1))
        base[e_l] = tuple([1] + [0] * (f_l - 1))
        eis = tuple(base)
    prec = data.get("prec", 60)
    if override_prec is not None:
        prec = override_prec
    if not isinstance(prec, int) or prec < 1:
        _fail(path + "/prec", "expected a positive integer")
    key = (p, f_l, e_l, unram, eis, prec)
    cached = _FIELD_CACHE.get(key)
    if cached is not None:
        return cached
    try:
        desc = LocalFieldDesc(p, f_l, e_l, unram, eis, prec)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    # element descs compare by identity, so two parses of the same tower
    # must hand back the same object
    _FIELD_CACHE[key] = desc
    return desc


def dump_field(desc: LocalFieldDesc) -> dict:
    return {
        "p": desc.p,
        "fL": desc.f_l,
        "eL": desc.e_l,
        "unram_poly": [str(c) for c in desc.unram_poly],
        "eis_poly": [[str(c) for c in row] for row in desc.eis_poly],
        "prec": desc.default_prec,
    }


def parse_shape(data, path: str = "/shape") -> GaloisShape:
    data = _expect_dict(data, path)
    e = _get(data, "e", path)
    f = _get(data, "f", path)
    if not isinstance(e, int) or not isinstance(f, int) or e < 1 or f < 1:
        _fail(path, "e and f must be positive integers")
    return GaloisShape(e, f)


def dump_shape(shape: GaloisShape) -> dict:
    return {"e": shape.e, "f": shape.f}


# ---------------------------------------------------------------------------
# elements


def parse_element(desc: LocalFieldDesc, data, path: str) -> FieldElement:
    if isinstance(data, (int, str)) and not isinstance(data, bool):
        return desc.from_rational(parse_fraction(data, path))
    if isinstance(data, list):
        return _element_from_grid(desc, data, None, path)
    if isinstance(data, dict):
        grid = _get(data, "c", path)
        prec = _prec_in(data.get("prec"), path + "/prec")
        return _element_from_grid(desc, grid, prec, path + "/c")
    _fail(path, "expected a scalar, coefficient array, or element object")


def _element_from_grid(desc, grid, prec, path: str) -> FieldElement:
    grid = _expect_list(grid, path)
    if grid and not isinstance(grid[0], list):
        if len(grid) != desc.e_l * desc.f_l:
            _fail(path, f"flat coefficient list must have {desc.e_l * desc.f_l} entries")
        grid = [grid[a * desc.f_l : (a + 1) * desc.f_l] for a in range(desc.e_l)]
    rows = []
    for a, row in enumerate(grid):
        row = _expect_list(row, f"{path}/{a}", desc.f_l)
        rows.append([parse_fraction(c, f"{path}/{a}/{b}") for b, c in enumerate(row)])
    if len(rows) != desc.e_l:
        _fail(path, f"expected {desc.e_l} coefficient rows")
    try:
        return desc.element(rows, prec)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def dump_element(x: FieldElement) -> dict:
    return {
        "c": [[str(c) for c in row] for row in x.coefficients()],
        "prec": _prec_out(x.prec),
    }


def parse_product(
    desc: LocalFieldDesc, shape: GaloisShape, level: str, data, path: str
) -> ProductElement:
    data = _expect_list(data, path, shape.size(level))
    comps = [parse_element(desc, c, f"{path}/{i}") for i, c in enumerate(data)]
    return ProductElement.from_components(desc, shape, level, comps)


def dump_product(x: ProductElement) -> list:
    return [dump_element(c) for c in x.comps]


def _parse_dual(desc, shape, data, path: str, product: bool) -> DualNumber:
    data = _expect_list(data, path, 2)
    if product:
        parts = [parse_product(desc, shape, "K", c, f"{path}/{i}") for i, c in enumerate(data)]
    else:
        parts = [parse_element(desc, c, f"{path}/{i}") for i, c in enumerate(data)]
    return DualNumber(parts[0], parts[1])


# ---------------------------------------------------------------------------
# modules and filtrations


def parse_matrix(desc: LocalFieldDesc, data, path: str, d: int) -> Matrix:
    data = _expect_list(data, path, d)
    rows = []
    for i, row in enumerate(data):
        row = _expect_list(row, f"{path}/{i}", d)
        rows.append([parse_element(desc, x, f"{path}/{i}/{j}") for j, x in enumerate(row)])
    return mat(rows)


def dump_matrix(a: Matrix) -> list:
    return [[dump_element(x) for x in row] for row in a]


def parse_module(desc: LocalFieldDesc, shape: GaloisShape, data, path: str) -> PhiNModule:
    data = _expect_dict(data, path)
    rank = _get(data, "rank", path)
    if not isinstance(rank, int) or rank < 1:
        _fail(path + "/rank", "expected a positive integer")
    phi_raw = _expect_list(_get(data, "phi", path), path + "/phi", shape.f)
    n_raw = _expect_list(_get(data, "N", path), path + "/N", shape.f)
    phi = tuple(parse_matrix(desc, m, f"{path}/phi/{i}", rank) for i, m in enumerate(phi_raw))
    nmat = tuple(parse_matrix(desc, m, f"{path}/N/{i}", rank) for i, m in enumerate(n_raw))
    return PhiNModule(desc, shape, rank, phi, nmat)


def dump_module(m: PhiNModule) -> dict:
    return {
        "rank": m.rank,
        "phi": [dump_matrix(a) for a in m.phi],
        "N": [dump_matrix(a) for a in m.nmat],
    }


def parse_filtration(
    desc: LocalFieldDesc, shape: GaloisShape, rank: int, data, path: str
) -> Filtration:
    data = _expect_list(data, path, shape.n)
    steps = []
    for t, sig in enumerate(data):
        sig = _expect_list(sig, f"{path}/{t}")
        parsed = []
        for s, step in enumerate(sig):
            step = _expect_dict(step, f"{path}/{t}/{s}")
            jump = _get(step, "jump", f"{path}/{t}/{s}")
            if not isinstance(jump, int):
                _fail(f"{path}/{t}/{s}/jump", "expected an integer")
            basis_raw = _expect_list(_get(step, "basis", f"{path}/{t}/{s}"), f"{path}/{t}/{s}/basis")
            gens = []
            for g, vec in enumerate(basis_raw):
                vec = _expect_list(vec, f"{path}/{t}/{s}/basis/{g}", rank)
                gens.append(
                    tuple(
                        parse_element(desc, x, f"{path}/{t}/{s}/basis/{g}/{i}")
                        for i, x in enumerate(vec)
                    )
                )
            parsed.append((jump, Subspace.from_vectors(desc, rank, gens)))
        steps.append(tuple(parsed))
    return Filtration(desc, shape, rank, tuple(steps))


def dump_filtration(fil: Filtration) -> list:
    return [
        [
            {"jump": jump, "basis": [[dump_element(x) for x in g] for g in v.gens]}
            for jump, v in sig
        ]
        for sig in fil.steps
    ]


def dump_subspace(v: Subspace) -> list:
    return [[dump_element(x) for x in g] for g in v.gens]


# ---------------------------------------------------------------------------
# parameter records


def parse_monodromy(desc: LocalFieldDesc, shape: GaloisShape, data, path: str) -> MonodromyData:
    data = _expect_dict(data, path)
    alpha = parse_element(desc, _get(data, "alpha", path), path + "/alpha")
    m_raw = _expect_list(_get(data, "m", path), path + "/m", shape.n)
    k_raw = _expect_list(_get(data, "k", path), path + "/k", shape.n)
    for name, vec in (("m", m_raw), ("k", k_raw)):
        for i, x in enumerate(vec):
            if not isinstance(x, int):
                _fail(f"{path}/{name}/{i}", "expected an integer")
    ell = parse_product(desc, shape, "K", _get(data, "ell", path), path + "/ell")
    degenerate = data.get("degenerate", False)
    if not isinstance(degenerate, bool):
        _fail(path + "/degenerate", "expected a boolean")
    return MonodromyData(alpha, tuple(m_raw), tuple(k_raw), ell, degenerate)


def dump_monodromy(data: MonodromyData) -> dict:
    return {
        "alpha": dump_element(data.alpha),
        "m": list(data.m),
        "k": list(data.k),
        "ell": dump_product(data.ell),
        "degenerate": data.degenerate,
    }


def parse_germ(desc: LocalFieldDesc, shape: GaloisShape, data, path: str) -> FamilyGerm:
    data = _expect_dict(data, path)
    alpha = _parse_dual(desc, shape, _get(data, "alpha", path), path + "/alpha", False)
    delta = _parse_dual(desc, shape, _get(data, "delta", path), path + "/delta", False)
    kappa = _parse_dual(desc, shape, _get(data, "kappa", path), path + "/kappa", True)
    ell = parse_product(desc, shape, "K", _get(data, "ell", path), path + "/ell")
    return FamilyGerm(alpha, delta, kappa, ell)


def dump_germ(g: FamilyGerm) -> dict:
    return {
        "alpha": [dump_element(g.alpha.a0), dump_element(g.alpha.a1)],
        "delta": [dump_element(g.delta.a0), dump_element(g.delta.a1)],
        "kappa": [dump_product(g.kappa.a0), dump_product(g.kappa.a1)],
        "ell": dump_product(g.ell),
    }


def parse_classes(desc, shape, data, path: str) -> tuple[H1Trivial, H1Tate]:
    data = _expect_dict(data, path)
    x = _expect_dict(_get(data, "x", path), path + "/x")
    y = _expect_dict(_get(data, "y", path), path + "/y")
    a1 = parse_element(desc, _get(x, "a1", path + "/x"), path + "/x/a1")
    a2 = parse_product(desc, shape, "K", _get(x, "a2", path + "/x"), path + "/x/a2")
    b1 = parse_element(desc, _get(y, "b1", path + "/y"), path + "/y/b1")
    b2 = parse_product(desc, shape, "K", _get(y, "b2", path + "/y"), path + "/y/b2")
    return H1Trivial(a1, a2), H1Tate(b1, b2)


def dump_classes(x: H1Trivial, y: H1Tate) -> dict:
    return {
        "x": {"a1": dump_element(x.a1), "a2": dump_product(x.a2)},
        "y": {"b1": dump_element(y.b1), "b2": dump_product(y.b2)},
    }


# ---------------------------------------------------------------------------
# instances


PAYLOAD_KINDS = ("module", "monodromy", "germ", "classes", "bracket", "pair")


@dataclass(frozen=True)
class Instance:
    desc: LocalFieldDesc
    shape: GaloisShape
    kind: str
    objects: dict


def parse_instance(source, override_prec: int | None = None) -> Instance:
    """Parse bytes, text, or an already-decoded object into a validated
    Instance; the payload kind is inferred from the keys present."""
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"/: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    else:
        data = source
    data = _expect_dict(data, "")
    desc = parse_field(_get(data, "field", ""), "/field", override_prec)
    shape = parse_shape(_get(data, "shape", ""), "/shape")
    payload = _expect_dict(_get(data, "payload", ""), "/payload")
    objects: dict = {}
    if "module" in payload:
        kind = "module"
        module = parse_module(desc, shape, payload["module"], "/payload/module")
        objects["module"] = module
        if "filtration" in payload:
            objects["filtration"] = parse_filtration(
                desc, shape, module.rank, payload["filtration"], "/payload/filtration"
            )
    elif "first" in payload or "second" in payload:
        kind = "pair"
        for key in ("first", "second"):
            half = _expect_dict(_get(payload, key, "/payload"), f"/payload/{key}")
            module = parse_module(desc, shape, _get(half, "module", f"/payload/{key}"), f"/payload/{key}/module")
            fil = parse_filtration(
                desc,
                shape,
                module.rank,
                _get(half, "filtration", f"/payload/{key}"),
                f"/payload/{key}/filtration",
            )
            objects[key] = (module, fil)
    elif "monodromy" in payload:
        kind = "monodromy"
        record = parse_monodromy(desc, shape, payload["monodromy"], "/payload/monodromy")
        check_constraints(record)
        objects["monodromy"] = record
    elif "germ" in payload:
        kind = "germ"
        objects["germ"] = parse_germ(desc, shape, payload["germ"], "/payload/germ")
        if "direction" in payload:
            objects["direction"] = parse_product(
                desc, shape, "K", payload["direction"], "/payload/direction"
            )
    elif "classes" in payload:
        kind = "classes"
        objects["x"], objects["y"] = parse_classes(desc, shape, payload["classes"], "/payload/classes")
    elif "ell" in payload:
        kind = "bracket"
        objects["ell"] = parse_product(desc, shape, "K", payload["ell"], "/payload/ell")
        k_raw = _expect_list(_get(payload, "k", "/payload"), "/payload/k", shape.n)
        for i, x in enumerate(k_raw):
            if not isinstance(x, int):
                _fail(f"/payload/k/{i}", "expected an integer")
        objects["k"] = tuple(k_raw)
    else:
        _fail("/payload", "no recognized payload keys")
    return Instance(desc, shape, kind, objects)


def dump_instance(instance: Instance) -> dict:
    """Inverse of parse_instance up to normalization; dumping a freshly
    parsed instance and parsing the dump is the identity."""
    payload: dict = {}
    objs = instance.objects
    if instance.kind == "module":
        payload["module"] = dump_module(objs["module"])
        if "filtration" in objs:
            payload["filtration"] = dump_filtration(objs["filtration"])
    elif instance.kind == "pair":
        for key in ("first", "second"):
            module, fil = objs[key]
            payload[key] = {
                "module": dump_module(module),
                "filtration": dump_filtration(fil),
            }
    elif instance.kind == "monodromy":
        payload["monodromy"] = dump_monodromy(objs["monodromy"])
    elif instance.kind == "germ":
        payload["germ"] = dump_germ(objs["germ"])
        if "direction" in objs:
            payload["direction"] = dump_product(objs["direction"])
    elif instance.kind == "classes":
        payload["classes"] = dump_classes(objs["x"], objs["y"])
    else:
        payload["ell"] = dump_product(objs["ell"])
        payload["k"] = list(objs["k"])
    return {
        "field": dump_field(instance.desc),
        "shape": dump_shape(instance.shape),
        "payload": payload,
    }

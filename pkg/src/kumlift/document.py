"""Problem documents: parsing, validation, task execution and witness re-checks.

A document is JSON with rationals written as strings (``"3"``, ``"-1/4"``)::

    {"tori":       {"E": {"g": 1, "J": [["0","-1"],["1","0"]]},
                    "E^": {"dual_of": "E"}, "A": {"product": ["E","E"]}},
     "homs":       {"two": {"scalar": "2", "torus": "E"},
                    "q": {"source": "A", "target": "A", "matrix": [...]}},
     "block_maps": {"phi": {"kind": "mukai", "source": "E", "target": "E", "matrix": [...]}},
     "tasks":      [{"id": "t1", "op": "check-lift", "map": "phi", "isogeny": "two"}]}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from kumlift.cohomology import check_pd_square, pd_square_sides
from kumlift.kummer import diag_embed, kummer_criterion, kummer_split, make_kummer_context
from kumlift.lift import IsogenyContext, in_G_SO, lift_criterion, make_context, n_context, restrict_res, transport
from kumlift.linalg import Check, RatMatrix, fmt, lattice_solve
from kumlift.mukai import (
    BlockHom,
    BlockIso,
    MukaiError,
    hat_matrix,
    is_hodge,
    is_isometry,
    is_special,
    is_symplectic_hat,
    mukai_action,
    mukai_space,
)
from kumlift.torus import ComplexTorus, TorusError, TorusHom, dual_torus, is_isogeny, make_hom, make_torus, product_torus

OPS = ("check-sp", "check-hodge", "check-lift", "kummer-split", "pd-square", "restrict")


class ValidationError(ValueError):
    pass


# JSON <-> exact values

def parse_rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ValidationError(f"{where}: rationals must be strings like \"p/q\" or integers, got {x!r}")
    try:
        return Fraction(x) if isinstance(x, int) else Fraction(x.strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: cannot parse rational {x!r}") from None


def parse_matrix(rows, where: str) -> RatMatrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{where}: matrix must be a non-empty list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ValidationError(f"{where}: rows must be non-empty and of equal length")
    return RatMatrix.from_rows([[parse_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)]
                                for i, r in enumerate(rows)])


def to_json(x) -> Any:
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, RatMatrix):
        return [[fmt(e) for e in x.row(i)] for i in range(x.rows)]
    if isinstance(x, (BlockIso, BlockHom)):
        return to_json(x.F if isinstance(x, BlockIso) else x.g)
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    raise TypeError(f"cannot serialize {type(x).__name__}")


# environment

@dataclass
class Environment:
    tori: dict[str, ComplexTorus] = field(default_factory=dict)
    homs: dict[str, TorusHom] = field(default_factory=dict)
    maps: dict[str, BlockHom | BlockIso] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)


def _section(doc: dict, key: str, kind: type) -> Any:
    val = doc.get(key, kind())
    if not isinstance(val, kind):
        raise ValidationError(f"'{key}' must be a JSON {'object' if kind is dict else 'array'}")
    return val


def _lookup(table: dict, label, what: str, where: str):
    if not isinstance(label, str) or label not in table:
        raise ValidationError(f"{where}: unknown {what} {label!r}")
    return table[label]


def build_environment(doc) -> Environment:
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    unknown = set(doc) - {"tori", "homs", "block_maps", "tasks", "comment"}
    if unknown:
        raise ValidationError(f"unknown top-level keys: {sorted(unknown)}")
    env = Environment()
    tori = _section(doc, "tori", dict)
    pending = dict(tori)
    # resolve in passes so that dual_of/product may refer forward
    while pending:
        progressed = False
        for label, entry in list(pending.items()):
            where = f"tori.{label}"
            if not isinstance(entry, dict):
                raise ValidationError(f"{where}: must be an object")
            deps = [entry["dual_of"]] if "dual_of" in entry else list(entry.get("product", []))
            if any(isinstance(d, str) and d in pending for d in deps):
                continue
            env.tori[label] = _build_torus(env, label, entry, where)
            del pending[label]
            progressed = True
        if not progressed:
            raise ValidationError(f"tori: unresolved or cyclic references among {sorted(pending)}")
    for label, entry in _section(doc, "homs", dict).items():
        env.homs[label] = _build_hom(env, entry, f"homs.{label}")
    for label, entry in _section(doc, "block_maps", dict).items():
        env.maps[label] = _build_map(env, entry, f"block_maps.{label}")
    for k, task in enumerate(_section(doc, "tasks", list)):
        env.tasks.append(_validate_task(env, task, k))
    return env


def _build_torus(env: Environment, label: str, entry: dict, where: str) -> ComplexTorus:
    try:
        if "dual_of" in entry:
            base = _lookup(env.tori, entry["dual_of"], "torus", where)
            return ComplexTorus(base.g, dual_torus(base).J, label)
        if "product" in entry:
            parts = entry["product"]
            if not isinstance(parts, list) or not parts:
                raise ValidationError(f"{where}: product needs a non-empty list")
            factors = [_lookup(env.tori, p, "torus", where) for p in parts]
            return product_torus(factors, label)
        if "g" in entry and "J" in entry:
            g = entry["g"]
            if isinstance(g, bool) or not isinstance(g, int):
                raise ValidationError(f"{where}: g must be an integer")
            return make_torus(g, parse_matrix(entry["J"], f"{where}.J"), label)
    except TorusError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}: needs g+J, dual_of or product")


def _build_hom(env: Environment, entry, where: str) -> TorusHom:
    if not isinstance(entry, dict):
        raise ValidationError(f"{where}: must be an object")
    try:
        if "scalar" in entry:
            T = _lookup(env.tori, entry.get("torus"), "torus", where)
            c = parse_rational(entry["scalar"], f"{where}.scalar")
            return make_hom(T, T, RatMatrix.scalar(T.rank, c))
        S = _lookup(env.tori, entry.get("source"), "torus", where)
        T = _lookup(env.tori, entry.get("target"), "torus", where)
        return make_hom(S, T, parse_matrix(entry.get("matrix"), f"{where}.matrix"))
    except TorusError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _build_map(env: Environment, entry, where: str) -> BlockHom | BlockIso:
    if not isinstance(entry, dict):
        raise ValidationError(f"{where}: must be an object")
    kind = entry.get("kind")
    S = _lookup(env.tori, entry.get("source"), "torus", where)
    T = _lookup(env.tori, entry.get("target"), "torus", where)
    M = parse_matrix(entry.get("matrix"), f"{where}.matrix")
    try:
        if kind == "sp":
            return BlockHom(S, T, M)
        if kind == "mukai":
            return BlockIso(mukai_space(S), mukai_space(T), M)
    except MukaiError as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}: kind must be 'sp' or 'mukai', got {kind!r}")


def _positive_n(task: dict, where: str) -> int:
    n = task.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValidationError(f"{where}: n must be an integer >= 2")
    return n


def _validate_task(env: Environment, task, k: int) -> dict:
    where = f"tasks[{k}]"
    if not isinstance(task, dict):
        raise ValidationError(f"{where}: must be an object")
    op = task.get("op")
    if op not in OPS:
        raise ValidationError(f"{where}: unknown op {op!r} (expected one of {', '.join(OPS)})")
    tid = task.get("id", f"task{k}")
    if not isinstance(tid, str):
        raise ValidationError(f"{where}: id must be a string")
    out = {"id": tid, "op": op}
    if op == "pd-square":
        q = _lookup(env.homs, task.get("isogeny"), "hom", where)
        if not is_isogeny(q):
            raise ValidationError(f"{where}: {task.get('isogeny')!r} is not an isogeny")
        out["isogeny"] = task["isogeny"]
        return out
    m = _lookup(env.maps, task.get("map"), "block map", where)
    out["map"] = task["map"]
    if op in ("check-sp", "kummer-split") and not isinstance(m, BlockHom):
        raise ValidationError(f"{where}: {op} needs a map of kind 'sp'")
    if op in ("check-sp",) and (not m.g.is_square() or m.g.det() == 0):
        raise ValidationError(f"{where}: assembly is not invertible")
    if op == "kummer-split":
        out["n"] = _positive_n(task, where)
        if m.source.g != 2 or m.target.g != 2:
            raise ValidationError(f"{where}: kummer-split needs abelian surfaces")
        if m.g.det() == 0:
            raise ValidationError(f"{where}: assembly is not invertible")
    if op in ("check-lift", "restrict"):
        if "n" in task and "isogeny" in task:
            raise ValidationError(f"{where}: give either n or isogeny, not both")
        if "n" in task:
            out["n"] = _positive_n(task, where)
        else:
            for key in ("isogeny", "isogeny_target"):
                if key in task:
                    q = _lookup(env.homs, task[key], "hom", where)
                    if not is_isogeny(q):
                        raise ValidationError(f"{where}: {task[key]!r} is not an isogeny")
                    out[key] = task[key]
            if "isogeny" not in out:
                raise ValidationError(f"{where}: {op} needs n or isogeny")
        if op == "check-lift" and isinstance(m, BlockHom) and m.g.det() == 0:
            raise ValidationError(f"{where}: assembly is not invertible")
        if op == "restrict" and not isinstance(m, BlockIso):
            raise ValidationError(f"{where}: restrict needs a map of kind 'mukai'")
        _contexts(env, out, m, where)
    return out


def _contexts(env: Environment, task: dict, m, where: str) -> tuple[IsogenyContext, IsogenyContext]:
    F = m if isinstance(m, BlockIso) else mukai_action(m)
    if "n" in task:
        return n_context(F.source.base, task["n"]), n_context(F.target.base, task["n"])
    ctx = make_context(env.homs[task["isogeny"]])
    ct = make_context(env.homs[task["isogeny_target"]]) if "isogeny_target" in task else ctx
    if task["op"] == "check-lift":
        ok = F.source == ctx.V_A and F.target == ct.V_A
    else:
        ok = F.source == ctx.V_B and F.target == ct.V_B
    if not ok:
        raise ValidationError(f"{where}: map does not act on the isogeny's lattices")
    return ctx, ct


# execution

def _as_iso(m) -> BlockIso:
    return m if isinstance(m, BlockIso) else mukai_action(m)


def run_task(env: Environment, task: dict) -> dict:
    """Verdict record (without timing) for one validated task."""
    op = task["op"]
    res: dict = {"id": task["id"], "op": op}
    if op == "pd-square":
        c = check_pd_square(env.homs[task["isogeny"]])
        return {**res, "verdict": _v(c), "witness": c.witness, "derived": {}}
    m = env.maps[task["map"]]
    if op == "check-sp":
        c = is_symplectic_hat(m)
        iso = is_isometry(mukai_action(m))
        derived = {"isometry": iso.ok}
        if c:
            derived["mukai"] = mukai_action(m).F
        return {**res, "verdict": _v(c), "witness": c.witness, "derived": derived}
    if op == "check-hodge":
        F = _as_iso(m)
        c = is_hodge(F)
        derived = {"isometry": is_isometry(F).ok, "det": F.F.det()}
        return {**res, "verdict": _v(c), "witness": c.witness, "derived": derived}
    if op == "check-lift":
        ctx, ct = _contexts(env, task, m, task["id"])
        c = lift_criterion(ctx, _as_iso(m), ct)
        derived = {"gamma": c.value.F} if c else {}
        return {**res, "verdict": _v(c), "witness": c.witness, "derived": derived}
    if op == "restrict":
        ctx, ct = _contexts(env, task, m, task["id"])
        c = in_G_SO(ctx, m, ct)
        derived = {"restriction": restrict_res(ctx, m, ct).F} if c else {}
        return {**res, "verdict": _v(c), "witness": c.witness, "derived": derived}
    if op == "kummer-split":
        n = task["n"]
        sp = is_symplectic_hat(m)
        if not sp:
            return {**res, "verdict": "fail", "witness": {"not_symplectic": sp.witness}, "derived": {}}
        kctx = make_kummer_context(m.source, m.target, n)
        crit = kummer_criterion(m, n)
        c = kummer_split(kctx, m)
        derived = {"criterion": crit.ok}
        if c:
            derived["eta1"], derived["eta2"] = c.value[0].F, c.value[1].F
            return {**res, "verdict": "pass", "witness": None, "derived": derived}
        return {**res, "verdict": "none", "witness": c.witness, "derived": derived}
    raise AssertionError(op)


def _v(c: Check) -> str:
    return "pass" if c else "fail"


# witness re-verification

def verify_witness(env: Environment, task: dict, record: dict) -> bool:
    """Recompute the failing quantity named by a witness from scratch."""
    w = record.get("witness")
    if record["verdict"] == "pass":
        return w is None
    op = task["op"]
    m = env.maps.get(task.get("map"))
    if op == "pd-square":
        lhs, rhs = pd_square_sides(env.homs[task["isogeny"]])
        d, (i, j) = w["degree"], w["index"]
        return lhs[d][i, j] == w["lhs"] and rhs[d][i, j] == w["rhs"] and w["lhs"] != w["rhs"]
    if op == "check-sp":
        i, j = w["entry"]
        return m.g.inverse()[i, j] == w["inverse"] and hat_matrix(m)[i, j] == w["hat"] and w["inverse"] != w["hat"]
    if op == "check-hodge":
        F = _as_iso(m)
        j = w["column"]
        return (F.F @ F.source.J).col(j) == tuple(w["FJ"]) and (F.target.J @ F.F).col(j) == tuple(w["JF"]) \
            and w["FJ"] != w["JF"]
    if op == "check-lift":
        ctx, ct = _contexts(env, task, m, task["id"])
        col = transport(ctx, _as_iso(m), ct).col(w["column"])
        return col == tuple(w["vector"]) and RatMatrix.column(col).denominator() == w["denominator"] > 1
    if op == "restrict":
        ctx, ct = _contexts(env, task, m, task["id"])
        if "failed" in w:
            test = {"isometry": is_isometry, "hodge": is_hodge, "special": is_special}[w["failed"]]
            return not test(m)
        v = RatMatrix.column(w["vector"])
        outer = ct.lift_lattice if w["containment"] == "gamma L in L'" else m.F @ ctx.lift_lattice
        return lattice_solve(outer, v) is None
    if op == "kummer-split":
        if "not_symplectic" in w:
            return not is_symplectic_hat(m)
        kctx = make_kummer_context(m.source, m.target, task["n"])
        if w.get("stage") == "n-lift":
            side, dst = kctx.src.n_ctx, kctx.dst.n_ctx
            col = transport(side, mukai_action(m), dst).col(w["column"])
        elif w.get("stage") == "q-transport":
            col = transport(kctx.src.ctx, mukai_action(diag_embed(m, task["n"])), kctx.dst.ctx).col(w["column"])
        else:
            return not kummer_split(kctx, m)
        return col == tuple(w["vector"]) and w["denominator"] > 1
    return False


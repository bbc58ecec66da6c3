"""``sepcone`` command line.

Matrices are read from JSON ``{"rows": n, "cols": m, "data": [...]}`` (row
major), ellipsoidal cones from ``{"d": d, "P": [...]}`` with ``P`` the
row-major ``(d-1) x (d-1)`` shape matrix.  Tables go out as CSV with 15
significant digits, structured results as JSON with 17.

Exit status: 0 success, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import faces, maps, oracle, qubit, radii
from .lorentz import EllipsoidSpec, InvalidDimension

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Malformed or inconsistent input; reported with exit status 2."""


# -- formats -------------------------------------------------------------------


def _fmt_csv(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".15g")
    return str(x)


def _jsonable(obj):
    if isinstance(obj, enum.Enum):
        return str(obj)
    if isinstance(obj, maps.PartitionedMap):
        return _jsonable(obj.matrix)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj) -> str:
    """JSON with floats written to 17 significant digits."""

    def enc(o):
        if isinstance(o, float):
            if not math.isfinite(o):
                return json.dumps(str(o))
            return format(o, ".17g")
        if isinstance(o, dict):
            return "{" + ", ".join(f"{json.dumps(k)}: {enc(v)}" for k, v in o.items()) + "}"
        if isinstance(o, list):
            return "[" + ", ".join(enc(v) for v in o) + "]"
        return json.dumps(o)

    return enc(_jsonable(obj)) + "\n"


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_csv(x) for x in row])
    return buf.getvalue()


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from exc


def parse_matrix(obj, source: str = "<matrix>") -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise InputError(f"{source}: expected an object with keys rows, cols, data")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InputError(f"{source}: rows and cols must be positive integers")
    if not isinstance(data, list):
        raise InputError(f"{source}: data must be a flat array")
    if len(data) != rows * cols:
        raise InputError(f"{source}: data has {len(data)} entries, expected rows*cols = {rows * cols}")
    for i, x in enumerate(data):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"{source}: data[{i}] (row {i // cols}, col {i % cols}) is not a number")
    return np.array(data, dtype=float).reshape(rows, cols)


def load_matrix(path: str) -> np.ndarray:
    return parse_matrix(_load_json(path), path)


def parse_ellipsoid(obj, source: str = "<ellipsoid>") -> EllipsoidSpec:
    if not isinstance(obj, dict) or not {"d", "P"} <= obj.keys():
        raise InputError(f"{source}: expected an object with keys d, P")
    d, P = obj["d"], obj["P"]
    if not isinstance(d, int) or d < 2:
        raise InputError(f"{source}: d must be an integer >= 2")
    if not isinstance(P, list) or len(P) != (d - 1) ** 2:
        raise InputError(f"{source}: P must be a flat array of (d-1)^2 = {(d - 1) ** 2} entries")
    try:
        return EllipsoidSpec(np.array(P, dtype=float).reshape(d - 1, d - 1))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from exc


def load_ellipsoid(path: str) -> EllipsoidSpec:
    return parse_ellipsoid(_load_json(path), path)


def matrix_json(M) -> dict:
    M = np.asarray(getattr(M, "matrix", M), dtype=float)
    return {"rows": M.shape[0], "cols": M.shape[1], "data": M.ravel().tolist()}


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on."""

    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    fmt: str | None = None
    output: str | None = None

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        d = dict(vars(ns))
        command = d.pop("command")
        d.pop("func", None)
        seed = d.pop("seed", 0)
        fmt = d.pop("format", None)
        output = d.pop("output", None)
        inputs = {k: v for k, v in d.items() if k in _PATH_ARGS and v is not None}
        params = {k: v for k, v in d.items() if k not in _PATH_ARGS}
        return cls(command, inputs, params, seed, fmt, output)


_PATH_ARGS = {"matrix", "element", "map", "k1", "k2", "p1", "p2"}


@dataclass
class Outcome:
    text: str
    status: int = EXIT_OK


# -- subcommands -----------------------------------------------------------------


def _cone(cfg: RunConfig, key: str, d: int) -> EllipsoidSpec:
    if key not in cfg.inputs:
        return EllipsoidSpec.lorentz(d)
    K = load_ellipsoid(cfg.inputs[key])
    if K.d != d:
        raise InputError(f"{cfg.inputs[key]}: cone dimension {K.d} does not match matrix dimension {d}")
    return K


def cmd_check_map(cfg: RunConfig) -> Outcome:
    M = load_matrix(cfg.inputs["matrix"])
    cert = maps.certify_positivity(M, cfg.params["tol"])
    if cert:
        out = {"verdict": "Positive", "lambda": cert.lam, "min_eig": cert.min_eig}
        return Outcome(dumps(out))
    out = {"verdict": "NotPositive", "reason": cert.reason, "value": cert.value, "lambda": cert.lam}
    out["witness"] = maps.positivity_witness(M, seed=cfg.seed, tol=cfg.params["tol"])
    if out["witness"] is not None:
        out["image"] = M @ out["witness"]
    return Outcome(dumps(out), EXIT_NEGATIVE)


def cmd_classify(cfg: RunConfig) -> Outcome:
    M = load_matrix(cfg.inputs["matrix"])
    result = maps.classify_extreme(M, cfg.params["tol"])
    status = EXIT_NEGATIVE if result.tag is maps.ExtremeTag.NOT_POSITIVE else EXIT_OK
    return Outcome(dumps({"tag": result.tag, "evidence": result.evidence}), status)


def cmd_radius(cfg: RunConfig) -> Outcome:
    p = cfg.params
    if p["ellipsoids"]:
        K1, K2 = (load_ellipsoid(path) for path in p["ellipsoids"])
        rep = radii.separable_ball_radius(K1.P, K2.P)
        rows = [("rho", rep.rho), ("r", rep.r), ("f_max", rep.f_max), ("branch", str(rep.branch))]
    elif p["ball_ball"]:
        _need(p, "rho1", "rho2", "m", "n")
        rows = [("rho", radii.ball_ball_radius(p["rho1"], p["rho2"], p["m"], p["n"]))]
    else:
        _need(p, "m", "n", "r1", "r2")
        rows = [("rho", radii.matrix_ball_radius(p["m"], p["n"], p["r1"], p["r2"]))]
    if cfg.fmt == "json":
        return Outcome(dumps(dict(rows)))
    return Outcome(write_csv([k for k, _ in rows], [[v for _, v in rows]]))


def _need(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise InputError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def cmd_bound_table(cfg: RunConfig) -> Outcome:
    k_max = cfg.params["k_max"]
    if k_max < 1:
        raise InputError("--k-max must be >= 1")
    rows = radii.bound_table(k_max)
    header = ["k", "rho_k", "rho_k_squared", "gurvits_3q_ref"]
    if cfg.fmt == "json":
        return Outcome(dumps([dict(zip(header, r)) for r in rows]))
    return Outcome(write_csv(header, rows))


def cmd_faces(cfg: RunConfig) -> Outcome:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    mode = p["mode"]
    if mode == "type2" and "matrix" in cfg.inputs:
        B = load_matrix(cfg.inputs["matrix"])
        return Outcome(dumps({"type2_member": faces.type2_membership(B, p["tol"])}))
    _need(p, "m", "n")
    m, n = p["m"], p["n"]
    if min(m, n) < 2:
        raise InputError("--m and --n must be >= 2")
    if mode == "type1":
        items = []
        for _ in range(p["count"]):
            spec = faces.TypeIFaceSpec.random(rng, m, n)
            x, y = _boundary(rng, m), _boundary(rng, n)
            B = faces.type1_face_element(spec, x, y)
            M = spec.extreme_map()
            items.append({"h": spec.h, "v": spec.v, "element": matrix_json(B),
                          "extreme_map": matrix_json(M), "pairing": faces.pairing(B, M)})
        return Outcome(dumps(items))
    if mode == "type2":
        if n < m:
            raise InputError("type2 generators assume n >= m")
        items = []
        M = faces.type2_face_map(m, n)
        for _ in range(p["count"]):
            h = rng.standard_normal(m - 1)
            h /= np.linalg.norm(h)
            G = faces.type2_generator(h, n)
            items.append({"h": h, "generator": matrix_json(G), "type2_member": faces.type2_membership(G),
                          "pairing": faces.pairing(G, M)})
        return Outcome(dumps({"face_map": matrix_json(M), "generators": items}))
    a, b = faces.TypeIFaceSpec.random(rng, m, n), faces.TypeIFaceSpec.random(rng, m, n)
    W = faces.face_intersection_witness(a, b)
    out = {"face_a": {"h": a.h, "v": a.v}, "face_b": {"h": b.h, "v": b.v}, "witness": matrix_json(W),
           "pairing_a": faces.pairing(W, a.extreme_map()), "pairing_b": faces.pairing(W, b.extreme_map())}
    if n >= m:
        W2 = faces.type1_type2_witness(a)
        out["type1_type2_witness"] = matrix_json(W2)
        out["type1_type2_pairings"] = [faces.pairing(W2, a.extreme_map()),
                                       faces.pairing(W2, faces.type2_face_map(m, n))]
    return Outcome(dumps(out))


def _boundary(rng: np.random.Generator, d: int) -> np.ndarray:
    u = rng.standard_normal(d - 1)
    return np.r_[1.0, u / np.linalg.norm(u)]


def cmd_decompose(cfg: RunConfig) -> Outcome:
    B = load_matrix(cfg.inputs["matrix"])
    n, m = B.shape
    K1, K2 = _cone(cfg, "k1", m), _cone(cfg, "k2", n)
    dec = oracle.decompose_separable(B, K1, K2, budget=cfg.params["budget"], tol=cfg.params["tol"],
                                     seed=cfg.seed)
    out = {"success": dec.success, "residual": dec.residual, "target_norm": dec.target_norm,
           "iterations": dec.iterations, "weights": dec.weights, "xs": dec.xs, "ys": dec.ys}
    return Outcome(dumps(out), EXIT_OK if dec.success else EXIT_NEGATIVE)


def cmd_witness(cfg: RunConfig) -> Outcome:
    B = load_matrix(cfg.inputs["element"])
    M = load_matrix(cfg.inputs["map"])
    if B.shape != M.shape:
        raise InputError(f"element is {B.shape[0]}x{B.shape[1]} but map is {M.shape[0]}x{M.shape[1]}")
    n, m = B.shape
    K1, K2 = _cone(cfg, "k1", m), _cone(cfg, "k2", n)
    res = oracle.dual_witness(B, M, cfg.params["tol"], K1, K2)
    status = EXIT_NEGATIVE if res.verdict is oracle.Verdict.CERTIFIED_NON_SEPARABLE else EXIT_OK
    return Outcome(dumps(res), status)


def cmd_search_fmax(cfg: RunConfig) -> Outcome:
    K1, K2 = load_ellipsoid(cfg.inputs["p1"]), load_ellipsoid(cfg.inputs["p2"])
    trace: list = []
    best = oracle.random_search_fmax(K1.P, K2.P, budget=cfg.params["budget"], seed=cfg.seed, trace=trace)
    exact, branch = radii.f_max(K1.P, K2.P)
    if cfg.fmt == "json":
        return Outcome(dumps({"best": best, "f_max": exact, "branch": branch, "evaluations": len(trace)}))
    return Outcome(write_csv(["count", "source", "value", "best"], trace))


def cmd_qubit_ball(cfg: RunConfig) -> Outcome:
    p = cfg.params
    try:
        rep = qubit.verify_multiqubit_ball(p["k"], p["epsilon"], p["samples"], seed=cfg.seed, tol=p["tol"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = [(s.index, s.distance, s.residual, s.success) for s in rep.samples]
    status = EXIT_OK if rep.successes == len(rep.samples) else EXIT_NEGATIVE
    if cfg.fmt == "json":
        return Outcome(dumps({"k": rep.k, "epsilon": rep.epsilon, "rho": rep.rho, "successes": rep.successes,
                              "max_residual": rep.max_residual, "samples": rep.samples}), status)
    return Outcome(write_csv(["index", "distance", "residual", "success"], rows), status)


# -- parser ------------------------------------------------------------------------


def _add_common(sp, fmt_default="json"):
    sp.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sp.add_argument("--format", choices=("csv", "json"), default=fmt_default, help=f"output format (default {fmt_default})")
    sp.add_argument("--output", help="write the primary output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sepcone", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, description, fmt="json"):
        sp = sub.add_parser(name, help=description.split("\n")[0], description=description,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        _add_common(sp, fmt)
        return sp

    sp = add("check-map", cmd_check_map,
             "Certify that a map sends L_m into L_n.\n\n"
             "S-lemma test: with s = 1, positive iff |h| <= 1 and\n"
             "M^T J_n M - lambda J_m is PSD for some lambda >= 0, J = diag(1, -I).\n"
             "On failure a boundary point x with M x outside L_n is searched for.")
    sp.add_argument("--matrix", required=True, help="n x m map as matrix JSON")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("classify", cmd_classify,
             "Classify an extreme ray of the positive-map cone.\n\n"
             "Type I: rank one with |h| = |v| = s.\n"
             "Type II: M^T J_n M = c J_m with c > 0 and min(m, n) >= 3.\n"
             "Otherwise NotExtreme, with an explicit split where one is known.")
    sp.add_argument("--matrix", required=True, help="n x m map as matrix JSON")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("radius", cmd_radius,
             "Largest separable ball around the centre.\n\n"
             "--ellipsoids P1 P2: rho = max{(1+l1)(1+l1'), 1 + sum_k l_k l_k'}^(-1/2)\n"
             "  with l, l' the decreasing eigenvalues of P1, P2.\n"
             "--ball-ball: rho = max{a b, 1 + (min(m,n)-1)(a-1)(b-1)}^(-1/2), a = rho1^-2, b = rho2^-2.\n"
             "--matrix-ball: min{r1 r2, sqrt(mn) r1 r2 / sqrt((min(m,n)^2-1)(m-r1^2)(n-r2^2) + r1^2 r2^2)}.",
             fmt="csv")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--ellipsoids", nargs=2, metavar=("P1", "P2"), help="two ellipsoid spec JSON files")
    g.add_argument("--ball-ball", action="store_true")
    g.add_argument("--matrix-ball", action="store_true")
    for name, typ in (("m", int), ("n", int), ("rho1", float), ("rho2", float), ("r1", float), ("r2", float)):
        sp.add_argument("--" + name, type=typ)

    sp = add("bound-table", cmd_bound_table,
             "Multi-qubit separable-ball bound rho_k = 2^(k/2) / sqrt(3^(k-1) + 1), k = 1..K,\n"
             "with the earlier 3-qubit value sqrt(8/11) as a reference column.", fmt="csv")
    sp.add_argument("--k-max", type=int, required=True)

    sp = add("faces", cmd_faces,
             "Largest faces of the L_m x L_n separable cone.\n\n"
             "type1: random elements (1; v) x^T + y (1, h) of F_I(h, v), paired with (1; -v)(1, -h).\n"
             "type2: generators (1, h; h^T, h^T h) of the standard Type II face, or with --matrix\n"
             "  a membership test (A; 0) with A PSD and A_00 = tr(A)/2.\n"
             "intersect: common element (1; v_b)(1, h_a) of two Type I faces.")
    sp.add_argument("--mode", choices=("type1", "type2", "intersect"), required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--count", type=int, default=5)
    sp.add_argument("--matrix", help="element to test for Type II face membership")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("decompose", cmd_decompose,
             "Decompose B = sum_i w_i y_i x_i^T with x_i, y_i on the cone boundaries.\n\n"
             "Fully corrective conditional gradient over product generators with\n"
             "NNLS refits; success means |B - recon| <= tol |B|. Exit 1 on failure.")
    sp.add_argument("--matrix", required=True, help="n x m element as matrix JSON")
    sp.add_argument("--k1", help="ellipsoid spec for the m-side cone (default Lorentz)")
    sp.add_argument("--k2", help="ellipsoid spec for the n-side cone (default Lorentz)")
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("witness", cmd_witness,
             "Pair an element with a candidate map: <B, M> = tr(M^T B).\n\n"
             "A certified positive map with negative pairing proves B is not separable (exit 1).")
    sp.add_argument("--element", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--k1")
    sp.add_argument("--k2")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("search-fmax", cmd_search_fmax,
             "Search max F(M) = h P1 h^T + v^T P2 v + tr(A^T P2 A P1) over\n"
             "certified positive maps with s = 1; writes the search trace.", fmt="csv")
    sp.add_argument("--p1", required=True, help="ellipsoid spec JSON for P1")
    sp.add_argument("--p2", required=True, help="ellipsoid spec JSON for P2")
    sp.add_argument("--budget", type=int, default=400)

    sp = add("qubit-ball", cmd_qubit_ball,
             "Constructive check of the ball of radius (1 - epsilon) rho_k around I,\n"
             "rho_k = 2^(k/2) / sqrt(3^(k-1) + 1): each sample is split as H_+(2) x (inner ball)\n"
             "and recursively decomposed into one-qubit PSD products. Exit 1 unless all succeed.\n"
             "SEPCONE_THREADS caps the sample-level thread pool.", fmt="csv")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--tol", type=float, default=1e-5)
    return parser


COMMANDS = {
    "check-map": cmd_check_map, "classify": cmd_classify, "radius": cmd_radius,
    "bound-table": cmd_bound_table, "faces": cmd_faces, "decompose": cmd_decompose,
    "witness": cmd_witness, "search-fmax": cmd_search_fmax, "qubit-ball": cmd_qubit_ball,
}


def run(cfg: RunConfig) -> Outcome:
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        return Outcome(f"error: {exc}\n", EXIT_INPUT)
    except (InvalidDimension, maps.ZeroMapError, faces.InvalidGenerator, ValueError) as exc:
        return Outcome(f"error: {exc}\n", EXIT_INPUT)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_namespace(ns)
    out = run(cfg)
    if out.status == EXIT_INPUT:
        sys.stderr.write(out.text)
    elif cfg.output:
        Path(cfg.output).write_text(out.text)
    else:
        sys.stdout.write(out.text)
    return out.status


if __name__ == "__main__":
    sys.exit(main())

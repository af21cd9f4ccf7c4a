"""Command-line entry point: ``knotgate <subcommand> [options]``.

Every subcommand prints human-readable text by default and a JSON envelope
``{"command", "inputs", "result", "version"}`` with ``--json``.  Exit codes:
0 on success, 2 on invalid input, 3 on numerical failure.
"""

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import __version__
from .algebra import ID2, QI, QJ, QK, SIGMA_X, SIGMA_Y, SIGMA_Z, axis_angle, expm_antihermitian, matrix_from_json
from .algebra import matrix_to_json, su2_from_array
from .compiler import MAX_LEN, Compiler, coverage
from .diagram import CATALOG_NAMES, catalog, parse_pd, wirtinger_presentation
from .errors import NumericFailure, ValidationError
from .fpgroup import Presentation, canonicalize, format_word, parse_word, simplify
from .holonomy import (
    FAMILIES,
    Loop,
    connection_from_rep,
    loop_transport,
    plaquette_defect,
    word_holonomy,
)
from .linkgate import DEFAULT_TIME, LinkGateSpec, entangling_power, evolve, scan_local_times
from .reps import (
    B3,
    TOL_REP,
    Representation,
    braid_defect,
    character_point,
    character_scan,
    commutator_defect,
    fibonacci_rep,
    is_abelian,
    kl_family,
    modular_images,
    rep_solve_multi,
    trivial_rep,
)

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*(pi|π)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text):
    """Radians, or multiples of pi such as ``7pi/10``, ``-pi/4``, ``2*pi``."""
    m = _ANGLE.match(text)
    if not m or (m.group(1) in ("", "+", "-", None) and not m.group(2)):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    coef, pi, den = m.groups()
    value = float(coef + "1" if coef in ("", "+", "-") else coef)
    if pi:
        value *= np.pi
    if den:
        value /= float(den)
    return value


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_json(path):
    data = json.loads(_read_text(path))
    # accept a full envelope from another subcommand
    if isinstance(data, dict) and "result" in data and "command" in data:
        data = data["result"]
    return data


def _fmt_matrix(m):
    m = np.asarray(m)
    if m.dtype == object:
        return "\n".join("  [" + ", ".join(f"{int(x):>3d}" for x in row) + "]" for row in m)
    return "\n".join("  [" + ", ".join(f"{x.real:+.6f}{x.imag:+.6f}i" for x in row) + "]" for row in m)


def _axis_angle_json(u):
    phase, angle, axis = axis_angle(u)
    return {"phase": phase, "angle": angle, "axis": [float(v) for v in axis]}


# -- presentations ------------------------------------------------------------


def _presentation_from_args(args):
    if getattr(args, "knot", None):
        entry = catalog(args.knot)
        return entry.pd, wirtinger_presentation(entry.pd)
    if getattr(args, "pd", None):
        pd = parse_pd(args.pd)
        return pd, wirtinger_presentation(pd)
    if getattr(args, "pd_file", None):
        pd = parse_pd(_read_text(args.pd_file))
        return pd, wirtinger_presentation(pd)
    raise ValidationError("give --knot, --pd or --pd-file")


def _load_presentation(path):
    data = _read_json(path)
    if isinstance(data, dict) and "presentation" in data and "generators" not in data:
        data = data["presentation"]
    if not isinstance(data, dict) or "generators" not in data:
        raise ValidationError("expected JSON with 'generators' and 'relators'")
    return Presentation.from_json(data)


def cmd_present(args):
    pd, p = _presentation_from_args(args)
    if args.reduce:
        p = canonicalize(simplify(p))
    result = {
        "generators": list(p.generators),
        "relators": p.relator_strings(),
        "presentation": str(p),
        "arc_count": pd.arc_count,
        "crossing_count": len(pd.crossings),
        "crossing_signs": [c.sign for c in pd.crossings],
        "components": pd.num_components,
        "reduced": bool(args.reduce),
    }
    inputs = {"knot": args.knot, "pd": args.pd, "pd_file": args.pd_file, "reduce": bool(args.reduce)}
    return inputs, result, str(p)


def cmd_catalog(args):
    names = [args.name] if args.name else list(CATALOG_NAMES)
    rows = []
    for name in names:
        e = catalog(name)
        rows.append(
            {
                "name": e.name,
                "description": e.description,
                "pd": str(e.pd),
                "expected_presentation": str(e.expected_presentation),
                "crossing_counts": list(e.crossing_counts) if e.crossing_counts else None,
            }
        )
    text = "\n".join(f"{r['name']:10s} {r['expected_presentation']:32s} {r['pd']}" for r in rows)
    return {"name": args.name}, {"entries": rows}, text


# -- representations ------------------------------------------------------------


def _rep_from_args(args):
    kind = args.type
    if kind == "fibonacci":
        return fibonacci_rep()
    if kind == "kl":
        if args.theta is None:
            raise ValidationError("--type kl needs --theta")
        return kl_family(args.theta, c_sign=args.c_sign, s_sign=args.s_sign)
    if kind == "trivial":
        return trivial_rep(B3)
    raise ValidationError(f"unknown representation type {kind!r}")


def _rep_result(rep):
    out = rep.to_json()
    if rep.presentation.rank >= 2:
        out["commutator_defect"] = commutator_defect(rep)
        out["abelian"] = is_abelian(rep)
        out["traces"] = list(character_point(rep).coords())
    return out


def _rep_text(rep):
    lines = [f"{rep.name or 'representation'} of {rep.presentation}"]
    for g, m in rep.images.items():
        lines.append(f"{g} ->")
        lines.append(_fmt_matrix(m))
    lines.append(f"residual {rep.residual:.3e}")
    return "\n".join(lines)


def cmd_rep(args):
    inputs = {
        "type": args.type,
        "theta": args.theta,
        "c_sign": args.c_sign,
        "s_sign": args.s_sign,
        "check": bool(args.check),
        "solve": args.solve,
        "verify": args.verify,
        "seed": args.seed,
        "restarts": args.restarts,
        "non_abelian": bool(args.non_abelian),
        "tol": args.tol,
    }
    if args.solve is not None:
        p = _load_presentation(args.solve)
        accept = (lambda r: not is_abelian(r)) if args.non_abelian else None
        seeds = range(args.seed, args.seed + args.restarts)
        rep = rep_solve_multi(p, seeds, accept=accept, tol=args.tol)
    elif args.verify is not None:
        rep = Representation.from_json(_read_json(args.verify))
    else:
        rep = _rep_from_args(args)
    result = _rep_result(rep)
    if rep.presentation == B3:
        result["braid_defect"] = braid_defect(rep)
    text = _rep_text(rep)
    if args.check or args.verify is not None:
        result["valid"] = rep.residual <= args.tol
        text += f"\n{'valid' if result['valid'] else 'INVALID'} at tol {args.tol:.0e}"
        if not result["valid"]:
            raise _Failed(inputs, result, text, ValidationError("relator residual above tolerance"))
    return inputs, result, text


def cmd_modular(args):
    w = parse_word(args.word, ("a", "b"))
    m = modular_images(w, order=args.order)
    result = {"word": format_word(w, ("a", "b")), "matrix": matrix_to_json(m), "order": args.order}
    return {"word": args.word, "order": args.order}, result, _fmt_matrix(m)


def cmd_character(args):
    if args.presentation:
        p = _load_presentation(args.presentation)
    else:
        _, p = _presentation_from_args(args)
        p = simplify(p)
    pts = character_scan(p, grid=args.grid, tol=args.tol)
    rows = [{"x": pt.x, "y": pt.y, "z": pt.z, "residual": pt.residual} for pt in pts]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "z", "residual"])
    for r in rows:
        writer.writerow([repr(r["x"]), repr(r["y"]), repr(r["z"]), repr(r["residual"])])
    inputs = {"knot": args.knot, "presentation": args.presentation, "grid": args.grid, "tol": args.tol}
    return inputs, {"presentation": str(p), "points": rows}, buf.getvalue().rstrip("\n")


# -- holonomy -------------------------------------------------------------------


def _named_rep(name, theta=None):
    if name == "fibonacci":
        return fibonacci_rep()
    if name == "kl":
        if theta is None:
            raise ValidationError("--rep kl needs --theta")
        return kl_family(theta)
    if name == "trivial":
        return trivial_rep(B3)
    return Representation.from_json(_read_json(name))


def _parse_point(text):
    try:
        return np.array([parse_angle(v) for v in text.split(",")])
    except argparse.ArgumentTypeError as exc:
        raise ValidationError(str(exc)) from None


def _make_loop(spec, refine):
    if spec == "equator":
        return Loop.equator(refine)
    if spec.startswith("latitude:"):
        return Loop.latitude(_parse_point(spec.split(":", 1)[1])[0], refine)
    return Loop.from_csv(_read_text(spec))


def cmd_holonomy(args):
    fam = FAMILIES[args.family]()
    inputs = {
        "word": args.word,
        "rep": args.rep,
        "loop": args.loop,
        "refine": args.refine,
        "mode": args.mode,
        "band": args.band,
        "flatness": args.flatness,
        "delta": args.delta,
        "halvings": args.halvings,
        "family": args.family,
    }
    if args.word is not None:
        rep = _named_rep(args.rep, args.theta)
        conn = connection_from_rep(rep)
        w = parse_word(args.word, rep.presentation.generators)
        u = word_holonomy(conn, w)
        result = {"word": format_word(w, rep.presentation.generators), "unitary": matrix_to_json(u)}
        result["axis_angle"] = _axis_angle_json(u)
        return inputs, result, _fmt_matrix(u)
    if args.loop is not None:
        loop = _make_loop(args.loop, args.refine)
        out = loop_transport(fam, loop, mode=args.mode, band=args.band)
        if args.mode == "full":
            defect = float(np.linalg.norm(out - ID2, 2))
            result = {"unitary": matrix_to_json(out), "axis_angle": _axis_angle_json(out), "defect": defect}
            text = _fmt_matrix(out) + f"\n||U - 1|| = {defect:.3e}"
        else:
            result = {"phase_factor": [float(out.real), float(out.imag)], "phase": float(np.angle(out))}
            text = f"phase factor {out.real:+.12f}{out.imag:+.12f}i (angle {np.angle(out):+.12f})"
        result["points"] = len(loop.points)
        return inputs, result, text
    if args.flatness is not None:
        x = _parse_point(args.flatness)
        rows = []
        delta = args.delta
        for _ in range(args.halvings + 1):
            rows.append({"delta": delta, "defect": plaquette_defect(fam, x, delta)})
            delta /= 2
        for a, b in zip(rows[:-1], rows[1:]):
            b["ratio"] = a["defect"] / b["defect"] if b["defect"] > 0 else None
        text = "\n".join(
            f"delta {r['delta']:.3e}  defect {r['defect']:.3e}" + (f"  ratio {r['ratio']:.2f}" if r.get("ratio") else "")
            for r in rows
        )
        return inputs, {"point": x.tolist(), "rows": rows}, text
    raise ValidationError("give --word, --loop or --flatness")


# -- link gates -----------------------------------------------------------------


def cmd_linkgate(args):
    if args.over is not None or args.under is not None:
        spec = LinkGateSpec("custom", args.over or 0, args.under or 0)
    else:
        spec = LinkGateSpec.from_catalog(args.link)
    gate = evolve(spec, args.time)
    lam = entangling_power(gate)
    result = {
        "link": spec.name,
        "over_count": spec.over_count,
        "under_count": spec.under_count,
        "time": gate.time,
        "hamiltonian": matrix_to_json(gate.hamiltonian),
        "unitary": matrix_to_json(gate.unitary),
        "lambda_min": lam,
    }
    text = f"H =\n{_fmt_matrix(gate.hamiltonian)}\nU(t={gate.time:.6g}) =\n{_fmt_matrix(gate.unitary)}\nlambda_min = {lam:.6f}"
    if args.scan:
        roots, table = scan_local_times(spec, samples=args.samples)
        result["local_times"] = roots
        result["scan"] = [[t, v] for t, v in table]
        text += "\nproduct-state times: " + ", ".join(f"{t:.6f}" for t in roots)
    inputs = {"link": args.link, "over": args.over, "under": args.under, "time": args.time, "scan": bool(args.scan)}
    return inputs, result, text


# -- compiler -------------------------------------------------------------------

_PRESETS = {"identity": ID2, "i": QI, "j": QJ, "k": QK}


def _target_from_arg(text):
    if text in _PRESETS:
        return _PRESETS[text].copy()
    if text.startswith("axis:"):
        # axis:x,y,z:angle  ->  exp(-i angle/2 n.sigma)
        try:
            _, axis, angle = text.split(":")
            n = np.array([float(v) for v in axis.split(",")])
            theta = parse_angle(angle)
        except (ValueError, argparse.ArgumentTypeError):
            raise ValidationError(f"bad axis-angle target {text!r}; use axis:x,y,z:angle") from None
        if n.shape != (3,) or np.linalg.norm(n) == 0:
            raise ValidationError("axis needs three components, not all zero")
        n = n / np.linalg.norm(n)
        return expm_antihermitian(-0.5j * theta * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z))
    data = _read_json(text)
    if isinstance(data, dict):
        data = data.get("target", data.get("matrix", data.get("achieved")))
    if isinstance(data, list) and len(data) == 4 and all(isinstance(v, (int, float)) for v in data):
        q = np.array(data, dtype=float)
        return su2_from_array(q / np.linalg.norm(q))
    return matrix_from_json(data)


def cmd_compile(args):
    rep = _named_rep(args.rep, args.theta)
    if args.max_len > MAX_LEN:
        raise ValidationError(f"--max-len must be at most {MAX_LEN}")
    comp = Compiler(rep, args.max_len)
    inputs = {
        "rep": args.rep,
        "theta": args.theta,
        "target": args.target_json,
        "max_len": args.max_len,
        "eps": args.eps,
        "coverage": bool(args.coverage),
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.coverage:
        rpt = coverage(rep, args.eps, args.max_len, args.samples, args.seed, compiler=comp)
        text = f"covered {rpt.covered_fraction:.4f} of {rpt.sample_count} targets at eps {rpt.epsilon} (max_len {rpt.max_len})"
        return inputs, rpt.to_json(), text
    if args.target_json is None:
        raise ValidationError("give --target-json or --coverage")
    res = comp.compile(_target_from_arg(args.target_json), args.eps)
    gens = rep.presentation.generators
    text = f"word {format_word(res.word, gens) or '(empty)'}  length {len(res.word)}  dist {res.dist:.6e}"
    return inputs, res.to_json(gens), text


# -- driver -----------------------------------------------------------------------


class _Failed(Exception):
    def __init__(self, inputs, result, text, error):
        super().__init__(str(error))
        self.payload = (inputs, result, text)
        self.error = error


def _angle(text):
    return parse_angle(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="knotgate", description="Knot groups, SU(2) representations and gates.")
    parser.add_argument("--version", action="version", version=f"knotgate {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="emit a JSON envelope")
        p.set_defaults(func=func)
        return p

    def add_source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--knot", choices=CATALOG_NAMES)
        g.add_argument("--pd", help="PD code text")
        g.add_argument("--pd-file", help="file with PD code ('-' for stdin)")

    p = add("present", cmd_present, "PD code to Wirtinger presentation")
    add_source(p)
    p.add_argument("--reduce", action="store_true", help="eliminate generators by Tietze moves")

    p = add("catalog", cmd_catalog, "list built-in knots and links")
    p.add_argument("--name", choices=CATALOG_NAMES)

    p = add("rep", cmd_rep, "construct, verify or solve representations")
    p.add_argument("--type", choices=("fibonacci", "kl", "trivial"), default="fibonacci")
    p.add_argument("--theta", type=_angle)
    p.add_argument("--c-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--s-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--check", action="store_true", help="fail unless the relator residual is within --tol")
    p.add_argument("--solve", nargs="?", const="-", metavar="FILE", help="presentation JSON to solve ('-' for stdin)")
    p.add_argument("--verify", metavar="FILE", help="representation JSON to verify")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--non-abelian", action="store_true", help="only accept non-abelian solutions")
    p.add_argument("--tol", type=float, default=TOL_REP)

    p = add("modular", cmd_modular, "exact SL(2,Z) image of a B3 word")
    p.add_argument("--word", required=True)
    p.add_argument("--order", choices=("operator", "product"), default="operator")

    p = add("holonomy", cmd_holonomy, "word holonomy, loop transport or flatness scan")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--word", help="word for the holonomy of a representation")
    g.add_argument("--loop", help="'equator', 'latitude:THETA' or a CSV file of points")
    g.add_argument("--flatness", metavar="THETA,PHI", help="plaquette defects at a point")
    p.add_argument("--rep", default="fibonacci", help="fibonacci, kl, trivial or a representation JSON file")
    p.add_argument("--theta", type=_angle)
    p.add_argument("--family", choices=tuple(FAMILIES), default="spin")
    p.add_argument("--refine", type=int, default=1000)
    p.add_argument("--mode", choices=("full", "abelian"), default="full")
    p.add_argument("--band", type=int, choices=(0, 1), default=0)
    p.add_argument("--delta", type=float, default=1e-2)
    p.add_argument("--halvings", type=int, default=3)

    p = add("linkgate", cmd_linkgate, "two-qubit gate of a two-component link")
    p.add_argument("--link", default="hopf")
    p.add_argument("--over", type=int)
    p.add_argument("--under", type=int)
    p.add_argument("--time", type=_angle, default=DEFAULT_TIME)
    p.add_argument("--scan", action="store_true", help="scan t in [0, pi] for product-state times")
    p.add_argument("--samples", type=int, default=721)

    p = add("compile", cmd_compile, "approximate an SU(2) target by a word")
    p.add_argument("--rep", default="fibonacci", help="fibonacci, kl or a representation JSON file")
    p.add_argument("--theta", type=_angle)
    p.add_argument(
        "--target-json", help="matrix/quaternion JSON file, a preset (identity, i, j, k) or axis:x,y,z:angle"
    )
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--coverage", action="store_true", help="report coverage of Haar-random targets")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add("character", cmd_character, "trace coordinates of SU(2) representations (CSV)")
    add_source(p)
    p.add_argument("--presentation", metavar="FILE", help="presentation JSON ('-' for stdin)")
    p.add_argument("--grid", type=int, default=3)
    p.add_argument("--tol", type=float, default=TOL_REP)
    return parser


def _emit(args, inputs, result, text, out):
    if args.json:
        env = {"command": args.command, "inputs": inputs, "result": result, "version": __version__}
        out.write(json.dumps(env, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        inputs, result, text = args.func(args)
    except _Failed as exc:
        _emit(args, *exc.payload, out)
        err.write(f"error: {exc.error}\n")
        return 3 if isinstance(exc.error, NumericFailure) else 2
    except NumericFailure as exc:
        err.write(f"numeric failure: {exc}\n")
        return 3
    except (ValidationError, ValueError, KeyError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    _emit(args, inputs, result, text, out)
    return 0

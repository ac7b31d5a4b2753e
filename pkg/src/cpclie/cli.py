"""Scenario runner.

    cpclie decompose --space sl_complex:3
    cpclie run --preset a2-complex-lines --format table
    cpclie run --config scenario.json --out report.json
    cpclie suite paper-acceptance
    cpclie dump --space sl_quaternion:3

Exit status: 0 all checks pass, 1 a check failed, 2 usage or schema error,
3 internal-consistency error.
"""

import argparse
import json
import sys
import time
from fractions import Fraction

import jsonschema
import numpy as np

from . import __version__, acceptance, construct, exact, geometry
from .acceptance import IDENTITY_SPACES
from .eigen import EigenError
from .liealg.algebra import AlgebraError
from .liealg.identities import describe, identity_battery
from .rootsys import RootSystemError, debug_table, root_label
from .scenarios import (PRESETS, ScenarioError, a2_pair, get_decomposition, normalize_space, preset,
                        space_label)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
CHECKS = ("decompose", "invariants", "sweep", "characterize", "blocks", "normalizer", "codim-scan")
VERDICT_CHECKS = ("sweep", "characterize")
SUITES = ("paper-acceptance", "invariants-exhaustive", "scan-nightly")

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}

SCENARIO_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "space": {
            "oneOf": [
                {"type": "string", "pattern": r"^[a-z_]+:\d+(,\d+)?$"},
                {
                    "type": "object",
                    "required": ["family"],
                    "additionalProperties": False,
                    "properties": {
                        "family": {"enum": ["sl_real", "sl_complex", "sl_quaternion", "so_pq", "sp_real"]},
                        "n": {"type": "integer", "minimum": 2},
                        "p": {"type": "integer", "minimum": 1},
                        "q": {"type": "integer", "minimum": 1},
                    },
                },
            ]
        },
        "v_spec": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["preset"],
                    "additionalProperties": False,
                    "properties": {"preset": {"enum": sorted(PRESETS)}},
                },
                {
                    "type": "object",
                    "required": ["entries"],
                    "additionalProperties": False,
                    "properties": {
                        "case": {"enum": list(construct.CASE_TAGS)},
                        "entries": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "object",
                                "required": ["root", "basis"],
                                "additionalProperties": False,
                                "properties": {
                                    "root": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                                    "basis": {
                                        "type": "array",
                                        "minItems": 1,
                                        "items": {"type": "array", "items": _RATIONAL, "minItems": 1},
                                    },
                                },
                            },
                        },
                    },
                },
            ]
        },
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}, "uniqueItems": True},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                k: {"type": "number", "exclusiveMinimum": 0}
                for k in ("cpc_tol", "cluster_tol", "symmetry_tol")
            },
        },
        "expect": {"enum": ["pass", "fail"]},
        "scan": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dims": {"oneOf": [{"type": "null"},
                                   {"type": "array", "items": {"type": "integer", "minimum": 1},
                                    "minItems": 2, "maxItems": 2}]},
                "trials": {"type": "integer", "minimum": 1},
            },
        },
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "artifact_version", "scenario", "decomposition", "checks", "outcome"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "artifact_version": {"type": "string"},
        "scenario": {"type": "object"},
        "decomposition": {"type": "object", "required": ["algebra", "metric_scale"]},
        "checks": {
            "type": "object",
            "additionalProperties": {"type": "object", "required": ["passed"]},
        },
        "outcome": {"type": "object", "required": ["expect", "observed", "ok"]},
        "timing": {"type": "object"},
    },
}


class UsageError(Exception):
    pass


_INTERNAL = (geometry.SymmetryViolation, geometry.InvarianceViolation, EigenError,
             exact.ExactArithmeticError, AlgebraError)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x).__name__}")


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable)


# ----- scenarios --------------------------------------------------------------


def load_scenario(args):
    """Merge a --config file with command-line flags and validate the result."""
    scn = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                scn = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read scenario {args.config}: {e}") from None
    if getattr(args, "space", None):
        scn["space"] = args.space
    if getattr(args, "preset", None):
        scn["v_spec"] = {"preset": args.preset}
    if getattr(args, "seed", None) is not None:
        scn["seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        scn.setdefault("tolerances", {})["cpc_tol"] = args.tol
    if getattr(args, "checks", None):
        scn["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    try:
        jsonschema.validate(scn, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise UsageError(f"scenario schema violation at {path}: {e.message}") from None
    return scn


def _resolve(scn):
    """Fill defaults: space from the preset, checks, seed, expect."""
    out = dict(scn)
    vs = scn.get("v_spec")
    pre = preset(vs["preset"]) if vs and "preset" in vs else None
    if "space" not in out:
        if pre is None:
            raise UsageError("no space given (use --space or a preset)")
        out["space"] = pre.space
    try:
        out["space"] = space_label(out["space"])
    except ScenarioError as e:
        raise UsageError(str(e)) from None
    out.setdefault("checks", ["sweep", "characterize"] if vs else [])
    out.setdefault("seed", 0)
    out.setdefault("expect", pre.expect if pre else "pass")
    out.setdefault("name", vs["preset"] if pre else "custom")
    out["schema_version"] = SCHEMA_VERSION
    return out, pre


def _config(scn):
    tol = scn.get("tolerances", {})
    return geometry.SamplerConfig(seed=scn["seed"], **tol)


def _decomposition_record(decomp):
    rec = decomp.summary()
    h = np.array([decomp.H[r.coeffs] for r in decomp.simple_roots], dtype=object)
    gram = exact.gram(h, decomp.metric) if len(h) else []
    rec["simple_root_gram"] = [[str(x) for x in row] for row in gram]
    return rec


def _pair_of(decomp, vspec):
    roots = vspec.roots
    if len(roots) != 2:
        return None
    a, b = roots
    if a in decomp.simple_roots and b in decomp.simple_roots \
            and decomp.cartan_integer(a, b) == -1 and decomp.cartan_integer(b, a) == -1:
        return a, b
    return None


def _check_sweep(decomp, orbit, vspec, scn, config):
    v = geometry.cpc_sweep(orbit, config)
    austere, minimal = geometry.orbit_austere_minimal(orbit, config)
    return {"passed": bool(v.is_cpc and austere), "verdict": v.to_dict(),
            "austere": austere, "minimal": minimal}


def _check_characterize(decomp, orbit, vspec, scn, config):
    pair = _pair_of(decomp, vspec)
    if pair is None:
        return {"passed": True, "applicable": False,
                "reason": "V is not spread over an A2 pair of simple roots"}
    ch = construct.characterization_check(decomp, vspec.rows(pair[0]), vspec.rows(pair[1]))
    return {"passed": bool(ch.holds), "applicable": True, **ch.to_dict()}


def _check_blocks(decomp, orbit, vspec, scn, config):
    if orbit.codim == 2:
        phis = np.linspace(0, np.pi / 2, 5)
        dirs = [[np.cos(p), np.sin(p)] for p in phis]
    else:
        dirs = list(np.eye(orbit.codim))
        phis = [None] * len(dirs)
    pair = _pair_of(decomp, vspec)
    half = np.sqrt(float(decomp.length_sq(pair[0]))) if pair else None
    classes, worst, abstract_gap = [], 0.0, 0.0
    for cls, idx in orbit.string_partition:
        spectra = []
        for d, phi in zip(dirs, phis):
            blk, leak = geometry.string_block(orbit, d, cls, leak_tol=config.symmetry_tol * 10)
            worst = max(worst, leak)
            vals = np.sort(np.linalg.eigvalsh(blk)) if len(idx) else np.zeros(0)
            spectra.append([float(x) for x in vals])
            if cls.shape == "len3" and phi is not None and half is not None:
                ref = construct.obstruction_block("case-ii-3x3", phi, half).spectrum
                m = decomp.multiplicity(cls.representative)
                if vals.size == 3 * m:
                    abstract_gap = max(abstract_gap, float(np.abs(vals - np.sort(np.repeat(ref, m))).max()))
        classes.append({"representative": root_label(cls.representative), "shape": cls.shape,
                        "dim": len(idx), "spectra": spectra})
    return {"passed": True, "max_leakage": worst, "len3_abstract_gap": abstract_gap, "classes": classes}


def _check_normalizer(decomp, orbit, vspec, scn, config):
    rep = construct.normalizer_check(orbit, seed=scn["seed"] % 2**32)
    return {"passed": True, **rep.to_dict()}


def _check_scan(decomp, orbit, vspec, scn, config):
    pair = _pair_of(decomp, vspec) if vspec else None
    if pair is None:
        try:
            pair = a2_pair(decomp)
        except ScenarioError as e:
            return {"passed": True, "applicable": False, "reason": str(e)}
    opts = scn.get("scan", {})
    dims = opts.get("dims")
    rep = construct.codimension_scan(decomp, tuple(dims) if dims else None, opts.get("trials", 20),
                                     seed=scn["seed"], config=config, pair=pair)
    return {"passed": rep.agreement == rep.trials, "applicable": True, **rep.to_dict()}


_CHECK_FNS = {
    "sweep": _check_sweep,
    "characterize": _check_characterize,
    "blocks": _check_blocks,
    "normalizer": _check_normalizer,
    "codim-scan": _check_scan,
}


def run_scenario(scn):
    """Execute a validated scenario; returns (report, exit status)."""
    scn, pre = _resolve(scn)
    timing = {}
    t0 = time.perf_counter()
    try:
        decomp = get_decomposition(scn["space"])
    except (AlgebraError, RootSystemError, ScenarioError) as e:
        raise UsageError(str(e)) from None
    timing["decompose"] = time.perf_counter() - t0
    config = _config(scn)
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "decomposition": _decomposition_record(decomp),
        "checks": {},
    }
    vspec, orbit = None, None
    vs = scn.get("v_spec")
    if vs:
        try:
            if pre is not None:
                vspec, _ = pre.build(decomp)
            else:
                vspec = construct.VSpec.from_dict(decomp, vs)
            scn["v_spec_expanded"] = vspec.to_dict()
            orbit = construct.orbit_of(decomp, vspec)
        except (construct.ConstructionError, ScenarioError, RootSystemError,
                geometry.NotASubalgebra, geometry.GeometryError) as e:
            if isinstance(e, _INTERNAL):
                raise
            report["checks"]["construct"] = {"passed": False, "error": str(e)}
    report["scenario"] = scn
    if orbit is not None:
        report["orbit"] = orbit.to_dict()
    for name in scn["checks"]:
        t1 = time.perf_counter()
        if name == "decompose":
            report["checks"][name] = {"passed": True}
        elif name == "invariants":
            rep = identity_battery(decomp)
            report["checks"][name] = {"passed": rep.ok, **rep.to_dict()}
        elif orbit is None:
            if "construct" not in report["checks"]:
                report["checks"][name] = {"passed": False, "error": "no V specified"}
            continue
        else:
            report["checks"][name] = _CHECK_FNS[name](decomp, orbit, vspec, scn, config)
        timing[name] = time.perf_counter() - t1
    report["timing"] = timing
    return report, _outcome(report, scn)


def _outcome(report, scn):
    checks = report["checks"]
    failed = sorted(k for k, v in checks.items() if not v["passed"])
    observed = "fail" if failed else "pass"
    if scn["expect"] == "pass":
        ok = not failed
    else:
        ok = bool(failed) and all(k in VERDICT_CHECKS for k in failed)
    report["outcome"] = {"expect": scn["expect"], "observed": observed, "failed_checks": failed, "ok": ok}
    return EXIT_OK if ok else EXIT_FAIL


# ----- text rendering ---------------------------------------------------------


def _table(rows, header):
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)),
           "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(out)


def _summarize_check(name, res):
    if "error" in res:
        return res["error"]
    if name == "sweep":
        v = res["verdict"]
        spec = ", ".join(f"{e['value']:+.8f} x{e['multiplicity']}" for e in v["reference_spectrum"] or [])
        return (f"cpc={v['is_cpc']} dev={v['max_spectrum_deviation']:.2e} samples={v['samples']} "
                f"austere={res['austere']} spectrum [{spec}]")
    if name == "characterize":
        return f"dims {res['dims']}" if res.get("applicable") else res["reason"]
    if name == "normalizer":
        return f"dim m={res['m_dim']} transitive_possible={res['transitive_possible']}"
    if name == "codim-scan":
        if not res.get("applicable"):
            return res["reason"]
        return f"{res['agreement']}/{res['trials']} agree, {res['characterization_passes']} CPC"
    if name == "blocks":
        return f"{len(res['classes'])} classes, leakage {res['max_leakage']:.1e}"
    if name == "invariants":
        return "all residuals zero" if res["ok"] else "nonzero residuals"
    return ""


def _verdict(res):
    if res.get("applicable") is False:
        return "n/a"
    return "PASS" if res["passed"] else "FAIL"


def render_run(report):
    d = report["decomposition"]
    scn = report["scenario"]
    lines = [f"scenario {scn['name']} on {d['algebra']} (metric scale {d['metric_scale']}, "
             f"dim k0 {d['dim_k0']}), expect {scn['expect']}"]
    rows = [[name, _verdict(res), _summarize_check(name, res)]
            for name, res in sorted(report["checks"].items())]
    if rows:
        lines.append(_table(rows, ["check", "verdict", "summary"]))
    else:
        lines.append(render_decomposition(d))
    out = report["outcome"]
    lines.append(f"outcome: observed {out['observed']}, expected {out['expect']} -> {'OK' if out['ok'] else 'NOT OK'}")
    return "\n".join(lines)


def render_decomposition(rec):
    rows = [[root_label_from(r["root"]), r["level"], r["length_sq"], r["multiplicity"]]
            for r in rec["positive_roots"]]
    head = (f"{rec['algebra']}: dim {rec['dim']}, rank {rec['rank']}, type {rec['family']}, "
            f"dim k0 {rec['dim_k0']}, metric scale {rec['metric_scale']}")
    gram = "\n".join("  " + "  ".join(x.rjust(5) for x in row) for row in rec.get("simple_root_gram", []))
    return head + "\n" + _table(rows, ["root", "level", "|root|^2", "mult"]) + "\nH_alpha Gram (simple roots):\n" + gram


def root_label_from(coeffs):
    terms = []
    for i, c in enumerate(coeffs):
        if c:
            terms.append(("" if c == 1 else str(c)) + f"a{i}")
    return "+".join(terms) or "0"


def render_suite(name, rows):
    body = _table(rows, ["#", "claim", "reference", "computed", "tol", "verdict"])
    return f"suite {name}\n{body}"


# ----- suites -----------------------------------------------------------------


def suite_paper_acceptance(args):
    results = acceptance.run_all(_config({"seed": args.seed or 0}))
    rows = [[r.id, r.title, r.reference, r.computed, r.tolerance, "PASS" if r.passed else "FAIL"] for r in results]
    data = {"suite": "paper-acceptance", "criteria": [r.to_dict() for r in results],
            "timing": {str(r.id): r.seconds for r in results}}
    return rows, data, all(r.passed for r in results)


def suite_invariants(args):
    rows, reps = [], []
    for s in IDENTITY_SPACES:
        rep = identity_battery(get_decomposition(s))
        reps.append(rep.to_dict())
        n = sum(rep.counts.values())
        rows.append([s, rep.algebra, "0", f"{n} checks, " + ("all zero" if rep.ok else describe(rep)),
                     "exact", "PASS" if rep.ok else "FAIL"])
    return rows, {"suite": "invariants-exhaustive", "reports": reps}, all(r["ok"] for r in reps)


def suite_scan(args):
    seed = args.seed or 0
    plan = [
        ("sl_quaternion:3", (3, 3), 400, "no CPC instance"),
        ("sl_quaternion:3", (1, 2), 100, "no CPC instance"),
        ("sl_quaternion:3", (2, 2), 200, "agreement"),
        ("sl_complex:3", (1, 1), 200, "CPC instances exist"),
        ("sl_complex:3", (1, 2), 100, "no CPC instance"),
        ("sl_real:3", None, 300, "agreement"),
        ("sl_complex:3", None, 300, "agreement"),
        ("sl_quaternion:3", None, 300, "agreement"),
    ]
    rows, out, ok_all = [], [], True
    for space, dims, trials, expect in plan:
        rep = construct.codimension_scan(get_decomposition(space), dims, trials, seed=seed,
                                         config=geometry.SamplerConfig(seed=seed))
        ok = rep.agreement == trials
        if expect == "no CPC instance":
            ok &= rep.characterization_passes == 0
        elif expect == "CPC instances exist":
            ok &= rep.characterization_passes > 0
        ok_all &= ok
        out.append(rep.to_dict())
        rows.append([space, f"dims {dims or 'random'} x{trials}", expect,
                     f"{rep.characterization_passes} CPC, {rep.agreement}/{trials} agree", "exact",
                     "PASS" if ok else "FAIL"])
    return rows, {"suite": "scan-nightly", "scans": out}, ok_all


_SUITES = {
    "paper-acceptance": suite_paper_acceptance,
    "invariants-exhaustive": suite_invariants,
    "scan-nightly": suite_scan,
}


# ----- entry point ------------------------------------------------------------


def _emit(text, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_run(args):
    scn = load_scenario(args)
    report, status = run_scenario(scn)
    jsonschema.validate(json.loads(dumps(report)), REPORT_SCHEMA)
    _emit(dumps(report) if args.format == "json" else render_run(report), args)
    return status


def cmd_decompose(args):
    scn = load_scenario(args)
    scn.pop("v_spec", None)
    scn["checks"] = []
    report, status = run_scenario(scn)
    _emit(dumps(report) if args.format == "json" else render_decomposition(report["decomposition"]), args)
    return status


def cmd_dump(args):
    if not args.space:
        raise UsageError("dump needs --space")
    try:
        decomp = get_decomposition(normalize_space(args.space))
    except (ScenarioError, AlgebraError) as e:
        raise UsageError(str(e)) from None
    rec = _decomposition_record(decomp)
    if args.format == "json":
        _emit(dumps(rec), args)
    else:
        _emit(render_decomposition(rec) + "\n" + debug_table(decomp.system), args)
    return EXIT_OK


def cmd_suite(args):
    if args.name not in _SUITES:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(SUITES)}")
    rows, data, ok = _SUITES[args.name](args)
    data["passed"] = ok
    _emit(dumps(data) if args.format == "json" else render_suite(args.name, rows), args)
    return EXIT_OK if ok else EXIT_FAIL


def _u64(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="space such as sl_complex:3 or so_pq:2,5")
    common.add_argument("--preset", help="named V preset: " + ", ".join(sorted(PRESETS)))
    common.add_argument("--config", help="scenario file (JSON)")
    common.add_argument("--seed", type=_u64, default=None)
    common.add_argument("--tol", type=float, default=None, help="CPC tolerance override")
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="cpclie", description="CPC orbit verification workbench")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("decompose", parents=[common], help="restricted root decomposition summary")
    r = sub.add_parser("run", parents=[common], help="run a scenario")
    r.add_argument("--checks", help="comma-separated subset of " + ",".join(CHECKS))
    s = sub.add_parser("suite", parents=[common], help="run a named suite")
    s.add_argument("name", help=", ".join(SUITES))
    sub.add_parser("dump", parents=[common], help="text dump of roots, multiplicities and H Gram matrix")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "decompose": cmd_decompose, "suite": cmd_suite, "dump": cmd_dump}[args.verb]
    try:
        return handler(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _INTERNAL as e:
        print(f"internal-consistency error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

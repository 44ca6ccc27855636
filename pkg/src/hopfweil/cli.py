"""
Command line entry point.

    hopfweil <group> <action> [options]

Every command writes one document to stdout.  In JSON mode its top-level
keys are tool_version, config_echo, results and checks.  The exit status is
0 when every check passes, 1 when some check fails and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__

CACHE_ENV = "HOPFWEIL_CACHE"


class ConfigError(ValueError):
    pass


# -- argument types ----------------------------------------------------------------------

def _positive(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got %s" % s)
    return v


def _nonneg(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer, got %s" % s)
    return v


def _int_list(s):
    if isinstance(s, list):
        vals = [int(x) for x in s]
    else:
        vals = [int(x) for x in str(s).split(",") if x.strip()]
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("entries must be non-negative")
    return vals


# -- serialisation -------------------------------------------------------------------------

def _clean(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {_key(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "render"):
        return x.render()
    return str(x)


def _key(k):
    if isinstance(k, tuple):
        return ",".join(str(v) for v in k)
    return str(k)


def _checks_from_dict(d: dict, prefix: str = ""):
    out = []
    for name, v in sorted(d.items()):
        if isinstance(v, dict):
            entry = {"name": prefix + name, "pass": bool(v.get("pass"))}
            if v.get("witness"):
                entry["witness"] = v["witness"]
        else:
            entry = {"name": prefix + name, "pass": bool(v)}
        out.append(entry)
    return out


# -- cache -------------------------------------------------------------------------------

def cache_dir(args) -> Path:
    root = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV)
    if not root:
        root = os.path.join(os.path.expanduser("~"), ".cache", "hopfweil")
    return Path(root)


def load_or_derive(n: int, R: int, args):
    from .hopf_hn import HnPresentation, builtin_presentation
    from .jets import derive_relations

    if n == 1:
        return builtin_presentation(1, R)
    path = cache_dir(args) / ("hn_n%d_R%d.json" % (n, R))
    if path.exists():
        with open(path) as fh:
            return HnPresentation.from_json(json.load(fh))
    P = derive_relations(n, R)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(P.dumps())
    os.replace(tmp, path)
    return P


# -- handlers ----------------------------------------------------------------------------

def _cohomology_result(rep):
    data = rep.to_json()
    data["dims"] = list(rep.dims)
    return data, _checks_from_dict(rep.checks)


def cmd_weil_cohomology(a):
    from .weil import build_weil, complex_cohomology
    return _cohomology_result(complex_cohomology(build_weil(a.n, a.n if a.m is None else a.m)))


def cmd_wo_cohomology(a):
    from .weil import build_wo, complex_cohomology
    return _cohomology_result(complex_cohomology(build_wo(a.n, a.odd_top)))


def cmd_weil_basic(a):
    from .weil import basic_subcomplex, build_weil, build_wo, complex_cohomology
    m = a.n if a.m is None else a.m
    res, checks = _cohomology_result(complex_cohomology(basic_subcomplex(build_weil(a.n, m), a.subgroup)))
    if a.compare_wo:
        wo = complex_cohomology(build_wo(a.n)).dims
        res["wo_dims"] = wo
        checks.append({"name": "agrees_with_wo", "pass": _pad(wo) == _pad(res["dims"])})
    return res, checks


def _pad(dims):
    dims = list(dims)
    while dims and dims[-1] == 0:
        dims.pop()
    return dims


def _table_digest(P):
    return hashlib.sha256(P.dumps().encode()).hexdigest()


def cmd_hn_derive(a):
    from .hopf_hn import builtin_presentation
    from .jets import derive_relations, jacobi_check

    P = derive_relations(a.n, a.R) if a.n == 1 else load_or_derive(a.n, a.R, a)
    res = {"generators": [P.gen_name(g) for g in P.gens], "table_sha256": _table_digest(P)}
    jac = jacobi_check(P)
    res["jacobi_checked"] = jac["checked"]
    checks = [{"name": "jacobi", "pass": jac["pass"], "witness": jac["failures"][:3]}]
    if a.n == 1:
        checks.append({"name": "matches_builtin",
                       "pass": P.dumps() == builtin_presentation(1, a.R).dumps()})
    if a.show_brackets:
        res["table"] = P.to_json()
    return res, checks


def cmd_hn_verify(a):
    from .hopf_hn import verify_hopf_axioms
    from .jets import jacobi_check

    R = a.R if a.R is not None else (6 if a.n == 1 else 3)
    P = load_or_derive(a.n, R, a)
    rep = verify_hopf_axioms(P, a.max_len)
    res = {"R": R, "max_len": a.max_len,
           "sample_sizes": {k: v["sample_size"] for k, v in rep.items()}}
    checks = _checks_from_dict(rep)
    jac = jacobi_check(P)
    checks.append({"name": "jacobi", "pass": jac["pass"], "witness": jac["failures"][:3]})
    return res, checks


def cmd_forms_hopf(a):
    from .group_forms import hopf_axiom_report
    rep = hopf_axiom_report(a.n, a.variant, a.J)
    return {"sample_sizes": {k: v["sample_size"] for k, v in rep.items()}}, _checks_from_dict(rep)


def cmd_cyclic_verify(a):
    from . import cyclic

    if a.module == "hopf":
        P = load_or_derive(a.n, a.R or (6 if a.n == 1 else 3), a)
        M = cyclic.build_hopf_cyclic(P)
        samples = cyclic.hopf_samples(M, a.q_max, a.max_len, a.per_q, a.seed)
    elif a.module == "relative":
        P = load_or_derive(a.n, a.R or (6 if a.n == 1 else 3), a)
        M = cyclic.build_relative_cyclic(P)
        samples = cyclic.relative_samples(M, a.q_max, a.max_len)
    else:
        M = cyclic.build_dg_cyclic(a.n, a.n if a.m is None else a.m, a.variant, a.J)
        samples = cyclic.form_samples(M, a.q_max)
    rep = cyclic.verify_cyclic_identities(M, a.q_max, samples)
    checks = []
    for c in rep["checks"]:
        entry = {"name": "%s[q=%d]" % (c["name"], c["q"]), "pass": c["pass"]}
        if "witness" in c:
            entry["witness"] = c["witness"]
        checks.append(entry)
    if a.module == "relative":
        chains = [c for q in range(1, a.q_max + 1) for c in samples.get(q, [])]
        entry = M.representative_check(chains, [()])
        checks.append({k: v for k, v in entry.items() if k != "sample_size"})
    res = {"module": rep["module"], "sign_table": rep["sign_table"],
           "sample_sizes": {str(q): len(v) for q, v in sorted(samples.items())}}
    return res, checks


def cmd_cocycle_gv(a):
    from .cocycle_lib import gv_cocycle, verify_gv

    rep = verify_gv(a.n, a.q, a.variant, a.J, poly_bound=a.poly_bound, search=not a.no_search)
    rep["chain"] = gv_cocycle(a.n, a.q, a.variant, a.J).render()
    return rep, [{"name": "cocycle", "pass": rep["cocycle"]}]


def cmd_cocycle_partition(a):
    from .cocycle_lib import gv_partition_solve
    rep = gv_partition_solve(a.n, a.q, a.variant, a.J)
    rep["basis"] = [{_key(k): v for k, v in sorted(b.items())} for b in rep["basis"]]
    return rep, [{"name": "nonempty_solution_space", "pass": not rep["empty"]}]


def cmd_cocycle_chern(a):
    from .cocycle_lib import chern_like_cocycle
    rep = chern_like_cocycle(a.n, a.pattern, a.J or 2)
    checks = [{"name": "cocycle[%s]" % v, "pass": r["cocycle"]} for v, r in sorted(rep["variants"].items())]
    rep.pop("pass")
    return rep, checks


def cmd_simplex_integrate(a):
    from . import simplicial_cw as sc

    if len(a.exponents) not in (0, a.p):
        raise ConfigError("need %d exponents" % a.p)
    S = sc.simplex_algebra(a.p)
    w = S.sig.one()
    for i, e in enumerate(a.exponents, start=1):
        w = w * S.t(i) ** e
    for i in range(1, a.p + 1):
        w = w * S.dt(i)
    val = sc.integrate_simplex(S, w).terms.get((), Fraction(0))
    res = {"p": a.p, "exponents": a.exponents, "integral": val, "volume_convention": "1/p!"}
    checks = []
    if a.stokes_samples and a.p >= 1:
        rng = random.Random(a.seed)
        bad = 0
        for _ in range(a.stokes_samples):
            if not sc.stokes_defect(S, sc.random_stokes_form(S, rng)).is_zero():
                bad += 1
        res["stokes_samples"] = a.stokes_samples
        checks.append({"name": "stokes", "pass": bad == 0})
    return res, checks


def cmd_chern_simplicial(a):
    from . import simplicial_cw as sc

    rep = sc.chern_cocycle(a.n, a.k, range(0, (a.p_max if a.p_max is not None else 2 * a.k) + 1), a.m)
    res = {"components": {str(p): c.render() for p, c in sorted(rep["components"].items())},
           "coordinates": "gamma_i = g_{i-1} g_i^-1", "volume_convention": "1/p!"}
    checks = [{"name": "%s[p=%d]" % (c["name"], c["p"]), "pass": c["pass"]} for c in rep["checks"]]
    return res, checks


# -- parser ------------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "latex", "text"], default="json")
    p.add_argument("--config", help="JSON file with option values (keys as long option names)")
    p.add_argument("--cache-dir", help="directory for derived H_n tables (default $%s)" % CACHE_ENV)
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="hopfweil", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)
    leaves = {}

    def leaf(g, name, handler, help_):
        sub, group = g
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(handler=handler)
        leaves[(group, name)] = p
        return p

    def grp(name):
        return groups.add_parser(name).add_subparsers(dest="action", required=True), name

    g = grp("weil")
    p = leaf(g, "cohomology", cmd_weil_cohomology, "cohomology of the truncated Weil algebra")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--m", type=_nonneg, help="truncation degree (default n)")
    p = leaf(g, "basic", cmd_weil_basic, "cohomology of the basic subcomplex")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--m", type=_nonneg)
    p.add_argument("--subgroup", default="O", choices=["O", "SO", "GL"])
    p.add_argument("--compare-wo", action="store_true")

    g = grp("wo")
    p = leaf(g, "cohomology", cmd_wo_cohomology, "cohomology of WO_n")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--odd-top", type=_positive)

    g = grp("hn")
    p = leaf(g, "derive", cmd_hn_derive, "derive H_n relations from the jet model")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--R", type=_positive, default=3)
    p.add_argument("--show-brackets", action="store_true")
    p = leaf(g, "verify", cmd_hn_verify, "Hopf axioms on PBW monomials")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--R", type=_positive)
    p.add_argument("--max-len", type=_positive, default=6)

    g = grp("forms")
    p = leaf(g, "hopf", cmd_forms_hopf, "Hopf identities for forms on G")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--variant", choices=["algebraic", "germ"], default="algebraic")
    p.add_argument("--J", type=_positive)

    g = grp("cyclic")
    p = leaf(g, "verify", cmd_cyclic_verify, "cyclic identity suite")
    p.add_argument("--module", choices=["hopf", "relative", "forms"], required=True)
    p.add_argument("--n", type=_positive, default=1)
    p.add_argument("--q-max", type=_nonneg, default=3)
    p.add_argument("--max-len", type=_positive, default=2)
    p.add_argument("--per-q", type=_positive, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--R", type=_positive)
    p.add_argument("--m", type=_nonneg)
    p.add_argument("--variant", choices=["algebraic", "germ"], default="algebraic")
    p.add_argument("--J", type=_positive)

    g = grp("cocycle")
    for name, handler in (("gv", cmd_cocycle_gv), ("partition", cmd_cocycle_partition)):
        p = leaf(g, name, handler, "GV-type cochains")
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--q", type=_positive, required=True)
        p.add_argument("--variant", choices=["algebraic", "germ"], default="algebraic")
        p.add_argument("--J", type=_positive)
        if name == "gv":
            p.add_argument("--poly-bound", type=_nonneg, default=1)
            p.add_argument("--no-search", action="store_true")
    p = leaf(g, "chern", cmd_cocycle_chern, "trace-pattern cochains without the log factor")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--pattern", type=_int_list, required=True)
    p.add_argument("--J", type=_positive)

    g = grp("simplex")
    p = leaf(g, "integrate", cmd_simplex_integrate, "integrate t^a dt_1..dt_p over the standard simplex")
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--exponents", type=_int_list, default=[])
    p.add_argument("--stokes-samples", type=_nonneg, default=0)
    p.add_argument("--seed", type=int, default=0)

    g = grp("chern")
    p = leaf(g, "simplicial", cmd_chern_simplicial, "Chern cocycle by integration over simplices")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--p-max", type=_nonneg)
    p.add_argument("--m", type=_nonneg)
    return parser, leaves


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(path, leaves, argv):
    """Install config values as defaults of the addressed leaf parser."""
    leaf = leaves.get(tuple(argv[:2]))
    if leaf is None:
        return
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read config: %s" % exc)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    dests = {a.dest: a for a in leaf._actions if a.dest not in ("help", "config")}
    unknown = [k for k in cfg if k.replace("-", "_") not in dests]
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    clean = {}
    for k, v in cfg.items():
        act = dests[k.replace("-", "_")]
        if act.type is not None and v is not None:
            try:
                v = act.type(v if act.type is _int_list else str(v))
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigError("bad value for %s: %s" % (k, exc))
        if act.choices is not None and v not in act.choices:
            raise ConfigError("bad value for %s: %r" % (k, v))
        act.required = False
        clean[act.dest] = v
    leaf.set_defaults(**clean)


def _echo(args) -> dict:
    skip = {"handler", "config", "cache_dir", "format"}
    out = {k: v for k, v in vars(args).items() if k not in skip}
    out["command"] = "%s %s" % (out.pop("group"), out.pop("action"))
    return out


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2)
    if fmt == "text":
        lines = ["%s %s" % ("PASS" if c["pass"] else "FAIL", c["name"]) for c in doc["checks"]]
        for k, v in sorted(doc["results"].items()):
            lines.append("%s: %s" % (k, json.dumps(v, sort_keys=True)))
        return "\n".join(lines)
    return _latex(doc)


def _tex(s: str) -> str:
    s = s.replace("^", r" \wedge ").replace("(x)", r" \otimes ").replace("*", " ")
    return s.replace("_", r"\_") if "\\" not in s else s


def _latex(doc: dict) -> str:
    out = [r"\begin{tabular}{ll}", r"\hline check & verdict \\ \hline"]
    for c in doc["checks"]:
        out.append(r"\texttt{%s} & %s \\" % (c["name"].replace("_", r"\_").replace("^", r"\^{}"),
                                             "pass" if c["pass"] else "fail"))
    out.append(r"\hline")
    out.append(r"\end{tabular}")
    out.append(r"\begin{itemize}")
    for k, v in sorted(doc["results"].items()):
        if isinstance(v, str):
            body = "$%s$" % _tex(v)
        else:
            body = r"\verb|%s|" % json.dumps(v, sort_keys=True).replace("|", "/")
        out.append(r"\item \texttt{%s}: %s" % (k.replace("_", r"\_"), body))
    out.append(r"\end{itemize}")
    return "\n".join(out)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    cfg = _config_path(argv)
    try:
        if cfg is not None:
            _apply_config(cfg, leaves, argv)
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print("hopfweil: error: %s" % exc, file=sys.stderr)
        return 2
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        results, checks = args.handler(args)
    except SystemExit as exc:
        return 2 if exc.code else 0
    except ValueError as exc:
        doc = {"tool_version": __version__, "config_echo": _clean(_echo(args)),
               "results": {"error": str(exc)}, "checks": []}
        print(render(doc, getattr(args, "format", "json")), file=stdout)
        return 2
    doc = {"tool_version": __version__, "config_echo": _clean(_echo(args)),
           "results": _clean(results), "checks": _clean(checks)}
    print(render(doc, args.format), file=stdout)
    return 0 if all(c["pass"] for c in doc["checks"]) else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""
brlab command line.

    python -m integration.cli [global flags] <command> <subcommand> [options] [global flags]

Results go to standard output as canonical JSON (one line), logs to standard
error. Exit status: 0 definitive success, 1 definitive negative, 2
indeterminate (budget), 3 usage or input error.
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

# ensure project root on path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from bounds_layer.embedder.cycle_embedder import EMBEDDED, STUCK, EmbedConfig, StuckReport, embed_pipeline, stuck_diagnostics
from bounds_layer.lll.parameters import check_constants, check_lll_conditions, dependency_counts, derive_params, log_dependency_counts
from bounds_layer.lll.resampler import construct_coloring, lower_bound_certificate
from bounds_layer.ramsey.counting import (
    CountingConfig,
    certify_upper_bound,
    lower_bound_exponent,
    margin_sweep,
    size_linearity_obstruction,
    smallest_certified_r,
)
from bounds_layer.ramsey.exact_search import FOUND, NONE, br_exact, exists_good_coloring_multi
from bounds_layer.zarankiewicz.extremal import (
    bollobas_bound,
    bollobas_bound_precise,
    bound_agrees,
    naor_verstraete_bound,
    naor_verstraete_bound_precise,
    z_cycle_exact,
    z_exact,
)
from core.certificate import decode_certificate
from core.codec import canonical_json, parse_json_object, sha256_hex
from core.coloring import EdgeColoring, decode_coloring
from core.errors import BrLabError, DomainError, GraphFormatError, IntegrityError, ResourceLimitError
from core.graph import complete_bipartite, decode, even_cycle_graph, path_graph, random_tree
from core.patterns import BicliquePattern, CyclePattern, GraphPattern
from integration.cache import ExtremalCache
from integration.settings import RunSettings
from integration.verifier import verify_certificate

log = logging.getLogger("integration.cli")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INDETERMINATE = 2
EXIT_USAGE = 3

Result = Tuple[Dict[str, Any], int]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # exact option names only: "--n" must not match "--node-limit"
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunManifest:
    subcommand: str
    argv: List[str]
    seed: int
    budgets: dict
    wall_time: float
    digest: str

    def to_json(self) -> dict:
        return asdict(self)


# =======================
# Input helpers
# =======================
def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {what} file {path}: {e}")


def _graph(path: str):
    return decode(_read(path, "graph"))


def _coloring(path: str) -> EdgeColoring:
    return decode_coloring(_read(path, "coloring"))


def _cache(args, settings: RunSettings) -> Optional[ExtremalCache]:
    if args.no_cache or not settings.cache_path:
        return None
    return ExtremalCache(settings.cache_path)


def _with_cert(out: dict, cert, key: str = "certificate") -> dict:
    out[key] = cert.to_json() if cert is not None else None
    if cert is not None:
        out["certificate_digest"] = cert.digest()
    return out


# =======================
# gen
# =======================
def cmd_gen(args, settings: RunSettings) -> Result:
    rng = np.random.default_rng(settings.seed)
    kind = args.gen_kind
    if kind == "complete":
        return complete_bipartite(args.a, args.b).to_json(), EXIT_OK
    if kind == "path":
        return path_graph(args.edges).to_json(), EXIT_OK
    if kind == "cycle":
        return even_cycle_graph(args.length).to_json(), EXIT_OK
    if kind == "tree":
        return random_tree(args.m, rng).to_json(), EXIT_OK
    if kind == "matching-coloring":
        return EdgeColoring.random_matching_coloring(args.N, rng).to_json(), EXIT_OK
    return EdgeColoring.constant(args.N, args.colors, args.color).to_json(), EXIT_OK


# =======================
# pattern
# =======================
def cmd_pattern(args, settings: RunSettings) -> Result:
    host = _graph(args.host)
    if args.kind == "biclique":
        pattern = BicliquePattern(args.s)
    elif args.kind == "cycle":
        if args.length % 2:
            raise DomainError(f"cycle length must be even, got {args.length}")
        pattern = CyclePattern(args.length // 2)
    else:
        if not args.pattern:
            raise UsageError("--pattern FILE is required for --kind graph")
        pattern = GraphPattern(_graph(args.pattern))
    w = pattern.find(host)
    out = {"pattern": pattern.describe(), "found": w is not None, "witness": w.to_json() if w is not None else None}
    return out, EXIT_OK if w is not None else EXIT_NEGATIVE


# =======================
# z
# =======================
def cmd_z(args, settings: RunSettings) -> Result:
    if args.z_kind == "bound":
        if (args.s is None) == (args.t is None):
            raise UsageError("give exactly one of --s or --t")
        if args.s is not None:
            fast, precise = bollobas_bound(args.r, args.s), bollobas_bound_precise(args.r, args.s)
            name = f"K{args.s},{args.s}"
        else:
            fast, precise = naor_verstraete_bound(args.r, args.t), naor_verstraete_bound_precise(args.r, args.t)
            name = f"C{2 * args.t}"
        out = {"r": args.r, "pattern": name, "bound": fast, "precise": str(precise), "agrees": bound_agrees(fast, precise)}
        return out, EXIT_OK

    budget = settings.budget(settings.z_max_side)
    cache = _cache(args, settings)
    if args.z_kind == "exact":
        record = z_exact(args.r, args.s, budget, cache)
    else:
        record = z_cycle_exact(args.r, args.t, budget, cache)
    out = record.to_json()
    out["pattern_name"] = record.pattern.describe()
    _with_cert(out, record.certificate(seed=settings.seed, stamp=args.stamp))
    return out, EXIT_OK if record.exhausted else EXIT_INDETERMINATE


# =======================
# br
# =======================
def cmd_br(args, settings: RunSettings) -> Result:
    kind = args.br_kind
    if kind == "exact":
        budget = settings.budget(args.nmax or settings.ramsey_max_side)
        res = br_exact(_graph(args.red), _graph(args.blue), budget)
        out = res.to_json()
        _with_cert(out, res.certificate(seed=settings.seed, stamp=args.stamp))
        return out, EXIT_OK if res.determined else EXIT_INDETERMINATE
    if kind == "multi":
        budget = settings.budget(args.N)
        outcome = exists_good_coloring_multi(args.t, args.k, args.n, args.N, budget)
        code = {FOUND: EXIT_OK, NONE: EXIT_NEGATIVE}.get(outcome.status, EXIT_INDETERMINATE)
        return outcome.to_json(), code
    if kind == "upper":
        cfg = CountingConfig(n=args.n, t=args.t, k=args.k, c=args.c, mode=args.mode)
        budget = settings.budget(settings.z_max_side)
        cache = _cache(args, settings)
        if args.r is not None:
            res = certify_upper_bound(cfg, args.r, budget, cache)
        else:
            res = smallest_certified_r(cfg, args.r_max, budget, cache)
            if res is None:
                return {"cfg": cfg.to_json(), "r_max": args.r_max, "certified": False, "status": "not-certified"}, EXIT_NEGATIVE
        out = _with_cert(res.to_json(), res.certificate(seed=settings.seed, stamp=args.stamp))
        code = {"certified": EXIT_OK, "not-certified": EXIT_NEGATIVE}.get(res.status, EXIT_INDETERMINATE)
        return out, code
    if kind == "margin":
        rows = margin_sweep(args.t, args.k, args.c, args.n)
        return {"t": args.t, "k": args.k, "c": args.c, "rows": rows}, EXIT_OK
    obstructed = size_linearity_obstruction(args.p, args.q)
    out = {"p": args.p, "q": args.q, "obstructed": obstructed}
    if args.p >= 3 and args.q >= 2:
        out["lower_bound_exponent"] = lower_bound_exponent(args.p, args.q)
    return out, EXIT_OK if obstructed else EXIT_NEGATIVE


# =======================
# lll
# =======================
def cmd_lll(args, settings: RunSettings) -> Result:
    kind = args.lll_kind
    if kind == "check":
        params = derive_params(args.p, args.q, args.c1, args.c2, args.C4, args.N)
        gate = check_constants(args.c1, args.c2, args.C4)
        res = check_lll_conditions(params, args.original, settings.exact_digits)
        res["constants"] = gate
        return res, EXIT_OK if res.get("verified") else EXIT_NEGATIVE
    if kind == "counts":
        out = {"p": args.p, "n": args.n, "N": args.N, "log": log_dependency_counts(args.p, args.n, args.N, settings.exact_digits)}
        if out["log"]["exact"]:
            out["counts"] = dependency_counts(args.p, args.n, args.N).to_json()
        return out, EXIT_OK
    if kind == "construct":
        g = _graph(args.pattern)
        budget = args.budget if args.budget is not None else settings.resample_budget
        report = construct_coloring(g, args.N, args.n, args.red_prob, settings.seed, budget)
        out = _with_cert(report.to_json(), report.certificate(stamp=args.stamp))
        return out, EXIT_OK if report.succeeded else EXIT_INDETERMINATE
    g = _graph(args.pattern)
    cert = lower_bound_certificate(g, args.n, _coloring(args.coloring), settings.seed, args.stamp)
    return _with_cert({"certified": cert is not None}, cert), EXIT_OK if cert is not None else EXIT_NEGATIVE


# =======================
# embed
# =======================
def cmd_embed(args, settings: RunSettings) -> Result:
    c = _coloring(args.coloring)
    if args.embed_kind == "run":
        g = _graph(args.target)
        config = EmbedConfig.from_target(
            g,
            args.t,
            c0=args.c0,
            phase1=not args.no_phase1,
            phase1_node_budget=settings.phase1_node_budget,
            phase1_max_side=settings.phase1_max_side,
            prune=not args.no_prune,
        )
        report = embed_pipeline(c, g, args.t, config)
        out = report.to_json()
        cert = report.embedding.certificate(c, g, args.t, settings.seed, args.stamp) if report.embedded else None
        _with_cert(out, cert)
        if report.status == EMBEDDED:
            return out, EXIT_OK
        return out, EXIT_INDETERMINATE if report.status == STUCK else EXIT_NEGATIVE
    obj = parse_json_object(_read(args.report, "report"), "report")
    rep = StuckReport.from_json(obj.get("stuck", obj))
    config = EmbedConfig(t=rep.t, m=rep.m, prune=rep.pruned)
    return stuck_diagnostics(rep, c, config), EXIT_OK


# =======================
# verify
# =======================
def cmd_verify(args, settings: RunSettings) -> Result:
    text = _read(args.certificate, "certificate")
    obj = parse_json_object(text, "certificate")
    cert = decode_certificate(canonical_json(obj.get("certificate", obj)))
    budget = settings.budget(max(settings.z_max_side, settings.ramsey_max_side)) if args.recheck else None
    report = verify_certificate(cert, budget)
    out = report.to_json()
    out["digest"] = cert.digest()
    return out, EXIT_OK if report.ok else EXIT_NEGATIVE


# =======================
# Parser
# =======================
def _global_flags(p: argparse.ArgumentParser, suppress: bool = False):
    """Flags accepted before the command and again after the subcommand."""
    extra = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--threads", type=int, help="worker processes for exact searches", **extra)
    p.add_argument("--seed", type=int, help="seed for every random choice", **extra)
    p.add_argument("--node-limit", type=int, dest="node_limit", help="search nodes per partition", **extra)
    p.add_argument("--time-limit", type=float, dest="time_limit", help="wall-clock seconds per search", **extra)
    p.add_argument("--z-max-side", type=int, dest="z_max_side", help="largest r for exact Zarankiewicz searches", **extra)
    p.add_argument("--config", help="JSON settings file (default config/defaults.json)", **extra)
    p.add_argument("--no-cache", action="store_true", dest="no_cache", help="do not read or write the extremal cache", **extra)
    p.add_argument("--stamp", action="store_true", help="add a creation time to certificates", **extra)
    p.add_argument("--manifest", help="write a run manifest to this file", **extra)
    p.add_argument("--verbose", "-v", action="store_true", **extra)
    p.add_argument("--quiet", "-q", action="store_true", **extra)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="brlab", description="Bipartite Ramsey certificates toolkit")
    _global_flags(p)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)

    def leaf(subparsers, name: str, **kwargs) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, parents=[common], **kwargs)

    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate graphs and colorings")
    gsub = gen.add_subparsers(dest="gen_kind", required=True)
    x = leaf(gsub, "complete")
    x.add_argument("--a", type=int, required=True)
    x.add_argument("--b", type=int, required=True)
    leaf(gsub, "path").add_argument("--edges", type=int, required=True)
    leaf(gsub, "cycle").add_argument("--length", type=int, required=True)
    leaf(gsub, "tree").add_argument("--m", type=int, required=True)
    leaf(gsub, "matching-coloring").add_argument("--N", type=int, required=True)
    x = leaf(gsub, "constant-coloring")
    x.add_argument("--N", type=int, required=True)
    x.add_argument("--colors", type=int, default=2)
    x.add_argument("--color", type=int, default=0)
    gen.set_defaults(handler=cmd_gen)

    pat = sub.add_parser("pattern", help="pattern search in a host graph")
    psub = pat.add_subparsers(dest="pattern_kind", required=True)
    x = leaf(psub, "find")
    x.add_argument("--host", required=True)
    x.add_argument("--kind", choices=["biclique", "cycle", "graph"], required=True)
    x.add_argument("--s", type=int, default=2)
    x.add_argument("--length", type=int, default=4)
    x.add_argument("--pattern")
    pat.set_defaults(handler=cmd_pattern)

    z = sub.add_parser("z", help="Zarankiewicz numbers and bounds")
    zsub = z.add_subparsers(dest="z_kind", required=True)
    x = leaf(zsub, "exact")
    x.add_argument("--r", type=int, required=True)
    x.add_argument("--s", type=int, required=True)
    x = leaf(zsub, "cycle")
    x.add_argument("--r", type=int, required=True)
    x.add_argument("--t", type=int, required=True)
    x = leaf(zsub, "bound")
    x.add_argument("--r", type=int, required=True)
    x.add_argument("--s", type=int)
    x.add_argument("--t", type=int)
    z.set_defaults(handler=cmd_z)

    br = sub.add_parser("br", help="bipartite Ramsey numbers")
    bsub = br.add_subparsers(dest="br_kind", required=True)
    x = leaf(bsub, "exact")
    x.add_argument("--red", "--g1", dest="red", required=True, help="graph forbidden in red")
    x.add_argument("--blue", "--g2", dest="blue", required=True, help="graph forbidden in blue")
    x.add_argument("--nmax", type=int, help="largest host side to search")
    x = leaf(bsub, "multi")
    x.add_argument("--t", type=int, required=True)
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--N", type=int, required=True)
    x = leaf(bsub, "upper")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--t", type=int, default=2)
    x.add_argument("--k", type=int, default=1)
    x.add_argument("--c", type=float, default=1.0)
    x.add_argument("--mode", choices=["exact", "bound"], default="exact")
    x.add_argument("--r", type=int)
    x.add_argument("--r-max", type=int, dest="r_max", default=6)
    x = leaf(bsub, "margin")
    x.add_argument("--t", type=int, default=2)
    x.add_argument("--k", type=int, default=1)
    x.add_argument("--c", type=float, default=1.0)
    x.add_argument("--n", type=int, nargs="+", required=True)
    x = leaf(bsub, "size-linear")
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--q", type=int, required=True)
    br.set_defaults(handler=cmd_br)

    lll = sub.add_parser("lll", help="Local Lemma lower bounds")
    lsub = lll.add_subparsers(dest="lll_kind", required=True)
    x = leaf(lsub, "check")
    for name in ("--p", "--q", "--N"):
        x.add_argument(name, type=int, required=True)
    for name in ("--c1", "--c2", "--C4"):
        x.add_argument(name, type=float, required=True)
    x.add_argument("--original", action="store_true", help="evaluate the unsimplified conditions")
    x = leaf(lsub, "counts")
    for name in ("--p", "--n", "--N"):
        x.add_argument(name, type=int, required=True)
    x = leaf(lsub, "construct")
    x.add_argument("--pattern", required=True)
    x.add_argument("--N", type=int, required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--red-prob", type=float, dest="red_prob", required=True)
    x.add_argument("--budget", type=int)
    x = leaf(lsub, "certify")
    x.add_argument("--pattern", required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--coloring", required=True)
    lll.set_defaults(handler=cmd_lll)

    emb = sub.add_parser("embed", help="greedy blue embedding")
    esub = emb.add_subparsers(dest="embed_kind", required=True)
    x = leaf(esub, "run")
    x.add_argument("--coloring", required=True)
    x.add_argument("--target", required=True)
    x.add_argument("--t", type=int, default=2)
    x.add_argument("--c0", type=float, default=0.25)
    x.add_argument("--no-phase1", action="store_true", dest="no_phase1")
    x.add_argument("--no-prune", action="store_true", dest="no_prune")
    x = leaf(esub, "diagnose")
    x.add_argument("--report", required=True)
    x.add_argument("--coloring", required=True)
    emb.set_defaults(handler=cmd_embed)

    ver = leaf(sub, "verify", help="re-check a certificate")
    ver.add_argument("--certificate", required=True)
    ver.add_argument("--recheck", action="store_true", help="re-run exhaustive searches behind refutation claims")
    ver.set_defaults(handler=cmd_verify)
    return p


def _settings(args) -> RunSettings:
    settings = RunSettings.load(args.config)
    for key in ("threads", "seed", "node_limit", "time_limit", "z_max_side"):
        settings.set(key, getattr(args, key))
    return settings


def _subcommand(args) -> str:
    inner = getattr(args, f"{args.command}_kind", None)
    return f"{args.command} {inner}" if inner else args.command


def dispatch(argv: Optional[List[str]] = None, out=None) -> int:
    """Run one command; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)

    started = time.time()
    settings: Optional[RunSettings] = None
    try:
        settings = _settings(args)
        handler: Callable[..., Result] = args.handler
        result, code = handler(args, settings)
    except (UsageError, GraphFormatError, DomainError, FileNotFoundError) as e:
        log.error(f"[CLI] {e}")
        result, code = {"error": type(e).__name__, "message": str(e)}, EXIT_USAGE
    except ResourceLimitError as e:
        log.error(f"[CLI] {e}")
        result, code = {"error": "ResourceLimitError", "flag": e.flag, "message": str(e)}, EXIT_INDETERMINATE
    except IntegrityError as e:
        log.error(f"[CLI] {e}")
        result, code = {"error": "IntegrityError", "message": str(e)}, EXIT_NEGATIVE
    except (BrLabError, ValueError) as e:
        log.error(f"[CLI] {e}")
        result, code = {"error": type(e).__name__, "message": str(e)}, EXIT_USAGE

    text = canonical_json(result)
    out.write(text + "\n")
    out.flush()

    if args.manifest:
        seed = settings.seed if settings is not None else None
        budgets = settings.to_json() if settings is not None else {}
        manifest = RunManifest(_subcommand(args), argv, seed, budgets, round(time.time() - started, 6), sha256_hex(text))
        Path(args.manifest).write_text(canonical_json(manifest.to_json()) + "\n", encoding="utf-8")
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

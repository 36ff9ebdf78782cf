"""Command-line front end.

Every command prints a report (text by default, ``--json`` or ``--csv`` on
request).  JSON reports carry the seed, tool version, wall-clock time and
a claim label for each checked statement.

Exit codes: 0 ok, 1 verification mismatch, 2 usage error, 3 inconclusive
(resampling exhausted or no usable specialization).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from . import __version__
from .config import ConfigError, RunConfig, load_config

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

VERIFY_TARGETS = (
    "invariants",
    "multiplicities",
    "matrix",
    "growth",
    "stability-certificate",
    "invariant-finder",
    "singularities",
)


class UsageError(Exception):
    pass


def _q(x) -> str:
    """Exact rendering "p/q" (integers stay plain)."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _parse_q(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational: {text!r}") from None


def _parse_point(text: str, n: int = 4) -> List[Fraction]:
    parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
    if len(parts) != n:
        raise UsageError(f"expected {n} comma-separated rationals, got {text!r}")
    return [_parse_q(p.strip()) for p in parts]


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _q(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


class Report:
    """Collects checks and tables for one command."""

    def __init__(self, command: str, cfg: RunConfig):
        self.command = command
        self.cfg = cfg
        self.start = time.perf_counter()
        self.checks: List[dict] = []
        self.data: Dict[str, object] = {}
        self.table: tuple | None = None
        self.lines: List[str] = []
        self.inconclusive = False

    def check(self, claim: str, ok: bool, expected=None, got=None, provenance: str = "derived"):
        self.checks.append(
            {"claim": claim, "pass": bool(ok), "expected": _jsonable(expected), "got": _jsonable(got), "provenance": provenance}
        )
        self.lines.append(f"[{'PASS' if ok else 'FAIL'}] {claim}" + ("" if ok else f": expected {_jsonable(expected)}, got {_jsonable(got)}"))

    def say(self, line: str = ""):
        self.lines.append(line)

    @property
    def exit_code(self) -> int:
        if self.inconclusive:
            return EXIT_INCONCLUSIVE
        return EXIT_OK if all(c["pass"] for c in self.checks) else EXIT_MISMATCH

    def to_json(self) -> dict:
        return {
            "tool": "superqrt",
            "version": __version__,
            "command": self.command,
            "seed": self.cfg.seed,
            "config": self.cfg.to_dict(),
            "wall_clock_seconds": round(time.perf_counter() - self.start, 3),
            "status": {0: "ok", 1: "mismatch", 3: "inconclusive"}[self.exit_code],
            "checks": self.checks,
            "result": _jsonable(self.data),
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            if self.table:
                header, rows = self.table
                w.writerow(header)
                for r in rows:
                    w.writerow([_q(x) for x in r])
            else:
                w.writerow(["claim", "pass", "expected", "got", "provenance"])
                for c in self.checks:
                    w.writerow([c["claim"], c["pass"], json.dumps(c["expected"]), json.dumps(c["got"]), c["provenance"]])
            return buf.getvalue()
        head = f"superqrt {__version__} | {self.command} | seed {self.cfg.seed}"
        tail = f"({time.perf_counter() - self.start:.2f} s)"
        return "\n".join([head] + self.lines + [tail]) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_iterate(args, cfg: RunConfig, rep: Report):
    from .dynamics import AffinePoint4, PoleError, apply_phi, eval_invariants

    pt = AffinePoint4(tuple(_parse_point(args.point)), cfg.h_value)
    base = eval_invariants(pt)
    rows = []
    rep.say("step | x0, x1, x2, x3 | I1 | I2 | drift")
    cur = pt
    for k in range(cfg.n_max + 1):
        if k:
            try:
                cur = apply_phi(cur)
            except PoleError as exc:
                rep.say(f"pole at step {k} ({exc.coordinate}): {exc}")
                rep.data["pole"] = {"step": k, "coordinate": exc.coordinate}
                break
        i1, i2 = eval_invariants(cur)
        drift = (i1 - base[0], i2 - base[1])
        rows.append([k, *cur.coords, i1, i2, drift[0], drift[1]])
        rep.say(f"{k} | {', '.join(_q(c) for c in cur.coords)} | {_q(i1)} | {_q(i2)} | {_q(drift[0])}, {_q(drift[1])}")
    header = ["step", "x0", "x1", "x2", "x3", "I1", "I2", "dI1", "dI2"]
    rep.table = (header, rows)
    rep.data["orbit"] = [dict(zip(header, r)) for r in rows]
    rep.check("invariants-constant-along-orbit", all(r[7] == 0 and r[8] == 0 for r in rows), 0, None)


def _phi_degrees(cfg: RunConfig):
    from .degrees import phi_bidegrees

    return phi_bidegrees(cfg.n_max, cfg.h_value, cfg.trials, cfg.seed, cfg.height, cfg.retries)


def cmd_degrees(args, cfg: RunConfig, rep: Report):
    run = _phi_degrees(cfg)
    header = ["n", "a", "b", "c", "d", "proj_ab", "proj_cd"]
    rows = [[n, *d, *p] for n, (d, p) in enumerate(zip(run.degrees, [(p[0], p[2]) for p in run.projective]))]
    rep.table = (header, rows)
    rep.say("n | bidegree of (x0,x1)-part | bidegree of (x2,x3)-part")
    for n, d in enumerate(run.degrees):
        rep.say(f"{n} | ({d[0]}, {d[1]}) | ({d[2]}, {d[3]})")
    rep.data["bidegrees"] = run.degrees
    rep.data["projective"] = run.projective
    rep.data["trial_disagreements"] = run.disagreements
    rep.check("degree-trials-agree", not run.disagreements, [], run.disagreements)


def cmd_psi_degrees(args, cfg: RunConfig, rep: Report):
    from .degrees import psi_run, quadratic_fit, quasi_quadratic_fit

    n = args.n if args.n is not None else cfg.psi_n_max
    run = psi_run(cfg.psi_i2_value, cfg.h_value, n, cfg.trials, cfg.seed, cfg.height)
    comp = [d[0] for d in run.degrees]
    proj = [d[0] for d in run.projective]
    rep.table = (["n", "degree", "projective_degree"], [[k, a, b] for k, (a, b) in enumerate(zip(comp, proj))])
    rep.say(f"I2 = {_q(cfg.psi_i2_value)}, h = {_q(cfg.h_value)}")
    rep.say("degrees:            " + ", ".join(map(str, comp)))
    rep.say("projective degrees: " + ", ".join(map(str, proj)))
    fit = quadratic_fit(comp) if len(comp) >= 6 else None
    qfit = quasi_quadratic_fit(proj) if len(proj) >= 6 else None
    rep.data.update({"degrees": comp, "projective_degrees": proj})
    if fit is not None:
        rep.data["fit"] = fit.__dict__
        rep.data["projective_fit"] = qfit.__dict__
        rep.say(f"quadratic: {fit.eventually_quadratic}, leading coefficient {_q(fit.leading_coefficient)}, onset {fit.onset}")
        rep.check("psi-degrees-eventually-quadratic", fit.eventually_quadratic, True, fit.eventually_quadratic)


def _matrix(cfg: RunConfig, compute: bool):
    from .picard import build_action_matrix

    return build_action_matrix(compute=compute, seed=cfg.seed, strict=False)


def cmd_picard_matrix(args, cfg: RunConfig, rep: Report):
    from .divisor import BASIS

    am = _matrix(cfg, not args.tabulated)
    m = am.matrix
    rep.table = (["row"] + list(BASIS), [[BASIS[i]] + [int(x) for x in m[i]] for i in range(len(BASIS))])
    rep.data.update(am.to_json())
    for b in BASIS:
        rep.say(f"phi^*({b}) = {am.images[b]}    [{am.provenance[b]}]")
    rep.check("pullback-rows-consistent", all(p != "computed" for p in am.provenance.values()), "computed rows equal tabulated rows", am.provenance)


def cmd_growth(args, cfg: RunConfig, rep: Report):
    from .picard import REFERENCE_JORDAN, growth_class

    am = _matrix(cfg, not args.tabulated)
    g = growth_class(am)
    rep.data.update(g.to_json())
    rep.data["reference_jordan_multiset"] = [list(x) for x in REFERENCE_JORDAN]
    rep.say(f"charpoly factors: " + ", ".join(f"{lab}^{mult}" for lab, _, mult in g.factors))
    rep.say(f"jordan blocks: {g.jordan}")
    rep.say(f"growth: {g.growth}")
    rep.check("spectral-radius-one", g.spectral_radius_one, True, g.spectral_radius_one)
    rep.check("max-unit-circle-jordan-block", g.max_unit_block == 3, 3, g.max_unit_block)
    rep.check("growth-quadratic", g.growth == "polynomial degree 2", "polynomial degree 2", g.growth)
    rep.check("jordan-blocks-total-19", g.total_block_size() == 19, 19, g.total_block_size())
    rep.check("jordan-multiset-vs-reference", g.jordan_multiset() == REFERENCE_JORDAN, REFERENCE_JORDAN, g.jordan_multiset(), "both")


def cmd_track(args, cfg: RunConfig, rep: Report):
    from .singularity import AMBIENTS, PRESETS, leading_matches, run_preset

    key = args.preset
    if key not in PRESETS:
        raise UsageError(f"unknown preset {key!r}; choose from {sorted(PRESETS)}")
    if args.ambient and args.ambient not in AMBIENTS:
        raise UsageError(f"unknown ambient {args.ambient!r}; choose from {AMBIENTS}")
    p = PRESETS[key]
    seeds = [cfg.seed + k for k in range(cfg.trials)]
    steps = args.n if args.n is not None else p.steps
    results = run_preset(key, seeds, args.ambient, steps)
    native = args.ambient in (None, p.ambient)
    out = []
    for germ, tr in results:
        rep.say(f"seed {germ.seed}: constants {{{', '.join(f'{k}={_q(v)}' for k, v in germ.constants.items())}}}, h = {_q(tr.h_value)}")
        for k, st in enumerate(tr.steps):
            lead = ", ".join("-" if c is None else _q(c) for c in st.leading)
            rep.say(f"  step {k}: orders {st.orders}  leading ({lead})  dim {st.dimension}")
        rep.say(f"  -> {tr.classification}" + (f" (step {tr.period})" if tr.period else ""))
        out.append({
            "seed": germ.seed,
            "constants": germ.constants,
            "h": tr.h_value,
            "orders": [list(o) for o in tr.orders],
            "dimensions": tr.dimensions,
            "classification": tr.classification,
            "period": tr.period,
        })
        if native:
            bad = leading_matches(tr, germ, p.expected_leading)
            rep.check(f"{key}-seed{germ.seed}-leading-terms", not bad, [], bad, "both")
            n_exp = min(len(p.expected_orders), len(tr.orders))
            rep.check(f"{key}-seed{germ.seed}-orders", tr.orders[:n_exp] == list(p.expected_orders[:n_exp]),
                      [list(o) for o in p.expected_orders[:n_exp]], [list(o) for o in tr.orders[:n_exp]], "both")
            rep.check(f"{key}-seed{germ.seed}-classification", (tr.classification, tr.period) == (p.expected_class, p.expected_period),
                      [p.expected_class, p.expected_period], [tr.classification, tr.period], "both")
    rep.data["preset"] = key
    rep.data["ambient"] = args.ambient or p.ambient
    rep.data["traces"] = out
    rep.check(f"{key}-seeds-agree", len({(o["classification"], o["period"], str(o["orders"])) for o in out}) == 1, "identical", None)


def cmd_multiplicities(args, cfg: RunConfig, rep: Report):
    from .tower import NAMED_HYPERSURFACES, TABULATED_MULTIPLICITIES, class_of_hypersurface, multiplicities

    if args.f in NAMED_HYPERSURFACES:
        expr, bideg = NAMED_HYPERSURFACES[args.f]
        expected = TABULATED_MULTIPLICITIES.get(args.f)
    elif args.f in cfg.candidates:
        expr, bideg, expected = cfg.candidates[args.f], None, None
    else:
        expr, bideg, expected = args.f, None, None
    if args.bidegree:
        try:
            bideg = tuple(int(x) for x in args.bidegree.split(","))
        except ValueError:
            raise UsageError("--bidegree takes 'a,b'") from None
    from .tower import as_base_rf

    try:
        rf = as_base_rf(expr)
    except Exception as exc:  # parse errors are usage errors
        raise UsageError(f"cannot read {expr!r}: {exc}") from None
    kw = {"method": args.method, "trials": cfg.trials, "seed": cfg.seed}
    if rf.den.degree() == 0 and bideg is not None:
        kw["bidegree"] = bideg
    mults = multiplicities(rf, **kw)
    rep.table = (["E"] + [f"E{i}" for i in range(1, 18)], [["mult"] + list(mults)])
    rep.say(f"f = {expr}")
    rep.say("multiplicities: " + ", ".join(map(str, mults)))
    rep.data.update({"f": expr, "multiplicities": mults, "method": args.method})
    if bideg is not None:
        _, proper = class_of_hypersurface(expr, bideg, **{k: v for k, v in kw.items() if k != "bidegree"})
        rep.say(f"proper transform class: {proper}")
        rep.data["proper_class"] = str(proper)
    if expected is not None:
        rep.check(f"multiplicities-{args.f}", tuple(mults) == tuple(expected), expected, mults, "both")


def cmd_find_invariants(args, cfg: RunConfig, rep: Report):
    from .divisor import parse_class
    from .invariants import find_invariants, literal_reading_audit
    from .picard import I1_CLASS, I2_CLASS

    named = {"I1": (I1_CLASS, ("1", "I1")), "I2": (I2_CLASS, ("1", "I1", "I2"))}
    if args.target in named:
        target, refs = named[args.target]
    else:
        try:
            target = parse_class(args.target)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        refs = ("1", "I1", "I2")
    constraint, system, kernel, report = find_invariants(target, refs)
    polys = kernel.polynomials()
    rep.say(f"target class {target}")
    rep.say("multiplicities " + ", ".join(map(str, constraint.multiplicities)))
    rep.say(f"{len(system.rows)} rows, rank {kernel.rank}, kernel dimension {kernel.dimension}")
    for p in polys:
        rep.say(f"  {p}")
    rep.data.update({
        "target": str(target),
        "multiplicities": constraint.multiplicities,
        "rows": len(system.rows),
        "rank": kernel.rank,
        "kernel_dimension": kernel.dimension,
        "kernel": [str(p) for p in polys],
        "match": report.to_json(),
    })
    if report.matched:
        for j, row in enumerate(report.coefficients):
            rep.say(f"  K{j} = " + " + ".join(f"({c})*{r}" for c, r in zip(row, refs) if c))
    if args.target in named:
        rep.check(f"kernel-span-{args.target}", report.matched, list(refs), report.message, "both")
    if args.literal:
        audit = literal_reading_audit(target)
        rep.data["literal_reading_audit"] = audit
        rep.say(f"total-degree ansatz ({audit['monomials']} monomials): kernel dimension {audit['kernel_dimension']}")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_invariants(cfg, rep):
    from .dynamics import I1, I2, PHI, check_inverse_identity, check_invariant_identity

    rep.check("phi-preserves-I1", check_invariant_identity(PHI, I1), True, None, "reference")
    rep.check("phi-preserves-I2", check_invariant_identity(PHI, I2), True, None, "reference")
    rep.check("phi-inverse-composes-to-identity", check_inverse_identity(), True, None, "reference")


def _verify_multiplicities(cfg, rep):
    from .divisor import parse_class
    from .tower import (
        NAMED_HYPERSURFACES,
        TABULATED_MULTIPLICITIES,
        TABULATED_PROPER_CLASSES,
        as_base_rf,
        class_of_hypersurface,
        multiplicities,
    )

    for name, expected in TABULATED_MULTIPLICITIES.items():
        expr, bideg = NAMED_HYPERSURFACES[name]
        rf = as_base_rf(expr)
        got = multiplicities(rf, bidegree=bideg) if rf.den.degree() == 0 else multiplicities(rf)
        rep.check(f"multiplicities-{name}", tuple(got) == expected, expected, got, "both")
    for name, text in TABULATED_PROPER_CLASSES.items():
        expr, bideg = NAMED_HYPERSURFACES[name]
        _, proper = class_of_hypersurface(expr, bideg)
        rep.check(f"proper-class-{name}", proper == parse_class(text), text, str(proper), "both")


def _verify_matrix(cfg, rep):
    from .divisor import BASIS
    from .picard import build_action_matrix, tabulated_images

    am = build_action_matrix(compute=True, seed=cfg.seed, strict=False)
    table = tabulated_images()
    for b in BASIS:
        rep.check(f"pullback-{b}", am.images[b] == table[b], str(table[b]), str(am.images[b]), am.provenance[b])
    rep.data["matrix"] = am.to_json()


def _verify_growth(cfg, rep):
    args = argparse.Namespace(tabulated=False)
    cmd_growth(args, cfg, rep)


def _verify_stability(cfg, rep):
    from .picard import build_action_matrix, predicted_degrees

    am = build_action_matrix(compute=False)
    pred = predicted_degrees(am, cfg.n_max)
    run = _phi_degrees(cfg)
    for n, d in enumerate(run.degrees):
        want = (*pred["Ha"][n], *pred["Hb"][n])
        rep.check(f"bidegree-phi^{n}", tuple(d) == want, want, d)
    rep.data["measured"] = run.degrees
    rep.data["predicted"] = pred


def _verify_invariant_finder(cfg, rep):
    from .invariants import find_invariants, kernel_is_invariant
    from .picard import I1_CLASS, I2_CLASS

    for name, target, refs in (("I1", I1_CLASS, ("1", "I1")), ("I2", I2_CLASS, ("1", "I1", "I2"))):
        _, _, kernel, report = find_invariants(target, refs)
        rep.check(f"kernel-dimension-{name}", kernel.dimension == len(refs), len(refs), kernel.dimension, "reference")
        rep.check(f"kernel-span-{name}", report.matched, list(refs), report.message, "reference")
        rep.check(f"kernel-invariant-{name}", kernel_is_invariant(kernel), True, None)
        rep.data[name] = report.to_json()


def _verify_singularities(cfg, rep):
    from .singularity import PRESETS, run_preset

    for key, p in PRESETS.items():
        args = argparse.Namespace(preset=key, ambient=None, n=None)
        sub = Report("track", cfg)
        cmd_track(args, cfg, sub)
        rep.checks += sub.checks
        rep.data[key] = sub.data
    # on P2 x P2 the (P1)^4 patterns of (6) and (7) leave no contracted hypersurface
    for key in ("seq6", "seq7"):
        res = run_preset(key, [cfg.seed], "P2xP2")
        cls = res[0][1].classification
        rep.check(f"{key}-absent-on-P2xP2", cls == "unresolved", "unresolved", cls, "reference")


_VERIFY: Dict[str, Callable] = {
    "invariants": _verify_invariants,
    "multiplicities": _verify_multiplicities,
    "matrix": _verify_matrix,
    "growth": _verify_growth,
    "stability-certificate": _verify_stability,
    "invariant-finder": _verify_invariant_finder,
    "singularities": _verify_singularities,
}


def cmd_verify(args, cfg: RunConfig, rep: Report):
    targets = VERIFY_TARGETS if args.target == "all" else (args.target,)
    for t in targets:
        rep.say(f"== {t}")
        _VERIFY[t](cfg, rep)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h", help="parameter h as p/q")
    common.add_argument("--n", type=int, help="number of steps / maximal iterate")
    common.add_argument("--trials", type=int, help="number of random lines, germs or seeds")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="JSON file with run defaults")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report")
    fmt.add_argument("--csv", action="store_true", help="CSV table")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="superqrt", description="Exact experiments with a four-dimensional QRT-type map.")
    p.add_argument("--version", action="version", version=f"superqrt {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("iterate", parents=[common], help="orbit with invariant values")
    s.add_argument("point", help="x0,x1,x2,x3 as rationals")
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("degrees", parents=[common], help="bidegrees of phi^n on random lines")
    s.set_defaults(func=cmd_degrees)

    s = sub.add_parser("psi-degrees", parents=[common], help="degrees of the reduced map on a level set of I2")
    s.add_argument("--i2", help="value of I2 as p/q")
    s.set_defaults(func=cmd_psi_degrees)

    for name, fn, hlp in (("picard-matrix", cmd_picard_matrix, "pull-back action on the Picard lattice"),
                          ("growth", cmd_growth, "characteristic polynomial, Jordan blocks, growth class")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--tabulated", action="store_true", help="skip recomputation, use the stored rows")
        s.set_defaults(func=fn)

    s = sub.add_parser("verify", parents=[common], help="run a verification target")
    s.add_argument("target", choices=VERIFY_TARGETS + ("all",))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("track-singularity", parents=[common], help="trace a singularity pattern on germs")
    s.add_argument("preset", help="seq5, seq6, seq7 or seq8")
    s.add_argument("--ambient", help="(P1)^4 or P2xP2")
    s.set_defaults(func=cmd_track)

    s = sub.add_parser("multiplicities", parents=[common], help="vanishing orders along E1'..E17'")
    s.add_argument("f", help="named hypersurface (z1, x2-1, z3, I1, I2, I1-member) or an expression")
    s.add_argument("--bidegree", help="a,b (section bidegree for a polynomial)")
    s.add_argument("--method", choices=("symbolic", "sampled"), default="symbolic")
    s.set_defaults(func=cmd_multiplicities)

    s = sub.add_parser("find-invariants", parents=[common], help="solve for hypersurfaces in a divisor class")
    s.add_argument("target", help="I1, I2 or a class such as 2Ha+2Hb-E{1,2}")
    s.add_argument("--literal", action="store_true", help="also run the total-degree <= 2 ansatz")
    s.set_defaults(func=cmd_find_invariants)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    fmt = "json" if args.json else "csv" if args.csv else "text"
    try:
        if args.h is not None:
            _parse_q(args.h)
        i2 = getattr(args, "i2", None)
        if i2 is not None:
            _parse_q(i2)
        cfg = load_config(args.config, h=args.h, seed=args.seed, trials=args.trials,
                          n_max=args.n if args.command in ("iterate", "degrees", "stability-certificate", "verify") else None,
                          psi_i2=i2, psi_n_max=args.n if args.command == "psi-degrees" else None)
        rep = Report(args.command, cfg)
        args.func(args, cfg, rep)
    except (UsageError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        from .degrees import ResampleExhaustedError
        from .invariants import InconclusiveSystemError
        from .tower import InconclusiveValuationError

        if isinstance(exc, (ResampleExhaustedError, InconclusiveSystemError, InconclusiveValuationError)):
            print(f"inconclusive: {exc}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        raise
    sys.stdout.write(rep.render(fmt))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())

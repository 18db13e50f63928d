"""Command-line front end: recognition, tables, and the check suites.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.  All table
output is emitted in sorted order with rationals as num/den strings, so
repeated runs (at any thread count) are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import constraints, graphsum, igusa, jacobi, qmod
from .errors import Chi10Error
from .series import TruncatedSeries, fmt_fraction


@dataclass
class SuiteConfig:
    """Configuration of one check-suite run."""

    suite: str
    gmax: int = 4
    hmax: int = 4
    dmax: int = 4
    order: int = 8
    threads: int = 1
    fmt: str = "text"
    out: str = None


def _load_config_file(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# check suites
# ----------------------------------------------------------------------


def _suite_checks(cfg: SuiteConfig):
    """Yield (name, callable) pairs for the configured suite."""

    def igusa_cross():
        n = igusa.chi10_cross_check(cfg.hmax, cfg.dmax, 10, threads=cfg.threads)
        return f"{n} coefficients agree (product vs Hecke)"

    def kkv():
        kkv_w = igusa.reference_series("kkv", cfg.hmax, wprec=2 * cfg.gmax + 1)
        for h in range(cfg.hmax + 1):
            for g in range(cfg.gmax + 1):
                n = igusa.gw_invariant(g, h, 0, threads=cfg.threads)
                c = kkv_w.coeff((2 * g - 2, h - 1))
                expect = c if (g - 1) % 2 == 0 else -c
                if n != expect:
                    raise Chi10Error(f"KKV mismatch at (g,h)=({g},{h}): {n} vs {expect}")
        return f"N(g,h,0) matches the product for g<={cfg.gmax}, h<={cfg.hmax}"

    def yz():
        ref = igusa.reference_series("yau_zaslow", cfg.hmax + 1)
        for h in range(cfg.hmax + 1):
            n = igusa.gw_invariant(0, h, 0, threads=cfg.threads)
            if n != ref.coeff((h - 1,)):
                raise Chi10Error(f"Yau-Zaslow mismatch at h={h}")
        return f"N(0,h,0) matches 1/Delta for h<={cfg.hmax}"

    def symmetry():
        horder = min(cfg.hmax, 3)
        dorder = min(cfg.dmax, 3)
        z = igusa.z_partition(horder, dorder, 8, threads=cfg.threads)
        count = 0
        for (r, n, m), c in sorted(z.terms.items()):
            if m <= dorder and n <= horder and n >= -1 and m >= -1:
                if z.coeff((r, m, n)) != c:
                    raise Chi10Error(f"q/qt symmetry fails at {(r, n, m)}")
                count += 1
        chi = igusa.chi10_expand("product", horder, dorder, threads=cfg.threads)
        for (r, n, m), c in sorted(chi.terms.items()):
            if chi.coeff((-r, n, m)) != c:
                raise Chi10Error(f"y symmetry fails at {(r, n, m)}")
            count += 1
        for h in range(horder + 1):
            for d in range(dorder + 1):
                igusa.z_slice_basis(h, d, threads=cfg.threads)
                count += 1
        return f"{count} symmetry constraints verified"

    def properties():
        zw = igusa.z_partition_w(max(cfg.order, 8), min(cfg.dmax, 3), 2 * cfg.gmax + 2, threads=cfg.threads)
        r1 = constraints.check_property1(zw)
        if not r1.ok():
            raise Chi10Error(f"property 1 failed at {r1.witness}")
        r3 = constraints.check_property3(zw, cfg.gmax, min(cfg.dmax, 3))
        if not r3.ok():
            raise Chi10Error(f"property 3 failed at {r3.witness}")
        z = igusa.z_partition(2, max(jacobi.jacobi_dim(0, 2) + 5, 8), 14, threads=cfg.threads)
        for h in range(3):
            r2 = constraints.check_property2(z, h)
            if not r2.ok():
                raise Chi10Error(f"property 2 failed at h={h}: {r2.witness}")
        return "properties 1, 2 (h<=2), 3 verified"

    def kernel():
        res = constraints.uniqueness_kernel(2, 2, 2, fix_a000=True)
        res2 = constraints.uniqueness_kernel(2, 2, 2, fix_a000=False)
        if res.dimension != 0 or res2.dimension != 1:
            raise Chi10Error(
                f"kernel dimensions ({res.dimension}, {res2.dimension}) != (0, 1)"
            )
        return "kernel dimension 0 pinned / 1 free"

    def commutator():
        for k in range(2, 13, 2):
            for mono in qmod.qmod_basis(k):
                f = qmod.QModPolynomial({mono: 1}, k)
                n = qmod.qmod_dim(k + 2) + 6
                der = qmod.qmod_recognize(f.evaluate(n).derive("q"), k + 2)
                lhs = der.ddc2() - qmod.qmod_recognize(
                    f.ddc2().evaluate(n).derive("q"), k
                )
                rhs = f * Fraction(-2 * k)
                if not (lhs - rhs).is_zero():
                    raise Chi10Error(f"commutator fails on {f}")
        return "commutator verified on all monomials of weight <= 12"

    def graphs():
        count = 0
        for g in _small_graphs():
            a = graphsum.graph_sum_direct(g, cfg.order + 1)
            b = graphsum.graph_sum_analytic(g, cfg.order + 1)
            if not a.same_terms(b):
                raise Chi10Error(f"graph pipelines disagree on {g}")
            count += 1
        return f"{count} graphs agree on both pipelines"

    def consts():
        from .constterm import MEElement, anomaly_residue_check

        wp12 = MEElement.wp_factor({1, 2}, 1, 2, 0)
        lhs, rhs = anomaly_residue_check(wp12, cfg.order + 2)
        if not (lhs - qmod.QModPolynomial.const(-2)).is_zero():
            raise Chi10Error("anomaly sanity value is not -2")
        samples = _anomaly_samples()
        for name, F in samples:
            anomaly_residue_check(F, cfg.order + 2)
        return f"anomaly formula verified on {1 + len(samples)} samples"

    def em():
        for m in range(1, 5):
            for exps in _monomials_up_to(m, 3):
                l, r = graphsum.euler_maclaurin_check({exps: 1}, m, 7)
                if l != r:
                    raise Chi10Error(f"Euler-Maclaurin fails at {exps}")
        for m in range(1, 6):
            for (x, t, p) in graphsum.worpitzky_check(m, 8):
                if t != p:
                    raise Chi10Error(f"Worpitzky fails at m={m}, x={x}")
        return "Euler-Maclaurin and Worpitzky identities verified"

    def genus1():
        n = cfg.order + 14
        ref = igusa.reference_series("k3_genus1", n)
        delta = qmod.delta_series(n).truncate("q", n)
        pol = qmod.qmod_recognize(delta * ref["tau1_W"], 4)
        invd = delta.invert()
        lhs = pol.ddc2().evaluate(n) * invd
        rhs = (qmod.eisenstein_series(2, n) * invd).scale(40) + invd.scale(2).derive("q")
        for i in range(-1, min(lhs.prec[0], rhs.prec[0])):
            if lhs.coeff((i,)) != rhs.coeff((i,)):
                raise Chi10Error(f"genus-1 identity fails at q^{i}")
        for g in range(2, 6):
            f = igusa.reference_series("toda_fg", 12, g=g)
            pg = qmod.qmod_recognize(f["eX"], 2 * g - 2)
            if g == 2 and not (pg.ddc2() - qmod.QModPolynomial.const(Fraction(-1, 240))).is_zero():
                raise Chi10Error("genus-2 anomaly constant is not -1/240")
        return "genus-1 identity and fiber-class potentials verified"

    table = {
        "igusa-cross": igusa_cross,
        "kkv": kkv,
        "yz": yz,
        "symmetry": symmetry,
        "properties": properties,
        "kernel": kernel,
        "commutator": commutator,
        "graphs": graphs,
        "consts": consts,
        "em": em,
        "genus1": genus1,
    }
    if cfg.suite == "all":
        return list(table.items())
    return [(cfg.suite, table[cfg.suite])]


def _small_graphs():
    from .graphsum import WeightedGraph

    return [
        WeightedGraph(2, ((1, 2), (1, 2)), ((0, 0), (0, 0)), (1, 2)),
        WeightedGraph(2, ((1, 2), (1, 2)), ((1, 1), (0, 0)), (1, 2)),
        WeightedGraph(2, ((1, 2), (1, 2), (1, 2)), ((0, 0), (0, 0), (0, 0)), (2, 1)),
        WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((0, 0), (0, 0), (0, 0)), (1, 2, 3)),
        WeightedGraph(3, ((1, 2), (2, 3), (1, 3)), ((1, 0), (0, 1), (0, 0)), (2, 1, 3)),
    ]


def _anomaly_samples():
    from .constterm import MEElement

    s = []
    s.append(("c4*wp12", MEElement.wp_factor({1, 2}, 1, 2, 0) * MEElement.from_qmod({1, 2}, qmod.QModPolynomial.generator(4))))
    s.append(("wp12*wp23", MEElement.wp_factor({1, 2, 3}, 1, 2, 0) * MEElement.wp_factor({1, 2, 3}, 2, 3, 0)))
    s.append(("wp12^2", MEElement.wp_factor({1, 2}, 1, 2, 0) * MEElement.wp_factor({1, 2}, 1, 2, 0)))
    s.append(("wp12'*wp13'", MEElement.wp_factor({1, 2, 3}, 1, 2, 1) * MEElement.wp_factor({1, 2, 3}, 1, 3, 1)))
    s.append(("wp12*wp13*wp23", MEElement.wp_factor({1, 2, 3}, 1, 2, 0) * MEElement.wp_factor({1, 2, 3}, 1, 3, 0) * MEElement.wp_factor({1, 2, 3}, 2, 3, 0)))
    return s


def _monomials_up_to(nvars, degmax):
    out = []

    def rec(prefix, rest):
        if len(prefix) == nvars:
            out.append(tuple(prefix))
            return
        for d in range(rest + 1):
            rec(prefix + [d], rest - d)

    rec([], degmax)
    return out


def run_suite(cfg: SuiteConfig) -> int:
    lines = []
    status = 0
    for name, fn in _suite_checks(cfg):
        try:
            detail = fn()
            lines.append(f"PASS {name}: {detail}")
        except Chi10Error as exc:
            lines.append(f"FAIL {name}: {exc}")
            status = 1
            break
    _emit("\n".join(lines) + "\n", cfg.out)
    return status


# ----------------------------------------------------------------------
# tables
# ----------------------------------------------------------------------


def emit_table(kind, bounds, fmt="text", out=None, threads=1):
    rows = []
    if kind == "invariants":
        gmax, hmax, dmax = bounds
        header = ["g", "h", "d", "N"]
        for h in range(hmax + 1):
            for d in range(dmax + 1):
                for g in range(gmax + 1):
                    rows.append([g, h, d, fmt_fraction(igusa.gw_invariant(g, h, d, threads=threads))])
    elif kind == "exponents":
        (nmax,) = bounds
        header = ["n", "c"]
        table = igusa.borcherds_exponents(nmax)
        for n in range(-1, nmax + 1):
            rows.append([n, fmt_fraction(table(n))])
    else:
        raise Chi10Error(f"unknown table kind {kind!r}")
    if fmt == "json":
        text = json.dumps({"kind": kind, "header": header, "rows": rows}, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = ",".join(header) + "\n" + "\n".join(",".join(str(x) for x in r) for r in rows) + "\n"
    else:
        text = " ".join(header) + "\n" + "\n".join(" ".join(str(x) for x in r) for r in rows) + "\n"
    _emit(text, out)


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="chi10", description=__doc__)
    parser.add_argument("--config", help="key=value config file; flags win")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", help="write output to this file")
    parser.add_argument("--format", default="text", choices=("text", "json", "csv"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qmod", help="quasimodular ring operations")
    qs = p.add_subparsers(dest="action", required=True)
    pe = qs.add_parser("eisenstein")
    pe.add_argument("k", type=int)
    pe.add_argument("n", type=int)
    pr = qs.add_parser("recognize")
    pr.add_argument("--weight", type=int, required=True)
    pr.add_argument("--order", type=int, default=None)
    pr.add_argument("--modular-only", action="store_true")

    p = sub.add_parser("jacobi", help="weak Jacobi form operations")
    js = p.add_subparsers(dest="action", required=True)
    jr = js.add_parser("recognize")
    jr.add_argument("--weight", type=int, required=True)
    jr.add_argument("--index", type=int, required=True)
    jr.add_argument("--order", type=int, default=None)
    jh = js.add_parser("hecke")
    jh.add_argument("--ell", type=int, required=True)
    jh.add_argument("--weight", type=int, default=0)
    jh.add_argument("--order", type=int, required=True)

    p = sub.add_parser("igusa", help="the cusp form and the invariants")
    isub = p.add_subparsers(dest="action", required=True)
    it = isub.add_parser("table")
    it.add_argument("--gmax", type=int, default=2)
    it.add_argument("--hmax", type=int, default=2)
    it.add_argument("--dmax", type=int, default=2)
    ic = isub.add_parser("coeff")
    ic.add_argument("g", type=int)
    ic.add_argument("h", type=int)
    ic.add_argument("d", type=int)
    ie = isub.add_parser("exponents")
    ie.add_argument("--nmax", type=int, default=8)
    ik = isub.add_parser("check")
    ik.add_argument("which", choices=("kkv", "yz", "symmetry", "cross"))
    ik.add_argument("--hmax", type=int, default=4)
    ik.add_argument("--dmax", type=int, default=4)
    ik.add_argument("--gmax", type=int, default=6)

    p = sub.add_parser("graphsum", help="graph sums")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--method", default="both", choices=("direct", "analytic", "both"))

    p = sub.add_parser("constraints", help="constraint system")
    cs = p.add_subparsers(dest="action", required=True)
    cc = cs.add_parser("check")
    cc.add_argument("--which", default="all", choices=("1", "2", "3", "all"))
    cc.add_argument("--hmax", type=int, default=2)
    cc.add_argument("--gmax", type=int, default=3)
    cc.add_argument("--dmax", type=int, default=2)
    cc.add_argument("--qprec", type=int, default=10)
    ck = cs.add_parser("kernel")
    ck.add_argument("--G", type=int, default=2)
    ck.add_argument("--H", type=int, default=2)
    ck.add_argument("--D", type=int, default=2)
    ck.add_argument("--qprec", type=int, default=None)

    p = sub.add_parser("check", help="named acceptance suites")
    p.add_argument(
        "suite",
        choices=(
            "igusa-cross", "kkv", "yz", "symmetry", "properties", "kernel",
            "commutator", "graphs", "consts", "em", "genus1", "all",
        ),
    )
    p.add_argument("--hmax", type=int, default=4)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--gmax", type=int, default=4)
    p.add_argument("--order", type=int, default=8)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _load_config_file(args.config)
        for key in ("threads",):
            if key in defaults and f"--{key}" not in (argv or sys.argv):
                setattr(args, key, int(defaults[key]))
    try:
        return _dispatch(args)
    except Chi10Error as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "qmod":
        if args.action == "eisenstein":
            _emit(qmod.eisenstein_series(args.k, args.n + 1).to_json() + "\n", args.out)
            return 0
        series = TruncatedSeries.from_json(sys.stdin.read())
        if args.order is not None:
            series = series.truncate("q", args.order + 1)
        poly = qmod.qmod_recognize(series, args.weight, modular_only=args.modular_only)
        _emit(json.dumps(poly.to_json_obj(), sort_keys=True) + "\n", args.out)
        return 0
    if args.command == "jacobi":
        series = TruncatedSeries.from_json(sys.stdin.read())
        if args.action == "recognize":
            poly = jacobi.jacobi_recognize(series, args.weight, args.index)
            _emit(json.dumps(poly.to_json_obj(), sort_keys=True) + "\n", args.out)
            return 0
        out = jacobi.hecke_V(series, args.ell, args.weight, args.order + 1)
        _emit(out.to_json() + "\n", args.out)
        return 0
    if args.command == "igusa":
        if args.action == "table":
            emit_table(
                "invariants", (args.gmax, args.hmax, args.dmax), args.format, args.out, args.threads
            )
            return 0
        if args.action == "coeff":
            _emit(fmt_fraction(igusa.gw_invariant(args.g, args.h, args.d, threads=args.threads)) + "\n", args.out)
            return 0
        if args.action == "exponents":
            emit_table("exponents", (args.nmax,), args.format, args.out)
            return 0
        mapping = {"cross": "igusa-cross", "kkv": "kkv", "yz": "yz", "symmetry": "symmetry"}
        cfg = SuiteConfig(
            suite=mapping[args.which], gmax=args.gmax, hmax=args.hmax,
            dmax=args.dmax, threads=args.threads, out=args.out,
        )
        return run_suite(cfg)
    if args.command == "graphsum":
        with open(args.graph) as fh:
            graph = graphsum.WeightedGraph.from_json_obj(json.load(fh))
        results = {}
        if args.method in ("direct", "both"):
            results["direct"] = graphsum.graph_sum_direct(graph, args.order + 1)
        if args.method in ("analytic", "both"):
            results["analytic"] = graphsum.graph_sum_analytic(graph, args.order + 1)
        if args.method == "both" and not results["direct"].same_terms(results["analytic"]):
            raise Chi10Error("graph-sum pipelines disagree")
        key = "direct" if args.method != "analytic" else "analytic"
        _emit(results[key].to_json() + "\n", args.out)
        return 0
    if args.command == "constraints":
        if args.action == "kernel":
            res = constraints.uniqueness_kernel(args.G, args.H, args.D, qprec=args.qprec, fix_a000=True)
            free = constraints.uniqueness_kernel(args.G, args.H, args.D, qprec=args.qprec, fix_a000=False)
            obj = {"dimension_pinned": res.dimension, "dimension_free": free.dimension}
            if free.dimension:
                obj["basis"] = [
                    {str(u): fmt_fraction(x) for u, x in zip(free.unknowns, vec) if x}
                    for vec in free.basis
                ]
            _emit(json.dumps(obj, sort_keys=True) + "\n", args.out)
            return 0
        lines = []
        status = 0
        if args.which in ("1", "all"):
            zw = igusa.z_partition_w(6, 2, 2 * args.gmax + 2, threads=args.threads)
            rep = constraints.check_property1(zw)
            lines.append(f"{'PASS' if rep.ok() else 'FAIL'} property1: {rep.checked} monomials")
            status |= 0 if rep.ok() else 1
        if args.which in ("2", "all"):
            z = igusa.z_partition(args.hmax, max(args.qprec, 8), 14, threads=args.threads)
            for h in range(args.hmax + 1):
                rep = constraints.check_property2(z, h)
                ok = rep.ok()
                poly = rep.data.get("poly")
                lines.append(f"{'PASS' if ok else 'FAIL'} property2 h={h}: {poly}")
                status |= 0 if ok else 1
        if args.which in ("3", "all"):
            zw = igusa.z_partition_w(args.qprec, args.dmax, 2 * args.gmax + 2, threads=args.threads)
            rep = constraints.check_property3(zw, args.gmax, args.dmax)
            lines.append(f"{'PASS' if rep.ok() else 'FAIL'} property3: g<={args.gmax} d<={args.dmax}")
            status |= 0 if rep.ok() else 1
        _emit("\n".join(lines) + "\n", args.out)
        return status
    if args.command == "check":
        cfg = SuiteConfig(
            suite=args.suite, gmax=args.gmax, hmax=args.hmax, dmax=args.dmax,
            order=args.order, threads=args.threads, fmt=args.format, out=args.out,
        )
        return run_suite(cfg)
    raise Chi10Error(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

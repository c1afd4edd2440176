"""Command-line front end.

Exit codes: 0 positive answer, 3 negative answer with a witness, 2 bad input,
1 internal error (including an ``--oracle`` mismatch).
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable, Sequence

from . import io
from .divisors import (
    ThicknessGraph,
    TraitSpec,
    decompose_cartier,
    extend_vertex_labelling,
    induced_labelling,
    is_T_cartier,
    obstruction_witness,
)
from .errors import (
    DegenerateTrait,
    NeronAlignError,
    NoCorner,
    NotAligned,
    NotInA,
    NoZeroVertex,
    NotTCartier,
    SchemaError,
    ZeroThicknessEdge,
)
from .graph import LabelledGraph, is_aligned, is_strictly_aligned, regularise, specialise
from .neron import (
    component_group,
    contraction_map,
    family_orders,
    section_order,
    subdivide,
)
from .newton.cinv import crude_inverse, crude_inverse_slopes, verify_inverse
from .newton.classify import Inconclusive, Monomial, NotAUnit, classify_generic_unit
from .newton.polygon import above_integral_line, hull, np_left, np_right
from .newton.series import LaurentWindow
from . import oracles

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2, 3

# brute-force limits for --oracle
MAX_CIRCUIT_EDGES = 16
MAX_SANDPILE_CONFIGS = 200_000


class OracleMismatch(Exception):
    pass


class Outcome:
    """Accumulates a report plus the human-readable lines for one command."""

    def __init__(self, command: str, digest: str):
        self.report = io.Report(command, digest)
        self.lines: list[str] = []
        self.code = EXIT_OK

    def say(self, line: str) -> None:
        self.lines.append(line)

    def negative(self) -> None:
        self.code = EXIT_NEGATIVE


def _oracle_check(out: Outcome, name: str, fast, slow) -> None:
    out.report.verdicts.setdefault("oracle", {})[name] = {"fast": fast, "brute_force": slow, "agree": fast == slow}
    if fast != slow:
        raise OracleMismatch(f"{name}: fast={fast!r} brute-force={slow!r}")
    out.say(f"oracle {name}: agrees ({slow})")


def _oracle_skip(out: Outcome, name: str, why: str) -> None:
    out.report.verdicts.setdefault("oracle", {})[name] = {"skipped": why}
    out.say(f"oracle {name}: skipped ({why})")


# -- check-align ---------------------------------------------------------------

def _brute_aligned(G: LabelledGraph) -> bool:
    edges = [(e.id, e.ends) for e in G.edges]
    labels = {e.id: e.label.exponents for e in G.edges}
    bound = max([max(e.label.exponents.values()) for e in G.edges] + [1])
    return oracles.brute_is_aligned(G.vertices, edges, labels, bound)


def cmd_check_align(args) -> Outcome:
    data = io.load_json(args.graph)
    G = io.parse_graph(data)
    out = Outcome("check-align", io.digest(data))
    plain = is_aligned(G)
    R = regularise(G)
    strict = is_strictly_aligned(G)
    out.report.verdicts.update({"aligned": plain.aligned, "strictly_aligned": strict.aligned})
    if not plain:
        out.report.witnesses["aligned"] = plain.to_json()["witness"]
    if not strict:
        out.report.witnesses["strictly_aligned"] = strict.to_json()["witness"]
    out.report.witnesses["regularisation"] = R.to_json()
    out.say(f"aligned: {'yes' if plain else 'no'}")
    if not plain:
        a, b = plain.edges
        out.say(f"  edges {a} and {b} share a block but {plain.labels[0]} and {plain.labels[1]} are not proportional")
    out.say(f"strictly aligned: {'yes' if strict else 'no'}")
    if not strict:
        a, b = strict.edges
        out.say(f"  in the regularisation, {a} ({strict.labels[0]}) and {b} ({strict.labels[1]}) are not proportional")
    out.say("regularisation: " + ", ".join(f"{e.id}={e.label}" for e in R.edges))
    if args.oracle:
        for name, H, fast in (("aligned", G, plain.aligned), ("strictly_aligned", R, strict.aligned)):
            if len(H.edges) <= MAX_CIRCUIT_EDGES:
                _oracle_check(out, name, fast, _brute_aligned(H))
            else:
                _oracle_skip(out, name, f"{len(H.edges)} edges exceeds {MAX_CIRCUIT_EDGES}")
    if not plain:
        out.negative()
    return out


# -- component-group -------------------------------------------------------------

def _sandpile_size(G: LabelledGraph, T) -> int:
    S = subdivide(ThicknessGraph.from_trait(G, T))
    deg = {v: 0 for v in S.vertices}
    for a, b in S.edges:
        if a != b:
            deg[a] += 1
            deg[b] += 1
    sink = min(S.vertices)
    size = 1
    for v, d in deg.items():
        if v != sink:
            size *= max(d, 1)
    return size


def cmd_component_group(args) -> Outcome:
    gdata, tdata = io.load_json(args.graph), io.load_json(args.trait)
    G, T = io.parse_graph(gdata), io.parse_trait(tdata)
    extra = {"section": args.section, "family": args.family}
    out = Outcome("component-group", io.digest(gdata, tdata, extra))
    for g in sorted(G.generators):
        if g not in T.orders:
            raise SchemaError(f"trait gives no order for generator {g!r}", io.pointer([g]))
    zero = T.zero_set() & G.generators
    H, where = G, {v: v for v in G.vertices}
    if any(T.order(e.label) == 0 for e in G.edges):
        H = specialise(G, zero)
        where = contraction_map(G, zero)
        out.say(f"notice: generators {sorted(zero)} have order 0; contracted to {len(H.vertices)} vertices")
        out.report.witnesses["contracted"] = {"invert": sorted(zero), "vertex_map": where}
    TH = T.restrict(H.generators)
    grp = component_group(H, TH)
    out.report.verdicts.update(grp.to_json())
    out.say(f"component group: {_group_str(grp.invariant_factors)} (order {grp.order})")
    oracle_ok = args.oracle and _sandpile_size(H, TH) <= MAX_SANDPILE_CONFIGS
    if args.oracle:
        if oracle_ok:
            S = subdivide(ThicknessGraph.from_trait(H, TH))
            _oracle_check(out, "invariant_factors", list(grp.invariant_factors), list(oracles.brute_invariant_factors(S)))
        else:
            _oracle_skip(out, "invariant_factors", "sandpile too large")
    if args.section:
        p, q = args.section
        for k, v in enumerate((p, q)):
            if v not in G.vertices:
                raise SchemaError(f"unknown vertex {v!r}", f"/section/{k}")
        order = section_order(H, TH, where[p], where[q])
        out.report.verdicts["section_order"] = order
        out.say(f"order of [{p} - {q}]: {order}")
        if oracle_ok:
            S = subdivide(ThicknessGraph.from_trait(H, TH))
            _oracle_check(out, "section_order", order, oracles.brute_section_order(S, where[p], where[q]))
    if args.family:
        gen, n = args.family
        try:
            n = int(n)
        except ValueError:
            raise SchemaError(f"family length must be an integer, got {n!r}", "/family/1") from None
        if gen not in G.generators:
            raise SchemaError(f"generator {gen!r} is not declared on the graph", "/family/0")
        section = tuple(args.section) if args.section else None
        orders = family_orders(G, T, gen, n, section)
        out.report.verdicts["family_orders"] = orders
        out.say(f"family ord({gen}) = 1..{n}: section orders {orders}")
        if args.oracle:
            brute = []
            for i in range(1, n + 1):
                Ti = TraitSpec({**T.orders, gen: i})
                z = Ti.zero_set() & G.generators
                Hi, wi = specialise(G, z), contraction_map(G, z)
                Ti = Ti.restrict(Hi.generators)
                if _sandpile_size(Hi, Ti) > MAX_SANDPILE_CONFIGS:
                    brute = None
                    break
                sec = section or (sorted(G.vertices) + sorted(G.vertices))[:2]
                brute.append(oracles.brute_section_order(subdivide(ThicknessGraph.from_trait(Hi, Ti)), wi[sec[0]], wi[sec[1]]))
            if brute is None:
                _oracle_skip(out, "family_orders", "sandpile too large")
            else:
                _oracle_check(out, "family_orders", orders, brute)
    return out


def _group_str(factors) -> str:
    return " x ".join(f"Z/{d}" for d in factors) if factors else "trivial"


# -- decompose --------------------------------------------------------------------

def cmd_decompose(args) -> Outcome:
    gdata, tdata, mdata = io.load_json(args.graph), io.load_json(args.trait), io.load_json(args.labelling)
    G, T = io.parse_graph(gdata), io.parse_trait(tdata)
    m = io.parse_labelling(mdata, G)
    out = Outcome("decompose", io.digest(gdata, tdata, mdata))
    try:
        descs = extend_vertex_labelling(G, T, m)
    except NotAligned as exc:
        out.negative()
        out.report.verdicts["decomposed"] = False
        out.report.verdicts["reason"] = "not_aligned"
        out.report.witnesses["alignment"] = exc.verdict.to_json()["witness"]
        out.say(f"not aligned: {exc}")
        try:
            cert = obstruction_witness(G, T)
            out.report.witnesses["obstruction"] = cert.to_json()
            f0, f1 = cert.forced
            out.say(f"  obstruction on circuit {list(cert.circuit)}: d = {cert.d}, forced {f0} = {f1}, which fails")
        except DegenerateTrait as e2:
            out.report.witnesses["obstruction"] = None
            out.say(f"  no obstruction certificate: {e2}")
        if args.oracle:
            if len(G.edges) <= MAX_CIRCUIT_EDGES:
                _oracle_check(out, "aligned", False, _brute_aligned(G))
            else:
                _oracle_skip(out, "aligned", "graph too large")
        return out
    except NotTCartier as exc:
        out.negative()
        out.report.verdicts.update({"decomposed": False, "reason": "not_T_cartier"})
        e = G.edge(exc.edge)
        TG = ThicknessGraph.from_trait(G, T)
        out.report.witnesses["edge"] = {
            "id": e.id, "ends": list(e.ends), "thickness": TG.thickness[e.id],
            "difference": m[e.ends[0]] - m[e.ends[1]],
        }
        out.say(f"not T-Cartier: {exc}")
        return out
    except NoZeroVertex as exc:
        out.negative()
        out.report.verdicts.update({"decomposed": False, "reason": "no_zero_vertex"})
        out.report.witnesses["labelling"] = dict(sorted(m.items()))
        out.say(f"no zero vertex: {exc}")
        return out
    rebuilt = induced_labelling(descs, T, G.vertices)
    ok = rebuilt == m
    out.report.verdicts.update({"decomposed": True, "reconstructs": ok, "count": len(descs)})
    out.report.witnesses["descriptors"] = [d.to_json() for d in descs]
    out.say(f"{len(descs)} primitive descriptor(s); reconstruction {'exact' if ok else 'FAILED'}")
    for d in descs:
        out.say(f"  {d.coeff:+d} * div({d.a}; {{{', '.join(d.H)}}})")
    if args.oracle:
        TG = ThicknessGraph.from_trait(G, T)
        summed = {v: 0 for v in G.vertices}
        for d in descs:
            for v in d.H:
                summed[v] += d.coeff * T.order(d.a)
        _oracle_check(out, "reconstruction", rebuilt, summed)
        if G.is_connected():
            parts = decompose_cartier(TG, m)
            total = {v: sum(p.labelling[v] for p in parts) for v in G.vertices}
            _oracle_check(out, "cartier_parts_sum", m, total)
            _oracle_check(out, "cartier_parts_cartier", True, all(is_T_cartier(TG, p.labelling).ok for p in parts))
    if not ok:
        raise AssertionError("descriptors do not reconstruct the labelling")
    return out


# -- newton -------------------------------------------------------------------------

def _series_str(w: LaurentWindow, limit: int = 12) -> str:
    items = sorted(w.coeffs.items())
    shown = [f"({c})*T^{i}" for i, c in items[:limit]]
    tail = " + ..." if len(items) > limit else ""
    return " + ".join(shown) + tail if shown else "0"


def cmd_newton(args) -> Outcome:
    data = io.load_json(args.series)
    a = io.parse_series(data)
    action = args.action
    extra = {"action": action, "N": getattr(args, "N", None)}
    out = Outcome(f"newton {action}", io.digest(data, extra))
    variables = sorted(a.base_variables | a.r.variables())
    if action == "polygon":
        for var in variables:
            entry = {"right": np_right(a, var).to_json(), "left": np_left(a, var).to_json()}
            verdict = above_integral_line(a, var)
            entry["above_integral_line"] = verdict.to_json()
            out.report.verdicts[var] = entry
            out.say(f"valuation {var}:")
            for side in ("left", "right"):
                vs = entry[side]["vertices"]
                out.say(f"  {side} polygon vertices {vs} slopes {entry[side]['slopes']}")
            out.say(f"  above the integral line: {'yes' if verdict.holds else 'no'}"
                    + ("" if verdict.conclusive else " (inconclusive at this window)"))
            if args.oracle and a.is_polynomial:
                pts = a.points(var)
                P = hull(pts)
                under = [p for p in pts if p[1] < P.value_at(p[0])]
                _oracle_check(out, f"hull_{var}", [], under)
        return out
    if action == "cinv":
        N = args.N
        try:
            inv = crude_inverse(a, N)
        except NoCorner as exc:
            out.negative()
            out.report.verdicts["corner"] = False
            out.report.witnesses["polygons"] = {
                var: hull([(i, a.coeffs[i].valuation(var)) for i in a.support()]).to_json() for var in variables
            } if variables else {"trivial": hull([(i, 0) for i in a.support()]).to_json()}
            out.say(f"no corner: {exc}")
            return out
        ok, checked = verify_inverse(a, inv.series)
        slopes = {}
        for var in variables:
            G_l, G_r = crude_inverse_slopes(a, N, var)
            slopes[var] = {"G_l": None if G_l is None else str(G_l), "G_r": None if G_r is None else str(G_r)}
        out.report.verdicts.update({"corner": True, "identity_holds": ok, "checked_indices": checked, "slopes": slopes})
        out.report.witnesses["crude_inverse"] = inv.to_json()
        out.say(f"crude inverse at N={N} ({inv.method}) on window {list(inv.series.window)}:")
        out.say("  " + _series_str(inv.series))
        out.say(f"  f * CInv = 1 on {checked} checked indices: {'yes' if ok else 'NO'}")
        for var, s in slopes.items():
            out.say(f"  declared slopes for {var}: left {s['G_l'] or 'inf'}, right {s['G_r'] or 'inf'}")
        if not ok:
            raise AssertionError("crude inverse failed its identity check")
        if args.oracle:
            _oracle_check(out, "product_identity", True, ok)
        return out
    # classify
    try:
        res = classify_generic_unit(a)
    except NotInA as exc:
        out.negative()
        out.report.verdicts["branch"] = "not_in_A"
        out.report.witnesses["membership"] = {"index": exc.index, "valuation": exc.valuation}
        out.say(f"not in A: {exc}")
        return out
    out.report.verdicts["branch"] = res.branch
    out.report.witnesses["classification"] = res.to_json()
    if isinstance(res, Monomial):
        out.say(f"generic unit: a = ({res.s}) * x^{res.n} * y^{res.m} * u")
        out.say(f"  u = {_series_str(res.u)}")
        out.say(f"  u_0 = {res.u.coeff(0)} is a unit; u * CInv_0(u) = 1 on {res.inverse_checked} indices")
        if args.oracle:
            _oracle_check(out, "inverse_identity", True, verify_inverse(res.u, res.inverse)[0])
    elif isinstance(res, NotAUnit):
        out.negative()
        (x0, y0), (x1, y1) = res.edge
        out.say(f"not a generic unit: NP_{res.var} has an edge ({x0},{y0})-({x1},{y1}) "
                f"of gradient {res.gradient} inside ({-res.v_r}, 0)")
        if args.oracle:
            _oracle_check(out, "gradient", str(res.gradient), str((y1 - y0) / (x1 - x0)))
    else:
        assert isinstance(res, Inconclusive)
        out.report.verdicts["branch"] = "inconclusive"
        out.say(f"inconclusive: {res.reason}")
    return out


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the JSON report")
    common.add_argument("--oracle", action="store_true", default=argparse.SUPPRESS,
                        help="cross-check against brute-force oracles; exit 1 on mismatch")
    parser = argparse.ArgumentParser(prog="neron-align", parents=[common],
                                     description="Alignment, divisors, component groups and Newton polygons.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-align", parents=[common], help="alignment and strict alignment of a labelled graph")
    p.add_argument("graph")
    p.set_defaults(run=cmd_check_align)

    p = sub.add_parser("component-group", parents=[common], help="component group along a trait")
    p.add_argument("graph")
    p.add_argument("--trait", required=True)
    p.add_argument("--section", nargs=2, metavar=("P", "Q"))
    p.add_argument("--family", nargs=2, metavar=("GEN", "N"))
    p.set_defaults(run=cmd_component_group)

    p = sub.add_parser("decompose", parents=[common], help="primitive divisors for a vertex labelling")
    p.add_argument("graph")
    p.add_argument("--trait", required=True)
    p.add_argument("--labelling", required=True)
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("newton", parents=[common], help="Newton polygons, crude inverses, unit classification")
    p.add_argument("series")
    acts = p.add_subparsers(dest="action", required=True)
    acts.add_parser("polygon", parents=[common])
    c = acts.add_parser("cinv", parents=[common])
    c.add_argument("N", type=int)
    acts.add_parser("classify", parents=[common])
    p.set_defaults(run=cmd_newton)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    args.oracle = getattr(args, "oracle", False)
    run: Callable = args.run
    start = time.perf_counter()
    try:
        out = run(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except ZeroThicknessEdge as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=stderr)
        return EXIT_INTERNAL
    except (NeronAlignError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"input error: {msg}", file=stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - report, never traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    out.report.timing = {"seconds": round(time.perf_counter() - start, 6)}
    if args.json:
        print(out.report.dumps(), file=stdout)
    else:
        print("\n".join(out.lines), file=stdout)
    return out.code


if __name__ == "__main__":
    sys.exit(main())

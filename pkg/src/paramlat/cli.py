"""Batch experiment driver.

Scenario files are plain text key = value blocks plus named definitions and
probe lines; the same probes are exposed directly as subcommands.  Output is
deterministic: identical scenario and version give byte-identical tables.
Exit codes: 0 every probe resolved as expected, 1 a fails verdict occurred,
2 an unresolved verdict occurred (fails wins over unresolved).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import catalog
from .config import DESK, Horizon, env_step_cap
from .constructions import diag_invalidation_experiment, verify_certificate, Certificate
from .machines import Program, program_from_hex
from .order import (
    below_nu,
    below_uniform,
    cardinality_bound,
    check_filter,
    check_glb,
    check_lub,
    gap_table,
    has_imix,
)
from .params import (
    Parameterization,
    by_length,
    from_function,
    from_runtime,
    from_slices,
    full,
    join,
    meet,
)
from .spaces import NAT, FiniteSpace, ProductSpace, check_space_laws
from .universe import Universe
from .verdict import HorizonVerdict


class ParseError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownName(Exception):
    def __init__(self, name: str):
        super().__init__(f"unknown name {name!r}")
        self.name = name


class CapExceeded(Exception):
    def __init__(self, probe: str, detail: str):
        super().__init__(f"{probe}: {detail}")


BUILTIN_FUNCTIONS = {
    "ones": catalog.ones,
    "zeros": catalog.zeros,
    "leadzeros": catalog.leading_zeros,
    "length": len,
}


@dataclass
class Context:
    """Resolved names and limits for one scenario run."""

    horizon: Horizon = DESK
    universe: Universe = None
    spaces: Dict[str, object] = field(default_factory=dict)
    params: Dict[str, Parameterization] = field(default_factory=dict)
    sets: Dict[str, object] = field(default_factory=dict)
    families: Dict[str, object] = field(default_factory=dict)
    registries: Dict[str, list] = field(default_factory=dict)

    def __post_init__(self):
        if self.universe is None:
            self.universe = Universe(self.horizon.L)


MAX_UNIVERSE = 12
MAX_HORIZON = 24


def _split_args(text: str) -> List[str]:
    """Split a comma list at depth zero."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last:
        out.append(last)
    return out


def parse_space(expr: str, ctx: Context):
    expr = expr.strip()
    if expr == "nat":
        return NAT
    if expr in ctx.spaces:
        return ctx.spaces[expr]
    if expr.startswith("product(") and expr.endswith(")"):
        left, right = _split_args(expr[len("product("):-1])
        return ProductSpace(parse_space(left, ctx), parse_space(right, ctx))
    if expr.startswith("finite(") and expr.endswith(")"):
        entries = _split_args(expr[len("finite("):-1])
        labels, pairs = [], []
        for entry in entries:
            if "<=" in entry:
                a, b = (t.strip() for t in entry.split("<=", 1))
                pairs.append((a, b))
                for lab in (a, b):
                    if lab not in labels:
                        labels.append(lab)
            elif entry and entry not in labels:
                labels.append(entry)
        return FiniteSpace(labels, pairs)
    raise UnknownName(expr)


def parse_set(expr: str, ctx: Context):
    expr = expr.strip()
    if expr in ctx.sets:
        return ctx.sets[expr]
    try:
        return catalog.builtin_set(expr)
    except KeyError:
        raise UnknownName(expr) from None


def _load_slice_file(path: str) -> list:
    sets = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sets.append(frozenset(line.split()))
    return sets


def parse_param(expr: str, ctx: Context) -> Parameterization:
    expr = expr.strip()
    if expr in ctx.params:
        return ctx.params[expr]
    if expr == "bylength":
        return by_length()
    if expr.startswith("full(") and expr.endswith(")"):
        return full(parse_space(expr[len("full("):-1], ctx))
    if expr == "full":
        return full(NAT)
    if expr.startswith("fn(") and expr.endswith(")"):
        name = expr[len("fn("):-1].strip()
        if name not in BUILTIN_FUNCTIONS:
            raise UnknownName(name)
        return from_function(BUILTIN_FUNCTIONS[name], name=f"fn-{name}")
    if expr.startswith("meet(") and expr.endswith(")"):
        a, b = _split_args(expr[len("meet("):-1])
        return meet(parse_param(a, ctx), parse_param(b, ctx))
    if expr.startswith("join(") and expr.endswith(")"):
        a, b = _split_args(expr[len("join("):-1])
        return join(parse_param(a, ctx), parse_param(b, ctx))
    if expr.startswith("slices(") and expr.endswith(")"):
        return from_slices(_load_slice_file(expr[len("slices("):-1].strip()))
    if expr.startswith("runtime(") and expr.endswith(")"):
        program = program_from_hex(expr[len("runtime("):-1].strip())
        return from_runtime(program, ctx.universe, ctx.horizon.step_cap)
    if expr.startswith("builtin(") and expr.endswith(")"):
        name = expr[len("builtin("):-1].strip()
        try:
            return catalog.builtin_param(name, ctx.universe, ctx.horizon)
        except KeyError:
            raise UnknownName(name) from None
    raise UnknownName(expr)


def parse_family(expr: str, ctx: Context):
    expr = expr.strip()
    if expr in ctx.families:
        return ctx.families[expr]
    if expr.startswith("chain(") and expr.endswith(")"):
        args = _split_args(expr[len("chain("):-1])
        set_name = args[0]
        count = int(args[1]) if len(args) > 1 else 16
        cap = int(args[2]) if len(args) > 2 else None
        return catalog.chain_family(set_name, ctx.universe, count,
                                    ctx.horizon, cap_len=cap)
    raise UnknownName(expr)


def load_registry_file(path: str, target) -> list:
    """One certificate per [cert] block: program, exponent, expect lines."""
    certs = []
    block: dict = {}

    def flush():
        if not block:
            return
        program = program_from_hex(block["program"])
        cert = Certificate(
            program=program,
            exponent=int(block.get("exponent", 1)),
            scale=int(block.get("scale", 16)),
            transcript=tuple(block.get("expect", ())),
        )
        certs.append(verify_certificate(cert, target))
        block.clear()

    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[cert]":
            flush()
            continue
        key, _, value = (t.strip() for t in line.partition("="))
        if key == "expect":
            payload, bit = value.rsplit(" ", 1)
            from .machines import program_from_hex as _hx
            entry = (_hx(payload).code, int(bit))
            block.setdefault("expect", []).append(entry)
        else:
            block[key] = value
    flush()
    return certs


def parse_registry(expr: str, ctx: Context, target=None) -> list:
    expr = expr.strip()
    if expr in ctx.registries:
        return ctx.registries[expr]
    if expr.startswith("builtin(") and expr.endswith(")"):
        return catalog.builtin_registry(ctx.universe, expr[len("builtin("):-1],
                                        ctx.horizon)
    if expr.startswith("file(") and expr.endswith(")"):
        args = _split_args(expr[len("file("):-1])
        path = args[0]
        if len(args) > 1:
            target = parse_set(args[1], ctx)
        if target is None:
            raise UnknownName("registry file needs a target set")
        return load_registry_file(path, target)
    raise UnknownName(expr)


# --- probes -----------------------------------------------------------------

@dataclass
class ProbeResult:
    name: str
    verdicts: List[HorizonVerdict] = field(default_factory=list)
    tables: List[tuple] = field(default_factory=list)  # (filename, header, rows)
    lines: List[str] = field(default_factory=list)

    @property
    def worst(self) -> str:
        statuses = [v.status for v in self.verdicts]
        if "fails" in statuses:
            return "fails"
        if "unresolved" in statuses:
            return "unresolved"
        return "holds"


def _verdict_line(label: str, v: HorizonVerdict) -> str:
    return f"{label}: {json.dumps(v.as_record(), sort_keys=True)}"


def probe_gap(ctx: Context, p: str, q: str, n_max: Optional[int] = None) -> ProbeResult:
    e1, e2 = parse_param(p, ctx), parse_param(q, ctx)
    rows = gap_table(e1, e2, ctx.universe, ctx.horizon, n_max)
    res = ProbeResult(f"gap {p} {q}")
    res.tables.append((f"gap_{p}_{q}.csv", ("n", "gap", "witness_x"), rows))
    res.lines.append(f"gap table {p} vs {q}: {len(rows)} rows")
    return res


def probe_order(ctx: Context, p: str, q: str, bound: str = "identity") -> ProbeResult:
    e1, e2 = parse_param(p, ctx), parse_param(q, ctx)
    res = ProbeResult(f"order {p} {q}")
    v1 = below_nu(e1, e2, ctx.universe, ctx.horizon)
    v2 = below_nu(e2, e1, ctx.universe, ctx.horizon)
    res.verdicts += [v1, v2]
    res.lines.append(_verdict_line(f"below_nu({p},{q})", v1))
    res.lines.append(_verdict_line(f"below_nu({q},{p})", v2))
    bound_fn, bound_name = _bound_for(bound, e1, ctx)
    v3 = below_uniform(e1, e2, bound_fn, ctx.universe, ctx.horizon)
    res.verdicts.append(v3)
    res.lines.append(_verdict_line(f"below_uniform({p},{q},{bound_name})", v3))
    return res


def _bound_for(spec: str, e: Parameterization, ctx: Context):
    if spec == "identity":
        return (lambda n: n), "identity"
    if spec.startswith("const:"):
        c = int(spec.split(":", 1)[1])
        return (lambda n: c), f"const{c}"
    if spec == "cardinality":
        return cardinality_bound(e, ctx.universe, ctx.horizon), "cardinality"
    raise UnknownName(spec)


def probe_imix(ctx: Context, p: str) -> ProbeResult:
    e = parse_param(p, ctx)
    v = has_imix(e, ctx.universe, ctx.horizon)
    res = ProbeResult(f"imix {p}")
    res.verdicts.append(v)
    res.lines.append(_verdict_line(f"imix({p})", v))
    return res


def probe_lattice(ctx: Context, names: List[str]) -> ProbeResult:
    family = [parse_param(n, ctx) for n in names]
    res = ProbeResult("lattice " + ",".join(names))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            vg = check_glb(family[i], family[j], family, ctx.universe, ctx.horizon)
            vl = check_lub(family[i], family[j], family, ctx.universe, ctx.horizon)
            res.verdicts += [vg, vl]
            res.lines.append(_verdict_line(f"glb({names[i]},{names[j]})", vg))
            res.lines.append(_verdict_line(f"lub({names[i]},{names[j]})", vl))
    return res


def probe_filter(ctx: Context, set_name: str, klass: str) -> ProbeResult:
    if klass != "xnup":
        raise UnknownName(klass)
    L, member = catalog.filter_sample(ctx.universe, set_name, ctx.horizon)
    F = [e for e in L if member(e)]
    v = check_filter(F, L, member, ctx.universe, ctx.horizon)
    res = ProbeResult(f"filter {set_name} {klass}")
    res.verdicts.append(v)
    res.lines.append(_verdict_line(f"filter({set_name},{klass})", v))
    res.lines.append(f"members: {len(F)}/{len(L)}")
    return res


def probe_diag(ctx: Context, c: int, i_max: int) -> ProbeResult:
    if i_max > 512:
        raise CapExceeded("diag", f"i_max {i_max} above enumeration cap")
    report = diag_invalidation_experiment(c, i_max, ctx.horizon)
    res = ProbeResult(f"diag c={c} imax={i_max}")
    rows = report.csv_rows()
    res.tables.append((f"diag_c{c}_i{i_max}.csv",
                       ("index", "event_type", "input_code", "step_count"),
                       rows))
    qualifying = [m for m in report.machines
                  if m.qualifying_points >= ctx.horizon.threshold]
    unresolved = [m.index for m in qualifying if not m.resolved]
    res.lines.append(
        f"diag: {len(report.scanned_inputs)} inputs scanned,"
        f" {len(qualifying)} qualifying machines,"
        f" unresolved: {unresolved or 'none'}")
    if unresolved:
        from .verdict import unresolved as unresolved_verdict
        res.verdicts.append(unresolved_verdict(ctx.horizon,
                                               note=f"machines {unresolved}"))
    return res


def probe_search(ctx: Context, registry_expr: str, set_name: str) -> ProbeResult:
    target = parse_set(set_name, ctx)
    registry = parse_registry(registry_expr, ctx, target)
    from .constructions import search_parameterization
    from .machines import domain as machine_domain

    e = search_parameterization(registry)
    res = ProbeResult(f"search {registry_expr} {set_name}")
    worst = 0
    for cert in registry:
        dom = machine_domain(cert.approximation, ctx.universe)
        entry_len = len(cert)
        need = 0
        for x in dom:
            k = e.min_element(x)
            need = max(need, k - entry_len)
        need = max(need, 0)
        worst = max(worst, need)
        included = dom <= e.slice_at(entry_len + need, ctx.universe)
        res.lines.append(
            f"entry len={entry_len} const={need} inclusion={included}")
        if not included:
            from .verdict import fails as fails_verdict
            res.verdicts.append(fails_verdict((entry_len,), ctx.horizon,
                                              note="slice inclusion fails"))
    res.lines.append(f"measured additive constant: {worst}")
    return res


def probe_ic(ctx: Context, set_name: str, c: int, m: int) -> ProbeResult:
    if m > 14:
        raise CapExceeded("ic", f"code length cap {m} above enumeration limit")
    from .constructions import ABOVE_M, instance_complexity

    target = parse_set(set_name, ctx)
    res = ProbeResult(f"ic {set_name} c={c} m={m}")
    rows = []
    for x in ctx.universe:
        v = instance_complexity(x, target, c, m, ctx.universe)
        rows.append((x, "above_m" if v is ABOVE_M else v))
    res.tables.append((f"ic_{set_name}_c{c}_m{m}.csv", ("x", "ic"), rows))
    finite = [r for r in rows if r[1] != "above_m"]
    res.lines.append(f"ic table: {len(finite)}/{len(rows)} finite values")
    return res


def probe_laws(ctx: Context) -> ProbeResult:
    res = ProbeResult("laws")
    spaces = {"nat": NAT, "product(nat,nat)": ProductSpace(NAT, NAT)}
    spaces.update(ctx.spaces)
    for name, sp in spaces.items():
        v = check_space_laws(sp, 60, ctx.horizon)
        res.verdicts.append(v)
        res.lines.append(_verdict_line(f"space-laws({name})", v))
    pool = dict(ctx.params) or {
        "bylength": by_length(),
        "full": full(NAT),
        "fn-ones": from_function(catalog.ones, name="fn-ones"),
    }
    elems = None
    for name, e in pool.items():
        bad = None
        elems = [k for k in e.space.elements_up_to(min(ctx.horizon.H, 8))]
        sample = elems[:24]
        for x in list(ctx.universe)[:48]:
            for k in sample:
                if not e.contains(x, k):
                    continue
                j = e.space.join_hint(k, sample[-1])
                if not e.contains(x, j):
                    bad = (x, k, j)
                    break
            if bad:
                break
        from .verdict import fails as fails_verdict, holds as holds_verdict
        v = (fails_verdict(bad, ctx.horizon, note="fiber not an up-set")
             if bad else holds_verdict(ctx.horizon))
        res.verdicts.append(v)
        res.lines.append(_verdict_line(f"up-set({name})", v))
    return res


# --- scenario runner ----------------------------------------------------------

def parse_scenario(path: str) -> tuple:
    """Returns (settings, definitions, probe argument lists)."""
    settings: dict = {}
    definitions: list = []
    probes: list = []
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head in ("universe", "horizon", "threshold", "step_cap"):
            key, _, value = line.partition("=")
            if not value.strip().isdigit():
                raise ParseError(line_no, f"expected integer for {head}")
            settings[key.strip()] = int(value.strip())
        elif head in ("space", "param", "set", "family", "registry"):
            rest = line[len(head):].strip()
            name, eq, expr = rest.partition("=")
            if not eq:
                raise ParseError(line_no, f"{head} needs name = expression")
            definitions.append((line_no, head, name.strip(), expr.strip()))
        elif head == "probe":
            probes.append((line_no, line.split()[1:]))
        else:
            raise ParseError(line_no, f"unrecognized directive {head!r}")
    return settings, definitions, probes


def build_context(settings: dict, definitions: list) -> Context:
    L = settings.get("universe", DESK.L)
    H = settings.get("horizon", DESK.H)
    if L > MAX_UNIVERSE:
        raise CapExceeded("universe", f"L={L} above cap {MAX_UNIVERSE}")
    if H > MAX_HORIZON:
        raise CapExceeded("horizon", f"H={H} above cap {MAX_HORIZON}")
    horizon = Horizon(
        L=L,
        H=H,
        threshold=settings.get("threshold", DESK.threshold),
        step_cap=env_step_cap(settings.get("step_cap", DESK.step_cap)),
    )
    ctx = Context(horizon=horizon)
    for line_no, kind, name, expr in definitions:
        try:
            if kind == "space":
                ctx.spaces[name] = parse_space(expr, ctx)
            elif kind == "param":
                e = parse_param(expr, ctx)
                e.name = name
                ctx.params[name] = e
            elif kind == "set":
                ctx.sets[name] = parse_set(expr, ctx)
            elif kind == "family":
                ctx.families[name] = parse_family(expr, ctx)
            elif kind == "registry":
                ctx.registries[name] = parse_registry(expr, ctx)
        except UnknownName:
            raise
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(line_no, str(exc)) from exc
    return ctx


def run_probe(ctx: Context, args: List[str]) -> ProbeResult:
    kind = args[0]
    if kind == "gap":
        n_max = int(args[3]) if len(args) > 3 else None
        return probe_gap(ctx, args[1], args[2], n_max)
    if kind == "order":
        return probe_order(ctx, args[1], args[2],
                           args[3] if len(args) > 3 else "identity")
    if kind == "imix":
        return probe_imix(ctx, args[1])
    if kind == "lattice":
        return probe_lattice(ctx, _split_args(args[1]))
    if kind == "filter":
        return probe_filter(ctx, args[1], args[2] if len(args) > 2 else "xnup")
    if kind == "diag":
        return probe_diag(ctx, int(args[1]), int(args[2]))
    if kind == "search":
        return probe_search(ctx, args[1], args[2] if len(args) > 2 else "parity")
    if kind == "ic":
        return probe_ic(ctx, args[1], int(args[2]), int(args[3]))
    if kind == "laws":
        return probe_laws(ctx)
    raise UnknownName(kind)


def run_scenario(path: str, out_dir: Optional[str] = None,
                 parallel: int = 0) -> int:
    settings, definitions, probes = parse_scenario(path)
    ctx = build_context(settings, definitions)
    print(f"# scenario {path}")
    print(f"# horizon {json.dumps(ctx.horizon.as_record(), sort_keys=True)}")
    results: List[ProbeResult] = []
    if parallel > 1:
        # Probes are pure given pure parameterizations, so evaluation order
        # cannot change verdicts; output order stays the declared order.
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(run_probe, ctx, args) for _, args in probes]
            results = [f.result() for f in futures]
    else:
        for _, args in probes:
            results.append(run_probe(ctx, args))
    exit_code = 0
    for res in results:
        for line in res.lines:
            print(line)
        for filename, header, rows in res.tables:
            if out_dir:
                target = Path(out_dir) / filename
                target.parent.mkdir(parents=True, exist_ok=True)
                with open(target, "w", newline="") as fh:
                    w = csv.writer(fh)
                    w.writerow(header)
                    w.writerows(rows)
                print(f"wrote {target}")
        if res.worst == "fails":
            exit_code = 1
        elif res.worst == "unresolved" and exit_code == 0:
            exit_code = 2
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="paramlat",
        description="probe the order and lattice structure of parameterizations",
    )
    parser.add_argument("--universe", type=int, default=DESK.L)
    parser.add_argument("--horizon", type=int, default=DESK.H)
    parser.add_argument("--threshold", type=int, default=DESK.threshold)
    parser.add_argument("--out", default=None, help="directory for CSV tables")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file")
    run_p.add_argument("scenario")
    run_p.add_argument("--parallel", type=int, default=0)

    gap_p = sub.add_parser("gap", help="emit a gap table")
    gap_p.add_argument("p")
    gap_p.add_argument("q")
    gap_p.add_argument("--n-max", type=int, default=None)

    order_p = sub.add_parser("order", help="order verdicts for a pair")
    order_p.add_argument("p")
    order_p.add_argument("q")
    order_p.add_argument("--bound", default="identity")

    imix_p = sub.add_parser("imix", help="threshold-extension probe")
    imix_p.add_argument("p")

    lat_p = sub.add_parser("lattice", help="glb/lub checks over a family")
    lat_p.add_argument("family", help="comma-separated parameterizations")

    fil_p = sub.add_parser("filter", help="filter axioms for a set's class")
    fil_p.add_argument("set")
    fil_p.add_argument("klass", nargs="?", default="xnup")

    diag_p = sub.add_parser("diag", help="diagonal invalidation experiment")
    diag_p.add_argument("--c", type=int, default=2)
    diag_p.add_argument("--imax", type=int, default=64)

    search_p = sub.add_parser("search", help="universal search dominance")
    search_p.add_argument("--registry", default="builtin(parity)")
    search_p.add_argument("--set", dest="set_name", default="parity")

    ic_p = sub.add_parser("ic", help="instance complexity table")
    ic_p.add_argument("--set", dest="set_name", required=True)
    ic_p.add_argument("--c", type=int, default=2)
    ic_p.add_argument("--m", type=int, default=10)

    sub.add_parser("laws", help="space and fiber law suites")

    args = parser.parse_args(argv)
    horizon = Horizon(L=args.universe, H=args.horizon,
                      threshold=args.threshold, step_cap=env_step_cap())
    ctx = Context(horizon=horizon)

    try:
        if args.command == "run":
            return run_scenario(args.scenario, args.out, args.parallel)
        if args.command == "gap":
            res = probe_gap(ctx, args.p, args.q, args.n_max)
        elif args.command == "order":
            res = probe_order(ctx, args.p, args.q, args.bound)
        elif args.command == "imix":
            res = probe_imix(ctx, args.p)
        elif args.command == "lattice":
            res = probe_lattice(ctx, _split_args(args.family))
        elif args.command == "filter":
            res = probe_filter(ctx, args.set, args.klass)
        elif args.command == "diag":
            res = probe_diag(ctx, args.c, args.imax)
        elif args.command == "search":
            res = probe_search(ctx, args.registry, args.set_name)
        elif args.command == "ic":
            res = probe_ic(ctx, args.set_name, args.c, args.m)
        elif args.command == "laws":
            res = probe_laws(ctx)
        else:
            raise UnknownName(args.command)
    except (ParseError, UnknownName, CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for line in res.lines:
        print(line)
    for filename, header, rows in res.tables:
        if args.out:
            target = Path(args.out) / filename
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(header)
                w.writerows(rows)
            print(f"wrote {target}")
        else:
            w = csv.writer(sys.stdout)
            w.writerow(header)
            w.writerows(rows)
    return {"holds": 0, "fails": 1, "unresolved": 2}[res.worst]


if __name__ == "__main__":
    sys.exit(main())

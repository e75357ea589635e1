"""Command line front end and the plain-text instance format.

Instance files are line oriented; ``#`` starts a comment::

    vas                     # or: affine
    dim 2
    action -2 1             # VAS only, one line per action
    trans                   # affine only, starts a transition block
    a 0 0                   #   guard (default 0)
    A 1 1 ; 2 0             #   matrix rows separated by ';' (default identity)
    b 0 0                   #   addition (default 0)
    target 0 5
    source 10 0             # optional
    control 1 4             # optional: g(x) = x + 1, n0 = 4

Exit codes: 0 completed, 2 coverable, 3 not coverable, 4 resource limit,
1 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from .bounds import (
    Control,
    build_bound_table,
    filter_count_bound,
    thin_ideal_count_bound,
)
from .engine import (
    ResourceLimitExceeded,
    backward_classical,
    backward_dual,
    default_control,
    extract_pseudo_witness,
    replay_pseudo_witness,
    run_monitors,
    views_agree,
)
from .ideals import NatVec, format_vec
from .models import AffineNet, AffineTransition, Model, Vas, classify, identity
from .oracle import CoverResult, bounded_forward_covers, karp_miller_covers
from .trace import format_vectors, write_csv, write_jsonl

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COVERABLE = 2
EXIT_NOT_COVERABLE = 3
EXIT_RESOURCE = 4


class ParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass(frozen=True)
class Instance:
    model: Model
    target: NatVec
    source: Optional[NatVec] = None
    control: Optional[Control] = None

    @property
    def dim(self) -> int:
        return self.model.dim


def _ints(tokens, lineno: int, what: str) -> tuple:
    try:
        return tuple(int(x) for x in tokens)
    except ValueError:
        raise ParseError(f"{what}: expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    kind = None
    dim = None
    actions = []
    trans = []  # list of dicts with keys a, A, b and the opening line
    target = source = control = None

    def need_dim(lineno):
        if dim is None:
            raise ParseError("'dim' must come before vectors", lineno)

    def vec(tokens, lineno, what, signed=False):
        need_dim(lineno)
        v = _ints(tokens, lineno, what)
        if len(v) != dim:
            raise ParseError(f"{what} has {len(v)} components, expected dim {dim}", lineno)
        if not signed and any(c < 0 for c in v):
            raise ParseError(f"{what} must be non-negative", lineno)
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if kind is None:
            if key not in ("vas", "affine") or rest:
                raise ParseError("first line must be 'vas' or 'affine'", lineno)
            kind = key
            continue
        if key == "dim":
            if dim is not None:
                raise ParseError("duplicate 'dim'", lineno)
            if len(rest) != 1:
                raise ParseError("'dim' takes one positive integer", lineno)
            (dim,) = _ints(rest, lineno, "dim")
            if dim < 1:
                raise ParseError("'dim' takes one positive integer", lineno)
        elif key == "action":
            if kind != "vas":
                raise ParseError("'action' is only valid in a vas instance", lineno)
            actions.append(vec(rest, lineno, f"action {len(actions) + 1}", signed=True))
        elif key == "trans":
            if kind != "affine":
                raise ParseError("'trans' is only valid in an affine instance", lineno)
            if rest:
                raise ParseError("'trans' takes no arguments", lineno)
            need_dim(lineno)
            trans.append({"line": lineno})
        elif key in ("a", "b", "A"):
            if kind != "affine" or not trans:
                raise ParseError(f"'{key}' must follow a 'trans' line", lineno)
            cur = trans[-1]
            name = f"transition {len(trans)} {key}"
            if key in cur:
                raise ParseError(f"duplicate '{key}' in transition {len(trans)}", lineno)
            if key == "A":
                rows = [r.split() for r in " ".join(rest).split(";")]
                if len(rows) != dim:
                    raise ParseError(f"{name} has {len(rows)} rows, expected dim {dim}", lineno)
                cur[key] = tuple(vec(r, lineno, f"{name} row {i + 1}") for i, r in enumerate(rows))
            else:
                cur[key] = vec(rest, lineno, name)
        elif key in ("target", "source"):
            v = vec(rest, lineno, key)
            if key == "target":
                if target is not None:
                    raise ParseError("duplicate 'target'", lineno)
                target = v
            else:
                if source is not None:
                    raise ParseError("duplicate 'source'", lineno)
                source = v
        elif key == "control":
            vals = _ints(rest, lineno, "control")
            if len(vals) != 2 or min(vals) < 0:
                raise ParseError("'control' takes a step and an initial size, both >= 0", lineno)
            control = Control.affine(vals[0], vals[1])
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)

    if kind is None:
        raise ParseError("empty instance")
    if dim is None:
        raise ParseError("missing 'dim'")
    if target is None:
        raise ParseError("missing 'target'")
    if kind == "vas":
        model: Model = Vas(dim, tuple(actions))
    else:
        zero = (0,) * dim
        model = AffineNet(
            dim,
            tuple(
                AffineTransition(t.get("a", zero), t.get("A", identity(dim)), t.get("b", zero))
                for t in trans
            ),
        )
    return Instance(model, target, source, control)


def _row(v) -> str:
    return " ".join(str(c) for c in v)


def format_instance(inst: Instance) -> str:
    m = inst.model
    lines = ["vas" if isinstance(m, Vas) else "affine", f"dim {m.dim}"]
    if isinstance(m, Vas):
        lines += [f"action {_row(a)}" for a in m.actions]
    else:
        for t in m.transitions:
            lines += ["trans", f"a {_row(t.a)}", "A " + " ; ".join(_row(r) for r in t.M), f"b {_row(t.b)}"]
    lines.append(f"target {_row(inst.target)}")
    if inst.source is not None:
        lines.append(f"source {_row(inst.source)}")
    if inst.control is not None:
        lines.append(f"control {inst.control.step} {inst.control.n0}")
    return "\n".join(lines) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# -- running -------------------------------------------------------------------


def _control_for(inst: Instance, flags) -> Control:
    base = inst.control or default_control(inst.model, inst.target)
    step = flags.get("control_step")
    n0 = flags.get("control_n0")
    return Control.affine(base.step if step is None else step, base.n0 if n0 is None else n0)


def _verdict_code(coverable) -> int:
    if coverable is None:
        return EXIT_OK
    return EXIT_COVERABLE if coverable else EXIT_NOT_COVERABLE


def _engine_kwargs(flags) -> dict:
    out = {"jobs": flags.get("jobs") or 1}
    if flags.get("max_iterations") is not None:
        out["max_iterations"] = flags["max_iterations"]
    if flags.get("max_size") is not None:
        out["max_size"] = flags["max_size"]
    return out


def _describe_chain(chain, lines) -> None:
    for st in chain.steps:
        lines.append(f"D_{st.index} = {st.downset!r}")
    lines.append(f"U_* basis = {chain.final.upset!r}")
    lines.append(f"length = {chain.length} (stabilized after {chain.confirming_iterations} iterations)")


def _describe_verdict(inst: Instance, verdict, lines) -> None:
    if inst.source is None:
        lines.append("no source given: computed the set of configurations covering the target")
        return
    word = "coverable" if verdict.coverable else "not coverable"
    lines.append(f"{format_vec(inst.source)} -> {format_vec(inst.target)}: {word}")


def _emit_artifacts(chain, control, flags) -> None:
    if flags.get("trace"):
        write_jsonl(flags["trace"], chain, control)
    if flags.get("csv"):
        write_csv(flags["csv"], chain, control)


def _monitor_lines(report, lines) -> None:
    def mark(ok):
        return "ok" if ok else "FAIL"

    lines.append(f"controlled          {mark(report.controlled)}")
    lines.append(f"omega-monotone      {mark(report.omega_monotone)}")
    lines.append(f"strongly monotone   {mark(report.strongly_monotone)}")
    lines.append(f"ideals thin         {mark(report.all_ideals_thin)}")
    lines.append(f"basis nearly thin   {mark(report.basis_nearly_thin)}")
    lines.append(f"proper-step bounds  {mark(report.proper_steps_ok)}")
    lines.append(
        f"length bound        {mark(report.length_bound_ok)} ({report.length} <= {report.length_bound})"
    )
    if report.thinness_violation is not None:
        kind, step, v = report.thinness_violation
        lines.append(f"first thinness violation: {kind} {format_vec(v)} at step {step}")
    if report.control_violation_step is not None:
        lines.append(f"first control violation at step {report.control_violation_step}")
    if report.monotonicity_violation_step is not None:
        lines.append(f"first monotonicity violation at step {report.monotonicity_violation_step}")


def run(command: str, instance: Optional[Instance], flags: Optional[dict] = None) -> tuple:
    """Execute a subcommand; returns ``(report_text, exit_code)``."""
    flags = dict(flags or {})
    lines: list = []

    if command == "bounds":
        if instance is not None:
            control = _control_for(instance, flags)
            d = flags.get("d") if flags.get("d") is not None else instance.dim
        else:
            control = Control.affine(flags["step"], flags["n0"])
            d = flags["d"]
        table = build_bound_table(control, d)
        if flags.get("json"):
            return json.dumps(table.to_json()), EXIT_OK
        lines.append(f"control g(x) = x + {control.step}, n0 = {control.n0}, d = {d}")
        lines.append("N = (" + ",".join(str(x) for x in table.N) + ")")
        lines.append("L = (" + ",".join(str(x) for x in table.L) + ")")
        lines.append(f"thin ideals <= {thin_ideal_count_bound(table)}")
        lines.append(f"nearly thin filters <= {filter_count_bound(table)}")
        return "\n".join(lines), EXIT_OK

    if instance is None:
        raise ValueError(f"command {command!r} needs an instance")
    if flags.get("source") is not None:
        instance = Instance(instance.model, instance.target, tuple(flags["source"]), instance.control)

    if command == "classify":
        c = classify(instance.model)
        for name in ("is_vas", "is_reset", "is_transfer", "is_strongly_increasing", "is_invertible"):
            lines.append(f"{name[3:]:<20} {'yes' if getattr(c, name) else 'no'}")
        lines.append("determinants        " + " ".join(str(x) for x in c.determinants))
        return "\n".join(lines), EXIT_OK

    if command == "oracle":
        if instance.source is None:
            raise ValueError("the oracle needs a source configuration")
        if isinstance(instance.model, Vas) or classify(instance.model).is_vas:
            ok = karp_miller_covers(instance.model, instance.source, instance.target)
            lines.append(f"Karp-Miller: {'coverable' if ok else 'not coverable'}")
            return "\n".join(lines), _verdict_code(ok)
        res = bounded_forward_covers(
            instance.model,
            instance.source,
            instance.target,
            flags.get("depth") or 50,
            flags.get("norm_cap") or 1000,
        )
        lines.append(f"bounded forward search: {res.value}")
        code = {CoverResult.YES: EXIT_COVERABLE, CoverResult.NO_WITHIN_BOUNDS: EXIT_NOT_COVERABLE}
        return "\n".join(lines), code.get(res, EXIT_OK)

    control = _control_for(instance, flags)
    kwargs = _engine_kwargs(flags)
    try:
        if command in ("check", "dual", "monitor", "witness"):
            view = flags.get("view") or ("dual" if command == "dual" else "classical")
            engine = backward_dual if view == "dual" else backward_classical
            chain, verdict = engine(instance.model, instance.target, instance.source, **kwargs)
        elif command == "both":
            chain, verdict = backward_classical(instance.model, instance.target, instance.source, **kwargs)
            chain2, verdict2 = backward_dual(instance.model, instance.target, instance.source, **kwargs)
            if not views_agree(chain, chain2) or verdict.coverable != verdict2.coverable:
                lines.append("MISMATCH between classical and dual views")
                return "\n".join(lines), EXIT_ERROR
            lines.append(f"classical and dual views agree on all {chain.length + 1} steps")
        else:
            raise ValueError(f"unknown command {command!r}")
    except ResourceLimitExceeded as exc:
        return f"resource limit: {exc}", EXIT_RESOURCE

    _emit_artifacts(chain, control, flags)

    if command == "witness":
        if instance.source is None:
            raise ValueError("witness extraction needs a source configuration")
        w = extract_pseudo_witness(chain, instance.source)
        if w is None:
            lines.append("not coverable: no pseudo-witness")
            return "\n".join(lines), EXIT_NOT_COVERABLE
        ex = replay_pseudo_witness(instance.model, w, instance.source)
        lines.append("pseudo-witness: " + format_vectors(w))
        lines.append("execution:      " + format_vectors(ex))
        return "\n".join(lines), EXIT_COVERABLE

    _describe_chain(chain, lines)
    if command == "monitor":
        lines.append(f"control g(x) = x + {control.step}, n0 = {control.n0}")
        _monitor_lines(run_monitors(chain, control), lines)
    _describe_verdict(instance, verdict, lines)
    return "\n".join(lines), _verdict_code(verdict.coverable)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _vector(text: str) -> tuple:
    return tuple(int(x) for x in text.replace(",", " ").split())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="covchain", description="Backward coverability for VAS and affine nets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine_opts(sp):
        sp.add_argument("instance")
        sp.add_argument("--source", type=_vector, help="override the source, e.g. '10 0'")
        sp.add_argument("--trace", metavar="FILE", help="write a JSON-lines chain trace")
        sp.add_argument("--csv", metavar="FILE", help="write a per-step CSV summary")
        sp.add_argument("--control-step", type=int)
        sp.add_argument("--control-n0", type=int)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--max-iterations", type=int)
        sp.add_argument("--max-size", type=int)

    for name, help_ in [
        ("check", "classical backward algorithm"),
        ("dual", "dual (descending chain) algorithm"),
        ("both", "run both views and cross-check them"),
        ("monitor", "run and check control, monotonicity and thinness"),
        ("witness", "extract and replay a pseudo-witness"),
    ]:
        sp = sub.add_parser(name, help=help_)
        engine_opts(sp)
        if name in ("monitor", "witness"):
            sp.add_argument("--view", choices=["classical", "dual"])

    sp = sub.add_parser("classify", help="net class flags")
    sp.add_argument("instance")

    sp = sub.add_parser("oracle", help="Karp-Miller (VAS) or bounded forward search")
    sp.add_argument("instance")
    sp.add_argument("--source", type=_vector)
    sp.add_argument("--depth", type=int, default=50)
    sp.add_argument("--norm-cap", type=int, default=1000)

    sp = sub.add_parser("bounds", help="print the N/L bound tables")
    sp.add_argument("instance", nargs="?")
    sp.add_argument("--d", type=int)
    sp.add_argument("--step", type=int)
    sp.add_argument("--n0", type=int)
    sp.add_argument("--control-step", type=int)
    sp.add_argument("--control-n0", type=int)
    sp.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "instance")}
    try:
        inst = load_instance(args.instance) if getattr(args, "instance", None) else None
        if args.command == "bounds" and inst is None and None in (args.d, args.step, args.n0):
            parser.error("bounds needs an instance or all of --d, --step, --n0")
        text, code = run(args.command, inst, flags)
    except (ParseError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a property failure (including a
non-synchronizing input), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import automaton as am
from .automaton import Automaton, AutomatonError, NoSynchronizingSampleError
from .bounds import BoundError, bound_report, cerny_bound, formula_diameter_cap, m_lower
from .cayley import CayleyGraph
from .groups import FAMILIES, GroupError, make_family
from .repr_chain import ChainError, StandardRep, build_chain, letter_diameter

CSV_VERSION = 1
COLUMNS = (
    "trial", "stream", "n", "diam", "m_lower", "cerny", "rystsov", "main",
    "reset_len", "reset_word", "expansion_len",
    "max_expanding", "max_gap_bound", "gap_violations",
    "cerny_ok", "main_ok", "chain_ok",
)
CHAIN_STATE_CAP = 16


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    n: int | None = None
    p: int | None = None
    m: int | None = None
    k: int | None = None
    gens: str | None = None
    extra_letters: int = 1
    extra_kind: str = "random-map"
    trials: int = 1
    seed: int = 0
    chain: bool = False
    reset_cap: int = am.RESET_STATE_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if self.extra_letters < 1:
            raise UsageError("--extra-letters must be at least 1")
        if self.extra_kind not in am.EXTRA_KINDS:
            raise UsageError(f"--extra-kind must be one of {am.EXTRA_KINDS}")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")

    def params(self) -> dict:
        return {"n": self.n, "p": self.p, "m": self.m, "k": self.k}


def trial_rng(seed: int, trial: int) -> tuple[np.random.Generator, int]:
    """Independent stream per (seed, trial); also returns a printable stream id."""
    ss = np.random.SeedSequence([seed, trial])
    return np.random.default_rng(ss), int(ss.generate_state(1)[0])


def _fmt_word(word: Sequence[int]) -> str:
    return ".".join(map(str, word))


def _replay_reset(a: Automaton, word: Sequence[int]) -> None:
    img = am.apply(a, a.full, word)
    if img == 0 or img & (img - 1):
        raise AssertionError(f"witness {_fmt_word(word)} does not reset")


def _subsets(n: int):
    full = (1 << n) - 1
    for mask in range(1, full):
        if bin(mask).count("1") >= 2:
            yield mask


def run_trial(cfg: ExperimentConfig, trial: int) -> dict:
    gens = make_family(cfg.family, gens=cfg.gens, **cfg.params())
    n = gens.group.order
    rng, stream = trial_rng(cfg.seed, trial)
    a = am.random_cayley_automaton(gens, cfg.extra_letters, cfg.extra_kind, rng)
    diam = CayleyGraph(gens).diameter()
    rep = bound_report(n, diam, m_lower(cfg.family, **cfg.params()))
    length, word = am.shortest_reset_word(a, cfg.reset_cap)
    _replay_reset(a, word)
    synchronizer = am.expansion_synchronizer(a)
    _replay_reset(a, synchronizer)
    if length > len(synchronizer):
        raise AssertionError("shortest reset word longer than a constructed one")  # pragma: no cover
    row = {
        "trial": trial,
        "stream": stream,
        "n": n,
        "diam": diam,
        "m_lower": rep.m_lower,
        "cerny": rep.cerny,
        "rystsov": rep.rystsov,
        "main": rep.main,
        "reset_len": length,
        "reset_word": _fmt_word(word),
        "expansion_len": len(synchronizer),
        "max_expanding": "",
        "max_gap_bound": "",
        "gap_violations": "",
        "cerny_ok": length <= rep.cerny,
        "main_ok": length <= rep.main,
        "chain_ok": "",
    }
    if cfg.chain:
        if n > CHAIN_STATE_CAP:
            raise UsageError(f"chain analysis is capped at {CHAIN_STATE_CAP} states")
        srep = StandardRep(a)
        worst_e = worst_b = violations = 0
        for mask in _subsets(n):
            if mask == a.full:
                continue
            e = len(am.shortest_expanding_word(a, mask))
            report = build_chain(srep, mask, diam)
            b = report.gap_bound
            worst_e = max(worst_e, e)
            if b is None or e > b:
                violations += 1
            else:
                worst_b = max(worst_b, b)
        row.update(max_expanding=worst_e, max_gap_bound=worst_b, gap_violations=violations,
                   chain_ok=violations == 0)
    return row


def _row_ok(row: dict) -> bool:
    return row["cerny_ok"] is not False and row["main_ok"] is not False and row["chain_ok"] is not False


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> list[dict]:
    """Rows in trial order; identical for any ``jobs``."""
    trials = range(cfg.trials)
    if jobs <= 1:
        return [run_trial(cfg, t) for t in trials]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_trial, [cfg] * cfg.trials, trials))


def render_csv(cfg: ExperimentConfig, rows: list[dict]) -> str:
    buf = io.StringIO()
    config = json.dumps(asdict(cfg), sort_keys=True, separators=(",", ":"))
    buf.write(f"# cayleysync-experiment v{CSV_VERSION} columns={','.join(COLUMNS)} config={config}\n")
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (int(v) if isinstance(v, bool) else v) for k, v in row.items()})
    return buf.getvalue()


def render_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(v) -> str:
    if isinstance(v, dict):
        return " ".join(f"{k}={x}" for k, x in v.items())
    return str(v)


def _table(d: dict) -> str:
    width = max(len(k) for k in d)
    return "".join(f"{k:<{width}}  {_cell(v)}\n" for k, v in d.items())


def _load_automaton(path: str) -> Automaton:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    if not isinstance(data, dict):
        raise UsageError("automaton JSON must be an object")
    return Automaton.from_json(data)


def _parse_subset(text: str, n: int) -> int:
    try:
        states = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad --subset {text!r}") from exc
    if any(not 0 <= x < n for x in states):
        raise UsageError(f"--subset states must lie in 0..{n - 1}")
    return am.mask_of(states)


def _automaton_from_args(args) -> Automaton:
    if args.automaton:
        return _load_automaton(args.automaton)
    if not args.family:
        raise UsageError("give --automaton or --family")
    cfg = _config_from_args(args, trials=1)
    gens = make_family(cfg.family, gens=cfg.gens, **cfg.params())
    rng, _ = trial_rng(cfg.seed, 0)
    return am.random_cayley_automaton(gens, cfg.extra_letters, cfg.extra_kind, rng)


def _config_from_args(args, trials=None) -> ExperimentConfig:
    return ExperimentConfig(
        family=args.family,
        n=args.n, p=args.p, m=args.m, k=args.k, gens=args.gens,
        extra_letters=args.extra_letters,
        extra_kind=args.extra_kind,
        trials=args.trials if trials is None else trials,
        seed=args.seed,
        chain=getattr(args, "chain", False),
    )


# subcommands

def cmd_bound(args) -> int:
    params = {"n": args.n, "p": args.p, "m": args.m, "k": args.k}
    mv = m_lower(args.family, **params)
    if args.diam is None:
        gens = make_family(args.family, gens=args.gens, **params)
        order, diam, source = gens.group.order, CayleyGraph(gens).diameter(), "bfs"
    else:
        if args.order is None:
            raise UsageError("--diam needs --order for groups too large to build")
        order, diam, source = args.order, args.diam, "given"
    cap = formula_diameter_cap(args.family, args.gens, **params)
    rep = bound_report(order, diam, mv, cap)
    given = {k: v for k, v in params.items() if v is not None}
    if args.gens:
        given["gens"] = args.gens
    out = {"family": args.family, "params": given}
    out.update(rep.to_dict())
    out["diam_source"] = source
    out["m_note"] = mv.note
    if args.format == "json":
        _emit(render_json(out), args.out)
    else:
        _emit(_table(out), args.out)
    return 0


def cmd_exact(args) -> int:
    a = _load_automaton(args.input)
    pair = am.unmergeable_pair(a)
    if pair is not None:
        print(f"not synchronizing: states {pair[0]} and {pair[1]} can never be merged", file=sys.stderr)
        return 1
    length, word = am.shortest_reset_word(a, args.cap)
    _replay_reset(a, word)
    target = am.states_of(am.apply(a, a.full, word))[0]
    out = {"n": a.n, "reset_length": length, "witness": list(word), "replay_state": target,
           "cerny_bound": cerny_bound(a.n), "cerny_ok": length <= cerny_bound(a.n)}
    _emit(render_json(out) if args.format == "json" else _table(out), args.out)
    return 0


def cmd_expand(args) -> int:
    a = _automaton_from_args(args)
    mask = _parse_subset(args.subset, a.n)
    size = bin(mask).count("1")
    if not 1 <= size < a.n:
        raise UsageError("--subset must be a nonempty proper subset")
    try:
        word = am.shortest_expanding_word(a, mask)
    except RuntimeError as exc:
        print(f"no expanding word: {exc}", file=sys.stderr)
        return 1
    pulled = am.preimage_word(a, mask, word)
    if bin(pulled).count("1") <= bin(mask).count("1"):
        raise AssertionError("expanding word failed to replay")  # pragma: no cover
    out = {"n": a.n, "subset": am.states_of(mask), "length": len(word), "word": list(word),
           "preimage": am.states_of(pulled)}
    _emit(render_json(out) if args.format == "json" else _table(out), args.out)
    return 0


def cmd_chain(args) -> int:
    a = _automaton_from_args(args)
    mask = _parse_subset(args.subset, a.n)
    report = build_chain(StandardRep(a), mask, letter_diameter(a))
    e = len(am.shortest_expanding_word(a, mask)) if am.is_synchronizing(a) else None
    out = {"n": a.n, "subset": am.states_of(mask), **report.to_dict(), "expanding_length": e}
    ok = report.gap_bound is not None and e is not None and e <= report.gap_bound
    out["within_gap_bound"] = ok
    _emit(render_json(out) if args.format == "json" else _table(out), args.out)
    return 0 if ok else 1


def cmd_experiment(args) -> int:
    cfg = _config_from_args(args)
    rows = run_experiment(cfg, args.jobs)
    if args.format == "json":
        text = render_json({"version": CSV_VERSION, "config": asdict(cfg), "columns": list(COLUMNS), "rows": rows})
    else:
        text = render_csv(cfg, rows)
    _emit(text, args.out)
    bad = [r["trial"] for r in rows if not _row_ok(r)]
    if bad:
        print(f"property failure in trials {bad}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    from . import verify

    results = verify.SUITES[args.suite]()
    failed = 0
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failed += not ok
    print(f"{len(results) - failed}/{len(results)} passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleysync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p, required=False):
        p.add_argument("--family", choices=FAMILIES, required=required)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--gens", choices=("rot-refl", "two-refl", "coxeter", "transposition-cycle"))

    def sample_args(p):
        p.add_argument("--extra-letters", type=int, default=1)
        p.add_argument("--extra-kind", choices=am.EXTRA_KINDS, default="random-map")
        p.add_argument("--seed", type=int, default=0)

    def output_args(p, formats, default):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out")

    p = sub.add_parser("bound", help="closed-form bounds with a BFS diameter")
    family_args(p, required=True)
    p.add_argument("--diam", type=int, help="skip BFS and use this diameter (needs --order)")
    p.add_argument("--order", type=int, help="group order when --diam is given")
    output_args(p, ("table", "json"), "table")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact", help="exact shortest reset word of an automaton JSON")
    p.add_argument("input", help="automaton JSON file, or - for stdin")
    p.add_argument("--cap", type=int, default=am.RESET_STATE_CAP)
    output_args(p, ("table", "json"), "table")
    p.set_defaults(func=cmd_exact)

    for name, func, text in (("expand", cmd_expand, "shortest expanding word for one subset"),
                             ("chain", cmd_chain, "subspace chain report for one subset")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--automaton", help="automaton JSON; otherwise sample from --family")
        family_args(p)
        sample_args(p)
        p.add_argument("--subset", required=True, help="comma separated states")
        output_args(p, ("table", "json"), "table")
        p.set_defaults(func=func, trials=1)

    p = sub.add_parser("experiment", help="seeded random trials written as CSV or JSON")
    family_args(p, required=True)
    sample_args(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--chain", action="store_true", help="also check every subset against its gap bound")
    p.add_argument("--jobs", type=int, default=1)
    output_args(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="fixed property suites")
    p.add_argument("suite", choices=("characters", "chain-lemmas", "families"))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSynchronizingSampleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, GroupError, BoundError, AutomatonError, ChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

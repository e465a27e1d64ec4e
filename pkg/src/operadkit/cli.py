"""Command-line front end: workspaces, composition, evaluation, law runs.

A workspace is a single line-oriented text file mixing four kinds of
declarations, each on its own line:

    nat_bound = 3                                   config key=value
    gen sum3 : ([N, N, N]) -> N                     generator
    entry sum3 : (N, [N, N, N]) = builtin sum       operation fixture
    term t = (sum3 (leaf N) (leaf N) (leaf N))      tree over generators

``#`` starts a comment.  Printing a workspace is canonical (sorted
names, fixed whitespace) and round-trips through the parser.

Exit codes: 0 success, 1 law-suite failure, 2 user input error,
3 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace

from .colorseq import (
    IndexOutOfRange,
    LengthMismatch,
    format_color_seq,
    parse_color_seq,
    parse_color_seq_tokens,
    splice,
)
from .core import (
    CONFIG_KEYS,
    ConfigError,
    LawConfig,
    SignatureMismatch,
    Signature,
    parse_law_config,
    run_law_suite,
)
from .fn_operad import (
    BUILTIN_NAMES,
    ColorMismatch,
    FnEntry,
    FnOperad,
    make_builtin,
    tuple_space,
)
from .free_operad import (
    FreeOperad,
    Generator,
    Leaf,
    Tree,
    UnboundGenerator,
    eval_hom,
    format_generator,
    format_term,
    graft,
    leaves,
    parse_generator_decl,
    parse_term_tokens,
    tree_signature,
)
from .universe import (
    ExponentialBlowup,
    ParseError,
    TableDomainError,
    TokenStream,
    Value,
    format_code,
    format_value,
    inhabits,
    parse_code_tokens,
    parse_value,
    parse_value_tokens,
    tokenize,
)


class WorkspaceError(ValueError):
    """A workspace file failed to parse or validate."""


@dataclass(frozen=True)
class EntryDecl:
    """An operation fixture as written: builtin reference or literal table."""

    name: str
    sig: Signature
    builtin: tuple[str, int | None] | None = None
    table: tuple[tuple[tuple[Value, ...], Value], ...] | None = None


@dataclass
class Workspace:
    generators: dict[str, Generator] = field(default_factory=dict)
    entry_decls: dict[str, EntryDecl] = field(default_factory=dict)
    terms: dict[str, Tree] = field(default_factory=dict)
    config_overrides: dict[str, int] = field(default_factory=dict)

    def law_config(self) -> LawConfig:
        config = LawConfig()
        for key, value in self.config_overrides.items():
            config = replace(config, **{key: value})
        return config

    def entry(self, name: str) -> FnEntry:
        decl = self.entry_decls.get(name)
        if decl is None:
            raise WorkspaceError(f"no entry named {name!r}")
        return realize_entry(decl, self.law_config().budget)


def realize_entry(decl: EntryDecl, budget) -> FnEntry:
    if decl.builtin is not None:
        kind, k = decl.builtin
        return make_builtin(kind, decl.sig, k)
    assert decl.table is not None
    mapping = dict(decl.table)
    expected = list(tuple_space(decl.sig.inputs, budget))
    if set(mapping) != set(expected):
        raise WorkspaceError(
            f"entry {decl.name!r}: table must cover the enumerated domain exactly "
            f"({len(expected)} tuples at nat_bound {budget.nat_bound}, got {len(mapping)})"
        )
    for args, out in mapping.items():
        if not inhabits(out, decl.sig.output):
            raise WorkspaceError(
                f"entry {decl.name!r}: output {format_value(out)} does not inhabit the output color"
            )

    def lookup(args: tuple[Value, ...]) -> Value:
        try:
            return mapping[args]
        except KeyError:
            raise TableDomainError(
                f"entry {decl.name!r} has no row for ({', '.join(format_value(v) for v in args)})"
            )

    return FnEntry(decl.sig, lookup, label=decl.name)


def _parse_signature_tokens(ts: TokenStream) -> Signature:
    ts.expect("(")
    output = parse_code_tokens(ts)
    ts.expect(",")
    inputs = parse_color_seq_tokens(ts)
    ts.expect(")")
    return Signature(output, inputs)


def _parse_entry_line(line: str) -> EntryDecl:
    ts = TokenStream(tokenize(line))
    ts.expect("entry")
    name = ts.next()
    ts.expect(":")
    sig = _parse_signature_tokens(ts)
    ts.expect("=")
    kind = ts.next()
    if kind == "builtin":
        which = ts.next()
        if which not in BUILTIN_NAMES:
            raise ParseError(f"unknown builtin {which!r}")
        k: int | None = None
        if which == "proj":
            tok = ts.next()
            if not tok.isdigit():
                raise ParseError(f"proj needs a slot number, got {tok!r}")
            k = int(tok)
        if not ts.done():
            raise ParseError(f"trailing input after builtin: {ts.peek()!r}")
        return EntryDecl(name, sig, builtin=(which, k))
    if kind == "table":
        ts.expect("{")
        rows: list[tuple[tuple[Value, ...], Value]] = []
        while ts.peek() != "}":
            if rows:
                ts.expect(";")
            ts.expect("(")
            args: list[Value] = []
            while ts.peek() != ")":
                if args:
                    ts.expect(",")
                args.append(parse_value_tokens(ts))
            ts.expect(")")
            ts.expect("->")
            rows.append((tuple(args), parse_value_tokens(ts)))
        ts.expect("}")
        if not ts.done():
            raise ParseError(f"trailing input after table: {ts.peek()!r}")
        return EntryDecl(name, sig, table=tuple(rows))
    raise ParseError(f"expected 'builtin' or 'table', got {kind!r}")


def _parse_term_line(line: str, generators: dict[str, Generator]) -> tuple[str, Tree]:
    ts = TokenStream(tokenize(line))
    ts.expect("term")
    name = ts.next()
    ts.expect("=")
    tree = parse_term_tokens(ts, generators)
    if not ts.done():
        raise ParseError(f"trailing input after term: {ts.peek()!r}")
    return name, tree


def parse_workspace(text: str) -> Workspace:
    ws = Workspace()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        try:
            if head == "gen":
                gen = parse_generator_decl(line)
                if gen.name in ws.generators:
                    raise WorkspaceError(f"duplicate generator {gen.name!r}")
                ws.generators[gen.name] = gen
            elif head == "entry":
                decl = _parse_entry_line(line)
                if decl.name in ws.entry_decls:
                    raise WorkspaceError(f"duplicate entry {decl.name!r}")
                ws.entry_decls[decl.name] = decl
            elif head == "term":
                name, tree = _parse_term_line(line, ws.generators)
                if name in ws.terms:
                    raise WorkspaceError(f"duplicate term {name!r}")
                ws.terms[name] = tree
            elif "=" in line:
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in CONFIG_KEYS:
                    raise WorkspaceError(f"unknown config key {key!r}")
                try:
                    ws.config_overrides[key] = int(value.strip())
                except ValueError:
                    raise WorkspaceError(f"{key} needs an integer, got {value.strip()!r}")
            else:
                raise WorkspaceError(f"unrecognized declaration {head!r}")
        except (ParseError, UnboundGenerator, ValueError) as exc:
            raise WorkspaceError(f"line {lineno}: {exc}") from exc
    return ws


def format_entry_decl(decl: EntryDecl) -> str:
    if decl.builtin is not None:
        kind, k = decl.builtin
        suffix = f"builtin {kind}" if k is None else f"builtin {kind} {k}"
    else:
        assert decl.table is not None
        rows = "; ".join(
            f"({', '.join(format_value(v) for v in args)}) -> {format_value(out)}"
            for args, out in decl.table
        )
        suffix = f"table {{{rows}}}"
    return (
        f"entry {decl.name} : ({format_code(decl.sig.output)}, "
        f"{format_color_seq(decl.sig.inputs)}) = {suffix}"
    )


def format_workspace(ws: Workspace) -> str:
    lines: list[str] = []
    for key in sorted(ws.config_overrides):
        lines.append(f"{key} = {ws.config_overrides[key]}")
    for name in sorted(ws.generators):
        lines.append(format_generator(ws.generators[name]))
    for name in sorted(ws.entry_decls):
        lines.append(format_entry_decl(ws.entry_decls[name]))
    for name in sorted(ws.terms):
        lines.append(f"term {name} = {format_term(ws.terms[name])}")
    return "\n".join(lines) + "\n"


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_workspace(fh.read())
    except OSError as exc:
        raise WorkspaceError(f"cannot read workspace {path!r}: {exc}") from exc


def save_workspace(ws: Workspace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_workspace(ws))


# --- subcommands ------------------------------------------------------------

USER_ERRORS = (
    WorkspaceError,
    ParseError,
    ColorMismatch,
    IndexOutOfRange,
    LengthMismatch,
    UnboundGenerator,
    SignatureMismatch,
    TableDomainError,
    ExponentialBlowup,
    ValueError,
)


def _cmd_splice(args: argparse.Namespace) -> int:
    base = parse_color_seq(args.base)
    insert = parse_color_seq(args.insert)
    print(format_color_seq(splice(base, args.index, insert)))
    return 0


def _cmd_compose(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    for name in (args.parent, args.child):
        if name not in ws.terms:
            raise WorkspaceError(f"no term named {name!r}")
    composite = graft(ws.terms[args.parent], args.index, ws.terms[args.child])
    if args.name in ws.terms:
        raise WorkspaceError(f"term {args.name!r} already exists")
    ws.terms[args.name] = composite
    print(str(tree_signature(composite)))
    save_workspace(ws, args.workspace)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    if args.term not in ws.terms:
        raise WorkspaceError(f"no term named {args.term!r}")
    tree = ws.terms[args.term]
    env = {}
    for gen_name in sorted(_generator_names(tree)):
        env[gen_name] = ws.entry(gen_name)
    entry = eval_hom(tree, env)
    values = tuple(parse_value(text) for text in args.values)
    colors = leaves(tree)
    if len(values) != len(colors):
        raise WorkspaceError(
            f"term {args.term!r} takes {len(colors)} arguments, got {len(values)}"
        )
    for k, (value, color) in enumerate(zip(values, colors)):
        if not inhabits(value, color):
            raise WorkspaceError(
                f"argument {k} ({format_value(value)}) does not inhabit {format_code(color)}"
            )
    print(format_value(entry.apply(values)))
    return 0


def _generator_names(tree: Tree) -> set[str]:
    if isinstance(tree, Leaf):
        return set()
    names = {tree.gen.name}
    for child in tree.children:
        names |= _generator_names(child)
    return names


def _cmd_check_laws(args: argparse.Namespace) -> int:
    config = LawConfig()
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = parse_law_config(fh.read(), base=config)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
    for key in CONFIG_KEYS:
        flag = getattr(args, key)
        if flag is not None:
            config = replace(config, **{key: flag})
    instance = (
        FnOperad(break_cast=args.break_cast)
        if args.instance == "fn"
        else FreeOperad(break_cast=args.break_cast)
    )
    report = run_law_suite(instance, config)
    print(report.render())
    print(report.summary_line())
    return 0 if report.ok else 1


def _cmd_show(args: argparse.Namespace) -> int:
    ws = load_workspace(args.workspace)
    sys.stdout.write(format_workspace(ws))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="operadkit",
        description="Compose typed operations operadically and check the governing laws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_splice = sub.add_parser("splice", help="splice one color sequence into another")
    p_splice.add_argument("base", help='base sequence, e.g. "[N, N, N]"')
    p_splice.add_argument("index", type=int, help="slot to replace")
    p_splice.add_argument("insert", help="sequence spliced into the slot")
    p_splice.set_defaults(func=_cmd_splice)

    p_compose = sub.add_parser("compose", help="graft one workspace term into another")
    p_compose.add_argument("--workspace", required=True)
    p_compose.add_argument("parent", help="term receiving the graft")
    p_compose.add_argument("index", type=int, help="leaf slot of the parent")
    p_compose.add_argument("child", help="term grafted in")
    p_compose.add_argument("name", help="name for the stored composite")
    p_compose.set_defaults(func=_cmd_compose)

    p_eval = sub.add_parser("eval", help="evaluate a term on argument values")
    p_eval.add_argument("--workspace", required=True)
    p_eval.add_argument("term")
    p_eval.add_argument("values", nargs="*", help='value literals, e.g. 2 true "(pair 0 1)"')
    p_eval.set_defaults(func=_cmd_eval)

    p_laws = sub.add_parser("check-laws", help="run the randomized law suite")
    p_laws.add_argument("instance", choices=("fn", "free"))
    p_laws.add_argument("--config", help="key=value config file")
    p_laws.add_argument("--trials", type=int)
    p_laws.add_argument("--seed", type=int)
    p_laws.add_argument("--nat-bound", dest="nat_bound", type=int)
    p_laws.add_argument("--enum-ceiling", dest="enum_ceiling", type=int)
    p_laws.add_argument("--max-arity", dest="max_arity", type=int)
    p_laws.add_argument("--max-code-depth", dest="max_code_depth", type=int)
    p_laws.add_argument(
        "--break-cast",
        action="store_true",
        help="deliberately corrupt composition (mutation-testing hook)",
    )
    p_laws.set_defaults(func=_cmd_check_laws)

    p_show = sub.add_parser("show", help="print a workspace in canonical form")
    p_show.add_argument("--workspace", required=True)
    p_show.set_defaults(func=_cmd_show)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

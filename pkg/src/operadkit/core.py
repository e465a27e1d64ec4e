"""The abstract operad interface, signature casts, and the law harness.

An operad instance bundles typed entries with units, slot-wise
composition, and a permutation action.  The four governing laws
(horizontal and vertical associativity, left and right unity) plus the
permutation round trip are implemented here as executable checks that
work against any instance, and ``run_law_suite`` fuzzes them with
seeded random entries.

Axiom checks follow a fixed discipline: build both composites, verify
every intermediate signature against the splice arithmetic, construct a
cast witness between the two final signatures, retag one side through
it, and only then compare entries.  A witness is constructible only
from structurally equal signatures, so at runtime the retag carries no
information; its construction is the point, since it is exactly where a
defective composition surfaces.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Generic, Sequence, TypeVar

from .colorseq import (
    ColorSeq,
    Permutation,
    apply_perm,
    format_color_seq,
    nth_color,
    splice,
)
from .universe import Code, count_values, format_code, iter_codes

Entry = TypeVar("Entry")


class SignatureMismatch(Exception):
    """An entry's signature differs from what an operation requires."""


class WitnessUnconstructible(Exception):
    """Cast witness requested between structurally distinct signatures."""


class PreconditionViolated(Exception):
    """A law check was invoked outside its parameter constraints."""


@dataclass(frozen=True)
class Signature:
    """Output color plus non-empty input color sequence; indexes entry sets."""

    output: Code
    inputs: ColorSeq

    def __post_init__(self) -> None:
        if len(self.inputs) < 1:
            raise ValueError("input sequence must be non-empty")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def __str__(self) -> str:
        return f"({format_code(self.output)}, {format_color_seq(self.inputs)})"


@dataclass(frozen=True)
class CastWitness:
    """A checked equality of signatures, licensing a retag of an entry."""

    source: Signature
    target: Signature

    def __post_init__(self) -> None:
        if self.source != self.target:
            raise WitnessUnconstructible(
                f"signatures differ: {self.source} vs {self.target}"
            )


def cast(witness: CastWitness, entry: Any) -> Any:
    """Retag ``entry`` with the witness target; entry data is unchanged."""
    if entry.sig != witness.source:
        raise SignatureMismatch(
            f"entry has signature {entry.sig}, witness expects {witness.source}"
        )
    return entry.with_signature(witness.target)


@dataclass(frozen=True)
class Budget:
    """Resource bounds for extensional entry comparison."""

    nat_bound: int = 3
    enum_ceiling: int = 100_000


class OperadInstance(ABC, Generic[Entry]):
    """Operations one concrete operad must supply to the law harness."""

    name: str = "operad"

    def entry_sig(self, entry: Entry) -> Signature:
        return entry.sig

    @abstractmethod
    def unit(self, color: Code) -> Entry:
        """The arity-1 identity entry at ``color``."""

    @abstractmethod
    def comp(self, parent: Entry, i: int, child: Entry) -> Entry:
        """Graft ``child`` into input slot ``i`` of ``parent``."""

    @abstractmethod
    def perm_fwd(self, entry: Entry, sigma: Permutation) -> Entry:
        """The entry over the reindexed input sequence."""

    @abstractmethod
    def perm_bwd(self, entry: Entry, sigma: Permutation) -> Entry:
        """Two-sided inverse of :meth:`perm_fwd` at the same ``sigma``."""

    @abstractmethod
    def entry_eq(self, e1: Entry, e2: Entry, budget: Budget) -> bool:
        """Decidable entry equality, extensional where needed."""

    @abstractmethod
    def sample_entries(
        self, sig: Signature, budget: Budget, rng: random.Random, count: int = 1
    ) -> list[Entry]:
        """Random entries of exactly the requested signature."""

    def describe_entry(self, entry: Entry) -> str:
        return repr(entry)


class _CompositionSignatureBroken(Exception):
    """Internal: a composition came back with the wrong signature tag."""


def _checked_comp(
    instance: OperadInstance, parent: Any, i: int, child: Any
) -> Any:
    """Compose and verify the output signature against the splice law."""
    psig = instance.entry_sig(parent)
    csig = instance.entry_sig(child)
    out = instance.comp(parent, i, child)
    expected = Signature(psig.output, splice(psig.inputs, i, csig.inputs))
    got = instance.entry_sig(out)
    if got != expected:
        raise _CompositionSignatureBroken(
            f"composition at slot {i} produced signature {got}, expected {expected}"
        )
    return out


def _require(condition: bool, parameter: str) -> None:
    if not condition:
        raise PreconditionViolated(f"parameter constraint failed: {parameter}")


def check_horizontal_assoc(
    instance: OperadInstance,
    alpha: Any,
    beta: Any,
    gamma: Any,
    i: int,
    j: int,
    budget: Budget,
) -> bool:
    """Grafting into two distinct slots commutes (up to the slot shift)."""
    asig = instance.entry_sig(alpha)
    bsig = instance.entry_sig(beta)
    gsig = instance.entry_sig(gamma)
    n = asig.arity
    ell = bsig.arity
    _require(n >= 2, f"2 <= n (n={n})")
    _require(0 <= i, f"0 <= i (i={i})")
    _require(i < j, f"i < j (i={i}, j={j})")
    _require(j < n, f"j < n (j={j}, n={n})")
    _require(
        bsig.output == nth_color(asig.inputs, i),
        f"entry i of the base inputs is the first graft's output color (slot {i})",
    )
    _require(
        gsig.output == nth_color(asig.inputs, j),
        f"entry j of the base inputs is the second graft's output color (slot {j})",
    )
    try:
        lhs = _checked_comp(instance, _checked_comp(instance, alpha, i, beta), ell - 1 + j, gamma)
        rhs = _checked_comp(instance, _checked_comp(instance, alpha, j, gamma), i, beta)
        witness = CastWitness(instance.entry_sig(lhs), instance.entry_sig(rhs))
    except (_CompositionSignatureBroken, WitnessUnconstructible):
        return False
    return instance.entry_eq(cast(witness, lhs), rhs, budget)


def check_vertical_assoc(
    instance: OperadInstance,
    alpha: Any,
    beta: Any,
    gamma: Any,
    i: int,
    j: int,
    budget: Budget,
) -> bool:
    """Grafting into a graft equals grafting the pre-grafted entry."""
    asig = instance.entry_sig(alpha)
    bsig = instance.entry_sig(beta)
    gsig = instance.entry_sig(gamma)
    n = asig.arity
    m = bsig.arity
    _require(0 <= i < n, f"0 <= i <= n-1 (i={i}, n={n})")
    _require(0 <= j < m, f"0 <= j <= m-1 (j={j}, m={m})")
    _require(
        bsig.output == nth_color(asig.inputs, i),
        f"entry i of the base inputs is the middle entry's output color (slot {i})",
    )
    _require(
        gsig.output == nth_color(bsig.inputs, j),
        f"entry j of the middle inputs is the inner entry's output color (slot {j})",
    )
    try:
        lhs = _checked_comp(instance, _checked_comp(instance, alpha, i, beta), i + j, gamma)
        rhs = _checked_comp(instance, alpha, i, _checked_comp(instance, beta, j, gamma))
        witness = CastWitness(instance.entry_sig(lhs), instance.entry_sig(rhs))
    except (_CompositionSignatureBroken, WitnessUnconstructible):
        return False
    return instance.entry_eq(cast(witness, lhs), rhs, budget)


def check_left_unity(instance: OperadInstance, alpha: Any, budget: Budget) -> bool:
    """Grafting an entry into the unit's single slot returns the entry."""
    asig = instance.entry_sig(alpha)
    try:
        composed = _checked_comp(instance, instance.unit(asig.output), 0, alpha)
        witness = CastWitness(instance.entry_sig(composed), asig)
    except (_CompositionSignatureBroken, WitnessUnconstructible):
        return False
    return instance.entry_eq(cast(witness, composed), alpha, budget)


def check_right_unity(instance: OperadInstance, alpha: Any, i: int, budget: Budget) -> bool:
    """Grafting the slot color's unit into any slot returns the entry."""
    asig = instance.entry_sig(alpha)
    _require(0 <= i < asig.arity, f"0 <= i <= n-1 (i={i}, n={asig.arity})")
    try:
        composed = _checked_comp(instance, alpha, i, instance.unit(nth_color(asig.inputs, i)))
        witness = CastWitness(instance.entry_sig(composed), asig)
    except (_CompositionSignatureBroken, WitnessUnconstructible):
        return False
    return instance.entry_eq(cast(witness, composed), alpha, budget)


def check_perm_bijection(
    instance: OperadInstance, entry: Any, sigma: Permutation, budget: Budget
) -> bool:
    """The permutation action round-trips in both directions."""
    sig = instance.entry_sig(entry)
    if len(sigma) != sig.arity:
        raise PreconditionViolated(
            f"permutation on {len(sigma)} letters, entry of arity {sig.arity}"
        )
    forward = instance.perm_fwd(entry, sigma)
    if instance.entry_sig(forward) != Signature(sig.output, apply_perm(sig.inputs, sigma)):
        return False
    if not instance.entry_eq(instance.perm_bwd(forward, sigma), entry, budget):
        return False
    # Other direction, on an entry that already lives over the permuted inputs.
    permuted = forward
    return instance.entry_eq(
        instance.perm_fwd(instance.perm_bwd(permuted, sigma), sigma), permuted, budget
    )


# --- randomized law suite ---------------------------------------------------

AXIOMS = (
    "horizontal_assoc",
    "vertical_assoc",
    "left_unity",
    "right_unity",
    "perm_bijection",
)

CONFIG_KEYS = ("trials", "seed", "nat_bound", "enum_ceiling", "max_arity", "max_code_depth")


class ConfigError(ValueError):
    """Malformed law-suite configuration text."""


@dataclass(frozen=True)
class LawConfig:
    """Knobs for one law-suite run; fully determines the trial set."""

    trials: int = 500
    seed: int = 0
    nat_bound: int = 3
    enum_ceiling: int = 100_000
    max_arity: int = 4
    max_code_depth: int = 1
    stop_after_failures: int | None = None

    @property
    def budget(self) -> Budget:
        return Budget(self.nat_bound, self.enum_ceiling)


def parse_law_config(text: str, base: LawConfig | None = None) -> LawConfig:
    """Parse line-oriented ``key=value`` configuration text."""
    config = base or LawConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            config = replace(config, **{key: int(value)})
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} needs an integer, got {value!r}")
    return config


@dataclass(frozen=True)
class TrialFailure:
    axiom: str
    trial: int
    seed: int
    detail: str
    inputs: tuple[str, ...]


@dataclass
class LawReport:
    instance: str
    config: LawConfig
    trials_run: dict[str, int] = field(default_factory=dict)
    passes: dict[str, int] = field(default_factory=dict)
    failures: list[TrialFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary_line(self) -> str:
        if self.ok:
            return f"PASS {self.config.trials}"
        return f"FAIL {len(self.failures)} {self.config.seed}"

    def render(self) -> str:
        lines = [
            f"law suite: {self.instance} "
            f"(trials={self.config.trials}, seed={self.config.seed}, "
            f"nat_bound={self.config.nat_bound}, enum_ceiling={self.config.enum_ceiling}, "
            f"max_arity={self.config.max_arity}, max_code_depth={self.config.max_code_depth})"
        ]
        for axiom in AXIOMS:
            run = self.trials_run.get(axiom, 0)
            passed = self.passes.get(axiom, 0)
            status = "ok" if passed == run else "FAILED"
            lines.append(f"  {axiom:<17} {passed}/{run} {status}")
        for failure in self.failures:
            lines.append(
                f"  failure: axiom={failure.axiom} trial={failure.trial} "
                f"seed={failure.seed} {failure.detail}"
            )
            for item in failure.inputs:
                lines.append(f"    {item}")
        return "\n".join(lines)


def signature_pool(config: LawConfig) -> list[tuple[Code, int]]:
    """Codes usable in sampled signatures, with their enumeration sizes."""
    pool = []
    for code in iter_codes(config.max_code_depth):
        size = count_values(code, config.nat_bound)
        if size <= config.enum_ceiling:
            pool.append((code, size))
    return pool


def _space(colors: Sequence[Code], nat_bound: int) -> int:
    total = 1
    for c in colors:
        total *= count_values(c, nat_bound)
    return total


# Soft caps keep randomized trials cheap; the config ceiling stays the
# hard bound that entry_eq enforces.
_SOFT_ENTRY_SPACE = 729
_SOFT_COMPOSITE_SPACE = 4096
_ARITY_WEIGHT = 2.0  # halves the odds per extra slot


class _Sampler:
    """Seeded signature sampler biased toward small enumeration spaces."""

    def __init__(self, config: LawConfig, rng: random.Random):
        self.config = config
        self.rng = rng
        pool = signature_pool(config)
        self.codes = [code for code, _ in pool]
        self.weights = [1.0 / (size * size) for _, size in pool]
        self.entry_cap = min(_SOFT_ENTRY_SPACE, config.enum_ceiling)
        self.composite_cap = min(_SOFT_COMPOSITE_SPACE, config.enum_ceiling)

    def code(self) -> Code:
        return self.rng.choices(self.codes, weights=self.weights)[0]

    def arity(self, lo: int = 1) -> int:
        choices = range(lo, self.config.max_arity + 1)
        weights = [_ARITY_WEIGHT ** -k for k in choices]
        return self.rng.choices(list(choices), weights=weights)[0]

    def inputs(self, arity: int) -> ColorSeq:
        while True:
            colors = tuple(self.code() for _ in range(arity))
            if _space(colors, self.config.nat_bound) <= self.entry_cap:
                return colors

    def signature(self, output: Code | None = None, min_arity: int = 1) -> Signature:
        out = output if output is not None else self.code()
        return Signature(out, self.inputs(self.arity(min_arity)))

    def fits(self, *input_seqs: ColorSeq) -> bool:
        return all(
            _space(seq, self.config.nat_bound) <= self.composite_cap for seq in input_seqs
        )


def _horizontal_trial(instance, sampler, budget, rng):
    config = sampler.config
    for _ in range(200):
        alpha_sig = sampler.signature(min_arity=2)
        c = alpha_sig.inputs
        i, j = sorted(rng.sample(range(len(c)), 2))
        beta_sig = sampler.signature(output=c[i])
        gamma_sig = sampler.signature(output=c[j])
        ell = beta_sig.arity
        step1 = splice(c, i, beta_sig.inputs)
        final = splice(step1, ell - 1 + j, gamma_sig.inputs)
        if sampler.fits(step1, final, splice(c, j, gamma_sig.inputs)):
            break
    else:
        raise RuntimeError("could not sample a horizontal-associativity trial within caps")
    alpha = instance.sample_entries(alpha_sig, budget, rng)[0]
    beta = instance.sample_entries(beta_sig, budget, rng)[0]
    gamma = instance.sample_entries(gamma_sig, budget, rng)[0]
    ok = check_horizontal_assoc(instance, alpha, beta, gamma, i, j, budget)
    return ok, (f"i={i}", f"j={j}", f"alpha={instance.describe_entry(alpha)}",
                f"beta={instance.describe_entry(beta)}", f"gamma={instance.describe_entry(gamma)}")


def _vertical_trial(instance, sampler, budget, rng):
    for _ in range(200):
        alpha_sig = sampler.signature()
        i = rng.randrange(alpha_sig.arity)
        beta_sig = sampler.signature(output=alpha_sig.inputs[i])
        j = rng.randrange(beta_sig.arity)
        gamma_sig = sampler.signature(output=beta_sig.inputs[j])
        step1 = splice(alpha_sig.inputs, i, beta_sig.inputs)
        final = splice(step1, i + j, gamma_sig.inputs)
        if sampler.fits(step1, final, splice(beta_sig.inputs, j, gamma_sig.inputs)):
            break
    else:
        raise RuntimeError("could not sample a vertical-associativity trial within caps")
    alpha = instance.sample_entries(alpha_sig, budget, rng)[0]
    beta = instance.sample_entries(beta_sig, budget, rng)[0]
    gamma = instance.sample_entries(gamma_sig, budget, rng)[0]
    ok = check_vertical_assoc(instance, alpha, beta, gamma, i, j, budget)
    return ok, (f"i={i}", f"j={j}", f"alpha={instance.describe_entry(alpha)}",
                f"beta={instance.describe_entry(beta)}", f"gamma={instance.describe_entry(gamma)}")


def _left_unity_trial(instance, sampler, budget, rng):
    alpha = instance.sample_entries(sampler.signature(), budget, rng)[0]
    return check_left_unity(instance, alpha, budget), (
        f"alpha={instance.describe_entry(alpha)}",
    )


def _right_unity_trial(instance, sampler, budget, rng):
    sig = sampler.signature()
    alpha = instance.sample_entries(sig, budget, rng)[0]
    i = rng.randrange(sig.arity)
    return check_right_unity(instance, alpha, i, budget), (
        f"i={i}",
        f"alpha={instance.describe_entry(alpha)}",
    )


def _perm_trial(instance, sampler, budget, rng):
    sig = sampler.signature()
    entry = instance.sample_entries(sig, budget, rng)[0]
    sigma = Permutation.shuffled(sig.arity, rng)
    return check_perm_bijection(instance, entry, sigma, budget), (
        f"sigma={sigma.mapping}",
        f"entry={instance.describe_entry(entry)}",
    )


_TRIALS = {
    "horizontal_assoc": _horizontal_trial,
    "vertical_assoc": _vertical_trial,
    "left_unity": _left_unity_trial,
    "right_unity": _right_unity_trial,
    "perm_bijection": _perm_trial,
}


def run_law_suite(instance: OperadInstance, config: LawConfig) -> LawReport:
    """Fuzz all five law checks; failures are data, never exceptions.

    Each trial draws from its own RNG derived from (seed, axiom, index),
    so the trial set is reproducible and order-independent.
    """
    report = LawReport(instance=instance.name, config=config)
    budget = config.budget
    for axiom in AXIOMS:
        run_trial = _TRIALS[axiom]
        report.trials_run[axiom] = 0
        report.passes[axiom] = 0
        for trial in range(config.trials):
            if (
                config.stop_after_failures is not None
                and len(report.failures) >= config.stop_after_failures
            ):
                return report
            rng = random.Random(f"{config.seed}/{axiom}/{trial}")
            sampler = _Sampler(config, rng)
            report.trials_run[axiom] += 1
            try:
                ok, inputs = run_trial(instance, sampler, budget, rng)
                detail = "law check returned false"
            except Exception as exc:
                ok, inputs = False, ()
                detail = f"{type(exc).__name__}: {exc}"
            if ok:
                report.passes[axiom] += 1
            else:
                report.failures.append(
                    TrialFailure(axiom, trial, config.seed, detail, inputs)
                )
    return report

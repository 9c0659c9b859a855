"""Evaluation statistics: agreement tables, McNemar, mismatch cost, alignment, sequences.

The McNemar variant is the uncorrected chi-square form, chi2 = (b - c)^2 / (b + c)
over the discordant counts, with the p-value taken from the upper tail of the
chi-square distribution with one degree of freedom. With zero discordant pairs
the statistic is defined as 0 and p as 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from procrust.similarity import SimilarityProvider
from procrust.errors import ValidationError

PATH_LABELS = ("Escalate", "SignalInfo", "DeEscalate", "Wait")


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 agreement counts: reference Y/N crossed with engine Y/N."""

    yy: int
    yn: int
    ny: int
    nn: int

    def __post_init__(self) -> None:
        if min(self.yy, self.yn, self.ny, self.nn) < 0:
            raise ValidationError("contingency counts must be non-negative")

    @property
    def total(self) -> int:
        return self.yy + self.yn + self.ny + self.nn

    def __add__(self, other: "ContingencyTable") -> "ContingencyTable":
        return ContingencyTable(
            self.yy + other.yy, self.yn + other.yn, self.ny + other.ny, self.nn + other.nn
        )

    def to_payload(self) -> dict[str, int]:
        return {"yy": self.yy, "yn": self.yn, "ny": self.ny, "nn": self.nn}


def _as_yes(value: Any, position: int, side: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in {"y", "yes", "approve", "1", "true"}:
        return True
    if isinstance(value, str) and value.strip().lower() in {"n", "no", "reject", "0", "false"}:
        return False
    raise ValidationError(f"{side} decision #{position} is not a Y/N value: {value!r}")


def build_contingency(reference: Sequence[Any], engine: Sequence[Any]) -> ContingencyTable:
    """Count agreement/disagreement over paired Y/N decisions."""
    if len(reference) != len(engine):
        raise ValidationError(
            f"length mismatch: {len(reference)} reference vs {len(engine)} engine decisions"
        )
    if not reference:
        raise ValidationError("decision lists must be non-empty")
    yy = yn = ny = nn = 0
    for position, (ref, eng) in enumerate(zip(reference, engine)):
        r = _as_yes(ref, position, "reference")
        e = _as_yes(eng, position, "engine")
        if r and e:
            yy += 1
        elif r and not e:
            yn += 1
        elif not r and e:
            ny += 1
        else:
            nn += 1
    return ContingencyTable(yy, yn, ny, nn)


@dataclass(frozen=True)
class McNemarResult:
    chi2: float
    p: float


def mcnemar(table: ContingencyTable) -> McNemarResult:
    """Uncorrected chi-square McNemar test on the discordant counts."""
    b, c = table.yn, table.ny
    if b + c == 0:
        return McNemarResult(chi2=0.0, p=1.0)
    chi2 = (b - c) ** 2 / (b + c)
    # chi-square(1) upper tail: P(Z^2 > x) = erfc(sqrt(x / 2))
    p = math.erfc(math.sqrt(chi2 / 2.0))
    return McNemarResult(chi2=chi2, p=p)


def mismatch_cost(table: ContingencyTable) -> int:
    """Asymmetric cost: false negatives count once, false positives ten times."""
    return table.yn + 10 * table.ny


# --- factor alignment (threshold matching over a similarity provider) -------


@dataclass(frozen=True)
class MatchedPair:
    reference: str
    candidate: str
    similarity: float


@dataclass(frozen=True)
class AlignmentResult:
    matched_pairs: tuple[MatchedPair, ...]
    alignment: float
    unmatched_reference: tuple[str, ...]


def align_factors(
    candidates: Sequence[str],
    reference: Sequence[str],
    provider: SimilarityProvider,
    threshold: float | None = None,
) -> AlignmentResult:
    """One-to-one greedy matching by descending similarity, at or above ``threshold``.

    Ties are broken by reference order, then candidate order. Alignment is the
    matched fraction of the reference list.
    """
    if threshold is None:
        threshold = provider.threshold_default
    if not 0 < threshold <= 1:
        raise ValidationError(f"threshold must be in (0, 1], got {threshold}")
    if not reference:
        raise ValidationError("reference factor list must be non-empty")

    scored = []
    for r_index, ref in enumerate(reference):
        for c_index, cand in enumerate(candidates):
            value = provider.similarity(ref, cand)
            if value >= threshold:
                scored.append((-value, r_index, c_index))
    scored.sort()

    used_ref: set[int] = set()
    used_cand: set[int] = set()
    pairs: list[MatchedPair] = []
    for neg_value, r_index, c_index in scored:
        if r_index in used_ref or c_index in used_cand:
            continue
        used_ref.add(r_index)
        used_cand.add(c_index)
        pairs.append(
            MatchedPair(
                reference=reference[r_index], candidate=candidates[c_index], similarity=-neg_value
            )
        )
    unmatched = tuple(ref for i, ref in enumerate(reference) if i not in used_ref)
    return AlignmentResult(
        matched_pairs=tuple(pairs),
        alignment=len(used_ref) / len(reference),
        unmatched_reference=unmatched,
    )


@dataclass(frozen=True)
class RoleFidelity:
    value: float
    empty_match_set: bool = False


def role_fidelity(
    matched_pairs: Sequence[MatchedPair],
    candidate_roles: dict[str, str],
    reference_roles: dict[str, str],
) -> RoleFidelity:
    """Fraction of matched pairs whose role labels agree; empty match set scores 0."""
    if not matched_pairs:
        return RoleFidelity(value=0.0, empty_match_set=True)
    agree = 0
    for pair in matched_pairs:
        try:
            ref_role = reference_roles[pair.reference]
            cand_role = candidate_roles[pair.candidate]
        except KeyError as exc:
            raise ValidationError(f"no role defined for matched element {exc.args[0]!r}") from None
        if ref_role == cand_role:
            agree += 1
    return RoleFidelity(value=agree / len(matched_pairs))


# --- sequential label sequences ---------------------------------------------


@dataclass(frozen=True)
class LabeledPath:
    run_id: str
    steps: tuple[str, ...]
    path_label: str | None = None

    def __post_init__(self) -> None:
        if not self.steps:
            raise ValidationError(f"run {self.run_id!r} has no steps")
        for step in self.steps:
            if step not in PATH_LABELS:
                raise ValidationError(
                    f"run {self.run_id!r} has unknown step label {step!r} "
                    f"(expected one of {list(PATH_LABELS)})"
                )


def path_level_label(steps: Sequence[str], rule: str = "majority") -> str:
    """Collapse a step sequence to one label.

    ``majority``: most frequent step label; a tie goes to the final step's
    label when it is part of the tie, otherwise to taxonomy order.
    ``final``: the final step's label.
    """
    if rule == "final":
        return steps[-1]
    if rule != "majority":
        raise ValidationError(f"unknown path label rule: {rule!r}")
    counts = {label: 0 for label in PATH_LABELS}
    for step in steps:
        counts[step] += 1
    best = max(counts.values())
    tied = [label for label in PATH_LABELS if counts[label] == best]
    if steps[-1] in tied:
        return steps[-1]
    return tied[0]


@dataclass(frozen=True)
class SequenceMatchResult:
    per_position_rates: dict[int, tuple[float, ...]]
    path_level_counts: dict[str, int]
    path_level_by_length: dict[int, dict[str, int]]
    rule: str = "majority"
    strata_sizes: dict[int, int] = field(default_factory=dict)


def sequence_match(
    runs: Sequence[LabeledPath], reference: LabeledPath, rule: str = "majority"
) -> SequenceMatchResult:
    """Stepwise and path-level agreement of run sequences against a reference.

    Runs are stratified by length L; ``per_position_rates[L][k]`` is the
    fraction of length-L runs whose step k equals reference step k.
    """
    max_len = max((len(run.steps) for run in runs), default=0)
    if max_len > len(reference.steps):
        longest = next(run for run in runs if len(run.steps) == max_len)
        raise ValidationError(
            f"run {longest.run_id!r} is longer than the reference "
            f"({max_len} > {len(reference.steps)})"
        )
    by_length: dict[int, list[LabeledPath]] = {}
    for run in runs:
        by_length.setdefault(len(run.steps), []).append(run)

    rates: dict[int, tuple[float, ...]] = {}
    for length, stratum in sorted(by_length.items()):
        rates[length] = tuple(
            sum(1 for run in stratum if run.steps[k] == reference.steps[k]) / len(stratum)
            for k in range(length)
        )

    counts = {label: 0 for label in PATH_LABELS}
    counts_by_length: dict[int, dict[str, int]] = {
        length: {label: 0 for label in PATH_LABELS} for length in by_length
    }
    for run in runs:
        label = run.path_label or path_level_label(run.steps, rule)
        counts[label] += 1
        counts_by_length[len(run.steps)][label] += 1
    return SequenceMatchResult(
        per_position_rates=rates,
        path_level_counts=counts,
        path_level_by_length=counts_by_length,
        rule=rule,
        strata_sizes={length: len(stratum) for length, stratum in sorted(by_length.items())},
    )


# --- report rendering --------------------------------------------------------


def _fmt_p(p: float) -> str:
    if p >= 0.05:
        return f"{p:.3g} (ns)"
    return f"{p:.3g}"


def _cell(count: int, total: int) -> str:
    return f"{count} ({100.0 * count / total:.1f}%)"


def render_decision_table(rows: Sequence[tuple[str, ContingencyTable]]) -> str:
    """Markdown agreement table: one row per dataset, Table-style column layout."""
    lines = [
        "| Dataset | Ref Y / Eng Y | Ref Y / Eng N | Ref N / Eng Y | Ref N / Eng N "
        "| Significance (p) | Cost |",
        "|---|---|---|---|---|---|---|",
    ]
    for name, table in rows:
        stat = mcnemar(table)
        total = table.total
        lines.append(
            f"| {name} | {_cell(table.yy, total)} | {_cell(table.yn, total)} "
            f"| {_cell(table.ny, total)} | {_cell(table.nn, total)} "
            f"| {_fmt_p(stat.p)} | {mismatch_cost(table)} |"
        )
    return "\n".join(lines) + "\n"


def render_sequence_table(result: SequenceMatchResult, reference: LabeledPath) -> str:
    """Markdown summary of stepwise match rates and the path-label distribution."""
    total_runs = sum(result.strata_sizes.values())
    width = len(reference.steps)
    header = " | ".join(f"Pos {k + 1}" for k in range(width))
    lines = [
        f"Reference steps: {', '.join(reference.steps)}",
        "",
        f"| Path length | n | {header} |",
        "|---" * (width + 2) + "|",
    ]
    for length in sorted(result.per_position_rates):
        cells = [f"{rate:.3f}" for rate in result.per_position_rates[length]]
        cells += ["-"] * (width - length)
        lines.append(f"| {length}-step | {result.strata_sizes[length]} | " + " | ".join(cells) + " |")
    lines += [
        "",
        "| Path label | runs | share |",
        "|---|---|---|",
    ]
    for label in PATH_LABELS:
        count = result.path_level_counts.get(label, 0)
        by_len = ", ".join(
            f"{result.path_level_by_length[length][label]}/{result.strata_sizes[length]} ({length}-step)"
            for length in sorted(result.path_level_by_length)
            if result.path_level_by_length[length][label]
        )
        share = f"{100.0 * count / total_runs:.1f}%" if total_runs else "-"
        suffix = f" [{by_len}]" if by_len else ""
        lines.append(f"| {label} | {count}{suffix} | {share} |")
    return "\n".join(lines) + "\n"

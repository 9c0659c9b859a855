"""Evaluation statistics: published-table values, properties, sequence rates."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from procrust.similarity import JaccardSimilarity
from procrust.errors import ValidationError
from procrust.evalstats import (
    ContingencyTable,
    LabeledPath,
    align_factors,
    build_contingency,
    mcnemar,
    mismatch_cost,
    path_level_label,
    render_decision_table,
    render_sequence_table,
    role_fidelity,
    sequence_match,
)

# Published seven-model agreement table: (yy, yn, ny, nn, printed p, printed cost).
# The GPT-5-mini row's printed p-value is not derivable from its printed counts
# under any standard McNemar variant (see notes); expected_p records what the
# uncorrected chi-square form actually yields for those counts.
TABLE_ROWS = {
    "OSS-20b": (70, 0, 27, 5, 2.03e-7, 270),
    "OSS-120b": (63, 7, 24, 8, 0.0023, 247),
    "GPT-4-mini": (56, 14, 20, 12, 0.303, 214),
    "Claude-4.5-Haiku": (36, 34, 12, 20, 0.0012, 154),
    "Claude-4.5-Sonnet": (36, 34, 10, 22, 0.0003, 134),
    "GPT-5-mini": (32, 38, 8, 24, 7.2e-7, 118),
    "GPT-5": (24, 46, 3, 29, 8.1e-10, 76),
}
REPRODUCIBLE_P = {k for k in TABLE_ROWS if k != "GPT-5-mini"}


def table(name):
    yy, yn, ny, nn = TABLE_ROWS[name][:4]
    return ContingencyTable(yy, yn, ny, nn)


def test_build_contingency_single_pair():
    assert build_contingency(["Y"], ["Y"]) == ContingencyTable(1, 0, 0, 0)


def test_build_contingency_partitions_all_pairs():
    ref = ["Y", "Y", "N", "N", "Y"]
    eng = ["Y", "N", "Y", "N", "Y"]
    out = build_contingency(ref, eng)
    assert (out.yy, out.yn, out.ny, out.nn) == (2, 1, 1, 1)
    assert out.total == 5


def test_build_contingency_length_mismatch():
    with pytest.raises(ValidationError, match="length mismatch"):
        build_contingency(["Y"], ["Y", "N"])


def test_published_row_counts_sum_to_102():
    assert table("GPT-5").total == 102
    assert table("GPT-5") == ContingencyTable(24, 46, 3, 29)


def test_mcnemar_symmetric_disagreement():
    out = mcnemar(ContingencyTable(0, 5, 5, 0))
    assert out.chi2 == 0.0
    assert out.p == 1.0


def test_mcnemar_no_discordance():
    out = mcnemar(ContingencyTable(10, 0, 0, 7))
    assert out.chi2 == 0.0
    assert out.p == 1.0


@pytest.mark.parametrize("name", sorted(REPRODUCIBLE_P))
def test_mcnemar_reproduces_published_p_values(name):
    printed_p = TABLE_ROWS[name][4]
    out = mcnemar(table(name))
    assert out.p == pytest.approx(printed_p, rel=0.02)


def test_mcnemar_against_chi_square_oracle():
    scipy_stats = pytest.importorskip("scipy.stats")
    for name, (yy, yn, ny, nn, _, _) in TABLE_ROWS.items():
        out = mcnemar(ContingencyTable(yy, yn, ny, nn))
        expected = scipy_stats.chi2.sf((yn - ny) ** 2 / (yn + ny), 1)
        assert out.p == pytest.approx(expected, rel=1e-12), name


def test_mcnemar_known_statistics():
    out = mcnemar(ContingencyTable(0, 0, 27, 0))
    assert out.chi2 == pytest.approx(27.0)
    assert out.p == pytest.approx(2.03e-7, rel=0.02)
    out = mcnemar(ContingencyTable(0, 14, 20, 0))
    assert out.chi2 == pytest.approx(36 / 34)
    assert out.p == pytest.approx(0.303, rel=0.02)


@given(b=st.integers(0, 200), c=st.integers(0, 200))
def test_mcnemar_symmetry_in_discordant_counts(b, c):
    left = mcnemar(ContingencyTable(0, b, c, 0))
    right = mcnemar(ContingencyTable(0, c, b, 0))
    assert left.chi2 == right.chi2
    assert left.p == right.p


@pytest.mark.parametrize("name", sorted(TABLE_ROWS))
def test_mismatch_cost_reproduces_published_costs(name):
    assert mismatch_cost(table(name)) == TABLE_ROWS[name][5]


def test_mismatch_cost_zero_table():
    assert mismatch_cost(ContingencyTable(0, 0, 0, 0)) == 0


@given(
    t1=st.tuples(*[st.integers(0, 50)] * 4),
    t2=st.tuples(*[st.integers(0, 50)] * 4),
)
def test_mismatch_cost_linear_under_cellwise_sum(t1, t2):
    a, b = ContingencyTable(*t1), ContingencyTable(*t2)
    assert mismatch_cost(a + b) == mismatch_cost(a) + mismatch_cost(b)


# --- alignment ----------------------------------------------------------------

PROVIDER = JaccardSimilarity()


def test_align_identical_lists():
    refs = ["fuel cost", "driver shortage"]
    out = align_factors(refs, refs, PROVIDER, 0.5)
    assert out.alignment == 1.0
    assert not out.unmatched_reference


def test_align_partial_hand_example():
    out = align_factors(["cost of fuel"], ["fuel cost", "driver shortage"], PROVIDER, 0.5)
    assert out.alignment == 0.5
    assert len(out.matched_pairs) == 1
    pair = out.matched_pairs[0]
    assert (pair.reference, pair.candidate) == ("fuel cost", "cost of fuel")
    assert pair.similarity == pytest.approx(2 / 3)
    assert out.unmatched_reference == ("driver shortage",)


def test_align_disjoint_vocabulary():
    out = align_factors(["alpha"], ["beta", "gamma"], PROVIDER, 0.5)
    assert out.alignment == 0.0
    assert not out.matched_pairs


def test_align_empty_reference_rejected():
    with pytest.raises(ValidationError):
        align_factors(["a"], [], PROVIDER, 0.5)


def test_align_one_to_one():
    # two references compete for one candidate; only one may win
    out = align_factors(["fuel cost"], ["fuel cost x", "fuel cost y"], PROVIDER, 0.4)
    assert len(out.matched_pairs) == 1
    assert out.alignment == 0.5


def test_align_candidate_permutation_invariant_with_distinct_sims():
    reference = ["fuel price level", "port congestion"]
    candidates = ["fuel price", "congestion at port", "weather"]
    base = align_factors(candidates, reference, PROVIDER, 0.3)
    flipped = align_factors(list(reversed(candidates)), reference, PROVIDER, 0.3)
    assert {(p.reference, p.candidate) for p in base.matched_pairs} == {
        (p.reference, p.candidate) for p in flipped.matched_pairs
    }


def test_role_fidelity_counts_matching_roles():
    out = align_factors(["a x", "b y", "c z", "d w"], ["a x", "b y", "c z", "d w"], PROVIDER)
    fidelity = role_fidelity(
        out.matched_pairs,
        candidate_roles={"a x": "Active", "b y": "Critical", "c z": "Reactive", "d w": "Buffering"},
        reference_roles={"a x": "Active", "b y": "Critical", "c z": "Active", "d w": "Active"},
    )
    assert fidelity.value == 0.5
    assert not fidelity.empty_match_set


def test_role_fidelity_empty_match_set():
    fidelity = role_fidelity([], {}, {})
    assert fidelity.value == 0.0
    assert fidelity.empty_match_set


def test_role_fidelity_missing_role_rejected():
    out = align_factors(["a x"], ["a x"], PROVIDER)
    with pytest.raises(ValidationError):
        role_fidelity(out.matched_pairs, {}, {"a x": "Active"})


# --- sequences ------------------------------------------------------------------

REFERENCE = LabeledPath(
    run_id="reference",
    steps=("Escalate", "SignalInfo", "DeEscalate", "DeEscalate"),
)


def test_sequence_all_identical_runs():
    runs = [LabeledPath(run_id=f"r{i}", steps=REFERENCE.steps) for i in range(5)]
    out = sequence_match(runs, REFERENCE)
    assert out.per_position_rates == {4: (1.0, 1.0, 1.0, 1.0)}
    assert out.path_level_counts["DeEscalate"] == 5


def test_sequence_hand_counted_rates():
    # run A matches reference at positions 1 and 3; run B at position 3 only
    run_a = LabeledPath(run_id="a", steps=("Escalate", "Wait", "DeEscalate"))
    run_b = LabeledPath(run_id="b", steps=("Wait", "Wait", "DeEscalate"))
    out = sequence_match([run_a, run_b], REFERENCE)
    assert out.per_position_rates == {3: (0.5, 0.0, 1.0)}
    assert out.strata_sizes == {3: 2}


def test_sequence_run_longer_than_reference_rejected():
    run = LabeledPath(run_id="x", steps=("Wait",) * 5)
    with pytest.raises(ValidationError, match="longer than the reference"):
        sequence_match([run], REFERENCE)


def test_path_label_majority():
    assert path_level_label(("Escalate", "DeEscalate", "DeEscalate")) == "DeEscalate"


def test_path_label_tie_goes_to_final_step():
    assert path_level_label(("Escalate", "DeEscalate")) == "DeEscalate"
    assert path_level_label(("DeEscalate", "Escalate")) == "Escalate"


def test_path_label_final_rule():
    assert path_level_label(("Escalate", "Wait"), rule="final") == "Wait"


def test_unknown_step_label_rejected():
    with pytest.raises(ValidationError):
        LabeledPath(run_id="x", steps=("Escalate", "Nuke"))


# --- rendering -------------------------------------------------------------------


def test_decision_table_layout():
    text = render_decision_table([("GPT-5", table("GPT-5")), ("OSS-20b", table("OSS-20b"))])
    assert "| Significance (p) | Cost |" in text
    assert "| 24 (23.5%) | 46 (45.1%) | 3 (2.9%) | 29 (28.4%) |" in text
    assert "| 76 |" in text
    assert "(ns)" not in text.splitlines()[2]


def test_sequence_table_layout():
    runs = [
        LabeledPath(run_id="a", steps=("Escalate", "SignalInfo", "DeEscalate")),
        LabeledPath(run_id="b", steps=REFERENCE.steps),
    ]
    text = render_sequence_table(sequence_match(runs, REFERENCE), REFERENCE)
    assert "| 3-step | 1 |" in text
    assert "| 4-step | 1 |" in text
    assert "| Path label | runs | share |" in text
    assert "DeEscalate | 2" in text


def test_chi2_tail_identity():
    # erfc form equals the textbook 2*(1 - Phi(sqrt(x))) tail
    for x in (0.5, 1.0588, 9.3226, 27.0, 37.7347):
        phi_tail = 2 * (1 - 0.5 * (1 + math.erf(math.sqrt(x) / math.sqrt(2))))
        assert math.erfc(math.sqrt(x / 2)) == pytest.approx(phi_tail, rel=1e-9)

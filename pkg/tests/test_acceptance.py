"""Acceptance gate: replays every bundled golden verdict and the randomized
theorem checks, printing one PASS/FAIL line per criterion.

Budgets enforced here: every golden query answers in under a second, the
randomized oracle-equivalence audit stays under five minutes, and the whole
module stays under a minute.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import replace

import pytest

from actualcause import (
    CauseQuery,
    active_processes,
    cause_of,
    check_fixed_point,
    descendants,
    enumerate_causes,
    is_actual_cause,
    p,
    solve,
    solve_all,
)
from actualcause.corpus import REGISTRY, all_golden_rows, load_example
from actualcause.dsl import parse_query
from actualcause.formula import Basic, neg, eval_nonrecursive
from actualcause.oracle import weak_cause_all_change, weak_cause_bruteforce
from actualcause.queries import run_query
from conftest import random_any_model, random_recursive_model

_MODULE_T0 = time.perf_counter()
ROW_BUDGET_SECONDS = 1.0
FAMILY_BUDGET_SECONDS = 300.0
SUITE_BUDGET_SECONDS = 60.0

FAMILY_SEEDS = 300
CYCLIC_SEEDS = 200


@pytest.fixture(scope="module")
def cases():
    return {key: load_example(key) for key in REGISTRY}


def _report(cid, label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"ACCEPTANCE {cid:>2}: {status} - {label}{suffix}")
    assert ok, f"criterion {cid} failed: {label} {detail}"


def _run_rows(cases, *selectors: tuple[str, str]) -> list[str]:
    """Replay the golden rows matching (key, query substring) selectors.

    Returns a list of mismatch descriptions; also enforces the per-query
    time budget.
    """
    mismatches: list[str] = []
    for key, fragment in selectors:
        rows = [r for r in all_golden_rows()
                if r.key == key and fragment in r.query]
        assert rows, f"no golden row matches {key!r} / {fragment!r}"
        for row in rows:
            loaded = cases[row.key].loaded
            started = time.perf_counter()
            outcome = run_query(loaded, parse_query(row.query, loaded))
            elapsed = time.perf_counter() - started
            assert elapsed < ROW_BUDGET_SECONDS, \
                f"{row.key}: {row.query} took {elapsed:.2f}s"
            if outcome.verdict != row.expected:
                mismatches.append(
                    f"{row.key}: {row.query} -> {outcome.verdict}, "
                    f"expected {row.expected}")
    return mismatches


def test_criterion_01_overdetermined_arson(cases):
    bad = _run_rows(cases,
                    ("arson_disjunctive", "cause ML1=1"),
                    ("arson_disjunctive", "cause ML2=1"),
                    ("arson_conjunctive", "check cause ML1=1 of FB=1 context u11"),
                    ("arson_conjunctive", "check cause ML2=1"))
    _report(1, "each lit match causes the fire in both arson scenarios",
            not bad, "; ".join(bad))


def test_criterion_02_postponed_fire(cases):
    bad = _run_rows(cases,
                    ("april_showers", "check cause AS=1 of F=2"),
                    ("april_showers", "check cause AS=1 of F=1 | F=2"),
                    ("april_showers", "check cause ES=s11 of F=2"),
                    ("april_showers", "check cause ES=s11 of F=1 | F=2"),
                    ("april_showers", "check cause AS=1 & ES=s11"))
    _report(2, "rain causes the June fire but not the fire; the pair is "
               "pruned by minimality", not bad, "; ".join(bad))


def test_criterion_03_rock_throwing(cases):
    bad = _run_rows(cases,
                    ("rock_coarse", "cause ST=1"),
                    ("rock_coarse", "cause BT=1"),
                    ("rock_three_valued", "cause ST=1"),
                    ("rock_three_valued", "cause BT=1"),
                    ("rock_refined", "cause ST=1"),
                    ("rock_refined", "cause BT=1"),
                    ("rock_time_indexed", "cause ST=1"),
                    ("rock_time_indexed", "cause BT=1"))
    _report(3, "preemption needs the refined or time-sliced structure",
            not bad, "; ".join(bad))


def test_criterion_04_no_transitivity(cases):
    bad = _run_rows(cases,
                    ("doctor", "check cause MT=1 of BMC=0 context"),
                    ("doctor", "check cause MT=1 of TT=0"),
                    ("doctor", "check cause TT=0"),
                    ("doctor", "check cause MT=1 of BMC=0 | BMC=1 | BMC=2"))
    _report(4, "early treatment causes the withheld dose but not survival",
            not bad, "; ".join(bad))


def test_criterion_05_double_prevention(cases):
    bad = _run_rows(cases,
                    ("double_prevention", "cause BPT=1 of TD=1"),
                    ("double_prevention", "cause BPT=1 of SST=1"),
                    ("double_prevention_hillary", "cause BPT=1 of TD=1"))
    loaded = cases["double_prevention_hillary"].loaded
    from actualcause import enumerate_witnesses
    witnesses = enumerate_witnesses(
        CauseQuery(loaded.model, loaded.context("base"),
                   cause_of(p("BPT", 1)), p("TD", 1)))
    found = any(w.w_set == ("HPT", "SPS") and w.w_prime == (0, 1)
                for w in witnesses)
    if not found:
        bad.append("expected contingency {HPT=0, SPS=1} not in witness list")
    _report(5, "the escort stays a cause with a backup escort; the backup-out "
               "contingency is listed", not bad, "; ".join(bad))


def test_criterion_06_noise_and_allowable_settings(cases):
    bad = _run_rows(cases, ("noise_bottle", "check cause N=1"))
    _report(6, "the delaying noise is a cause only until hit-without-shatter "
               "worlds are disallowed", not bad, "; ".join(bad))


def test_criterion_07_lurking_cutter(cases):
    bad = _run_rows(cases,
                    ("loanshark_bare", "cause FS=1"),
                    ("loanshark", "check cause FS=1 of FF=1 context accident"))
    _report(7, "the accident causes the working finger only while the lurker "
               "is modelled and allowed", not bad, "; ".join(bad))


def test_criterion_08_omitted_watering(cases):
    bad = _run_rows(cases,
                    ("plant_putin", "cause BW=0"),
                    ("plant_putin", "cause PW=0"))
    _report(8, "the sitter's omission survives the restriction, the "
               "stranger's does not", not bad, "; ".join(bad))


def test_criterion_09_track_switch(cases):
    bad = _run_rows(cases,
                    ("track_switch_one_var", "cause F=1 of A=1"),
                    ("track_switch_two_var", "cause F=1 of A=1"))
    _report(9, "two track mechanisms make the switch a cause until the "
               "cross-track settings are disallowed", not bad, "; ".join(bad))


def test_criterion_10_trumping_spells(cases):
    bad = _run_rows(cases,
                    ("merlin_coarse", "cause Mer=1"),
                    ("merlin_coarse", "cause Mor=2"),
                    ("merlin_refined", "cause Mer=1"),
                    ("merlin_refined", "cause Mor=2"))
    _report(10, "both spells cause coarsely; only the first-cast spell "
                "survives refinement", not bad, "; ".join(bad))


def test_criterion_11_orders_and_forcing(cases):
    bad = _run_rows(cases,
                    ("sergeant_simple", "check cause M=1"),
                    ("sergeant_simple", "check cause S=1"),
                    ("sergeant_refined", "check cause M=1"),
                    ("sergeant_refined", "check cause S=1"))
    _report(11, "both orders cause the advance; only the senior one forces "
                "it; the gated model drops the junior order", not bad,
            "; ".join(bad))


def test_criterion_12_votes_and_gunloading(cases):
    bad = _run_rows(cases,
                    ("voting_machine", "cause V1=1"),
                    ("voting_machine", "cause V2=1"),
                    ("voting_machine", "cause V1=1 & V2=1"),
                    ("prisoner", "check cause A=1"),
                    ("prisoner", "check cause C=1"))
    _report(12, "votes stay causes through the tabulator; the permissive "
                "variant alone certifies the gun loader", not bad,
            "; ".join(bad))


def test_criterion_13_three_valued_forcing(cases):
    bad = _run_rows(cases,
                    ("arson_three_valued", "check cause ML1=1 of FB=1 context "
                     "u11 variant strong"),
                    ("arson_three_valued", "check cause ML2=1"),
                    ("arson_three_valued", "check cause ML1=1 & ML2=1"))
    _report(13, "with a fire-department value no single match forces the "
                "fire, the pair does", not bad, "; ".join(bad))


def test_supporting_rows(cases):
    bad = _run_rows(cases,
                    ("forest_fire", "cause L=1"),
                    ("forest_fire", "eval"),
                    ("arson_disjunctive", "eval"),
                    ("arson_conjunctive", "eval"),
                    ("arson_conjunctive", "variant strong"),
                    ("arson_three_valued", "check cause ML1=1 of FB=1 context u11"),
                    ("april_showers", "contrast"),
                    ("doctor", "eval"),
                    ("track_switch_one_var", "cause F=1 of T=1"),
                    ("fielder_wall", "cause FC=1"),
                    ("fielder_wall_fixed", "cause FC=1"))
    _report("supp", "remaining golden rows", not bad, "; ".join(bad))


# -- randomized theorem checks -------------------------------------------------


@pytest.fixture(scope="module")
def family_audit():
    """One pass over the seeded recursive family collecting every counter the
    randomized criteria need."""
    started = time.perf_counter()
    counters = {
        "queries": 0,
        "oracle_disagreements": 0,
        "prime_disagreements": 0,
        "path_violations": 0,
        "multi_conjunct_causes": 0,
        "self_cause_violations": 0,
        "processes_checked": 0,
    }
    for seed in range(FAMILY_SEEDS):
        model = random_recursive_model(seed, 4)
        endo = model.endogenous
        for context in ({"U": 0}, {"U": 1}):
            actual = solve(model, context)
            for x in endo:
                cause = (p(x, actual[x]),)
                for y in endo:
                    effect = p(y, actual[y])
                    counters["queries"] += 1
                    verdict = is_actual_cause(
                        CauseQuery(model, context, cause_of(*cause), effect))
                    weak_fast = verdict.ac1 and verdict.ac2
                    weak_slow = weak_cause_bruteforce(model, context, cause,
                                                      effect)
                    if weak_fast != weak_slow or verdict.overall != weak_slow:
                        counters["oracle_disagreements"] += 1
                    if weak_cause_all_change(model, context, cause,
                                             effect) != weak_fast:
                        counters["prime_disagreements"] += 1
                    if x == y and not verdict.overall:
                        counters["self_cause_violations"] += 1
                    if verdict.overall:
                        counters["processes_checked"] += 1
                        on_path = {v for v in descendants(model, x)
                                   if y in descendants(model, v)}
                        for z_set in active_processes(model, context,
                                                      cause_of(*cause),
                                                      effect):
                            if not set(z_set) <= on_path:
                                counters["path_violations"] += 1
            for y in endo:
                causes = enumerate_causes(model, context, p(y, actual[y]),
                                          max_conjuncts=len(endo))
                counters["multi_conjunct_causes"] += sum(
                    1 for c in causes if len(c.events) > 1)
    counters["seconds"] = time.perf_counter() - started
    return counters


def test_criterion_14_oracle_equivalence(family_audit):
    ok = (family_audit["oracle_disagreements"] == 0
          and family_audit["seconds"] < FAMILY_BUDGET_SECONDS)
    _report(14, "production checker agrees with the definition-literal brute "
                "force on the seeded family",
            ok, f"{family_audit['queries']} queries, "
                f"{family_audit['oracle_disagreements']} disagreements, "
                f"{family_audit['seconds']:.1f}s")


def test_criterion_15_process_side_equivalences(family_audit):
    ok = (family_audit["prime_disagreements"] == 0
          and family_audit["path_violations"] == 0)
    _report(15, "the all-process-variables-change reading decides the same "
                "relation, and processes stay on cause-effect paths",
            ok, f"{family_audit['processes_checked']} process checks")


def test_criterion_16_single_conjunct_and_self_cause(family_audit):
    ok = (family_audit["multi_conjunct_causes"] == 0
          and family_audit["self_cause_violations"] == 0)
    _report(16, "under the default variant every enumerated cause is a single "
                "conjunct and self-causes hold exactly",
            ok, f"{family_audit['multi_conjunct_causes']} multi-conjunct, "
                f"{family_audit['self_cause_violations']} self-cause misses")


def test_criterion_17_degenerate_restriction(cases):
    mismatches = []
    for row in all_golden_rows():
        if "extended" in row.query or row.query.startswith("eval"):
            continue
        loaded = cases[row.key].loaded
        doc = parse_query(row.query, loaded)
        plain = run_query(loaded, doc)
        everything = frozenset(itertools.product(
            *(loaded.model.domain_of(v).values
              for v in loaded.model.endogenous)))
        degenerate = run_query(replace(loaded, allow=everything),
                               replace(doc, extended=True))
        if plain.verdict != degenerate.verdict:
            mismatches.append(f"{row.key}: {row.query}")
    _report(17, "allowing every setting reproduces the plain verdicts",
            not mismatches, "; ".join(mismatches))


def test_criterion_18_nonrecursive_semantics():
    filter_mismatches = 0
    duality_violations = 0
    for seed in range(CYCLIC_SEEDS):
        model = random_any_model(seed, 3)
        endo = model.endogenous
        for context in ({"U": 0}, {"U": 1}):
            enumerated = [dict(zip(endo, combo))
                          for combo in itertools.product(
                              *(model.domain_of(v).values for v in endo))
                          if check_fixed_point(model, context,
                                               dict(zip(endo, combo)))]
            if solve_all(model, context) != enumerated:
                filter_mismatches += 1
            if not enumerated:
                continue
            anchor = enumerated[0]
            for clamp in endo:
                for target in endo:
                    box = Basic(((clamp, 1),), p(target, 0))
                    dual = Basic(((clamp, 1),), neg(p(target, 0)),
                                 diamond=True)
                    if eval_nonrecursive(model, context, anchor, box) == \
                            eval_nonrecursive(model, context, anchor, dual):
                        duality_violations += 1
    ok = filter_mismatches == 0 and duality_violations == 0
    _report(18, "fixed-point enumeration matches the filter oracle and "
                "box/diamond duality holds on cyclic models",
            ok, f"{filter_mismatches} filter, {duality_violations} duality")


def test_suite_budget(family_audit):
    elapsed = time.perf_counter() - _MODULE_T0
    _report("time", "acceptance module stays within its time budget",
            elapsed < SUITE_BUDGET_SECONDS, f"{elapsed:.1f}s")

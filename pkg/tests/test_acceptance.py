"""Acceptance criteria, each run through the ``verify`` subcommand at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v -s`` (or execute this file) to see one
PASS/FAIL line per criterion. The base seed comes from ``$QIG_SEED`` (default 0).
"""

import json
import os
import time

import pytest

from qunfold import cli

SEED = int(os.environ.get("QIG_SEED", "0"))

# id, description, verify arguments, extra runtime limit in seconds
CRITERIA = [
    ("1-split", "split identity, n in {2,3,4}, 4 f x 100 trials, 1e-9, < 10 s",
     ["split", "--n", "2", "3", "4", "--trials", "100", "--tol", "1e-9"], 10.0),
    ("2-expansion", "expansion identity, n in {2,3,4}, 3 g x 100 trials, 1e-9",
     ["expansion", "--n", "2", "3", "4", "--trials", "100", "--tol", "1e-9"], None),
    ("3-hessian", "Hessian recovery, n in {2,3}, step 1e-3, 5e-4, halving ratio in [3,5]",
     ["hessian", "--n", "2", "3", "--trials", "30", "--step", "1e-3", "--tol", "5e-4"], None),
    ("4-fg-bridge", "f-g bridge on 200-point grid to 1e-12, f(1) = 1",
     ["fg-bridge", "--tol", "1e-12"], None),
    ("5-monotonicity", "metric monotonicity, 504 CPTP trials, slack 1e-9",
     ["monotonicity", "--n", "2", "3", "4", "--trials", "42", "--tol", "1e-9"], None),
    ("6-data-processing", "g-entropy data processing, 504 trials, defect >= -1e-9",
     ["entropy-monotonicity", "--n", "2", "3", "4", "--trials", "56", "--tol", "1e-9"], None),
    ("7-classical", "commuting tangents give Fisher-Rao, 100 trials, 1e-10",
     ["classical", "--n", "2", "3", "4", "--trials", "100", "--tol", "1e-10"], None),
    ("8-kernel", "kernel directions, 100 trials, < 1e-10",
     ["kernel", "--n", "2", "3", "4", "--trials", "100", "--tol", "1e-10"], None),
    ("9-commuting", "commuting g-entropy, fixed example 1e-12, classical sum 1e-10",
     ["commuting", "--n", "2", "3", "4", "--trials", "100", "--tol", "1e-10"], None),
    ("10-f-symmetry", "f(1) = 1 and f(x) = x f(1/x) to 1e-10",
     ["f-symmetry", "--tol", "1e-10"], None),
]

TOTAL_LIMIT = 60.0
_elapsed = {}


def _emit(request, line):
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(line)
    else:
        print(line)


def _count_trials(doc):
    return sum(1 for r in doc["reports"] if r["function"] != "fit" and r["stream"][-1] >= 0)


def run_criterion(args, tmp_path):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    status = cli.main(["verify", *args, "--seed", str(SEED), "--output", str(out)])
    elapsed = time.perf_counter() - start
    return status, json.loads(out.read_text()), elapsed


def _failures(doc):
    lines = []
    for rep in doc["reports"]:
        for q in rep["quantities"]:
            if not q["passed"]:
                lines.append(f"trial {rep['trial_id']} n={rep['n']} {rep['function']} {q['name']} "
                             f"error={q['abs_error']!r} bound={q['bound']!r}")
        if "note" in rep:
            lines.append(f"trial {rep['trial_id']}: {rep['note']}")
    return lines


@pytest.mark.parametrize("cid,desc,args,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, desc, args, limit, tmp_path, request):
    status, doc, elapsed = run_criterion(args, tmp_path)
    _elapsed[cid] = elapsed
    ok = status == 0 and doc["passed"]
    extra = ""
    if cid in ("5-monotonicity", "6-data-processing"):
        n_trials = _count_trials(doc)
        extra = f" trials={n_trials}"
        ok = ok and n_trials >= 500
    if limit is not None:
        ok = ok and elapsed < limit
    _emit(request, f"{'PASS' if ok else 'FAIL'} {cid}: {desc} [{doc['n_reports']} reports, "
                   f"{doc['n_failed']} failed,{extra} {elapsed:.2f} s]")
    assert ok, "\n".join(_failures(doc)[:20]) or f"runtime {elapsed:.2f} s"


def test_hessian_ratio_and_fit(tmp_path):
    # the aggregate halving ratio must sit in [3, 5] and the fitted FD scale at 1
    _, doc, _ = run_criterion(CRITERIA[2][2], tmp_path)
    fit = doc["reports"][-1]
    assert fit["function"] == "fit"
    values = {q["name"]: q["value"] for q in fit["quantities"]}
    assert 3.0 <= values["rms_step_halving_error_ratio"] <= 5.0
    assert values["fitted_fd_over_closed_form"] == pytest.approx(1.0, abs=1e-3)


def test_data_processing_covers_channel_kinds(tmp_path):
    _, doc, _ = run_criterion(CRITERIA[5][2], tmp_path)
    names = {q["name"] for r in doc["reports"] for q in r["quantities"]}
    for kind in ("random", "random-dim", "depolarizing", "identity", "unitary"):
        assert f"defect_nonnegative[{kind}]" in names
    assert {"defect_vanishes[identity]", "defect_vanishes[unitary]"} <= names


def test_commuting_fixed_example_present(tmp_path):
    _, doc, _ = run_criterion(CRITERIA[8][2], tmp_path)
    fixed = [q for r in doc["reports"] for q in r["quantities"] if q["name"] == "kl_half_vs_quarter"]
    assert fixed and fixed[0]["tol"] == 1e-12 and fixed[0]["passed"]


def test_total_wall_time(request):
    # runs after the criteria above; pytest keeps file order
    missing = [c[0] for c in CRITERIA if c[0] not in _elapsed]
    if missing:
        pytest.skip(f"criteria not run in this session: {missing}")
    total = sum(_elapsed.values())
    ok = total < TOTAL_LIMIT
    _emit(request, f"{'PASS' if ok else 'FAIL'} total: all criteria under {TOTAL_LIMIT:.0f} s [{total:.2f} s]")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

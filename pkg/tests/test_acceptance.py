"""The twelve acceptance criteria, each run at the default configuration.

Every criterion prints one PASS/FAIL line (also repeated in the terminal
summary).  Reports come from the same suites the ``wlab verify`` command runs.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from wlab.curvature import model_hyperquadric
from wlab.suites import RunConfig, run_suite

CFG = RunConfig()

CRITERIA = {
    1: ("Fubini-Study operator is 2 Id, n = 1..6", "fubini-study",
        {"operator-equals-2Id": (1e-12, 12)}),
    2: ("hyperquadric spectrum and level, n = 2..8", "hyperquadric",
        {"model-spectrum": (0.5, 7), "m-level": (0.5, 7)}),
    3: ("Bochner-Kodaira identity, n <= 4, r in {1, 2}", "bochner-kodaira",
        {"curvature-action": (1e-9, 108 * 1000)}),
    4: ("norm identities for S and T", "norm-identities",
        {"S-norm": (1e-9, 108 * 1000), "T-norm": (1e-9, 108 * 1000), "T-norm-primitive-power": (1e-9, 1000)}),
    5: ("T inequality sweep, general and improved", "t-bound",
        {"general-bound": (1e-9, 30 * 10000), "improved-bound": (1e-9, 10000)}),
    6: ("Lefschetz decomposition identities", "lefschetz",
        {"decomposition-reconstruction": (1e-9, 1), "batch-reconstruction": (1e-9, 54 * 1000),
         "lambda-k-l-k": (1e-9, 1), "l-power-norm": (1e-9, 1), "b-decomposition": (1e-8, 1)}),
    7: ("operator-norm claim on index-pair subspaces, n <= 3", "operator-norm-claim",
        {"restricted-norm-equality": (1e-8, 1)}),
    8: ("Riemannian identity, bound, compound spectra, Takagi", "riemannian",
        {"curvature-term-identity": (1e-9, 1000), "t-bound": (1e-9, 10000),
         "compound-additivity": (1e-8, 1), "takagi-reconstruction": (1e-10, 1000)}),
    9: ("Kaehler-Weitzenboeck pairing and Y bound, n <= 4", "kaehler-weitzenbock",
        {"y-pairing-identity": (1e-9, 1), "y-bound": (1e-9, 1)}),
    10: ("C^k_{p,q} case analysis vs exhaustive minimum, n <= 12", "combinatorics",
         {"case-analysis-vs-exhaustive": (0.5, 650)}),
    11: ("projective space diamond for m = 1 (n = 2..8) and duality symmetry (n <= 8)", "predictor",
         {"projective-space-diamond": (0.5, 7), "duality-symmetry": (0.5, 1)}),
    12: ("B sign on spectral-surgery curvatures per positivity clause", "cross-check",
         {"b-sign": (1e-8, 5 * 1000), "surgery-level": (0.5, 1)}),
}


def _problems(report, expected):
    out = []
    checks = report.params["checks"]
    for name, (tol, min_samples) in expected.items():
        c = checks.get(name)
        if c is None:
            out.append(f"missing check {name}")
            continue
        if c["tolerance"] > tol:
            out.append(f"{name} tolerance {c['tolerance']} looser than {tol}")
        if c["violations"]:
            out.append(f"{name} has {c['violations']} violations")
        if not c["max_residual"] < c["tolerance"]:
            out.append(f"{name} residual {c['max_residual']:.3e}")
        if c["samples"] < min_samples:
            out.append(f"{name} ran {c['samples']} samples, need {min_samples}")
    if report.status != "pass":
        out.append("suite status fail")
    return out


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    title, suite, expected = CRITERIA[number]
    report = run_suite(suite, CFG)
    problems = _problems(report, expected)
    if number == 2:
        # exact integer spectrum, checked here directly as well
        for n in range(2, 9):
            ev = model_hyperquadric(n).eigenvalues
            if ev != (2 - n,) + (2,) * (n * (n + 1) // 2 - 1):
                problems.append(f"spectrum n={n}")
    verdict = "PASS" if not problems else "FAIL"
    line = f"{verdict} criterion {number}: {title} (max residual {report.max_residual:.3e}, " \
           f"{report.samples} samples)"
    if problems:
        line += " -- " + "; ".join(problems)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not problems, line

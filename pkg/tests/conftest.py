"""Shared pytest hooks.

The acceptance module records a runtime and optional note lines on each
of its tests; the terminal summary prints one verdict line per criterion
so any run of the suite ends with the headline checklist.
"""

ACCEPTANCE_FILE = "test_acceptance.py"

CRITERIA = (
    ("test_criterion_1_derivative_blocks", "derivative blocks"),
    ("test_criterion_2_symmetry_table", "symmetry table"),
    ("test_criterion_3_classical_family", "classical family"),
    ("test_criterion_4_transform_dictionary", "transform dictionary"),
    ("test_criterion_5_section_isomorphism", "section isomorphism"),
    ("test_criterion_6_hierarchy_relations", "hierarchy relations"),
    ("test_criterion_7_vanishing_law", "vanishing law"),
    ("test_criterion_8_bracket_algebra", "bracket algebra"),
    ("test_criterion_9_round_trips", "round trips"),
)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    notes = {}
    runtimes = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_FILE not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            outcomes[name] = "PASS" if report.passed else "FAIL"
            for prop, value in getattr(report, "user_properties", ()):
                if prop == "runtime":
                    runtimes[name] = value
                elif prop == "note":
                    notes.setdefault(name, []).append(value)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, (name, title) in enumerate(CRITERIA, start=1):
        if name not in outcomes:
            continue
        runtime = f" [{runtimes[name]}]" if name in runtimes else ""
        terminalreporter.write_line(
            f"criterion {number} ({title}): {outcomes[name]}{runtime}")
        for note in notes.get(name, []):
            terminalreporter.write_line(f"    {note}")

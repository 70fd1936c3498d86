"""Acceptance gate: the nine headline checks, all at exact equality.

Each test is one criterion with a wall-clock budget.  The conftest hook
turns the results into a one-line-per-criterion summary at the end of
every run.  Seeds are fixed, so reruns check byte-identical instances.
"""
import random
import time
from contextlib import contextmanager

from edsym.darboux import (catalog, catalog_names, classical_family,
                           elliptic_model, hierarchy_relations_check,
                           hyperbolic_model, is_symmetry,
                           restricted_generator, theta, theta_prime)
from edsym.grammar import (from_json, parse_expr, parse_op, print_expr,
                           print_op, to_json)
from edsym.jets import (DiffExpr, ELLIPTIC, HYPERBOLIC, INTERMEDIATE,
                        evolutionary_apply, jacobi_bracket, op_apply,
                        op_commutator, total_derivative)
from edsym.rational import GR_I, GaussRat, gauss_pow_i
from edsym.wirtinger import (block_inverse, closed_form_p, ed_map,
                             mat_antidiagonal, mat_conj, mat_identity,
                             mat_mul, prolong_block, pullback_expr,
                             recurrence_blocks, transport_op, wirtinger_map)

from _gen import rand_expr, rand_fraction


@contextmanager
def stopwatch(record_property, budget):
    """Assert the budget against process CPU time: the work here is
    single-threaded and deterministic, so CPU time measures it without
    picking up scheduler noise from a loaded host."""
    wall_start = time.perf_counter()
    cpu_start = time.process_time()
    yield
    cpu = time.process_time() - cpu_start
    wall = time.perf_counter() - wall_start
    record_property(
        "runtime", f"cpu {cpu:.2f}s, wall {wall:.2f}s, budget {budget:g}s")
    assert cpu < budget, (
        f"cpu time {cpu:.2f}s exceeded the {budget:g}s budget")


def test_criterion_1_derivative_blocks(record_property):
    """Orders 1..8 of the canonical derivative-transport blocks: the
    recurrence equals the closed form entrywise, P*Q is the identity with
    the 2^k i^(r+s) inverse scaling, conjugation reflects rows, and
    conj(P)*Q is the antidiagonal."""
    with stopwatch(record_property, 1):
        bc = wirtinger_map()
        for k in range(1, 9):
            n = k + 1
            p = prolong_block(bc, k)
            q = block_inverse(bc, k)
            closed = tuple(tuple(closed_form_p(k, r, s) for s in range(n))
                           for r in range(n))
            assert recurrence_blocks(k)[k] == closed
            assert p == closed
            assert mat_mul(p, q) == mat_identity(n)
            two_pow = GaussRat(2) ** k
            for r in range(n):
                for s in range(n):
                    assert q[r][s] == two_pow * gauss_pow_i(r + s) * p[r][s]
                    assert p[r][s].conj() == p[k - r][s]
            assert mat_mul(mat_conj(p), q) == mat_antidiagonal(n)


def test_criterion_2_symmetry_table(record_property):
    """The nine cataloged point-symmetry sections verify exactly on the
    elliptic model; the u_x control fails with the expected residual."""
    with stopwatch(record_property, 5):
        em = elliptic_model()
        for k in range(1, 10):
            report = is_symmetry(catalog(f"X{k}"), em)
            assert report.verdict, f"X{k}"
            assert report.residual.is_zero
        control = is_symmetry(DiffExpr.jet(ELLIPTIC, (1, 0)), em)
        assert not control.verdict
        assert control.residual == parse_expr(
            "1/(x + y)*u[1,0] + 1/(x + y)*u[0,1]", ELLIPTIC)


def test_criterion_3_classical_family(record_property):
    """Twelve random rational members of the four-parameter family are
    symmetries of the hyperbolic model."""
    rng = random.Random(1089)
    with stopwatch(record_property, 5):
        hm = hyperbolic_model()
        for _ in range(12):
            cs = [rand_fraction(rng) for _ in range(4)]
            assert is_symmetry(classical_family(*cs), hm).verdict, cs


def test_criterion_4_transform_dictionary(record_property):
    """The complexified base change carries one defining function to the
    other on the nose, sends phi_k to i*rho_k, and conjugates the three
    named recursion operators onto their counterparts with the measured
    unit factors."""
    with stopwatch(record_property, 5):
        em, hm = elliptic_model(), hyperbolic_model()
        assert pullback_expr(ed_map(), hm.F) == em.F
        for k in (0, 1):
            assert (pullback_expr(ed_map(), catalog(f"phi{k}"))
                    == catalog(f"rho{k}").scaled(GR_I))
        # the second-order pair agrees in internal coordinates: rho2 is
        # itself only defined up to the equation
        assert (em.restrict(pullback_expr(ed_map(), catalog("phi2")))
                == em.restrict(catalog("rho2").scaled(GR_I)))
        record_property("note", "phi2 pair compared in internal coordinates")
        assert (transport_op(ed_map(), catalog("box"))
                == catalog("box_tilde").scaled(GR_I))
        assert (transport_op(ed_map(), catalog("sigma"))
                == catalog("sigma_tilde"))
        assert (transport_op(ed_map(), catalog("tau"))
                == catalog("tau_tilde").scaled(GR_I))


def test_criterion_5_section_isomorphism(record_property):
    """theta_prime inverts theta (and vice versa) on the cataloged
    hyperbolic sections plus five random family members, and theta turns
    each verified hyperbolic symmetry into an elliptic one."""
    rng = random.Random(31415)
    with stopwatch(record_property, 10):
        em, hm = elliptic_model(), hyperbolic_model()
        members = [catalog("u_hyp"), catalog("phi0"), catalog("phi1"),
                   catalog("phi2")]
        members += [classical_family(*[rand_fraction(rng) for _ in range(4)])
                    for _ in range(5)]
        for phi in members:
            assert is_symmetry(phi, hm).verdict
            image = theta(phi)
            assert theta_prime(image) == phi
            assert theta(theta_prime(image)) == image
            assert is_symmetry(image, em).verdict


def test_criterion_6_hierarchy_relations(record_property):
    """All three commutator relation families hold as exact operator
    identities for m in {1, 2} over every admissible j; the measured
    coefficients (with their signs) are reported."""
    with stopwatch(record_property, 30):
        for m in (1, 2):
            checks = hierarchy_relations_check(m)
            seen = {(c.family, c.j) for c in checks}
            expected_js = ({("box", j) for j in range(1, 2 * m + 1)}
                           | {("sigma", j) for j in range(2 * m + 1)}
                           | {("tau", j) for j in range(2 * m + 1)})
            assert seen == expected_js
            rows = {}
            for c in checks:
                assert c.holds, (c.family, m, c.j)
                if c.measured is not None:
                    assert c.measured == GaussRat(c.expected)
                rows.setdefault(c.family, []).append((c.j, c.measured))
            for family in ("box", "sigma", "tau"):
                cells = ", ".join(
                    f"j={j}:{_signed(value)}"
                    for j, value in sorted(rows[family]))
                record_property("note", f"m={m} {family}: {cells}")


def _signed(value):
    if value is None:
        return "n/a"
    text = str(value)
    return text if text.startswith("-") else f"+{text}"


def test_criterion_7_vanishing_law(record_property):
    """The restricted generator is nonzero for j <= 2m and vanishes at
    j = 2m + 1, for m in {1, 2, 3}."""
    with stopwatch(record_property, 300):
        for m in (1, 2, 3):
            for j in range(2 * m + 1):
                assert not restricted_generator(m, j).is_zero, (m, j)
            assert restricted_generator(m, 2 * m + 1).is_zero, m


def test_criterion_8_bracket_algebra(record_property):
    """Bracket antisymmetry and the Jacobi identity on 100 random
    triples; evolutionary fields commute with total derivatives; the
    complexified base change is a bracket morphism on 50 random pairs;
    brackets of the named flows stay symmetries; applying a commutator
    to u is minus the bracket of the applications."""
    rng = random.Random(65537)
    with stopwatch(record_property, 60):
        for _ in range(100):
            a, b, c = (rand_expr(rng, ELLIPTIC, max_order=3, degree=2,
                                 terms=3, allow_den=False)
                       for _ in range(3))
            assert jacobi_bracket(a, b) == -jacobi_bracket(b, a)
            cyclic = (jacobi_bracket(a, jacobi_bracket(b, c))
                      + jacobi_bracket(b, jacobi_bracket(c, a))
                      + jacobi_bracket(c, jacobi_bracket(a, b)))
            assert cyclic.is_zero

        for _ in range(25):
            p = rand_expr(rng, ELLIPTIC, max_order=2, degree=2, terms=3,
                          allow_den=False)
            q = rand_expr(rng, ELLIPTIC, max_order=2, degree=2, terms=3,
                          allow_den=False)
            for axis in (0, 1):
                assert (evolutionary_apply(p, total_derivative(q, axis))
                        == total_derivative(evolutionary_apply(p, q), axis))

        for _ in range(50):
            a = rand_expr(rng, HYPERBOLIC, max_order=2, degree=2, terms=3,
                          allow_den=False)
            b = rand_expr(rng, HYPERBOLIC, max_order=2, degree=2, terms=3,
                          allow_den=False)
            assert (pullback_expr(ed_map(), jacobi_bracket(a, b))
                    == jacobi_bracket(pullback_expr(ed_map(), a),
                                      pullback_expr(ed_map(), b)))

        em = elliptic_model()
        rhos = [catalog(f"rho{k}") for k in range(3)]
        for a in rhos:
            for b in rhos:
                assert is_symmetry(jacobi_bracket(a, b), em).verdict

        u = catalog("u")
        ops = [catalog(name)
               for name in ("box_tilde", "sigma_tilde", "tau_tilde")]
        for left in ops:
            for right in ops:
                assert (op_apply(op_commutator(left, right), u)
                        == -jacobi_bracket(op_apply(left, u),
                                           op_apply(right, u)))


def test_criterion_9_round_trips(record_property):
    """parse . print and from_json . to_json are identities on the whole
    catalog and on 100 random expressions across all three charts."""
    rng = random.Random(1729)
    with stopwatch(record_property, 5):
        for name in catalog_names():
            value = catalog(name)
            if isinstance(value, DiffExpr):
                assert parse_expr(print_expr(value), value.chart) == value
            else:
                assert parse_op(print_op(value), value.chart) == value
            assert from_json(to_json(value)) == value
        charts = (ELLIPTIC, HYPERBOLIC, INTERMEDIATE)
        for n in range(100):
            chart = charts[n % 3]
            e = rand_expr(rng, chart)
            assert parse_expr(print_expr(e), chart) == e
            assert from_json(to_json(e)) == e

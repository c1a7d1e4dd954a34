import math

import pytest

from slt.errors import (
    DomainOrderError,
    NonpositiveP,
    ProblemError,
    SignAssumptionError,
    SingularTransmission,
)
from slt.model import (
    MINOR_PAIRS,
    BoundaryCoefficients,
    CaseTag,
    PieceCoefficients,
    PolynomialPotential,
    ProblemDomain,
    ProblemSpec,
    TransmissionCoefficients,
    classify,
    delta,
    left_functional,
    right_functional,
    transmission_residuals,
    validate,
)
from slt.problems import dirichlet, paper_example

EXAMPLE_T = TransmissionCoefficients.from_rows([[1, 0, -2, 0], [0, 1, 0, -1]])
DESK_T = TransmissionCoefficients.from_rows([[1, 0, -2, -1], [0, 1, 0, -1]])


def _bc(**changes):
    values = dict(alpha10=1.0, alpha11=0.0, alpha10p=0.0, alpha11p=0.0,
                  alpha20=1.0, alpha21=0.0, alpha20p=0.0, alpha21p=0.0)
    values.update(changes)
    return BoundaryCoefficients(**values)


def _spec(domain=(0.0, 1.0, 2.0), p=(1.0, 1.0), bc=None, tm=None, strict=False):
    return ProblemSpec(
        domain=ProblemDomain(*domain),
        coeffs=PieceCoefficients(*p),
        bc=bc or _bc(),
        tm=tm or TransmissionCoefficients.from_rows([[1, 0, -1, 0], [0, 1, 0, -1]]),
        strict=strict,
    )


def test_paper_example_validates_with_warnings():
    """Test that the example passes in non-strict mode and records both theta violations."""
    problem = validate(paper_example())
    assert problem.bc.theta1 == -1.0
    assert problem.bc.theta2 == -1.0
    assert len(problem.warnings) == 2
    assert all("theta" in w for w in problem.warnings)


def test_paper_example_fails_in_strict_mode():
    """Test that strict mode turns the theta warnings into an error."""
    with pytest.raises(SignAssumptionError):
        validate(paper_example(strict=True))


def test_dirichlet_has_no_warnings():
    """Test that lambda-independent boundary conditions are not theta violations."""
    problem = validate(dirichlet(strict=True))
    assert problem.warnings == ()


def test_domain_order():
    """Test that c must lie strictly between a and b."""
    with pytest.raises(DomainOrderError):
        validate(_spec(domain=(0.0, 1.0, 0.5)))
    with pytest.raises(DomainOrderError):
        validate(_spec(domain=(0.0, 0.0, 1.0)))


def test_nonpositive_p():
    """Test that p must be positive on both pieces."""
    with pytest.raises(NonpositiveP):
        validate(_spec(p=(1.0, 0.0)))
    with pytest.raises(NonpositiveP):
        validate(_spec(p=(-2.0, 1.0)))


def test_singular_transmission():
    """Test that a vanishing Delta12 or Delta34 is a hard error."""
    tm = TransmissionCoefficients.from_rows([[1, 1, -1, 0], [1, 1, 0, -1]])
    with pytest.raises(SingularTransmission):
        validate(_spec(tm=tm))
    tm = TransmissionCoefficients.from_rows([[1, 0, 1, 1], [0, 1, 2, 2]])
    with pytest.raises(SingularTransmission):
        validate(_spec(tm=tm))


def test_all_zero_boundary_row():
    """Test that each boundary condition needs at least one nonzero coefficient."""
    with pytest.raises(ProblemError):
        validate(_spec(bc=_bc(alpha10=0.0)))


def test_negative_delta_is_warning():
    """Test that Delta34 < 0 warns in non-strict mode and raises in strict mode."""
    tm = TransmissionCoefficients.from_rows([[1, 0, 1, 0], [0, 1, 0, -1]])
    problem = validate(_spec(tm=tm))
    assert any("Delta34" in w for w in problem.warnings)
    with pytest.raises(SignAssumptionError):
        validate(_spec(tm=tm, strict=True))


def test_delta_examples():
    """Test the minors of the example and desk-benchmark matrices."""
    assert delta(EXAMPLE_T, 1, 2) == 1
    assert delta(EXAMPLE_T, 3, 4) == 2
    assert delta(EXAMPLE_T, 2, 4) == 0
    assert delta(EXAMPLE_T, 2, 3) == 2
    assert delta(EXAMPLE_T, 1, 3) == 0
    assert delta(EXAMPLE_T, 1, 4) == -1
    assert delta(DESK_T, 1, 2) == 1
    assert delta(DESK_T, 3, 4) == 2
    assert delta(DESK_T, 2, 4) == 1


def test_delta_repeated_column_and_antisymmetry():
    """Test that swapping two columns negates every minor that uses both."""
    tm = TransmissionCoefficients.from_rows([[1.5, -2.0, 1.5, 3.0], [0.25, 4.0, 0.25, -1.0]])
    assert delta(tm, 1, 3) == 0.0
    swapped = TransmissionCoefficients.from_rows(
        [[row[1], row[0], row[2], row[3]] for row in tm.beta])
    assert delta(swapped, 1, 2) == -delta(tm, 1, 2)


@pytest.mark.parametrize("k,j", [(0, 1), (2, 2), (3, 1), (1, 5)])
def test_delta_bad_indices(k, j):
    """Test that indices outside 1 <= k < j <= 4 raise IndexError."""
    with pytest.raises(IndexError):
        delta(EXAMPLE_T, k, j)


def test_minor_pairs_cover_all():
    """Test that six minors are precomputed."""
    assert len(MINOR_PAIRS) == 6
    assert set(EXAMPLE_T.minors) == set(MINOR_PAIRS)


def test_classify_cases():
    """Test that the zero pattern of (a11', a21') picks the case."""
    assert classify(_bc(alpha11p=1.0), DESK_T).tag is CaseTag.CASE_III
    assert classify(_bc(), DESK_T).tag is CaseTag.CASE_IV
    assert classify(_bc(alpha21p=1.0), DESK_T).tag is CaseTag.CASE_II
    assert classify(_bc(alpha11p=2.0, alpha21p=-1.0), DESK_T).tag is CaseTag.CASE_I


def test_classify_paper_example_degenerate(jump_problem):
    """Test that the example is case (iii) with vanishing leading terms."""
    assert jump_problem.case.tag is CaseTag.CASE_III
    assert jump_problem.case.degenerate_leading


def test_classify_zero_tolerance():
    """Test that coefficients below zero_tol count as zero."""
    case = classify(_bc(alpha11p=1e-14), DESK_T, zero_tol=1e-12)
    assert case.tag is CaseTag.CASE_IV
    assert classify(_bc(alpha11p=1e-14), DESK_T).tag is CaseTag.CASE_III


@pytest.mark.parametrize("s", [3.0, -0.5, 1e-3])
def test_classify_row_scaling(s):
    """Test that scaling a boundary row leaves the case unchanged."""
    base = _bc(alpha10=1.0, alpha11=0.5, alpha10p=0.0, alpha11p=1.0)
    scaled = _bc(alpha10=s, alpha11=0.5 * s, alpha10p=0.0, alpha11p=s)
    assert classify(base, DESK_T).tag is classify(scaled, DESK_T).tag


def test_polynomial_potential():
    """Test that polynomial coefficients are lowest degree first."""
    q = PolynomialPotential([1.0, 0.0, 2.0])
    assert q(2.0) == pytest.approx(9.0)
    assert not q.is_zero
    assert PolynomialPotential([0.0]).is_zero


def test_q_bound(desk):
    """Test that q_bound is max |q| over both pieces."""
    spec = _spec()
    spec = ProblemSpec(spec.domain, PieceCoefficients(1.0, 1.0, PolynomialPotential([0.0, 3.0])),
                       spec.bc, spec.tm)
    assert validate(spec).q_bound == pytest.approx(3.0)
    assert desk.q_bound == 0.0


def test_functionals():
    """Test that V1 and V2 follow the sign conventions of the boundary conditions."""
    bc = paper_example().bc
    # y(a) + lambda y'(a)
    assert left_functional(bc, 2.0, 3.0, 5.0) == pytest.approx(3.0 + 2.0 * 5.0)
    # lambda y(b) + y'(b)
    assert right_functional(bc, 2.0, 3.0, 5.0) == pytest.approx(2.0 * 3.0 + 5.0)


def test_transmission_residuals():
    """Test that states with y(0-) = 2 y(0+), y'(0-) = y'(0+) have zero residual."""
    assert transmission_residuals(EXAMPLE_T, (2.0, 0.7), (1.0, 0.7)) == (0.0, 0.0)
    res = transmission_residuals(EXAMPLE_T, (2.0, 0.7), (1.5, 0.7))
    assert res[0] == pytest.approx(1.0 / 5.0)
    assert math.isclose(res[1], 0.0)

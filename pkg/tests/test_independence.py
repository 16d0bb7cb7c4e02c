"""The conditional-independence predicate and its canonical fixture."""

import numpy as np
import pytest

from bayeskit import (
    TripleJoint,
    ValidationError,
    is_conditionally_independent,
    weather_example,
    with_roles,
)


def _ci_factored(rng: np.random.Generator, nx=2, ny=2, nz=2) -> TripleJoint:
    """A joint built as P(Z) * P(X|Z) * P(Y|Z): conditionally independent."""
    pz = rng.dirichlet(np.ones(nz))
    px_z = np.stack([rng.dirichlet(np.ones(nx)) for _ in range(nz)], axis=1)
    py_z = np.stack([rng.dirichlet(np.ones(ny)) for _ in range(nz)], axis=1)
    mass = np.einsum("k,ik,jk->ijk", pz, px_z, py_z)
    return TripleJoint(("x", "y", "z"), mass)


class TestTripleJoint:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError):
            TripleJoint(("a", "a", "b"), np.full((2, 2, 2), 1 / 8))

    def test_wrong_rank_rejected(self):
        with pytest.raises(ValidationError):
            TripleJoint(("a", "b", "c"), np.full((2, 2), 0.25))

    def test_bad_total_rejected(self):
        with pytest.raises(ValidationError, match="renormalization window"):
            TripleJoint(("a", "b", "c"), np.full((2, 2, 2), 0.25))

    def test_negative_mass_rejected(self):
        mass = np.full((2, 2, 2), 1 / 8)
        mass[0, 0, 0] = -1 / 8
        mass[1, 1, 1] = 3 / 8
        with pytest.raises(ValidationError, match="non-negative"):
            TripleJoint(("a", "b", "c"), mass)


class TestWithRoles:
    def test_axes_follow_the_names(self):
        joint = weather_example()
        swapped = with_roles(joint, "rain", "thunder", "lightning")
        assert swapped.names == ("rain", "thunder", "lightning")
        assert swapped.mass[1, 0, 1] == joint.mass[0, 1, 1]

    def test_unknown_name_rejected(self):
        with pytest.raises(ValidationError, match="unknown variable"):
            with_roles(weather_example(), "storm", "rain", "lightning")

    def test_repeated_role_rejected(self):
        with pytest.raises(ValidationError):
            with_roles(weather_example(), "rain", "rain", "lightning")


class TestConditionalIndependence:
    def test_full_product_distribution_passes(self):
        px, py, pz = (0.3, 0.7), (0.6, 0.4), (0.2, 0.8)
        mass = np.einsum("i,j,k->ijk", px, py, pz)
        ok, witness = is_conditionally_independent(TripleJoint(("x", "y", "z"), mass))
        assert ok and witness is None

    def test_weather_fixture_passes(self):
        ok, witness = is_conditionally_independent(weather_example(), tol=1e-9)
        assert ok and witness is None

    def test_weather_fixture_is_marginally_dependent(self):
        mass = weather_example().mass  # axes: thunder, rain, lightning
        p_t1 = mass[1].sum()
        p_r1 = mass[:, 1, :].sum()
        p_t1_r1 = mass[1, 1, :].sum()
        assert abs(p_t1_r1 / p_r1 - p_t1) > 0.01
        # the construction pins both values
        assert p_t1 == pytest.approx(0.135, abs=1e-12)
        assert p_t1_r1 / p_r1 == pytest.approx(0.288, abs=1e-12)

    def test_copy_of_y_with_constant_z_fails_with_witness(self):
        # X equals Y, Z carries no information: P(X|Y,Z) is 0 or 1 while
        # P(X|Z) is the X marginal.
        mass = np.zeros((2, 2, 2))
        mass[0, 0, 0] = 0.3
        mass[1, 1, 0] = 0.7
        joint = TripleJoint(("x", "y", "z"), mass)
        ok, witness = is_conditionally_independent(joint, tol=1e-9)
        assert not ok
        assert witness is not None
        # recompute the witness values independently
        p_yz = mass.sum(axis=0)
        p_xz = mass.sum(axis=1)
        p_z = mass.sum(axis=(0, 1))
        i, j, k = witness.x_index, witness.y_index, witness.z_index
        conditional = mass[i, j, k] / p_yz[j, k]
        marginal = p_xz[i, k] / p_z[k]
        assert conditional == witness.conditional
        assert marginal == witness.conditional_given_z
        assert abs(conditional - marginal) > 1e-9

    def test_zero_probability_conditioning_events_are_vacuous(self):
        # all mass at z=0; the z=1 slice imposes no constraints
        mass = np.zeros((2, 2, 2))
        mass[:, :, 0] = np.outer((0.5, 0.5), (0.25, 0.75))
        ok, _ = is_conditionally_independent(TripleJoint(("x", "y", "z"), mass))
        assert ok

    def test_factored_joints_always_pass(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            nx, ny, nz = rng.integers(2, 4, size=3)
            joint = _ci_factored(rng, int(nx), int(ny), int(nz))
            ok, _ = is_conditionally_independent(joint, tol=1e-9)
            assert ok

    def test_check_is_symmetric_in_x_and_y(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            mass = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
            joint = TripleJoint(("x", "y", "z"), mass)
            swapped = with_roles(joint, "y", "x", "z")
            assert (
                is_conditionally_independent(joint, tol=1e-6)[0]
                == is_conditionally_independent(swapped, tol=1e-6)[0]
            )

    def test_perturbed_factored_joints_fail_with_valid_witnesses(self):
        rng = np.random.default_rng(41)
        tol = 1e-9
        for _ in range(20):
            base = _ci_factored(rng).mass.copy()
            i, j, k = np.unravel_index(int(base.argmax()), base.shape)
            delta = min(1e-3, base[i, j, k] / 2)
            perturbed = base.copy()
            perturbed[i, j, k] -= delta
            perturbed[1 - i, j, k] += delta
            joint = TripleJoint(("x", "y", "z"), perturbed)
            ok, witness = is_conditionally_independent(joint, tol=tol)
            assert not ok
            assert abs(witness.conditional - witness.conditional_given_z) >= tol

    def test_non_positive_tolerance_rejected(self):
        with pytest.raises(ValueError):
            is_conditionally_independent(weather_example(), tol=0.0)

    def test_total_mass_is_one(self):
        assert weather_example().mass.sum() == pytest.approx(1.0, abs=1e-12)

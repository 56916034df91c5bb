import numpy as np
import pytest

from phaselab.fields import Field
from phaselab.grids import circle_grid, torus_grid
from phaselab.nodal import (
    IndeterminateSignError,
    NodalSet,
    check_alternation,
    check_congruent_intervals,
    check_rotation_symmetry,
    cluster_fiber_angles,
    extract_nodal_set,
    fit_decay,
    hausdorff_distance,
)
from phaselab.potentials import quartic
from phaselab.solvers import SolveConfig, newton_refine, reflect_extend, solve_dirichlet_model

P = quartic()


def circle_field(values, eps=0.1):
    return Field(circle_grid(values.size), values, eps)


def angles_set(angles, L=2 * np.pi):
    a = np.asarray(angles, dtype=float)
    return NodalSet("circle", a, np.zeros(a.size, dtype=int), (L,))


class TestExtraction:
    def test_sine_zeros_on_grid(self):
        g = circle_grid(256)
        f = Field(g, np.sin(g.axis(0)), 0.2)
        ns = extract_nodal_set(f)
        assert ns.count == 2
        assert np.allclose(np.sort(ns.angles), [0.0, np.pi], atol=1e-13)
        assert list(ns.directions) in ([1, -1], [-1, 1])

    def test_constant_sign_gives_empty_set(self):
        ns = extract_nodal_set(circle_field(np.ones(64)))
        assert ns.is_empty

    def test_negation_preserves_set_and_flips_directions(self):
        g = circle_grid(256)
        rng = np.random.default_rng(8)
        u = np.sin(g.axis(0) + 0.3) + 0.2 * np.sin(3 * g.axis(0))
        f = Field(g, u, 0.2)
        a = extract_nodal_set(f)
        b = extract_nodal_set(f.with_values(-u))
        assert hausdorff_distance(a, b) <= 1e-13
        assert np.array_equal(a.directions, -b.directions)

    def test_rolling_translates_angles(self):
        g = circle_grid(256)
        u = np.sin(g.axis(0) + 0.37) + 0.1 * np.cos(2 * g.axis(0))
        f = Field(g, u, 0.2)
        a = np.sort(extract_nodal_set(f).angles)
        k = 19
        b = np.sort(extract_nodal_set(f.with_values(np.roll(u, k))).angles)
        shifted = np.sort((a + k * g.h) % (2 * np.pi))
        assert np.max(np.abs(b - shifted)) <= g.h**2

    def test_torus_cloud_fiber_positions(self):
        g = torus_grid(128, 32)
        prof = np.sin(g.axis(0))
        f = Field(g, np.repeat(prof[:, None], 32, axis=1), 0.2)
        ns = extract_nodal_set(f)
        assert ns.kind == "torus"
        assert ns.points.shape[0] == 2 * 32  # two fiber circles, one point per row
        centers = cluster_fiber_angles(ns, gap_threshold=4 * g.h)
        assert np.allclose(np.sort(centers), [0.0, np.pi], atol=1e-12)


class TestHausdorff:
    def test_identical_sets(self):
        a = angles_set([0.3, 2.0])
        assert hausdorff_distance(a, a) == 0.0

    def test_antipodal_pair(self):
        assert hausdorff_distance(angles_set([0.0]), angles_set([np.pi])) == pytest.approx(np.pi)

    def test_two_point_example(self):
        d = hausdorff_distance(angles_set([0.0, np.pi]), angles_set([0.1, np.pi + 0.05]))
        assert d == pytest.approx(0.1, abs=1e-12)

    def test_empty_versus_nonempty_is_infinite(self):
        assert hausdorff_distance(angles_set([]), angles_set([1.0])) == np.inf
        assert hausdorff_distance(angles_set([]), angles_set([])) == 0.0

    def test_kind_mismatch(self):
        t = NodalSet("torus", np.array([0.0]), np.array([0]), (2 * np.pi, 2 * np.pi),
                     points=np.array([[0.0, 0.0]]), point_signs=np.array([1]),
                     point_axes=np.array([0]))
        with pytest.raises(ValueError):
            hausdorff_distance(angles_set([0.0]), t)

    @pytest.mark.parametrize("seed", range(4))
    def test_metric_properties_on_random_triples(self, seed):
        rng = np.random.default_rng(seed)
        sets = [angles_set(rng.uniform(0, 2 * np.pi, rng.integers(1, 6))) for _ in range(3)]
        a, b, c = sets
        assert hausdorff_distance(a, b) == hausdorff_distance(b, a)
        assert hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-12


class TestCongruence:
    def test_equal_spacing_passes(self):
        rep = check_congruent_intervals(angles_set([0, np.pi / 2, np.pi, 3 * np.pi / 2]))
        assert rep.passed and rep.max_rel_deviation == 0.0

    def test_unequal_spacing_fails_with_spacings(self):
        rep = check_congruent_intervals(angles_set([0.0, 1.0, np.pi, np.pi + 1.0]))
        assert not rep.passed
        expect = np.array([1.0, np.pi - 1.0, 1.0, np.pi - 1.0])
        assert np.allclose(np.sort(rep.spacings), np.sort(expect))

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            check_congruent_intervals(angles_set([1.0]))

    def test_refined_six_interface_solution(self):
        sol = solve_dirichlet_model(np.pi / 6, 0.1, P, SolveConfig(tol_grad=1e-12), n=129)
        f = reflect_extend(sol, 6)
        nr = newton_refine(f, P)
        rep = check_congruent_intervals(extract_nodal_set(nr.field), rel_tol=1e-5)
        assert rep.passed


class TestAlternation:
    def test_sine_alternates(self):
        g = circle_grid(256)
        f = Field(g, np.sin(g.axis(0)), 0.2)
        assert check_alternation(f, extract_nodal_set(f))

    def test_transversal_zeros_always_alternate(self):
        # any circle field with only sign-change zeros alternates by parity;
        # this named combination has four transversal zeros
        g = circle_grid(512)
        th = g.axis(0)
        f = Field(g, np.sin(2 * th) + 0.8 * np.sin(th), 0.2)
        ns = extract_nodal_set(f)
        assert ns.count == 4
        assert check_alternation(f, ns)

    def test_touching_zero_breaks_alternation(self):
        # 1 - cos(2 theta) vanishes at exactly two grid points without a sign
        # change: both arcs carry the same sign
        g = circle_grid(256)
        f = Field(g, 1.0 - np.cos(2 * g.axis(0)), 0.2)
        ns = extract_nodal_set(f)
        assert ns.count == 2
        assert not check_alternation(f, ns)

    def test_single_touching_zero(self):
        # 1 - cos(theta) has a single touching zero at the grid point 0
        g = circle_grid(256)
        f = Field(g, 1.0 - np.cos(g.axis(0)), 0.2)
        ns = extract_nodal_set(f)
        assert ns.count == 1
        assert not check_alternation(f, ns)

    def test_indeterminate_midpoint_raises(self):
        g = circle_grid(256)
        f = Field(g, np.sin(2 * g.axis(0)), 0.2)
        with pytest.raises(IndeterminateSignError):
            check_alternation(f, angles_set([0.0, np.pi]))

    def test_empty_set_rejected(self):
        g = circle_grid(256)
        f = Field(g, np.ones(256), 0.2)
        with pytest.raises(ValueError):
            check_alternation(f, extract_nodal_set(f))


@pytest.fixture(scope="module")
def refined_four():
    sol = solve_dirichlet_model(np.pi / 4, 0.1, P, SolveConfig(tol_grad=1e-12), n=129)
    return newton_refine(reflect_extend(sol, 4), P).field


class TestRotationSymmetry:

    def test_reflection_built_solution_is_exact(self, refined_four):
        rep = check_rotation_symmetry(refined_four, 4)
        assert rep.passed
        assert rep.sign_flip_residual <= 1e-12
        assert rep.plain_residual <= 1e-12

    def test_perturbed_field_fails(self, refined_four):
        rng = np.random.default_rng(0)
        noisy = refined_four.with_values(
            refined_four.values + 0.01 * rng.standard_normal(refined_four.grid.shape)
        )
        rep = check_rotation_symmetry(noisy, 4)
        assert rep.sign_flip_residual > 1e-3

    def test_odd_m_rejected(self, refined_four):
        with pytest.raises(ValueError):
            check_rotation_symmetry(refined_four, 3)

    def test_indivisible_grid_rejected(self):
        g = circle_grid(250)
        f = Field(g, np.sin(g.axis(0)), 0.2)
        with pytest.raises(ValueError):
            check_rotation_symmetry(f, 4)


class TestClusterFiberAngles:
    def test_two_clusters_with_wrap(self):
        pts = []
        rng = np.random.default_rng(2)
        for base in (0.0, 2.5):
            for _ in range(40):
                pts.append(((base + 0.002 * rng.standard_normal()) % (2 * np.pi),
                            rng.uniform(0, 2 * np.pi)))
        ns = NodalSet(
            "torus",
            np.sort(np.array([p[0] for p in pts])),
            np.zeros(len(pts), dtype=int),
            (2 * np.pi, 2 * np.pi),
            points=np.array(pts),
            point_signs=np.zeros(len(pts), dtype=int),
            point_axes=np.zeros(len(pts), dtype=int),
        )
        centers = cluster_fiber_angles(ns, gap_threshold=0.1)
        assert centers.size == 2
        assert min(abs(centers - 0.0).min(), abs(centers - 2 * np.pi).min()) <= 0.01
        assert abs(centers - 2.5).min() <= 0.01


@pytest.fixture(scope="module")
def two_interface():
    sol = solve_dirichlet_model(np.pi / 2, 0.05, P, SolveConfig(tol_grad=1e-11), n=1025)
    f = reflect_extend(sol, 2)
    return newton_refine(f, P).field


class TestDecayFit:

    def test_rate_matches_linearization(self, two_interface):
        # oracle: the linearization rate at the wells is sqrt(W''(1)) / eps
        ns = extract_nodal_set(two_interface)
        fit = fit_decay(two_interface, ns)
        assert abs(fit.kappa * 0.05 / np.sqrt(2.0) - 1.0) <= 0.2

    def test_pointwise_envelope(self, two_interface):
        ns = extract_nodal_set(two_interface)
        fit = fit_decay(two_interface, ns)
        assert fit.pointwise_bound_holds(slack=1e-2)
        assert fit.envelope_amplitude >= fit.amplitude

    def test_needs_room_away_from_zeros(self):
        g = circle_grid(256)
        f = Field(g, np.sin(g.axis(0)), 0.9)
        with pytest.raises(ValueError):
            fit_decay(f, extract_nodal_set(f))

    def test_needs_nonempty_set(self):
        g = circle_grid(256)
        f = Field(g, np.ones(256), 0.05)
        with pytest.raises(ValueError):
            fit_decay(f, extract_nodal_set(f))


def test_crossing_directions_alternate_for_transversal_fields():
    rng = np.random.default_rng(3)
    g = circle_grid(512)
    th = g.axis(0)
    for _ in range(5):
        u = rng.normal() * np.sin(th) + rng.normal() * np.cos(2 * th) + 0.3
        ns = extract_nodal_set(Field(g, u, 0.2))
        if ns.count == 0:
            continue
        d = ns.directions
        assert np.all(d != 0)
        assert np.all(d[1:] != d[:-1])
        assert d[0] != d[-1] or ns.count == 1

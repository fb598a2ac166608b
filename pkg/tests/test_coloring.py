import numpy as np
import pytest

from mudcap.coloring import ColorPlan, cochannel_set, color_scenario1, color_scenario2
from mudcap.geometry import build_beam_grid


@pytest.fixture
def grid10():
    return build_beam_grid(10, 10, 0.4, 52.0)


def lattice_neighbors(grid):
    """Pairs of beams at nearest-neighbour distance."""
    c = grid.beam_centers
    d = np.linalg.norm(c[:, None, :] - c[None, :, :], axis=-1)
    return np.argwhere((d > 0) & (d < 1.01 * grid.spacing))


class TestScenario1:
    def test_class_sizes(self, grid10):
        plan = color_scenario1(grid10)
        assert plan.n_colors == 4
        assert plan.cluster_size == 25
        assert all(len(cl) == 25 for cl in plan.clusters)

    def test_no_adjacent_beams_share_color(self, grid10):
        plan = color_scenario1(grid10)
        for i, j in lattice_neighbors(grid10):
            assert plan.color_of[i] != plan.color_of[j]

    def test_same_row_adjacent_columns_differ(self, grid10):
        plan = color_scenario1(grid10)
        for r in range(10):
            for c in range(9):
                assert plan.color_of[r * 10 + c] != plan.color_of[r * 10 + c + 1]

    def test_cochannel_separation_two_steps_per_axis(self, grid10):
        plan = color_scenario1(grid10)
        for cl in plan.clusters:
            r, c = cl // 10, cl % 10
            dr = np.abs(r[:, None] - r[None, :])
            dc = np.abs(c[:, None] - c[None, :])
            off = ~np.eye(len(cl), dtype=bool)
            assert np.all(dr[off] % 2 == 0)
            assert np.all(dc[off] % 2 == 0)
            assert np.all((dr + dc)[off] >= 2)

    def test_minimal_grid(self):
        plan = color_scenario1(build_beam_grid(2, 2, 0.4, 52.0))
        assert plan.cluster_size == 1
        assert sorted(plan.color_of.tolist()) == [0, 1, 2, 3]

    def test_odd_dimensions_rejected(self):
        with pytest.raises(ValueError, match="even"):
            color_scenario1(build_beam_grid(3, 4, 0.4, 52.0))
        with pytest.raises(ValueError, match="even"):
            color_scenario1(build_beam_grid(4, 5, 0.4, 52.0))


class TestScenario2:
    def test_quadrant_blocks(self, grid10):
        plan = color_scenario2(grid10)
        assert all(len(cl) == 25 for cl in plan.clusters)
        for cl in plan.clusters:
            r, c = cl // 10, cl % 10
            assert r.max() - r.min() == 4
            assert c.max() - c.min() == 4

    def test_every_member_has_same_class_neighbor(self, grid10):
        plan = color_scenario2(grid10)
        neigh = lattice_neighbors(grid10)
        for cl in plan.clusters:
            members = set(cl.tolist())
            for b in members:
                friends = {j for i, j in neigh if i == b and j in members}
                assert friends, f"beam {b} isolated in its color class"

    def test_classes_lattice_connected(self, grid10):
        plan = color_scenario2(grid10)
        neigh = lattice_neighbors(grid10)
        adjacency = {}
        for i, j in neigh:
            adjacency.setdefault(int(i), set()).add(int(j))
        for cl in plan.clusters:
            members = set(cl.tolist())
            seen = {cl[0]}
            stack = [cl[0]]
            while stack:
                cur = stack.pop()
                for nxt in adjacency.get(int(cur), ()) & members:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            assert seen == members

    def test_class_sizes_match_scenario1(self, grid10):
        p1, p2 = color_scenario1(grid10), color_scenario2(grid10)
        assert [len(c) for c in p1.clusters] == [len(c) for c in p2.clusters]

    def test_odd_dimensions_rejected(self):
        with pytest.raises(ValueError, match="even"):
            color_scenario2(build_beam_grid(5, 4, 0.4, 52.0))


class TestCochannelSet:
    def test_class_size_minus_one(self, grid10):
        plan = color_scenario1(grid10)
        for beam in [0, 13, 57, 99]:
            co = cochannel_set(plan, beam)
            assert len(co) == 24
            assert beam not in co
            assert np.all(plan.color_of[co] == plan.color_of[beam])

    def test_full_orthogonalization_is_empty(self):
        plan = ColorPlan.from_colors(np.arange(8), 8)
        assert len(cochannel_set(plan, 3)) == 0

    def test_symmetry(self, grid10):
        plan = color_scenario2(grid10)
        rng = np.random.default_rng(3)
        for _ in range(50):
            i, j = rng.integers(0, 100, size=2)
            assert (j in cochannel_set(plan, i)) == (i in cochannel_set(plan, j))

    def test_out_of_range(self, grid10):
        plan = color_scenario1(grid10)
        with pytest.raises(ValueError):
            cochannel_set(plan, -1)
        with pytest.raises(ValueError):
            cochannel_set(plan, 100)


class TestPlanInvariants:
    def test_partition(self, grid10):
        for plan in (color_scenario1(grid10), color_scenario2(grid10)):
            joined = np.concatenate(plan.clusters)
            assert sorted(joined.tolist()) == list(range(100))

    def test_relabeling_permutes_clusters_only(self, grid10):
        plan = color_scenario1(grid10)
        perm = [2, 0, 3, 1]
        relabeled = ColorPlan.from_colors(
            np.array([perm[c] for c in plan.color_of]), 4
        )
        original = {frozenset(cl.tolist()) for cl in plan.clusters}
        shuffled = {frozenset(cl.tolist()) for cl in relabeled.clusters}
        assert original == shuffled

    def test_from_colors_validation(self):
        with pytest.raises(ValueError):
            ColorPlan.from_colors(np.array([0, 0, 1]), 2)  # unequal classes
        with pytest.raises(ValueError):
            ColorPlan.from_colors(np.array([0, 2]), 2)  # out of range
        with pytest.raises(ValueError):
            ColorPlan.from_colors(np.array([]), 1)

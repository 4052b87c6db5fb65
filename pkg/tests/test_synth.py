import math

import pytest

from recgraph import (
    SocialGraph,
    SynthConfig,
    WreathConfig,
    calibrate_epsilon,
    clustering_coefficient,
    generate_power_law_bipartite,
    generate_wreath,
    measure_l_pp,
    rewire,
    sparsity,
)
from recgraph.synth import (
    PREFERENTIAL,
    UNIFORM,
    _repair_connectivity,
    generate_with_diagnostics,
    initial_degree,
    rewire_with_diagnostics,
    small_world_curve,
)


# -- generator --------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(n_people=0)
    with pytest.raises(ValueError):
        SynthConfig(epsilon=-0.1)
    with pytest.raises(ValueError):
        SynthConfig(rewire_threshold=-1)
    with pytest.raises(ValueError):
        SynthConfig(rewire_threshold=12, rewire_outcomes=11)


def test_initial_degree_formula():
    assert initial_degree(1, 0.7, 75) == 75
    assert initial_degree(500, 0.7, 75) == 1
    assert initial_degree(500, 0.27, 75) == 15
    assert initial_degree(3, 0.0, 75) == 75  # epsilon 0 caps at every movie


def test_deterministic_for_seed():
    cfg = SynthConfig(n_people=80, n_movies=30, epsilon=0.5, seed=11)
    a = generate_power_law_bipartite(cfg)
    b = generate_power_law_bipartite(cfg)
    assert list(a.edge_ids()) == list(b.edge_ids())
    c = generate_power_law_bipartite(SynthConfig(
        n_people=80, n_movies=30, epsilon=0.5, seed=12))
    assert list(a.edge_ids()) != list(c.edge_ids())


def test_string_seeds_are_accepted():
    g = generate_power_law_bipartite(SynthConfig(n_people=20, n_movies=10,
                                                 epsilon=0.4, seed="trial:3"))
    assert g.edge_count > 0


def test_degrees_survive_rewiring():
    # rewiring moves movie endpoints only, so person degrees stay put
    cfg = SynthConfig(n_people=120, n_movies=40, epsilon=0.6, seed=5)
    g = generate_power_law_bipartite(cfg)
    for b, degree in zip(g.people.tolist(), g.person_degrees().tolist()):
        assert degree == initial_degree(b, 0.6, 40)


def test_edge_count_is_seed_independent():
    expected = sum(initial_degree(b, 0.7, 75) for b in range(1, 501))
    assert expected == 1694
    for seed in (0, 1, "x"):
        g = generate_power_law_bipartite(SynthConfig(seed=seed))
        assert g.edge_count == 1694
    g27 = generate_power_law_bipartite(SynthConfig(epsilon=0.27, seed=9))
    assert g27.edge_count == sum(initial_degree(b, 0.27, 75) for b in range(1, 501))
    assert g27.edge_count == 9796


def test_top_person_rates_everything_and_graph_connects():
    from recgraph import is_connected_bipartite
    for seed in range(6):
        g = generate_power_law_bipartite(SynthConfig(
            n_people=60, n_movies=25, epsilon=0.5, seed=seed))
        assert g.movies_of(1) == frozenset(range(1, 26))
        assert is_connected_bipartite(g)


def test_epsilon_zero_without_rewiring_is_complete():
    cfg = SynthConfig(n_people=12, n_movies=8, epsilon=0.0, rewire_threshold=0)
    g = generate_power_law_bipartite(cfg)
    assert g.edge_count == 12 * 8
    assert sparsity(g) == 0.0


def test_rewiring_changes_layout_but_not_counts():
    base = SynthConfig(n_people=40, n_movies=20, epsilon=0.5,
                       rewire_threshold=0, seed=3)
    wired = SynthConfig(n_people=40, n_movies=20, epsilon=0.5,
                        rewire_threshold=5, seed=3)
    g0 = generate_power_law_bipartite(base)
    g1 = generate_power_law_bipartite(wired)
    assert g0.edge_count == g1.edge_count
    assert set(g0.edge_ids()) != set(g1.edge_ids())


def test_skipped_rewires_counted_when_person_saturated():
    # a single-movie world: nobody has an unseen movie to rewire to
    cfg = SynthConfig(n_people=5, n_movies=1, epsilon=0.1,
                      rewire_threshold=11, rewire_outcomes=11, seed=2)
    g, diag = generate_with_diagnostics(cfg)
    assert diag.skipped_rewires == 5
    assert g.edge_count == 5


def test_repair_pass_reports_zero_on_connected_output():
    _, diag = generate_with_diagnostics(SynthConfig(n_people=30, n_movies=10,
                                                    epsilon=0.4, seed=1))
    assert diag.repair_edges == 0


def test_repair_connectivity_attaches_stray_components():
    rated = {1: {1, 2}, 2: {1}, 3: {3}, 4: {3, 4}}
    added = _repair_connectivity(rated, n_people=4, n_movies=4)
    assert added == 1
    assert 1 in rated[4]  # higher-degree member of the stray component
    from recgraph import BipartiteRatings, is_connected_bipartite
    g = BipartiteRatings([(b, m) for b in rated for m in rated[b]],
                         people=range(1, 5), movies=range(1, 5))
    assert is_connected_bipartite(g)


def test_repair_connectivity_multiple_strays():
    rated = {1: {1}, 2: {2}, 3: {3}}
    added = _repair_connectivity(rated, n_people=3, n_movies=3)
    assert added == 2
    assert rated[2] == {1, 2} and rated[3] == {1, 3}


# -- calibration -------------------------------------------------------------------


def test_calibration_hits_requested_minimum():
    for kappa in range(1, 76):
        eps = calibrate_epsilon(kappa)
        assert initial_degree(500, eps, 75) == kappa, f"kappa {kappa}"


def test_calibration_known_values():
    assert abs(calibrate_epsilon(1) - 0.70) <= 0.01
    assert abs(calibrate_epsilon(15) - 0.27) <= 0.01


def test_calibration_generated_min_degree_round_trip():
    for kappa in (1, 4, 15, 40, 75):
        eps = calibrate_epsilon(kappa)
        g = generate_power_law_bipartite(SynthConfig(epsilon=eps, seed=0))
        assert int(g.person_degrees().min()) == kappa


def test_calibration_monotone_decreasing():
    values = [calibrate_epsilon(k) for k in range(1, 76)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_calibration_everyone_rates_everything():
    eps = calibrate_epsilon(75)
    assert 0 <= eps < math.log(75 / 74) / math.log(500)


def test_calibration_rejects_bad_kappa():
    with pytest.raises(ValueError):
        calibrate_epsilon(0)
    with pytest.raises(ValueError):
        calibrate_epsilon(76)
    with pytest.raises(ValueError):
        calibrate_epsilon(5, n_people=1)


# -- wreath lattices ---------------------------------------------------------------


def test_wreath_twelve_four():
    g = generate_wreath(12, 4)
    assert g.n == 12
    assert g.edge_count == 24
    assert all(g.degree_of(v) == 4 for v in range(12))
    assert g.has_edge(0, 1) and g.has_edge(0, 2) and not g.has_edge(0, 3)


def test_wreath_cycle():
    g = generate_wreath(5, 2)
    assert g.edge_count == 5
    assert all(g.degree_of(v) == 2 for v in range(5))


def test_wreath_validation():
    with pytest.raises(ValueError):
        generate_wreath(4, 4)
    with pytest.raises(ValueError):
        generate_wreath(10, 3)
    with pytest.raises(ValueError):
        generate_wreath(2, 2)
    with pytest.raises(ValueError):
        WreathConfig(n=12, k=4, mode="bogus")


# -- rewiring ----------------------------------------------------------------------


def test_rewire_p_zero_is_identity():
    g = generate_wreath(20, 4)
    assert set(rewire(g, 0.0).edge_ids()) == set(g.edge_ids())


def test_rewire_preserves_edge_count_and_simplicity():
    for seed in range(10):
        g = generate_wreath(30, 6)
        for p in (0.2, 1.0):
            for mode in (UNIFORM, PREFERENTIAL):
                r = rewire(g, p, mode, seed=seed)
                assert r.edge_count == g.edge_count
                assert sorted(int(v) for v in r.vertices) == list(range(30))
                for u, v in r.edge_ids():
                    assert u != v  # SocialGraph would reject these anyway
                assert r.degrees().sum() == 2 * r.edge_count


def test_rewire_p_one_touches_the_lattice():
    g = generate_wreath(40, 4)
    r = rewire(g, 1.0, UNIFORM, seed=0)
    assert set(r.edge_ids()) != set(g.edge_ids())


def test_rewire_deterministic_per_seed():
    g = generate_wreath(25, 4)
    a = rewire(g, 0.5, PREFERENTIAL, seed="s")
    b = rewire(g, 0.5, PREFERENTIAL, seed="s")
    c = rewire(g, 0.5, PREFERENTIAL, seed="t")
    assert set(a.edge_ids()) == set(b.edge_ids())
    assert set(a.edge_ids()) != set(c.edge_ids())


def test_rewire_complete_graph_skips_everything():
    k5 = generate_wreath(5, 4)  # complete graph on 5 vertices
    r, skipped = rewire_with_diagnostics(k5, 1.0, UNIFORM, seed=1)
    assert skipped == 10
    assert set(r.edge_ids()) == set(k5.edge_ids())


def test_rewire_validation():
    g = generate_wreath(10, 2)
    with pytest.raises(ValueError):
        rewire(g, 1.5)
    with pytest.raises(ValueError):
        rewire(g, 0.5, mode="bogus")


def test_preferential_rewiring_builds_hubs():
    # degree-proportional targeting should spread degrees wider than uniform
    g = generate_wreath(200, 4)
    uni = rewire(g, 1.0, UNIFORM, seed=7)
    pref = rewire(g, 1.0, PREFERENTIAL, seed=7)
    assert int(pref.degrees().max()) > int(uni.degrees().max())


# -- small-world curves ---------------------------------------------------------------


def test_curve_p_zero_is_exactly_one_one():
    cfg = WreathConfig(n=30, k=4, seed=0)
    points = small_world_curve(cfg, [0.0], trials=3)
    assert len(points) == 1
    assert points[0].p == 0.0
    assert points[0].l_ratio == 1.0 and points[0].c_ratio == 1.0


def test_curve_unscaled_base_values():
    lattice = generate_wreath(12, 4)
    assert abs(measure_l_pp(lattice).l_pp - 21 / 11) < 1e-9
    assert clustering_coefficient(lattice) == 0.5


def test_curve_is_deterministic_and_ordered():
    cfg = WreathConfig(n=60, k=4, seed=9)
    ps = [0.0, 0.3, 0.8]
    a = small_world_curve(cfg, ps, trials=2)
    b = small_world_curve(cfg, ps, trials=2)
    assert a == b
    assert [pt.p for pt in a] == ps
    for pt in a:
        assert pt.l_ratio > 0 and pt.c_ratio >= 0


def test_curve_requires_at_least_one_trial():
    with pytest.raises(ValueError):
        small_world_curve(WreathConfig(n=20, k=4), [0.1], trials=0)


def test_preferential_shortens_paths_at_full_rewiring():
    # hub formation under degree-proportional targets cuts the mean length
    uni_cfg = WreathConfig(n=500, k=8, seed=42, mode=UNIFORM)
    pref_cfg = WreathConfig(n=500, k=8, seed=42, mode=PREFERENTIAL)
    uni = small_world_curve(uni_cfg, [1.0], trials=12)[0]
    pref = small_world_curve(pref_cfg, [1.0], trials=12)[0]
    assert pref.l_ratio < uni.l_ratio

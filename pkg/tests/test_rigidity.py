import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grt.constructions import (
    c6xc6_sign,
    hexagonal_prism_balanced,
    rotation_group,
    rotation_representation,
    truncated_tetrahedron_family,
    truncated_tetrahedron_mix,
)
from grt.errors import NotSymmetricError
from grt.linalg import graph_spectrum
from grt.realization import (
    build_from_representation,
    irreducibility_test,
    is_balanced,
    scale_orbits,
    skeleton,
    spectral_realization,
)
from grt.rigidity import (
    Verdict,
    eigenspace_projections,
    fix_dimension,
    full_local_dimension,
    multiplicity_criteria,
    nonzero_hits,
    rigidity_report,
)
from grt.symmetry import transitivity_class
from _cases import CATALOG_CASES, aut, case_id, graph


def fake_spectrum(mults):
    """A spectrum with the given multiplicities; only multiplicities matter here."""
    class _S:
        multiplicities = tuple(mults)
    return _S()


# -- full local dimension


def test_full_local_dimension_examples():
    assert full_local_dimension(skeleton("cell24"))
    assert full_local_dimension(c6xc6_sign())
    g = graph("dodecahedron")
    four = [r for r in (spectral_realization(g, k) for k in range(1, 7)) if r.d == 4]
    assert four and not any(full_local_dimension(r) for r in four)


@given(st.integers(0, 10_000))
def test_full_local_dimension_against_svd(seed):
    # oracle: smallest singular value of each vertex's edge-direction matrix
    g = graph("cuboctahedron")
    m = np.random.default_rng(seed).standard_normal((g.n, 3))
    r = skeleton("cuboctahedron").with_matrix(m)
    smallest = min(np.linalg.svd(m[list(g.neighbors(i))] - m[i], compute_uv=False)[-1] for i in range(g.n))
    assert full_local_dimension(r) == (smallest > 1e-8)


# -- Fix dimension


def test_fix_dimension_examples():
    assert fix_dimension(skeleton("cell24"), aut("cell24")) == 1
    group = rotation_group(7)
    polygon = build_from_representation(group, rotation_representation(group), [1.0, 0.0])
    assert fix_dimension(polygon, group) == 2
    for case in (("petersen", ()), ("cuboctahedron", ())):
        assert fix_dimension(spectral_realization(graph(*case), 1), aut(*case)) == 1


def test_fix_dimension_stabilizer_oracle():
    # oracle: average T over the explicitly enumerated stabilizer and take its rank
    from grt.realization import intertwiner
    r = spectral_realization(graph("dodecahedron"), 2)
    group = aut("dodecahedron")
    stab = [p for p in group.elements if p[0] == 0]
    avg = sum(intertwiner(r, p) for p in stab) / len(stab)
    assert fix_dimension(r, group) == np.linalg.matrix_rank(avg, tol=1e-8)


# -- eigenspace projections


@pytest.mark.parametrize("case", CATALOG_CASES, ids=case_id)
def test_projection_norms_sum_to_d(case):
    g = graph(*case)
    spec = graph_spectrum(g)
    for k in range(1, len(spec) + 1):
        r = spectral_realization(g, k, spectrum=spec)
        proj = eigenspace_projections(r, spec)
        assert sum(n**2 for _, n in proj) == pytest.approx(r.d, abs=1e-6)
        hits = nonzero_hits(proj, r.d)
        assert len(hits) == 1 and hits[0][0] == pytest.approx(r.theta)


def test_projection_examples():
    hits = nonzero_hits(eigenspace_projections(hexagonal_prism_balanced()), 2)
    assert len(hits) == 1 and hits[0][0] == pytest.approx(0.0, abs=1e-9)
    mix = truncated_tetrahedron_mix()
    hits = nonzero_hits(eigenspace_projections(mix), mix.d)
    assert sorted(round(t, 9) for t, _ in hits) == [0.0, 2.0]
    assert is_balanced(mix) is None


@given(st.floats(0.05, 1.5))
def test_family_projections(t):
    r = truncated_tetrahedron_family(t)
    proj = eigenspace_projections(r)
    assert sum(n**2 for _, n in proj) == pytest.approx(r.d, abs=1e-6)
    assert len(nonzero_hits(proj, r.d)) == 2


# -- multiplicity criteria


def test_knn_criteria():
    for n in (3, 4, 5):
        c = multiplicity_criteria(graph_spectrum(graph("complete_bipartite", (n, n))), 2)
        assert c.balanced_forced and not c.rigid_forced


def test_dodecahedron_criteria():
    c = multiplicity_criteria(graph_spectrum(graph("dodecahedron")), 5)
    assert c.balanced_forced and c.rigid_forced


def test_tied_top_multiplicity():
    for d in (1, 3, 10):
        assert not multiplicity_criteria(fake_spectrum([4, 4, 1]), d).balanced_forced


@given(st.lists(st.integers(1, 12), min_size=1, max_size=8), st.integers(1, 12))
def test_criteria_definition(mults, d):
    c = multiplicity_criteria(fake_spectrum(mults), d)
    top = sorted(mults, reverse=True) + [0]
    assert c.balanced_forced == (top[0] > top[1] and top[1] < d)
    assert c.rigid_forced == (c.balanced_forced and top[0] < 2 * d)
    assert c.balanced_forced or not c.rigid_forced


def test_criteria_bad_dimension():
    with pytest.raises(ValueError):
        multiplicity_criteria(graph_spectrum(graph("petersen")), 0)


# -- reports


def test_cell24_rule_b():
    rep = rigidity_report(skeleton("cell24"), group=aut("cell24"))
    assert rep.verdict is Verdict.RIGID and rep.rule == "b"
    assert rep.evidence["balanced_theta"] == pytest.approx(4.0)
    assert rep.evidence["rule_b_check"] == {"irreducible": True, "balanced": True}
    assert rep.fix_dim == 1


def test_dodecahedron_rule_a():
    rep = rigidity_report(spectral_realization(graph("dodecahedron"), 2), group=aut("dodecahedron"))
    assert rep.verdict is Verdict.RIGID and rep.rule == "a"


@pytest.mark.parametrize("scales", [(1, 1.5), (1, 0.5), (2, 1)])
def test_rhombic_flexible(scales):
    group = aut("rhombic_dodecahedron")
    r = scale_orbits(skeleton("rhombic_dodecahedron"), group, scales)
    rep = rigidity_report(r, group=group)
    assert rep.verdict is Verdict.FLEXIBLE and rep.rule == "d"
    assert rep.evidence["nonzero_vertex_orbits"] == 2


def test_truncated_tetrahedron_family_rule_e():
    group = aut("truncated_tetrahedron")
    rep = rigidity_report(truncated_tetrahedron_family(0.6, group), group=group)
    assert rep.verdict is Verdict.FLEXIBLE and rep.rule == "e"
    assert len(rep.eigenspace_hits) == 2


def test_reducible_mix_is_inconclusive():
    # two hits alone certify nothing without irreducibility
    group = aut("truncated_tetrahedron")
    rep = rigidity_report(truncated_tetrahedron_mix(), group=group)
    assert rep.irreducible is False
    assert rep.verdict is Verdict.INCONCLUSIVE and rep.rule is None


def test_not_symmetric_raises():
    r = skeleton("cuboctahedron").with_matrix(np.random.default_rng(0).standard_normal((12, 3)))
    with pytest.raises(NotSymmetricError):
        rigidity_report(r, group=aut("cuboctahedron"))


@pytest.mark.parametrize("case", CATALOG_CASES, ids=case_id)
def test_report_invariants(case):
    g = graph(*case)
    group = aut(*case)
    trans = transitivity_class(g, group)
    spec = graph_spectrum(g)
    for k in range(1, len(spec) + 1):
        r = spectral_realization(g, k, spectrum=spec)
        rep = rigidity_report(r, group=group)
        assert rep.verdict in (Verdict.RIGID, Verdict.FLEXIBLE, Verdict.INCONCLUSIVE)
        assert (rep.rule is None) == (rep.verdict is Verdict.INCONCLUSIVE)
        assert sum(n**2 for _, n in eigenspace_projections(r, spec)) == pytest.approx(r.d, abs=1e-6)
        if trans.arc and rep.full_local_dimension:
            # consequences of arc-transitivity plus full local dimension
            assert irreducibility_test(r, group).irreducible
            assert is_balanced(r) is not None
        if rep.rule == "c":
            assert rep.fix_dim == 1 and trans.vertex
        json.loads(rep.to_json())


def test_report_json():
    d = json.loads(rigidity_report(skeleton("cell24")).to_json())
    assert d["verdict"] == "rigid_certified"
    assert d["rule"] == "b"
    assert set(d) >= {"full_local_dimension", "fix_dim", "eigenspace_hits", "balanced_forced", "rigid_forced"}

import json

import numpy as np
import pytest

from complexes import (
    SimplicialComplex,
    SquarefreeIdeal,
    all_masks,
    alexander_dual,
    complex_of_ideal,
    hochster_huneke_components,
    link,
    load_document,
    mask_of,
    minimal_transversals,
    parse_and_canonicalize,
    primary_decomposition,
    pure_skeleton,
    sr_dual_pair,
    vertices_of,
)
from errors import ComplexError, ParseError


def masks(*vertex_lists):
    return tuple(mask_of(v) for v in vertex_lists)


def test_bitmask_helpers():
    assert mask_of([1, 3]) == 0b101
    assert vertices_of(0b101) == (1, 3)
    assert vertices_of(0) == ()
    assert all_masks(3) == (0, 1, 2, 4, 3, 5, 6, 7)


def test_minimal_transversals_edge_cases():
    assert minimal_transversals([]) == (0,)
    assert minimal_transversals([0]) == ()
    assert minimal_transversals(masks([1, 2], [3, 4])) == masks([1, 3], [1, 4], [2, 3], [2, 4])


def test_parse_primary_components():
    ideal, _ = parse_and_canonicalize({"n": 4, "primary_components": [[1, 3], [2, 3], [4]]})
    assert ideal.generators == masks([3, 4], [1, 2, 4])


def test_parse_reduces_to_antichain():
    ideal, _ = parse_and_canonicalize('{"n": 2, "generators": [[1], [1, 2]]}')
    assert ideal.generators == masks([1])


def test_parse_facets():
    ideal, complex_ = parse_and_canonicalize({"n": 4, "facets": [[1, 2], [3, 4]]})
    assert ideal.generators == masks([1, 3], [1, 4], [2, 3], [2, 4])
    assert complex_.facets == masks([1, 2], [3, 4])


def test_three_input_styles_agree():
    docs = [
        {"n": 4, "generators": [[2, 4], [1, 3], [2, 3], [1, 4]]},
        {"n": 4, "facets": [[3, 4], [1, 2]]},
        {"n": 4, "primary_components": [[3, 4], [1, 2]]},
    ]
    parsed = [parse_and_canonicalize(d) for d in docs]
    assert all(p == parsed[0] for p in parsed)


def test_canonical_form_is_idempotent(tree):
    again, _ = parse_and_canonicalize(tree.canonical_json())
    assert again == tree
    assert again.canonical_json() == tree.canonical_json()


@pytest.mark.parametrize(
    "doc",
    [
        '{"n": 3, "generators": [[]]}',
        '{"n": 3, "generators": [[1, 4]]}',
        '{"n": 25, "generators": [[1]]}',
        '{"n": 3}',
        '{"n": 3, "generators": [[1]], "facets": [[2]]}',
        '{"n": 3, "generators": [[1]], "colour": "red"}',
        '{"n": 3, "generators": [[true]]}',
        '{"n": 3, "facets": []}',
        '{"n": 3, "primary_components": []}',
        '{"n": 3, "generators": [[1]',
        '[1, 2, 3]',
    ],
)
def test_parse_errors(doc):
    with pytest.raises(ParseError):
        parse_and_canonicalize(doc)


def test_load_document_errors(tmp_path):
    bad_bytes = tmp_path / "latin1.json"
    bad_bytes.write_bytes(b'{"n": 2, "generators": [[1, 2]], "name": "\xff\xfe"}')
    with pytest.raises(ParseError, match="UTF-8"):
        load_document(str(bad_bytes))
    with pytest.raises(ParseError):
        load_document(str(tmp_path / "missing.json"))
    good = tmp_path / "good.json"
    good.write_text('{"n": 2, "generators": [[1, 2]]}', encoding="utf-8")
    assert load_document(str(good))[0] == SquarefreeIdeal(2, (mask_of([1, 2]),))


def test_unit_ideal_rejected_by_constructor():
    with pytest.raises(ParseError):
        SquarefreeIdeal(2, (0,))


def test_complex_validation():
    with pytest.raises(ComplexError):
        SimplicialComplex(3, masks([1, 2], [1]))
    with pytest.raises(ComplexError):
        SimplicialComplex(2, masks([1, 3]))
    assert SimplicialComplex.void(3).dim == float("-inf")
    assert SimplicialComplex.empty(3).dim == -1
    assert SimplicialComplex.void(3) != SimplicialComplex.empty(3)


def test_sr_dual_pair_examples():
    assert sr_dual_pair(SimplicialComplex.simplex(3)).is_zero
    assert sr_dual_pair(SimplicialComplex.empty(3)).generators == masks([1], [2], [3])
    two_edges = SimplicialComplex(4, masks([1, 2], [3, 4]))
    assert sr_dual_pair(two_edges).generators == masks([1, 3], [1, 4], [2, 3], [2, 4])
    with pytest.raises(ComplexError):
        sr_dual_pair(SimplicialComplex.void(3))


def test_sr_round_trip_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(1, 6))
        chosen = [m for m in all_masks(n)[1:] if rng.random() < 0.3] or [0]
        complex_ = SimplicialComplex.from_faces(n, chosen)
        ideal = sr_dual_pair(complex_)
        assert sr_dual_pair(ideal) == complex_
        # generators are exactly the minimal nonfaces
        nonfaces = [m for m in range(1 << n) if not complex_.contains(m)]
        minimal = [m for m in nonfaces if not any(o != m and o & m == o for o in nonfaces)]
        assert set(ideal.generators) == set(minimal)


def test_alexander_dual_examples(two_planes):
    assert alexander_dual(two_planes).generators == masks([1, 2], [3, 4])
    assert alexander_dual(SquarefreeIdeal(1, masks([1]))).generators == masks([1])
    irrelevant = SquarefreeIdeal(5, masks([1], [2], [3], [4], [5]))
    assert alexander_dual(irrelevant).generators == masks([1, 2, 3, 4, 5])
    with pytest.raises(ComplexError):
        alexander_dual(SquarefreeIdeal(3, ()))


def test_alexander_dual_is_an_involution(tree, two_planes, nine_vars):
    for ideal in (tree, two_planes, nine_vars):
        assert alexander_dual(alexander_dual(ideal)) == ideal


def test_primary_decomposition_examples(two_planes, tree):
    assert primary_decomposition(two_planes) == list(masks([1, 2], [3, 4]))
    assert primary_decomposition(tree) == list(masks([4], [1, 3], [2, 3]))
    principal = SquarefreeIdeal(3, masks([1, 2, 3]))
    assert primary_decomposition(principal) == list(masks([1], [2], [3]))


def test_primary_decomposition_intersection_is_the_ideal(tree, two_planes, nine_vars):
    for ideal in (tree, two_planes, nine_vars):
        primes = primary_decomposition(ideal)
        for m in range(1 << ideal.n):
            in_all = all(m & p for p in primes)
            assert in_all == ideal.contains_monomial(m)


def test_link_examples(nine_vars):
    two_edges = SimplicialComplex(4, masks([1, 2], [3, 4]))
    assert link(two_edges, mask_of([1])).facets == masks([2])
    assert link(two_edges, mask_of([1, 2])) == SimplicialComplex.empty(4)
    delta = complex_of_ideal(nine_vars)
    assert link(delta, 0) == delta
    with pytest.raises(ComplexError):
        link(two_edges, mask_of([1, 3]))


def test_pure_skeleton_examples():
    delta = SimplicialComplex(4, masks([1, 2, 3], [2, 4], [1, 4]))
    assert pure_skeleton(delta, 1).facets == masks([1, 2], [1, 3], [1, 4], [2, 3], [2, 4])
    assert pure_skeleton(delta, 0).facets == masks([1], [2], [3], [4])
    assert pure_skeleton(delta, 2).facets == masks([1, 2, 3])
    pure = SimplicialComplex(4, masks([1, 2], [3, 4]))
    assert pure_skeleton(pure, 1) == pure
    with pytest.raises(ComplexError):
        pure_skeleton(delta, 3)


def test_hochster_huneke_components_examples():
    assert hochster_huneke_components(SimplicialComplex(4, masks([1, 2], [3, 4]))) == 2
    assert hochster_huneke_components(SimplicialComplex.simplex(3)) == 1
    assert hochster_huneke_components(SimplicialComplex(4, masks([1, 2, 3], [2, 4], [1, 4]))) == 1
    with pytest.raises(ComplexError):
        hochster_huneke_components(SimplicialComplex.void(2))


def test_hochster_huneke_components_relabel_invariant(nine_vars):
    rng = np.random.default_rng(5)
    complexes = [
        complex_of_ideal(nine_vars),
        SimplicialComplex(6, masks([1, 2, 3], [3, 4, 5], [5, 6, 1], [2, 4])),
        SimplicialComplex(5, masks([1, 2], [3, 4], [4, 5])),
    ]
    for delta in complexes:
        expected = hochster_huneke_components(delta)
        for _ in range(5):
            perm = {v + 1: int(p) + 1 for v, p in enumerate(rng.permutation(delta.n))}
            assert hochster_huneke_components(delta.relabel(perm)) == expected


def test_document_round_trip_through_json(two_planes):
    doc = json.loads(json.dumps(complex_of_ideal(two_planes).to_document()))
    ideal, _ = parse_and_canonicalize(doc)
    assert ideal == two_planes


def test_canonical_order_of_faces():
    faces = SimplicialComplex(3, masks([1, 2], [2, 3])).faces
    keys = [(len(vertices_of(f)), vertices_of(f)) for f in faces]
    assert keys == sorted(keys)
    assert list(faces) == [0, 1, 2, 4, 3, 6]

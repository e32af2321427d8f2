import random

import pytest

from eulerlink.simplicial import (Complex, ComplexError, barycentric_subdivision, build_complex,
                                  combinatorial_link, cone, disjoint_union, euler_characteristic,
                                  geometric_link, glue, join, product, random_complex, suspension, wedge)

from conftest import sphere, two_spheres

CIRCLE = [[0, 1], [1, 2], [0, 2]]


def test_build_circle():
    K = build_complex(CIRCLE)
    assert K.dim == 1
    assert K.f_vector() == [3, 3]


def test_build_point():
    K = build_complex([[0]])
    assert K.dim == 0 and len(K) == 1


def test_mixed_local_dimension():
    K = build_complex([[0, 1, 2], [2, 3]])
    assert K.dim == 2
    lk, _ = combinatorial_link(K, (3,))
    assert lk.f_vector() == [1]


def test_build_rejects_bad_input():
    with pytest.raises(ComplexError):
        build_complex([])
    with pytest.raises(ComplexError):
        build_complex([[0, 0]])
    with pytest.raises(ComplexError):
        build_complex([[0, 1]]).locate((0, 2))


def test_simplices_sorted_by_dimension_then_lexicographically():
    K = build_complex([[2, 3], [0, 1, 3]])
    dims = list(K.dims)
    assert dims == sorted(dims)
    for d in range(K.dim + 1):
        layer = K.simplices_of_dim(d)
        assert layer == sorted(layer)


def test_link_of_vertex_in_tetrahedron_boundary():
    lk, verts = combinatorial_link(sphere(2), (0,))
    assert lk.f_vector() == [3, 3]
    assert verts == [1, 2, 3]


def test_link_in_edge():
    lk, _ = combinatorial_link(build_complex([[0, 1]]), (0,))
    assert lk.f_vector() == [1]


def test_link_of_wedge_point_of_two_circles():
    W, _, _ = wedge(build_complex(CIRCLE), 0, build_complex(CIRCLE), 0)
    lk, _ = combinatorial_link(W, (0,))
    assert lk.f_vector() == [4]


def test_geometric_link_vertex_is_combinatorial():
    K = sphere(2)
    assert geometric_link(K, (0,)) == combinatorial_link(K, (0,))[0]


def test_geometric_link_of_edge_is_circle():
    L = geometric_link(sphere(2), (0, 1))
    assert euler_characteristic(L) == 0
    assert L.f_vector() == [4, 4]


def test_geometric_link_of_maximal_triangle():
    L = geometric_link(build_complex([[0, 1, 2]]), (0, 1, 2))
    assert L.f_vector() == [4, 4]


@pytest.mark.parametrize("K, chi", [(sphere(1), 0), (sphere(2), 2), (build_complex([[0]]), 1),
                                    (two_spheres(), -1)])
def test_euler_characteristic(K, chi):
    assert euler_characteristic(K) == chi


def test_subdivide_edge():
    S, carrier = barycentric_subdivision(build_complex([[0, 1]]))
    assert S.f_vector() == [3, 2]
    assert len(carrier) == len(S)


def test_subdivide_triangle():
    S, _ = barycentric_subdivision(build_complex([[0, 1, 2]]))
    assert S.f_vector() == [7, 12, 6]


def test_subdivide_circle():
    S, _ = barycentric_subdivision(build_complex(CIRCLE))
    assert S.f_vector() == [6, 6]


def test_carrier_maps_into_the_containing_simplex():
    K = sphere(3)
    S, carrier = barycentric_subdivision(K)
    for s, c in zip(S.simplices, carrier):
        # every vertex of s is the barycentre of a face of the carrier
        top = set(K.simplices[c])
        assert all(set(K.simplices[v]) <= top for v in s)
        assert K.dims[c] == max(K.dims[v] for v in s)


def test_suspension_of_two_points_is_circle():
    S, _ = suspension(build_complex([[0], [1]]))
    assert S.f_vector() == [4, 4]
    assert euler_characteristic(S) == 0


def test_suspension_of_empty_is_two_points():
    S, _ = suspension(Complex.empty())
    assert S.f_vector() == [2]


def test_figure_eight():
    W, _, _ = wedge(build_complex(CIRCLE), 1, build_complex(CIRCLE), 2)
    assert euler_characteristic(W) == -1


def test_square_product():
    P, vid = product(build_complex([[0, 1]]), build_complex([[0, 1]]))
    assert P.f_vector() == [4, 5, 2]
    assert len(vid) == 4


def test_product_euler_characteristic_multiplies():
    A, B = sphere(1), build_complex([[0, 1], [1, 2]])
    P, _ = product(A, B)
    assert euler_characteristic(P) == euler_characteristic(A) * euler_characteristic(B)


def test_cone_and_join():
    C, apex = cone(sphere(1))
    assert euler_characteristic(C) == 1
    assert (apex,) in C
    J, _, _ = join(build_complex([[0], [1]]), build_complex([[0], [1]]))
    assert euler_characteristic(J) == 0


def test_disjoint_union_adds():
    U, _, _ = disjoint_union(sphere(2), sphere(1))
    assert euler_characteristic(U) == 2


def test_glue_refuses_collapse():
    with pytest.raises(ComplexError):
        glue(build_complex([[0, 1]]), {1: 0})
    G = glue(build_complex([[0, 1], [2, 3]]), {3: 1})
    assert G.f_vector() == [3, 2]


def test_random_complex_respects_bounds():
    rng = random.Random(1)
    for _ in range(30):
        d = rng.randint(0, 4)
        K = random_complex(rng, max_simplices=80, max_dim=d)
        assert len(K) <= 80
        assert K.dim <= d

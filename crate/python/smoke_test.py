"""Smoke test for the Python bindings.

Install first:  pip install -e crates/python --no-build-isolation
"""

import homfill


def main():
    g = homfill.Complex.preset("grid:3x3")
    assert g.n_vertices == 16 and g.n_cells(2) == 18
    again = homfill.Complex.from_text(g.to_text())
    assert again.to_text() == g.to_text()

    z = g.path_chain([0, 1, 5, 4, 0], "Z:disc")
    assert z.dim == 1 and z.norm() == "4"
    assert g.boundary(z).terms() == []
    r = homfill.fill(g, z, budget_nodes=100_000)
    assert (r.norm, r.status) == ("2", "optimal")
    assert g.boundary(r.filling) == z
    big = homfill.area(g, [0, 1, 2, 6, 10, 9, 8, 4, 0])
    assert big.norm == "8", big

    x = homfill.Chain("Q:abs", 1, [(0, "1/2"), (0, "1/2"), (3, "-2")])
    assert x.terms() == [(0, "1"), (3, "-2")]
    assert homfill.Chain.from_text(x.to_text()) == x

    f2 = homfill.Complex.preset("f2", radius=4)
    assert f2.delta() == "0"
    rips = f2.rips("3")
    tri = rips.vertices(2, 0)
    c = rips.path_chain(tri + [tri[0]], "Z:disc")
    res, n, trace = homfill.hypfill(rips, c, "0", "1", basepoint=0)
    assert res.status == "upper_bound"
    assert int(res.norm) <= n * 3
    assert trace.startswith("homfill trace")
    try:
        homfill.hypfill(rips, c, "1", "1")
    except ValueError as e:
        assert "4*delta + 2*epsilon" in str(e)
    else:
        raise AssertionError("threshold gate did not trigger")

    z2 = homfill.Complex.preset("z2", radius=6)
    p = homfill.profile(z2, 1, 48, "Z:disc", exhaustive_to=6, samples=50, seed=1, ball_radius=6)
    label, alpha = p.classify()
    assert label == "quadratic", (label, alpha)
    assert p.plotdata().startswith("# alpha = ")
    assert homfill.Profile.from_text(p.to_text()).to_text() == p.to_text()

    tree = homfill.Complex.preset("tree:3,3")
    assert homfill.profile(tree, 1, 10, "Z:disc", exhaustive_to=6).is_zero()
    print("python smoke test passed")


if __name__ == "__main__":
    main()

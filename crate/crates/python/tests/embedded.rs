use pyo3::prelude::*;

use homfill_py::homfill;

fn run(code: &std::ffi::CStr) {
    pyo3::append_to_inittab!(homfill);
    Python::attach(|py| py.run(code, None, None).map_err(|e| e.to_string())).unwrap();
}

#[test]
fn exercises_the_module() {
    run(c"
import homfill
g = homfill.Complex.preset('grid:2x2')
assert g.n_vertices == 9
z = g.path_chain([0, 1, 2, 5, 8, 7, 6, 3, 0], 'Z:abs')
r = homfill.fill(g, z)
assert r.norm == '8' and r.status == 'optimal', r
assert g.boundary(r.filling) == z
try:
    homfill.Chain('Z:weird', 1, [])
except ValueError:
    pass
else:
    raise AssertionError('bad ring accepted')
p = homfill.profile(g, 1, 8, 'Z:disc', exhaustive_to=8)
assert dict((e[0], e[1]) for e in p.entries())[4] == '2'
");
}

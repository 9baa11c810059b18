use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

/// Runs `code` with the module bound to `st`.
fn run(code: &str) -> PyResult<()> {
    Python::attach(|py| {
        let module = wrap_pymodule!(softtorus_py::softtorus_py)(py);
        let locals = PyDict::new(py);
        locals.set_item("st", module)?;
        let code = CString::new(code).expect("no interior nul");
        py.run(&code, None, Some(&locals))
    })
}

#[test]
fn poly_round_trip_and_order() {
    run(r#"
p = st.Poly("u*v - v*u")
assert str(p) == "u_0*v - v*u_0", str(p)
assert p.crossed_form() == "(u_0 - u_1)*v"
assert [k for k, _ in p.normal_order()] == [1]
assert st.Poly(str(p)) == p
e = (p.adjoint() * p).cond_exp()
assert e.v_degree() == 0
assert (p - p).is_zero()
"#)
    .unwrap();
}

#[test]
fn certify_and_verify() {
    run(r#"
c = st.certify("u*v - v*u", 0.5, dims=[1, 2], restarts=8, seed=7, ascent_steps=200)
assert abs(c.achieved_norm - 0.5) < 1e-6, c
assert c.commutator_norm <= 0.5 + 1e-9
assert c.lower_bound <= c.achieved_norm + 1e-12
assert all(passed for _, _, passed, _ in c.verify(1e-8))
assert st.verify_json(c.to_json())
assert len(c.u) == c.n and len(c.v[0]) == c.n
again = st.Certificate.from_json(c.to_json())
assert again.u == c.u
try:
    st.certify("u - u", 0.5)
    raise AssertionError("zero polynomial accepted")
except ValueError as e:
    assert "zero" in str(e)
"#)
    .unwrap();
}

#[test]
fn building_blocks() {
    run(r#"
v = st.halmos_dilate([[0.5]])
assert abs(v[0][1] - 3 ** 0.5 / 2) < 1e-15 and abs(v[1][1] + 0.5) < 1e-15
path = st.path_to_identity([[-1 + 0j]], 1.0)
assert len(path) == 4 and path[-1] == [[1 + 0j]]
units = st.random_brep(0.8, 3, -1, 1, seed=5)
assert len(units) == 3
assert units == st.random_brep(0.8, 3, -1, 1, seed=5)
assert abs(st.op_norm([[3, 0], [0, 1j]]) - 3) < 1e-12
try:
    st.halmos_dilate([[2.0]])
    raise AssertionError("non-contraction accepted")
except ValueError:
    pass
"#)
    .unwrap();
}

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(qgrass::qgrass)(py);
        let globals = PyDict::new(py);
        globals.set_item("qgrass", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None).map_err(|e| e.display(py)).unwrap();
    });
}

#[test]
fn closed_forms() {
    run(r#"
assert qgrass.gauss_binom(4, 2) == 35
assert qgrass.gauss_binom(7, 0, 3) == 1
assert qgrass.gauss_binom(5, 9) == 0
assert qgrass.gauss_binom(40, 20, 9) > 2**64
assert qgrass.h1_size(1, 3, 9) == qgrass.h3_size(1, 3, 9) == 883
assert qgrass.h2_size(1, 3, 5, 9) == 419
assert qgrass.h3_size(1, 3, 6, 3) == 508
try:
    qgrass.h2_size(1, 3, 3, 9)
    raise AssertionError("c = 3 accepted")
except ValueError:
    pass
"#);
}

#[test]
fn subspaces() {
    run(r#"
S = qgrass.Subspace
a = S(2, 4, [[1, 0, 0, 0], [1, 1, 0, 0]])
b = S(2, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])
assert a.dim == 2 and a.rows == [[1, 0, 0, 0], [0, 1, 0, 0]]
i = a.intersection(b)
assert i.dim == 1 and a.intersect_dim(b) == 1
assert a.sum(b).dim == 3 and a.sum(b).contains(a)
assert S.from_json(a.to_json()) == a
assert len({a, S(2, 4, [[0, 1, 0, 0], [1, 0, 0, 0]])}) == 1
assert qgrass.grassmannian_count(6, 3, 2) == qgrass.gauss_binom(6, 3, 2)
"#);
}

#[test]
fn families_end_to_end() {
    run(r#"
F = qgrass.Family
f = F.build("h2", 1, 3, 8, c=5, seed=3)
assert len(f) == qgrass.h2_size(1, 3, 5, 8)
assert f.kind == "h2" and f.params == (8, 3, 2, 1)
assert f.is_t_intersecting() and f.common_core_dim() == 0 and f.is_maximal()
assert f.tau()[0] == 2
assert f.structure() == ("common_core", True)
g = F.from_binary(f.to_binary())
assert len(g) == len(f) and all(m in f for m in g.members())
assert F.from_json(f.to_json()).to_json() == f.to_json()
h = F.build("h3", 1, 3, 8)
assert h.structure() == ("grassmannian", True)
"#);
}

#[test]
fn campaigns() {
    run(r#"
import json
cfg = json.dumps({"id": "py", "checks": ["sizes"], "points": [{"q": 2, "n": 7, "k": 3, "t": 1}]})
r = json.loads(qgrass.run_campaign(cfg))
assert r["status"] == "PASS" and r["summary"]["failed"] == 0
assert json.loads(qgrass.desk_verify_config())["id"] == "desk-verify"
"#);
}

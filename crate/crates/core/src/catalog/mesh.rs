//! Triangle meshes of sampled graphs in Wavefront OBJ form.

use std::fmt::Write;

use crate::error::Result;
use crate::numerics::ScalarField;

/// Shortest decimal that survives rounding to nine significant digits.
fn sig9(v: f64) -> String {
    let r: f64 = format!("{v:.8e}").parse().unwrap_or(v);
    if r == 0.0 {
        "0".into()
    } else if r.abs() < 1e-4 || r.abs() >= 1e9 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Vertices `(x, y, z)` for masked nodes in row-major order, two triangles
/// per grid cell whose four corners are all masked.
pub fn export_obj(z: &ScalarField) -> Result<String> {
    let g = z.grid();
    let mut index = vec![0usize; g.len()];
    let mut out = String::new();
    let mut next = 1;
    for k in g.masked_indices() {
        let (x, y) = g.coords(k);
        writeln!(out, "v {} {} {}", sig9(x), sig9(y), sig9(z.at(k))).unwrap();
        index[k] = next;
        next += 1;
    }
    for j in 0..g.ny() - 1 {
        for i in 0..g.nx() - 1 {
            let c = [g.idx(i, j), g.idx(i + 1, j), g.idx(i + 1, j + 1), g.idx(i, j + 1)];
            if c.iter().all(|&k| g.is_masked(k)) {
                let [a, b, cc, d] = c.map(|k| index[k]);
                writeln!(out, "f {a} {b} {cc}").unwrap();
                writeln!(out, "f {a} {cc} {d}").unwrap();
            }
        }
    }
    Ok(out)
}

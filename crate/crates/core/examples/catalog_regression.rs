//! Every registered pair: twin error, observed order and involution defect.

use twinsurf::catalog::{check_pair, list_pairs, self_check, list_examples};

fn main() -> twinsurf::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(201);
    println!("self residuals on {n}²");
    for e in list_examples() {
        let r = self_check(e.name, n)?;
        println!("  {:26} {:6.2} h²", e.name, r.h2_constant());
    }
    println!("pairs on {n}² (twin error, ratio against {}², twin of twin)", n.div_ceil(2));
    for p in list_pairs() {
        let r = check_pair(p, n)?;
        let h2 = r.h * r.h;
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!(
            "  {:4} {:24} → {:24} {:12} {:6.2} h²  ×{:5.2}  {:6.2} h²",
            if r.pass() { "ok" } else { "FAIL" },
            r.source,
            r.target,
            params.join(","),
            r.twin_error / h2,
            r.ratio,
            r.involution / h2
        );
    }
    Ok(())
}

//! CSV exchange of sampled fields.
//!
//! Rows are masked nodes in row-major order (`x` fastest), values carry 17
//! significant digits so a write/read round trip is exact. On reading, the
//! grid is rebuilt from the distinct coordinates: spacing is the smallest gap,
//! nodes absent from the file are outside the mask.

use std::io::{Read, Write};
use std::sync::Arc;

use crate::conformal::WeierstrassData;
use crate::error::{Error, Result};
use crate::numerics::{Bounds, Grid2D, ScalarField};

/// Full-precision decimal.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `x,y,<names…>` for every masked node of the shared grid.
pub fn write_fields_csv<W: Write>(w: W, names: &[&str], fields: &[&ScalarField]) -> Result<()> {
    if names.len() != fields.len() || fields.is_empty() {
        return Err(Error::Invariant("one column name per field required".into()));
    }
    for f in &fields[1..] {
        fields[0].same_grid(f)?;
    }
    let g = fields[0].grid();
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["x", "y"];
    header.extend_from_slice(names);
    out.write_record(&header)?;
    for k in g.masked_indices() {
        let (x, y) = g.coords(k);
        let mut row = vec![fmt17(x), fmt17(y)];
        row.extend(fields.iter().map(|f| fmt17(f.at(k))));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// `x,y,v`.
pub fn write_scalar_csv<W: Write>(w: W, f: &ScalarField) -> Result<()> {
    write_fields_csv(w, &["v"], &[f])
}

/// `x,y,f1,…,fn`.
pub fn write_multigraph_csv<W: Write>(w: W, fields: &[ScalarField]) -> Result<()> {
    let names: Vec<String> = (1..=fields.len()).map(|k| format!("f{k}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let refs: Vec<&ScalarField> = fields.iter().collect();
    write_fields_csv(w, &names, &refs)
}

/// `xi1,xi2,re_phi1,im_phi1,…` on the chart's ξ-grid.
pub fn write_weierstrass_csv<W: Write>(w: W, data: &WeierstrassData) -> Result<()> {
    let g = data.grid();
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["xi1".to_string(), "xi2".to_string()];
    for j in 1..=data.len() {
        header.push(format!("re_phi{j}"));
        header.push(format!("im_phi{j}"));
    }
    out.write_record(&header)?;
    for k in g.masked_indices() {
        let (a, b) = g.coords(k);
        let mut row = vec![fmt17(a), fmt17(b)];
        for j in 0..data.len() {
            row.push(fmt17(data.re[j].at(k)));
            row.push(fmt17(data.im[j].at(k)));
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Fields read back from CSV, on a reconstructed grid.
#[derive(Clone, Debug)]
pub struct CsvFields {
    pub grid: Arc<Grid2D>,
    pub names: Vec<String>,
    pub fields: Vec<ScalarField>,
}

/// Reads `x,y,…` rows; every further column becomes a field.
pub fn read_fields_csv<R: Read>(r: R) -> Result<CsvFields> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if header.len() < 3 || header[0] != "x" || header[1] != "y" {
        return Err(Error::Parse(format!("expected header `x,y,<value columns>`, got `{}`", header.join(","))));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(Error::Parse(format!("row {} has {} columns, expected {}", line + 2, rec.len(), header.len())));
        }
        let vals = rec
            .iter()
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {}: `{t}`: {e}", line + 2))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(vals);
    }
    let (xs, nx) = axis(rows.iter().map(|r| r[0]), "x")?;
    let (ys, ny) = axis(rows.iter().map(|r| r[1]), "y")?;
    let bounds = Bounds::new(xs.0, xs.1, ys.0, ys.1);
    let probe = Grid2D::new(nx, ny, bounds)?;
    let (hx, hy) = (probe.hx(), probe.hy());
    let mut mask = vec![false; nx * ny];
    let mut values = vec![vec![0.0; nx * ny]; header.len() - 2];
    for r in &rows {
        let i = snap(r[0], xs.0, hx, nx, "x")?;
        let j = snap(r[1], ys.0, hy, ny, "y")?;
        let k = j * nx + i;
        if mask[k] {
            return Err(Error::Parse(format!("duplicate node ({}, {})", r[0], r[1])));
        }
        mask[k] = true;
        for (c, col) in values.iter_mut().enumerate() {
            col[k] = r[c + 2];
        }
    }
    let grid = Arc::new(Grid2D::from_mask(nx, ny, bounds, mask)?);
    let fields = values.into_iter().map(|v| ScalarField::from_values(&grid, v)).collect::<Result<_>>()?;
    Ok(CsvFields { grid, names: header[2..].to_vec(), fields })
}

/// `(min, max)` and node count of a coordinate column.
fn axis(vals: impl Iterator<Item = f64>, name: &str) -> Result<((f64, f64), usize)> {
    let mut v: Vec<f64> = vals.collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    if v.len() < 3 {
        return Err(Error::Parse(format!("need at least 3 distinct {name} values, got {}", v.len())));
    }
    let (lo, hi) = (v[0], v[v.len() - 1]);
    let gap = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let n = ((hi - lo) / gap).round() as usize + 1;
    Ok(((lo, hi), n))
}

fn snap(v: f64, lo: f64, h: f64, n: usize, name: &str) -> Result<usize> {
    let s = (v - lo) / h;
    let i = s.round();
    if (s - i).abs() > 1e-6 || i < 0.0 || i as usize >= n {
        return Err(Error::Parse(format!("{name} = {v} is not on a uniform grid")));
    }
    Ok(i as usize)
}

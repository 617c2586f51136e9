use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Bounds { xmin, xmax, ymin, ymax }
    }

    pub fn square(a: f64) -> Self {
        Bounds::new(-a, a, -a, a)
    }
}

/// Geometric description of a mask, applied to node coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum MaskSpec {
    Rect,
    Disk { cx: f64, cy: f64, r: f64 },
    Annulus { r0: f64, r1: f64 },
    /// Annulus about the origin with the negative x-axis removed.
    SlitAnnulus { r0: f64, r1: f64 },
}

impl MaskSpec {
    pub fn disk(r: f64) -> Self {
        MaskSpec::Disk { cx: 0.0, cy: 0.0, r }
    }

    /// Membership test; `hy` sets the width of the slit.
    pub fn contains(&self, x: f64, y: f64, hy: f64) -> bool {
        let tol = 1e-12;
        match *self {
            MaskSpec::Rect => true,
            MaskSpec::Disk { cx, cy, r } => (x - cx).hypot(y - cy) <= r + tol,
            MaskSpec::Annulus { r0, r1 } => {
                let r = x.hypot(y);
                r >= r0 - tol && r <= r1 + tol
            }
            MaskSpec::SlitAnnulus { r0, r1 } => {
                let r = x.hypot(y);
                let in_slit = x < 0.0 && y.abs() <= 0.5 * hy * (1.0 + 1e-9);
                r >= r0 - tol && r <= r1 + tol && !in_slit
            }
        }
    }

    /// Parses `rect`, `disk:R`, `annulus:R0,R1` or `slit-annulus:R0,R1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (s, None),
        };
        let nums = |r: Option<&str>, n: usize| -> Result<Vec<f64>> {
            let r = r.ok_or_else(|| Error::Parse(format!("mask `{s}` needs {n} number(s)")))?;
            let v: Vec<f64> = r
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("mask `{s}`: {e}")))?;
            if v.len() != n {
                return Err(Error::Parse(format!("mask `{s}` needs {n} number(s)")));
            }
            Ok(v)
        };
        match kind {
            "rect" => Ok(MaskSpec::Rect),
            "disk" => Ok(MaskSpec::disk(nums(rest, 1)?[0])),
            "annulus" => {
                let v = nums(rest, 2)?;
                Ok(MaskSpec::Annulus { r0: v[0], r1: v[1] })
            }
            "slit-annulus" => {
                let v = nums(rest, 2)?;
                Ok(MaskSpec::SlitAnnulus { r0: v[0], r1: v[1] })
            }
            _ => Err(Error::Parse(format!("unknown mask kind `{kind}`"))),
        }
    }
}

/// Uniform rectangular node grid with a domain mask and an integration anchor.
///
/// Node `(i, j)` sits at `(x0 + i·hx, y0 + j·hy)` and has flat index `j·nx + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    x0: f64,
    y0: f64,
    hx: f64,
    hy: f64,
    mask: Vec<bool>,
    anchor: usize,
}

impl Grid2D {
    /// Full-mask grid of `nx × ny` nodes spanning `bounds`.
    pub fn new(nx: usize, ny: usize, bounds: Bounds) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3x3 nodes, got {nx}x{ny}")));
        }
        let hx = (bounds.xmax - bounds.xmin) / (nx - 1) as f64;
        let hy = (bounds.ymax - bounds.ymin) / (ny - 1) as f64;
        if !(hx > 0.0 && hy > 0.0 && hx.is_finite() && hy.is_finite()) {
            return Err(Error::InvalidGrid(format!("degenerate bounds {bounds:?}")));
        }
        let mut g = Grid2D {
            nx,
            ny,
            x0: bounds.xmin,
            y0: bounds.ymin,
            hx,
            hy,
            mask: vec![true; nx * ny],
            anchor: 0,
        };
        g.anchor = g.centroid_anchor()?;
        Ok(g)
    }

    /// Grid with an explicit mask, taken as is (no pruning).
    pub fn from_mask(nx: usize, ny: usize, bounds: Bounds, mask: Vec<bool>) -> Result<Self> {
        let mut g = Grid2D::new(nx, ny, bounds)?;
        if mask.len() != nx * ny {
            return Err(Error::InvalidGrid(format!(
                "mask has {} entries, expected {}",
                mask.len(),
                nx * ny
            )));
        }
        g.mask = mask;
        g.anchor = g.centroid_anchor()?;
        Ok(g)
    }

    /// Grid masked by `spec`, pruned so that every node has a stencil in both directions.
    pub fn masked(nx: usize, ny: usize, bounds: Bounds, spec: &MaskSpec) -> Result<Self> {
        let g = Grid2D::new(nx, ny, bounds)?;
        let hy = g.hy;
        g.restrict(|x, y| spec.contains(x, y, hy))
    }

    /// Intersects the mask with a predicate and prunes stencil-deficient nodes.
    pub fn restrict(&self, keep: impl Fn(f64, f64) -> bool) -> Result<Self> {
        let mut g = self.clone();
        for k in 0..g.mask.len() {
            if g.mask[k] {
                let (x, y) = g.coords(k);
                g.mask[k] = keep(x, y);
            }
        }
        g.prune();
        g.anchor = g.centroid_anchor()?;
        Ok(g)
    }

    /// Moves the anchor to the masked node nearest `(x, y)`.
    pub fn with_anchor_near(mut self, x: f64, y: f64) -> Result<Self> {
        self.anchor = self.nearest_masked(x, y)?;
        Ok(self)
    }

    pub fn with_anchor(mut self, k: usize) -> Result<Self> {
        if k >= self.mask.len() || !self.mask[k] {
            return Err(Error::InvalidGrid(format!("anchor {k} is outside the mask")));
        }
        self.anchor = k;
        Ok(self)
    }

    fn nearest_masked(&self, x: f64, y: f64) -> Result<usize> {
        self.masked_indices()
            .map(|k| {
                let (px, py) = self.coords(k);
                (k, (px - x).powi(2) + (py - y).powi(2))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
            .ok_or_else(|| Error::InvalidGrid("empty mask".into()))
    }

    fn centroid_anchor(&self) -> Result<usize> {
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
        for k in self.masked_indices() {
            let (x, y) = self.coords(k);
            sx += x;
            sy += y;
            n += 1;
        }
        if n == 0 {
            return Err(Error::InvalidGrid("empty mask".into()));
        }
        self.nearest_masked(sx / n as f64, sy / n as f64)
    }

    /// Drops nodes that do not sit in a run of at least five consecutive
    /// masked nodes along x and along y, repeatedly, so that every node gets
    /// a central or a five-point one-sided stencil.
    fn prune(&mut self) {
        loop {
            let drop: Vec<usize> = self
                .masked_indices()
                .filter(|&k| {
                    let (i, j) = self.ij(k);
                    !(self.has_run(i, j, true) && self.has_run(i, j, false))
                })
                .collect();
            if drop.is_empty() {
                break;
            }
            for k in drop {
                self.mask[k] = false;
            }
        }
    }

    fn has_run(&self, i: usize, j: usize, along_x: bool) -> bool {
        const RUN: usize = 5;
        let ok = |d: isize| -> bool {
            let (ii, jj) = if along_x {
                (i as isize + d, j as isize)
            } else {
                (i as isize, j as isize + d)
            };
            self.is_masked_at(ii, jj)
        };
        let mut len = 1;
        let mut d = 1;
        while len < RUN && ok(d) {
            len += 1;
            d += 1;
        }
        d = -1;
        while len < RUN && ok(d) {
            len += 1;
            d -= 1;
        }
        len >= RUN
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }
    pub fn y0(&self) -> f64 {
        self.y0
    }
    pub fn hx(&self) -> f64 {
        self.hx
    }
    pub fn hy(&self) -> f64 {
        self.hy
    }
    /// `max(hx, hy)`, the spacing used to scale tolerances.
    pub fn h(&self) -> f64 {
        self.hx.max(self.hy)
    }
    pub fn anchor(&self) -> usize {
        self.anchor
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn bounds(&self) -> Bounds {
        Bounds::new(
            self.x0,
            self.x0 + (self.nx - 1) as f64 * self.hx,
            self.y0,
            self.y0 + (self.ny - 1) as f64 * self.hy,
        )
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    pub fn coords(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.ij(k);
        (self.x0 + i as f64 * self.hx, self.y0 + j as f64 * self.hy)
    }

    pub fn is_masked(&self, k: usize) -> bool {
        self.mask[k]
    }

    /// Mask lookup with signed indices; out-of-range is unmasked.
    pub fn is_masked_at(&self, i: isize, j: isize) -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < self.nx
            && (j as usize) < self.ny
            && self.mask[j as usize * self.nx + i as usize]
    }

    pub fn masked_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k)
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// 4-neighbours of `k` inside the mask, in the order +x, −x, +y, −y.
    pub fn neighbors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.ij(k);
        let (i, j) = (i as isize, j as isize);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .filter(move |(di, dj)| self.is_masked_at(i + di, j + dj))
            .map(move |(di, dj)| ((j + dj) as usize) * self.nx + (i + di) as usize)
    }

    /// Number of 4-connected components of the mask.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in self.masked_indices() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                for nb in self.neighbors(k) {
                    if !seen[nb] {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        count
    }

    /// `V − E + F` of the complex made of masked nodes, edges between adjacent
    /// masked nodes, and cells whose four corners are masked.
    pub fn euler_characteristic(&self) -> i64 {
        let mut v = 0i64;
        let mut e = 0i64;
        let mut f = 0i64;
        for k in self.masked_indices() {
            let (i, j) = self.ij(k);
            let (i, j) = (i as isize, j as isize);
            v += 1;
            if self.is_masked_at(i + 1, j) {
                e += 1;
            }
            if self.is_masked_at(i, j + 1) {
                e += 1;
            }
            if self.is_masked_at(i + 1, j) && self.is_masked_at(i, j + 1) && self.is_masked_at(i + 1, j + 1) {
                f += 1;
            }
        }
        v - e + f
    }
}

/// True iff the mask is 4-connected with Euler characteristic 1.
pub fn check_simply_connected(grid: &Grid2D) -> bool {
    grid.masked_count() > 0 && grid.component_count() == 1 && grid.euler_characteristic() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rectangle_is_simply_connected() {
        let g = Grid2D::new(11, 7, Bounds::square(1.0)).unwrap();
        assert!(check_simply_connected(&g));
        assert_eq!(g.euler_characteristic(), 1);
    }

    #[test]
    fn annulus_has_a_hole() {
        let g = Grid2D::masked(61, 61, Bounds::square(3.0), &MaskSpec::Annulus { r0: 1.0, r1: 3.0 }).unwrap();
        assert_eq!(g.euler_characteristic(), 0);
        assert!(!check_simply_connected(&g));
    }

    #[test]
    fn slit_annulus_counted_directly() {
        let g = Grid2D::masked(61, 61, Bounds::square(3.0), &MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 }).unwrap();
        // independent count: brute-force over all nodes / edges / cells
        let (nx, ny) = (g.nx(), g.ny());
        let m = |i: usize, j: usize| g.mask()[j * nx + i];
        let mut chi = 0i64;
        for j in 0..ny {
            for i in 0..nx {
                chi += m(i, j) as i64;
                if i + 1 < nx {
                    chi -= (m(i, j) && m(i + 1, j)) as i64;
                }
                if j + 1 < ny {
                    chi -= (m(i, j) && m(i, j + 1)) as i64;
                }
                if i + 1 < nx && j + 1 < ny {
                    chi += (m(i, j) && m(i + 1, j) && m(i, j + 1) && m(i + 1, j + 1)) as i64;
                }
            }
        }
        assert_eq!(chi, 1);
        assert!(check_simply_connected(&g));
    }

    #[test]
    fn two_blobs_are_not_connected() {
        let mut mask = vec![false; 9 * 3];
        for j in 0..3 {
            for i in [0, 1, 2, 6, 7, 8] {
                mask[j * 9 + i] = true;
            }
        }
        let g = Grid2D::from_mask(9, 3, Bounds::new(0.0, 8.0, 0.0, 2.0), mask).unwrap();
        assert_eq!(g.component_count(), 2);
        assert!(!check_simply_connected(&g));
    }

    #[test]
    fn disk_pruning_removes_tips() {
        // the extreme top node of a disk has no horizontal run and must go
        let g = Grid2D::masked(21, 21, Bounds::square(1.0), &MaskSpec::disk(1.0)).unwrap();
        for k in g.masked_indices() {
            let (i, j) = g.ij(k);
            assert!(g.has_run(i, j, true) && g.has_run(i, j, false));
        }
        assert!(!g.is_masked(g.idx(10, 20)));
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(Grid2D::new(2, 5, Bounds::square(1.0)).is_err());
        assert!(Grid2D::new(5, 5, Bounds::new(0.0, 0.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn mask_spec_parsing() {
        assert_eq!(MaskSpec::parse("rect").unwrap(), MaskSpec::Rect);
        assert_eq!(MaskSpec::parse("disk:0.9").unwrap(), MaskSpec::disk(0.9));
        assert_eq!(
            MaskSpec::parse("slit-annulus:1,3").unwrap(),
            MaskSpec::SlitAnnulus { r0: 1.0, r1: 3.0 }
        );
        assert!(MaskSpec::parse("blob").is_err());
        assert!(MaskSpec::parse("disk:a").is_err());
    }
}

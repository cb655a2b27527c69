//! Cylinder geometry and Majorana indexing.
//!
//! Rows `m = 1..=M` run along the open direction, columns `n = 1..=N` along
//! the periodic one. Sites are flattened row-major, `(m-1)*N + (n-1)`, and
//! each site carries two Majoranas `a = c† + c` (even flat index) and
//! `b = -i(c† - c)` (odd flat index). The same ordering is the Jordan-Wigner
//! order of the many-body oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    rows: usize,
    cols: usize,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(format!(
                "lattice needs rows >= 1 and cols >= 1, got {rows}x{cols}"
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Number of rows `M` (open direction).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `N` (periodic direction).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn majoranas(&self) -> usize {
        2 * self.sites()
    }

    /// Flat site index of `(m, n)`; `n` wraps periodically, `m` must lie in `1..=M`.
    pub fn site_index(&self, m: i64, n: i64) -> Result<usize> {
        if m < 1 || m > self.rows as i64 {
            return Err(Error::Domain(format!(
                "row m = {m} outside 1..={} (open boundary)",
                self.rows
            )));
        }
        let col = (n - 1).rem_euclid(self.cols as i64) as usize;
        Ok((m as usize - 1) * self.cols + col)
    }

    /// Inverse of [`site_index`](Self::site_index), 1-based.
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site / self.cols + 1, site % self.cols + 1)
    }

    pub fn majorana_index(&self, idx: MajoranaIndex) -> usize {
        2 * idx.site + idx.flavor.bit()
    }

    pub fn row_of_majorana(&self, flat: usize) -> usize {
        self.coords(flat / 2).0
    }

    /// Nearest-neighbour bonds `(r, r + a)` for both lattice vectors.
    ///
    /// Vertical bonds stop at row `M`; horizontal bonds wrap. For `N = 1` the
    /// horizontal bond closes on its own site and is still returned: the
    /// Hamiltonian builders accumulate it additively.
    pub fn bonds(&self) -> Vec<Bond> {
        let mut out = Vec::with_capacity(2 * self.sites());
        for site in 0..self.sites() {
            let (m, n) = self.coords(site);
            if m < self.rows {
                out.push(Bond {
                    from: site,
                    to: site + self.cols,
                    direction: BondDirection::Vertical,
                });
            }
            let to = (m - 1) * self.cols + n % self.cols;
            out.push(Bond {
                from: site,
                to,
                direction: BondDirection::Horizontal,
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// `a = c† + c`
    A,
    /// `b = -i(c† - c)`
    B,
}

impl Flavor {
    pub fn bit(self) -> usize {
        match self {
            Flavor::A => 0,
            Flavor::B => 1,
        }
    }

    pub fn of_flat(flat: usize) -> Self {
        if flat.is_multiple_of(2) {
            Flavor::A
        } else {
            Flavor::B
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MajoranaIndex {
    pub site: usize,
    pub flavor: Flavor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BondDirection {
    /// `r -> r + i`, open at row `M`.
    Vertical,
    /// `r -> r + j`, periodic.
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub from: usize,
    pub to: usize,
    pub direction: BondDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Onsite,
    Vert,
    Horiz,
}

/// One coupling of the sweet-spot brick-wall graph, always between an
/// A-flavor Majorana and a B-flavor Majorana.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BrickEdge {
    pub kind: EdgeKind,
    /// Site of the A-flavor end, `a_{m,n}`.
    pub a_site: usize,
    /// Site of the B-flavor end.
    pub b_site: usize,
}

impl BrickEdge {
    pub fn a_index(&self) -> usize {
        2 * self.a_site
    }

    pub fn b_index(&self) -> usize {
        2 * self.b_site + 1
    }
}

/// Edge list of the sweet-spot Majorana graph: `(a_{m,n}, b_{m,n})`,
/// `(a_{m,n}, b_{m+1,n})` for `m < M`, and `(a_{m,n}, b_{m,n+1})` with `n`
/// periodic. Sorted by (site, kind).
///
/// With `N = 1` the horizontal edge would duplicate the onsite pair and is
/// left out of the list.
pub fn brick_wall_edges(spec: &LatticeSpec) -> Vec<BrickEdge> {
    let (rows, cols) = (spec.rows(), spec.cols());
    let mut edges = Vec::with_capacity(3 * spec.sites());
    for site in 0..spec.sites() {
        let (m, n) = spec.coords(site);
        edges.push(BrickEdge {
            kind: EdgeKind::Onsite,
            a_site: site,
            b_site: site,
        });
        if m < rows {
            edges.push(BrickEdge {
                kind: EdgeKind::Vert,
                a_site: site,
                b_site: site + cols,
            });
        }
        if cols > 1 {
            edges.push(BrickEdge {
                kind: EdgeKind::Horiz,
                a_site: site,
                b_site: (m - 1) * cols + n % cols,
            });
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_index_examples() {
        let spec = LatticeSpec::new(3, 4).unwrap();
        assert_eq!(spec.site_index(1, 1).unwrap(), 0);
        assert_eq!(spec.site_index(2, 5).unwrap(), 4);
        assert_eq!(spec.site_index(3, 4).unwrap(), 11);
        assert_eq!(spec.site_index(1, 0).unwrap(), 3);
        assert_eq!(spec.site_index(1, -3).unwrap(), 0);
    }

    #[test]
    fn site_index_rejects_open_direction() {
        let spec = LatticeSpec::new(3, 4).unwrap();
        for m in [0, 4, -1] {
            let err = spec.site_index(m, 1).unwrap_err();
            assert!(err.to_string().contains(&format!("m = {m}")), "{err}");
        }
    }

    #[test]
    fn empty_lattice_is_rejected() {
        assert!(LatticeSpec::new(0, 3).is_err());
        assert!(LatticeSpec::new(2, 0).is_err());
    }

    fn count(edges: &[BrickEdge], kind: EdgeKind) -> usize {
        edges.iter().filter(|e| e.kind == kind).count()
    }

    #[test]
    fn edge_counts() {
        let e = brick_wall_edges(&LatticeSpec::new(1, 2).unwrap());
        assert_eq!(e.len(), 4);
        assert_eq!((count(&e, EdgeKind::Onsite), count(&e, EdgeKind::Vert), count(&e, EdgeKind::Horiz)), (2, 0, 2));

        let e = brick_wall_edges(&LatticeSpec::new(3, 4).unwrap());
        assert_eq!(e.len(), 32);
        assert_eq!((count(&e, EdgeKind::Onsite), count(&e, EdgeKind::Vert), count(&e, EdgeKind::Horiz)), (12, 8, 12));

        let e = brick_wall_edges(&LatticeSpec::new(2, 1).unwrap());
        assert_eq!(e.len(), 3);
        assert_eq!((count(&e, EdgeKind::Onsite), count(&e, EdgeKind::Vert), count(&e, EdgeKind::Horiz)), (2, 1, 0));
    }

    #[test]
    fn edges_sorted_and_deterministic() {
        let spec = LatticeSpec::new(4, 3).unwrap();
        let e = brick_wall_edges(&spec);
        assert_eq!(e, brick_wall_edges(&spec));
        assert!(e.windows(2).all(|w| (w[0].a_site, w[0].kind) < (w[1].a_site, w[1].kind)));
    }

    #[test]
    fn bonds_wrap_and_stop() {
        let spec = LatticeSpec::new(2, 3).unwrap();
        let bonds = spec.bonds();
        assert_eq!(bonds.len(), 3 + 6);
        assert!(bonds.contains(&Bond { from: 2, to: 0, direction: BondDirection::Horizontal }));
        assert!(!bonds.iter().any(|b| b.from >= 3 && b.direction == BondDirection::Vertical));
    }

    proptest::proptest! {
        #[test]
        fn edge_degree_and_count(rows in 1usize..7, cols in 2usize..7) {
            let spec = LatticeSpec::new(rows, cols).unwrap();
            let edges = brick_wall_edges(&spec);
            proptest::prop_assert_eq!(edges.len(), 3 * rows * cols - cols);
            let mut a_deg = vec![0usize; spec.sites()];
            let mut b_deg = vec![0usize; spec.sites()];
            for e in &edges {
                a_deg[e.a_site] += 1;
                b_deg[e.b_site] += 1;
            }
            proptest::prop_assert!(a_deg.iter().chain(&b_deg).all(|&d| d <= 3));
            for site in 0..spec.sites() {
                if spec.coords(site).0 == rows {
                    proptest::prop_assert_eq!(a_deg[site], 2);
                }
            }
        }

        #[test]
        fn site_index_roundtrip(rows in 1usize..9, cols in 1usize..9, m in 1i64..9, n in -20i64..20) {
            let spec = LatticeSpec::new(rows, cols).unwrap();
            if m <= rows as i64 {
                let site = spec.site_index(m, n).unwrap();
                let (mm, nn) = spec.coords(site);
                proptest::prop_assert_eq!(mm as i64, m);
                proptest::prop_assert_eq!((nn as i64 - n).rem_euclid(cols as i64), 0);
            }
        }
    }
}

//! Green's cell structure of the Motzkin monoid.
//!
//! The J-cells are indexed by the number `k` of through strands. Inside a
//! J-cell, left cells are labelled by bottom halves and right cells by top
//! halves, and every H-cell is a single diagram. The Gram matrix of the
//! J-cell has rows indexed by top halves and columns by bottom halves, with
//! a 1 exactly where the diagram `(top, bottom)` is idempotent; its rank
//! over a field is the dimension of the corresponding simple module.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{lcell_size, BigCount};
use crate::diagram::{enumerate_halves, enumerate_monoid, Diagram, DiagramError, HalfDiagram, Mark};
use crate::dsu::DisjointSet;
use crate::linalg::{self, FieldSpec, LinalgError, Matrix01};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("truncation level must be at least 1")]
    EmptyTruncation,
    #[error("truncation level {kmax} exceeds n = {n}")]
    TruncationTooLarge { kmax: usize, n: usize },
    #[error("{0} is even; the faithful bound needs an odd number of through strands")]
    EvenThroughCount(usize),
    #[error("units of Mo_{n} are not just the identity ({units} found)")]
    UnexpectedUnits { n: usize, units: usize },
}

fn check_k(n: usize, k: usize) -> Result<(), CellError> {
    if k > n {
        return Err(DiagramError::TooManyThrough { k, n }.into());
    }
    Ok(())
}

/// Representative half-diagrams for every J-cell of `Mo_n`.
#[derive(Debug, Clone)]
pub struct CellDecomposition {
    n: usize,
    halves: Vec<Vec<HalfDiagram>>,
}

pub fn decompose(n: usize) -> CellDecomposition {
    CellDecomposition {
        n,
        halves: (0..=n).map(|k| enumerate_halves(n, k).unwrap()).collect(),
    }
}

impl CellDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Labels of the left (and right) cells of the J-cell `k`.
    pub fn halves(&self, k: usize) -> &[HalfDiagram] {
        &self.halves[k]
    }

    pub fn lcell_sizes(&self) -> Vec<usize> {
        self.halves.iter().map(Vec::len).collect()
    }

    pub fn jcell_size(&self, k: usize) -> usize {
        self.halves[k].len().pow(2)
    }

    /// Number of diagrams in the whole monoid.
    pub fn monoid_size(&self) -> usize {
        (0..=self.n).map(|k| self.jcell_size(k)).sum()
    }

    pub fn diagram(&self, k: usize, top: usize, bottom: usize) -> Diagram {
        Diagram::new(self.halves[k][top].clone(), self.halves[k][bottom].clone()).unwrap()
    }

    /// The first idempotent of J-cell `k` in (top, bottom) order.
    pub fn regularity_witness(&self, k: usize) -> Option<Diagram> {
        let h = &self.halves[k];
        (0..h.len())
            .flat_map(|i| (0..h.len()).map(move |j| (i, j)))
            .map(|(i, j)| self.diagram(k, i, j))
            .find(Diagram::is_idempotent)
    }

    /// Number of idempotents in each J-cell, `k = 0..=n`.
    pub fn idempotent_counts(&self) -> Vec<usize> {
        (0..=self.n)
            .map(|k| gram_matrix(self.n, k).unwrap().entries.count_ones())
            .collect()
    }
}

/// A 0/1 idempotency matrix with its row and column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub n: usize,
    pub k: usize,
    /// Top halves (right cells).
    pub rows: Vec<HalfDiagram>,
    /// Bottom halves (left cells).
    pub cols: Vec<HalfDiagram>,
    pub entries: Matrix01,
}

#[derive(Serialize)]
struct GramExport<'a> {
    n: usize,
    k: usize,
    order: &'a [HalfDiagram],
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<&'a [HalfDiagram]>,
    rows: Vec<String>,
}

impl GramMatrix {
    fn build(n: usize, k: usize, rows: Vec<HalfDiagram>, cols: Vec<HalfDiagram>) -> GramMatrix {
        let bits: Vec<Vec<bool>> = rows
            .par_iter()
            .map(|top| {
                cols.iter()
                    .map(|bottom| {
                        Diagram::new(top.clone(), bottom.clone())
                            .unwrap()
                            .is_idempotent()
                    })
                    .collect()
            })
            .collect();
        let entries = Matrix01::from_fn(rows.len(), cols.len(), |i, j| bits[i][j]);
        GramMatrix {
            n,
            k,
            rows,
            cols,
            entries,
        }
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn rank(&self, field: FieldSpec) -> Result<usize, LinalgError> {
        linalg::rank(&self.entries, field)
    }

    pub fn get(&self, top: &HalfDiagram, bottom: &HalfDiagram) -> Option<bool> {
        let i = self.rows.iter().position(|h| h == top)?;
        let j = self.cols.iter().position(|h| h == bottom)?;
        Some(self.entries.get(i, j))
    }

    /// `{ n, k, order, rows }`, plus `columns` when the column labels differ
    /// from the row labels.
    pub fn to_json(&self) -> serde_json::Value {
        let export = GramExport {
            n: self.n,
            k: self.k,
            order: &self.rows,
            columns: (self.cols != self.rows).then_some(&self.cols[..]),
            rows: (0..self.entries.rows()).map(|i| self.entries.row_string(i)).collect(),
        };
        serde_json::to_value(export).expect("serialisable")
    }
}

/// The Gram matrix of the J-cell with `k` through strands.
pub fn gram_matrix(n: usize, k: usize) -> Result<GramMatrix, CellError> {
    let halves = enumerate_halves(n, k)?;
    Ok(GramMatrix::build(n, k, halves.clone(), halves))
}

/// Dimension of the simple module with apex `J_k`: the rank of its Gram
/// matrix.
pub fn simple_dimension(n: usize, k: usize, field: FieldSpec) -> Result<usize, CellError> {
    Ok(gram_matrix(n, k)?.rank(field)?)
}

/// Dimension of the cell module of `J_k`.
pub fn ssdim(n: usize, k: usize) -> Result<BigCount, CellError> {
    check_k(n, k)?;
    Ok(lcell_size(n, k))
}

/// The diagrams with at most `kmax` through strands, with a formal unit
/// adjoined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedMonoid {
    pub n: usize,
    pub kmax: usize,
}

pub fn truncate(n: usize, kmax: usize) -> Result<TruncatedMonoid, CellError> {
    if kmax > n {
        return Err(CellError::TruncationTooLarge { kmax, n });
    }
    Ok(TruncatedMonoid { n, kmax })
}

impl TruncatedMonoid {
    pub fn contains(&self, d: &Diagram) -> bool {
        d.n() == self.n && d.through_count() <= self.kmax
    }

    /// Always true; the unit is kept formally and never materialised as
    /// a diagram.
    pub fn has_formal_unit(&self) -> bool {
        true
    }

    /// Number of diagram elements (the formal unit not included).
    pub fn diagram_count(&self) -> BigCount {
        (0..=self.kmax).map(|k| lcell_size(self.n, k).pow(2)).sum()
    }

    pub fn diagrams(&self) -> Vec<Diagram> {
        enumerate_monoid(self.n)
            .into_iter()
            .filter(|d| self.contains(d))
            .collect()
    }

    /// Closed under products among its own diagrams.
    pub fn is_closed(&self) -> bool {
        let elems = self.diagrams();
        elems
            .par_iter()
            .all(|a| elems.iter().all(|b| self.contains(&(a * b))))
    }

    /// Two-sided ideal of the full monoid (ignoring the formal unit).
    pub fn is_ideal(&self) -> bool {
        let all = enumerate_monoid(self.n);
        let elems = self.diagrams();
        elems.par_iter().all(|m| {
            all.iter()
                .all(|s| self.contains(&(m * s)) && self.contains(&(s * m)))
        })
    }
}

fn check_kmax(n: usize, kmax: usize) -> Result<(), CellError> {
    if kmax == 0 {
        return Err(CellError::EmptyTruncation);
    }
    if kmax > n {
        return Err(CellError::TruncationTooLarge { kmax, n });
    }
    Ok(())
}

/// Smallest simple dimension over the J-cells `1..=kmax`. The cell with no
/// through strands, which only carries a trivial representation, is left
/// out; see [`gap_including_trivial`].
pub fn gap(n: usize, kmax: usize, field: FieldSpec) -> Result<usize, CellError> {
    check_kmax(n, kmax)?;
    (1..=kmax)
        .map(|k| simple_dimension(n, k, field))
        .try_fold(usize::MAX, |best, d| d.map(|d| best.min(d)))
}

/// Like [`gap`] but taking the minimum over `0..=kmax`.
pub fn gap_including_trivial(n: usize, kmax: usize, field: FieldSpec) -> Result<usize, CellError> {
    if kmax > n {
        return Err(CellError::TruncationTooLarge { kmax, n });
    }
    (0..=kmax)
        .map(|k| simple_dimension(n, k, field))
        .try_fold(usize::MAX, |best, d| d.map(|d| best.min(d)))
}

/// Smallest cell-module dimension over the J-cells `1..=kmax`.
pub fn ssgap(n: usize, kmax: usize) -> Result<BigCount, CellError> {
    check_kmax(n, kmax)?;
    Ok((1..=kmax).map(|k| lcell_size(n, k)).min().unwrap())
}

/// Lower bound for the faithful dimension from an odd J-cell, where the
/// Gram matrix has full rank.
pub fn faith_lower_bound(n: usize, k_odd: usize) -> Result<BigCount, CellError> {
    check_k(n, k_odd)?;
    if k_odd.is_multiple_of(2) {
        return Err(CellError::EvenThroughCount(k_odd));
    }
    Ok(lcell_size(n, k_odd))
}

/// Top halves whose through endpoints are exactly the nodes `1..=k`.
pub fn consecutive_halves(n: usize, k: usize) -> Result<Vec<HalfDiagram>, CellError> {
    Ok(enumerate_halves(n, k)?
        .into_iter()
        .filter(|h| h.marks()[..k].iter().all(|&m| m == Mark::Through))
        .collect())
}

/// Square block of the Gram matrix of `J_k` on the rows whose through
/// strands sit on nodes `1..=k`.
///
/// Forcing the columns to the same shape would pair straight strands only,
/// which always gives an all-ones block. The columns are instead the first
/// independent columns of the row block over the rationals, padded with the
/// earliest remaining columns if the rows are dependent, and kept in
/// canonical order.
pub fn consecutive_submatrix(n: usize, k: usize) -> Result<GramMatrix, CellError> {
    let rows = consecutive_halves(n, k)?;
    let all = enumerate_halves(n, k)?;
    let block = GramMatrix::build(n, k, rows.clone(), all.clone());
    let mut picked = linalg::pivot_columns(&block.entries);
    for j in 0..all.len() {
        if picked.len() >= rows.len() {
            break;
        }
        if !picked.contains(&j) {
            picked.push(j);
        }
    }
    picked.sort_unstable();
    let row_idx: Vec<usize> = (0..rows.len()).collect();
    Ok(GramMatrix {
        n,
        k,
        cols: picked.iter().map(|&j| all[j].clone()).collect(),
        entries: block.entries.submatrix(&row_idx, &picked),
        rows,
    })
}

/// Outcome of the brute-force connectedness checks on `Mo_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectednessReport {
    pub n: usize,
    pub elements: usize,
    pub units: usize,
    /// Every non-unit is a product of two non-units.
    pub null_connected: bool,
    /// Classes of non-units under the closure of `ab = a`.
    pub right_classes: usize,
    /// Classes of non-units under the closure of `ba = a`.
    pub left_classes: usize,
}

impl ConnectednessReport {
    pub fn is_group(&self) -> bool {
        self.units == self.elements
    }

    pub fn right_connected(&self) -> bool {
        self.is_group() || self.right_classes == 1
    }

    pub fn left_connected(&self) -> bool {
        self.is_group() || self.left_classes == 1
    }

    pub fn well_connected(&self) -> bool {
        self.is_group() || (self.null_connected && self.left_connected() && self.right_connected())
    }
}

#[derive(Default)]
struct PassState {
    covered: Vec<bool>,
    inverse_pairs: Vec<(u32, u32)>,
    right: Vec<(u32, u32)>,
    left: Vec<(u32, u32)>,
}

/// Walks the full multiplication table once. Cost grows as `|Mo_n|^2`.
pub fn connectedness(n: usize) -> Result<ConnectednessReport, CellError> {
    let elems = enumerate_monoid(n);
    let len = elems.len();
    let index: HashMap<&Diagram, u32> = elems.iter().zip(0u32..).collect();
    let id = index[&Diagram::identity(n)];

    let merge = |mut a: PassState, b: PassState| {
        if a.covered.is_empty() {
            return b;
        }
        for (x, y) in a.covered.iter_mut().zip(&b.covered) {
            *x |= *y;
        }
        a.inverse_pairs.extend(b.inverse_pairs);
        a.right.extend(b.right);
        a.left.extend(b.left);
        a
    };
    let state = (0..len as u32)
        .into_par_iter()
        .fold(PassState::default, |mut st, ai| {
            if st.covered.is_empty() {
                st.covered = vec![false; len];
            }
            let a = &elems[ai as usize];
            for (bi, b) in (0u32..).zip(&elems) {
                let p = a * b;
                if p == elems[id as usize] {
                    st.inverse_pairs.push((ai, bi));
                }
                if ai == id || bi == id {
                    continue;
                }
                if &p == a {
                    st.right.push((ai, bi));
                }
                if &p == b {
                    st.left.push((bi, ai));
                }
                st.covered[index[&p] as usize] = true;
            }
            st
        })
        .reduce(PassState::default, merge);

    let units: Vec<u32> = state
        .inverse_pairs
        .iter()
        .filter(|&&(a, b)| state.inverse_pairs.contains(&(b, a)))
        .map(|&(a, _)| a)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if units != [id] {
        return Err(CellError::UnexpectedUnits {
            n,
            units: units.len(),
        });
    }

    let non_units: Vec<usize> = (0..len).filter(|&i| i != id as usize).collect();
    let classes = |edges: &[(u32, u32)]| {
        let mut dsu = DisjointSet::new(len);
        for &(a, b) in edges {
            dsu.union(a as usize, b as usize);
        }
        let mut roots: Vec<usize> = non_units.iter().map(|&i| dsu.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    let covered = state.covered;
    Ok(ConnectednessReport {
        n,
        elements: len,
        units: units.len(),
        null_connected: non_units.iter().all(|&i| covered.get(i).copied().unwrap_or(false)),
        right_classes: classes(&state.right),
        left_classes: classes(&state.left),
    })
}

pub fn is_null_connected(n: usize) -> bool {
    connectedness(n).map(|r| r.is_group() || r.null_connected).unwrap_or(false)
}

pub fn is_left_connected(n: usize) -> bool {
    connectedness(n).map(|r| r.left_connected()).unwrap_or(false)
}

pub fn is_right_connected(n: usize) -> bool {
    connectedness(n).map(|r| r.right_connected()).unwrap_or(false)
}

/// One `(n, k)` entry of the dimension table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApexRow {
    pub n: usize,
    pub k: usize,
    /// Cell-module dimension (size of the Gram matrix).
    pub ssdim: usize,
    /// Gram rank over each requested field, in request order.
    pub ranks: Vec<usize>,
}

/// Cell-module and simple dimensions of every J-cell of `Mo_n`.
pub fn apex_table(n: usize, fields: &[FieldSpec]) -> Result<Vec<ApexRow>, CellError> {
    (0..=n)
        .map(|k| {
            let g = gram_matrix(n, k)?;
            let ranks = fields
                .iter()
                .map(|&f| g.rank(f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ApexRow {
                n,
                k,
                ssdim: g.rows.len(),
                ranks,
            })
        })
        .collect()
}

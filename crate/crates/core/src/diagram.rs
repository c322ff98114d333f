//! Motzkin diagrams and the monoid operations on them.
//!
//! A diagram on `n` strands is stored as a pair of half-diagrams. Each
//! half-diagram is one row of `n` nodes, written as a string over four
//! symbols:
//!
//! | symbol | meaning                          |
//! |--------|----------------------------------|
//! | `(`    | left end of an arc in this row   |
//! | `)`    | right end of an arc in this row  |
//! | `.`    | free node                        |
//! | `|`    | endpoint of a through strand     |
//!
//! Planarity forces the `i`-th through endpoint of the bottom row to be
//! joined to the `i`-th through endpoint of the top row, so the pair of
//! strings determines the diagram. The byte order of the symbols
//! (`(` < `)` < `.` < `|`) is the canonical order used by every
//! enumeration in the crate.
//!
//! Nodes are numbered `1..=n` from the left in the public API.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dsu::DisjointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("node {node} is out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("node {0} is used more than once")]
    DuplicateNode(usize),
    #[error("arc ({0}, {1}) must have its left end before its right end")]
    DegenerateArc(usize, usize),
    #[error("arcs ({0}, {1}) and ({2}, {3}) cross")]
    CrossingArcs(usize, usize, usize, usize),
    #[error("through endpoint {node} lies under arc ({a}, {b})")]
    ThroughUnderArc { node: usize, a: usize, b: usize },
    #[error("invalid half-diagram encoding {0:?}")]
    BadEncoding(String),
    #[error("node counts differ: {0} vs {1}")]
    NodeCountMismatch(usize, usize),
    #[error("through-strand counts differ: top has {top}, bottom has {bottom}")]
    ThroughCountMismatch { top: usize, bottom: usize },
    #[error("{k} through strands requested on {n} nodes")]
    TooManyThrough { k: usize, n: usize },
    #[error("generator position {i} out of range 1..{n}")]
    GeneratorOutOfRange { i: usize, n: usize },
    #[error("unknown generator kind {0:?} (expected l, t or r)")]
    UnknownGenerator(String),
    #[error("invalid diagram text {0:?}")]
    BadDiagramText(String),
}

/// What sits at a node of a half-diagram.
///
/// Variant order is the canonical order of the encoding symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Open,
    Close,
    Free,
    Through,
}

impl Mark {
    pub fn symbol(self) -> char {
        match self {
            Mark::Open => '(',
            Mark::Close => ')',
            Mark::Free => '.',
            Mark::Through => '|',
        }
    }

    pub fn from_symbol(c: char) -> Option<Mark> {
        match c {
            '(' => Some(Mark::Open),
            ')' => Some(Mark::Close),
            '.' => Some(Mark::Free),
            '|' => Some(Mark::Through),
            _ => None,
        }
    }
}

/// One row of a Motzkin diagram: non-crossing arcs, through endpoints
/// and free nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfDiagram {
    marks: Vec<Mark>,
}

impl HalfDiagram {
    /// Validating constructor. `cups` are 1-based node pairs `(a, b)`
    /// with `a < b`; `through` lists the 1-based through endpoints.
    pub fn new(
        n: usize,
        cups: &[(usize, usize)],
        through: &[usize],
    ) -> Result<HalfDiagram, DiagramError> {
        let mut marks = vec![Mark::Free; n];
        let mut used = vec![false; n];
        let mut claim = |node: usize, mark: Mark| -> Result<(), DiagramError> {
            if node == 0 || node > n {
                return Err(DiagramError::NodeOutOfRange { node, n });
            }
            if used[node - 1] {
                return Err(DiagramError::DuplicateNode(node));
            }
            used[node - 1] = true;
            marks[node - 1] = mark;
            Ok(())
        };
        for &(a, b) in cups {
            if a >= b {
                return Err(DiagramError::DegenerateArc(a, b));
            }
            claim(a, Mark::Open)?;
            claim(b, Mark::Close)?;
        }
        for &t in through {
            claim(t, Mark::Through)?;
        }
        for (i, &(a, b)) in cups.iter().enumerate() {
            for &(c, d) in &cups[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Err(DiagramError::CrossingArcs(a, b, c, d));
                }
            }
            if let Some(&node) = through.iter().find(|&&t| a < t && t < b) {
                return Err(DiagramError::ThroughUnderArc { node, a, b });
            }
        }
        Ok(HalfDiagram { marks })
    }

    /// The row in which every node is a through endpoint.
    pub fn identity(n: usize) -> HalfDiagram {
        HalfDiagram {
            marks: vec![Mark::Through; n],
        }
    }

    /// The row with every node free.
    pub fn empty(n: usize) -> HalfDiagram {
        HalfDiagram {
            marks: vec![Mark::Free; n],
        }
    }

    pub(crate) fn from_marks_unchecked(marks: Vec<Mark>) -> HalfDiagram {
        debug_assert!(is_well_formed(&marks));
        HalfDiagram { marks }
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn through_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m == Mark::Through).count()
    }

    /// 1-based through endpoints, increasing.
    pub fn through(&self) -> Vec<usize> {
        self.through_indices().map(|i| i + 1).collect()
    }

    /// 1-based arcs `(a, b)`, ordered by right end.
    pub fn cups(&self) -> Vec<(usize, usize)> {
        let mut stack = Vec::new();
        let mut out = Vec::new();
        for (i, m) in self.marks.iter().enumerate() {
            match m {
                Mark::Open => stack.push(i),
                Mark::Close => out.push((stack.pop().unwrap() + 1, i + 1)),
                _ => {}
            }
        }
        out
    }

    pub(crate) fn through_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.marks
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == Mark::Through)
            .map(|(i, _)| i)
    }

    /// For each 0-based node, the 0-based node at the other end of its arc.
    pub(crate) fn arc_partners(&self) -> Vec<Option<usize>> {
        let mut partner = vec![None; self.marks.len()];
        let mut stack = Vec::new();
        for (i, m) in self.marks.iter().enumerate() {
            match m {
                Mark::Open => stack.push(i),
                Mark::Close => {
                    let j = stack.pop().unwrap();
                    partner[i] = Some(j);
                    partner[j] = Some(i);
                }
                _ => {}
            }
        }
        partner
    }

    /// Juxtaposition with `other` placed to the right.
    pub fn tensor(&self, other: &HalfDiagram) -> HalfDiagram {
        let mut marks = self.marks.clone();
        marks.extend_from_slice(&other.marks);
        HalfDiagram { marks }
    }
}

fn is_well_formed(marks: &[Mark]) -> bool {
    let mut depth = 0usize;
    for m in marks {
        match m {
            Mark::Open => depth += 1,
            Mark::Close => {
                if depth == 0 {
                    return false;
                }
                depth -= 1;
            }
            Mark::Through if depth > 0 => return false,
            _ => {}
        }
    }
    depth == 0
}

impl fmt::Display for HalfDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.marks.iter().try_for_each(|m| write!(f, "{}", m.symbol()))
    }
}

impl FromStr for HalfDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let marks = s
            .chars()
            .map(Mark::from_symbol)
            .collect::<Option<Vec<_>>>()
            .filter(|m| is_well_formed(m))
            .ok_or_else(|| DiagramError::BadEncoding(s.to_string()))?;
        Ok(HalfDiagram { marks })
    }
}

impl Serialize for HalfDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All half-diagrams on `n` nodes with exactly `k` through endpoints, in
/// canonical order.
pub fn enumerate_halves(n: usize, k: usize) -> Result<Vec<HalfDiagram>, DiagramError> {
    if k > n {
        return Err(DiagramError::TooManyThrough { k, n });
    }
    let mut out = Vec::new();
    let mut marks = Vec::with_capacity(n);
    extend_halves(n, k, 0, &mut marks, &mut out);
    Ok(out)
}

// Depth-first in symbol order, so the output is already sorted.
fn extend_halves(
    n: usize,
    through_left: usize,
    depth: usize,
    marks: &mut Vec<Mark>,
    out: &mut Vec<HalfDiagram>,
) {
    let remaining = n - marks.len();
    if remaining == 0 {
        if depth == 0 && through_left == 0 {
            out.push(HalfDiagram {
                marks: marks.clone(),
            });
        }
        return;
    }
    // after placing one more mark, `remaining - 1` slots must be able to
    // close every open arc and hold the outstanding through endpoints
    let fits = |depth: usize, through: usize| depth + through < remaining;
    if fits(depth + 1, through_left) {
        marks.push(Mark::Open);
        extend_halves(n, through_left, depth + 1, marks, out);
        marks.pop();
    }
    if depth > 0 {
        marks.push(Mark::Close);
        extend_halves(n, through_left, depth - 1, marks, out);
        marks.pop();
    }
    if fits(depth, through_left) {
        marks.push(Mark::Free);
        extend_halves(n, through_left, depth, marks, out);
        marks.pop();
    }
    if depth == 0 && through_left > 0 {
        marks.push(Mark::Through);
        extend_halves(n, through_left - 1, depth, marks, out);
        marks.pop();
    }
}

/// An element of the Motzkin monoid on `n` strands.
///
/// The derived order compares the top row first, then the bottom row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    top: HalfDiagram,
    bottom: HalfDiagram,
}

/// Result of stacking two diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionResult {
    pub product: Diagram,
    /// Components that touch neither boundary row: closed circles and
    /// floating intervals.
    pub loops: usize,
}

impl Diagram {
    pub fn new(top: HalfDiagram, bottom: HalfDiagram) -> Result<Diagram, DiagramError> {
        if top.len() != bottom.len() {
            return Err(DiagramError::NodeCountMismatch(top.len(), bottom.len()));
        }
        let (t, b) = (top.through_count(), bottom.through_count());
        if t != b {
            return Err(DiagramError::ThroughCountMismatch { top: t, bottom: b });
        }
        Ok(Diagram { top, bottom })
    }

    pub fn identity(n: usize) -> Diagram {
        Diagram {
            top: HalfDiagram::identity(n),
            bottom: HalfDiagram::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    pub fn through_count(&self) -> usize {
        self.top.through_count()
    }

    pub fn top(&self) -> &HalfDiagram {
        &self.top
    }

    pub fn bottom(&self) -> &HalfDiagram {
        &self.bottom
    }

    /// Through strands as 1-based `(bottom, top)` node pairs.
    pub fn strands(&self) -> Vec<(usize, usize)> {
        self.bottom.through().into_iter().zip(self.top.through()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.through_count() == self.n()
    }

    /// Stack `self` on top of `lower` and glue along the middle row.
    pub fn compose(&self, lower: &Diagram) -> Result<CompositionResult, DiagramError> {
        let n = self.n();
        if lower.n() != n {
            return Err(DiagramError::NodeCountMismatch(n, lower.n()));
        }
        // rows: 0 = bottom of `lower`, 1 = glued middle, 2 = top of `self`
        let bottom_row = |i: usize| i;
        let middle_row = |i: usize| n + i;
        let top_row = |i: usize| 2 * n + i;

        let mut dsu = DisjointSet::new(3 * n);
        let mut glue = |half: &HalfDiagram, row: &dyn Fn(usize) -> usize| {
            for (i, p) in half.arc_partners().into_iter().enumerate() {
                if let Some(j) = p.filter(|&j| j > i) {
                    dsu.union(row(i), row(j));
                }
            }
        };
        glue(&lower.bottom, &bottom_row);
        glue(&lower.top, &middle_row);
        glue(&self.bottom, &middle_row);
        glue(&self.top, &top_row);
        for (b, t) in lower.bottom.through_indices().zip(lower.top.through_indices()) {
            dsu.union(bottom_row(b), middle_row(t));
        }
        for (b, t) in self.bottom.through_indices().zip(self.top.through_indices()) {
            dsu.union(middle_row(b), top_row(t));
        }

        // boundary endpoints per component: at most two, since every
        // component is a path or a circle
        let mut ends: Vec<[Option<usize>; 2]> = vec![[None; 2]; 3 * n];
        for v in (0..n).map(bottom_row).chain((0..n).map(top_row)) {
            let r = dsu.find(v);
            let slot = &mut ends[r];
            if slot[0].is_none() {
                slot[0] = Some(v);
            } else {
                debug_assert!(slot[1].is_none());
                slot[1] = Some(v);
            }
        }

        let mut top = vec![Mark::Free; n];
        let mut bottom = vec![Mark::Free; n];
        for slot in &ends {
            let (a, b) = match *slot {
                [Some(a), Some(b)] => (a.min(b), a.max(b)),
                _ => continue,
            };
            let on_top = |v: usize| v >= 2 * n;
            match (on_top(a), on_top(b)) {
                (false, false) => {
                    bottom[a] = Mark::Open;
                    bottom[b] = Mark::Close;
                }
                (true, true) => {
                    top[a - 2 * n] = Mark::Open;
                    top[b - 2 * n] = Mark::Close;
                }
                _ => {
                    bottom[a] = Mark::Through;
                    top[b - 2 * n] = Mark::Through;
                }
            }
        }

        let mut counted = vec![false; 3 * n];
        let mut loops = 0;
        for v in (0..n).map(middle_row) {
            let r = dsu.find(v);
            if ends[r][0].is_none() && !counted[r] {
                counted[r] = true;
                loops += 1;
            }
        }

        let product = Diagram {
            top: HalfDiagram::from_marks_unchecked(top),
            bottom: HalfDiagram::from_marks_unchecked(bottom),
        };
        Ok(CompositionResult { product, loops })
    }

    /// Monoid product with every loop evaluated to 1.
    pub fn product(&self, lower: &Diagram) -> Result<Diagram, DiagramError> {
        self.compose(lower).map(|c| c.product)
    }

    /// Horizontal juxtaposition, `other` to the right.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        Diagram {
            top: self.top.tensor(&other.top),
            bottom: self.bottom.tensor(&other.bottom),
        }
    }

    /// Reflection in the horizontal axis.
    pub fn star(&self) -> Diagram {
        Diagram {
            top: self.bottom.clone(),
            bottom: self.top.clone(),
        }
    }

    /// Split into bottom half, through-strand count and top half.
    pub fn factorize(&self) -> Factorization {
        Factorization {
            bottom: self.bottom.clone(),
            k: self.through_count(),
            top: self.top.clone(),
        }
    }

    /// `self * self == self`, by direct composition.
    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    /// Idempotency read off the shape of the diagram, without composing.
    ///
    /// Every through strand must either be straight or be reconnected to
    /// itself by an alternating chain of arcs: starting at its top node,
    /// an arc of the bottom row, then an arc of the top row, and so on,
    /// ending on its bottom node with an arc of the top row.
    pub fn is_idempotent_structural(&self) -> bool {
        let n = self.n();
        let top_arc = self.top.arc_partners();
        let bottom_arc = self.bottom.arc_partners();
        for (b, t) in self.bottom.through_indices().zip(self.top.through_indices()) {
            if b == t {
                continue;
            }
            let mut at = t;
            let mut closed = false;
            for _ in 0..n {
                let Some(x) = bottom_arc[at] else { break };
                let Some(y) = top_arc[x] else { break };
                if y == b {
                    closed = true;
                    break;
                }
                at = y;
            }
            if !closed {
                return false;
            }
        }
        true
    }

    /// Smallest `(index, period)` with `d^index == d^(index + period)`.
    pub fn power_period(&self) -> (usize, usize) {
        let mut seen = std::collections::HashMap::new();
        let mut power = self.clone();
        let mut i = 1;
        loop {
            if let Some(&first) = seen.get(&power) {
                return (first, i - first);
            }
            seen.insert(power.clone(), i);
            power = &power * self;
            i += 1;
        }
    }

    pub fn pow(&self, e: usize) -> Diagram {
        let mut acc = Diagram::identity(self.n());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a> Mul<&'a Diagram> for &'a Diagram {
    type Output = Diagram;

    /// Panics if the node counts differ; use [`Diagram::product`] to get
    /// an error instead.
    fn mul(self, rhs: &'a Diagram) -> Diagram {
        self.product(rhs).expect("diagrams on different node counts")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} bottom={} top={}",
            self.n(),
            self.through_count(),
            self.bottom,
            self.top
        )
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    /// Accepts the `Display` form; `n=` and `k=` are optional but checked
    /// when present.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DiagramError::BadDiagramText(s.to_string());
        let (mut top, mut bottom, mut n, mut k) = (None, None, None, None);
        for token in s.split_whitespace() {
            let (key, value) = token.split_once('=').ok_or_else(bad)?;
            match key {
                "top" => top = Some(value.parse::<HalfDiagram>()?),
                "bottom" => bottom = Some(value.parse::<HalfDiagram>()?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "k" => k = Some(value.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let d = Diagram::new(top.ok_or_else(bad)?, bottom.ok_or_else(bad)?)?;
        if n.is_some_and(|n| n != d.n()) || k.is_some_and(|k| k != d.through_count()) {
            return Err(bad());
        }
        Ok(d)
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Diagram", 4)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("k", &self.through_count())?;
        st.serialize_field("bottom", &self.bottom)?;
        st.serialize_field("top", &self.top)?;
        st.end()
    }
}

/// `d = top ∘ id_k ∘ bottom`, with the halves kept as rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub bottom: HalfDiagram,
    pub k: usize,
    pub top: HalfDiagram,
}

impl Factorization {
    pub fn rebuild(&self) -> Result<Diagram, DiagramError> {
        let d = Diagram::new(self.top.clone(), self.bottom.clone())?;
        if d.through_count() != self.k {
            return Err(DiagramError::ThroughCountMismatch {
                top: d.through_count(),
                bottom: self.k,
            });
        }
        Ok(d)
    }
}

/// The three local generators acting on nodes `i, i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Strand from bottom `i` to top `i + 1`.
    L,
    /// Arc over the top pair and under the bottom pair.
    T,
    /// Strand from bottom `i + 1` to top `i`.
    R,
}

impl FromStr for GeneratorKind {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l" | "L" => Ok(GeneratorKind::L),
            "t" | "T" => Ok(GeneratorKind::T),
            "r" | "R" => Ok(GeneratorKind::R),
            _ => Err(DiagramError::UnknownGenerator(s.to_string())),
        }
    }
}

pub fn generator(n: usize, kind: GeneratorKind, i: usize) -> Result<Diagram, DiagramError> {
    if i == 0 || i >= n {
        return Err(DiagramError::GeneratorOutOfRange { i, n });
    }
    let mut top = vec![Mark::Through; n];
    let mut bottom = vec![Mark::Through; n];
    let (a, b) = (i - 1, i);
    match kind {
        GeneratorKind::L => {
            top[a] = Mark::Free;
            bottom[b] = Mark::Free;
        }
        GeneratorKind::R => {
            top[b] = Mark::Free;
            bottom[a] = Mark::Free;
        }
        GeneratorKind::T => {
            top[a] = Mark::Open;
            top[b] = Mark::Close;
            bottom[a] = Mark::Open;
            bottom[b] = Mark::Close;
        }
    }
    Ok(Diagram {
        top: HalfDiagram::from_marks_unchecked(top),
        bottom: HalfDiagram::from_marks_unchecked(bottom),
    })
}

/// All generators `l_i, t_i, r_i` for `1 <= i < n`.
pub fn generators(n: usize) -> Vec<Diagram> {
    (1..n)
        .flat_map(|i| {
            [GeneratorKind::L, GeneratorKind::T, GeneratorKind::R]
                .into_iter()
                .map(move |kind| generator(n, kind, i).unwrap())
        })
        .collect()
}

/// The J-cell with `k` through strands: every (top, bottom) pairing, top
/// row outermost.
pub fn enumerate_jcell(n: usize, k: usize) -> Result<Vec<Diagram>, DiagramError> {
    let halves = enumerate_halves(n, k)?;
    Ok(halves
        .iter()
        .flat_map(|top| {
            halves.iter().map(move |bottom| Diagram {
                top: top.clone(),
                bottom: bottom.clone(),
            })
        })
        .collect())
}

/// Every element of the monoid, J-cells from `k = n` down to `k = 0`.
pub fn enumerate_monoid(n: usize) -> Vec<Diagram> {
    (0..=n)
        .rev()
        .flat_map(|k| enumerate_jcell(n, k).unwrap())
        .collect()
}

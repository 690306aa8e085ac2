//! Dense tropical matrices with checked max-plus / min-plus typing.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::strongly_connected;
use crate::scalar::{int, ExtScalar, Rational};

/// Which semiring a matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Typing {
    /// `max`/`+`; entries may be `-inf` but never `+inf`.
    MaxPlus,
    /// `min`/`+`; entries may be `+inf` but never `-inf`.
    MinPlus,
}

impl Typing {
    /// Additive neutral element of the semiring.
    pub fn neutral(self) -> ExtScalar {
        match self {
            Typing::MaxPlus => ExtScalar::NegInf,
            Typing::MinPlus => ExtScalar::PosInf,
        }
    }

    fn admits(self, v: &ExtScalar) -> bool {
        match self {
            Typing::MaxPlus => *v != ExtScalar::PosInf,
            Typing::MinPlus => *v != ExtScalar::NegInf,
        }
    }

    fn dual(self) -> Typing {
        match self {
            Typing::MaxPlus => Typing::MinPlus,
            Typing::MinPlus => Typing::MaxPlus,
        }
    }
}

/// Row-major matrix over [`ExtScalar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    typing: Typing,
    entries: Vec<ExtScalar>,
}

impl TropMatrix {
    /// Builds a matrix from row-major entries, checking the typing.
    pub fn new(rows: usize, cols: usize, typing: Typing, entries: Vec<ExtScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !typing.admits(v)) {
            return Err(Error::TypingMismatch(format!("{bad} in a {typing:?} matrix")));
        }
        Ok(TropMatrix { rows, cols, typing, entries })
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(typing: Typing, rows: Vec<Vec<ExtScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, typing, rows.into_iter().flatten().collect())
    }

    /// Max-plus matrix from rows; panics on typing violations. Meant for literals.
    pub fn max_plus(rows: Vec<Vec<ExtScalar>>) -> Self {
        Self::from_rows(Typing::MaxPlus, rows).expect("valid max-plus literal")
    }

    /// Matrix filled with the additive neutral element.
    pub fn neutral(rows: usize, cols: usize, typing: Typing) -> Self {
        TropMatrix { rows, cols, typing, entries: vec![typing.neutral(); rows * cols] }
    }

    /// Tropical unit matrix: `0` on the diagonal, the neutral element elsewhere.
    pub fn identity(n: usize, typing: Typing) -> Self {
        let mut m = Self::neutral(n, n, typing);
        for i in 0..n {
            m.entries[i * n + i] = ExtScalar::zero();
        }
        m
    }

    /// Single-column matrix.
    pub fn column(typing: Typing, v: Vec<ExtScalar>) -> Result<Self> {
        let n = v.len();
        Self::new(n, 1, typing, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn typing(&self) -> Typing {
        self.typing
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        &self.entries[i * self.cols + j]
    }

    /// Overwrites one entry, keeping the typing invariant.
    pub fn set(&mut self, i: usize, j: usize, v: ExtScalar) -> Result<()> {
        if !self.typing.admits(&v) {
            return Err(Error::TypingMismatch(format!("{v} in a {:?} matrix", self.typing)));
        }
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[ExtScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column_vec(&self, j: usize) -> Vec<ExtScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<ExtScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[ExtScalar] {
        &self.entries
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.typing != other.typing {
            return Err(Error::TypingMismatch("operands have different typing".into()));
        }
        Ok(())
    }

    fn require(&self, typing: Typing) -> Result<()> {
        if self.typing != typing {
            return Err(Error::TypingMismatch(format!("expected a {typing:?} matrix")));
        }
        Ok(())
    }

    /// `A ⊕ B`: entrywise max (max-plus) or min (min-plus).
    pub fn mat_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| match self.typing {
                Typing::MaxPlus => a.sup(b),
                Typing::MinPlus => a.inf(b),
            })
            .collect();
        Ok(TropMatrix { rows: self.rows, cols: self.cols, typing: self.typing, entries })
    }

    fn product(&self, other: &Self, typing: Typing) -> Result<Self> {
        self.require(typing)?;
        other.require(typing)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::neutral(self.rows, other.cols, typing);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if *a == typing.neutral() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if *b == typing.neutral() {
                        continue;
                    }
                    let t = a.mul(b);
                    let e = &mut out.entries[i * other.cols + j];
                    *e = match typing {
                        Typing::MaxPlus => e.sup(&t),
                        Typing::MinPlus => e.inf(&t),
                    };
                }
            }
        }
        Ok(out)
    }

    /// Max-plus product `A ⊗ B`.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.product(other, Typing::MaxPlus)
    }

    /// Min-plus product `A ⊗′ B`.
    pub fn dual_mat_mul(&self, other: &Self) -> Result<Self> {
        self.product(other, Typing::MinPlus)
    }

    /// Max-plus matrix-vector product.
    pub fn mul_vec(&self, x: &[ExtScalar]) -> Result<Vec<ExtScalar>> {
        self.require(Typing::MaxPlus)?;
        self.vec_product(x, Typing::MaxPlus)
    }

    /// Min-plus matrix-vector product.
    pub fn dual_mul_vec(&self, x: &[ExtScalar]) -> Result<Vec<ExtScalar>> {
        self.require(Typing::MinPlus)?;
        self.vec_product(x, Typing::MinPlus)
    }

    fn vec_product(&self, x: &[ExtScalar], typing: Typing) -> Result<Vec<ExtScalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = typing.neutral();
                for (a, xk) in self.row(i).iter().zip(x) {
                    if *a == typing.neutral() || *xk == typing.neutral() {
                        continue;
                    }
                    let t = a.checked_mul(xk)?;
                    acc = match typing {
                        Typing::MaxPlus => acc.sup(&t),
                        Typing::MinPlus => acc.inf(&t),
                    };
                }
                Ok(acc)
            })
            .collect()
    }

    /// `A♯`: transpose with every entry conjugated; the typing flips.
    pub fn conjugate(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).conj());
            }
        }
        TropMatrix { rows: self.cols, cols: self.rows, typing: self.typing.dual(), entries }
    }

    fn square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Maximum cycle mean `ρ(A)`; `-inf` iff the digraph of `A` is acyclic.
    pub fn max_cycle_mean(&self) -> Result<ExtScalar> {
        self.square()?;
        self.require(Typing::MaxPlus)?;
        let n = self.rows;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| self.get(i, j).is_finite()).collect())
            .collect();
        let comp = strongly_connected(n, &adj);
        let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut best = ExtScalar::NegInf;
        for c in 0..ncomp {
            let nodes: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
            if let Some(rho) = self.karp(&nodes, &comp, c) {
                best = best.sup(&ExtScalar::Finite(rho));
            }
        }
        Ok(best)
    }

    /// Karp's characterisation restricted to one strongly connected component.
    fn karp(&self, nodes: &[usize], comp: &[usize], c: usize) -> Option<Rational> {
        let s = nodes.len();
        let local: Vec<Vec<(usize, Rational)>> = nodes
            .iter()
            .map(|&u| {
                nodes
                    .iter()
                    .enumerate()
                    .filter_map(|(lv, &v)| {
                        debug_assert_eq!(comp[v], c);
                        self.get(u, v).finite().map(|w| (lv, w.clone()))
                    })
                    .collect()
            })
            .collect();
        if local.iter().all(Vec::is_empty) {
            return None;
        }
        // d[k][v]: heaviest walk of exactly k arcs from node 0 to v.
        let mut d: Vec<Vec<Option<Rational>>> = vec![vec![None; s]; s + 1];
        d[0][0] = Some(Rational::zero());
        for k in 1..=s {
            for u in 0..s {
                let Some(du) = d[k - 1][u].clone() else { continue };
                for (v, w) in &local[u] {
                    let cand = &du + w;
                    match &d[k][*v] {
                        Some(cur) if *cur >= cand => {}
                        _ => d[k][*v] = Some(cand),
                    }
                }
            }
        }
        let mut best: Option<Rational> = None;
        for v in 0..s {
            let Some(dn) = &d[s][v] else { continue };
            let mut worst: Option<Rational> = None;
            for k in 0..s {
                if let Some(dk) = &d[k][v] {
                    let mean = (dn - dk) / int((s - k) as i64);
                    if worst.as_ref().is_none_or(|w| mean < *w) {
                        worst = Some(mean);
                    }
                }
            }
            if let Some(w) = worst {
                if best.as_ref().is_none_or(|b| w > *b) {
                    best = Some(w);
                }
            }
        }
        best
    }

    /// Kleene star `A* = I ⊕ A ⊕ A² ⊕ …` by all-pairs longest paths.
    pub fn kleene_star(&self) -> Result<Self> {
        self.square()?;
        self.require(Typing::MaxPlus)?;
        let n = self.rows;
        let mut d = self.entries.clone();
        for k in 0..n {
            for i in 0..n {
                let dik = d[i * n + k].clone();
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let dkj = &d[k * n + j];
                    if !dkj.is_finite() {
                        continue;
                    }
                    let t = dik.mul(dkj);
                    if t > d[i * n + j] {
                        d[i * n + j] = t;
                    }
                }
            }
        }
        for i in 0..n {
            if d[i * n + i] > ExtScalar::zero() {
                return Err(Error::DivergentStar);
            }
            d[i * n + i] = ExtScalar::zero();
        }
        Ok(TropMatrix { rows: n, cols: n, typing: Typing::MaxPlus, entries: d })
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Componentwise `a <= b`.
pub fn vec_leq(a: &[ExtScalar], b: &[ExtScalar]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Componentwise max.
pub fn vec_max(a: &[ExtScalar], b: &[ExtScalar]) -> Vec<ExtScalar> {
    a.iter().zip(b).map(|(x, y)| x.sup(y)).collect()
}

/// Componentwise min.
pub fn vec_min(a: &[ExtScalar], b: &[ExtScalar]) -> Vec<ExtScalar> {
    a.iter().zip(b).map(|(x, y)| x.inf(y)).collect()
}

/// Entrywise conjugate of a vector.
pub fn vec_conj(a: &[ExtScalar]) -> Vec<ExtScalar> {
    a.iter().map(ExtScalar::conj).collect()
}

/// Max-plus inner product `a ⊗ b = max_k (a_k + b_k)`, skipping `-inf` terms.
pub fn dot(a: &[ExtScalar], b: &[ExtScalar]) -> ExtScalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| **x != ExtScalar::NegInf && **y != ExtScalar::NegInf)
        .map(|(x, y)| x.mul(y))
        .fold(ExtScalar::NegInf, |acc, t| acc.sup(&t))
}

/// Lifts finite rationals into extended scalars.
pub fn lift(x: &[Rational]) -> Vec<ExtScalar> {
    x.iter().cloned().map(ExtScalar::Finite).collect()
}

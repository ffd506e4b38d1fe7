//! Exact symbolic linear algebra: determinants, Pfaffians, adjugates, and
//! the graph matrices whose determinants reproduce the Symanzik family.
//!
//! These are the independent oracles: a polynomial computed by combinatorial
//! expansion must equal the determinant computed by elimination, with no
//! tolerance.

use std::collections::BTreeMap;

use crate::classical;
use crate::graph::{Graph, Limits, VertexId};
use crate::poly::{Atom, MPoly, MomentumForm};
use crate::{Error, Result};

/// Dense square matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<MPoly>,
}

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![MPoly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            m[(i, i)] = MPoly::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix rows must be square".into()));
        }
        Ok(SymMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_antisymmetric(&self) -> bool {
        for i in 0..self.n {
            for j in i..self.n {
                let neg = -&self[(j, i)];
                if self[(i, j)] != neg {
                    return false;
                }
            }
        }
        true
    }

    /// Removes one row and one column.
    pub fn minor(&self, row: usize, col: usize) -> SymMatrix {
        let mut data = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in 0..self.n {
            if i == row {
                continue;
            }
            for j in 0..self.n {
                if j == col {
                    continue;
                }
                data.push(self[(i, j)].clone());
            }
        }
        SymMatrix {
            n: self.n - 1,
            data,
        }
    }

    /// Removes a set of rows and the same set of columns.
    pub fn strike(&self, gone: &[usize]) -> SymMatrix {
        let keep: Vec<usize> = (0..self.n).filter(|i| !gone.contains(i)).collect();
        let mut data = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                data.push(self[(i, j)].clone());
            }
        }
        SymMatrix {
            n: keep.len(),
            data,
        }
    }

    /// Exact determinant: cofactor expansion below dimension 6, fraction-free
    /// Bareiss elimination (with row pivoting) from there up.
    pub fn determinant(&self) -> Result<MPoly> {
        if self.n == 0 {
            return Ok(MPoly::one());
        }
        if self.n < 6 {
            Ok(self.det_cofactor())
        } else {
            self.det_bareiss()
        }
    }

    fn det_cofactor(&self) -> MPoly {
        match self.n {
            0 => MPoly::one(),
            1 => self[(0, 0)].clone(),
            2 => &(&self[(0, 0)] * &self[(1, 1)]) - &(&self[(0, 1)] * &self[(1, 0)]),
            _ => {
                let mut det = MPoly::zero();
                for j in 0..self.n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let sub = self.minor(0, j).det_cofactor();
                    let term = &self[(0, j)] * &sub;
                    if j % 2 == 0 {
                        det += term;
                    } else {
                        det -= &term;
                    }
                }
                det
            }
        }
    }

    fn det_bareiss(&self) -> Result<MPoly> {
        let n = self.n;
        let mut m = self.data.clone();
        let at = |m: &Vec<MPoly>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i64;
        let mut prev = MPoly::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                // Pivot search below row k.
                match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(MPoly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&at(&m, k, k) * &at(&m, i, j)) - &(&at(&m, i, k) * &at(&m, k, j));
                    m[i * n + j] = num.div_exact(&prev)?;
                }
            }
            for i in k + 1..n {
                m[i * n + k] = MPoly::zero();
            }
            prev = at(&m, k, k);
        }
        let det = at(&m, n - 1, n - 1);
        Ok(if sign < 0 { -det } else { det })
    }

    /// Pfaffian of an antisymmetric matrix of even dimension, by expansion
    /// along the first row.
    pub fn pfaffian(&self) -> Result<MPoly> {
        if !self.is_antisymmetric() {
            return Err(Error::Invalid("Pfaffian needs an antisymmetric matrix".into()));
        }
        if self.n % 2 != 0 {
            return Err(Error::Invalid("Pfaffian needs even dimension".into()));
        }
        Ok(self.pf_rec())
    }

    fn pf_rec(&self) -> MPoly {
        if self.n == 0 {
            return MPoly::one();
        }
        let mut out = MPoly::zero();
        for j in 1..self.n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let sub = self.strike(&[0, j]).pf_rec();
            let term = &self[(0, j)] * &sub;
            // Sign (-1)^j with 1-based column index: + for j=1, - for j=2, ...
            if j % 2 == 1 {
                out += term;
            } else {
                out -= &term;
            }
        }
        out
    }

    /// Adjugate via cofactors: `adj[i][j] = (-1)^{i+j} det(minor(j, i))`.
    pub fn adjugate(&self) -> Result<SymMatrix> {
        if self.n == 0 {
            return Ok(SymMatrix::zero(0));
        }
        let mut out = SymMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.cofactor_entry(j, i)?;
            }
        }
        Ok(out)
    }

    /// One adjugate entry, `adj[i][j]`.
    pub fn adjugate_entry(&self, i: usize, j: usize) -> Result<MPoly> {
        if self.n == 1 {
            return Ok(MPoly::one());
        }
        self.cofactor_entry(j, i)
    }

    fn cofactor_entry(&self, r: usize, c: usize) -> Result<MPoly> {
        if self.n == 1 {
            return Ok(MPoly::one());
        }
        let d = self.minor(r, c).determinant()?;
        Ok(if (r + c) % 2 == 0 { d } else { -d })
    }

    pub fn mul(&self, other: &SymMatrix) -> SymMatrix {
        let n = self.n;
        let mut out = SymMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = MPoly::zero();
                for k in 0..n {
                    s += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = s;
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for SymMatrix {
    type Output = MPoly;
    fn index(&self, (i, j): (usize, usize)) -> &MPoly {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SymMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MPoly {
        &mut self.data[i * self.n + j]
    }
}

// ---------------------------------------------------------------------------
// Graph matrices
// ---------------------------------------------------------------------------

/// The real `(E+V) × (E+V)` matrix `D + A` of the phase-space
/// representation: `D = diag(α_e, q_v)`, `A[e][v] = -ε_{ev}`,
/// `A[v][e] = +ε_{ev}`. Its determinant equals the generalized first
/// Symanzik polynomial 𝒰.
pub fn q_matrix(g: &Graph) -> SymMatrix {
    let edges = g.edge_ids();
    let verts: Vec<VertexId> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let ne = edges.len();
    let n = ne + verts.len();
    let mut m = SymMatrix::zero(n);
    for (i, e) in edges.iter().enumerate() {
        m[(i, i)] = MPoly::atom(Atom::Alpha(e.clone()));
    }
    for (j, v) in verts.iter().enumerate() {
        if g.vertex(v).is_some_and(|x| x.weighted) {
            m[(ne + j, ne + j)] = MPoly::atom(Atom::VWeight(v.clone()));
        }
        for (i, e) in edges.iter().enumerate() {
            let eps = g.eps(e, v);
            if eps != 0 {
                m[(i, ne + j)] = MPoly::int(-eps);
                m[(ne + j, i)] = MPoly::int(eps);
            }
        }
    }
    m
}

/// Cross-checks `det(q_matrix) = 𝒰` and returns the determinant.
pub fn gen_u_via_det(g: &Graph) -> Result<MPoly> {
    q_matrix(g).determinant()
}

/// The adjugate route to 𝒱: flags couple to their vertices, so
/// `𝒱 = Σ_{f,g} p_f adj(Q)[v_f, v_g] p_g`, emitted as dot atoms.
pub fn gen_v_via_adjugate(g: &Graph) -> Result<MomentumForm> {
    let q = q_matrix(g);
    let ne = g.edge_count();
    let verts: Vec<VertexId> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let col: BTreeMap<&VertexId, usize> =
        verts.iter().enumerate().map(|(i, v)| (v, ne + i)).collect();
    let flags = g.flags();
    let mut out = MomentumForm::zero();
    for (i, f) in flags.iter().enumerate() {
        for f2 in &flags[i..] {
            let a = q.adjugate_entry(col[&f.vertex], col[&f2.vertex])?;
            let b = q.adjugate_entry(col[&f2.vertex], col[&f.vertex])?;
            if f.id == f2.id {
                out.add_dot(f.id.clone(), f2.id.clone(), a);
            } else {
                // p_f M p_g + p_g M p_f collapses onto the unordered dot.
                out.add_dot(f.id.clone(), f2.id.clone(), a + b);
            }
        }
    }
    Ok(out)
}

/// Builds the discrete Schrödinger operator `H = Δ + diag(q_v)` with
/// `Δ[v][v'] = Σ_e β_e ε_{ev} ε_{ev'}` and verifies
/// `(Π_e α_e) · det H |_{β=1/α} = 𝒰_G(α, q)` exactly.
///
/// Positivity of the Gaussian forces the positive-semidefinite form of the
/// Laplacian here, which is what makes the identity hold.
pub fn schrodinger_check(g: &Graph, limits: &Limits) -> Result<(SymMatrix, bool)> {
    let verts: Vec<VertexId> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let n = verts.len();
    let mut h = SymMatrix::zero(n);
    for (i, v) in verts.iter().enumerate() {
        for (j, v2) in verts.iter().enumerate() {
            let mut s = MPoly::zero();
            for e in g.edge_ids() {
                let prod = g.eps(&e, v) * g.eps(&e, v2);
                if prod != 0 {
                    s += MPoly::atom(Atom::Beta(e.clone())).scale(&crate::poly::rat(prod, 1));
                }
            }
            h[(i, j)] = s;
        }
        if g.vertex(v).is_some_and(|x| x.weighted) {
            let qv = MPoly::atom(Atom::VWeight(v.clone()));
            h[(i, i)] = &h[(i, i)] + &qv;
        }
    }
    let det = h.determinant()?;
    let cleared = classical::clear_betas_with_alphas(&det, &g.edge_ids())?;
    let gen_u = classical::gen_u(g, classical::Method::Subset, limits)?;
    Ok((h, cleared == gen_u))
}

/// Tree-matrix route to the first Symanzik polynomial: the principal minor
/// of the weighted Laplacian (root row and column struck) equals
/// `Σ_T Π_{e∈T} 1/α_e`; cleared by `Π α_e` this is `U_G`.
pub fn tree_matrix_minor(g: &Graph, root: &VertexId) -> Result<MPoly> {
    if !g.is_connected() {
        return Err(Error::Disconnected("the tree-matrix theorem"));
    }
    let verts: Vec<VertexId> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let Some(root_idx) = verts.iter().position(|v| v == root) else {
        return Err(Error::UnknownVertex(root.to_string()));
    };
    let n = verts.len();
    let mut l = SymMatrix::zero(n);
    for (i, v) in verts.iter().enumerate() {
        for (j, v2) in verts.iter().enumerate() {
            let mut s = MPoly::zero();
            for e in g.edge_ids() {
                let prod = g.eps(&e, v) * g.eps(&e, v2);
                if prod != 0 {
                    s += MPoly::atom(Atom::Beta(e.clone())).scale(&crate::poly::rat(prod, 1));
                }
            }
            l[(i, j)] = s;
        }
    }
    let det = l.minor(root_idx, root_idx).determinant()?;
    classical::clear_betas_with_alphas(&det, &g.edge_ids())
}

//! Noncommutative (Moyal) Symanzik polynomials on ribbon graphs.
//!
//! Three independent routes to the first polynomial U*: the star-tree
//! expansion (edge subsets with a single boundary), the determinant of the
//! edge/hyperposition matrix `D + A` with Moyal couplings, and the first
//! order in the boundary variable of the multivariate Bollobás-Riordan
//! polynomial. The second polynomial splits into a real part 𝒳* (two
//! star-trees) and an imaginary part 𝒴* (star-trees weighted by the vertex
//! phase of the boundary cycle); both also have matrix routes.
//!
//! Momentum conservation: all momentum forms are emitted with the highest
//! flag id eliminated, since the paper's quantities are only defined on the
//! conservation submanifold.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;

use crate::br;
use crate::graph::{EdgeId, FlagId, Graph, Limits, VertexId};
use crate::poly::{rat, Atom, MPoly, MomentumForm, Rat};
use crate::ribbon::{End, RibbonGraph, Slot};
use crate::{Error, Result};

/// A connected ribbon graph with the Moyal data fixed: the root vertex
/// whose hyperposition is excluded from the matrix route.
#[derive(Clone, Debug)]
pub struct MoyalContext<'a> {
    ribbon: &'a RibbonGraph,
    root: VertexId,
}

impl<'a> MoyalContext<'a> {
    /// Default root: the vertex with the highest id.
    pub fn new(ribbon: &'a RibbonGraph) -> Result<Self> {
        if !ribbon.graph().is_connected() {
            return Err(Error::Disconnected("the Moyal polynomials"));
        }
        let root = ribbon
            .graph()
            .vertices()
            .iter()
            .map(|v| v.id.clone())
            .max()
            .ok_or_else(|| Error::Invalid("empty graph".into()))?;
        Ok(MoyalContext { ribbon, root })
    }

    pub fn with_root(ribbon: &'a RibbonGraph, root: VertexId) -> Result<Self> {
        if !ribbon.graph().is_connected() {
            return Err(Error::Disconnected("the Moyal polynomials"));
        }
        if ribbon.graph().vertex(&root).is_none() {
            return Err(Error::UnknownVertex(root.to_string()));
        }
        Ok(MoyalContext { ribbon, root })
    }

    pub fn ribbon(&self) -> &RibbonGraph {
        self.ribbon
    }

    pub fn root(&self) -> &VertexId {
        &self.root
    }
}

/// Routes to U*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UMethod {
    StarTree,
    Matrix,
    BrLimit,
}

/// Routes to 𝒳*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XMethod {
    TwoStarTree,
    Matrix,
}

/// Routes to 𝒴*.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum YMethod {
    StarTree,
    Matrix,
}

/// `(θ/2)^k` as an exact polynomial.
fn half_theta_pow(k: u32) -> MPoly {
    let denom = BigInt::from(2).pow(k);
    MPoly::term(
        Rat::new(BigInt::one(), denom),
        crate::poly::Monomial::atom_pow(Atom::Theta, k),
    )
}

fn alpha_product(g: &Graph, outside: &BTreeSet<EdgeId>) -> MPoly {
    let mut p = MPoly::one();
    for e in g.edge_ids() {
        if !outside.contains(&e) {
            p = &p * &MPoly::atom(Atom::Alpha(e));
        }
    }
    p
}

/// Star-trees: spanning edge subsets whose ribbon subgraph has exactly one
/// boundary component (hence is connected).
pub fn star_trees(g: &RibbonGraph, limits: &Limits) -> Result<Vec<BTreeSet<EdgeId>>> {
    subsets_with_boundary_count(g, 1, limits)
}

/// Two-star-trees: spanning edge subsets with exactly two boundary
/// components in total (disconnected subsets allowed; isolated vertices
/// count one boundary each).
pub fn two_star_trees(g: &RibbonGraph, limits: &Limits) -> Result<Vec<BTreeSet<EdgeId>>> {
    subsets_with_boundary_count(g, 2, limits)
}

fn subsets_with_boundary_count(
    g: &RibbonGraph,
    want: usize,
    limits: &Limits,
) -> Result<Vec<BTreeSet<EdgeId>>> {
    if !g.graph().is_connected() {
        return Err(Error::Disconnected("star-tree enumeration"));
    }
    limits.check(g.graph().edge_count())?;
    let ids = g.graph().edge_ids();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << ids.len()) {
        let subset = crate::classical::mask_subset(&ids, mask);
        if g.subset_boundary_count(&subset) == want {
            out.push(subset);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Moyal couplings
// ---------------------------------------------------------------------------

/// What a rotation slot couples as: an internal edge or an external flag.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Coupler {
    Edge(EdgeId),
    Flag(FlagId),
}

fn slot_coupler(s: &Slot) -> (Coupler, i64) {
    match s {
        Slot::Half(e, End::A) => (Coupler::Edge(e.clone()), 1),
        Slot::Half(e, End::B) => (Coupler::Edge(e.clone()), -1),
        Slot::Flag(f) => (Coupler::Flag(f.clone()), 1),
    }
}

/// The integer part of the Moyal coupling between two couplers:
/// `c(a,b) = Σ_v Σ_{i<j} (ε^v_{ai} ε^v_{bj} - ε^v_{aj} ε^v_{bi})` with slot
/// positions taken in the rooted linear order (the stored rotation). The
/// full coupling is `f_{ab} = -(θ/4) c(a,b)`: the vertex phase carries ½
/// and the split across the two antisymmetric matrix entries another ½.
/// The normalization is pinned by the NP3 determinant.
fn moyal_c(g: &RibbonGraph, a: &Coupler, b: &Coupler) -> i64 {
    let mut total = 0i64;
    for v in g.graph().vertices() {
        let signs: Vec<(Coupler, i64)> = g.rotation(&v.id).iter().map(slot_coupler).collect();
        for i in 0..signs.len() {
            for j in i + 1..signs.len() {
                let (ci, si) = &signs[i];
                let (cj, sj) = &signs[j];
                if ci == a && cj == b {
                    total += si * sj;
                }
                if ci == b && cj == a {
                    total -= si * sj;
                }
            }
        }
    }
    total
}

fn moyal_f(g: &RibbonGraph, a: &Coupler, b: &Coupler) -> MPoly {
    let c = moyal_c(g, a, b);
    if c == 0 {
        return MPoly::zero();
    }
    MPoly::term(
        rat(-c, 4),
        crate::poly::Monomial::atom(Atom::Theta),
    )
}

/// The `(E + V - 1)`-dimensional matrix `D + A` of the Moyal phase-space
/// representation: `D = diag(α_e, 0)`, edge-edge block the antisymmetric
/// Moyal couplings `f_{ee'}`, edge-hyperposition blocks `∓ε_{ev}` for every
/// vertex except the root.
pub fn nc_matrix(ctx: &MoyalContext) -> crate::matrix::SymMatrix {
    let g = ctx.ribbon;
    let edges = g.graph().edge_ids();
    let verts: Vec<VertexId> = g
        .graph()
        .vertices()
        .iter()
        .map(|v| v.id.clone())
        .filter(|v| *v != ctx.root)
        .collect();
    let ne = edges.len();
    let n = ne + verts.len();
    let mut m = crate::matrix::SymMatrix::zero(n);
    for (i, e) in edges.iter().enumerate() {
        m[(i, i)] = MPoly::atom(Atom::Alpha(e.clone()));
        for (j, e2) in edges.iter().enumerate().skip(i + 1) {
            let f = moyal_f(g, &Coupler::Edge(e.clone()), &Coupler::Edge(e2.clone()));
            m[(i, j)] = f.clone();
            m[(j, i)] = -f;
        }
    }
    for (j, v) in verts.iter().enumerate() {
        for (i, e) in edges.iter().enumerate() {
            let eps = g.graph().eps(e, v);
            if eps != 0 {
                m[(i, ne + j)] = MPoly::int(-eps);
                m[(ne + j, i)] = MPoly::int(eps);
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// U*
// ---------------------------------------------------------------------------

/// The first Moyal Symanzik polynomial.
///
/// Star-tree form: `U* = Σ_{T*} (θ/2)^{2g(T*)} Π_{e∉T*} α_e` where
/// `2g(T*) = |T*| - V + 1`.
pub fn nc_u(ctx: &MoyalContext, method: UMethod, limits: &Limits) -> Result<MPoly> {
    let g = ctx.ribbon;
    match method {
        UMethod::StarTree => {
            let v = g.graph().vertex_count();
            let mut out = MPoly::zero();
            for t in star_trees(g, limits)? {
                let two_g = (t.len() + 1).checked_sub(v).ok_or_else(|| {
                    Error::Internal("star-tree smaller than a spanning tree".into())
                })?;
                out += &half_theta_pow(two_g as u32) * &alpha_product(g.graph(), &t);
            }
            Ok(out)
        }
        UMethod::Matrix => nc_matrix(ctx).determinant(),
        UMethod::BrLimit => {
            // (2/θ)^{V-1} (Π α_e) Z_G(β_e = θ/2α_e, 1, w) |_{first order in w},
            // with the denominators cleared term by term: a one-boundary
            // subset S contributes (θ/2)^{|S|-V+1} Π_{e∉S} α_e.
            let z = br::br_multivariate(g, limits)?;
            let z1 = z.substitute(&BTreeMap::from([(Atom::X, MPoly::one())]));
            let coeff = z1.extract(&Atom::Z, 1);
            let v = g.graph().vertex_count();
            let mut out = MPoly::zero();
            for (m, c) in coeff.iter() {
                let mut subset = BTreeSet::new();
                for (a, k) in m.iter() {
                    match a {
                        Atom::Beta(e) if *k == 1 => {
                            subset.insert(e.clone());
                        }
                        other => {
                            return Err(Error::Internal(format!(
                                "unexpected atom {other}^{k} in the w-coefficient"
                            )))
                        }
                    }
                }
                let two_g = (subset.len() + 1)
                    .checked_sub(v)
                    .ok_or_else(|| Error::Internal("one-boundary subset too small".into()))?;
                out += (&half_theta_pow(two_g as u32) * &alpha_product(g.graph(), &subset))
                    .scale(c);
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// 𝒳* and 𝒴*
// ---------------------------------------------------------------------------

/// The real part of the second Moyal polynomial, conservation-reduced:
/// `𝒳* = Σ_{T₂*} (θ/2)^{|T₂*|-V+2} Π_{e∉T₂*} α_e (p_{T₂*})²` with
/// `p_{T₂*}` the total momentum of (either) boundary.
pub fn nc_x(ctx: &MoyalContext, method: XMethod, limits: &Limits) -> Result<MomentumForm> {
    let g = ctx.ribbon;
    require_momenta(g.graph())?;
    let all_flags = g.graph().flag_ids();
    let form = match method {
        XMethod::TwoStarTree => {
            let v = g.graph().vertex_count();
            let mut out = MomentumForm::zero();
            for t in two_star_trees(g, limits)? {
                let pow = (t.len() + 2).checked_sub(v).ok_or_else(|| {
                    Error::Internal("two-star-tree smaller than a 2-tree".into())
                })?;
                let weight = &half_theta_pow(pow as u32) * &alpha_product(g.graph(), &t);
                let sub = g.restrict_edges(&t);
                let bounds = sub.boundaries();
                debug_assert_eq!(bounds.len(), 2);
                let flags = bounds[0].flags();
                out += &MomentumForm::square_of_sum(&flags).scale(&weight);
            }
            out
        }
        XMethod::Matrix => sandwich(ctx)?.symmetric_part(),
    };
    Ok(form.conservation_reduce(&all_flags))
}

/// The imaginary part of the second Moyal polynomial, conservation-reduced:
/// `𝒴* = Σ_{T*} (θ/2)^{2g(T*)} Π_{e∉T*} α_e ψ(p)` with `ψ` the half-sum of
/// wedges along the single boundary cycle.
pub fn nc_y(ctx: &MoyalContext, method: YMethod, limits: &Limits) -> Result<MomentumForm> {
    let g = ctx.ribbon;
    require_momenta(g.graph())?;
    let all_flags = g.graph().flag_ids();
    let form = match method {
        YMethod::StarTree => {
            let v = g.graph().vertex_count();
            let mut out = MomentumForm::zero();
            for t in star_trees(g, limits)? {
                let two_g = (t.len() + 1 - v) as u32;
                let weight = &half_theta_pow(two_g) * &alpha_product(g.graph(), &t);
                let sub = g.restrict_edges(&t);
                let bounds = sub.boundaries();
                debug_assert_eq!(bounds.len(), 1);
                let phase = MomentumForm::cyclic_phase(&bounds[0].flags());
                out += &phase.scale(&weight);
            }
            out
        }
        YMethod::Matrix => {
            // Wedge coefficients: -(1/θ)·[(B - Bᵀ) + 2 det(Q) F_flags],
            // where B is the adjugate sandwich and F_flags the direct
            // flag-flag Moyal couplings (the paper's M block). The θ-division
            // is exact; anything else signals a convention bug. The overall
            // constant is pinned by the bare Moyal vertex, whose 𝒴* is its
            // own phase ½ Σ p_i∧p_j.
            let b = sandwich_matrix(ctx)?;
            let det = nc_matrix(ctx).determinant()?;
            let flags = ctx.ribbon.graph().flag_ids();
            let mut out = MomentumForm::zero();
            for (i, f) in flags.iter().enumerate() {
                for h in &flags[i + 1..] {
                    let direct =
                        moyal_f(ctx.ribbon, &Coupler::Flag(f.clone()), &Coupler::Flag(h.clone()));
                    let raw = &(&b[&(f.clone(), h.clone())] - &b[&(h.clone(), f.clone())])
                        + &(&det * &direct).scale(&rat(2, 1));
                    let coeff = (-raw).div_atom_pow(&Atom::Theta, 1)?;
                    out.add_wedge(f.clone(), h.clone(), coeff);
                }
            }
            out
        }
    };
    Ok(form.conservation_reduce(&all_flags))
}

fn require_momenta(g: &Graph) -> Result<()> {
    for f in g.flags() {
        if f.momentum.is_none() {
            return Err(Error::MissingMomentum(f.id.to_string()));
        }
    }
    Ok(())
}

/// Full sandwich `B[f][g] = (R adj(D+A) Rᵀ)[f][g]` as a map over ordered
/// flag pairs. `R` has a row per flag: Moyal couplings `f_{fe}` against the
/// edge columns, incidence `ε_{fv}` against the non-root hyperpositions.
fn sandwich_matrix(ctx: &MoyalContext) -> Result<BTreeMap<(FlagId, FlagId), MPoly>> {
    let g = ctx.ribbon;
    let edges = g.graph().edge_ids();
    let verts: Vec<VertexId> = g
        .graph()
        .vertices()
        .iter()
        .map(|v| v.id.clone())
        .filter(|v| *v != ctx.root)
        .collect();
    let q = nc_matrix(ctx);
    let adj = q.adjugate()?;
    let flags = g.graph().flags();
    let n = edges.len() + verts.len();
    // R rows, dense per flag.
    let mut rows: BTreeMap<FlagId, Vec<MPoly>> = BTreeMap::new();
    for f in flags {
        let mut row = Vec::with_capacity(n);
        for e in &edges {
            row.push(moyal_f(
                g,
                &Coupler::Flag(f.id.clone()),
                &Coupler::Edge(e.clone()),
            ));
        }
        for v in &verts {
            row.push(if f.vertex == *v {
                MPoly::one()
            } else {
                MPoly::zero()
            });
        }
        rows.insert(f.id.clone(), row);
    }
    let mut out = BTreeMap::new();
    for f in flags {
        for h in flags {
            let rf = &rows[&f.id];
            let rh = &rows[&h.id];
            let mut s = MPoly::zero();
            for i in 0..n {
                if rf[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if rh[j].is_zero() {
                        continue;
                    }
                    s += &(&rf[i] * &adj[(i, j)]) * &rh[j];
                }
            }
            out.insert((f.id.clone(), h.id.clone()), s);
        }
    }
    Ok(out)
}

/// Symmetric sandwich as a momentum form: squares from the diagonal, dots
/// from the symmetrized off-diagonal entries.
fn sandwich(ctx: &MoyalContext) -> Result<MomentumForm> {
    let b = sandwich_matrix(ctx)?;
    let flags = ctx.ribbon.graph().flag_ids();
    let mut out = MomentumForm::zero();
    for (i, f) in flags.iter().enumerate() {
        out.add_dot(f.clone(), f.clone(), b[&(f.clone(), f.clone())].clone());
        for h in &flags[i + 1..] {
            let c = &b[&(f.clone(), h.clone())] + &b[&(h.clone(), f.clone())];
            out.add_dot(f.clone(), h.clone(), c);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Identities
// ---------------------------------------------------------------------------

/// Verifies `det(D+A)_G = α_e det(D+A)_{G-e} + det(D+A)_{G/e}` for every
/// semi-regular edge (root chosen per graph as the highest vertex id).
pub fn nc_delcontr_check(g: &RibbonGraph) -> Result<bool> {
    let det = |rib: &RibbonGraph| -> Result<MPoly> {
        let ctx = MoyalContext::new(rib)?;
        nc_matrix(&ctx).determinant()
    };
    let whole = det(g)?;
    for e in g.graph().edge_ids() {
        if !g.graph().classify(&e)?.is_semi_regular() {
            continue;
        }
        let rhs = &MPoly::atom(Atom::Alpha(e.clone())) * &det(&g.rdelete(&e)?)?
            + det(&g.rcontract(&e)?)?;
        if whole != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates U* on a rosette through the nice-crossing factor law:
/// every double contraction contributes `(α₁α₂ + ¼θ²)`, planar rosettes
/// terminate with `Π α_e`.
pub fn rosette_u_by_factor_law(g: &RibbonGraph) -> Result<MPoly> {
    if g.graph().vertex_count() != 1 {
        return Err(Error::Unsupported("the factor law applies to rosettes".into()));
    }
    if g.genus()? == 0 {
        let mut p = MPoly::one();
        for e in g.graph().edge_ids() {
            p = &p * &MPoly::atom(Atom::Alpha(e));
        }
        return Ok(p);
    }
    let Some((e1, e2)) = g.nice_crossing()? else {
        return Err(Error::Internal(
            "positive-genus rosette without a nice crossing".into(),
        ));
    };
    let factor = &(&MPoly::atom(Atom::Alpha(e1.clone())) * &MPoly::atom(Atom::Alpha(e2.clone())))
        + &half_theta_pow(2);
    let rest = rosette_u_by_factor_law(&g.double_contract(&e1, &e2)?)?;
    Ok(&factor * &rest)
}

/// Result of the Ξ-expansion cross-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XiExpansionReport {
    pub u_ok: bool,
    pub x_ok: bool,
    pub y_ok: bool,
}

/// Expands Ξ with `w_I -> (θ/2) Σ_{i∈I} w_i` (cleared of the `2α_e/θ`
/// substitution) and checks that the first order reproduces U*, the second
/// order 𝒳*, and the wedge-valued substitution 𝒴*.
pub fn xi_expansion_check(ctx: &MoyalContext, limits: &Limits) -> Result<XiExpansionReport> {
    let g = ctx.ribbon;
    let xi_p = br::xi(g, limits)?;
    let nv = g.graph().vertex_count();
    let all_flags = g.graph().flag_ids();

    // Scalar expansion: a subset A with boundaries I_1..I_bc contributes
    // (θ/2)^{|A|-V+bc} Π_{e∉A} α_e Π_n (Σ_{i∈I_n} w_i).
    let mut expansion = MPoly::zero();
    // Wedge route: only terms with a single full-flag boundary survive,
    // weighted by (θ/2)^{|A|-V+1} and the cyclic phase of that boundary.
    let mut wedge_route = MomentumForm::zero();
    for (m, c) in xi_p.iter() {
        let mut alpha_part = crate::poly::Monomial::unit();
        let mut in_a = 0usize;
        let mut wsets: Vec<(Vec<FlagId>, u32)> = Vec::new();
        for (a, k) in m.iter() {
            match a {
                Atom::Alpha(_) => {
                    alpha_part =
                        alpha_part.mul(&crate::poly::Monomial::atom_pow(a.clone(), *k));
                }
                Atom::Beta(_) => in_a += *k as usize,
                Atom::WSet(seq) => wsets.push((seq.clone(), *k)),
                other => {
                    return Err(Error::Internal(format!("unexpected atom {other} in Ξ")))
                }
            }
        }
        let bc: u32 = wsets.iter().map(|(_, k)| *k).sum();
        let pow = (in_a + bc as usize)
            .checked_sub(nv)
            .ok_or_else(|| Error::Internal("Ξ term with bc + |A| < V".into()))?;
        let base = MPoly::term(c.clone(), alpha_part) * half_theta_pow(pow as u32);

        let mut scalar = base.clone();
        for (seq, k) in &wsets {
            let mut s = MPoly::zero();
            for f in seq {
                s += MPoly::atom(Atom::Wi(f.clone()));
            }
            scalar = &scalar * &s.pow(*k);
        }
        expansion += scalar;

        if bc == 1 {
            let (seq, _) = &wsets[0];
            if seq.len() == all_flags.len() {
                // One boundary carrying every flag: the 𝒴* phase term.
                wedge_route += &MomentumForm::cyclic_phase(seq).scale(&base);
            }
        }
    }

    // First order in the w_i: U* times the sum of all flag variables.
    let is_wi = |a: &Atom| matches!(a, Atom::Wi(_));
    let deg1 = crate::classical::selected_degree_part(&expansion, is_wi, 1);
    let mut wi_sum = MPoly::zero();
    for f in &all_flags {
        wi_sum += MPoly::atom(Atom::Wi(f.clone()));
    }
    let u_star = nc_u(ctx, UMethod::StarTree, limits)?;
    let u_ok = deg1 == &u_star * &wi_sum;

    // Second order: 𝒳* = -½ Σ_{i≠j} B_ij p_i·p_j from the w_i w_j
    // coefficients.
    let deg2 = crate::classical::selected_degree_part(&expansion, is_wi, 2);
    let mut x_route = MomentumForm::zero();
    for (m, c) in deg2.iter() {
        let mut pair: Vec<FlagId> = Vec::new();
        let mut rest = crate::poly::Monomial::unit();
        for (a, k) in m.iter() {
            match a {
                Atom::Wi(f) => {
                    if *k != 1 {
                        return Err(Error::Internal(
                            "squared flag variable in the Ξ expansion".into(),
                        ));
                    }
                    pair.push(f.clone());
                }
                other => {
                    rest = rest.mul(&crate::poly::Monomial::atom_pow(other.clone(), *k));
                }
            }
        }
        debug_assert_eq!(pair.len(), 2);
        // The w_i w_j monomial collects B_ij + B_ji, so the unordered dot
        // atom takes the full coefficient: 𝒳* = -Σ_{i<j} (B_ij+B_ji) p_i·p_j.
        let coeff = -MPoly::term(c.clone(), rest);
        x_route.add_dot(pair[0].clone(), pair[1].clone(), coeff);
    }
    let x_ok = x_route.conservation_reduce(&all_flags)
        == nc_x(ctx, XMethod::TwoStarTree, limits)?;

    let y_ok = wedge_route.conservation_reduce(&all_flags)
        == nc_y(ctx, YMethod::StarTree, limits)?;

    Ok(XiExpansionReport { u_ok, x_ok, y_ok })
}

//! The commutative polynomials: Tutte, multivariate Tutte, forest, first and
//! second Symanzik, their harmonic-weight generalizations, and the
//! categorified family (𝒲, Υ, Noble-Welsh W).
//!
//! Everything is computable by subset expansion; the recursive
//! deletion/contraction route exists wherever the theory provides one, and
//! the two must agree exactly — that agreement is tested, never assumed.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::graph::{EdgeId, EdgeKind, FlagId, Graph, Limits, SubsetFamily, VertexId};
use crate::poly::{Atom, MPoly, MomentumForm};
use crate::{Error, Result};

/// Computation route for the polynomials that have both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Subset,
    DelContr,
}

/// Which second-Symanzik variant to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VVariant {
    /// `-½ Σ_{v≠v'} p_v·p_{v'} Σ_{2-trees sep v,v'} Π α` — no conservation
    /// assumption.
    Symmetric,
    /// `Σ_{2-trees} p_{G1}² Π α`, emitted with the designated last flag
    /// eliminated by momentum conservation.
    Conserved,
}

/// Parallel sum of `f` over all edge subsets, in a deterministic canonical
/// result (addition of canonical polynomials commutes).
pub(crate) fn subset_scan<F>(g: &Graph, limits: &Limits, f: F) -> Result<MPoly>
where
    F: Fn(&BTreeSet<EdgeId>) -> MPoly + Sync,
{
    limits.check(g.edge_count())?;
    let ids = g.edge_ids();
    let total = 1u64 << ids.len();
    Ok((0..total)
        .into_par_iter()
        .map(|mask| f(&mask_subset(&ids, mask)))
        .reduce(MPoly::zero, |a, b| a + b))
}

pub(crate) fn mask_subset(ids: &[EdgeId], mask: u64) -> BTreeSet<EdgeId> {
    ids.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, id)| id.clone())
        .collect()
}

/// `Π_{e ∈ set} atom(e)` helper.
fn product_over<'a, I: IntoIterator<Item = &'a EdgeId>>(
    edges: I,
    atom: impl Fn(&EdgeId) -> Atom,
) -> MPoly {
    let mut p = MPoly::one();
    for e in edges {
        p = &p * &MPoly::atom(atom(e));
    }
    p
}

fn complement(g: &Graph, subset: &BTreeSet<EdgeId>) -> Vec<EdgeId> {
    g.edge_ids()
        .into_iter()
        .filter(|e| !subset.contains(e))
        .collect()
}

/// Sum of weight atoms over the weighted vertices of a component.
fn weight_sum(g: &Graph, comp: &BTreeSet<VertexId>) -> MPoly {
    let mut p = MPoly::zero();
    for v in comp {
        if g.vertex(v).is_some_and(|x| x.weighted) {
            p += MPoly::atom(Atom::VWeight(v.clone()));
        }
    }
    p
}

fn require_weights(g: &Graph, what: &str) -> Result<()> {
    for v in g.vertices() {
        if !v.weighted {
            return Err(Error::Invalid(format!(
                "{what} needs a weight on every vertex but `{}` has none",
                v.id
            )));
        }
    }
    Ok(())
}

fn require_momenta(g: &Graph) -> Result<()> {
    for f in g.flags() {
        if f.momentum.is_none() {
            return Err(Error::MissingMomentum(f.id.to_string()));
        }
    }
    Ok(())
}

fn require_flagged_vertices(g: &Graph, what: &str) -> Result<()> {
    for v in g.vertices() {
        if g.flags_at(&v.id).is_empty() {
            return Err(Error::Invalid(format!(
                "{what} needs at least one flag on every vertex but `{}` has none",
                v.id
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tutte polynomial
// ---------------------------------------------------------------------------

/// `T_G(x, y) = Σ_A (x-1)^{r(E)-r(A)} (y-1)^{n(A)}`, or the regular-edge
/// deletion/contraction recursion with terminal form `x^m y^n`.
pub fn tutte(g: &Graph, method: Method, limits: &Limits) -> Result<MPoly> {
    tutte_with_order(g, method, limits, None)
}

/// As [`tutte`], recursing on the first regular edge in `order` (ascending
/// edge ids when `None`). The result must not depend on the order.
pub fn tutte_with_order(
    g: &Graph,
    method: Method,
    limits: &Limits,
    order: Option<&[EdgeId]>,
) -> Result<MPoly> {
    match method {
        Method::Subset => {
            let (_, r_full, _) = g.metrics();
            let xm1 = &MPoly::atom(Atom::X) - &MPoly::one();
            let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
            subset_scan(g, limits, |a| {
                let (_, r, n) = g.subset_metrics(a);
                &xm1.pow((r_full - r) as u32) * &ym1.pow(n as u32)
            })
        }
        Method::DelContr => {
            let order = order_or_default(g, order);
            let mut memo = HashMap::new();
            tutte_rec(g, &order, &mut memo)
        }
    }
}

fn order_or_default(g: &Graph, order: Option<&[EdgeId]>) -> Vec<EdgeId> {
    match order {
        Some(o) => o.to_vec(),
        None => g.edge_ids(),
    }
}

fn first_edge_of_kind(
    g: &Graph,
    order: &[EdgeId],
    want: impl Fn(EdgeKind) -> bool,
) -> Option<EdgeId> {
    order
        .iter()
        .filter(|e| g.edge(e).is_some())
        .find(|e| want(g.classify(e).expect("edge present")))
        .cloned()
}

fn tutte_rec(g: &Graph, order: &[EdgeId], memo: &mut HashMap<String, MPoly>) -> Result<MPoly> {
    let key = g.canonical_key(|_| String::new());
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    let result = match first_edge_of_kind(g, order, |k| k == EdgeKind::Regular) {
        Some(e) => {
            let c = tutte_rec(&g.contract(&e)?, order, memo)?;
            let d = tutte_rec(&g.delete(&e)?, order, memo)?;
            c + d
        }
        None => {
            // Terminal form: m bridges and n self-loops give x^m y^n.
            let mut m = 0;
            let mut n = 0;
            for e in g.edge_ids() {
                match g.classify(&e)? {
                    EdgeKind::Bridge => m += 1,
                    EdgeKind::SelfLoop => n += 1,
                    EdgeKind::Regular => unreachable!("no regular edges in terminal form"),
                }
            }
            &MPoly::atom_pow(Atom::X, m) * &MPoly::atom_pow(Atom::Y, n)
        }
    };
    memo.insert(key, result.clone());
    Ok(result)
}

// ---------------------------------------------------------------------------
// Multivariate Tutte polynomial and forest polynomial
// ---------------------------------------------------------------------------

/// `Z_G(q, β) = Σ_A q^{k(A)} Π_{e∈A} β_e`; deletion/contraction holds for
/// every edge with terminal form `q^v` on edgeless graphs.
pub fn z_multivariate(g: &Graph, method: Method, limits: &Limits) -> Result<MPoly> {
    z_multivariate_with_order(g, method, limits, None)
}

pub fn z_multivariate_with_order(
    g: &Graph,
    method: Method,
    limits: &Limits,
    order: Option<&[EdgeId]>,
) -> Result<MPoly> {
    match method {
        Method::Subset => subset_scan(g, limits, |a| {
            let (k, _, _) = g.subset_metrics(a);
            &MPoly::atom_pow(Atom::Q, k as u32) * &product_over(a.iter(), |e| Atom::beta(e.as_str()))
        }),
        Method::DelContr => {
            let order = order_or_default(g, order);
            let mut memo = HashMap::new();
            z_rec(g, &order, &mut memo)
        }
    }
}

fn z_rec(g: &Graph, order: &[EdgeId], memo: &mut HashMap<String, MPoly>) -> Result<MPoly> {
    let key = g.canonical_key(|_| String::new());
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    let result = match order.iter().find(|e| g.edge(e).is_some()).cloned() {
        Some(e) => {
            let beta = MPoly::atom(Atom::Beta(e.clone()));
            let c = z_rec(&g.contract(&e)?, order, memo)?;
            let d = z_rec(&g.delete(&e)?, order, memo)?;
            &beta * &c + d
        }
        None => MPoly::atom_pow(Atom::Q, g.vertex_count() as u32),
    };
    memo.insert(key, result.clone());
    Ok(result)
}

/// `F_G(β, q) = Σ_{A acyclic} q^{k(A)} Π_{e∈A} β_e` over all spanning
/// forests, the empty one included.
pub fn forest_poly(g: &Graph, limits: &Limits) -> Result<MPoly> {
    let forests = g.enumerate(SubsetFamily::SpanningForests, limits)?;
    let mut out = MPoly::zero();
    for a in &forests {
        let (k, _, _) = g.subset_metrics(a);
        out += &MPoly::atom_pow(Atom::Q, k as u32)
            * &product_over(a.iter(), |e| Atom::beta(e.as_str()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// First Symanzik polynomial
// ---------------------------------------------------------------------------

/// `U_G = Σ_{spanning trees} Π_{e∉T} α_e` for connected graphs; the product
/// over components otherwise (a disconnected U is not a tree sum). The
/// deletion/contraction route recurses on regular edges with terminal form
/// `Π_{self-loops} α_e`.
pub fn symanzik_u(g: &Graph, method: Method, limits: &Limits) -> Result<MPoly> {
    symanzik_u_with_order(g, method, limits, None)
}

pub fn symanzik_u_with_order(
    g: &Graph,
    method: Method,
    limits: &Limits,
    order: Option<&[EdgeId]>,
) -> Result<MPoly> {
    match method {
        Method::Subset => {
            let mut out = MPoly::one();
            for comp in g.components_of_subset(&g.edge_ids().into_iter().collect()) {
                let sub = g.induced(&comp);
                let trees = sub.enumerate(SubsetFamily::SpanningTrees, limits)?;
                let mut u = MPoly::zero();
                for t in &trees {
                    u += product_over(
                        sub.edge_ids().iter().filter(|e| !t.contains(*e)),
                        |e| Atom::alpha(e.as_str()),
                    );
                }
                out = &out * &u;
            }
            Ok(out)
        }
        Method::DelContr => {
            let order = order_or_default(g, order);
            let mut memo = HashMap::new();
            u_rec(g, &order, &mut memo)
        }
    }
}

fn u_rec(g: &Graph, order: &[EdgeId], memo: &mut HashMap<String, MPoly>) -> Result<MPoly> {
    let key = g.canonical_key(|_| String::new());
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    let result = match first_edge_of_kind(g, order, |k| k == EdgeKind::Regular) {
        Some(e) => {
            let alpha = MPoly::atom(Atom::Alpha(e.clone()));
            let c = u_rec(&g.contract(&e)?, order, memo)?;
            let d = u_rec(&g.delete(&e)?, order, memo)?;
            c + &alpha * &d
        }
        None => {
            let mut p = MPoly::one();
            for e in g.edges() {
                if e.tail == e.head {
                    p = &p * &MPoly::atom(Atom::Alpha(e.id.clone()));
                }
            }
            p
        }
    };
    memo.insert(key, result.clone());
    Ok(result)
}

// ---------------------------------------------------------------------------
// Second Symanzik polynomial
// ---------------------------------------------------------------------------

/// The second Symanzik polynomial over 2-trees of a connected graph.
pub fn symanzik_v(g: &Graph, variant: VVariant, limits: &Limits) -> Result<MomentumForm> {
    if !g.is_connected() {
        return Err(Error::Disconnected("the second Symanzik polynomial"));
    }
    require_momenta(g)?;
    let two_trees = g.enumerate(SubsetFamily::TwoForests, limits)?;
    let mut out = MomentumForm::zero();
    for t2 in &two_trees {
        let weight = product_over(complement(g, t2).iter(), |e| Atom::alpha(e.as_str()));
        let comps = g.components_of_subset(t2);
        debug_assert_eq!(comps.len(), 2);
        match variant {
            VVariant::Symmetric => {
                // -½ Σ_{v≠v'} p_v·p_{v'} over separated pairs; the two
                // orders of each pair collapse to a single cross sum.
                let flags1 = flags_of(g, &comps[0]);
                let flags2 = flags_of(g, &comps[1]);
                for f in &flags1 {
                    for h in &flags2 {
                        out.add_dot(f.clone(), h.clone(), -weight.clone());
                    }
                }
            }
            VVariant::Conserved => {
                let flags1 = flags_of(g, &comps[0]);
                out += &MomentumForm::square_of_sum(&flags1).scale(&weight);
            }
        }
    }
    if variant == VVariant::Conserved {
        out = out.conservation_reduce(&g.flag_ids());
    }
    Ok(out)
}

fn flags_of(g: &Graph, comp: &BTreeSet<VertexId>) -> Vec<FlagId> {
    let mut flags = Vec::new();
    for v in comp {
        flags.extend(g.flags_at(v));
    }
    flags.sort();
    flags
}

// ---------------------------------------------------------------------------
// Generalized (harmonic-weight) Symanzik polynomials
// ---------------------------------------------------------------------------

/// `𝒰_G = Σ_{forests F} Π_{e∉F} α_e Π_C q_C` with `q_C` the summed weight of
/// each component. Deletion/contraction recurses on semi-regular edges,
/// merging weights additively; terminal form `Π α_e Π q_v`.
pub fn gen_u(g: &Graph, method: Method, limits: &Limits) -> Result<MPoly> {
    gen_u_with_order(g, method, limits, None)
}

pub fn gen_u_with_order(
    g: &Graph,
    method: Method,
    limits: &Limits,
    order: Option<&[EdgeId]>,
) -> Result<MPoly> {
    require_weights(g, "the generalized Symanzik polynomial")?;
    match method {
        Method::Subset => {
            let forests = g.enumerate(SubsetFamily::SpanningForests, limits)?;
            let mut out = MPoly::zero();
            for f in &forests {
                let mut term = product_over(complement(g, f).iter(), |e| Atom::alpha(e.as_str()));
                for comp in g.components_of_subset(f) {
                    term = &term * &weight_sum(g, &comp);
                }
                out += term;
            }
            Ok(out)
        }
        Method::DelContr => {
            let order = order_or_default(g, order);
            let weights: BTreeMap<VertexId, MPoly> = g
                .vertices()
                .iter()
                .map(|v| (v.id.clone(), MPoly::atom(Atom::VWeight(v.id.clone()))))
                .collect();
            let mut memo = HashMap::new();
            gen_u_rec(g, &weights, &order, &mut memo)
        }
    }
}

fn gen_u_rec(
    g: &Graph,
    weights: &BTreeMap<VertexId, MPoly>,
    order: &[EdgeId],
    memo: &mut HashMap<String, MPoly>,
) -> Result<MPoly> {
    // Weight expressions are part of the key: merged vertices carry formal
    // sums that the bare structure does not determine.
    let key = g.canonical_key(|v| weights[v].to_string());
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    let result = match first_edge_of_kind(g, order, EdgeKind::is_semi_regular) {
        Some(e) => {
            let alpha = MPoly::atom(Atom::Alpha(e.clone()));
            let edge = g.edge(&e).unwrap().clone();
            let (keep, gone) = if edge.tail < edge.head {
                (edge.tail, edge.head)
            } else {
                (edge.head, edge.tail)
            };
            let mut merged = weights.clone();
            let sum = &merged[&keep] + &merged[&gone];
            merged.insert(keep, sum);
            merged.remove(&gone);
            let c = gen_u_rec(&g.contract(&e)?, &merged, order, memo)?;
            let d = gen_u_rec(&g.delete(&e)?, weights, order, memo)?;
            &alpha * &d + c
        }
        None => {
            let mut p = MPoly::one();
            for e in g.edges() {
                p = &p * &MPoly::atom(Atom::Alpha(e.id.clone()));
            }
            for v in g.vertices() {
                p = &p * &weights[&v.id];
            }
            p
        }
    };
    memo.insert(key, result.clone());
    Ok(result)
}

/// `𝒱_G = Σ_forests Π_{e∉F} α_e Σ_C p_C² Π_{C'≠C} q_{C'}`.
pub fn gen_v(g: &Graph, limits: &Limits) -> Result<MomentumForm> {
    require_weights(g, "the generalized second Symanzik polynomial")?;
    require_momenta(g)?;
    let forests = g.enumerate(SubsetFamily::SpanningForests, limits)?;
    let mut out = MomentumForm::zero();
    for f in &forests {
        let alpha = product_over(complement(g, f).iter(), |e| Atom::alpha(e.as_str()));
        let comps = g.components_of_subset(f);
        for (i, comp) in comps.iter().enumerate() {
            let mut coeff = alpha.clone();
            for (j, other) in comps.iter().enumerate() {
                if i != j {
                    coeff = &coeff * &weight_sum(g, other);
                }
            }
            out += &MomentumForm::square_of_sum(&flags_of(g, comp)).scale(&coeff);
        }
    }
    Ok(out)
}

/// `U_G = ∂𝒰/∂q_v |_{q=0}` — identical for every vertex choice on a
/// connected graph.
pub fn recover_u(g: &Graph, v: &VertexId, limits: &Limits) -> Result<MPoly> {
    if !g.is_connected() {
        return Err(Error::Disconnected("the q -> 0 recovery of U"));
    }
    if g.vertex(v).is_none() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let gu = gen_u(g, Method::Subset, limits)?;
    Ok(kill_weights(&gu.derive(&Atom::VWeight(v.clone())), g))
}

/// `V_G = -½ Σ_{v≠v'} p_v·p_{v'} ∂²𝒰/∂q_v∂q_{v'} |_{q=0}`.
pub fn recover_v(g: &Graph, limits: &Limits) -> Result<MomentumForm> {
    if !g.is_connected() {
        return Err(Error::Disconnected("the q -> 0 recovery of V"));
    }
    require_momenta(g)?;
    let gu = gen_u(g, Method::Subset, limits)?;
    let verts: Vec<VertexId> = g.vertices().iter().map(|v| v.id.clone()).collect();
    let mut out = MomentumForm::zero();
    for (i, v) in verts.iter().enumerate() {
        for v2 in &verts[i + 1..] {
            let d2 = kill_weights(
                &gu.derive(&Atom::VWeight(v.clone()))
                    .derive(&Atom::VWeight(v2.clone())),
                g,
            );
            if d2.is_zero() {
                continue;
            }
            // -½ over ordered pairs = -1 over unordered pairs.
            for f in g.flags_at(v) {
                for h in g.flags_at(v2) {
                    out.add_dot(f.clone(), h.clone(), -d2.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Sets every vertex-weight atom to zero.
fn kill_weights(p: &MPoly, g: &Graph) -> MPoly {
    let mut out = p.clone();
    for v in g.vertices() {
        out = out.extract(&Atom::VWeight(v.id.clone()), 0);
    }
    out
}

// ---------------------------------------------------------------------------
// Categorified polynomials
// ---------------------------------------------------------------------------

/// `𝒲_G(β, q_I) = Σ_A Π_{e∈A} β_e Π_C q_{I_C}` with `I_C` the flag set of
/// each component. Needs a flag on every vertex so that every `q_I` index is
/// nonempty.
pub fn w_categorified(g: &Graph, limits: &Limits) -> Result<MPoly> {
    require_flagged_vertices(g, "the categorified polynomial")?;
    subset_scan(g, limits, |a| {
        let mut term = product_over(a.iter(), |e| Atom::beta(e.as_str()));
        for comp in g.components_of_subset(a) {
            let flags: BTreeSet<FlagId> = flags_of(g, &comp).into_iter().collect();
            term = &term * &MPoly::atom(Atom::QSet(flags));
        }
        term
    })
}

/// `Υ_G(α, q_i) = Σ_A Π_{e∉A} α_e Π_C (Σ_{i∈I_C} q_i)`, the per-flag
/// intermediate between 𝒲 and 𝒰.
pub fn upsilon(g: &Graph, limits: &Limits) -> Result<MPoly> {
    subset_scan(g, limits, |a| {
        let mut term = product_over(complement(g, a).iter(), |e| Atom::alpha(e.as_str()));
        for comp in g.components_of_subset(a) {
            let mut s = MPoly::zero();
            for f in flags_of(g, &comp) {
                s += MPoly::atom(Atom::Wi(f));
            }
            term = &term * &s;
        }
        term
    })
}

/// The Noble-Welsh polynomial for positive integer flag weights:
/// `W_G(ξ, y) = Σ_A (y-1)^{n(A)} Π_C ξ_{a_C}` with `a_C` the summed flag
/// weight of each component.
pub fn noble_welsh(
    g: &Graph,
    weights: &BTreeMap<FlagId, u64>,
    limits: &Limits,
) -> Result<MPoly> {
    require_flagged_vertices(g, "the Noble-Welsh polynomial")?;
    for f in g.flags() {
        match weights.get(&f.id) {
            Some(0) | None => {
                return Err(Error::Invalid(format!(
                    "flag `{}` needs a positive integer weight",
                    f.id
                )))
            }
            Some(_) => {}
        }
    }
    let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
    subset_scan(g, limits, |a| {
        let (_, _, n) = g.subset_metrics(a);
        let mut term = ym1.pow(n as u32);
        for comp in g.components_of_subset(a) {
            let total: u64 = flags_of(g, &comp).iter().map(|f| weights[f]).sum();
            term = &term * &MPoly::atom(Atom::Xi(total));
        }
        term
    })
}

// ---------------------------------------------------------------------------
// Substitution/truncation helpers for the 𝒲 → U diagram
// ---------------------------------------------------------------------------

/// Replaces each `qs[I]` atom via `f(I)`.
pub fn substitute_qsets(p: &MPoly, f: impl Fn(&BTreeSet<FlagId>) -> MPoly) -> MPoly {
    let mut map = BTreeMap::new();
    for a in p.atoms() {
        if let Atom::QSet(s) = &a {
            map.insert(a.clone(), f(s));
        }
    }
    p.substitute(&map)
}

/// Multiplies by `Π_{e∈E} α_e` and sets `β_e = 1 / α_e`: each term must be
/// multiaffine in the β's, and each `β_e` present loses its matching `α_e`
/// from the full product.
pub fn clear_betas_with_alphas(p: &MPoly, all_edges: &[EdgeId]) -> Result<MPoly> {
    let mut out = MPoly::zero();
    for (m, c) in p.iter() {
        let mut in_beta: BTreeSet<EdgeId> = BTreeSet::new();
        let mut rest = crate::poly::Monomial::unit();
        for (a, k) in m.iter() {
            match a {
                Atom::Beta(e) => {
                    if *k > 1 {
                        return Err(Error::Internal(format!(
                            "β-clearing needs a multiaffine polynomial, got {a}^{k}"
                        )));
                    }
                    in_beta.insert(e.clone());
                }
                other => {
                    rest = rest.mul(&crate::poly::Monomial::atom_pow(other.clone(), *k));
                }
            }
        }
        let mut term = MPoly::term(c.clone(), rest);
        for e in all_edges {
            if !in_beta.contains(e) {
                term = &term * &MPoly::atom(Atom::Alpha(e.clone()));
            }
        }
        out += term;
    }
    Ok(out)
}

/// Keeps, within each group of terms sharing the same non-selected part,
/// only the terms of extremal total degree in the selected atoms.
pub fn truncate_extremal_degree(
    p: &MPoly,
    selected: impl Fn(&Atom) -> bool,
    keep_max: bool,
) -> MPoly {
    use crate::poly::Monomial;
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, crate::poly::Rat)>> = BTreeMap::new();
    for (m, c) in p.iter() {
        let rest: Vec<(Atom, u32)> = m
            .iter()
            .filter(|(a, _)| !selected(a))
            .cloned()
            .collect();
        groups
            .entry(Monomial::from_pairs(rest))
            .or_default()
            .push((m.clone(), c.clone()));
    }
    let sel_degree = |m: &Monomial| -> u32 {
        m.iter()
            .filter(|(a, _)| selected(a))
            .map(|(_, k)| *k)
            .sum()
    };
    let mut out = MPoly::zero();
    for (_, terms) in groups {
        let degrees: Vec<u32> = terms.iter().map(|(m, _)| sel_degree(m)).collect();
        let target = if keep_max {
            *degrees.iter().max().unwrap()
        } else {
            *degrees.iter().min().unwrap()
        };
        for ((m, c), d) in terms.into_iter().zip(degrees) {
            if d == target {
                out += MPoly::term(c, m);
            }
        }
    }
    out
}

/// Total degree of a term in the atoms picked by `selected`.
pub fn selected_degree_part(p: &MPoly, selected: impl Fn(&Atom) -> bool, degree: u32) -> MPoly {
    let mut out = MPoly::zero();
    for (m, c) in p.iter() {
        let d: u32 = m
            .iter()
            .filter(|(a, _)| selected(a))
            .map(|(_, k)| *k)
            .sum();
        if d == degree {
            out += MPoly::term(c.clone(), m.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{parse_poly, rat};

    fn lim() -> Limits {
        Limits::default()
    }

    fn both(g: &Graph, f: impl Fn(Method) -> Result<MPoly>) -> MPoly {
        let s = f(Method::Subset).unwrap();
        let d = f(Method::DelContr).unwrap();
        assert_eq!(s, d, "subset and deletion/contraction routes must agree");
        s
    }

    #[test]
    fn tutte_fixture_values() {
        let p2 = fixtures::p2().graph;
        assert_eq!(both(&p2, |m| tutte(&p2, m, &lim())).to_string(), "x");
        let l1 = fixtures::l1().graph;
        assert_eq!(both(&l1, |m| tutte(&l1, m, &lim())).to_string(), "y");
        let c3 = fixtures::c3().graph;
        assert_eq!(
            both(&c3, |m| tutte(&c3, m, &lim())),
            parse_poly("x^2 + x + y").unwrap()
        );
    }

    #[test]
    fn z_multivariate_fixture_values() {
        // L1: q(1 + β); B2: q² + (β1+β2)q + β1β2 q.
        let l1 = fixtures::l1().graph;
        assert_eq!(
            both(&l1, |m| z_multivariate(&l1, m, &lim())),
            parse_poly("beta[e1]*q + q").unwrap()
        );
        let b2 = fixtures::b2().graph;
        assert_eq!(
            both(&b2, |m| z_multivariate(&b2, m, &lim())),
            parse_poly("beta[e1]*beta[e2]*q + q^2 + beta[e1]*q + beta[e2]*q").unwrap()
        );
        // Single vertex, no edges: q.
        let mut g = Graph::new();
        g.add_vertex("v", false).unwrap();
        assert_eq!(
            z_multivariate(&g, Method::Subset, &lim()).unwrap(),
            MPoly::atom(Atom::Q)
        );
    }

    #[test]
    fn tutte_z_bridge_identity() {
        // q^{-V} Z |_{β=y-1, q=(x-1)(y-1)} = (x-1)^{k-V} T(x,y), cleared of
        // the q^{-V} and (x-1)^{k-V} prefactors.
        for gf in fixtures::all() {
            let g = &gf.graph;
            let z = z_multivariate(g, Method::Subset, &lim()).unwrap();
            let t = tutte(g, Method::Subset, &lim()).unwrap();
            let xm1 = &MPoly::atom(Atom::X) - &MPoly::one();
            let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
            let mut map = BTreeMap::new();
            map.insert(Atom::Q, &xm1 * &ym1);
            for e in g.edge_ids() {
                map.insert(Atom::Beta(e), ym1.clone());
            }
            let v = g.vertex_count() as u32;
            let k = g.component_count() as u32;
            // Z(...) = q^V (x-1)^{k-V} T becomes, after clearing,
            // Z_sub = (x-1)^k (y-1)^V T.
            let lhs = z.substitute(&map);
            let rhs = &(&xm1.pow(k) * &ym1.pow(v)) * &t;
            assert_eq!(lhs, rhs, "bridge identity fails on {}", gf.name);
        }
    }

    #[test]
    fn forest_poly_values() {
        let b2 = fixtures::b2().graph;
        assert_eq!(
            forest_poly(&b2, &lim()).unwrap(),
            parse_poly("q^2 + beta[e1]*q + beta[e2]*q").unwrap()
        );
        let c3 = fixtures::c3().graph;
        assert_eq!(
            forest_poly(&c3, &lim()).unwrap(),
            parse_poly(
                "q^3 + beta[e1]*q^2 + beta[e2]*q^2 + beta[e3]*q^2 \
                 + beta[e1]*beta[e2]*q + beta[e1]*beta[e3]*q + beta[e2]*beta[e3]*q"
            )
            .unwrap()
        );
        // Edgeless graph on n vertices: q^n.
        let mut g = Graph::new();
        for v in ["a", "b", "c", "d"] {
            g.add_vertex(v, false).unwrap();
        }
        assert_eq!(
            forest_poly(&g, &lim()).unwrap(),
            MPoly::atom_pow(Atom::Q, 4)
        );
    }

    #[test]
    fn symanzik_u_fixture_values() {
        let p2 = fixtures::p2().graph;
        assert_eq!(both(&p2, |m| symanzik_u(&p2, m, &lim())), MPoly::one());
        let b2 = fixtures::b2().graph;
        assert_eq!(
            both(&b2, |m| symanzik_u(&b2, m, &lim())),
            parse_poly("alpha[e1] + alpha[e2]").unwrap()
        );
        let c3 = fixtures::c3().graph;
        assert_eq!(
            both(&c3, |m| symanzik_u(&c3, m, &lim())),
            parse_poly("alpha[e1] + alpha[e2] + alpha[e3]").unwrap()
        );
    }

    #[test]
    fn gen_u_fixture_values() {
        let b2 = fixtures::b2().graph;
        assert_eq!(
            both(&b2, |m| gen_u(&b2, m, &lim())),
            parse_poly(
                "alpha[e1]*alpha[e2]*qv[u]*qv[v] + alpha[e1]*qv[u] + alpha[e1]*qv[v] \
                 + alpha[e2]*qv[u] + alpha[e2]*qv[v]"
            )
            .unwrap()
        );
        let l1 = fixtures::l1().graph;
        assert_eq!(
            both(&l1, |m| gen_u(&l1, m, &lim())),
            parse_poly("alpha[e1]*qv[v]").unwrap()
        );
        // A single weighted bare vertex: q_v.
        let mut g = Graph::new();
        g.add_vertex("v", true).unwrap();
        assert_eq!(
            gen_u(&g, Method::Subset, &lim()).unwrap(),
            MPoly::atom(Atom::vweight("v"))
        );
    }

    #[test]
    fn gen_u_delcontr_agrees_on_all_fixtures() {
        for gf in fixtures::all() {
            both(&gf.graph, |m| gen_u(&gf.graph, m, &lim()));
        }
    }

    #[test]
    fn delcontr_is_order_independent() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for gf in fixtures::all() {
            let g = &gf.graph;
            let base = tutte(g, Method::DelContr, &lim()).unwrap();
            let base_u = symanzik_u(g, Method::DelContr, &lim()).unwrap();
            let base_gu = gen_u(g, Method::DelContr, &lim()).unwrap();
            for _ in 0..10 {
                let mut order = g.edge_ids();
                order.shuffle(&mut rng);
                assert_eq!(
                    tutte_with_order(g, Method::DelContr, &lim(), Some(&order)).unwrap(),
                    base
                );
                assert_eq!(
                    symanzik_u_with_order(g, Method::DelContr, &lim(), Some(&order)).unwrap(),
                    base_u
                );
                assert_eq!(
                    gen_u_with_order(g, Method::DelContr, &lim(), Some(&order)).unwrap(),
                    base_gu
                );
            }
        }
    }

    #[test]
    fn symanzik_v_b2f_conserved() {
        let b2f = fixtures::b2f().graph;
        let v = symanzik_v(&b2f, VVariant::Conserved, &lim()).unwrap();
        // α1 α2 (p1+p2)², already free of the eliminated flag f3.
        let a12 = parse_poly("alpha[e1]*alpha[e2]").unwrap();
        let mut expect = MomentumForm::zero();
        expect.add_dot("f1".into(), "f1".into(), a12.clone());
        expect.add_dot("f2".into(), "f2".into(), a12.clone());
        expect.add_dot("f1".into(), "f2".into(), a12.scale(&rat(2, 1)));
        assert_eq!(v, expect);
    }

    #[test]
    fn symanzik_v_variants_agree_under_conservation() {
        for gf in [fixtures::c3(), fixtures::b2f(), fixtures::b2()] {
            let g = &gf.graph;
            let sym = symanzik_v(g, VVariant::Symmetric, &lim())
                .unwrap()
                .conservation_reduce(&g.flag_ids());
            let con = symanzik_v(g, VVariant::Conserved, &lim()).unwrap();
            assert_eq!(sym, con, "variants disagree on {}", gf.name);
        }
    }

    #[test]
    fn gen_v_values() {
        // Single weighted vertex with one flag: p².
        let mut g = Graph::new();
        g.add_vertex("v", true).unwrap();
        g.add_flag("f1", "v", Some("p".into())).unwrap();
        let v = gen_v(&g, &lim()).unwrap();
        let mut expect = MomentumForm::zero();
        expect.add_dot("f1".into(), "f1".into(), MPoly::one());
        assert_eq!(v, expect);
        // B2F: α1α2(p_u² q_v + p_v² q_u) + (α1+α2) p_G².
        let b2f = fixtures::b2f().graph;
        let v = gen_v(&b2f, &lim()).unwrap();
        let a12 = parse_poly("alpha[e1]*alpha[e2]").unwrap();
        let qu = MPoly::atom(Atom::vweight("u"));
        let qv = MPoly::atom(Atom::vweight("v"));
        let asum = parse_poly("alpha[e1] + alpha[e2]").unwrap();
        let mut expect = MomentumForm::square_of_sum(&["f1".into(), "f2".into()])
            .scale(&(&a12 * &qv));
        expect += &MomentumForm::square_of_sum(&["f3".into()]).scale(&(&a12 * &qu));
        expect +=
            &MomentumForm::square_of_sum(&["f1".into(), "f2".into(), "f3".into()]).scale(&asum);
        assert_eq!(v, expect);
    }

    #[test]
    fn recovery_limits() {
        // ∂𝒰/∂q_v at q=0 equals U for every vertex choice.
        for gf in fixtures::all() {
            let g = &gf.graph;
            let u = symanzik_u(g, Method::Subset, &lim()).unwrap();
            for v in g.vertices() {
                assert_eq!(
                    recover_u(g, &v.id, &lim()).unwrap(),
                    u,
                    "recover_u differs at {} of {}",
                    v.id,
                    gf.name
                );
            }
        }
        // P2: 𝒰 = α q_u q_v + q_u + q_v, so ∂²𝒰/∂q_u∂q_v|₀ = α and
        // recover_v = -α p_u·p_v (the single separating 2-tree is ∅).
        let p2 = fixtures::p2().graph;
        let rv = recover_v(&p2, &lim()).unwrap();
        let mut expect = MomentumForm::zero();
        expect.add_dot("f1".into(), "f2".into(), -MPoly::atom(Atom::alpha("e1")));
        assert_eq!(rv, expect);
        // And recover_v equals the symmetric second Symanzik exactly.
        for gf in fixtures::all() {
            let g = &gf.graph;
            assert_eq!(
                recover_v(g, &lim()).unwrap(),
                symanzik_v(g, VVariant::Symmetric, &lim()).unwrap(),
                "recover_v differs on {}",
                gf.name
            );
        }
    }

    #[test]
    fn w_categorified_bubble_golden() {
        let b2f = fixtures::b2f().graph;
        let w = w_categorified(&b2f, &lim()).unwrap();
        assert_eq!(
            w.to_string(),
            "beta[e1]*beta[e2]*qs[{f1,f2,f3}] + beta[e1]*qs[{f1,f2,f3}] \
             + beta[e2]*qs[{f1,f2,f3}] + qs[{f1,f2}]*qs[{f3}]"
        );
        // Setting q_I = q recovers the multivariate Tutte polynomial.
        for gf in fixtures::all() {
            let g = &gf.graph;
            let w = w_categorified(g, &lim()).unwrap();
            let z = z_multivariate(g, Method::Subset, &lim()).unwrap();
            assert_eq!(
                substitute_qsets(&w, |_| MPoly::atom(Atom::Q)),
                z,
                "W(q_I = q) != Z on {}",
                gf.name
            );
        }
    }

    #[test]
    fn w_contraction_deletion_rule() {
        // 𝒲_G = β_e 𝒲_{G/e} + 𝒲_{G-e} for every edge of every fixture.
        for gf in fixtures::all() {
            let g = &gf.graph;
            let w = w_categorified(g, &lim()).unwrap();
            for e in g.edge_ids() {
                let rhs = &MPoly::atom(Atom::Beta(e.clone()))
                    * &w_categorified(&g.contract(&e).unwrap(), &lim()).unwrap()
                    + w_categorified(&g.delete(&e).unwrap(), &lim()).unwrap();
                assert_eq!(w, rhs, "contraction/deletion fails at {e} of {}", gf.name);
            }
        }
    }

    #[test]
    fn upsilon_values_and_truncation() {
        let b2f = fixtures::b2f().graph;
        let u = upsilon(&b2f, &lim()).unwrap();
        assert_eq!(
            u,
            parse_poly(
                "alpha[e1]*alpha[e2]*wi[f1]*wi[f3] + alpha[e1]*alpha[e2]*wi[f2]*wi[f3] \
                 + alpha[e1]*wi[f1] + alpha[e1]*wi[f2] + alpha[e1]*wi[f3] \
                 + alpha[e2]*wi[f1] + alpha[e2]*wi[f2] + alpha[e2]*wi[f3] \
                 + wi[f1] + wi[f2] + wi[f3]"
            )
            .unwrap()
        );
        // Υ = (Π α) 𝒲(β = 1/α, q_I = Σ q_i) after clearing denominators.
        for gf in fixtures::all() {
            let g = &gf.graph;
            let w = w_categorified(g, &lim()).unwrap();
            let w_sub = substitute_qsets(&w, |s| {
                let mut p = MPoly::zero();
                for f in s {
                    p += MPoly::atom(Atom::Wi(f.clone()));
                }
                p
            });
            let cleared = clear_betas_with_alphas(&w_sub, &g.edge_ids()).unwrap();
            assert_eq!(cleared, upsilon(g, &lim()).unwrap(), "Υ identity on {}", gf.name);
        }
    }

    #[test]
    fn noble_welsh_values() {
        // L1 with flag weight 1: ξ₁ (1 + (y-1)) = ξ₁ y.
        let l1 = fixtures::l1().graph;
        let w = noble_welsh(&l1, &BTreeMap::from([("f1".into(), 1)]), &lim()).unwrap();
        assert_eq!(w, parse_poly("xi[1]*y").unwrap());
        // Edgeless vertex with flag weight 3: ξ₃.
        let mut g = Graph::new();
        g.add_vertex("v", false).unwrap();
        g.add_flag("f1", "v", None).unwrap();
        let w = noble_welsh(&g, &BTreeMap::from([("f1".into(), 3)]), &lim()).unwrap();
        assert_eq!(w, MPoly::atom(Atom::Xi(3)));
        // Zero weight is rejected.
        assert!(noble_welsh(&g, &BTreeMap::from([("f1".into(), 0)]), &lim()).is_err());
    }

    #[test]
    fn noble_welsh_substitution_identity() {
        // (y-1)^V W_G(ξ, y) = 𝒲(β = y-1, q_I = (y-1) ξ_{a_I}).
        for gf in [fixtures::b2f(), fixtures::c3(), fixtures::l1()] {
            let g = &gf.graph;
            let weights: BTreeMap<FlagId, u64> =
                g.flags().iter().map(|f| (f.id.clone(), 1)).collect();
            let w = noble_welsh(g, &weights, &lim()).unwrap();
            let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
            let cat = w_categorified(g, &lim()).unwrap();
            let mut map = BTreeMap::new();
            for a in cat.atoms() {
                match &a {
                    Atom::Beta(_) => {
                        map.insert(a.clone(), ym1.clone());
                    }
                    Atom::QSet(s) => {
                        let total: u64 = s.iter().map(|f| weights[f]).sum();
                        map.insert(a.clone(), &ym1 * &MPoly::atom(Atom::Xi(total)));
                    }
                    _ => {}
                }
            }
            let lhs = &ym1.pow(g.vertex_count() as u32) * &w;
            assert_eq!(lhs, cat.substitute(&map), "Noble-Welsh identity on {}", gf.name);
        }
    }

    #[test]
    fn categorified_diagram_commutes() {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let u_direct = symanzik_u(g, Method::Subset, &lim()).unwrap();
            let w = w_categorified(g, &lim()).unwrap();

            // Path 1: 𝒲 → Υ → 𝒰 → U.
            let w_sub = substitute_qsets(&w, |s| {
                let mut p = MPoly::zero();
                for f in s {
                    p += MPoly::atom(Atom::Wi(f.clone()));
                }
                p
            });
            let upsilon_p = clear_betas_with_alphas(&w_sub, &g.edge_ids()).unwrap();
            let gen_u_p =
                truncate_extremal_degree(&upsilon_p, |a| matches!(a, Atom::Alpha(_)), true);
            let deg1 = selected_degree_part(&gen_u_p, |a| matches!(a, Atom::Wi(_)), 1);
            let mut wi_sum = MPoly::zero();
            for f in g.flag_ids() {
                wi_sum += MPoly::atom(Atom::Wi(f));
            }
            let u_path1 = deg1.div_exact(&wi_sum).unwrap();

            // Path 2: 𝒲 → Z → F → U.
            let z = substitute_qsets(&w, |_| MPoly::atom(Atom::Q));
            let f_poly = truncate_extremal_degree(&z, |a| matches!(a, Atom::Beta(_)), false);
            let q1 = f_poly.extract(&Atom::Q, 1);
            let u_path2 = clear_betas_with_alphas(&q1, &g.edge_ids()).unwrap();

            assert_eq!(u_path1, u_direct, "path 𝒲→Υ→𝒰→U fails on {}", gf.name);
            assert_eq!(u_path2, u_direct, "path 𝒲→Z→F→U fails on {}", gf.name);
        }
    }
}

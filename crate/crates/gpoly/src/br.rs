//! Bollobás-Riordan polynomials on ribbon graphs, their multivariate
//! version, and the flagged boundary polynomial Ξ with its duality.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::classical::mask_subset;
use crate::graph::{EdgeId, EdgeKind, Limits};
use crate::poly::{Atom, MPoly};
use crate::ribbon::RibbonGraph;
use crate::{Error, Result};

/// Computation route for [`br`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrMethod {
    Subset,
    DelContr,
}

/// `R_G(x,y,z) = Σ_H (x-1)^{r(G)-r(H)} y^{n(H)} z^{k(H)-bc(H)+n(H)}`.
///
/// The `z`-exponent is `2g(H)`, a nonnegative even integer for every subset.
/// The deletion/contraction route recurses on regular edges, contracts
/// bridges with a factor `x`, and evaluates terminal unions of rosettes by
/// subset expansion (`R_rosette(y, z) = Σ_H y^{|H|} z^{2g(H)}`).
pub fn br(g: &RibbonGraph, method: BrMethod, limits: &Limits) -> Result<MPoly> {
    match method {
        BrMethod::Subset => {
            limits.check(g.graph().edge_count())?;
            let (_, r_full, _) = g.graph().metrics();
            let xm1 = &MPoly::atom(Atom::X) - &MPoly::one();
            let ids = g.graph().edge_ids();
            let total = 1u64 << ids.len();
            Ok((0..total)
                .into_par_iter()
                .map(|mask| {
                    let h = mask_subset(&ids, mask);
                    let (k, r, n) = g.graph().subset_metrics(&h);
                    let bc = g.subset_boundary_count(&h);
                    let genus2 = (k + n) as i64 - bc as i64;
                    debug_assert!(genus2 >= 0 && genus2 % 2 == 0);
                    &(&xm1.pow((r_full - r) as u32) * &MPoly::atom_pow(Atom::Y, n as u32))
                        * &MPoly::atom_pow(Atom::Z, genus2 as u32)
                })
                .reduce(MPoly::zero, |a, b| a + b))
        }
        BrMethod::DelContr => {
            let mut memo = HashMap::new();
            br_rec(g, limits, &mut memo)
        }
    }
}

fn ribbon_key(g: &RibbonGraph) -> String {
    let mut key = g.graph().canonical_key(|_| String::new());
    for v in g.graph().vertices() {
        key.push_str(&format!("r{}:", v.id));
        for s in g.rotation(&v.id) {
            key.push_str(&format!("{s},"));
        }
        key.push(';');
    }
    key
}

fn br_rec(
    g: &RibbonGraph,
    limits: &Limits,
    memo: &mut HashMap<String, MPoly>,
) -> Result<MPoly> {
    let key = ribbon_key(g);
    if let Some(p) = memo.get(&key) {
        return Ok(p.clone());
    }
    let mut regular = None;
    let mut bridge = None;
    for e in g.graph().edge_ids() {
        match g.graph().classify(&e)? {
            EdgeKind::Regular => {
                regular = Some(e);
                break;
            }
            EdgeKind::Bridge if bridge.is_none() => bridge = Some(e),
            _ => {}
        }
    }
    let result = if let Some(e) = regular {
        br_rec(&g.rcontract(&e)?, limits, memo)? + br_rec(&g.rdelete(&e)?, limits, memo)?
    } else if let Some(e) = bridge {
        &MPoly::atom(Atom::X) * &br_rec(&g.rcontract(&e)?, limits, memo)?
    } else {
        // Disjoint rosettes and bare vertices; the subset formula
        // factorizes over components, so evaluate the whole thing at once.
        limits.check(g.graph().edge_count())?;
        let ids = g.graph().edge_ids();
        let mut p = MPoly::zero();
        for mask in 0u64..(1u64 << ids.len()) {
            let h = mask_subset(&ids, mask);
            let (k, _, n) = g.graph().subset_metrics(&h);
            let bc = g.subset_boundary_count(&h);
            let genus2 = (k + n) as i64 - bc as i64;
            p += &MPoly::atom_pow(Atom::Y, h.len() as u32)
                * &MPoly::atom_pow(Atom::Z, genus2 as u32);
        }
        p
    };
    memo.insert(key, result.clone());
    Ok(result)
}

/// Multivariate Bollobás-Riordan polynomial
/// `Z_G(x, β, z) = Σ_H x^{k(H)} (Π_{e∈H} β_e) z^{bc(H)}`.
pub fn br_multivariate(g: &RibbonGraph, limits: &Limits) -> Result<MPoly> {
    limits.check(g.graph().edge_count())?;
    let ids = g.graph().edge_ids();
    let total = 1u64 << ids.len();
    Ok((0..total)
        .into_par_iter()
        .map(|mask| {
            let h = mask_subset(&ids, mask);
            let (k, _, _) = g.graph().subset_metrics(&h);
            let bc = g.subset_boundary_count(&h);
            let mut term = &MPoly::atom_pow(Atom::X, k as u32)
                * &MPoly::atom_pow(Atom::Z, bc as u32);
            for e in &h {
                term = &term * &MPoly::atom(Atom::Beta(e.clone()));
            }
            term
        })
        .reduce(MPoly::zero, |a, b| a + b))
}

/// The flagged boundary polynomial of a ribbon graph with flags:
/// `Ξ_G(α, β, w) = Σ_A Π_{e∉A} α_e Π_{e∈A} β_e Π_boundaries w_{I_n}`,
/// `I_n` the canonical cyclic flag sequence of each boundary (flagless
/// boundaries contribute the empty atom `ws[()]`).
pub fn xi(g: &RibbonGraph, limits: &Limits) -> Result<MPoly> {
    limits.check(g.graph().edge_count())?;
    let ids = g.graph().edge_ids();
    let all: BTreeSet<EdgeId> = ids.iter().cloned().collect();
    let total = 1u64 << ids.len();
    Ok((0..total)
        .into_par_iter()
        .map(|mask| {
            let h = mask_subset(&ids, mask);
            let mut term = MPoly::one();
            for e in &all {
                if h.contains(e) {
                    term = &term * &MPoly::atom(Atom::Beta(e.clone()));
                } else {
                    term = &term * &MPoly::atom(Atom::Alpha(e.clone()));
                }
            }
            for b in g.restrict_edges(&h).boundaries() {
                term = &term * &MPoly::atom(Atom::wset(b.flags()));
            }
            term
        })
        .reduce(MPoly::zero, |a, b| a + b))
}

/// Verifies the duality `Ξ_G(α, β, w) = Ξ_{G*}(β, α, w)` exactly.
pub fn xi_duality(g: &RibbonGraph, limits: &Limits) -> Result<bool> {
    if !g.graph().is_connected() {
        return Err(Error::Disconnected("Ξ duality"));
    }
    let lhs = xi(g, limits)?;
    let dual = g.dual()?;
    let rhs = xi(&dual, limits)?;
    // Swap α_e <-> β_e in the dual polynomial (edge ids are preserved).
    let mut map = std::collections::BTreeMap::new();
    for a in rhs.atoms() {
        match &a {
            Atom::Alpha(e) => {
                map.insert(a.clone(), MPoly::atom(Atom::Beta(e.clone())));
            }
            Atom::Beta(e) => {
                map.insert(a.clone(), MPoly::atom(Atom::Alpha(e.clone())));
            }
            _ => {}
        }
    }
    Ok(lhs == rhs.substitute(&map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{tutte, Method};
    use crate::fixtures;
    use crate::poly::parse_poly;
    use std::collections::BTreeMap;

    fn lim() -> Limits {
        Limits::default()
    }

    fn both(g: &RibbonGraph) -> MPoly {
        let s = br(g, BrMethod::Subset, &lim()).unwrap();
        let d = br(g, BrMethod::DelContr, &lim()).unwrap();
        assert_eq!(s, d, "BR subset and deletion/contraction must agree");
        s
    }

    #[test]
    fn br_fixture_values() {
        let l1 = fixtures::l1().ribbon.unwrap();
        assert_eq!(both(&l1), parse_poly("y + 1").unwrap());
        let x2 = fixtures::x2().ribbon.unwrap();
        assert_eq!(both(&x2), parse_poly("y^2*z^2 + 2*y + 1").unwrap());
    }

    #[test]
    fn br_reduces_to_tutte_at_z_one() {
        // With the subset definition in base (x-1), the Tutte polynomial of
        // the underlying graph is recovered by shifting only y:
        // T_Ḡ(x, y) = R_G(x, y-1, 1). Check it on every ribbon fixture.
        for gf in fixtures::ribbons() {
            let r = both(gf.ribbon.as_ref().unwrap());
            let t = tutte(&gf.graph, Method::Subset, &lim()).unwrap();
            let mut map = BTreeMap::new();
            map.insert(Atom::Y, &MPoly::atom(Atom::Y) - &MPoly::one());
            map.insert(Atom::Z, MPoly::one());
            assert_eq!(r.substitute(&map), t, "BR/Tutte fails on {}", gf.name);
        }
    }

    #[test]
    fn planar_br_has_no_z() {
        // For planar ribbon graphs the z-variable never appears.
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            if rib.genus().unwrap() != 0 {
                continue;
            }
            let r = both(rib);
            assert_eq!(r.degree_in(&Atom::Z), 0, "planar z-dependence in {}", gf.name);
        }
    }

    #[test]
    fn br_multivariate_values() {
        // Bare vertex: x z.
        let mut g = crate::graph::Graph::new();
        g.add_vertex("v", false).unwrap();
        let rib = RibbonGraph::new(g, BTreeMap::new()).unwrap();
        assert_eq!(
            br_multivariate(&rib, &lim()).unwrap(),
            parse_poly("x*z").unwrap()
        );
        // L1 (ignoring its flag): subsets give x z + β x z².
        let l1 = fixtures::l1().ribbon.unwrap();
        assert_eq!(
            br_multivariate(&l1, &lim()).unwrap(),
            parse_poly("beta[e1]*x*z^2 + x*z").unwrap()
        );
    }

    #[test]
    fn br_multivariate_delcontr_identity() {
        // Z_G = β_e Z_{G/e} + Z_{G-e} for semi-regular edges.
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let z = br_multivariate(rib, &lim()).unwrap();
            for e in rib.graph().edge_ids() {
                if !rib.graph().classify(&e).unwrap().is_semi_regular() {
                    continue;
                }
                let rhs = &MPoly::atom(Atom::Beta(e.clone()))
                    * &br_multivariate(&rib.rcontract(&e).unwrap(), &lim()).unwrap()
                    + br_multivariate(&rib.rdelete(&e).unwrap(), &lim()).unwrap();
                assert_eq!(z, rhs, "multivariate BR rule fails at {e} of {}", gf.name);
            }
        }
    }

    #[test]
    fn genus_exponent_consistency() {
        // k(H) - bc(H) + n(H) = 2 g(H) on every subset of every fixture.
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ids = rib.graph().edge_ids();
            for mask in 0u64..(1 << ids.len()) {
                let h = mask_subset(&ids, mask);
                let (k, _, n) = rib.graph().subset_metrics(&h);
                let sub = rib.restrict_edges(&h);
                let bc = sub.boundary_count();
                let g2 = (k + n) as i64 - bc as i64;
                assert_eq!(g2, 2 * sub.genus().unwrap(), "subset {h:?} of {}", gf.name);
            }
        }
    }

    #[test]
    fn xi_examples() {
        // Bare vertex with flags (f1, f2): the single term w_(f1,f2).
        let mut g = crate::graph::Graph::new();
        g.add_vertex("v", false).unwrap();
        g.add_flag("f1", "v", None).unwrap();
        g.add_flag("f2", "v", None).unwrap();
        let rot = BTreeMap::from([(
            "v".into(),
            vec![
                crate::ribbon::Slot::Flag("f1".into()),
                crate::ribbon::Slot::Flag("f2".into()),
            ],
        )]);
        let rib = RibbonGraph::new(g, rot).unwrap();
        assert_eq!(
            xi(&rib, &lim()).unwrap(),
            MPoly::atom(Atom::wset(["f1", "f2"]))
        );
        // B2F, A = ∅ term: α1 α2 w_(f1,f2) w_(f3).
        let b2f = fixtures::b2f().ribbon.unwrap();
        let p = xi(&b2f, &lim()).unwrap();
        let empty_term = p
            .iter()
            .find(|(m, _)| {
                m.exponent(&Atom::alpha("e1")) == 1 && m.exponent(&Atom::alpha("e2")) == 1
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let expect = crate::poly::Monomial::from_pairs([
            (Atom::alpha("e1"), 1),
            (Atom::alpha("e2"), 1),
            (Atom::wset(["f1", "f2"]), 1),
            (Atom::wset(["f3"]), 1),
        ]);
        assert_eq!(empty_term.0, expect);
    }

    #[test]
    fn xi_semiregular_rule() {
        // Ξ_G = α_e Ξ_{G-e} + β_e Ξ_{G/e} for semi-regular e.
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let p = xi(rib, &lim()).unwrap();
            for e in rib.graph().edge_ids() {
                if !rib.graph().classify(&e).unwrap().is_semi_regular() {
                    continue;
                }
                let rhs = &MPoly::atom(Atom::Alpha(e.clone()))
                    * &xi(&rib.rdelete(&e).unwrap(), &lim()).unwrap()
                    + &MPoly::atom(Atom::Beta(e.clone()))
                        * &xi(&rib.rcontract(&e).unwrap(), &lim()).unwrap();
                assert_eq!(p, rhs, "Ξ rule fails at {e} of {}", gf.name);
            }
        }
    }

    #[test]
    fn xi_duality_on_fixtures() {
        for gf in fixtures::ribbons() {
            assert!(
                xi_duality(gf.ribbon.as_ref().unwrap(), &lim()).unwrap(),
                "Ξ duality fails on {}",
                gf.name
            );
        }
    }
}

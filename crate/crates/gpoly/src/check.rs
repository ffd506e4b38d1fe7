//! The cross-method identity suites behind `gpoly check`.
//!
//! Each suite runs named identities over the shipped fixtures plus seeded
//! random graphs and reports one pass/fail line per identity. Every check is
//! exact: there are no tolerances anywhere.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::{self, Method, VVariant};
use crate::graph::Limits;
use crate::matrix;
use crate::nc::{self, MoyalContext, UMethod, XMethod, YMethod};
use crate::poly::{Atom, MPoly};
use crate::random::{self, GraphGen};
use crate::{br, fixtures, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Classical,
    Matrix,
    Br,
    Nc,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "classical" => Ok(Suite::Classical),
            "matrix" => Ok(Suite::Matrix),
            "br" => Ok(Suite::Br),
            "nc" => Ok(Suite::Nc),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    /// Edge bound for the generated random graphs.
    pub max_edges: usize,
    pub random_graphs: usize,
    pub random_ribbons: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            max_edges: 7,
            random_graphs: 100,
            random_ribbons: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub items: Vec<(String, bool)>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.items.iter().all(|(_, p)| *p)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, pass) in &self.items {
            writeln!(f, "{} {}", if *pass { "PASS" } else { "FAIL" }, name)?;
        }
        let failed = self.items.iter().filter(|(_, p)| !p).count();
        write!(
            f,
            "{} checks, {} failed",
            self.items.len(),
            failed
        )
    }
}

struct Runner {
    items: Vec<(String, bool)>,
}

impl Runner {
    fn new() -> Self {
        Runner { items: Vec::new() }
    }

    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<bool>) {
        let pass = match f() {
            Ok(p) => p,
            Err(e) => {
                self.items.push((format!("{name} (error: {e})"), false));
                return;
            }
        };
        self.items.push((name.to_string(), pass));
    }
}

/// Runs a suite and collects its report.
pub fn run(suite: Suite, cfg: &CheckConfig) -> Report {
    let mut r = Runner::new();
    match suite {
        Suite::Classical => classical_suite(&mut r, cfg),
        Suite::Matrix => matrix_suite(&mut r, cfg),
        Suite::Br => br_suite(&mut r, cfg),
        Suite::Nc => nc_suite(&mut r, cfg),
        Suite::All => {
            classical_suite(&mut r, cfg);
            matrix_suite(&mut r, cfg);
            br_suite(&mut r, cfg);
            nc_suite(&mut r, cfg);
        }
    }
    Report { items: r.items }
}

fn lim() -> Limits {
    Limits::default()
}

fn gen_cfg(cfg: &CheckConfig) -> GraphGen {
    GraphGen {
        max_edges: cfg.max_edges,
        ..GraphGen::default()
    }
}

fn classical_suite(r: &mut Runner, cfg: &CheckConfig) {
    r.check("classical: subset = delcontr (tutte, Z, gen-u) on fixtures", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            if classical::tutte(g, Method::Subset, &lim())?
                != classical::tutte(g, Method::DelContr, &lim())?
                || classical::z_multivariate(g, Method::Subset, &lim())?
                    != classical::z_multivariate(g, Method::DelContr, &lim())?
                || classical::gen_u(g, Method::Subset, &lim())?
                    != classical::gen_u(g, Method::DelContr, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("classical: subset = delcontr on seeded random graphs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.random_graphs {
            let g = random::random_graph(&mut rng, &gen_cfg(cfg));
            if classical::tutte(&g, Method::Subset, &lim())?
                != classical::tutte(&g, Method::DelContr, &lim())?
                || classical::z_multivariate(&g, Method::Subset, &lim())?
                    != classical::z_multivariate(&g, Method::DelContr, &lim())?
                || classical::gen_u(&g, Method::Subset, &lim())?
                    != classical::gen_u(&g, Method::DelContr, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("classical: delcontr independent of elimination order", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0dd);
        for gf in fixtures::all() {
            let g = &gf.graph;
            let t = classical::tutte(g, Method::DelContr, &lim())?;
            let u = classical::symanzik_u(g, Method::DelContr, &lim())?;
            for _ in 0..10 {
                let mut order = g.edge_ids();
                order.shuffle(&mut rng);
                if classical::tutte_with_order(g, Method::DelContr, &lim(), Some(&order))? != t
                    || classical::symanzik_u_with_order(
                        g,
                        Method::DelContr,
                        &lim(),
                        Some(&order),
                    )? != u
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("classical: q^-V Z at β=y-1, q=(x-1)(y-1) matches Tutte", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let z = classical::z_multivariate(g, Method::Subset, &lim())?;
            let t = classical::tutte(g, Method::Subset, &lim())?;
            let xm1 = &MPoly::atom(Atom::X) - &MPoly::one();
            let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
            let mut map = BTreeMap::new();
            map.insert(Atom::Q, &xm1 * &ym1);
            for e in g.edge_ids() {
                map.insert(Atom::Beta(e), ym1.clone());
            }
            let lhs = z.substitute(&map);
            let rhs = &(&xm1.pow(g.component_count() as u32)
                * &ym1.pow(g.vertex_count() as u32))
                * &t;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("classical: recover_u = U for every vertex choice", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let u = classical::symanzik_u(g, Method::Subset, &lim())?;
            for v in g.vertices() {
                if classical::recover_u(g, &v.id, &lim())? != u {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("classical: recover_v = symmetric V (and = conserved V reduced)", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let rv = classical::recover_v(g, &lim())?;
            let sym = classical::symanzik_v(g, VVariant::Symmetric, &lim())?;
            if rv != sym {
                return Ok(false);
            }
            if sym.conservation_reduce(&g.flag_ids())
                != classical::symanzik_v(g, VVariant::Conserved, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("classical: 𝒲 obeys contraction/deletion on every edge", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let w = classical::w_categorified(g, &lim())?;
            for e in g.edge_ids() {
                let rhs = &MPoly::atom(Atom::Beta(e.clone()))
                    * &classical::w_categorified(&g.contract(&e)?, &lim())?
                    + classical::w_categorified(&g.delete(&e)?, &lim())?;
                if w != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("classical: 𝒲(q_I = q) = Z", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let w = classical::w_categorified(g, &lim())?;
            if classical::substitute_qsets(&w, |_| MPoly::atom(Atom::Q))
                != classical::z_multivariate(g, Method::Subset, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("classical: both 𝒲→U substitution paths give U", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let u = classical::symanzik_u(g, Method::Subset, &lim())?;
            let w = classical::w_categorified(g, &lim())?;
            // 𝒲 → Υ → 𝒰 → U.
            let w_sub = classical::substitute_qsets(&w, |s| {
                let mut p = MPoly::zero();
                for f in s {
                    p += MPoly::atom(Atom::Wi(f.clone()));
                }
                p
            });
            let upsilon = classical::clear_betas_with_alphas(&w_sub, &g.edge_ids())?;
            let gen_u =
                classical::truncate_extremal_degree(&upsilon, |a| matches!(a, Atom::Alpha(_)), true);
            let deg1 =
                classical::selected_degree_part(&gen_u, |a| matches!(a, Atom::Wi(_)), 1);
            let mut wi_sum = MPoly::zero();
            for f in g.flag_ids() {
                wi_sum += MPoly::atom(Atom::Wi(f));
            }
            let path1 = deg1.div_exact(&wi_sum)?;
            // 𝒲 → Z → F → U.
            let z = classical::substitute_qsets(&w, |_| MPoly::atom(Atom::Q));
            let f_poly =
                classical::truncate_extremal_degree(&z, |a| matches!(a, Atom::Beta(_)), false);
            let path2 =
                classical::clear_betas_with_alphas(&f_poly.extract(&Atom::Q, 1), &g.edge_ids())?;
            if path1 != u || path2 != u {
                return Ok(false);
            }
        }
        Ok(true)
    });
}

fn matrix_suite(r: &mut Runner, cfg: &CheckConfig) {
    r.check("matrix: det(Q) = 𝒰 on fixtures and random graphs", || {
        for gf in fixtures::all() {
            if matrix::gen_u_via_det(&gf.graph)?
                != classical::gen_u(&gf.graph, Method::Subset, &lim())?
            {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa1);
        for _ in 0..cfg.random_graphs {
            let g = random::random_graph(&mut rng, &gen_cfg(cfg));
            if matrix::gen_u_via_det(&g)? != classical::gen_u(&g, Method::Subset, &lim())? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("matrix: adjugate route = 𝒱 on fixtures and random graphs", || {
        for gf in fixtures::all() {
            if matrix::gen_v_via_adjugate(&gf.graph)?
                != classical::gen_v(&gf.graph, &lim())?
            {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa2);
        for _ in 0..cfg.random_graphs {
            let g = random::random_graph(&mut rng, &gen_cfg(cfg));
            if matrix::gen_v_via_adjugate(&g)? != classical::gen_v(&g, &lim())? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("matrix: tree-matrix minor = U for every root", || {
        for gf in fixtures::all() {
            let g = &gf.graph;
            let u = classical::symanzik_u(g, Method::Subset, &lim())?;
            for v in g.vertices() {
                if matrix::tree_matrix_minor(g, &v.id)? != u {
                    return Ok(false);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa3);
        for _ in 0..cfg.random_graphs.min(30) {
            let g = random::random_graph(&mut rng, &gen_cfg(cfg));
            let u = classical::symanzik_u(&g, Method::Subset, &lim())?;
            for v in g.vertices() {
                if matrix::tree_matrix_minor(&g, &v.id)? != u {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("matrix: (Π α) det H = 𝒰 (Schrödinger identity)", || {
        for gf in fixtures::all() {
            if !matrix::schrodinger_check(&gf.graph, &lim())?.1 {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa4);
        for _ in 0..cfg.random_graphs.min(30) {
            let g = random::random_graph(&mut rng, &gen_cfg(cfg));
            if !matrix::schrodinger_check(&g, &lim())?.1 {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("matrix: det A = Pf(A)² on random antisymmetric matrices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5);
        for _ in 0..50 {
            let m = random::random_antisymmetric(&mut rng, 6);
            let pf = m.pfaffian()?;
            if m.determinant()? != &pf * &pf {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("matrix: Q adj(Q) = det(Q) I on random symbolic matrices", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa6);
        for _ in 0..20 {
            let mut m = matrix::SymMatrix::zero(4);
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] = random::random_small_poly(&mut rng);
                }
            }
            let det = m.determinant()?;
            let adj = m.adjugate()?;
            let prod = m.mul(&adj);
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { det.clone() } else { MPoly::zero() };
                    if prod[(i, j)] != expect {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    });
}

fn br_suite(r: &mut Runner, cfg: &CheckConfig) {
    r.check("br: subset = delcontr on fixtures and random ribbon graphs", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            if br::br(rib, br::BrMethod::Subset, &lim())?
                != br::br(rib, br::BrMethod::DelContr, &lim())?
            {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb1);
        for _ in 0..cfg.random_ribbons * 2 {
            let rib = random::random_ribbon(&mut rng, &gen_cfg(cfg));
            if br::br(&rib, br::BrMethod::Subset, &lim())?
                != br::br(&rib, br::BrMethod::DelContr, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("br: R(x, y-1, 1) = Tutte of the underlying graph", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let rp = br::br(rib, br::BrMethod::Subset, &lim())?;
            let t = classical::tutte(&gf.graph, Method::Subset, &lim())?;
            let mut map = BTreeMap::new();
            map.insert(Atom::Y, &MPoly::atom(Atom::Y) - &MPoly::one());
            map.insert(Atom::Z, MPoly::one());
            if rp.substitute(&map) != t {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("br: planar ribbon graphs have z-free R", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb2);
        let mut seen = 0;
        while seen < 20 {
            let rib = random::random_ribbon(&mut rng, &gen_cfg(cfg));
            if rib.genus()? != 0 {
                continue;
            }
            seen += 1;
            if br::br(&rib, br::BrMethod::Subset, &lim())?.degree_in(&Atom::Z) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("br: k - bc + n = 2g on every subset", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ids = rib.graph().edge_ids();
            for mask in 0u64..(1 << ids.len()) {
                let h = crate::classical::mask_subset(&ids, mask);
                let (k, _, n) = rib.graph().subset_metrics(&h);
                let sub = rib.restrict_edges(&h);
                if (k + n) as i64 - sub.boundary_count() as i64 != 2 * sub.genus()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("br: Ξ duality on fixtures and random connected ribbon graphs", || {
        for gf in fixtures::ribbons() {
            if !br::xi_duality(gf.ribbon.as_ref().unwrap(), &lim())? {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb3);
        let small = GraphGen {
            max_edges: cfg.max_edges.min(6),
            ..gen_cfg(cfg)
        };
        for _ in 0..cfg.random_ribbons {
            let rib = random::random_ribbon(&mut rng, &small);
            if !br::xi_duality(&rib, &lim())? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("br: Ξ semi-regular contraction/deletion rule", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let p = br::xi(rib, &lim())?;
            for e in rib.graph().edge_ids() {
                if !rib.graph().classify(&e)?.is_semi_regular() {
                    continue;
                }
                let rhs = &MPoly::atom(Atom::Alpha(e.clone()))
                    * &br::xi(&rib.rdelete(&e)?, &lim())?
                    + &MPoly::atom(Atom::Beta(e.clone()))
                        * &br::xi(&rib.rcontract(&e)?, &lim())?;
                if p != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("br: Euler relation and contraction invariants hold everywhere", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb4);
        for _ in 0..cfg.random_ribbons {
            let rib = random::random_ribbon(&mut rng, &gen_cfg(cfg));
            rib.genus()?; // errors if the Euler value is non-integral
            let bc = rib.boundary_count();
            for e in rib.graph().edge_ids() {
                if rib.graph().classify(&e)?.is_semi_regular() {
                    let c = rib.rcontract(&e)?;
                    c.genus()?;
                    if c.boundary_count() != bc {
                        return Ok(false);
                    }
                }
                rib.rdelete(&e)?.genus()?;
            }
        }
        Ok(true)
    });
    r.check("br: double contraction drops g by one and keeps bc", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb5);
        let mut done = 0;
        while done < cfg.random_ribbons {
            let rose = random::random_rosette(&mut rng, 6);
            if rose.genus()? == 0 {
                continue;
            }
            done += 1;
            let Some((e1, e2)) = rose.nice_crossing()? else {
                return Ok(false);
            };
            let after = rose.double_contract(&e1, &e2)?;
            if after.genus()? != rose.genus()? - 1
                || after.boundary_count() != rose.boundary_count()
                || after.graph().edge_count() != rose.graph().edge_count() - 2
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
}

fn nc_suite(r: &mut Runner, cfg: &CheckConfig) {
    r.check("nc: U* star-tree = matrix = br-limit on fixtures", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ctx = MoyalContext::new(rib)?;
            let a = nc::nc_u(&ctx, UMethod::StarTree, &lim())?;
            if a != nc::nc_u(&ctx, UMethod::Matrix, &lim())?
                || a != nc::nc_u(&ctx, UMethod::BrLimit, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: U* three-way agreement on random ribbon graphs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc1);
        for _ in 0..cfg.random_ribbons {
            let rib = random::random_ribbon(&mut rng, &gen_cfg(cfg));
            let ctx = MoyalContext::new(&rib)?;
            let a = nc::nc_u(&ctx, UMethod::StarTree, &lim())?;
            if a != nc::nc_u(&ctx, UMethod::Matrix, &lim())?
                || a != nc::nc_u(&ctx, UMethod::BrLimit, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: U* matrix route agrees across root choices", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let base = nc::nc_u(&MoyalContext::new(rib)?, UMethod::StarTree, &lim())?;
            for v in rib.graph().vertices() {
                let ctx = MoyalContext::with_root(rib, v.id.clone())?;
                if nc::nc_u(&ctx, UMethod::Matrix, &lim())? != base {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    r.check("nc: θ-degrees even; θ⁰ limits are the commutative polynomials", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ctx = MoyalContext::new(rib)?;
            let u = nc::nc_u(&ctx, UMethod::StarTree, &lim())?;
            for (m, _) in u.iter() {
                if m.exponent(&Atom::Theta) % 2 != 0 {
                    return Ok(false);
                }
            }
            if u.extract(&Atom::Theta, 0)
                != classical::symanzik_u(rib.graph(), Method::Subset, &lim())?
            {
                return Ok(false);
            }
            let x = nc::nc_x(&ctx, XMethod::TwoStarTree, &lim())?;
            let x0 = x.map_coeffs(|c| Ok(c.extract(&Atom::Theta, 0)))?;
            if x0 != classical::symanzik_v(rib.graph(), VVariant::Conserved, &lim())? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: 𝒳* and 𝒴* method agreement after conservation", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ctx = MoyalContext::new(rib)?;
            if nc::nc_x(&ctx, XMethod::TwoStarTree, &lim())?
                != nc::nc_x(&ctx, XMethod::Matrix, &lim())?
            {
                return Ok(false);
            }
            if nc::nc_y(&ctx, YMethod::StarTree, &lim())?
                != nc::nc_y(&ctx, YMethod::Matrix, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: 𝒴* unchanged when every rotation starts one slot later", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let base = nc::nc_y(&MoyalContext::new(rib)?, YMethod::StarTree, &lim())?;
            let mut rotated = rib.clone();
            for v in rib.graph().vertices() {
                let slots = rib.rotation(&v.id);
                if slots.len() < 2 {
                    continue;
                }
                let mut turned = slots[1..].to_vec();
                turned.push(slots[0].clone());
                rotated = rotated.with_rotation(&v.id, turned)?;
            }
            if nc::nc_y(&MoyalContext::new(&rotated)?, YMethod::StarTree, &lim())? != base {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: det(D+A) deletion/contraction identity", || {
        for gf in fixtures::ribbons() {
            if !nc::nc_delcontr_check(gf.ribbon.as_ref().unwrap())? {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc2);
        for _ in 0..cfg.random_ribbons.min(25) {
            let rib = random::random_ribbon(&mut rng, &gen_cfg(cfg));
            if !nc::nc_delcontr_check(&rib)? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: rosette factor law reproduces U*", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc3);
        let mut done = 0;
        while done < cfg.random_ribbons {
            let rose = random::random_rosette(&mut rng, 6);
            done += 1;
            let ctx = MoyalContext::new(&rose)?;
            if nc::rosette_u_by_factor_law(&rose)?
                != nc::nc_u(&ctx, UMethod::StarTree, &lim())?
            {
                return Ok(false);
            }
        }
        Ok(true)
    });
    r.check("nc: Ξ expansion reproduces U*, 𝒳*, 𝒴*", || {
        for gf in fixtures::ribbons() {
            let rib = gf.ribbon.as_ref().unwrap();
            let ctx = MoyalContext::new(rib)?;
            let report = nc::xi_expansion_check(&ctx, &lim())?;
            if !(report.u_ok && report.x_ok && report.y_ok) {
                return Ok(false);
            }
        }
        Ok(true)
    });
}

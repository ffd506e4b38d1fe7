use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use super::{rat, MPoly};
use crate::graph::FlagId;

/// A bilinear expression in the formal flag momenta.
///
/// Three kinds of momentum atoms occur: squares `p_f·p_f`, symmetric dots
/// `p_f·p_g` (stored once per unordered pair, `f < g`) and antisymmetric
/// wedges `p_f∧p_g` (stored for `f < g` only; swapping negates, so the
/// antisymmetry is structural). Coefficients are [`MPoly`]s.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MomentumForm {
    square: BTreeMap<FlagId, MPoly>,
    dot: BTreeMap<(FlagId, FlagId), MPoly>,
    wedge: BTreeMap<(FlagId, FlagId), MPoly>,
}

impl MomentumForm {
    pub fn zero() -> Self {
        MomentumForm::default()
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_empty() && self.dot.is_empty() && self.wedge.is_empty()
    }

    /// Adds `c · p_f·p_g`; `f == g` lands in the square part.
    pub fn add_dot(&mut self, f: FlagId, g: FlagId, c: MPoly) {
        if c.is_zero() {
            return;
        }
        if f == g {
            insert(&mut self.square, f, c);
        } else {
            let key = if f < g { (f, g) } else { (g, f) };
            insert(&mut self.dot, key, c);
        }
    }

    /// Adds `c · p_f∧p_g`, normalizing the order (`p_g∧p_f = -p_f∧p_g`).
    pub fn add_wedge(&mut self, f: FlagId, g: FlagId, c: MPoly) {
        if c.is_zero() || f == g {
            return;
        }
        if f < g {
            insert(&mut self.wedge, (f, g), c);
        } else {
            insert(&mut self.wedge, (g, f), -c);
        }
    }

    pub fn scale(&self, c: &MPoly) -> MomentumForm {
        if c.is_zero() {
            return MomentumForm::zero();
        }
        let mut out = MomentumForm::zero();
        for (f, p) in &self.square {
            insert(&mut out.square, f.clone(), p * c);
        }
        for (k, p) in &self.dot {
            insert(&mut out.dot, k.clone(), p * c);
        }
        for (k, p) in &self.wedge {
            insert(&mut out.wedge, k.clone(), p * c);
        }
        out
    }

    /// `(Σ_{f∈flags} p_f)²`, expanded into squares and dots.
    pub fn square_of_sum(flags: &[FlagId]) -> MomentumForm {
        let mut out = MomentumForm::zero();
        for (i, f) in flags.iter().enumerate() {
            out.add_dot(f.clone(), f.clone(), MPoly::one());
            for g in &flags[i + 1..] {
                out.add_dot(f.clone(), g.clone(), MPoly::int(2));
            }
        }
        out
    }

    /// The Moyal vertex phase of a cyclic flag sequence, `½ Σ_{i<j} p_i∧p_j`
    /// with `i, j` positions in the given linearization.
    pub fn cyclic_phase(cycle: &[FlagId]) -> MomentumForm {
        let half = MPoly::constant(rat(1, 2));
        let mut out = MomentumForm::zero();
        for i in 0..cycle.len() {
            for j in i + 1..cycle.len() {
                out.add_wedge(cycle[i].clone(), cycle[j].clone(), half.clone());
            }
        }
        out
    }

    /// Substitutes `p_last = -Σ_{f≠last} p_f` where `last` is the largest id
    /// in `all_flags` (the graph's full flag set).
    pub fn conservation_reduce(&self, all_flags: &[FlagId]) -> MomentumForm {
        let Some(last) = all_flags.iter().max().cloned() else {
            return self.clone();
        };
        let rest: Vec<FlagId> = all_flags
            .iter()
            .filter(|f| **f != last)
            .cloned()
            .collect();
        let mut out = MomentumForm::zero();
        for (f, c) in &self.square {
            if *f == last {
                // (Σ rest)^2
                for (i, a) in rest.iter().enumerate() {
                    out.add_dot(a.clone(), a.clone(), c.clone());
                    for b in &rest[i + 1..] {
                        out.add_dot(a.clone(), b.clone(), c.scale(&rat(2, 1)));
                    }
                }
            } else {
                out.add_dot(f.clone(), f.clone(), c.clone());
            }
        }
        for ((f, g), c) in &self.dot {
            if *g == last {
                for b in &rest {
                    out.add_dot(f.clone(), b.clone(), -c.clone());
                }
            } else {
                out.add_dot(f.clone(), g.clone(), c.clone());
            }
        }
        for ((f, g), c) in &self.wedge {
            if *g == last {
                for b in &rest {
                    if *b != *f {
                        out.add_wedge(f.clone(), b.clone(), -c.clone());
                    }
                }
            } else {
                out.add_wedge(f.clone(), g.clone(), c.clone());
            }
        }
        out
    }

    /// Symmetric (square + dot) part only.
    pub fn symmetric_part(&self) -> MomentumForm {
        MomentumForm {
            square: self.square.clone(),
            dot: self.dot.clone(),
            wedge: BTreeMap::new(),
        }
    }

    /// Antisymmetric (wedge) part only.
    pub fn wedge_part(&self) -> MomentumForm {
        MomentumForm {
            square: BTreeMap::new(),
            dot: BTreeMap::new(),
            wedge: self.wedge.clone(),
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<F: Fn(&MPoly) -> crate::Result<MPoly>>(
        &self,
        f: F,
    ) -> crate::Result<MomentumForm> {
        let mut out = MomentumForm::zero();
        for (k, c) in &self.square {
            insert(&mut out.square, k.clone(), f(c)?);
        }
        for (k, c) in &self.dot {
            insert(&mut out.dot, k.clone(), f(c)?);
        }
        for (k, c) in &self.wedge {
            insert(&mut out.wedge, k.clone(), f(c)?);
        }
        Ok(out)
    }
}

fn insert<K: Ord>(map: &mut BTreeMap<K, MPoly>, key: K, c: MPoly) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl AddAssign<&MomentumForm> for MomentumForm {
    fn add_assign(&mut self, rhs: &MomentumForm) {
        for (f, c) in &rhs.square {
            insert(&mut self.square, f.clone(), c.clone());
        }
        for (k, c) in &rhs.dot {
            insert(&mut self.dot, k.clone(), c.clone());
        }
        for (k, c) in &rhs.wedge {
            insert(&mut self.wedge, k.clone(), c.clone());
        }
    }
}

impl Add for &MomentumForm {
    type Output = MomentumForm;
    fn add(self, rhs: &MomentumForm) -> MomentumForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for MomentumForm {
    /// Canonical text: squares, then dots, then wedges, each coefficient in
    /// parentheses. `0` for the zero form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (fl, c) in &self.square {
            parts.push(format!("({c})*p[{fl}].p[{fl}]"));
        }
        for ((a, b), c) in &self.dot {
            parts.push(format!("({c})*p[{a}].p[{b}]"));
        }
        for ((a, b), c) in &self.wedge {
            parts.push(format!("({c})*p[{a}]^p[{b}]"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fid(s: &str) -> FlagId {
        FlagId::from(s)
    }

    #[test]
    fn wedge_antisymmetry_is_structural() {
        let mut m = MomentumForm::zero();
        m.add_wedge(fid("f2"), fid("f1"), MPoly::one());
        m.add_wedge(fid("f1"), fid("f2"), MPoly::one());
        assert!(m.is_zero());
    }

    #[test]
    fn two_flag_wedge_dies_under_conservation() {
        // p1 ∧ p2 with p2 = -p1 vanishes.
        let mut m = MomentumForm::zero();
        m.add_wedge(fid("f1"), fid("f2"), MPoly::one());
        let r = m.conservation_reduce(&[fid("f1"), fid("f2")]);
        assert!(r.is_zero());
    }

    #[test]
    fn three_flag_phase_reduces_to_single_wedge() {
        // ½(p1∧p2 + p1∧p3 + p2∧p3) with p3 = -p1-p2 reduces to ½ p1∧p2.
        let cycle = [fid("f1"), fid("f2"), fid("f3")];
        let phase = MomentumForm::cyclic_phase(&cycle);
        let red = phase.conservation_reduce(&cycle);
        let mut expect = MomentumForm::zero();
        expect.add_wedge(fid("f1"), fid("f2"), MPoly::constant(rat(1, 2)));
        assert_eq!(red, expect);
    }

    #[test]
    fn square_of_sum_expands() {
        let m = MomentumForm::square_of_sum(&[fid("f1"), fid("f2")]);
        let mut expect = MomentumForm::zero();
        expect.add_dot(fid("f1"), fid("f1"), MPoly::one());
        expect.add_dot(fid("f2"), fid("f2"), MPoly::one());
        expect.add_dot(fid("f1"), fid("f2"), MPoly::int(2));
        assert_eq!(m, expect);
        // With conservation on {f1, f2}: (p1 + p2)^2 = 0.
        assert!(m
            .conservation_reduce(&[fid("f1"), fid("f2")])
            .is_zero());
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::{Atom, Monomial, Rat};
use crate::{Error, Result};

/// Exact multivariate polynomial over arbitrary-precision rationals.
///
/// Terms are kept in a `BTreeMap` under the graded-lex monomial order, so the
/// stored form is always canonical: no zero coefficients, no zero exponents,
/// deterministic iteration. All operations are pure; values are cheap to
/// share across threads.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        MPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(Rat::from_integer(n.into()))
    }

    pub fn atom(a: Atom) -> Self {
        MPoly::term(Rat::one(), Monomial::atom(a))
    }

    pub fn atom_pow(a: Atom, k: u32) -> Self {
        MPoly::term(Rat::one(), Monomial::atom_pow(a, k))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in ascending graded-lex order (reversible).
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::unit())
    }

    fn insert_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Applies `map` as a ring homomorphism; atoms absent from the map are
    /// kept as themselves.
    pub fn substitute(&self, map: &BTreeMap<Atom, MPoly>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(c.clone());
            for (a, k) in m.iter() {
                match map.get(a) {
                    Some(p) => term = &term * &p.pow(*k),
                    None => term = &term * &MPoly::atom_pow(a.clone(), *k),
                }
            }
            out += term;
        }
        out
    }

    /// Formal partial derivative.
    pub fn derive(&self, atom: &Atom) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_atom(atom);
            if k == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::atom_pow(atom.clone(), k - 1));
            out.insert_term(m2, c * Rat::from_integer(k.into()));
        }
        out
    }

    /// Coefficient of `atom^power`: keeps the terms whose exponent of `atom`
    /// is exactly `power` and strips the atom. `extract(p, a, 0)` sets `a`
    /// to zero.
    pub fn extract(&self, atom: &Atom, power: u32) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_atom(atom);
            if k == power {
                out.insert_term(rest, c.clone());
            }
        }
        out
    }

    /// Largest exponent of `atom` over all terms.
    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(atom))
            .max()
            .unwrap_or(0)
    }

    /// Total degree of the polynomial (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// All atoms that occur in some term.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut set = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in m.iter() {
                set.insert(a.clone());
            }
        }
        set.into_iter().collect()
    }

    /// Leading term under graded-lex (largest monomial).
    fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division; errors if `self` is not a multiple of `div`.
    ///
    /// Standard multivariate long division against the graded-lex leading
    /// term; used by fraction-free elimination where divisibility is
    /// guaranteed by construction.
    pub fn div_exact(&self, div: &MPoly) -> Result<MPoly> {
        let (lead_m, lead_c) = div
            .leading()
            .ok_or_else(|| Error::Internal("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quo = MPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.checked_div(lead_m).ok_or_else(|| {
                Error::Internal(format!("inexact polynomial division (term {m})"))
            })?;
            let qc = c / lead_c;
            let qt = MPoly::term(qc, qm);
            rem -= &(&qt * div);
            quo += qt;
        }
        Ok(quo)
    }

    /// Divides by `atom^power`, erroring if any term lacks that factor.
    pub fn div_atom_pow(&self, atom: &Atom, power: u32) -> Result<MPoly> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_atom(atom);
            if k < power {
                return Err(Error::Internal(format!(
                    "term {m} not divisible by {atom}^{power}"
                )));
            }
            out.insert_term(
                rest.mul(&Monomial::atom_pow(atom.clone(), k - power)),
                c.clone(),
            );
        }
        Ok(out)
    }
}

impl AddAssign<MPoly> for MPoly {
    fn add_assign(&mut self, rhs: MPoly) {
        for (m, c) in rhs.terms {
            self.insert_term(m, c);
        }
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        self += rhs;
        self
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl fmt::Display for MPoly {
    /// Canonical text form: monomials in descending graded-lex order,
    /// coefficient 1 omitted, negative coefficients folded into ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let body = if m.is_unit() {
                format!("{abs}")
            } else if abs.is_one() {
                format!("{m}")
            } else {
                format!("{abs}*{m}")
            };
            if first {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn a(e: &str) -> MPoly {
        MPoly::atom(Atom::alpha(e))
    }

    #[test]
    fn ring_identities_from_examples() {
        let a1 = a("e1");
        let a2 = a("e2");
        // (a1+a2)(a1-a2) = a1^2 - a2^2
        let lhs = &(&a1 + &a2) * &(&a1 - &a2);
        let rhs = &(&a1 * &a1) - &(&a2 * &a2);
        assert_eq!(lhs, rhs);
        // x*0 = 0
        assert!((&MPoly::atom(Atom::X) * &MPoly::zero()).is_zero());
        // (x+y)+(x-y) = 2x
        let x = MPoly::atom(Atom::X);
        let y = MPoly::atom(Atom::Y);
        assert_eq!(&(&x + &y) + &(&x - &y), x.scale(&rat(2, 1)));
    }

    #[test]
    fn substitution_example_from_bridge_identity() {
        // q^2 with q -> (x-1)(y-1) gives (x-1)^2 (y-1)^2.
        let q2 = MPoly::atom_pow(Atom::Q, 2);
        let xm1 = &MPoly::atom(Atom::X) - &MPoly::one();
        let ym1 = &MPoly::atom(Atom::Y) - &MPoly::one();
        let mut map = BTreeMap::new();
        map.insert(Atom::Q, &xm1 * &ym1);
        assert_eq!(q2.substitute(&map), (&xm1 * &xm1) * (&ym1 * &ym1));
        // Identity map is the identity.
        let p = &q2 + &xm1;
        assert_eq!(p.substitute(&BTreeMap::new()), p);
    }

    #[test]
    fn derive_examples() {
        let qu = MPoly::atom(Atom::vweight("u"));
        let qv = MPoly::atom(Atom::vweight("v"));
        let p = &qu * &qv;
        assert_eq!(p.derive(&Atom::vweight("v")), qu);
        let s = &a("e1") + &a("e2");
        assert!(s.derive(&Atom::vweight("v")).is_zero());
    }

    #[test]
    fn extract_examples() {
        // extract(1 + 2w + 3w^2, w, 1) = 2
        let w = MPoly::atom(Atom::W);
        let p = &(&MPoly::one() + &w.scale(&rat(2, 1))) + &(&w * &w).scale(&rat(3, 1));
        assert_eq!(p.extract(&Atom::W, 1), MPoly::int(2));
        // extract(p, w, 0) = p when p has no w
        let q = &a("e1") + &MPoly::one();
        assert_eq!(q.extract(&Atom::W, 0), q);
    }

    #[test]
    fn display_matches_contract() {
        let theta2 = MPoly::term(rat(1, 4), Monomial::atom_pow(Atom::Theta, 2));
        let a12 = &a("e1") * &a("e2");
        let p = &theta2 + &a12;
        assert_eq!(p.to_string(), "1/4*theta^2 + alpha[e1]*alpha[e2]");
        assert_eq!(MPoly::zero().to_string(), "0");
        let m = &MPoly::atom(Atom::X) - &MPoly::atom(Atom::Y);
        assert_eq!(m.to_string(), "x - y");
    }

    #[test]
    fn exact_division() {
        let p = &(&a("e1") + &a("e2")) * &(&a("e1") - &a("e3"));
        let q = p.div_exact(&(&a("e1") + &a("e2"))).unwrap();
        assert_eq!(q, &a("e1") - &a("e3"));
        assert!(p.div_exact(&a("e3")).is_err());
    }
}

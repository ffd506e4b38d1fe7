use std::cmp::Ordering;
use std::fmt;

use super::Atom;

/// A monomial: atoms with positive exponents, sorted ascending by atom.
///
/// The ordering is graded lexicographic: total degree first, ties broken by
/// comparing exponents atom by atom in ascending atom order (the smallest
/// atom is the most significant). Rendering emits monomials in descending
/// order, so `theta^2` precedes `alpha[e1]*alpha[e2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    /// The empty monomial (constant term).
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn atom_pow(a: Atom, k: u32) -> Self {
        if k == 0 {
            Monomial::unit()
        } else {
            Monomial(vec![(a, k)])
        }
    }

    /// Builds from unsorted pairs, merging duplicates and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (Atom, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Atom, u32)> = Vec::new();
        for (a, k) in pairs {
            if k == 0 {
                continue;
            }
            match v.binary_search_by(|(b, _)| b.cmp(&a)) {
                Ok(i) => v[i].1 += k,
                Err(i) => v.insert(i, (a, k)),
            }
        }
        Monomial(v)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| *k).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Atom, u32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Divides exactly; `None` if some exponent would go negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, k) in &self.0 {
            let mut k = *k;
            if j < other.0.len() && other.0[j].0 < *a {
                return None; // divisor has an atom we lack
            }
            if j < other.0.len() && other.0[j].0 == *a {
                if other.0[j].1 > k {
                    return None;
                }
                k -= other.0[j].1;
                j += 1;
            }
            if k > 0 {
                out.push((a.clone(), k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes `atom` entirely, returning (exponent, remainder monomial).
    pub fn split_atom(&self, atom: &Atom) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for (a, k) in &self.0 {
            if a == atom {
                exp = *k;
            } else {
                rest.push((a.clone(), *k));
            }
        }
        (exp, Monomial(rest))
    }

    /// True if `other` divides `self` atomwise.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        other.0.iter().all(|(a, k)| self.exponent(a) >= *k)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Lex over ascending atoms: at the first atom where exponents
        // differ, the larger exponent wins. A missing atom counts as 0.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                // `self` has no exponent left where `other` does: at
                // other's atom, self has 0 < other's positive exponent.
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((a, ka)), Some((b, kb))) => match a.cmp(b) {
                    // self's next atom is smaller: self has a positive
                    // exponent at an atom where other has 0.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ka.cmp(kb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, k)| {
                if *k == 1 {
                    a.to_string()
                } else {
                    format!("{a}^{k}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_matches_rendering_contract() {
        // theta^2 > alpha[e1]*alpha[e2] (same degree, theta is smaller atom).
        let t2 = Monomial::atom_pow(Atom::Theta, 2);
        let a12 = Monomial::from_pairs([(Atom::alpha("e1"), 1), (Atom::alpha("e2"), 1)]);
        assert!(t2 > a12);
        // x^2 > x > y.
        let x2 = Monomial::atom_pow(Atom::X, 2);
        let x = Monomial::atom(Atom::X);
        let y = Monomial::atom(Atom::Y);
        assert!(x2 > x && x > y);
        // alpha[e1]*alpha[e2] > alpha[e1]*alpha[e3] > alpha[e2]*alpha[e3].
        let a13 = Monomial::from_pairs([(Atom::alpha("e1"), 1), (Atom::alpha("e3"), 1)]);
        let a23 = Monomial::from_pairs([(Atom::alpha("e2"), 1), (Atom::alpha("e3"), 1)]);
        assert!(a12 > a13 && a13 > a23);
    }

    #[test]
    fn mul_and_div_roundtrip() {
        let m = Monomial::from_pairs([(Atom::X, 2), (Atom::Y, 1)]);
        let n = Monomial::from_pairs([(Atom::X, 1), (Atom::Z, 3)]);
        let p = m.mul(&n);
        assert_eq!(p.checked_div(&n), Some(m.clone()));
        assert_eq!(p.checked_div(&m), Some(n));
        assert_eq!(m.checked_div(&Monomial::atom(Atom::Z)), None);
    }
}

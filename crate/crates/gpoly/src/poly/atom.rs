use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{EdgeId, FlagId, VertexId};

/// A typed polynomial variable.
///
/// Atoms are totally ordered by (variant rank, payload); the derived `Ord`
/// provides exactly that and is deterministic across runs. The text
/// spellings are the ones accepted by [`crate::poly::parse_poly`]:
/// `x y z q w theta alpha[e] beta[e] qv[v] qs[{f,..}] ws[(f,..)] xi[n] wi[f]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Tutte first variable.
    X,
    /// Tutte second variable.
    Y,
    /// Bollobás-Riordan genus variable.
    Z,
    /// Component-counting variable of the multivariate Tutte polynomial.
    Q,
    /// Boundary-counting variable (the collapsed `w_I`).
    W,
    /// Moyal noncommutativity parameter.
    Theta,
    /// Schwinger parameter of an edge.
    Alpha(EdgeId),
    /// Multivariate edge variable.
    Beta(EdgeId),
    /// Harmonic weight of a vertex.
    VWeight(VertexId),
    /// Categorified component variable `q_I`, indexed by a nonempty flag set.
    QSet(BTreeSet<FlagId>),
    /// Boundary variable `w_I`, indexed by a cyclic flag sequence stored in
    /// its canonical (lexicographically least) rotation. May be empty for
    /// flagless boundaries.
    WSet(Vec<FlagId>),
    /// Noble-Welsh weight variable `ξ_a` for a total flag weight `a`.
    Xi(u64),
    /// Per-flag weight variable of the Υ polynomial.
    Wi(FlagId),
}

impl Atom {
    pub fn alpha(e: impl Into<EdgeId>) -> Self {
        Atom::Alpha(e.into())
    }

    pub fn beta(e: impl Into<EdgeId>) -> Self {
        Atom::Beta(e.into())
    }

    pub fn vweight(v: impl Into<VertexId>) -> Self {
        Atom::VWeight(v.into())
    }

    pub fn qset<I, F>(flags: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: Into<FlagId>,
    {
        Atom::QSet(flags.into_iter().map(Into::into).collect())
    }

    /// Builds a `WSet` atom, canonicalizing the cyclic sequence to its
    /// lexicographically least rotation.
    pub fn wset<I, F>(cycle: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: Into<FlagId>,
    {
        let seq: Vec<FlagId> = cycle.into_iter().map(Into::into).collect();
        Atom::WSet(canonical_rotation(&seq))
    }

    pub fn wi(f: impl Into<FlagId>) -> Self {
        Atom::Wi(f.into())
    }
}

/// Lexicographically least rotation of a cyclic sequence.
pub fn canonical_rotation(seq: &[FlagId]) -> Vec<FlagId> {
    if seq.len() <= 1 {
        return seq.to_vec();
    }
    let mut best: Option<Vec<FlagId>> = None;
    for start in 0..seq.len() {
        let rot: Vec<FlagId> = seq[start..].iter().chain(&seq[..start]).cloned().collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::X => write!(f, "x"),
            Atom::Y => write!(f, "y"),
            Atom::Z => write!(f, "z"),
            Atom::Q => write!(f, "q"),
            Atom::W => write!(f, "w"),
            Atom::Theta => write!(f, "theta"),
            Atom::Alpha(e) => write!(f, "alpha[{e}]"),
            Atom::Beta(e) => write!(f, "beta[{e}]"),
            Atom::VWeight(v) => write!(f, "qv[{v}]"),
            Atom::QSet(s) => {
                let ids: Vec<&str> = s.iter().map(|x| x.as_str()).collect();
                write!(f, "qs[{{{}}}]", ids.join(","))
            }
            Atom::WSet(seq) => {
                let ids: Vec<&str> = seq.iter().map(|x| x.as_str()).collect();
                write!(f, "ws[({})]", ids.join(","))
            }
            Atom::Xi(n) => write!(f, "xi[{n}]"),
            Atom::Wi(id) => write!(f, "wi[{id}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_order_is_kind_then_payload() {
        let theta = Atom::Theta;
        let a1 = Atom::alpha("e1");
        let a2 = Atom::alpha("e2");
        let b1 = Atom::beta("e1");
        assert!(theta < a1);
        assert!(a1 < a2);
        assert!(a2 < b1);
        assert!(Atom::X < Atom::Y && Atom::Y < Atom::Z && Atom::Z < Atom::Q);
    }

    #[test]
    fn wset_canonical_rotation() {
        let a = Atom::wset(["f2", "f3", "f1"]);
        let b = Atom::wset(["f1", "f2", "f3"]);
        assert_eq!(a, b);
        // Reversal is a different cyclic word for length >= 3.
        let c = Atom::wset(["f3", "f2", "f1"]);
        assert_ne!(a, c);
    }

    #[test]
    fn spellings() {
        assert_eq!(Atom::qset(["f2", "f1"]).to_string(), "qs[{f1,f2}]");
        assert_eq!(Atom::wset(["f2", "f1"]).to_string(), "ws[(f1,f2)]");
        assert_eq!(Atom::Xi(3).to_string(), "xi[3]");
        assert_eq!(Atom::vweight("u").to_string(), "qv[u]");
    }
}

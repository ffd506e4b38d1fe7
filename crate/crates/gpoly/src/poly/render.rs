//! JSON and LaTeX renderings of polynomials.
//!
//! The canonical text form is `impl Display for MPoly`; these two mirror the
//! same descending graded-lex term order so all three formats list terms
//! identically.

use num_traits::One;

use super::{Atom, MPoly};

/// `{"terms":[{"c":"1/4","m":{"theta":2}},...]}` with terms in canonical
/// (descending) order and monomial keys in ascending atom order.
pub fn to_json(p: &MPoly) -> String {
    let mut out = String::from("{\"terms\":[");
    let mut first = true;
    for (m, c) in p.iter().rev() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("{{\"c\":\"{c}\",\"m\":{{"));
        let mut afirst = true;
        for (a, k) in m.iter() {
            if !afirst {
                out.push(',');
            }
            afirst = false;
            out.push_str(&format!("\"{a}\":{k}"));
        }
        out.push_str("}}");
    }
    out.push_str("]}");
    out
}

fn atom_latex(a: &Atom) -> String {
    match a {
        Atom::X => "x".into(),
        Atom::Y => "y".into(),
        Atom::Z => "z".into(),
        Atom::Q => "q".into(),
        Atom::W => "w".into(),
        Atom::Theta => r"\theta".into(),
        Atom::Alpha(e) => format!(r"\alpha_{{{e}}}"),
        Atom::Beta(e) => format!(r"\beta_{{{e}}}"),
        Atom::VWeight(v) => format!("q_{{{v}}}"),
        Atom::QSet(s) => {
            let ids: Vec<&str> = s.iter().map(|x| x.as_str()).collect();
            format!(r"q_{{\{{{}\}}}}", ids.join(","))
        }
        Atom::WSet(seq) => {
            let ids: Vec<&str> = seq.iter().map(|x| x.as_str()).collect();
            format!("w_{{({})}}", ids.join(","))
        }
        Atom::Xi(n) => format!(r"\xi_{{{n}}}"),
        Atom::Wi(f) => format!("w_{{{f}}}"),
    }
}

pub fn to_latex(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (m, c) in p.iter().rev() {
        let neg = c < &super::Rat::from_integer(0.into());
        let abs = if neg { -c.clone() } else { c.clone() };
        let coeff = if abs.denom().is_one() {
            format!("{}", abs.numer())
        } else {
            format!(r"\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        let mono = if m.is_unit() {
            String::new()
        } else {
            m.iter()
                .map(|(a, k)| {
                    if *k == 1 {
                        atom_latex(a)
                    } else {
                        format!("{}^{{{k}}}", atom_latex(a))
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let body = if mono.is_empty() {
            coeff
        } else if abs.is_one() {
            mono
        } else {
            format!("{coeff} {mono}")
        };
        if first {
            out.push_str(if neg { "-" } else { "" });
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Monomial};

    #[test]
    fn json_and_latex_shapes() {
        let p = &MPoly::term(rat(1, 4), Monomial::atom_pow(Atom::Theta, 2))
            + &(&MPoly::atom(Atom::alpha("e1")) * &MPoly::atom(Atom::alpha("e2")));
        assert_eq!(
            to_json(&p),
            "{\"terms\":[{\"c\":\"1/4\",\"m\":{\"theta\":2}},\
             {\"c\":\"1\",\"m\":{\"alpha[e1]\":1,\"alpha[e2]\":1}}]}"
        );
        assert_eq!(
            to_latex(&p),
            r"\frac{1}{4} \theta^{2} + \alpha_{e1} \alpha_{e2}"
        );
        assert_eq!(to_json(&MPoly::zero()), "{\"terms\":[]}");
    }
}

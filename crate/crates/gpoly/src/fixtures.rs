//! The shipped fixture graphs, embedded from `fixtures/*.gpg` so that the
//! files and the test corpus can never drift apart.

use crate::gpg::{parse_str, GraphFile};

macro_rules! fixture {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        pub fn $name() -> GraphFile {
            parse_str(include_str!(concat!(
                "../../../fixtures/",
                stringify!($name),
                ".gpg"
            )))
            .expect("shipped fixture parses")
        }
    };
}

fixture!(
    /// Two vertices joined by a bridge.
    p2
);
fixture!(
    /// A single planar self-loop.
    l1
);
fixture!(
    /// The bubble: two parallel edges.
    b2
);
fixture!(
    /// The bubble with flags `f1`, `f2` on `u` and `f3` on `v`.
    b2f
);
fixture!(
    /// The triangle.
    c3
);
fixture!(
    /// The non-planar triple edge with bc = 1, g = 1.
    np3
);
fixture!(
    /// The crossed rosette of genus 1.
    x2
);

/// All seven named fixtures.
pub fn all() -> Vec<GraphFile> {
    vec![p2(), l1(), b2(), b2f(), c3(), np3(), x2()]
}

/// The connected ribbon fixtures (all of them carry `order` lines).
pub fn ribbons() -> Vec<GraphFile> {
    all().into_iter().filter(|g| g.ribbon.is_some()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse_and_are_ribbon() {
        let fs = all();
        assert_eq!(fs.len(), 7);
        for f in &fs {
            assert!(f.ribbon.is_some(), "{} should be a ribbon graph", f.name);
            assert!(f.graph.is_connected());
        }
    }

    #[test]
    fn info_quantities_match_paper_captions() {
        let np3 = np3();
        let r = np3.ribbon.unwrap();
        assert_eq!(np3.graph.vertex_count(), 2);
        assert_eq!(np3.graph.edge_count(), 3);
        assert_eq!(r.boundary_count(), 1);
        assert_eq!(r.genus().unwrap(), 1);
        assert_eq!(r.broken_face_count(), 1);
    }
}

//! Complex identifiers and membership tests.

use std::fmt;
use std::str::FromStr;

use super::{Family, Flavor, Graph, GraphError};

/// The implemented complexes.
///
/// `d` is always the parameter of the complex itself: `Ogc0` with `d = 3`
/// is OGC_3. The two-coloured complex with parameter `d` has first
/// component `Hat` (flavor `Hat`, parameter `d`) and second component
/// `HatBlack` (flavor `Ogc`, parameter `d + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexId {
    FGc,
    Gc0,
    Gc2,
    Gc3,
    FOgc,
    Ogc0,
    Ogc2,
    Ogc3,
    Hat,
    HatBlack,
}

impl ComplexId {
    pub const ALL: [ComplexId; 10] = [
        ComplexId::FGc,
        ComplexId::Gc0,
        ComplexId::Gc2,
        ComplexId::Gc3,
        ComplexId::FOgc,
        ComplexId::Ogc0,
        ComplexId::Ogc2,
        ComplexId::Ogc3,
        ComplexId::Hat,
        ComplexId::HatBlack,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComplexId::FGc => "fGC",
            ComplexId::Gc0 => "GC0",
            ComplexId::Gc2 => "GC2",
            ComplexId::Gc3 => "GC3",
            ComplexId::FOgc => "fOGC",
            ComplexId::Ogc0 => "OGC0",
            ComplexId::Ogc2 => "OGC2",
            ComplexId::Ogc3 => "OGC3",
            ComplexId::Hat => "HAT",
            ComplexId::HatBlack => "HATblack",
        }
    }

    pub fn flavor(self) -> Flavor {
        match self {
            ComplexId::FGc | ComplexId::Gc0 | ComplexId::Gc2 | ComplexId::Gc3 => Flavor::Gc,
            ComplexId::Hat => Flavor::Hat,
            _ => Flavor::Ogc,
        }
    }

    /// Parameter carried by the member graphs.
    pub fn graph_d(self, d: i32) -> i32 {
        if self == ComplexId::HatBlack {
            d + 1
        } else {
            d
        }
    }

    /// Vector family the complex lives in.
    pub fn family(self) -> Family {
        match self {
            ComplexId::Hat | ComplexId::HatBlack => Family::Hat,
            c => match c.flavor() {
                Flavor::Gc => Family::Gc,
                _ => Family::Ogc,
            },
        }
    }

    pub fn requires_connected(self) -> bool {
        !matches!(self, ComplexId::FGc | ComplexId::FOgc)
    }

    pub fn min_valence(self) -> usize {
        match self {
            ComplexId::Gc2 | ComplexId::Ogc2 | ComplexId::Ogc3 => 2,
            ComplexId::Gc3 => 3,
            _ => 0,
        }
    }

    /// Whether `g` (parameter `d` of the complex) is a generator.
    /// `tadpoles = false` additionally excludes tadpoles.
    pub fn admits(self, d: i32, g: &Graph, tadpoles: bool) -> bool {
        if g.flavor() != self.flavor() || g.d() != self.graph_d(d) || g.check().is_err() {
            return false;
        }
        if !tadpoles && g.has_tadpole() {
            return false;
        }
        if self.requires_connected() && !g.is_connected() {
            return false;
        }
        let n = g.num_vertices();
        if n == 0 || (0..n).any(|v| g.valence(v) < self.min_valence()) {
            return false;
        }
        match self {
            ComplexId::Ogc3 => (0..n).any(|v| g.valence(v) >= 3),
            // the lone white vertex and the lone black vertex of the second
            // component are not generators
            ComplexId::Hat => !(n == 1 && g.num_white() == 1),
            ComplexId::HatBlack => n >= 2,
            _ => true,
        }
    }
}

impl fmt::Display for ComplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComplexId {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, GraphError> {
        ComplexId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| GraphError::UnknownComplex(s.to_string()))
    }
}

/// Membership of `g` in the complex named `complex` with parameter `d`.
pub fn validate(g: &Graph, complex: &str, d: i32) -> Result<bool, GraphError> {
    Ok(complex.parse::<ComplexId>()?.admits(d, g, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let tri = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(validate(&tri, "GC2", 2).unwrap());
        assert!(!validate(&tri, "GC3", 2).unwrap());
        let pendant = Graph::black(Flavor::Gc, 2, 3, &[(0, 1), (1, 2), (1, 1)]).unwrap();
        assert!(validate(&pendant, "GC0", 2).unwrap());
        assert!(!validate(&pendant, "GC2", 2).unwrap());
        let cyc = Graph::new_unchecked(
            Flavor::Ogc,
            3,
            vec![super::super::Color::Black; 3],
            vec![(0, 1), (1, 2), (2, 0)],
            super::super::Sign::PLUS,
        );
        assert!(!validate(&cyc, "OGC0", 3).unwrap());
        assert!(matches!(validate(&tri, "GC7", 2), Err(GraphError::UnknownComplex(_))));
        for c in ComplexId::ALL {
            assert_eq!(c.as_str().parse::<ComplexId>().unwrap(), c);
        }
    }
}

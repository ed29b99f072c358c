//! Finite linear combinations of canonical graphs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::canon::{canonicalize_unchecked, Canon};
use super::{encode, Flavor, Graph, GraphError};

pub type Coeff = BigRational;

/// The complex family a vector belongs to.
///
/// A `Hat` vector holds pairs `(x_white, x_black)`: terms of flavor `Hat`
/// (parameter `d`) form the first component and terms of flavor `Ogc`
/// (parameter `d + 1`) the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gc,
    Ogc,
    Hat,
}

impl Family {
    /// Whether a graph of `(flavor, gd)` may appear in a vector of this
    /// family with parameter `d`.
    pub fn admits(self, d: i32, flavor: Flavor, gd: i32) -> bool {
        match self {
            Family::Gc => flavor == Flavor::Gc && gd == d,
            Family::Ogc => flavor == Flavor::Ogc && gd == d,
            Family::Hat => (flavor == Flavor::Hat && gd == d) || (flavor == Flavor::Ogc && gd == d + 1),
        }
    }
}

/// A formal sum of canonical graphs with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphVector {
    family: Family,
    d: i32,
    truncation: Option<usize>,
    terms: BTreeMap<Graph, Coeff>,
}

impl GraphVector {
    pub fn zero(family: Family, d: i32) -> Self {
        GraphVector {
            family,
            d,
            truncation: None,
            terms: BTreeMap::new(),
        }
    }

    /// Drops every term with more than `bound` vertices, now and after every
    /// later operation.
    pub fn with_truncation(mut self, bound: Option<usize>) -> Self {
        self.truncation = bound;
        if let Some(b) = bound {
            self.terms.retain(|g, _| g.num_vertices() <= b);
        }
        self
    }

    pub fn from_graph(family: Family, d: i32, g: &Graph) -> Result<Self, GraphError> {
        let mut v = GraphVector::zero(family, d);
        v.add_graph(g, &Coeff::one())?;
        Ok(v)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn d(&self) -> i32 {
        self.d
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &Graph) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `c * g` after canonicalising `g`; zero graphs are dropped.
    pub fn add_graph(&mut self, g: &Graph, c: &Coeff) -> Result<(), GraphError> {
        if !self.family.admits(self.d, g.flavor(), g.d()) {
            return Err(GraphError::Mismatch(format!(
                "{} graph with d={} in a {:?} vector with d={}",
                g.flavor(),
                g.d(),
                self.family,
                self.d
            )));
        }
        g.check()?;
        self.add_graph_unchecked(g, c);
        Ok(())
    }

    pub(crate) fn add_graph_unchecked(&mut self, g: &Graph, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        if let Some(b) = self.truncation {
            if g.num_vertices() > b {
                return;
            }
        }
        if let Canon::Form { graph, sign } = canonicalize_unchecked(g) {
            let c = if sign.is_negative() { -c.clone() } else { c.clone() };
            self.add_canonical(graph, c);
        }
    }

    /// Adds `c * key` where `key` is already canonical.
    pub(crate) fn add_canonical(&mut self, key: Graph, c: Coeff) {
        if let Some(b) = self.truncation {
            if key.num_vertices() > b {
                return;
            }
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GraphVector, c: &Coeff) {
        for (g, x) in &other.terms {
            self.add_canonical(g.clone(), x * c);
        }
    }

    pub fn add(&self, other: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(other, &Coeff::one());
        out
    }

    pub fn sub(&self, other: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Coeff::one());
        out
    }

    pub fn scale(&self, c: &Coeff) -> GraphVector {
        let mut out = GraphVector::zero(self.family, self.d).with_truncation(self.truncation);
        out.add_scaled(self, c);
        out
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Graph) -> bool) -> GraphVector {
        let mut out = self.clone();
        out.terms.retain(|g, _| keep(g));
        out
    }

    /// Homogeneous part of a given total vertex count.
    pub fn with_vertices(&self, n: usize) -> GraphVector {
        self.filter(|g| g.num_vertices() == n)
    }

    /// Text lines `coefficient<TAB>encoded graph`, in key order.
    pub fn to_lines(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(g, c)| format!("{}\t{}", c, encode(g)))
            .collect()
    }
}

impl fmt::Debug for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GraphVector({:?}, d={}, {} terms)", self.family, self.d, self.len())?;
        for line in self.to_lines() {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for line in self.to_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Integer coefficient.
pub fn int(x: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::Graph;

    #[test]
    fn cancellation_removes_terms() {
        let e = Graph::black(Flavor::Gc, 3, 2, &[(0, 1)]).unwrap();
        let mut v = GraphVector::zero(Family::Gc, 3);
        v.add_graph(&e, &int(1)).unwrap();
        // reversing the edge for odd d is the same element with sign -1
        v.add_graph(&e.flip_edge(0).negated(), &int(-1)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.iter().next().unwrap().1, &int(2));
        let mut w = GraphVector::zero(Family::Gc, 3);
        w.add_graph(&e, &int(-2)).unwrap();
        assert!(v.add(&w).is_zero());
    }

    #[test]
    fn zero_graphs_and_mismatches() {
        let dbl = Graph::black(Flavor::Gc, 2, 2, &[(0, 1), (0, 1)]).unwrap();
        let v = GraphVector::from_graph(Family::Gc, 2, &dbl).unwrap();
        assert!(v.is_zero());
        let o = Graph::black(Flavor::Ogc, 3, 2, &[(0, 1)]).unwrap();
        assert!(GraphVector::from_graph(Family::Gc, 2, &o).is_err());
        assert!(GraphVector::from_graph(Family::Hat, 2, &o).is_ok());
    }

    #[test]
    fn truncation_drops_large_terms() {
        let tri = Graph::black(Flavor::Gc, 3, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let v = GraphVector::zero(Family::Gc, 3).with_truncation(Some(2));
        let mut v = v;
        v.add_graph(&tri, &int(1)).unwrap();
        assert!(v.is_zero());
    }
}

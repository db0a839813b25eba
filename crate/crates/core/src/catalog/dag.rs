use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use super::types::{Sign, SingularityType};
use crate::error::{Error, Result};

/// Directed subordination diagram; an edge `T → T′` means `T′` is subordinate
/// to `T`. Nodes are sign-normalized with [`SingularityType::dag_key`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubordinationDag {
    edges: BTreeMap<SingularityType, BTreeSet<SingularityType>>,
}

fn a(sub: u32) -> SingularityType {
    SingularityType::a(sub - 1, Sign::Plus).unwrap()
}

fn d(sub: u32, sign: Sign) -> SingularityType {
    SingularityType::d(sub - 1, sign).unwrap()
}

fn e(sub: u32) -> SingularityType {
    SingularityType::e(sub, Sign::Plus).unwrap()
}

impl SubordinationDag {
    /// The diagram for all types up to subscript 8.
    pub fn standard() -> Self {
        use Sign::{Minus as M, Plus as P};
        let mut list: Vec<(SingularityType, Vec<SingularityType>)> = Vec::new();
        list.push((a(1), vec![]));
        for sub in 2..=8 {
            list.push((a(sub), vec![a(sub - 1)]));
        }
        list.extend([
            (d(4, M), vec![a(3)]),
            (d(4, P), vec![a(3)]),
            (d(5, P), vec![d(4, M), d(4, P), a(4)]),
            (d(6, M), vec![d(5, P), a(5)]),
            (d(6, P), vec![d(5, P)]),
            (e(6), vec![a(5), d(5, P)]),
            (d(7, P), vec![d(6, M), d(6, P), a(6)]),
            (e(7), vec![e(6), a(6), d(6, M)]),
            (d(8, M), vec![d(7, P), a(7)]),
            (d(8, P), vec![d(7, P)]),
            (e(8), vec![e(7), a(7), d(7, P)]),
        ]);
        Self::from_edges(list)
    }

    pub fn from_edges(list: Vec<(SingularityType, Vec<SingularityType>)>) -> Self {
        let mut edges: BTreeMap<SingularityType, BTreeSet<SingularityType>> = BTreeMap::new();
        for (from, tos) in list {
            let set = edges.entry(from.dag_key()).or_default();
            set.extend(tos.iter().map(|t| t.dag_key()));
            for t in tos {
                edges.entry(t.dag_key()).or_default();
            }
        }
        Self { edges }
    }

    pub fn nodes(&self) -> impl Iterator<Item = SingularityType> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (SingularityType, SingularityType)> + '_ {
        self.edges
            .iter()
            .flat_map(|(f, tos)| tos.iter().map(move |t| (*f, *t)))
    }

    pub fn contains(&self, t: SingularityType) -> bool {
        self.edges.contains_key(&t.dag_key())
    }

    /// Transitive closure of out-edges (excluding `t` itself).
    pub fn subordinates(&self, t: SingularityType) -> Result<BTreeSet<SingularityType>> {
        let key = t.dag_key();
        if !self.contains(key) {
            return Err(Error::NotInDag(t.to_string()));
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![key];
        while let Some(n) = stack.pop() {
            for &c in &self.edges[&n] {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        Ok(seen)
    }

    pub fn is_acyclic(&self) -> bool {
        self.nodes()
            .all(|n| !self.subordinates(n).map(|s| s.contains(&n)).unwrap_or(true))
    }

    /// Minimum weight `r_j` over `t` and everything reachable from it.
    pub fn min_homogeneity(&self, t: SingularityType) -> Result<Rational64> {
        let subs = self.subordinates(t)?;
        Ok(std::iter::once(t.dag_key())
            .chain(subs)
            .map(super::min_weight)
            .min()
            .expect("non-empty"))
    }
}

/// Free-function form of [`SubordinationDag::min_homogeneity`].
pub fn dag_min_homogeneity(t: SingularityType, dag: &SubordinationDag) -> Result<Rational64> {
    dag.min_homogeneity(t)
}

/// Free-function form of [`SubordinationDag::subordinates`].
pub fn subordinates(
    t: SingularityType,
    dag: &SubordinationDag,
) -> Result<BTreeSet<SingularityType>> {
    dag.subordinates(t)
}

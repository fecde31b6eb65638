//! Derivation graph of non-orientable constructions, seeded by the Klein bottle `D̃(0,-4)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{rationally_convex_set, BundleSpec};
use crate::cobordism::{self, euler_number, CobordismError, Op, SurfaceComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Glue in the Möbius strip with three Cone(L_u) singularities: `(χ, e) → (χ-1, e-2)`.
    Vertical,
    /// Smooth one Cone(L_u) singularity: `(χ, e) → (χ-1, e+2)`, needs `k ≥ 1`.
    Diagonal,
}

impl Rule {
    pub fn target(self, from: (i64, i64)) -> Option<(i64, i64)> {
        let (chi, e) = from;
        match self {
            Rule::Vertical => Some((chi - 1, e - 2)),
            Rule::Diagonal if -e - chi >= 1 => Some((chi - 1, e + 2)),
            Rule::Diagonal => None,
        }
    }

    pub fn op(self) -> Op {
        match self {
            Rule::Vertical => Op::GlueMobiusThreeUmbrellas,
            Rule::Diagonal => Op::MobiusSmoothing { singularity: 0 },
        }
    }
}

pub const SEED: (i64, i64) = (0, -4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: (i64, i64),
    pub to: (i64, i64),
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationGraph {
    pub min_chi: i64,
    /// Nodes as `(χ, e)`; all non-orientable.
    pub nodes: BTreeSet<(i64, i64)>,
    pub edges: Vec<Edge>,
    /// Lexicographically least rule path from the seed to each node.
    pub witnesses: BTreeMap<(i64, i64), Vec<Rule>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlannerError {
    #[error("closure mismatch: missing {missing:?}, unexpected {extra:?}")]
    ClosureMismatch { missing: Vec<(i64, i64)>, extra: Vec<(i64, i64)> },
    #[error("witness replay for {node:?} produced {got:?}")]
    ReplayMismatch { node: (i64, i64), got: (i64, i64, bool, usize) },
    #[error("min_chi must be at most 0")]
    BadMinChi,
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
}

/// Breadth-first closure of the seed under both rules, truncated at `χ ≥ min_chi`.
pub fn derive_table(min_chi: i64) -> DerivationGraph {
    let mut nodes = BTreeSet::from([SEED]);
    let mut edges = Vec::new();
    let mut witnesses = BTreeMap::from([(SEED, Vec::new())]);
    let mut row = vec![SEED];
    let mut chi = SEED.0;
    while chi > min_chi {
        let mut next: BTreeSet<(i64, i64)> = BTreeSet::new();
        for &from in &row {
            for rule in [Rule::Vertical, Rule::Diagonal] {
                let Some(to) = rule.target(from) else { continue };
                edges.push(Edge { from, to, rule });
                next.insert(to);
                let mut path = witnesses[&from].clone();
                path.push(rule);
                let better = witnesses.get(&to).map_or(true, |old| path < *old);
                if better {
                    witnesses.insert(to, path);
                }
            }
        }
        nodes.extend(next.iter().copied());
        row = next.into_iter().collect();
        chi -= 1;
    }
    edges.sort();
    DerivationGraph { min_chi, nodes, edges, witnesses }
}

impl DerivationGraph {
    pub fn row(&self, chi: i64) -> Vec<i64> {
        self.nodes.iter().filter(|n| n.0 == chi).map(|n| n.1).collect()
    }

    pub fn out_rules(&self, node: (i64, i64)) -> Vec<Rule> {
        self.edges.iter().filter(|e| e.from == node).map(|e| e.rule).collect()
    }

    /// Text grid with one row per χ; `v`/`d` mark outgoing arrows.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for chi in (self.min_chi..=SEED.0).rev() {
            let _ = write!(out, "chi {chi:>3} |");
            for e in self.row(chi) {
                let marks: String = self
                    .out_rules((chi, e))
                    .iter()
                    .map(|r| match r {
                        Rule::Vertical => 'v',
                        Rule::Diagonal => 'd',
                    })
                    .collect();
                let cell = format!("D~({chi},{e})");
                let _ = write!(out, " {cell:<12}{marks:<3}");
            }
            out = out.trim_end().to_string();
            out.push('\n');
        }
        out
    }
}

/// Script operations realizing a rule path from the Klein bottle.
pub fn witness_ops(path: &[Rule]) -> Vec<Op> {
    std::iter::once(Op::KleinBase).chain(path.iter().map(|r| r.op())).collect()
}

/// Replays a rule path through the cobordism operations.
pub fn replay(path: &[Rule]) -> Result<SurfaceComplex, CobordismError> {
    let mut s = cobordism::klein_base();
    for rule in path {
        s = match rule {
            Rule::Vertical => cobordism::glue_mobius_three_umbrellas(&s)?,
            Rule::Diagonal => {
                let i = cobordism::first_basic(&s).ok_or(CobordismError::NotBasicSingularity)?;
                cobordism::mobius_smoothing(&s, i)?
            }
        };
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub min_chi: i64,
    pub nodes: usize,
    pub replayed: usize,
}

/// Checks that the derived nodes are exactly the rationally convex non-orientable
/// bundles with `min_chi ≤ χ ≤ 0`, and that every witness replays to its node.
pub fn verify_closure(min_chi: i64) -> Result<ClosureReport, PlannerError> {
    if min_chi > 0 {
        return Err(PlannerError::BadMinChi);
    }
    let g = derive_table(min_chi);
    let mut expected = BTreeSet::new();
    for chi in min_chi..=0 {
        for e in rationally_convex_set(chi, false).expect("non-orientable chi <= 1 is valid") {
            expected.insert((chi, e));
        }
    }
    if expected != g.nodes {
        return Err(PlannerError::ClosureMismatch {
            missing: expected.difference(&g.nodes).copied().collect(),
            extra: g.nodes.difference(&expected).copied().collect(),
        });
    }
    for (node, path) in &g.witnesses {
        let s = replay(path)?;
        let e = euler_number(&s)?;
        let k = s.basic_singularity_count();
        let spec = BundleSpec::new(node.0, node.1, false);
        if (s.chi, e) != *node || s.orientable || k as i64 != spec.umbrellas() {
            return Err(PlannerError::ReplayMismatch { node: *node, got: (s.chi, e, s.orientable, k) });
        }
    }
    Ok(ClosureReport { min_chi, nodes: g.nodes.len(), replayed: g.witnesses.len() })
}

/// Genus chains for every `χ = 2 - 2g ≥ min_chi`, each with Euler number 0.
pub fn orientable_catalog(min_chi: i64) -> Result<Vec<SurfaceComplex>, PlannerError> {
    let mut out = Vec::new();
    let mut g = 1;
    while 2 - 2 * g as i64 >= min_chi {
        let s = cobordism::genus_chain(g)?;
        let e = euler_number(&s)?;
        let allowed = rationally_convex_set(s.chi, true).expect("orientable even chi is valid");
        if e != 0 || !allowed.contains(&e) {
            return Err(PlannerError::ReplayMismatch { node: (s.chi, e), got: (s.chi, e, true, s.singularities.len()) });
        }
        out.push(s);
        g += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let g = derive_table(-1);
        assert_eq!(g.nodes, BTreeSet::from([(0, -4), (-1, -6), (-1, -2)]));
    }

    #[test]
    fn fifth_row_and_gate() {
        let g = derive_table(-4);
        assert_eq!(g.row(-4), vec![-12, -8, -4, 0, 4]);
        assert_eq!(g.out_rules((-4, 4)), vec![]);
        let g = derive_table(-5);
        assert_eq!(g.out_rules((-4, 4)), vec![Rule::Vertical]);
    }

    #[test]
    fn witnesses_prefer_vertical() {
        let g = derive_table(-3);
        assert_eq!(g.witnesses[&(-2, -4)], vec![Rule::Vertical, Rule::Diagonal]);
        assert_eq!(g.witnesses[&(-3, 2)], vec![Rule::Diagonal, Rule::Diagonal, Rule::Diagonal]);
    }

    #[test]
    fn exclusions_absent() {
        let g = derive_table(-5);
        assert!(!g.nodes.contains(&(0, 0)));
        assert!(!g.nodes.contains(&(1, -2)));
    }
}

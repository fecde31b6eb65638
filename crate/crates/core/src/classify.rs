//! Embeddability classes of disk bundles over closed surfaces.
//!
//! For a disk bundle with base Euler characteristic `χ` and Euler number `e`:
//! smooth embeddings into `C²` are governed by the Massey set, Stein
//! neighborhoods by the Stein set, and rationally convex embeddings by the
//! Stein set minus the two exceptional non-orientable pairs `(1, -2)` and `(0, 0)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BundleSpec {
    pub chi: i64,
    pub euler: i64,
    pub orientable: bool,
}

impl BundleSpec {
    pub fn new(chi: i64, euler: i64, orientable: bool) -> Self {
        BundleSpec { chi, euler, orientable }
    }

    /// Umbrella count `k = -χ - e` of an all-`L_u` singular Lagrangian realizing this bundle.
    pub fn umbrellas(&self) -> i64 {
        -self.chi - self.euler
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("no closed {} surface has Euler characteristic {chi}", if *.orientable { "orientable" } else { "non-orientable" })]
    InvalidSurface { chi: i64, orientable: bool },
}

pub type EulerSet = BTreeSet<i64>;

/// Non-orientable exceptions to rational convexity.
pub const EXCLUDED: [(i64, i64); 2] = [(1, -2), (0, 0)];

pub fn validate_surface(chi: i64, orientable: bool) -> Result<(), ClassifyError> {
    let ok = if orientable { chi <= 2 && chi.rem_euclid(2) == 0 } else { chi <= 1 };
    if ok {
        Ok(())
    } else {
        Err(ClassifyError::InvalidSurface { chi, orientable })
    }
}

fn progression(lo: i64, hi: i64) -> EulerSet {
    (0..).map(|j| lo + 4 * j).take_while(|e| *e <= hi).collect()
}

pub fn massey_set(chi: i64, orientable: bool) -> Result<EulerSet, ClassifyError> {
    validate_surface(chi, orientable)?;
    if orientable {
        return Ok(EulerSet::from([0]));
    }
    Ok(progression(2 * chi - 4, 4 - 2 * chi))
}

/// Largest Euler number of a non-orientable Stein embedding: `-2χ - 4 + 4⌊χ/4 + 1⌋`.
pub fn stein_upper(chi: i64) -> i64 {
    -2 * chi - 4 + 4 * (chi + 4).div_euclid(4)
}

pub fn stein_set(chi: i64, orientable: bool) -> Result<EulerSet, ClassifyError> {
    validate_surface(chi, orientable)?;
    if orientable {
        return Ok(if chi <= 0 { EulerSet::from([0]) } else { EulerSet::new() });
    }
    Ok(progression(2 * chi - 4, stein_upper(chi)))
}

pub fn rationally_convex_set(chi: i64, orientable: bool) -> Result<EulerSet, ClassifyError> {
    let mut set = stein_set(chi, orientable)?;
    if !orientable {
        for (c, e) in EXCLUDED {
            if c == chi {
                set.remove(&e);
            }
        }
    }
    Ok(set)
}

/// Allowed numbers of open Whitney umbrellas on a Lagrangian surface of this topology.
pub fn umbrella_set(chi: i64, orientable: bool) -> Result<EulerSet, ClassifyError> {
    Ok(rationally_convex_set(chi, orientable)?.into_iter().map(|e| -chi - e).collect())
}

/// Membership of one bundle in each class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub spec: BundleSpec,
    pub smooth: bool,
    pub stein: bool,
    pub rationally_convex: bool,
    pub umbrellas: i64,
}

pub fn classify(spec: BundleSpec) -> Result<Classification, ClassifyError> {
    let BundleSpec { chi, euler, orientable } = spec;
    Ok(Classification {
        spec,
        smooth: massey_set(chi, orientable)?.contains(&euler),
        stein: stein_set(chi, orientable)?.contains(&euler),
        rationally_convex: rationally_convex_set(chi, orientable)?.contains(&euler),
        umbrellas: spec.umbrellas(),
    })
}

/// `(tb, rot)` of the boundary of a surface with complex points, from the counts
/// of elliptic (`e±`) and hyperbolic (`h±`) points.
pub fn lai_relative(e_plus: i64, e_minus: i64, h_plus: i64, h_minus: i64, chi: i64) -> (i64, i64) {
    let tb = e_plus + e_minus - h_plus - h_minus - chi;
    let rot = e_plus - e_minus - h_plus + h_minus;
    (tb, rot)
}

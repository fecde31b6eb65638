//! Bookkeeping for singular Lagrangian surfaces assembled from elementary pieces.
//!
//! A [`SurfaceComplex`] records only what the Euler-number formula and the
//! classifiers consume: Euler characteristic, orientability, the boundary
//! Legendrians (one knot front each, with pairwise linking), and the list of
//! cone singularities. Every operation appends its script line to the witness.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front::{fronts, EventKind, FrontDiagram, FrontError, FrontEvent};
use crate::rewrite::{apply_move, MoveInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularityKind {
    ConeOverUnknot,
}

/// A cone singularity modeled on a Legendrian unknot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Singularity {
    pub model_tb: i64,
    pub model_rot: i64,
    pub kind: SingularityKind,
    /// Display as an open Whitney umbrella (only meaningful for `(-2, ±1)`).
    pub umbrella: bool,
}

impl Singularity {
    pub fn cone(model_tb: i64, model_rot: i64) -> Self {
        Singularity { model_tb, model_rot, kind: SingularityKind::ConeOverUnknot, umbrella: false }
    }

    pub fn lu(rot: i64) -> Self {
        Singularity::cone(-2, rot)
    }

    pub fn is_basic(&self) -> bool {
        self.model_tb == -2 && self.model_rot.abs() == 1
    }
}

/// Whether `(tb, rot)` is realized by some Legendrian unknot.
pub fn in_unknot_range(tb: i64, rot: i64) -> bool {
    tb <= -1 && rot.abs() <= -tb - 1 && (rot - tb - 1).rem_euclid(2) == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("surface has open boundary")]
    OpenBoundary,
    #[error("boundary component {0} does not exist")]
    BoundaryOutOfRange(usize),
    #[error("singularity {0} does not exist")]
    SingularityOutOfRange(usize),
    #[error("boundary is not compatible with the unknot model: {0}")]
    BoundaryNotUnknotCompatible(String),
    #[error("singularity is already a single Cone(L_u)")]
    AlreadyBasic,
    #[error("cone over the trivial Legendrian is a smooth disk")]
    TrivialCone,
    #[error("events {0} and {1} are not an inward-facing cusp pair")]
    CuspsNotInwardFacing(usize, usize),
    #[error("isotopy witness step {step} ({mv}) is invalid")]
    InvalidWitness { step: usize, mv: String },
    #[error("smoothing is only defined on non-orientable surfaces")]
    OrientableSurface,
    #[error("no Cone(L_u) singularity at the requested index")]
    NotBasicSingularity,
    #[error("genus must be at least 1")]
    GenusTooSmall,
    #[error("boundaries do not match for gluing: {0}")]
    BoundaryMismatch(String),
    #[error(transparent)]
    Front(#[from] FrontError),
}

/// One assembly step; `Display` gives the surface-script line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    KleinBase,
    Torus,
    GenusChain(usize),
    Piece(PieceName),
    Cone(Vec<FrontEvent>),
    ConeCap { boundary: usize, model: Vec<FrontEvent> },
    SmoothCap { boundary: usize },
    SplitCone { singularity: usize },
    OneHandle { boundary: usize, right: usize, left: usize },
    Isotopy { boundary: usize, moves: Vec<MoveInstance> },
    MobiusSmoothing { singularity: usize },
    GlueMobiusThreeUmbrellas,
    RemoveDisk,
    GluePiece { boundary: usize, piece: PieceName, piece_boundary: usize },
    Relabel { singularity: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PieceName {
    A,
    B,
    C,
}

impl PieceName {
    pub fn letter(self) -> char {
        match self {
            PieceName::A => 'a',
            PieceName::B => 'b',
            PieceName::C => 'c',
        }
    }

    pub fn from_letter(c: &str) -> Option<Self> {
        match c {
            "a" => Some(PieceName::A),
            "b" => Some(PieceName::B),
            "c" => Some(PieceName::C),
            _ => None,
        }
    }
}

fn compact_word(events: &[FrontEvent]) -> String {
    events.iter().map(|e| format!("{}{}", e.kind.symbol(), e.position)).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::KleinBase => write!(f, "klein_base"),
            Op::Torus => write!(f, "torus"),
            Op::GenusChain(g) => write!(f, "genus_chain {g}"),
            Op::Piece(p) => write!(f, "piece {}", p.letter()),
            Op::Cone(w) => write!(f, "cone {}", compact_word(w)),
            Op::ConeCap { boundary, model } => write!(f, "cone_cap {boundary} {}", compact_word(model)),
            Op::SmoothCap { boundary } => write!(f, "smooth_cap {boundary}"),
            Op::SplitCone { singularity } => write!(f, "split_cone {singularity}"),
            Op::OneHandle { boundary, right, left } => write!(f, "one_handle {boundary} {right} {left}"),
            Op::Isotopy { boundary, moves } => {
                write!(f, "isotopy {boundary}")?;
                for m in moves {
                    write!(f, " {m}")?;
                }
                Ok(())
            }
            Op::MobiusSmoothing { singularity } => write!(f, "mobius_smoothing {singularity}"),
            Op::GlueMobiusThreeUmbrellas => write!(f, "glue_mobius_three_umbrellas"),
            Op::RemoveDisk => write!(f, "remove_disk"),
            Op::GluePiece { boundary, piece, piece_boundary } => {
                write!(f, "glue_piece {boundary} {} {piece_boundary}", piece.letter())
            }
            Op::Relabel { singularity } => write!(f, "relabel {singularity}"),
        }
    }
}

/// A singular Lagrangian surface, possibly with Legendrian boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceComplex {
    pub chi: i64,
    pub orientable: bool,
    /// One knot front per boundary component.
    pub boundary: Vec<FrontDiagram>,
    /// Linking numbers between boundary components `(i, j)` with `i < j`; absent means 0.
    pub linking: BTreeMap<(usize, usize), i64>,
    pub singularities: Vec<Singularity>,
    pub witness: Vec<Op>,
}

impl SurfaceComplex {
    fn closed(chi: i64, orientable: bool, singularities: Vec<Singularity>, witness: Vec<Op>) -> Self {
        SurfaceComplex { chi, orientable, boundary: Vec::new(), linking: BTreeMap::new(), singularities, witness }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Number of `(-2, ±1)` singularities.
    pub fn basic_singularity_count(&self) -> usize {
        self.singularities.iter().filter(|s| s.is_basic()).count()
    }

    pub fn boundary_linking(&self, i: usize, j: usize) -> i64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.linking.get(&key).copied().unwrap_or(0)
    }

    /// `-χ + Σ(tb + 1)`, defined for any complex; equals the Euler number when closed.
    pub fn euler_sum(&self) -> i64 {
        -self.chi + self.singularities.iter().map(|s| s.model_tb + 1).sum::<i64>()
    }

    fn with_step(mut self, op: Op) -> Self {
        self.witness.push(op);
        self
    }

    fn check_boundary(&self, i: usize) -> Result<(), CobordismError> {
        if i < self.boundary.len() {
            Ok(())
        } else {
            Err(CobordismError::BoundaryOutOfRange(i))
        }
    }

    fn check_singularity(&self, i: usize) -> Result<(), CobordismError> {
        if i < self.singularities.len() {
            Ok(())
        } else {
            Err(CobordismError::SingularityOutOfRange(i))
        }
    }

    /// Removes boundary `i`, renumbering the linking table.
    fn drop_boundary(&mut self, i: usize) {
        self.boundary.remove(i);
        let shift = |k: usize| if k > i { k - 1 } else { k };
        self.linking = std::mem::take(&mut self.linking)
            .into_iter()
            .filter(|((a, b), _)| *a != i && *b != i)
            .map(|((a, b), v)| ((shift(a), shift(b)), v))
            .collect();
    }
}

/// Euler number of the disk bundle associated to a closed complex.
pub fn euler_number(s: &SurfaceComplex) -> Result<i64, CobordismError> {
    if !s.is_closed() {
        return Err(CobordismError::OpenBoundary);
    }
    Ok(s.euler_sum())
}

fn knot_invariants(f: &FrontDiagram) -> Result<(i64, i64), CobordismError> {
    if f.component_count() != 1 {
        return Err(FrontError::MultiComponentInput { components: f.component_count() }.into());
    }
    let inv = f.invariants();
    Ok((inv.tb, inv.rot[0]))
}

/// The cone over a Legendrian unknot front, cut off at the unit sphere.
///
/// Its boundary is the front itself. The cone over the trivial Legendrian is a
/// smooth disk and records no singularity.
pub fn cone(front: &FrontDiagram) -> Result<SurfaceComplex, CobordismError> {
    let (tb, rot) = knot_invariants(front)?;
    if !in_unknot_range(tb, rot) {
        return Err(CobordismError::BoundaryNotUnknotCompatible(format!("(tb, rot) = ({tb}, {rot})")));
    }
    let singularities = if tb == -1 { vec![] } else { vec![Singularity::cone(tb, rot)] };
    Ok(SurfaceComplex {
        chi: 1,
        orientable: true,
        boundary: vec![front.clone()],
        linking: BTreeMap::new(),
        singularities,
        witness: vec![Op::Cone(front.events().to_vec())],
    })
}

/// Caps boundary `b` with the cone over `model`.
pub fn cone_cap(s: &SurfaceComplex, b: usize, model: &FrontDiagram) -> Result<SurfaceComplex, CobordismError> {
    s.check_boundary(b)?;
    let (tb, rot) = knot_invariants(model)?;
    let (btb, brot) = knot_invariants(&s.boundary[b])?;
    if !in_unknot_range(tb, rot) {
        return Err(CobordismError::BoundaryNotUnknotCompatible(format!("model (tb, rot) = ({tb}, {rot})")));
    }
    if btb != tb || brot.abs() != rot.abs() {
        return Err(CobordismError::BoundaryNotUnknotCompatible(format!(
            "boundary (tb, rot) = ({btb}, {brot}), model ({tb}, {rot})"
        )));
    }
    let mut out = s.clone();
    out.drop_boundary(b);
    out.chi += 1;
    if tb != -1 {
        out.singularities.push(Singularity::cone(tb, brot));
    }
    Ok(out.with_step(Op::ConeCap { boundary: b, model: model.events().to_vec() }))
}

/// Caps a trivial boundary component with a smooth Lagrangian disk.
pub fn smooth_disk_cap(s: &SurfaceComplex, b: usize) -> Result<SurfaceComplex, CobordismError> {
    let mut out = cone_cap(s, b, &fronts::trivial())?;
    out.witness.pop();
    Ok(out.with_step(Op::SmoothCap { boundary: b }))
}

/// Replaces a Cone(L) singularity with `n = -1 - tb` Cone(L_u) singularities.
pub fn split_cone(s: &SurfaceComplex, i: usize) -> Result<SurfaceComplex, CobordismError> {
    s.check_singularity(i)?;
    let sing = s.singularities[i];
    let n = -1 - sing.model_tb;
    if n <= 0 {
        return Err(CobordismError::TrivialCone);
    }
    if n == 1 {
        return Err(CobordismError::AlreadyBasic);
    }
    let plus = (n + sing.model_rot) / 2;
    let mut out = s.clone();
    let parts = (0..n).map(|k| Singularity::lu(if k < plus { 1 } else { -1 }));
    out.singularities.splice(i..=i, parts);
    Ok(out.with_step(Op::SplitCone { singularity: i }))
}

/// Toggles the open-Whitney-umbrella display flag of a `(-2, ±1)` singularity.
pub fn relabel_umbrella(s: &SurfaceComplex, i: usize) -> Result<SurfaceComplex, CobordismError> {
    s.check_singularity(i)?;
    if !s.singularities[i].is_basic() {
        return Err(CobordismError::NotBasicSingularity);
    }
    let mut out = s.clone();
    out.singularities[i].umbrella = !out.singularities[i].umbrella;
    Ok(out.with_step(Op::Relabel { singularity: i }))
}

/// Outcome of surgering a front along an inward-facing cusp pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleResult {
    pub front: FrontDiagram,
    pub disorienting: bool,
}

/// Joins the right cusp at `right` to the later left cusp at `left` through
/// the horizontal channel between them.
pub fn cusp_handle(f: &FrontDiagram, right: usize, left: usize) -> Result<HandleResult, CobordismError> {
    let events = f.events();
    let bad = || CobordismError::CuspsNotInwardFacing(right, left);
    if right >= left || left >= events.len() {
        return Err(bad());
    }
    if events[right].kind != EventKind::RightCusp || events[left].kind != EventKind::LeftCusp {
        return Err(bad());
    }
    // Number of strands above the channel.
    let mut gap = events[right].position - 1;
    let mut word = events[..right].to_vec();
    for e in &events[right + 1..left] {
        let p = e.position;
        let below = match e.kind {
            EventKind::LeftCusp => {
                if p - 1 <= gap {
                    gap += 2;
                    false
                } else {
                    true
                }
            }
            EventKind::RightCusp | EventKind::Crossing => {
                if p + 1 <= gap {
                    if e.kind == EventKind::RightCusp {
                        gap -= 2;
                    }
                    false
                } else if p > gap {
                    true
                } else {
                    return Err(bad());
                }
            }
        };
        word.push(if below { FrontEvent { kind: e.kind, position: p + 2 } } else { *e });
    }
    if events[left].position - 1 != gap {
        return Err(bad());
    }
    word.extend_from_slice(&events[left + 1..]);
    let disorienting = f.cusp_direction(right) == f.cusp_direction(left);
    let front = FrontDiagram::new(word)?;
    Ok(HandleResult { front, disorienting })
}

/// All inward-facing cusp pairs `(right, left)` of a front.
pub fn inward_cusp_pairs(f: &FrontDiagram) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, e) in f.events().iter().enumerate() {
        if e.kind != EventKind::RightCusp {
            continue;
        }
        for j in i + 1..f.len() {
            if cusp_handle(f, i, j).is_ok() {
                out.push((i, j));
            }
        }
    }
    out
}

/// Attaches a one-handle along two inward-facing cusps of boundary `b`.
pub fn one_handle(s: &SurfaceComplex, b: usize, right: usize, left: usize) -> Result<SurfaceComplex, CobordismError> {
    s.check_boundary(b)?;
    let h = cusp_handle(&s.boundary[b], right, left)?;
    let mut out = s.clone();
    out.chi -= 1;
    if h.disorienting {
        out.orientable = false;
    }
    let inv = h.front.invariants();
    let knots: Vec<FrontDiagram> =
        (0..h.front.component_count()).map(|c| h.front.component_front(c)).collect::<Result<_, _>>()?;
    // Old links to `b` carry over to the first new component.
    let old_links: Vec<((usize, usize), i64)> = out.linking.iter().map(|(k, v)| (*k, *v)).collect();
    out.drop_boundary(b);
    let base = out.boundary.len();
    for ((x, y), v) in old_links {
        if x == b || y == b {
            let other = if x == b { y } else { x };
            let other = if other > b { other - 1 } else { other };
            out.linking.insert((other.min(base), other.max(base)), v);
        }
    }
    for (c, k) in knots.into_iter().enumerate() {
        out.boundary.push(k);
        for d in 0..c {
            let lk = inv.linking[d][c];
            if lk != 0 {
                out.linking.insert((base + d, base + c), lk);
            }
        }
    }
    Ok(out.with_step(Op::OneHandle { boundary: b, right, left }))
}

/// Replaces boundary `b` by the end of a Legendrian isotopy (a trivial cylinder).
pub fn isotopy_cylinder(s: &SurfaceComplex, b: usize, witness: &[MoveInstance]) -> Result<SurfaceComplex, CobordismError> {
    s.check_boundary(b)?;
    let mut cur = s.boundary[b].clone();
    for (step, m) in witness.iter().enumerate() {
        cur = apply_move(&cur, m).map_err(|_| CobordismError::InvalidWitness { step, mv: m.to_string() })?;
    }
    let mut out = s.clone();
    out.boundary[b] = cur;
    Ok(out.with_step(Op::Isotopy { boundary: b, moves: witness.to_vec() }))
}

/// As [`isotopy_cylinder`], additionally checking that the witness ends at `target`.
pub fn isotopy_cylinder_to(
    s: &SurfaceComplex,
    b: usize,
    target: &FrontDiagram,
    witness: &[MoveInstance],
) -> Result<SurfaceComplex, CobordismError> {
    let out = isotopy_cylinder(s, b, witness)?;
    if out.boundary[b].events() != target.events() {
        return Err(CobordismError::InvalidWitness { step: witness.len(), mv: "end".into() });
    }
    Ok(out)
}

/// Replaces a Cone(L_u) singularity of a non-orientable surface with an embedded Möbius strip.
pub fn mobius_smoothing(s: &SurfaceComplex, i: usize) -> Result<SurfaceComplex, CobordismError> {
    if s.orientable {
        return Err(CobordismError::OrientableSurface);
    }
    if i >= s.singularities.len() || !s.singularities[i].is_basic() {
        return Err(CobordismError::NotBasicSingularity);
    }
    let mut out = s.clone();
    out.singularities.remove(i);
    out.chi -= 1;
    Ok(out.with_step(Op::MobiusSmoothing { singularity: i }))
}

/// Index of the first `(-2, ±1)` singularity, if any.
pub fn first_basic(s: &SurfaceComplex) -> Option<usize> {
    s.singularities.iter().position(Singularity::is_basic)
}

/// Removes a small smooth disk, leaving a trivial Legendrian boundary unlinked from the rest.
pub fn remove_disk(s: &SurfaceComplex) -> SurfaceComplex {
    let mut out = s.clone();
    out.chi -= 1;
    out.boundary.push(fronts::trivial());
    out.with_step(Op::RemoveDisk)
}

/// Glues boundary `j` of `t` to boundary `i` of `s` along a trivial cylinder.
pub fn glue(s: &SurfaceComplex, i: usize, t: &SurfaceComplex, j: usize) -> Result<SurfaceComplex, CobordismError> {
    s.check_boundary(i)?;
    t.check_boundary(j)?;
    let (tb1, rot1) = knot_invariants(&s.boundary[i])?;
    let (tb2, rot2) = knot_invariants(&t.boundary[j])?;
    if tb1 != tb2 || rot1.abs() != rot2.abs() {
        return Err(CobordismError::BoundaryMismatch(format!("({tb1}, {rot1}) vs ({tb2}, {rot2})")));
    }
    let mut out = s.clone();
    out.drop_boundary(i);
    let mut rest = t.clone();
    rest.drop_boundary(j);
    let base = out.boundary.len();
    out.boundary.extend(rest.boundary);
    for ((a, b), v) in rest.linking {
        out.linking.insert((a + base, b + base), v);
    }
    out.chi += rest.chi;
    out.orientable &= rest.orientable;
    out.singularities.extend(rest.singularities);
    Ok(out)
}

/// Glues a standard piece into boundary `b`.
pub fn glue_piece(s: &SurfaceComplex, b: usize, piece: PieceName, j: usize) -> Result<SurfaceComplex, CobordismError> {
    let p = standard_piece(piece);
    Ok(glue(s, b, &p, j)?.with_step(Op::GluePiece { boundary: b, piece, piece_boundary: j }))
}

/// Removes a disk from a closed surface and glues in piece (b).
pub fn glue_mobius_three_umbrellas(s: &SurfaceComplex) -> Result<SurfaceComplex, CobordismError> {
    if !s.is_closed() {
        return Err(CobordismError::OpenBoundary);
    }
    let holed = remove_disk(s);
    let mut out = glue(&holed, 0, &standard_piece(PieceName::B), 0)?;
    out.witness.truncate(s.witness.len());
    Ok(out.with_step(Op::GlueMobiusThreeUmbrellas))
}

/// The Clifford torus: closed, orientable, smooth.
pub fn torus() -> SurfaceComplex {
    SurfaceComplex::closed(0, true, vec![], vec![Op::Torus])
}

/// Genus-`g` surface from `g` tori joined in a chain by piece (a).
pub fn genus_chain(g: usize) -> Result<SurfaceComplex, CobordismError> {
    if g < 1 {
        return Err(CobordismError::GenusTooSmall);
    }
    let mut s = torus();
    for _ in 1..g {
        s = remove_disk(&s);
        s = glue(&s, 0, &standard_piece(PieceName::A), 0)?;
        let t = remove_disk(&torus());
        s = glue(&s, 0, &t, 0)?;
    }
    s.witness = vec![Op::GenusChain(g)];
    Ok(s)
}

/// Klein bottle with four Cone(L_u) singularities: piece (c) with both
/// once-linked trivial boundaries closed off by the complement of a Whitney sphere.
pub fn klein_base() -> SurfaceComplex {
    let c = standard_piece(PieceName::C);
    debug_assert_eq!(c.boundary.len(), 2);
    debug_assert_eq!(c.boundary_linking(0, 1).abs(), 1);
    SurfaceComplex::closed(c.chi, false, c.singularities, vec![Op::KleinBase])
}

/// Recipe for a standard piece: cone over an `L_u` chain, split, isotope, one-handle.
struct PieceRecipe {
    summands: usize,
    isotopy: &'static str,
    right: usize,
    left: usize,
}

fn recipe(piece: PieceName) -> PieceRecipe {
    match piece {
        PieceName::A => PieceRecipe { summands: 2, isotopy: PIECE_A_ISOTOPY, right: PIECE_A_HANDLE.0, left: PIECE_A_HANDLE.1 },
        PieceName::B => PieceRecipe { summands: 3, isotopy: PIECE_B_ISOTOPY, right: PIECE_B_HANDLE.0, left: PIECE_B_HANDLE.1 },
        PieceName::C => PieceRecipe { summands: 4, isotopy: PIECE_C_ISOTOPY, right: PIECE_C_HANDLE.0, left: PIECE_C_HANDLE.1 },
    }
}

const PIECE_A_ISOTOPY: &str = "commute:0:0:f commute:1:0:f commute:2:0:f";
const PIECE_A_HANDLE: (usize, usize) = (2, 3);
const PIECE_B_ISOTOPY: &str = "pass-right-down:4:4:f commute:3:0:b commute:6:0:f pass-left-up:2:1:f \
    kink-above:6:3:b commute:4:0:b commute:1:0:f pass-left-down:2:2:b commute:3:0:b commute:0:0:f \
    commute:1:0:f commute:2:0:f";
const PIECE_B_HANDLE: (usize, usize) = (2, 3);
const PIECE_C_ISOTOPY: &str = "commute:0:0:f commute:1:0:f commute:2:0:f commute:3:0:f commute:4:0:f commute:5:0:f \
    commute:6:0:f commute:6:0:f commute:5:0:f commute:4:0:f commute:3:0:f commute:2:0:f \
    commute:7:0:f commute:6:0:f commute:5:0:f commute:4:0:f commute:3:0:f commute:8:0:f \
    commute:7:0:f commute:6:0:f commute:5:0:f commute:4:0:f commute:4:0:f commute:3:0:f \
    commute:2:0:f commute:1:0:f commute:5:0:f commute:4:0:f commute:3:0:f commute:2:0:f \
    commute:6:0:f commute:5:0:f commute:4:0:f commute:3:0:f pass-right-up:6:3:f commute:5:0:f \
    commute:8:0:b kink-below:6:4:b pass-left-down:4:4:f commute:0:0:f commute:1:0:f commute:2:0:f \
    commute:3:0:b commute:2:0:b commute:1:0:b commute:0:0:b commute:6:0:f commute:7:0:f \
    pass-left-up:4:3:b pass-left-up:2:1:f commute:1:0:f commute:4:0:b kink-below:2:2:b commute:2:0:b \
    commute:1:0:b commute:3:0:b commute:2:0:b";
const PIECE_C_HANDLE: (usize, usize) = (2, 3);

/// Builds a standard piece by replaying its recipe through the operations above.
pub fn build_piece(piece: PieceName) -> Result<SurfaceComplex, CobordismError> {
    let r = recipe(piece);
    let moves: Vec<MoveInstance> = r
        .isotopy
        .split_whitespace()
        .map(|t| t.parse().expect("recipe moves are well formed"))
        .collect();
    let mut s = cone(&fronts::lu_chain(r.summands))?;
    s = split_cone(&s, 0)?;
    s = isotopy_cylinder(&s, 0, &moves)?;
    s = one_handle(&s, 0, r.right, r.left)?;
    Ok(s)
}

/// Piece (a), (b) or (c), with its witness collapsed to a single `piece` step.
pub fn standard_piece(piece: PieceName) -> SurfaceComplex {
    let mut s = build_piece(piece).expect("standard piece recipes are valid");
    s.witness = vec![Op::Piece(piece)];
    s
}

pub fn standard_pieces() -> [SurfaceComplex; 3] {
    [standard_piece(PieceName::A), standard_piece(PieceName::B), standard_piece(PieceName::C)]
}

/// Applies one script operation to the current complex (`None` before the first step).
pub fn apply_op(s: Option<&SurfaceComplex>, op: &Op) -> Result<SurfaceComplex, CobordismError> {
    let need = || s.cloned().ok_or(CobordismError::OpenBoundary);
    match op {
        Op::KleinBase => Ok(klein_base()),
        Op::Torus => Ok(torus()),
        Op::GenusChain(g) => genus_chain(*g),
        Op::Piece(p) => Ok(standard_piece(*p)),
        Op::Cone(w) => cone(&FrontDiagram::new(w.clone())?),
        Op::ConeCap { boundary, model } => cone_cap(&need()?, *boundary, &FrontDiagram::new(model.clone())?),
        Op::SmoothCap { boundary } => smooth_disk_cap(&need()?, *boundary),
        Op::SplitCone { singularity } => split_cone(&need()?, *singularity),
        Op::OneHandle { boundary, right, left } => one_handle(&need()?, *boundary, *right, *left),
        Op::Isotopy { boundary, moves } => isotopy_cylinder(&need()?, *boundary, moves),
        Op::MobiusSmoothing { singularity } => mobius_smoothing(&need()?, *singularity),
        Op::GlueMobiusThreeUmbrellas => glue_mobius_three_umbrellas(&need()?),
        Op::RemoveDisk => Ok(remove_disk(&need()?)),
        Op::GluePiece { boundary, piece, piece_boundary } => glue_piece(&need()?, *boundary, *piece, *piece_boundary),
        Op::Relabel { singularity } => relabel_umbrella(&need()?, *singularity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::fronts::{lu_chain, stabilized_unknot, trivial};

    fn tb_rot(f: &FrontDiagram) -> (i64, i64) {
        knot_invariants(f).unwrap()
    }

    #[test]
    fn euler_number_examples() {
        assert_eq!(euler_number(&klein_base()), Ok(-4));
        assert_eq!(euler_number(&torus()), Ok(0));
        let g2 = genus_chain(2).unwrap();
        assert_eq!((g2.chi, g2.singularities.len(), euler_number(&g2)), (-2, 2, Ok(0)));
        assert_eq!(euler_number(&standard_piece(PieceName::A)), Err(CobordismError::OpenBoundary));
    }

    #[test]
    fn standard_pieces_match_captions() {
        let [a, b, c] = standard_pieces();
        for (p, sings, bnd, lk, orientable) in [(&a, 2, 2, 0, true), (&b, 3, 1, 0, false), (&c, 4, 2, 1, true)] {
            assert_eq!(p.chi, 0);
            assert_eq!(p.singularities.len(), sings);
            assert!(p.singularities.iter().all(Singularity::is_basic));
            assert_eq!(p.boundary.len(), bnd);
            assert!(p.boundary.iter().all(|f| tb_rot(f) == (-1, 0)));
            if bnd == 2 {
                assert_eq!(p.boundary_linking(0, 1).abs(), lk);
            }
            assert_eq!(p.orientable, orientable);
        }
    }

    #[test]
    fn cone_cap_examples() {
        let holed = remove_disk(&torus());
        let capped = cone_cap(&holed, 0, &trivial()).unwrap();
        assert!(capped.singularities.is_empty());
        assert_eq!(euler_number(&capped), Ok(0));
        assert_eq!(smooth_disk_cap(&holed, 0).unwrap().singularities, capped.singularities);
        let s = cone(&stabilized_unknot()).unwrap();
        assert_eq!(s.singularities, vec![Singularity::lu(-1)]);
        assert!(matches!(cone_cap(&holed, 0, &stabilized_unknot()), Err(CobordismError::BoundaryNotUnknotCompatible(_))));
        let three = cone(&lu_chain(2)).unwrap();
        assert_eq!(three.euler_sum() + three.chi, -2);
    }

    #[test]
    fn split_cone_examples() {
        let s = cone(&lu_chain(2)).unwrap();
        let t = split_cone(&s, 0).unwrap();
        let rots: Vec<i64> = t.singularities.iter().map(|x| x.model_rot).collect();
        assert_eq!(rots, vec![1, -1]);
        assert_eq!(t.euler_sum(), s.euler_sum());
        let s = cone(&lu_chain(3)).unwrap();
        let t = split_cone(&s, 0).unwrap();
        let mut rots: Vec<i64> = t.singularities.iter().map(|x| x.model_rot).collect();
        rots.sort();
        assert_eq!(rots, vec![-1, 1, 1]);
        assert_eq!(t.euler_sum(), s.euler_sum());
        assert_eq!(split_cone(&t, 0), Err(CobordismError::AlreadyBasic));
        let mut triv = cone(&stabilized_unknot()).unwrap();
        triv.singularities[0] = Singularity::cone(-1, 0);
        assert_eq!(split_cone(&triv, 0), Err(CobordismError::TrivialCone));
    }

    #[test]
    fn one_handle_rejects_bad_cusps() {
        let s = cone(&trivial()).unwrap();
        assert_eq!(one_handle(&s, 0, 0, 1), Err(CobordismError::CuspsNotInwardFacing(0, 1)));
    }

    #[test]
    fn isotopy_cylinder_examples() {
        let s = cone(&stabilized_unknot()).unwrap();
        assert_eq!(isotopy_cylinder(&s, 0, &[]).unwrap().boundary, s.boundary);
        let bad: MoveInstance = "triple:0:1:f".parse().unwrap();
        assert!(matches!(isotopy_cylinder(&s, 0, &[bad]), Err(CobordismError::InvalidWitness { step: 0, .. })));
    }

    #[test]
    fn smoothing_and_gluing() {
        let k = klein_base();
        let d = mobius_smoothing(&k, 0).unwrap();
        assert_eq!((d.chi, d.singularities.len(), euler_number(&d)), (-1, 3, Ok(-2)));
        let v = glue_mobius_three_umbrellas(&k).unwrap();
        assert_eq!((v.chi, v.singularities.len(), euler_number(&v), v.orientable), (-1, 7, Ok(-6), false));
        let vv = glue_mobius_three_umbrellas(&d).unwrap();
        assert_eq!((vv.chi, euler_number(&vv)), (-2, Ok(-4)));
        assert_eq!(mobius_smoothing(&torus(), 0), Err(CobordismError::OrientableSurface));
        let mut bare = klein_base();
        bare.singularities.clear();
        assert_eq!(mobius_smoothing(&bare, 0), Err(CobordismError::NotBasicSingularity));
        assert_eq!(v.witness, vec![Op::KleinBase, Op::GlueMobiusThreeUmbrellas]);
    }

    #[test]
    fn relabel_keeps_bookkeeping() {
        let k = klein_base();
        let r = relabel_umbrella(&k, 2).unwrap();
        assert!(r.singularities[2].umbrella);
        assert_eq!((r.chi, r.orientable, euler_number(&r)), (k.chi, k.orientable, euler_number(&k)));
    }

    #[test]
    fn unknot_range() {
        assert!(in_unknot_range(-1, 0));
        assert!(in_unknot_range(-2, 1));
        assert!(!in_unknot_range(-2, 0));
        assert!(!in_unknot_range(-3, 3));
        assert!(!in_unknot_range(0, 1));
    }
}

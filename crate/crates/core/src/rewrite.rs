//! Legendrian Reidemeister moves as local rewrites of front words.
//!
//! Pattern table (`p` is the `position` field of a [`MoveInstance`]; the
//! left column is the simple side, reached by [`Direction::Backward`]):
//!
//! | move                  | simple side | complex side            |
//! |-----------------------|-------------|-------------------------|
//! | `Kink(Below)`         | (empty)     | `L p+1, X p, R p+1`     |
//! | `Kink(Above)`         | (empty)     | `L p, X p+1, R p`       |
//! | `CuspPass(LeftUp)`    | `L p+1`     | `L p, X p+1, X p`       |
//! | `CuspPass(LeftDown)`  | `L p`       | `L p+1, X p, X p+1`     |
//! | `CuspPass(RightUp)`   | `R p+1`     | `X p, X p+1, R p`       |
//! | `CuspPass(RightDown)` | `R p`       | `X p+1, X p, R p+1`     |
//! | `Triple`              | `X p, X p+1, X p` | `X p+1, X p, X p+1` |
//!
//! The kink is the first move, the cusp passes are the second move in its four
//! rotated positions (rotation about the `z` axis exchanges left and right
//! cusps, rotation about the `x` axis exchanges up and down), and `Triple` is
//! the third move, whose rotations are the same pair of words. The kink word is
//! itself symmetric under rotation about `z`.
//!
//! `Commute` swaps two adjacent events acting on disjoint strand windows
//! (planar isotopy). When a right cusp is followed by a left cusp opening in
//! the gap it leaves, the left cusp can be placed above the closing pair
//! (`Forward`) or below it (`Backward`).

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front::{FrontDiagram, FrontError, FrontEvent, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KinkSide {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CuspPass {
    LeftUp,
    LeftDown,
    RightUp,
    RightDown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    Commute,
    Kink(KinkSide),
    CuspPass(CuspPass),
    Triple,
}

impl MoveKind {
    pub fn is_structural(self) -> bool {
        self == MoveKind::Commute
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn inverse(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A located move: which rewrite, at which event index, on which strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveInstance {
    pub kind: MoveKind,
    /// Index of the first event of the matched window (for kink insertion,
    /// the slice before which the kink is inserted).
    pub site: usize,
    /// Strand parameter `p` of the pattern; unused (0) for commutations.
    pub position: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("move {0:?} is not applicable")]
    MoveNotApplicable(MoveInstance),
    #[error(transparent)]
    Front(#[from] FrontError),
}

const fn l(p: usize) -> FrontEvent {
    FrontEvent::left(p)
}
const fn r(p: usize) -> FrontEvent {
    FrontEvent::right(p)
}
const fn x(p: usize) -> FrontEvent {
    FrontEvent::cross(p)
}

/// Simple and complex sides of a Reidemeister pattern with strand parameter `p`.
fn pattern(kind: MoveKind, p: usize) -> (Vec<FrontEvent>, Vec<FrontEvent>) {
    match kind {
        MoveKind::Kink(KinkSide::Below) => (vec![], vec![l(p + 1), x(p), r(p + 1)]),
        MoveKind::Kink(KinkSide::Above) => (vec![], vec![l(p), x(p + 1), r(p)]),
        MoveKind::CuspPass(CuspPass::LeftUp) => (vec![l(p + 1)], vec![l(p), x(p + 1), x(p)]),
        MoveKind::CuspPass(CuspPass::LeftDown) => (vec![l(p)], vec![l(p + 1), x(p), x(p + 1)]),
        MoveKind::CuspPass(CuspPass::RightUp) => (vec![r(p + 1)], vec![x(p), x(p + 1), r(p)]),
        MoveKind::CuspPass(CuspPass::RightDown) => (vec![r(p)], vec![x(p + 1), x(p), r(p + 1)]),
        MoveKind::Triple => (vec![x(p), x(p + 1), x(p)], vec![x(p + 1), x(p), x(p + 1)]),
        MoveKind::Commute => (vec![], vec![]),
    }
}

const REIDEMEISTER_KINDS: [MoveKind; 7] = [
    MoveKind::Kink(KinkSide::Below),
    MoveKind::Kink(KinkSide::Above),
    MoveKind::CuspPass(CuspPass::LeftUp),
    MoveKind::CuspPass(CuspPass::LeftDown),
    MoveKind::CuspPass(CuspPass::RightUp),
    MoveKind::CuspPass(CuspPass::RightDown),
    MoveKind::Triple,
];

/// Result of swapping `e1; e2` (with `e1` acting on `n` strands), if they commute.
fn commute_pair(e1: FrontEvent, e2: FrontEvent, direction: Direction) -> Option<(FrontEvent, FrontEvent)> {
    let (a1, out1, in1) = (e1.position, e1.width_out(), e1.width_in());
    let (a2, in2, out2) = (e2.position, e2.width_in(), e2.width_out());
    match direction {
        // e2 lies above e1's output window.
        Direction::Forward if a2 + in2 <= a1 => {
            let shifted = (a1 as isize + out2 as isize - in2 as isize) as usize;
            Some((e2, FrontEvent { kind: e1.kind, position: shifted }))
        }
        // e2 lies below e1's output window.
        Direction::Backward if a2 >= a1 + out1 => {
            let shifted = (a2 as isize - (out1 as isize - in1 as isize)) as usize;
            Some((FrontEvent { kind: e2.kind, position: shifted }, e1))
        }
        _ => None,
    }
}

fn strand_counts(events: &[FrontEvent]) -> Vec<usize> {
    let mut counts = Vec::with_capacity(events.len() + 1);
    let mut n = 0isize;
    counts.push(0);
    for e in events {
        n += e.delta();
        counts.push(n as usize);
    }
    counts
}

/// Rewrites the word; returns the new word and the replaced window `(site, old_len, new_len)`.
fn rewrite_word(events: &[FrontEvent], m: &MoveInstance) -> Option<(Vec<FrontEvent>, usize, usize)> {
    let site = m.site;
    if site > events.len() {
        return None;
    }
    if m.kind == MoveKind::Commute {
        if site + 1 >= events.len() {
            return None;
        }
        let (a, b) = commute_pair(events[site], events[site + 1], m.direction)?;
        let mut out = events.to_vec();
        out[site] = a;
        out[site + 1] = b;
        if out == events {
            return None;
        }
        return Some((out, 2, 2));
    }
    if m.position == 0 {
        return None;
    }
    let (simple, complex) = pattern(m.kind, m.position);
    let (from, to) = match m.direction {
        Direction::Forward => (simple, complex),
        Direction::Backward => (complex, simple),
    };
    if site + from.len() > events.len() || events[site..site + from.len()] != from[..] {
        return None;
    }
    let n = strand_counts(events)[site];
    // Strand-existence side conditions for the forward direction.
    let p = m.position;
    let ok = match (m.kind, m.direction) {
        (MoveKind::Kink(_), Direction::Forward) => p <= n,
        (MoveKind::CuspPass(CuspPass::LeftDown), Direction::Forward) => p <= n,
        (MoveKind::CuspPass(CuspPass::RightDown), Direction::Forward) => p + 2 <= n,
        _ => true,
    };
    if !ok {
        return None;
    }
    let mut out = Vec::with_capacity(events.len() + to.len());
    out.extend_from_slice(&events[..site]);
    out.extend_from_slice(&to);
    out.extend_from_slice(&events[site + from.len()..]);
    Some((out, from.len(), to.len()))
}

/// Event-index map from the new word back to the old one, for left cusps
/// whose arcs keep their identity across the move.
fn old_left_index(m: &MoveInstance, old_len: usize, new_len: usize, new_index: usize) -> Option<usize> {
    let site = m.site;
    if new_index < site {
        return Some(new_index);
    }
    if new_index >= site + new_len {
        return Some(new_index + old_len - new_len);
    }
    match m.kind {
        MoveKind::Commute => Some(if new_index == site { site + 1 } else { site }),
        MoveKind::CuspPass(CuspPass::LeftUp | CuspPass::LeftDown) if new_index == site => Some(site),
        _ => None,
    }
}

/// Applies a move, carrying component orientations across.
pub fn apply_move(f: &FrontDiagram, m: &MoveInstance) -> Result<FrontDiagram, RewriteError> {
    let (events, old_len, new_len) =
        rewrite_word(f.events(), m).ok_or(RewriteError::MoveNotApplicable(*m))?;
    let mut out = FrontDiagram::new(events).map_err(|_| RewriteError::MoveNotApplicable(*m))?;
    let mut orientations = vec![Orientation::Positive; out.component_count()];
    let mut fixed = vec![false; out.component_count()];
    for (arc_id, arc) in out.arcs().iter().enumerate() {
        if fixed[arc.component] {
            continue;
        }
        let Some(old_event) = old_left_index(m, old_len, new_len, arc.left_event) else {
            continue;
        };
        let new_ea = out.event_arcs()[arc.left_event];
        let old_ea = f.event_arcs()[old_event];
        let old_arc = if new_ea.upper == arc_id { old_ea.upper } else { old_ea.lower };
        orientations[arc.component] = out.orientation_for(arc_id, f.arc_dir(old_arc));
        fixed[arc.component] = true;
    }
    out.set_orientations(orientations)?;
    Ok(out)
}

/// All applicable moves, in a fixed deterministic order.
pub fn applicable_moves(f: &FrontDiagram) -> Vec<MoveInstance> {
    applicable_on_word(f.events())
}

fn applicable_on_word(events: &[FrontEvent]) -> Vec<MoveInstance> {
    let mut moves = Vec::new();
    let counts = strand_counts(events);
    for site in 0..events.len().saturating_sub(1) {
        for direction in [Direction::Forward, Direction::Backward] {
            let m = MoveInstance { kind: MoveKind::Commute, site, position: 0, direction };
            if rewrite_word(events, &m).is_some() {
                moves.push(m);
            }
        }
    }
    for kind in REIDEMEISTER_KINDS {
        for site in 0..=events.len() {
            for direction in [Direction::Forward, Direction::Backward] {
                let max_p = counts[site] + 1;
                for position in 1..=max_p {
                    let m = MoveInstance { kind, site, position, direction };
                    if rewrite_word(events, &m).is_some() {
                        moves.push(m);
                    }
                }
            }
        }
    }
    moves
}

/// The move undoing `m` on `f` (so applying `m` then the result gives `f` back).
pub fn inverse_move(f: &FrontDiagram, m: &MoveInstance) -> Result<MoveInstance, RewriteError> {
    let (after, _, _) = rewrite_word(f.events(), m).ok_or(RewriteError::MoveNotApplicable(*m))?;
    if m.kind != MoveKind::Commute {
        return Ok(MoveInstance { direction: m.direction.inverse(), ..*m });
    }
    for direction in [Direction::Forward, Direction::Backward] {
        let back = MoveInstance { direction, ..*m };
        if let Some((w, _, _)) = rewrite_word(&after, &back) {
            if w == f.events() {
                return Ok(back);
            }
        }
    }
    Err(RewriteError::MoveNotApplicable(*m))
}

/// Applies a sequence of moves in order.
pub fn apply_sequence(f: &FrontDiagram, moves: &[MoveInstance]) -> Result<FrontDiagram, RewriteError> {
    moves.iter().try_fold(f.clone(), |acc, m| apply_move(&acc, m))
}

/// Invariant key compared before searching: component count, sorted tb,
/// sorted |rot| and sorted |linking|.
pub fn invariant_signature(f: &FrontDiagram) -> (usize, Vec<i64>, Vec<i64>, Vec<i64>) {
    let inv = f.invariants();
    let mut tb: Vec<i64> = inv.components.iter().map(|c| c.tb).collect();
    let mut rot: Vec<i64> = inv.rot.iter().map(|r| r.abs()).collect();
    let mut lk = Vec::new();
    for i in 0..inv.component_count {
        for j in i + 1..inv.component_count {
            lk.push(inv.linking[i][j].abs());
        }
    }
    tb.sort_unstable();
    rot.sort_unstable();
    lk.sort_unstable();
    (inv.component_count, tb, rot, lk)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equivalence {
    /// Moves taking the first front's word to the second's.
    Yes(Vec<MoveInstance>),
    NoWitnessFound,
}

pub const DEFAULT_DEPTH: usize = 6;

/// Bounds for [`equivalent_with_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of Reidemeister moves; commutations are free.
    pub depth: usize,
    /// Words longer than this are not explored.
    pub max_len: Option<usize>,
    /// Cap on stored words per search side.
    pub node_limit: usize,
}

impl SearchLimits {
    pub fn depth(depth: usize) -> Self {
        SearchLimits { depth, max_len: None, node_limit: 400_000 }
    }
}

type Word = Vec<FrontEvent>;

struct SearchSide {
    parent: HashMap<Word, Option<(Word, MoveInstance)>>,
    frontier: Vec<Word>,
    limits: SearchLimits,
}

impl SearchSide {
    fn new(start: Word, limits: SearchLimits) -> Self {
        let mut parent = HashMap::new();
        parent.insert(start.clone(), None);
        SearchSide { parent, frontier: vec![start], limits }
    }

    /// Adds every word reachable from the frontier by commutations.
    fn close_under_commutes(&mut self) {
        let mut queue: VecDeque<Word> = self.frontier.iter().cloned().collect();
        let mut seen: HashSet<Word> = self.frontier.iter().cloned().collect();
        while let Some(w) = queue.pop_front() {
            if self.parent.len() > self.limits.node_limit {
                break;
            }
            for site in 0..w.len().saturating_sub(1) {
                for direction in [Direction::Forward, Direction::Backward] {
                    let m = MoveInstance { kind: MoveKind::Commute, site, position: 0, direction };
                    if let Some((next, _, _)) = rewrite_word(&w, &m) {
                        if !self.parent.contains_key(&next) {
                            self.parent.insert(next.clone(), Some((w.clone(), m)));
                        }
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        let mut all: Vec<Word> = seen.into_iter().collect();
        all.sort();
        self.frontier = all;
    }

    fn expand(&mut self) {
        let mut next_frontier = Vec::new();
        for w in std::mem::take(&mut self.frontier) {
            for m in applicable_on_word(&w) {
                if m.kind.is_structural() {
                    continue;
                }
                if let Some((next, _, _)) = rewrite_word(&w, &m) {
                    if self.limits.max_len.is_some_and(|cap| next.len() > cap) {
                        continue;
                    }
                    if !self.parent.contains_key(&next) {
                        self.parent.insert(next.clone(), Some((w.clone(), m)));
                        next_frontier.push(next);
                    }
                }
            }
            if self.parent.len() > self.limits.node_limit {
                break;
            }
        }
        self.frontier = next_frontier;
    }

    /// Moves from the start word to `w`.
    fn path_to(&self, w: &Word) -> Vec<(Word, MoveInstance)> {
        let mut path = Vec::new();
        let mut cur = w.clone();
        while let Some(Some((prev, m))) = self.parent.get(&cur) {
            path.push((prev.clone(), *m));
            cur = prev.clone();
        }
        path.reverse();
        path
    }
}

/// Bounded bidirectional search for a move sequence from `f` to `g`.
///
/// `depth` bounds the number of Reidemeister moves; commutations are free.
/// A negative answer only means no witness was found.
pub fn equivalent_within(f: &FrontDiagram, g: &FrontDiagram, depth: usize) -> Equivalence {
    equivalent_with_limits(f, g, SearchLimits::depth(depth))
}

pub fn equivalent_with_limits(f: &FrontDiagram, g: &FrontDiagram, limits: SearchLimits) -> Equivalence {
    let depth = limits.depth;
    if f.events() == g.events() {
        return Equivalence::Yes(Vec::new());
    }
    if invariant_signature(f) != invariant_signature(g) {
        return Equivalence::NoWitnessFound;
    }
    let mut fwd = SearchSide::new(f.events().to_vec(), limits);
    let mut bwd = SearchSide::new(g.events().to_vec(), limits);
    let mut used = 0;
    loop {
        fwd.close_under_commutes();
        bwd.close_under_commutes();
        if let Some(meet) = meeting_point(&fwd, &bwd) {
            return Equivalence::Yes(compress_commutes(f.events(), stitch(&fwd, &bwd, &meet)));
        }
        if used >= depth || (fwd.frontier.is_empty() && bwd.frontier.is_empty()) {
            return Equivalence::NoWitnessFound;
        }
        if fwd.parent.len() <= bwd.parent.len() {
            fwd.expand();
        } else {
            bwd.expand();
        }
        used += 1;
    }
}

/// Replaces each maximal run of commutations by a shortest one between the same words.
fn compress_commutes(start: &[FrontEvent], moves: Vec<MoveInstance>) -> Vec<MoveInstance> {
    let mut out = Vec::new();
    let mut word = start.to_vec();
    let mut i = 0;
    while i < moves.len() {
        if moves[i].kind != MoveKind::Commute {
            word = rewrite_word(&word, &moves[i]).expect("witness applies").0;
            out.push(moves[i]);
            i += 1;
            continue;
        }
        let mut end = word.clone();
        let mut j = i;
        while j < moves.len() && moves[j].kind == MoveKind::Commute {
            end = rewrite_word(&end, &moves[j]).expect("witness applies").0;
            j += 1;
        }
        out.extend(shortest_commute_path(&word, &end).unwrap_or_else(|| moves[i..j].to_vec()));
        word = end;
        i = j;
    }
    out
}

fn shortest_commute_path(from: &[FrontEvent], to: &[FrontEvent]) -> Option<Vec<MoveInstance>> {
    let mut parent: HashMap<Word, Option<(Word, MoveInstance)>> = HashMap::new();
    parent.insert(from.to_vec(), None);
    let mut queue = VecDeque::from([from.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if w == to {
            let mut path = Vec::new();
            let mut cur = w;
            while let Some(Some((prev, m))) = parent.get(&cur) {
                path.push(*m);
                cur = prev.clone();
            }
            path.reverse();
            return Some(path);
        }
        for site in 0..w.len().saturating_sub(1) {
            for direction in [Direction::Forward, Direction::Backward] {
                let m = MoveInstance { kind: MoveKind::Commute, site, position: 0, direction };
                if let Some((next, _, _)) = rewrite_word(&w, &m) {
                    if !parent.contains_key(&next) {
                        parent.insert(next.clone(), Some((w.clone(), m)));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

fn meeting_point(a: &SearchSide, b: &SearchSide) -> Option<Word> {
    let mut hits: Vec<&Word> = a.parent.keys().filter(|w| b.parent.contains_key(*w)).collect();
    hits.sort();
    hits.first().map(|w| (*w).clone())
}

fn stitch(fwd: &SearchSide, bwd: &SearchSide, meet: &Word) -> Vec<MoveInstance> {
    let mut moves: Vec<MoveInstance> = fwd.path_to(meet).into_iter().map(|(_, m)| m).collect();
    // Walk the backward path from the meeting word towards g, inverting each step.
    let back = bwd.path_to(meet);
    for (prev, m) in back.into_iter().rev() {
        let prev_front = FrontDiagram::new(prev).expect("search words are valid");
        let (after, _, _) = rewrite_word(prev_front.events(), &m).expect("recorded move applies");
        let after_front = FrontDiagram::new(after).expect("search words are valid");
        let inv = inverse_move(&prev_front, &m).expect("moves are invertible");
        debug_assert!(rewrite_word(after_front.events(), &inv).is_some());
        moves.push(inv);
    }
    moves
}

impl MoveKind {
    fn token(self) -> &'static str {
        match self {
            MoveKind::Commute => "commute",
            MoveKind::Kink(KinkSide::Below) => "kink-below",
            MoveKind::Kink(KinkSide::Above) => "kink-above",
            MoveKind::CuspPass(CuspPass::LeftUp) => "pass-left-up",
            MoveKind::CuspPass(CuspPass::LeftDown) => "pass-left-down",
            MoveKind::CuspPass(CuspPass::RightUp) => "pass-right-up",
            MoveKind::CuspPass(CuspPass::RightDown) => "pass-right-down",
            MoveKind::Triple => "triple",
        }
    }

    fn from_token(t: &str) -> Option<Self> {
        std::iter::once(MoveKind::Commute).chain(REIDEMEISTER_KINDS).find(|k| k.token() == t)
    }
}

/// Text form `kind:site:position:f|b`, e.g. `kink-below:1:1:f`.
impl std::fmt::Display for MoveInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = match self.direction {
            Direction::Forward => 'f',
            Direction::Backward => 'b',
        };
        write!(f, "{}:{}:{}:{}", self.kind.token(), self.site, self.position, d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed move `{0}` (expected kind:site:position:f|b)")]
pub struct MoveParseError(pub String);

impl std::str::FromStr for MoveInstance {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || MoveParseError(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [kind, site, position, dir] = parts[..] else { return Err(err()) };
        let kind = MoveKind::from_token(kind).ok_or_else(err)?;
        let site = site.parse().map_err(|_| err())?;
        let position = position.parse().map_err(|_| err())?;
        let direction = match dir {
            "f" => Direction::Forward,
            "b" => Direction::Backward,
            _ => return Err(err()),
        };
        Ok(MoveInstance { kind, site, position, direction })
    }
}

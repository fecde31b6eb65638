//! Legendrian fronts encoded as slice words.
//!
//! A front is read left to right as a sequence of elementary events acting on
//! a stack of horizontal strands. Strand positions are 1-based and counted
//! from the top, so position 1 is the strand with the largest `z`.
//!
//! * `L p` opens a left cusp, inserting two new strands at positions `p`, `p+1`.
//! * `R p` closes the strands at `p`, `p+1` with a right cusp.
//! * `X p` crosses the strands at `p`, `p+1`.
//!
//! At a crossing the strand moving from `p` to `p+1` descends and so has the
//! lesser slope; it is the over-strand. The sign of an oriented crossing is
//! `+1` when both strands travel in the same horizontal direction and `-1`
//! otherwise, which gives the Legendrian first-move kink writhe `+1`.
//!
//! Every strand lives from one left cusp to one right cusp; such a strand is an
//! *arc*. Arcs are numbered in order of creation (upper before lower).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

impl EventKind {
    pub fn symbol(self) -> char {
        match self {
            EventKind::LeftCusp => 'L',
            EventKind::RightCusp => 'R',
            EventKind::Crossing => 'X',
        }
    }
}

/// One slice of a front word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrontEvent {
    pub kind: EventKind,
    pub position: usize,
}

impl FrontEvent {
    pub const fn left(position: usize) -> Self {
        FrontEvent { kind: EventKind::LeftCusp, position }
    }

    pub const fn right(position: usize) -> Self {
        FrontEvent { kind: EventKind::RightCusp, position }
    }

    pub const fn cross(position: usize) -> Self {
        FrontEvent { kind: EventKind::Crossing, position }
    }

    /// Strand count change caused by this event.
    pub fn delta(self) -> isize {
        match self.kind {
            EventKind::LeftCusp => 2,
            EventKind::RightCusp => -2,
            EventKind::Crossing => 0,
        }
    }

    /// Number of strands consumed from the incoming stack.
    pub(crate) fn width_in(self) -> usize {
        match self.kind {
            EventKind::LeftCusp => 0,
            _ => 2,
        }
    }

    /// Number of strands produced on the outgoing stack.
    pub(crate) fn width_out(self) -> usize {
        match self.kind {
            EventKind::RightCusp => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for FrontEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.symbol(), self.position)
    }
}

/// Orientation of a component relative to its default orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Orientation::Positive => '+',
            Orientation::Negative => '-',
        }
    }
}

/// Vertical direction of travel through a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CuspDirection {
    /// Traversal passes from the upper branch to the lower branch.
    Down,
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("event {index} ({event}): strand count would become negative")]
    NegativeStrandCount { index: usize, event: FrontEvent },
    #[error("front is not closed: {open} strands remain open at the end")]
    NonClosedFront { open: usize },
    #[error("event {index} ({event}): position out of range for {strands} strands")]
    PositionOutOfRange { index: usize, event: FrontEvent, strands: usize },
    #[error("empty front")]
    EmptyFront,
    #[error("expected {expected} orientation signs, got {got}")]
    OrientationCount { expected: usize, got: usize },
    #[error("operation needs a single-component front, got {components} components")]
    MultiComponentInput { components: usize },
    #[error("no orientation-compatible cusp pair for the connected sum")]
    IncompatibleSummands,
    #[error("component index {0} out of range")]
    ComponentOutOfRange(usize),
}

/// Per-event strand bookkeeping derived from the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct EventArcs {
    /// Arc at position `p` (before the event for `R`/`X`, after it for `L`).
    pub upper: usize,
    /// Arc at position `p + 1`.
    pub lower: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Arc {
    pub left_event: usize,
    pub right_event: usize,
    pub component: usize,
    /// +1 if the default orientation runs left to right along this arc.
    pub default_dir: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Topology {
    arcs: Vec<Arc>,
    event_arcs: Vec<EventArcs>,
    /// Arc ids of each component in traversal order (default orientation).
    components: Vec<Vec<usize>>,
    max_strands: usize,
}

/// A validated closed front with one orientation sign per component.
#[derive(Debug, Clone)]
pub struct FrontDiagram {
    events: Vec<FrontEvent>,
    orientations: Vec<Orientation>,
    topo: Topology,
}

impl PartialEq for FrontDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events && self.orientations == other.orientations
    }
}

impl Eq for FrontDiagram {}

impl std::hash::Hash for FrontDiagram {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.events.hash(state);
        self.orientations.hash(state);
    }
}

/// Per-component classical invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInvariants {
    pub writhe: i64,
    pub cusp_count: i64,
    pub tb: i64,
    pub rot: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    /// Signed count of all crossings, including those between components.
    pub writhe: i64,
    pub cusp_count: i64,
    /// Sum of the per-component Thurston-Bennequin numbers.
    pub tb: i64,
    pub rot: Vec<i64>,
    pub component_count: usize,
    pub components: Vec<ComponentInvariants>,
    /// `linking[i][j]`: half the signed count of crossings between `i` and `j`.
    pub linking: Vec<Vec<i64>>,
}

/// Checks a word and builds the front with default orientations.
pub fn validate_front(events: &[FrontEvent]) -> Result<FrontDiagram, FrontError> {
    FrontDiagram::new(events.to_vec())
}

fn analyze(events: &[FrontEvent]) -> Result<Topology, FrontError> {
    if events.is_empty() {
        return Err(FrontError::EmptyFront);
    }
    let mut stack: Vec<usize> = Vec::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new(); // (left_event, right_event)
    let mut event_arcs = Vec::with_capacity(events.len());
    let mut max_strands = 0;
    for (index, &event) in events.iter().enumerate() {
        let n = stack.len();
        let p = event.position;
        match event.kind {
            EventKind::LeftCusp => {
                if p == 0 || p > n + 1 {
                    return Err(FrontError::PositionOutOfRange { index, event, strands: n });
                }
                let upper = arcs.len();
                arcs.push((index, usize::MAX));
                arcs.push((index, usize::MAX));
                stack.insert(p - 1, upper + 1);
                stack.insert(p - 1, upper);
                event_arcs.push(EventArcs { upper, lower: upper + 1 });
            }
            EventKind::RightCusp => {
                if n < 2 {
                    return Err(FrontError::NegativeStrandCount { index, event });
                }
                if p == 0 || p + 1 > n {
                    return Err(FrontError::PositionOutOfRange { index, event, strands: n });
                }
                let upper = stack.remove(p - 1);
                let lower = stack.remove(p - 1);
                arcs[upper].1 = index;
                arcs[lower].1 = index;
                event_arcs.push(EventArcs { upper, lower });
            }
            EventKind::Crossing => {
                if p == 0 || p + 1 > n {
                    return Err(FrontError::PositionOutOfRange { index, event, strands: n });
                }
                let upper = stack[p - 1];
                let lower = stack[p];
                stack.swap(p - 1, p);
                event_arcs.push(EventArcs { upper, lower });
            }
        }
        max_strands = max_strands.max(stack.len());
    }
    if !stack.is_empty() {
        return Err(FrontError::NonClosedFront { open: stack.len() });
    }

    // Cusp partners: every arc has one left-cusp partner and one right-cusp partner.
    let mut left_partner = vec![0usize; arcs.len()];
    let mut right_partner = vec![0usize; arcs.len()];
    for (event, ea) in events.iter().zip(&event_arcs) {
        match event.kind {
            EventKind::LeftCusp => {
                left_partner[ea.upper] = ea.lower;
                left_partner[ea.lower] = ea.upper;
            }
            EventKind::RightCusp => {
                right_partner[ea.upper] = ea.lower;
                right_partner[ea.lower] = ea.upper;
            }
            EventKind::Crossing => {}
        }
    }

    let mut component_of = vec![usize::MAX; arcs.len()];
    let mut default_dir = vec![0i64; arcs.len()];
    let mut components = Vec::new();
    for start in 0..arcs.len() {
        if component_of[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut order = Vec::new();
        let mut arc = start;
        let mut dir = 1i64;
        loop {
            component_of[arc] = c;
            default_dir[arc] = dir;
            order.push(arc);
            arc = if dir == 1 { right_partner[arc] } else { left_partner[arc] };
            dir = -dir;
            if arc == start {
                break;
            }
        }
        components.push(order);
    }

    let arcs = arcs
        .into_iter()
        .enumerate()
        .map(|(i, (l, r))| Arc {
            left_event: l,
            right_event: r,
            component: component_of[i],
            default_dir: default_dir[i],
        })
        .collect();
    Ok(Topology { arcs, event_arcs, components, max_strands })
}

impl FrontDiagram {
    pub fn new(events: Vec<FrontEvent>) -> Result<Self, FrontError> {
        let topo = analyze(&events)?;
        let orientations = vec![Orientation::Positive; topo.components.len()];
        Ok(FrontDiagram { events, orientations, topo })
    }

    pub fn with_orientations(
        events: Vec<FrontEvent>,
        orientations: Vec<Orientation>,
    ) -> Result<Self, FrontError> {
        let mut f = Self::new(events)?;
        f.set_orientations(orientations)?;
        Ok(f)
    }

    pub fn set_orientations(&mut self, orientations: Vec<Orientation>) -> Result<(), FrontError> {
        if orientations.len() != self.topo.components.len() {
            return Err(FrontError::OrientationCount {
                expected: self.topo.components.len(),
                got: orientations.len(),
            });
        }
        self.orientations = orientations;
        Ok(())
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    pub fn orientations(&self) -> &[Orientation] {
        &self.orientations
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.topo.components.len()
    }

    pub fn max_strands(&self) -> usize {
        self.topo.max_strands
    }

    pub(crate) fn arcs(&self) -> &[Arc] {
        &self.topo.arcs
    }

    pub(crate) fn event_arcs(&self) -> &[EventArcs] {
        &self.topo.event_arcs
    }

    /// Arc ids of component `c` in traversal order for its default orientation.
    pub(crate) fn component_arcs(&self, c: usize) -> &[usize] {
        &self.topo.components[c]
    }

    /// Strand count just before event `index` (`index == len()` gives 0).
    /// Arc ids on the strands before each event, top to bottom, plus the final empty slice.
    pub(crate) fn slice_arcs(&self) -> Vec<Vec<usize>> {
        let mut states: Vec<Vec<usize>> = vec![Vec::new()];
        let mut next = 0;
        for e in &self.events {
            let mut st = states.last().expect("nonempty").clone();
            let p = e.position - 1;
            match e.kind {
                EventKind::LeftCusp => {
                    st.insert(p, next + 1);
                    st.insert(p, next);
                    next += 2;
                }
                EventKind::RightCusp => {
                    st.drain(p..p + 2);
                }
                EventKind::Crossing => st.swap(p, p + 1),
            }
            states.push(st);
        }
        states
    }

    pub fn strands_before(&self, index: usize) -> usize {
        self.events[..index].iter().map(|e| e.delta()).sum::<isize>() as usize
    }

    /// Component containing the arcs touched by event `index`.
    pub fn event_component(&self, index: usize) -> usize {
        self.topo.arcs[self.topo.event_arcs[index].upper].component
    }

    /// Actual direction of travel along an arc: +1 rightward, -1 leftward.
    pub(crate) fn arc_dir(&self, arc: usize) -> i64 {
        let a = &self.topo.arcs[arc];
        a.default_dir * self.orientations[a.component].sign()
    }

    /// Direction of travel through the cusp at event `index`, or `None` for a crossing.
    pub fn cusp_direction(&self, index: usize) -> Option<CuspDirection> {
        let ea = self.topo.event_arcs[index];
        let upper_dir = self.arc_dir(ea.upper);
        match self.events[index].kind {
            // Entering on the upper branch means moving right into the tip.
            EventKind::RightCusp => Some(if upper_dir == 1 { CuspDirection::Down } else { CuspDirection::Up }),
            // Entering on the upper branch means moving left into the tip.
            EventKind::LeftCusp => Some(if upper_dir == -1 { CuspDirection::Down } else { CuspDirection::Up }),
            EventKind::Crossing => None,
        }
    }

    /// Sign of the crossing at event `index`, or `None` for a cusp.
    pub fn crossing_sign(&self, index: usize) -> Option<i64> {
        if self.events[index].kind != EventKind::Crossing {
            return None;
        }
        let ea = self.topo.event_arcs[index];
        Some(if self.arc_dir(ea.upper) == self.arc_dir(ea.lower) { 1 } else { -1 })
    }

    pub fn invariants(&self) -> ClassicalInvariants {
        let nc = self.component_count();
        let mut comps = vec![ComponentInvariants { writhe: 0, cusp_count: 0, tb: 0, rot: 0 }; nc];
        let mut down = vec![0i64; nc];
        let mut up = vec![0i64; nc];
        let mut twice_link = vec![vec![0i64; nc]; nc];
        let mut writhe = 0;
        for (i, event) in self.events.iter().enumerate() {
            let ea = self.topo.event_arcs[i];
            let cu = self.topo.arcs[ea.upper].component;
            let cl = self.topo.arcs[ea.lower].component;
            match event.kind {
                EventKind::Crossing => {
                    let s = self.crossing_sign(i).unwrap_or(0);
                    writhe += s;
                    if cu == cl {
                        comps[cu].writhe += s;
                    } else {
                        twice_link[cu][cl] += s;
                        twice_link[cl][cu] += s;
                    }
                }
                _ => {
                    comps[cu].cusp_count += 1;
                    match self.cusp_direction(i) {
                        Some(CuspDirection::Down) => down[cu] += 1,
                        _ => up[cu] += 1,
                    }
                }
            }
        }
        for (c, comp) in comps.iter_mut().enumerate() {
            comp.tb = comp.writhe - comp.cusp_count / 2;
            comp.rot = (down[c] - up[c]) / 2;
        }
        let linking = twice_link
            .iter()
            .map(|row| row.iter().map(|v| v / 2).collect())
            .collect();
        ClassicalInvariants {
            writhe,
            cusp_count: comps.iter().map(|c| c.cusp_count).sum(),
            tb: comps.iter().map(|c| c.tb).sum(),
            rot: comps.iter().map(|c| c.rot).collect(),
            component_count: nc,
            components: comps,
            linking,
        }
    }

    /// Reverses the orientation of one component.
    pub fn reverse_component(&self, c: usize) -> Result<Self, FrontError> {
        if c >= self.component_count() {
            return Err(FrontError::ComponentOutOfRange(c));
        }
        let mut out = self.clone();
        out.orientations[c] = out.orientations[c].flipped();
        Ok(out)
    }

    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        for o in &mut out.orientations {
            *o = o.flipped();
        }
        out
    }

    /// Mirror in `x` (reverse the word, exchanging left and right cusps).
    ///
    /// This is a rotation about the `z` axis of contact 3-space; it keeps tb
    /// and rot. Each arc keeps its traversal direction through the cusps, so
    /// orientations are carried over.
    pub fn mirror_x(&self) -> Self {
        let events: Vec<FrontEvent> = self
            .events
            .iter()
            .rev()
            .map(|e| FrontEvent {
                kind: match e.kind {
                    EventKind::LeftCusp => EventKind::RightCusp,
                    EventKind::RightCusp => EventKind::LeftCusp,
                    EventKind::Crossing => EventKind::Crossing,
                },
                position: e.position,
            })
            .collect();
        let mut out = FrontDiagram::new(events).expect("mirror of a valid front is valid");
        let n = self.events.len();
        // Arc created at the left cusp of event k now ends at event n-1-k.
        let orientations = (0..out.component_count())
            .map(|c| {
                let arc = out.topo.components[c][0];
                let new_arc = &out.topo.arcs[arc];
                let old_right = n - 1 - new_arc.left_event;
                // Find the old arc ending at old_right with the same vertical slot.
                let ea_new = out.topo.event_arcs[new_arc.left_event];
                let is_upper = ea_new.upper == arc;
                let ea_old = self.topo.event_arcs[old_right];
                let old_arc = if is_upper { ea_old.upper } else { ea_old.lower };
                // Rightward in the new front is leftward in the old one.
                let want = -self.arc_dir(old_arc);
                if want == new_arc.default_dir { Orientation::Positive } else { Orientation::Negative }
            })
            .collect();
        out.orientations = orientations;
        out
    }

    /// Reflection `z -> -z`; keeps tb and negates rot.
    pub fn flip_z(&self) -> Self {
        let mut n = 0usize;
        let mut events = Vec::with_capacity(self.events.len());
        for e in &self.events {
            let p = match e.kind {
                EventKind::LeftCusp => n + 2 - e.position,
                _ => n - e.position,
            };
            events.push(FrontEvent { kind: e.kind, position: p });
            n = (n as isize + e.delta()) as usize;
        }
        let mut out = FrontDiagram::new(events).expect("flip of a valid front is valid");
        // Arcs are created in the same order but upper/lower swap within a cusp.
        let orientations = (0..out.component_count())
            .map(|c| {
                let arc = out.topo.components[c][0];
                let old = arc ^ 1;
                let want = self.arc_dir(old);
                if want == out.topo.arcs[arc].default_dir { Orientation::Positive } else { Orientation::Negative }
            })
            .collect();
        out.orientations = orientations;
        out
    }

    /// Extracts one component as a standalone knot front, keeping its orientation.
    pub fn component_front(&self, c: usize) -> Result<Self, FrontError> {
        if c >= self.component_count() {
            return Err(FrontError::ComponentOutOfRange(c));
        }
        let mut stack: Vec<usize> = Vec::new();
        let mut events = Vec::new();
        let mut first_arc_new_id = None;
        let mut new_arc_count = 0usize;
        for (i, e) in self.events.iter().enumerate() {
            let ea = self.topo.event_arcs[i];
            let in_c = |a: usize| self.topo.arcs[a].component == c;
            match e.kind {
                EventKind::LeftCusp => {
                    let upper_slot = stack.iter().take(e.position - 1).filter(|&&a| in_c(a)).count();
                    stack.insert(e.position - 1, ea.lower);
                    stack.insert(e.position - 1, ea.upper);
                    if in_c(ea.upper) {
                        if first_arc_new_id.is_none() {
                            first_arc_new_id = Some((new_arc_count, ea.upper));
                        }
                        new_arc_count += 2;
                        events.push(FrontEvent::left(upper_slot + 1));
                    }
                }
                EventKind::RightCusp | EventKind::Crossing => {
                    let slot = stack.iter().take(e.position - 1).filter(|&&a| in_c(a)).count();
                    if e.kind == EventKind::RightCusp {
                        stack.drain(e.position - 1..e.position + 1);
                    } else {
                        stack.swap(e.position - 1, e.position);
                    }
                    if in_c(ea.upper) && in_c(ea.lower) {
                        events.push(FrontEvent { kind: e.kind, position: slot + 1 });
                    }
                }
            }
        }
        let mut out = FrontDiagram::new(events)?;
        let (new_id, old_id) = first_arc_new_id.expect("component has arcs");
        let want = self.arc_dir(old_id);
        out.orientations[0] =
            if want == out.topo.arcs[new_id].default_dir { Orientation::Positive } else { Orientation::Negative };
        Ok(out)
    }

    /// Orientation sign for component `c` that makes `arc` travel in `dir`.
    pub(crate) fn orientation_for(&self, arc: usize, dir: i64) -> Orientation {
        if self.topo.arcs[arc].default_dir == dir { Orientation::Positive } else { Orientation::Negative }
    }

    pub fn word_string(&self) -> String {
        self.events.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.word_string())?;
        if self.orientations.iter().any(|o| *o == Orientation::Negative) {
            let signs: String = self.orientations.iter().map(|o| o.symbol()).collect();
            write!(f, " orient {signs}")?;
        }
        Ok(())
    }
}

/// Writhe of the oriented front (all crossings).
pub fn writhe(f: &FrontDiagram) -> i64 {
    f.invariants().writhe
}

/// Thurston-Bennequin number; for links, the sum of per-component values.
pub fn thurston_bennequin(f: &FrontDiagram) -> i64 {
    f.invariants().tb
}

/// Rotation number of each component.
pub fn rotation_number(f: &FrontDiagram) -> Vec<i64> {
    f.invariants().rot
}

/// Cusp connected sum of two knot fronts.
///
/// A right cusp of one summand is joined to the first left cusp of the other,
/// which is spliced in immediately after that cusp. The summands' orientations
/// are kept, so tb adds up to `tb(f) + tb(g) + 1` and rot is additive. When no
/// cusp pair is orientation-compatible as given, the `x`-mirrors of the
/// summands (same tb and rot) are tried, then a kinked host.
pub fn front_connected_sum(f: &FrontDiagram, g: &FrontDiagram) -> Result<FrontDiagram, FrontError> {
    for fd in [f, g] {
        if fd.component_count() != 1 {
            return Err(FrontError::MultiComponentInput { components: fd.component_count() });
        }
    }
    let candidates = [
        (f.clone(), g.clone()),
        (f.clone(), g.mirror_x()),
        (g.clone(), f.clone()),
        (g.clone(), f.mirror_x()),
        (f.mirror_x(), g.clone()),
        (f.mirror_x(), g.mirror_x()),
        (g.mirror_x(), f.clone()),
        (g.mirror_x(), f.mirror_x()),
    ];
    for (host, guest) in &candidates {
        if let Some(h) = try_splice(host, guest) {
            return Ok(h);
        }
    }
    // All cusps point the same way: a Legendrian kink on the host supplies a
    // right cusp of the other direction.
    for (host, guest) in [(f, g), (g, f)] {
        for m in crate::rewrite::applicable_moves(host) {
            if !matches!(m.kind, crate::rewrite::MoveKind::Kink(_)) || m.direction != crate::rewrite::Direction::Forward {
                continue;
            }
            let Ok(kinked) = crate::rewrite::apply_move(host, &m) else { continue };
            if let Some(h) = try_splice(&kinked, guest) {
                return Ok(h);
            }
        }
    }
    Err(FrontError::IncompatibleSummands)
}

fn try_splice(host: &FrontDiagram, guest: &FrontDiagram) -> Option<FrontDiagram> {
    let guest_dir = guest.cusp_direction(0).expect("first event is a left cusp");
    (0..host.events.len())
        .find(|&i| host.events[i].kind == EventKind::RightCusp && host.cusp_direction(i) != Some(guest_dir))
        .map(|i| splice(host, i, guest))
}

/// Replaces the right cusp `host[i]` and the leading left cusp of `guest` by
/// letting the two host strands run through the guest.
fn splice(host: &FrontDiagram, i: usize, guest: &FrontDiagram) -> FrontDiagram {
    let p = host.events[i].position;
    let mut events = Vec::with_capacity(host.len() + guest.len() - 2);
    events.extend_from_slice(&host.events[..i]);
    events.extend(guest.events[1..].iter().map(|e| FrontEvent { kind: e.kind, position: e.position + p - 1 }));
    events.extend_from_slice(&host.events[i + 1..]);
    let mut out = FrontDiagram::new(events).expect("splice of valid fronts is valid");
    // The host's first arc keeps its identity (it is created before event i).
    let host_arc = host.topo.components[0][0];
    let dir = host.arc_dir(host_arc);
    let left = host.topo.arcs[host_arc].left_event;
    let slot_upper = host.topo.event_arcs[left].upper == host_arc;
    let ea = out.topo.event_arcs[left];
    let new_arc = if slot_upper { ea.upper } else { ea.lower };
    out.orientations[0] = out.orientation_for(new_arc, dir);
    out
}

/// Named fronts used throughout the crate.
pub mod fronts {
    use super::*;

    /// The trivial Legendrian unknot (tb -1, rot 0).
    pub fn trivial() -> FrontDiagram {
        FrontDiagram::new(vec![FrontEvent::left(1), FrontEvent::right(1)]).expect("valid")
    }

    /// The once-stabilized unknot `L_u` (tb -2, rot -1 with default orientation).
    pub fn stabilized_unknot() -> FrontDiagram {
        FrontDiagram::new(vec![
            FrontEvent::left(1),
            FrontEvent::left(1),
            FrontEvent::right(2),
            FrontEvent::right(1),
        ])
        .expect("valid")
    }

    /// Connected sum of `n >= 1` copies of `L_u` with alternating rotation numbers,
    /// starting from rot +1. The result has tb `-1 - n` and rot `n mod 2`.
    pub fn lu_chain(n: usize) -> FrontDiagram {
        assert!(n >= 1, "need at least one summand");
        let plus = stabilized_unknot().reversed();
        let minus = stabilized_unknot();
        let mut acc = plus.clone();
        for k in 1..n {
            let next = if k % 2 == 0 { &plus } else { &minus };
            acc = front_connected_sum(&acc, next).expect("L_u summands are compatible");
        }
        acc
    }

    /// Legendrian first-move kink inserted into the trivial front.
    pub fn trivial_with_kink() -> FrontDiagram {
        FrontDiagram::new(vec![
            FrontEvent::left(1),
            FrontEvent::left(2),
            FrontEvent::cross(1),
            FrontEvent::right(2),
            FrontEvent::right(1),
        ])
        .expect("valid")
    }
}

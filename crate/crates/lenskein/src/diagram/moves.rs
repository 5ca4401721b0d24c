use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::canon::isomorphic;
use super::faces::{Dart, Faces};
use super::{CrossingId, Diagram, EdgeId, End};
use crate::error::{Error, Result};

/// Ω1 kink parameters: insert a kink on `edge` after `slot` of its passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R1Params {
    pub edge: EdgeId,
    pub slot: usize,
    pub sign: i8,
    pub side: i8,
}

/// Ω2 parameters: push a finger of `edge_a` (from the side of its
/// `a_forward` dart) across `edge_b` within their shared face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R2Params {
    pub edge_a: EdgeId,
    pub a_forward: bool,
    pub slot_a: usize,
    pub edge_b: EdgeId,
    pub b_forward: bool,
    pub slot_b: usize,
    pub a_over: bool,
}

/// Ω3 parameters: flip the triangle face on the given side of `side_edge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R3Params {
    pub side_edge: EdgeId,
    pub side_forward: bool,
}

/// Slide parameters: band-sum `edge` (bordering the outer region) with the
/// surgery curve. `with_fixed` selects the oriented flavour: the coil winds
/// along the fixed orientation (+p to the class) or against it (-p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideParams {
    pub edge: EdgeId,
    pub cut_slot: usize,
    pub with_fixed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    R1Add(R1Params),
    R1Remove { crossing: CrossingId },
    R2Add(R2Params),
    R2Remove { c1: CrossingId, c2: CrossingId },
    R3(R3Params),
    Slide(SlideParams),
    /// Structural reversal of a recorded slide template.
    SlideUndo { crossings: Vec<CrossingId>, passes: Vec<u32> },
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::R1Add(_) | MoveKind::R1Remove { .. } => "R1",
            MoveKind::R2Add(_) | MoveKind::R2Remove { .. } => "R2",
            MoveKind::R3(_) => "R3",
            MoveKind::Slide(_) | MoveKind::SlideUndo { .. } => "SL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
}

impl MoveRecord {
    pub fn new(kind: MoveKind) -> Self {
        MoveRecord { kind }
    }
}

/// Virtual strand ends used while wiring a new crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stub {
    TargetIn,
    TargetOut,
    MoverIn,
    MoverOut,
}

/// Attachment points of a freshly inserted crossing.
pub(crate) struct Inserted {
    pub crossing: CrossingId,
    pub mover_in: End,
    pub mover_out: End,
    pub target_head: EdgeId,
    pub target_tail: EdgeId,
}

impl Diagram {
    /// Insert a crossing where a mover strand crosses `target` after `slot`
    /// of the target's passes. `from_left` is relative to the target's
    /// stored direction. The mover's ends are returned for the caller to
    /// wire into its strand.
    pub(crate) fn insert_crossing(
        &mut self,
        target: EdgeId,
        slot: usize,
        from_left: bool,
        mover_over: bool,
    ) -> Inserted {
        let ccw: [Stub; 4] = if from_left {
            [Stub::TargetIn, Stub::MoverOut, Stub::TargetOut, Stub::MoverIn]
        } else {
            [Stub::TargetIn, Stub::MoverIn, Stub::TargetOut, Stub::MoverOut]
        };
        let under_in = if mover_over { Stub::TargetIn } else { Stub::MoverIn };
        let over_in = if mover_over { Stub::MoverIn } else { Stub::TargetIn };
        let r = ccw.iter().position(|s| *s == under_in).unwrap();
        let mut ports_ccw = [Stub::TargetIn; 4];
        for (i, slot_port) in ports_ccw.iter_mut().enumerate() {
            *slot_port = ccw[(i + r) % 4];
        }
        let over_port = ports_ccw.iter().position(|s| *s == over_in).unwrap() as u8;
        debug_assert!(over_port == 1 || over_port == 3);

        let c = self.new_crossing(over_port);
        let (head, tail) = self.split_edge(target, slot);
        let mut mover_in = End::new(c, 0);
        let mut mover_out = End::new(c, 0);
        for (i, stub) in ports_ccw.iter().enumerate() {
            let end = End::new(c, i as u8);
            match stub {
                Stub::TargetIn => self.set_edge_to(head, end),
                Stub::TargetOut => self.set_edge_from(tail, end),
                Stub::MoverIn => mover_in = end,
                Stub::MoverOut => mover_out = end,
            }
        }
        Inserted { crossing: c, mover_in, mover_out, target_head: head, target_tail: tail }
    }

    /// Apply a move, returning the moved diagram and an inverse record.
    pub fn apply_move(&self, record: &MoveRecord) -> Result<(Diagram, MoveRecord)> {
        let mut d = self.clone();
        let inverse = match &record.kind {
            MoveKind::R1Add(p) => d.r1_add(p)?,
            MoveKind::R1Remove { crossing } => d.r1_remove(*crossing, self)?,
            MoveKind::R2Add(p) => d.r2_add(p)?,
            MoveKind::R2Remove { c1, c2 } => d.r2_remove(*c1, *c2, self)?,
            MoveKind::R3(p) => d.r3(p)?,
            MoveKind::Slide(p) => d.slide(p)?,
            MoveKind::SlideUndo { crossings, passes } => d.slide_undo(crossings, passes)?,
        };
        Ok((d, inverse))
    }

    fn r1_add(&mut self, p: &R1Params) -> Result<MoveRecord> {
        let edge = self.edges.get(&p.edge).ok_or(Error::PatternMismatch("R1"))?;
        if p.slot > edge.passes.len() {
            return Err(Error::PatternMismatch("R1"));
        }
        // (sign, side) -> (loop from-port, loop to-port, through-in, through-out, over_in)
        let (lf, lt, tin, tout, over_in) = match (p.sign, p.side) {
            (1, 1) => (2u8, 3u8, 0u8, 1u8, 3u8),
            (1, -1) => (1, 0, 3, 2, 3),
            (-1, 1) => (2, 1, 0, 3, 1),
            (-1, -1) => (3, 0, 1, 2, 1),
            _ => return Err(Error::PatternMismatch("R1")),
        };
        let c = self.new_crossing(over_in);
        let (head, tail) = self.split_edge(p.edge, p.slot);
        self.set_edge_to(head, End::new(c, tin));
        self.set_edge_from(tail, End::new(c, tout));
        let l = self.new_edge();
        self.set_edge_from(l, End::new(c, lf));
        self.set_edge_to(l, End::new(c, lt));
        Ok(MoveRecord::new(MoveKind::R1Remove { crossing: c }))
    }

    /// The loop edge of a kink crossing, if any.
    pub(crate) fn kink_loop(&self, c: CrossingId) -> Option<EdgeId> {
        let cr = self.crossings.get(&c)?;
        for e in cr.ports {
            let edge = &self.edges[&e];
            if let Some((from, to)) = edge.ends {
                if from.c == c && to.c == c && from.port != (to.port + 2) % 4 {
                    return Some(e);
                }
            }
        }
        None
    }

    fn r1_remove(&mut self, c: CrossingId, before: &Diagram) -> Result<MoveRecord> {
        let l = self.kink_loop(c).ok_or(Error::PatternMismatch("R1"))?;
        if !self.edges[&l].passes.is_empty() {
            return Err(Error::GateInMoveRegion);
        }
        let sign = self.crossings[&c].sign();
        self.splice_out_crossing(c);
        // reconstruct the inverse by search: a kink back on the spliced
        // strand must restore the original diagram
        for (&e, edge) in self.edges.clone().iter() {
            for slot in 0..=edge.passes.len() {
                for side in [1i8, -1] {
                    let params = R1Params { edge: e, slot, sign, side };
                    if let Ok((redone, _)) = self.apply_move(&MoveRecord::new(MoveKind::R1Add(params.clone()))) {
                        if isomorphic(&redone, before) {
                            return Ok(MoveRecord::new(MoveKind::R1Add(params)));
                        }
                    }
                }
            }
        }
        Err(Error::PatternMismatch("R1 inverse reconstruction"))
    }

    fn r2_add(&mut self, p: &R2Params) -> Result<MoveRecord> {
        let (ea, eb) = (p.edge_a, p.edge_b);
        if !self.edges.contains_key(&ea) || !self.edges.contains_key(&eb) || ea == eb {
            return Err(Error::PatternMismatch("R2"));
        }
        if p.slot_a > self.edges[&ea].passes.len() || p.slot_b > self.edges[&eb].passes.len() {
            return Err(Error::PatternMismatch("R2"));
        }
        let faces = Faces::build(self);
        let da = Dart { edge: ea, forward: p.a_forward };
        let db = Dart { edge: eb, forward: p.b_forward };
        if faces.face(da) != faces.face(db) {
            return Err(Error::PatternMismatch("R2"));
        }
        if !self.same_cell(&faces, faces.face(da), (da, p.slot_a), (db, p.slot_b)) {
            return Err(Error::GateInMoveRegion);
        }

        // the finger crosses e_b from the face side (the dart's left)
        let first_from_left = p.b_forward;
        let (c1, c2) = if p.b_forward {
            // along the stored direction c1 comes first: insert c2 first
            let i2 = self.insert_crossing(eb, p.slot_b, !first_from_left, p.a_over);
            let i1 = self.insert_crossing(i2.target_head, p.slot_b, first_from_left, p.a_over);
            (i1, i2)
        } else {
            let i1 = self.insert_crossing(eb, p.slot_b, first_from_left, p.a_over);
            let i2 = self.insert_crossing(i1.target_head, p.slot_b, !first_from_left, p.a_over);
            (i1, i2)
        };
        let (head, tail) = self.split_edge(ea, p.slot_a);
        self.set_edge_to(head, c1.mover_in);
        let mid = self.new_edge();
        self.set_edge_from(mid, c1.mover_out);
        self.set_edge_to(mid, c2.mover_in);
        self.set_edge_from(tail, c2.mover_out);
        Ok(MoveRecord::new(MoveKind::R2Remove { c1: c1.crossing, c2: c2.crossing }))
    }

    /// The two bigon side edges between c1 and c2, if they bound a 2-face.
    fn bigon_edges(&self, c1: CrossingId, c2: CrossingId) -> Option<(EdgeId, EdgeId)> {
        if c1 == c2 || !self.crossings.contains_key(&c1) || !self.crossings.contains_key(&c2) {
            return None;
        }
        let faces = Faces::build(self);
        for walk in &faces.walks {
            if walk.len() != 2 {
                continue;
            }
            let (x, y) = (walk[0].edge, walk[1].edge);
            if x == y {
                continue;
            }
            let touches = |e: EdgeId| {
                let (f, t) = self.edges[&e].ends.unwrap();
                (f.c == c1 && t.c == c2) || (f.c == c2 && t.c == c1)
            };
            if touches(x) && touches(y) {
                return Some((x, y));
            }
        }
        None
    }

    fn over_at(&self, c: CrossingId, e: EdgeId) -> Option<bool> {
        let cr = self.crossings.get(&c)?;
        let pos = cr.ports.iter().position(|&q| q == e)? as u8;
        Some(pos == cr.over_in || pos == (cr.over_in + 2) % 4)
    }

    fn r2_remove(&mut self, c1: CrossingId, c2: CrossingId, before: &Diagram) -> Result<MoveRecord> {
        let (x, y) = self.bigon_edges(c1, c2).ok_or(Error::PatternMismatch("R2"))?;
        if !self.edges[&x].passes.is_empty() || !self.edges[&y].passes.is_empty() {
            return Err(Error::GateInMoveRegion);
        }
        let x_over_1 = self.over_at(c1, x).ok_or(Error::PatternMismatch("R2"))?;
        let x_over_2 = self.over_at(c2, x).ok_or(Error::PatternMismatch("R2"))?;
        if x_over_1 != x_over_2 {
            return Err(Error::PatternMismatch("R2"));
        }
        self.splice_out_crossing(c1);
        self.splice_out_crossing(c2);
        // inverse by search over shared-face dart pairs and slots
        let faces = Faces::build(self);
        let mut darts: Vec<Dart> = Vec::new();
        for (&e, _) in self.edges.iter() {
            darts.push(Dart { edge: e, forward: true });
            darts.push(Dart { edge: e, forward: false });
        }
        for &da in &darts {
            for &db in &darts {
                if da.edge == db.edge || faces.face(da) != faces.face(db) {
                    continue;
                }
                for slot_a in 0..=self.edges[&da.edge].passes.len() {
                    for slot_b in 0..=self.edges[&db.edge].passes.len() {
                        for a_over in [true, false] {
                            let params = R2Params {
                                edge_a: da.edge,
                                a_forward: da.forward,
                                slot_a,
                                edge_b: db.edge,
                                b_forward: db.forward,
                                slot_b,
                                a_over,
                            };
                            if let Ok((redone, _)) = self.apply_move(&MoveRecord::new(MoveKind::R2Add(params.clone()))) {
                                if isomorphic(&redone, before) {
                                    return Ok(MoveRecord::new(MoveKind::R2Add(params)));
                                }
                            }
                        }
                    }
                }
            }
        }
        Err(Error::PatternMismatch("R2 inverse reconstruction"))
    }

    /// Flip a triangle: the three crossings keep their internal structure,
    /// only the side edges and the six outside stubs re-connect.
    fn r3(&mut self, p: &R3Params) -> Result<MoveRecord> {
        if !self.edges.contains_key(&p.side_edge) {
            return Err(Error::PatternMismatch("R3"));
        }
        let faces = Faces::build(self);
        let dart = Dart { edge: p.side_edge, forward: p.side_forward };
        let f = faces.face(dart);
        let walk = faces.walks[f].clone();
        if walk.len() != 3 {
            return Err(Error::PatternMismatch("R3"));
        }
        let side_edges: Vec<EdgeId> = walk.iter().map(|d| d.edge).collect();
        if side_edges.iter().any(|e| !self.edges[e].passes.is_empty()) {
            return Err(Error::GateInMoveRegion);
        }
        let mut corners: Vec<CrossingId> = Vec::new();
        for e in &side_edges {
            let (from, to) = self.edges[e].ends.ok_or(Error::PatternMismatch("R3"))?;
            corners.push(from.c);
            corners.push(to.c);
        }
        corners.sort();
        corners.dedup();
        if corners.len() != 3 {
            return Err(Error::PatternMismatch("R3"));
        }

        // the top strand: a side edge over at both of its corners
        let t = *side_edges
            .iter()
            .find(|&&e| {
                let (from, to) = self.edges[&e].ends.unwrap();
                self.over_at(from.c, e) == Some(true) && self.over_at(to.c, e) == Some(true)
            })
            .ok_or(Error::PatternMismatch("R3"))?;
        let (t_from, t_to) = self.edges[&t].ends.unwrap();
        let (z, y) = (t_from.c, t_to.c); // T runs z -> y
        let x = *corners.iter().find(|&&c| c != z && c != y).unwrap();

        // rewire one strand through (first, second) so it passes them in
        // the opposite order; `side` is the connecting edge
        let swap_strand = |d: &mut Diagram, first: CrossingId, second: CrossingId, side: EdgeId, in1: u8, in2: u8| {
            // strand currently: ... -> first(in1) -> side -> second(in2) -> ...
            let out1 = (in1 + 2) % 4;
            let out2 = (in2 + 2) % 4;
            let stub_in = d.edge_with_to(End::new(first, in1));
            let stub_out = d.edge_with_from(End::new(second, out2));
            d.set_edge_to(stub_in, End::new(second, in2));
            d.set_edge_from(stub_out, End::new(first, out1));
            let edge = d.edges.get_mut(&side).unwrap();
            edge.ends = Some((End::new(second, out2), End::new(first, in1)));
            d.crossings.get_mut(&second).unwrap().ports[out2 as usize] = side;
            d.crossings.get_mut(&first).unwrap().ports[in1 as usize] = side;
        };

        // T: over strand at z and y, currently z -> y
        let t_in_z = self.crossings[&z].over_in;
        let t_in_y = self.crossings[&y].over_in;
        swap_strand(self, z, y, t, t_in_z, t_in_y);

        // B: the strand shared by x and y (side edge between them)
        let b_side = *side_edges
            .iter()
            .find(|&&e| {
                let (f2, t2) = self.edges[&e].ends.unwrap();
                (f2.c == x && t2.c == y) || (f2.c == y && t2.c == x)
            })
            .ok_or(Error::PatternMismatch("R3"))?;
        // B is the under strand at y (T is over there); at x it may be either
        let (b_first, b_second) = {
            let (f2, _) = self.edges[&b_side].ends.unwrap();
            if f2.c == x {
                (x, y)
            } else {
                (y, x)
            }
        };
        let b_in_first = self.strand_in_port(b_first, b_side);
        let b_in_second = self.strand_in_port_to(b_second, b_side);
        swap_strand(self, b_first, b_second, b_side, b_in_first, b_in_second);

        // M: the strand shared by x and z
        let m_side = *side_edges
            .iter()
            .find(|&&e| {
                let (f2, t2) = self.edges[&e].ends.unwrap();
                (f2.c == x && t2.c == z) || (f2.c == z && t2.c == x)
            })
            .ok_or(Error::PatternMismatch("R3"))?;
        let (m_first, m_second) = {
            let (f2, _) = self.edges[&m_side].ends.unwrap();
            if f2.c == x {
                (x, z)
            } else {
                (z, x)
            }
        };
        let m_in_first = self.strand_in_port(m_first, m_side);
        let m_in_second = self.strand_in_port_to(m_second, m_side);
        swap_strand(self, m_first, m_second, m_side, m_in_first, m_in_second);

        // inverse: flip the new triangle, found on a side of the t edge
        let faces2 = Faces::build(self);
        for forward in [true, false] {
            let d2 = Dart { edge: t, forward };
            let w = &faces2.walks[faces2.face(d2)];
            if w.len() == 3 && w.iter().any(|dd| dd.edge == b_side) && w.iter().any(|dd| dd.edge == m_side) {
                return Ok(MoveRecord::new(MoveKind::R3(R3Params { side_edge: t, side_forward: forward })));
            }
        }
        Err(Error::PatternMismatch("R3 inverse reconstruction"))
    }

    /// The in-port of the strand whose outgoing side edge is `e` at crossing `c`.
    fn strand_in_port(&self, c: CrossingId, e: EdgeId) -> u8 {
        let cr = &self.crossings[&c];
        let pos = cr.ports.iter().position(|&q| q == e).unwrap() as u8;
        // e leaves at pos (an out port); the in port is opposite
        (pos + 2) % 4
    }

    /// The in-port of the strand whose incoming side edge is `e` at crossing `c`.
    fn strand_in_port_to(&self, c: CrossingId, e: EdgeId) -> u8 {
        let cr = &self.crossings[&c];
        let pos = cr.ports.iter().position(|&q| q == e).unwrap() as u8;
        pos
    }

    pub(crate) fn slide_undo(&mut self, crossings: &[CrossingId], passes: &[u32]) -> Result<MoveRecord> {
        for &p in passes {
            self.remove_pass(p);
        }
        for &c in crossings {
            if self.crossings.contains_key(&c) {
                self.splice_out_crossing(c);
            }
        }
        Ok(MoveRecord::new(MoveKind::Slide(SlideParams { edge: 0, cut_slot: 0, with_fixed: true })))
    }

    /// Positions `(dart, slot)` lie in the same cell of face `f`: no chord
    /// of the gate ray through the face separates them, so a finger swept
    /// between them avoids the puncture's disk.
    fn same_cell(&self, faces: &Faces, f: usize, a: (Dart, usize), b: (Dart, usize)) -> bool {
        let walk = &faces.walks[f];
        #[derive(PartialEq, Eq, Clone, Copy)]
        enum Pt {
            Seg(usize, usize),
            Pass(u32),
        }
        let mut pts: Vec<Pt> = Vec::new();
        for (di, dart) in walk.iter().enumerate() {
            let edge = &self.edges[&dart.edge];
            let n = edge.passes.len();
            for k in 0..=n {
                pts.push(Pt::Seg(di, k));
                if k < n {
                    let idx = if dart.forward { k } else { n - 1 - k };
                    pts.push(Pt::Pass(edge.passes[idx]));
                }
            }
        }
        let pos_of = |dart: Dart, slot: usize| -> Option<usize> {
            let mut best = None;
            for (di, d) in walk.iter().enumerate() {
                if *d == dart {
                    let n = self.edges[&dart.edge].passes.len();
                    let seg = if dart.forward { slot } else { n - slot };
                    best = pts.iter().position(|p| *p == Pt::Seg(di, seg));
                    break;
                }
            }
            best
        };
        let Some(pa) = pos_of(a.0, a.1) else { return false };
        let Some(pb) = pos_of(b.0, b.1) else { return false };
        let mut chords: Vec<(usize, usize)> = Vec::new();
        for w in self.gate.windows(2) {
            let u = pts.iter().position(|p| *p == Pt::Pass(w[0]));
            let v = pts.iter().position(|p| *p == Pt::Pass(w[1]));
            if let (Some(u), Some(v)) = (u, v) {
                chords.push((u, v));
            }
        }
        let between = |u: usize, x: usize, v: usize| -> bool {
            if u <= v {
                x > u && x < v
            } else {
                x > u || x < v
            }
        };
        for (u, v) in chords {
            if between(u, pa, v) != between(u, pb, v) {
                return false;
            }
        }
        true
    }
}

/// Move classes for the randomized walker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveClass {
    R1Up,
    R1Down,
    R2Up,
    R2Down,
    R3,
    Slide,
}

impl MoveClass {
    pub const ALL: [MoveClass; 6] = [
        MoveClass::R1Up,
        MoveClass::R1Down,
        MoveClass::R2Up,
        MoveClass::R2Down,
        MoveClass::R3,
        MoveClass::Slide,
    ];
}

/// Apply up to `n` random applicable moves from the allowed classes.
/// Deterministic in the seed; inapplicable picks are skipped with bounded
/// retries. Returns the final diagram and the replayable records.
pub fn random_moves(d: &Diagram, n: usize, seed: u64, allowed: &[MoveClass]) -> (Diagram, Vec<MoveRecord>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut records = Vec::new();
    let mut budget = n * 24;
    while records.len() < n && budget > 0 {
        budget -= 1;
        if allowed.is_empty() || cur.is_empty() {
            break;
        }
        let class = allowed[rng.random_range(0..allowed.len())];
        let Some(record) = propose(&cur, class, &mut rng) else { continue };
        if let Ok((next, _)) = cur.apply_move(&record) {
            debug_assert_eq!(next.validate(), Vec::<String>::new(), "move {record:?} broke validity");
            cur = next;
            records.push(record);
        }
    }
    (cur, records)
}

fn propose(d: &Diagram, class: MoveClass, rng: &mut ChaCha8Rng) -> Option<MoveRecord> {
    let edges: Vec<EdgeId> = d.edges.keys().copied().collect();
    let pick = |rng: &mut ChaCha8Rng, v: &[EdgeId]| v[rng.random_range(0..v.len())];
    match class {
        MoveClass::R1Up => {
            let e = pick(rng, &edges);
            let slot = rng.random_range(0..=d.edges[&e].passes.len());
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            let side = if rng.random_bool(0.5) { 1 } else { -1 };
            Some(MoveRecord::new(MoveKind::R1Add(R1Params { edge: e, slot, sign, side })))
        }
        MoveClass::R1Down => {
            let kinks: Vec<CrossingId> = d
                .crossings
                .keys()
                .copied()
                .filter(|&c| d.kink_loop(c).map_or(false, |l| d.edges[&l].passes.is_empty()))
                .collect();
            if kinks.is_empty() {
                return None;
            }
            let c = kinks[rng.random_range(0..kinks.len())];
            Some(MoveRecord::new(MoveKind::R1Remove { crossing: c }))
        }
        MoveClass::R2Up => {
            let faces = Faces::build(d);
            let mut candidates: Vec<(Dart, Dart)> = Vec::new();
            for walk in &faces.walks {
                for i in 0..walk.len() {
                    for j in 0..walk.len() {
                        if i != j && walk[i].edge != walk[j].edge {
                            candidates.push((walk[i], walk[j]));
                        }
                    }
                }
            }
            if candidates.is_empty() {
                return None;
            }
            let (da, db) = candidates[rng.random_range(0..candidates.len())];
            let slot_a = rng.random_range(0..=d.edges[&da.edge].passes.len());
            let slot_b = rng.random_range(0..=d.edges[&db.edge].passes.len());
            Some(MoveRecord::new(MoveKind::R2Add(R2Params {
                edge_a: da.edge,
                a_forward: da.forward,
                slot_a,
                edge_b: db.edge,
                b_forward: db.forward,
                slot_b,
                a_over: rng.random_bool(0.5),
            })))
        }
        MoveClass::R2Down => {
            let faces = Faces::build(d);
            let mut bigons: Vec<(CrossingId, CrossingId)> = Vec::new();
            for walk in &faces.walks {
                if walk.len() == 2 && walk[0].edge != walk[1].edge {
                    let (f1, t1) = d.edges[&walk[0].edge].ends?;
                    bigons.push((f1.c, t1.c));
                }
            }
            if bigons.is_empty() {
                return None;
            }
            let (c1, c2) = bigons[rng.random_range(0..bigons.len())];
            Some(MoveRecord::new(MoveKind::R2Remove { c1, c2 }))
        }
        MoveClass::R3 => {
            let faces = Faces::build(d);
            let mut tris: Vec<Dart> = Vec::new();
            for walk in &faces.walks {
                if walk.len() == 3 {
                    tris.push(walk[0]);
                }
            }
            if tris.is_empty() {
                return None;
            }
            let dart = tris[rng.random_range(0..tris.len())];
            Some(MoveRecord::new(MoveKind::R3(R3Params { side_edge: dart.edge, side_forward: dart.forward })))
        }
        MoveClass::Slide => {
            let sites = d.slide_sites();
            if sites.is_empty() {
                return None;
            }
            let e = sites[rng.random_range(0..sites.len())];
            let slot = rng.random_range(0..=d.edges[&e].passes.len());
            Some(MoveRecord::new(MoveKind::Slide(SlideParams {
                edge: e,
                cut_slot: slot,
                with_fixed: rng.random_bool(0.5),
            })))
        }
    }
}
